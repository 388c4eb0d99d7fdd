//! Browser entry points. Each binding returns JSON text; the plain functions
//! underneath are what the tests drive.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use castscope_core::analysis::{rank, select_outliers, OutlierMode};
use castscope_core::corpus::SourceFile;
use castscope_core::entropy::{score_subtokens, ProbabilityModel};
use castscope_core::report::{round_sig12, CastReportEntry};
use castscope_core::subtokens::{destination_tokens, subtoken_list, SubtokenOptions};
use castscope_core::syntax::{extract_corpus, tokenize, ExtractOptions};

/// Name given to the pasted snippet so ids read `snippet.cc:line:col:kind`.
pub const SNIPPET_PATH: &str = "snippet.cc";

#[derive(Debug, Serialize)]
pub struct AnalyzedCast {
    #[serde(flatten)]
    pub entry: CastReportEntry,
    pub id: String,
    pub is_outlier: bool,
}

#[derive(Debug, Serialize)]
pub struct KindSummary {
    pub kind: String,
    pub population: usize,
    pub mean: f64,
    pub stddev: f64,
    pub threshold: f64,
    pub outliers: usize,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub casts: Vec<AnalyzedCast>,
    pub kinds: Vec<KindSummary>,
    pub warnings: Vec<String>,
}

/// Extract, score and flag outliers in one pasted C++ snippet.
pub fn analyze_source(source: &str, model: &str, mode: &str) -> Result<Analysis, String> {
    let model: ProbabilityModel = model.parse()?;
    let mode: OutlierMode = mode.parse()?;
    let files = [SourceFile::new(SNIPPET_PATH, source)];
    let extraction = extract_corpus(&files, ExtractOptions { parallel: false });
    let mut entries: Vec<CastReportEntry> = extraction
        .records
        .iter()
        .map(|r| CastReportEntry::from_record(r, SubtokenOptions::default()))
        .collect();
    for e in &mut entries {
        e.apply_score(model);
    }
    let ranked = rank(entries.iter().filter(|e| e.is_scored()).cloned());
    let sets = select_outliers(&ranked, mode);
    let outlier_ids: std::collections::BTreeSet<String> = sets
        .values()
        .flat_map(|s| s.members.iter().map(CastReportEntry::id))
        .collect();
    let kinds = sets
        .values()
        .map(|s| KindSummary {
            kind: s.kind.keyword().to_string(),
            population: s.population,
            mean: round_sig12(s.mean),
            stddev: round_sig12(s.stddev),
            threshold: round_sig12(s.threshold),
            outliers: s.members.len(),
        })
        .collect();
    let casts = entries
        .into_iter()
        .map(|entry| {
            let id = entry.id();
            AnalyzedCast {
                is_outlier: outlier_ids.contains(&id),
                id,
                entry,
            }
        })
        .collect();
    let warnings = extraction
        .warnings
        .iter()
        .map(|(file, w)| format!("{file}:{w}"))
        .collect();
    Ok(Analysis { casts, kinds, warnings })
}

#[derive(Debug, Serialize)]
pub struct PairScore {
    pub source_subtokens: Vec<String>,
    pub dest_subtokens: Vec<String>,
    pub h_source: f64,
    pub h_joint: f64,
    pub ce: f64,
}

/// Score a source expression against a destination, both given as C++ text.
/// A declaration such as `int* count` is reduced to its declared name.
pub fn score_pair(source: &str, destination: &str, model: &str) -> Result<PairScore, String> {
    let model: ProbabilityModel = model.parse()?;
    let opts = SubtokenOptions::default();
    let src_tokens = tokenize(source);
    let dst_tokens = tokenize(destination);
    let src = subtoken_list(&src_tokens, opts);
    let dst = subtoken_list(destination_tokens(&dst_tokens), opts);
    let score = score_subtokens(&src, &dst, model).map_err(|reason| match reason.as_str() {
        "empty_source" => "the source has no subtokens".to_string(),
        "empty_destination" => "the destination has no subtokens".to_string(),
        other => other.to_string(),
    })?;
    Ok(PairScore {
        source_subtokens: src,
        dest_subtokens: dst,
        h_source: round_sig12(score.h_source),
        h_joint: round_sig12(score.h_joint),
        ce: round_sig12(score.ce),
    })
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsError> {
    let value = result.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// JSON `Analysis` for a snippet. `model` is `uniform` or `frequency`,
/// `mode` is `gaussian` or `empirical`.
#[wasm_bindgen]
pub fn analyze(source: &str, model: &str, mode: &str) -> Result<String, JsError> {
    to_js(analyze_source(source, model, mode))
}

/// JSON `PairScore` for a source and destination.
#[wasm_bindgen]
pub fn conditional_entropy(source: &str, destination: &str, model: &str) -> Result<String, JsError> {
    to_js(score_pair(source, destination, model))
}

/// Review sample size for a population at the given confidence and margin.
#[wasm_bindgen]
pub fn sample_size(population: u32, confidence: f64, margin: f64, p: f64) -> Result<u32, JsError> {
    castscope_core::analysis::sample_size(population as usize, confidence, margin, p)
        .map(|n| n as u32)
        .map_err(|e| JsError::new(&e.to_string()))
}
