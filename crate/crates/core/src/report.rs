//! On-disk formats: the versioned casts document, ranked and scatter CSVs,
//! the statistics table, outlier and sample documents, and rating sheets.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{Label, OutlierMode, OutlierSet, RankedList, RatingSheet, Scored, StatsTable};
use crate::entropy::{
    context_exclusion, record_subtokens, score_subtokens, EntropyScore, ExclusionReason, ProbabilityModel,
};
use crate::error::ReportError;
use crate::subtokens::SubtokenOptions;
use crate::syntax::{join_tokens, CastContext, CastKind, NamedCastRecord};

pub const FORMAT_VERSION: u64 = 1;

/// Round to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextLabel {
    Assignment,
    CallArg,
    Other,
}

/// One cast as written to the casts document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CastReportEntry {
    pub file: String,
    #[serde(default)]
    pub component: String,
    pub line: u32,
    pub col: u32,
    pub cast_kind: CastKind,
    pub context: ContextLabel,
    pub callee: Option<String>,
    pub arg_index: Option<usize>,
    pub target_type: String,
    pub source_text: String,
    pub source_subtokens: Vec<String>,
    pub dest_text: Option<String>,
    pub dest_subtokens: Vec<String>,
    pub in_macro_body: bool,
    pub h_source: Option<f64>,
    pub h_joint: Option<f64>,
    pub ce: Option<f64>,
    pub source_len: Option<usize>,
    pub excluded_reason: Option<ExclusionReason>,
}

impl CastReportEntry {
    /// Unscored entry; contextual exclusions are already filled in.
    pub fn from_record(rec: &NamedCastRecord, options: SubtokenOptions) -> Self {
        let (source_subtokens, dest_subtokens) = record_subtokens(rec, options);
        let (context, callee, arg_index) = match &rec.context {
            CastContext::Assignment { .. } => (ContextLabel::Assignment, None, None),
            CastContext::CallArg { callee, arg_index, .. } => {
                (ContextLabel::CallArg, Some(callee.clone()), Some(*arg_index))
            }
            CastContext::Other => (ContextLabel::Other, None, None),
        };
        let dest = rec.context.dest_tokens();
        CastReportEntry {
            file: rec.file.clone(),
            component: rec.component.clone(),
            line: rec.line,
            col: rec.col,
            cast_kind: rec.kind,
            context,
            callee,
            arg_index,
            target_type: rec.target_type.clone(),
            source_text: rec.source_text(),
            source_subtokens,
            dest_text: (!dest.is_empty()).then(|| join_tokens(dest)),
            dest_subtokens,
            in_macro_body: rec.in_macro_body,
            h_source: None,
            h_joint: None,
            ce: None,
            source_len: None,
            excluded_reason: context_exclusion(&rec.context),
        }
    }

    /// Stable join key: `file:line:col:kind`.
    pub fn id(&self) -> String {
        format!("{}:{}:{}:{}", self.file, self.line, self.col, self.cast_kind)
    }

    pub fn is_scored(&self) -> bool {
        self.ce.is_some()
    }

    pub fn score(&self) -> Option<EntropyScore> {
        Some(EntropyScore {
            h_source: self.h_source?,
            h_joint: self.h_joint?,
            ce: self.ce?,
            source_len: self.source_len?,
        })
    }

    fn clear_score(&mut self) {
        self.h_source = None;
        self.h_joint = None;
        self.ce = None;
        self.source_len = None;
    }

    /// Store a score at the document's precision. The conditional entropy is
    /// recomputed from the rounded fields so the three stay consistent.
    pub fn set_score(&mut self, score: EntropyScore) {
        let h_source = round_sig12(score.h_source);
        let h_joint = round_sig12(score.h_joint);
        self.h_source = Some(h_source);
        self.h_joint = Some(h_joint);
        self.ce = Some(round_sig12(h_joint - h_source));
        self.source_len = Some(score.source_len);
        self.excluded_reason = None;
    }

    /// Score from the stored subtoken lists. Entries excluded for their
    /// context stay excluded; re-scoring is idempotent.
    pub fn apply_score(&mut self, model: ProbabilityModel) {
        self.clear_score();
        if self.excluded_reason.is_some_and(ExclusionReason::is_contextual) {
            return;
        }
        match score_subtokens(&self.source_subtokens, &self.dest_subtokens, model) {
            Ok(score) => self.set_score(score),
            Err(reason) => self.excluded_reason = Some(reason),
        }
    }
}

impl Scored for CastReportEntry {
    fn kind(&self) -> CastKind {
        self.cast_kind
    }

    fn ce(&self) -> f64 {
        self.ce.unwrap_or(f64::NAN)
    }

    fn source_len(&self) -> usize {
        self.source_len.unwrap_or(0)
    }

    fn location(&self) -> (&str, u32, u32) {
        (&self.file, self.line, self.col)
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn json_error(path: &Path, e: serde_json::Error) -> ReportError {
    ReportError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> ReportError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => ReportError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => ReportError::Csv {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_error(path))?;
    }
    fs::write(path, bytes).map_err(io_error(path))
}

fn read_file(path: &Path) -> Result<String, ReportError> {
    fs::read_to_string(path).map_err(io_error(path))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, ReportError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_error(path))?;
    }
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn finish_csv(path: &Path, mut w: csv::Writer<fs::File>) -> Result<(), ReportError> {
    w.flush().map_err(io_error(path))
}

/// The casts document as text: one entry per line for readable diffs.
pub fn casts_json_string(entries: &[CastReportEntry]) -> String {
    let mut out = format!("{{\"version\":{FORMAT_VERSION},\"casts\":[");
    for (i, entry) in entries.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&serde_json::to_string(entry).expect("entries serialize"));
    }
    if !entries.is_empty() {
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn write_casts_json(entries: &[CastReportEntry], path: &Path) -> Result<(), ReportError> {
    write_file(path, casts_json_string(entries).as_bytes())
}

/// One casts document per source file under `dir`, mirroring the corpus
/// layout with `.json` appended.
pub fn write_casts_per_file(entries: &[CastReportEntry], dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let mut by_file: BTreeMap<&str, Vec<CastReportEntry>> = BTreeMap::new();
    for e in entries {
        by_file.entry(&e.file).or_default().push(e.clone());
    }
    let mut written = Vec::new();
    for (file, group) in by_file {
        let path = dir.join(format!("{file}.json"));
        write_casts_json(&group, &path)?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Deserialize)]
struct Header {
    version: u64,
}

#[derive(Deserialize)]
struct CastsDocument {
    casts: Vec<CastReportEntry>,
}

/// Parse a casts document; `path` is only used in error messages.
pub fn parse_casts_json(text: &str, path: &Path) -> Result<Vec<CastReportEntry>, ReportError> {
    let header: Header = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    if header.version != FORMAT_VERSION {
        return Err(ReportError::Version {
            path: path.to_path_buf(),
            found: header.version,
            expected: FORMAT_VERSION,
        });
    }
    let doc: CastsDocument = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    Ok(doc.casts)
}

pub fn read_casts_json(path: &Path) -> Result<Vec<CastReportEntry>, ReportError> {
    parse_casts_json(&read_file(path)?, path)
}

fn opt_text(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("")
}

fn float_text(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const RANKED_HEADER: [&str; 9] = [
    "rank",
    "kind",
    "ce",
    "source_len",
    "file",
    "line",
    "col",
    "source_text",
    "dest_text",
];

/// Ranked casts, numbered from 1 within each list.
pub fn write_ranked_csv<'a>(
    lists: impl IntoIterator<Item = &'a RankedList<CastReportEntry>>,
    path: &Path,
) -> Result<(), ReportError> {
    let mut w = csv_writer(path)?;
    w.write_record(RANKED_HEADER).map_err(|e| csv_error(path, e))?;
    for list in lists {
        for (i, e) in list.entries.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                e.cast_kind.to_string(),
                float_text(e.ce),
                e.source_len.map(|n| n.to_string()).unwrap_or_default(),
                e.file.clone(),
                e.line.to_string(),
                e.col.to_string(),
                e.source_text.clone(),
                opt_text(&e.dest_text).to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
        }
    }
    finish_csv(path, w)
}

/// Source length against conditional entropy for the scored entries given.
pub fn write_scatter_csv<'a>(
    entries: impl IntoIterator<Item = &'a CastReportEntry>,
    outlier_ids: &BTreeSet<String>,
    path: &Path,
) -> Result<(), ReportError> {
    let mut w = csv_writer(path)?;
    w.write_record(["source_len", "ce", "is_outlier", "context"])
        .map_err(|e| csv_error(path, e))?;
    for e in entries.into_iter().filter(|e| e.is_scored()) {
        let context = match e.context {
            ContextLabel::Assignment => "assignment",
            ContextLabel::CallArg => "call_arg",
            ContextLabel::Other => "other",
        };
        w.write_record([
            e.source_len().to_string(),
            float_text(e.ce),
            outlier_ids.contains(&e.id()).to_string(),
            context.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish_csv(path, w)
}

pub const STATS_HEADER: [&str; 10] = [
    "Name", "Assign S", "Assign R", "Assign D", "Assign C", "Call S", "Call R", "Call D", "Call C", "Total",
];

pub fn write_stats_csv(stats: &StatsTable, path: &Path) -> Result<(), ReportError> {
    let mut w = csv_writer(path)?;
    w.write_record(STATS_HEADER).map_err(|e| csv_error(path, e))?;
    for row in stats.rows.iter().chain(std::iter::once(&stats.total)) {
        let mut fields = vec![row.name.clone()];
        fields.extend(CastKind::ALL.iter().map(|&k| row.assignment.get(k).to_string()));
        fields.extend(CastKind::ALL.iter().map(|&k| row.call.get(k).to_string()));
        fields.push(row.total().to_string());
        w.write_record(&fields).map_err(|e| csv_error(path, e))?;
    }
    finish_csv(path, w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierKindEntry {
    pub kind: CastKind,
    pub population: usize,
    pub mean: f64,
    pub stddev: f64,
    pub threshold: f64,
    pub members: Vec<CastReportEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutliersDocument {
    pub version: u64,
    pub mode: String,
    pub kinds: Vec<OutlierKindEntry>,
}

impl OutliersDocument {
    pub fn new(sets: &BTreeMap<CastKind, OutlierSet<CastReportEntry>>, mode: OutlierMode) -> Self {
        OutliersDocument {
            version: FORMAT_VERSION,
            mode: mode.to_string(),
            kinds: sets
                .values()
                .map(|s| OutlierKindEntry {
                    kind: s.kind,
                    population: s.population,
                    mean: round_sig12(s.mean),
                    stddev: round_sig12(s.stddev),
                    threshold: round_sig12(s.threshold),
                    members: s.members.clone(),
                })
                .collect(),
        }
    }

    /// Every member across kinds, in kind then rank order.
    pub fn members(&self) -> impl Iterator<Item = &CastReportEntry> {
        self.kinds.iter().flat_map(|k| &k.members)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDocument {
    pub version: u64,
    pub seed: u64,
    pub population: usize,
    pub confidence: f64,
    pub margin: f64,
    pub p: f64,
    pub size: usize,
    pub records: Vec<CastReportEntry>,
}

fn write_pretty<T: Serialize>(value: &T, path: &Path) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn read_versioned<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ReportError> {
    let text = read_file(path)?;
    let header: Header = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
    if header.version != FORMAT_VERSION {
        return Err(ReportError::Version {
            path: path.to_path_buf(),
            found: header.version,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_str(&text).map_err(|e| json_error(path, e))
}

pub fn write_outliers_json(doc: &OutliersDocument, path: &Path) -> Result<(), ReportError> {
    write_pretty(doc, path)
}

pub fn read_outliers_json(path: &Path) -> Result<OutliersDocument, ReportError> {
    read_versioned(path)
}

pub fn write_sample_json(doc: &SampleDocument, path: &Path) -> Result<(), ReportError> {
    write_pretty(doc, path)
}

pub fn read_sample_json(path: &Path) -> Result<SampleDocument, ReportError> {
    read_versioned(path)
}

/// Blank rating sheet for reviewers: one row per sampled record.
pub fn write_rating_template<'a>(
    records: impl IntoIterator<Item = &'a CastReportEntry>,
    path: &Path,
) -> Result<(), ReportError> {
    let mut w = csv_writer(path)?;
    w.write_record(["record_id", "label"]).map_err(|e| csv_error(path, e))?;
    for r in records {
        w.write_record([r.id().as_str(), ""]).map_err(|e| csv_error(path, e))?;
    }
    finish_csv(path, w)
}

pub fn write_rating_sheet(sheet: &RatingSheet, path: &Path) -> Result<(), ReportError> {
    let mut w = csv_writer(path)?;
    w.write_record(["record_id", "label"]).map_err(|e| csv_error(path, e))?;
    for (id, label) in &sheet.labels {
        w.write_record([id.as_str(), label.as_str()])
            .map_err(|e| csv_error(path, e))?;
    }
    finish_csv(path, w)
}

/// Read a `record_id,label` sheet. The rater id is the file stem.
pub fn read_rating_sheet(path: &Path) -> Result<RatingSheet, ReportError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.len() < 2 || &headers[0] != "record_id" || &headers[1] != "label" {
        return Err(ReportError::Csv {
            path: path.to_path_buf(),
            message: "expected header `record_id,label`".into(),
        });
    }
    let rater = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut sheet = RatingSheet::new(rater);
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| ReportError::Csv {
            path: path.to_path_buf(),
            message: format!("line {line}: {message}"),
        };
        let id = row.get(0).unwrap_or("").trim().to_string();
        let label: Label = row.get(1).unwrap_or("").parse().map_err(bad)?;
        if sheet.labels.insert(id.clone(), label).is_some() {
            return Err(bad(format!("duplicate record id `{id}`")));
        }
    }
    Ok(sheet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{aggregate, rank, Site};
    use crate::syntax::{tokenize, Token, TokenKind, Unresolved};

    fn rec(line: u32, source: &str, context: CastContext) -> NamedCastRecord {
        NamedCastRecord {
            file: "net/quic.cc".into(),
            component: "net".into(),
            line,
            col: 15,
            kind: CastKind::Static,
            target_type: "QuicErrorCode".into(),
            source_tokens: tokenize(source),
            context,
            in_macro_body: false,
        }
    }

    fn sample_entries() -> Vec<CastReportEntry> {
        let opts = SubtokenOptions::default();
        let mut out = vec![
            CastReportEntry::from_record(
                &rec(
                    4,
                    "error",
                    CastContext::Assignment {
                        dest_tokens: tokenize("error"),
                    },
                ),
                opts,
            ),
            CastReportEntry::from_record(
                &rec(
                    6,
                    "error",
                    CastContext::CallArg {
                        callee: "SetInteger".into(),
                        arg_index: 1,
                        arity: 2,
                        dest_tokens: vec![Token::new(TokenKind::Identifier, "in_value", 6, 15)],
                        unresolved: None,
                    },
                ),
                opts,
            ),
            CastReportEntry::from_record(&rec(8, "a, b", CastContext::Other), opts),
            CastReportEntry::from_record(
                &rec(
                    9,
                    "x",
                    CastContext::CallArg {
                        callee: "g".into(),
                        arg_index: 0,
                        arity: 1,
                        dest_tokens: Vec::new(),
                        unresolved: Some(Unresolved::Unknown),
                    },
                ),
                opts,
            ),
        ];
        for e in &mut out {
            e.apply_score(ProbabilityModel::Uniform);
        }
        out
    }

    #[test]
    fn entries_carry_scores_and_reasons() {
        let e = sample_entries();
        assert_eq!(e[0].ce, Some(0.0));
        assert_eq!(e[0].dest_text.as_deref(), Some("error"));
        assert_eq!(e[1].callee.as_deref(), Some("SetInteger"));
        assert_eq!(e[1].dest_subtokens, ["in", "value"]);
        assert_eq!(e[1].ce, Some(round_sig12(3f64.log2())));
        assert_eq!(e[2].excluded_reason, Some(ExclusionReason::OtherContext));
        assert_eq!(e[2].ce, None);
        assert_eq!(e[3].excluded_reason, Some(ExclusionReason::UnresolvedUnknown));
        assert_eq!(e[1].id(), "net/quic.cc:6:15:static");
    }

    #[test]
    fn rounding_keeps_the_identity() {
        for e in sample_entries().iter().filter(|e| e.is_scored()) {
            let diff = e.h_joint.unwrap() - e.h_source.unwrap();
            assert!((e.ce.unwrap() - diff).abs() < 1e-12);
        }
        assert_eq!(round_sig12(3f64.log2()), 1.58496250072);
        assert_eq!(round_sig12(0.0), 0.0);
    }

    #[test]
    fn empty_document() {
        assert_eq!(casts_json_string(&[]), "{\"version\":1,\"casts\":[]}\n");
        let parsed = parse_casts_json("{\"version\":1,\"casts\":[]}", Path::new("x")).unwrap();
        assert!(parsed.is_empty());
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let entries = sample_entries();
        let first = casts_json_string(&entries);
        let back = parse_casts_json(&first, Path::new("casts.json")).unwrap();
        assert_eq!(back, entries);
        assert_eq!(casts_json_string(&back), first);
        let kinds: Vec<_> = back.iter().map(|e| e.cast_kind.as_str()).collect();
        assert_eq!(kinds, ["static"; 4]);
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let text = casts_json_string(&sample_entries()[..1]).replace("\"file\":", "\"extra\":3,\"file\":");
        assert_eq!(parse_casts_json(&text, Path::new("x")).unwrap().len(), 1);
    }

    #[test]
    fn errors_name_field_version_and_position() {
        let text = casts_json_string(&sample_entries()[..1]).replace("\"target_type\":", "\"renamed\":");
        let err = parse_casts_json(&text, Path::new("c.json")).unwrap_err();
        assert!(err.to_string().contains("target_type"), "{err}");

        let err = parse_casts_json("{\"version\":2,\"casts\":[]}", Path::new("c.json")).unwrap_err();
        assert!(matches!(err, ReportError::Version { found: 2, .. }));

        let err = parse_casts_json("{\"version\":1,\n\"casts\":[}", Path::new("c.json")).unwrap_err();
        match err {
            ReportError::Json { line, column, .. } => assert_eq!((line, column), (2, 10)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rescoring_is_idempotent() {
        let mut entries = sample_entries();
        let before = entries.clone();
        for e in &mut entries {
            e.apply_score(ProbabilityModel::Uniform);
        }
        assert_eq!(entries, before);
    }

    #[test]
    fn ranked_csv_quotes_commas() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ranked.csv");
        let mut entries = sample_entries();
        entries[0].source_text = "f(a, b)".into();
        let scored: Vec<_> = entries.into_iter().filter(|e| e.is_scored()).collect();
        let ranked = rank(scored);
        write_ranked_csv(ranked.values(), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "rank,kind,ce,source_len,file,line,col,source_text,dest_text");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,static,1.58496250072,1,net/quic.cc,6,15"));
        assert!(lines[2].contains("\"f(a, b)\""));
    }

    #[test]
    fn scatter_rows_follow_scored_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scatter.csv");
        let entries = sample_entries();
        let outliers: BTreeSet<String> = [entries[1].id()].into();
        write_scatter_csv(&entries, &outliers, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "source_len,ce,is_outlier,context\n1,0,false,assignment\n1,1.58496250072,true,call_arg\n"
        );
    }

    #[test]
    fn stats_csv_has_total_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stats.csv");
        write_stats_csv(&aggregate(std::iter::empty()), &path).unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            "Name,Assign S,Assign R,Assign D,Assign C,Call S,Call R,Call D,Call C,Total\nTotal,0,0,0,0,0,0,0,0,0\n"
        );
        let table = aggregate([
            ("net", CastKind::Static, Some(Site::Assignment)),
            ("base", CastKind::Const, Some(Site::Call)),
            ("net", CastKind::Reinterpret, Some(Site::Call)),
        ]);
        write_stats_csv(&table, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "net,1,0,0,0,0,1,0,0,2");
        assert_eq!(lines[2], "base,0,0,0,0,0,0,0,1,1");
        assert_eq!(lines[3], "Total,1,0,0,0,0,1,0,1,3");
    }

    #[test]
    fn rating_sheets_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("alice.csv");
        let sheet = RatingSheet::with_labels(
            "alice",
            [
                ("a.cc:1:1:static", Label::TruePositive),
                ("b.cc:2:3:const", Label::FalsePositive),
            ],
        );
        write_rating_sheet(&sheet, &path).unwrap();
        assert_eq!(read_rating_sheet(&path).unwrap(), sheet);

        fs::write(&path, "record_id,label\nx,TP\nx,FP\n").unwrap();
        assert!(read_rating_sheet(&path).unwrap_err().to_string().contains("duplicate"));
        fs::write(&path, "record_id,label\nx,maybe\n").unwrap();
        assert!(read_rating_sheet(&path).unwrap_err().to_string().contains("line 2"));
        fs::write(&path, "id,verdict\n").unwrap();
        assert!(read_rating_sheet(&path).is_err());
    }

    #[test]
    fn per_file_documents() {
        let dir = tempfile::tempdir().unwrap();
        let written = write_casts_per_file(&sample_entries(), dir.path()).unwrap();
        assert_eq!(written, [dir.path().join("net/quic.cc.json")]);
        assert_eq!(read_casts_json(&written[0]).unwrap().len(), 4);
    }
}
