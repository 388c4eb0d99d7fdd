//! Entropy of subtoken sets and the conditional entropy of a cast's
//! destination given its source expression.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::subtokens::{destination_tokens, subtoken_list, SubtokenOptions, SubtokenSet};
use crate::syntax::{CastContext, NamedCastRecord, Unresolved};

/// How probabilities are assigned to the subtokens of a set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityModel {
    /// Every distinct subtoken is equally likely.
    #[default]
    Uniform,
    /// Subtokens weighted by how often they occur in the expression.
    Frequency,
}

impl ProbabilityModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbabilityModel::Uniform => "uniform",
            ProbabilityModel::Frequency => "frequency",
        }
    }
}

impl fmt::Display for ProbabilityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProbabilityModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(ProbabilityModel::Uniform),
            "frequency" => Ok(ProbabilityModel::Frequency),
            _ => Err(format!(
                "unknown probability model `{s}` (expected uniform or frequency)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptySetError;

impl fmt::Display for EmptySetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("entropy of an empty subtoken set is undefined")
    }
}

impl std::error::Error for EmptySetError {}

fn shannon(counts: impl Iterator<Item = usize> + Clone) -> f64 {
    let total: usize = counts.clone().sum();
    let total = total as f64;
    let h: f64 = counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // A single outcome sums to -0.0.
    h.max(0.0)
}

/// Entropy in bits of a subtoken set under the uniform model: `log2(|items|)`.
pub fn entropy(s: &SubtokenSet) -> Result<f64, EmptySetError> {
    entropy_with(s, ProbabilityModel::Uniform)
}

pub fn entropy_with(s: &SubtokenSet, model: ProbabilityModel) -> Result<f64, EmptySetError> {
    if s.is_empty() {
        return Err(EmptySetError);
    }
    Ok(match model {
        ProbabilityModel::Uniform => (s.len() as f64).log2(),
        ProbabilityModel::Frequency => shannon(s.counts().values().copied()),
    })
}

/// Entropy of the union of both sets.
pub fn joint_entropy(src: &SubtokenSet, dst: &SubtokenSet) -> Result<f64, EmptySetError> {
    joint_entropy_with(src, dst, ProbabilityModel::Uniform)
}

pub fn joint_entropy_with(src: &SubtokenSet, dst: &SubtokenSet, model: ProbabilityModel) -> Result<f64, EmptySetError> {
    if src.is_empty() {
        return Err(EmptySetError);
    }
    Ok(match model {
        ProbabilityModel::Uniform => (src.union_len(dst) as f64).log2(),
        ProbabilityModel::Frequency => {
            let mut merged: BTreeMap<&str, usize> = BTreeMap::new();
            for (k, v) in src.counts().iter().chain(dst.counts()) {
                *merged.entry(k.as_str()).or_insert(0) += v;
            }
            shannon(merged.values().copied())
        }
    })
}

/// Extra bits needed for the destination once the source is known.
pub fn conditional_entropy(src: &SubtokenSet, dst: &SubtokenSet) -> Result<f64, EmptySetError> {
    Ok(score_sets(src, dst, ProbabilityModel::Uniform)?.ce)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyScore {
    pub h_source: f64,
    pub h_joint: f64,
    pub ce: f64,
    /// Distinct source subtokens.
    pub source_len: usize,
}

fn score_sets(src: &SubtokenSet, dst: &SubtokenSet, model: ProbabilityModel) -> Result<EntropyScore, EmptySetError> {
    if dst.is_empty() {
        return Err(EmptySetError);
    }
    let h_source = entropy_with(src, model)?;
    let h_joint = joint_entropy_with(src, dst, model)?;
    Ok(EntropyScore {
        h_source,
        h_joint,
        ce: h_joint - h_source,
        source_len: src.len(),
    })
}

/// Why a record carries no score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    OtherContext,
    UnresolvedUnknown,
    UnresolvedAmbiguous,
    UnresolvedUnnamed,
    EmptySource,
    EmptyDestination,
}

impl ExclusionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ExclusionReason::OtherContext => "other_context",
            ExclusionReason::UnresolvedUnknown => "unresolved_unknown",
            ExclusionReason::UnresolvedAmbiguous => "unresolved_ambiguous",
            ExclusionReason::UnresolvedUnnamed => "unresolved_unnamed",
            ExclusionReason::EmptySource => "empty_source",
            ExclusionReason::EmptyDestination => "empty_destination",
        }
    }

    /// Reasons decided by the cast's surroundings rather than its subtokens.
    pub fn is_contextual(self) -> bool {
        !matches!(self, ExclusionReason::EmptySource | ExclusionReason::EmptyDestination)
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Unresolved> for ExclusionReason {
    fn from(u: Unresolved) -> Self {
        match u {
            Unresolved::Unknown => ExclusionReason::UnresolvedUnknown,
            Unresolved::Ambiguous => ExclusionReason::UnresolvedAmbiguous,
            Unresolved::Unnamed => ExclusionReason::UnresolvedUnnamed,
        }
    }
}

/// Exclusion forced by where the cast sits, if any.
pub fn context_exclusion(context: &CastContext) -> Option<ExclusionReason> {
    match context {
        CastContext::Other => Some(ExclusionReason::OtherContext),
        CastContext::CallArg {
            unresolved: Some(u), ..
        } => Some((*u).into()),
        _ => None,
    }
}

/// Source and destination subtokens of a record, duplicates kept.
/// The destination list is empty when there is no destination.
pub fn record_subtokens(rec: &NamedCastRecord, options: SubtokenOptions) -> (Vec<String>, Vec<String>) {
    let source = subtoken_list(&rec.source_tokens, options);
    let dest = subtoken_list(destination_tokens(rec.context.dest_tokens()), options);
    (source, dest)
}

/// Score from already split subtoken lists.
pub fn score_subtokens(
    source: &[String],
    dest: &[String],
    model: ProbabilityModel,
) -> Result<EntropyScore, ExclusionReason> {
    let src = SubtokenSet::from_subtokens(source.iter().map(String::as_str));
    let dst = SubtokenSet::from_subtokens(dest.iter().map(String::as_str));
    if src.is_empty() {
        return Err(ExclusionReason::EmptySource);
    }
    if dst.is_empty() {
        return Err(ExclusionReason::EmptyDestination);
    }
    score_sets(&src, &dst, model).map_err(|_| ExclusionReason::EmptyDestination)
}

/// Score one record on its own subtokens.
pub fn score_record(
    rec: &NamedCastRecord,
    model: ProbabilityModel,
    options: SubtokenOptions,
) -> Result<EntropyScore, ExclusionReason> {
    if let Some(reason) = context_exclusion(&rec.context) {
        return Err(reason);
    }
    let (source, dest) = record_subtokens(rec, options);
    score_subtokens(&source, &dest, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{tokenize, CastKind, Token, TokenKind};

    fn set(items: &[&str]) -> SubtokenSet {
        SubtokenSet::from_subtokens(items.iter().copied())
    }

    #[test]
    fn uniform_entropy_values() {
        assert_eq!(entropy(&set(&["baz", "goo"])).unwrap(), 1.0);
        assert_eq!(entropy(&set(&["x"])).unwrap(), 0.0);
        assert_eq!(entropy(&set(&["a", "b", "c", "d"])).unwrap(), 2.0);
        assert_eq!(entropy(&set(&[])), Err(EmptySetError));
    }

    #[test]
    fn joint_and_conditional() {
        let bg = set(&["baz", "goo"]);
        let fb = set(&["foo", "bar"]);
        assert_eq!(joint_entropy(&bg, &fb).unwrap(), 2.0);
        assert_eq!(conditional_entropy(&bg, &fb).unwrap(), 1.0);
        assert_eq!(joint_entropy(&set(&["a", "b"]), &set(&["a", "b"])).unwrap(), 1.0);
        assert_eq!(
            joint_entropy(&set(&["error", "1"]), &set(&["in", "value"])).unwrap(),
            2.0
        );
        assert_eq!(conditional_entropy(&set(&["a", "b", "c"]), &set(&["b"])).unwrap(), 0.0);
        let ce = conditional_entropy(&set(&["nullptr"]), &set(&["old", "value"])).unwrap();
        assert!((ce - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn frequency_model_weights_repeats() {
        let s = set(&["a", "a", "a", "b"]);
        let h = entropy_with(&s, ProbabilityModel::Frequency).unwrap();
        let expect = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((h - expect).abs() < 1e-12);
        // Distinct-only sets agree with the uniform model.
        let u = set(&["a", "b", "c"]);
        let hf = entropy_with(&u, ProbabilityModel::Frequency).unwrap();
        assert!((hf - 3f64.log2()).abs() < 1e-12);
    }

    fn record(source: &str, context: CastContext) -> NamedCastRecord {
        NamedCastRecord {
            file: "net/a.cc".into(),
            component: "net".into(),
            line: 1,
            col: 1,
            kind: CastKind::Static,
            target_type: "int".into(),
            source_tokens: tokenize(source),
            context,
            in_macro_body: false,
        }
    }

    #[test]
    fn records_are_scored_or_excluded() {
        let formal = vec![Token::new(TokenKind::Identifier, "in_value", 1, 1)];
        let rec = record(
            "error",
            CastContext::CallArg {
                callee: "SetInteger".into(),
                arg_index: 1,
                arity: 2,
                dest_tokens: formal,
                unresolved: None,
            },
        );
        let score = score_record(&rec, ProbabilityModel::Uniform, SubtokenOptions::default()).unwrap();
        assert!((score.ce - 3f64.log2()).abs() < 1e-12);
        assert_eq!(score.source_len, 1);

        let rec = record(
            "error",
            CastContext::Assignment {
                dest_tokens: tokenize("error"),
            },
        );
        let score = score_record(&rec, ProbabilityModel::Uniform, SubtokenOptions::default()).unwrap();
        assert_eq!(score.ce, 0.0);

        let rec = record("x", CastContext::Other);
        assert_eq!(
            score_record(&rec, ProbabilityModel::Uniform, SubtokenOptions::default()),
            Err(ExclusionReason::OtherContext)
        );

        let rec = record(
            "x",
            CastContext::CallArg {
                callee: "g".into(),
                arg_index: 0,
                arity: 1,
                dest_tokens: Vec::new(),
                unresolved: Some(Unresolved::Ambiguous),
            },
        );
        assert_eq!(
            score_record(&rec, ProbabilityModel::Uniform, SubtokenOptions::default()),
            Err(ExclusionReason::UnresolvedAmbiguous)
        );
    }

    #[test]
    fn empty_sides_are_excluded() {
        let none: Vec<String> = Vec::new();
        let one = vec!["x".to_string()];
        assert_eq!(
            score_subtokens(&none, &one, ProbabilityModel::Uniform),
            Err(ExclusionReason::EmptySource)
        );
        assert_eq!(
            score_subtokens(&one, &none, ProbabilityModel::Uniform),
            Err(ExclusionReason::EmptyDestination)
        );
    }

    #[test]
    fn declared_type_does_not_reach_the_destination() {
        let rec = record(
            "nameArray",
            CastContext::Assignment {
                dest_tokens: tokenize("const auto *nameArray"),
            },
        );
        let score = score_record(&rec, ProbabilityModel::Uniform, SubtokenOptions::default()).unwrap();
        assert_eq!(score.ce, 0.0);
    }

    #[test]
    fn reasons_round_trip_through_serde() {
        for r in [
            ExclusionReason::OtherContext,
            ExclusionReason::UnresolvedUnnamed,
            ExclusionReason::EmptyDestination,
        ] {
            let text = serde_json::to_string(&r).unwrap();
            assert_eq!(text, format!("\"{}\"", r.as_str()));
            assert_eq!(serde_json::from_str::<ExclusionReason>(&text).unwrap(), r);
        }
    }
}
