//! Ranking, outlier selection, review sampling, corpus statistics and
//! rater agreement.

mod kappa;
mod outliers;
mod rank;
mod sampling;
mod stats;

pub use kappa::{cohen_kappa, mean_pairwise_kappa, Label, RatingSheet};
pub use outliers::{fit_gaussian, percentile, select_outliers, GaussianFit, OutlierMode, OutlierSet, UPPER_QUARTILE_Z};
pub use rank::{rank, RankedList};
pub use sampling::{draw_sample, sample_size, z_for_confidence};
pub use stats::{aggregate, aggregate_records, ComponentRow, KindCounts, Site, StatsTable};

use crate::entropy::EntropyScore;
use crate::syntax::{CastKind, NamedCastRecord};

/// Anything that carries a cast kind, a conditional entropy and a location.
pub trait Scored {
    fn kind(&self) -> CastKind;
    fn ce(&self) -> f64;
    fn source_len(&self) -> usize;
    /// `(file, line, col)`, the deterministic tiebreak.
    fn location(&self) -> (&str, u32, u32);
}

/// An extracted record paired with its score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRecord {
    pub record: NamedCastRecord,
    pub score: EntropyScore,
}

impl Scored for ScoredRecord {
    fn kind(&self) -> CastKind {
        self.record.kind
    }

    fn ce(&self) -> f64 {
        self.score.ce
    }

    fn source_len(&self) -> usize {
        self.score.source_len
    }

    fn location(&self) -> (&str, u32, u32) {
        (&self.record.file, self.record.line, self.record.col)
    }
}

impl<T: Scored> Scored for &T {
    fn kind(&self) -> CastKind {
        (**self).kind()
    }

    fn ce(&self) -> f64 {
        (**self).ce()
    }

    fn source_len(&self) -> usize {
        (**self).source_len()
    }

    fn location(&self) -> (&str, u32, u32) {
        (**self).location()
    }
}
