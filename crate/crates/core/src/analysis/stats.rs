use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use crate::syntax::{CastContext, CastKind, NamedCastRecord};

/// Where a counted cast's value goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    Assignment,
    Call,
}

impl Site {
    pub fn of(context: &CastContext) -> Option<Site> {
        match context {
            CastContext::Assignment { .. } => Some(Site::Assignment),
            CastContext::CallArg { .. } => Some(Site::Call),
            CastContext::Other => None,
        }
    }
}

/// Counts indexed by cast kind in S, R, D, C order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KindCounts(pub [usize; 4]);

fn slot(kind: CastKind) -> usize {
    CastKind::ALL.iter().position(|&k| k == kind).unwrap_or(0)
}

impl KindCounts {
    pub fn get(&self, kind: CastKind) -> usize {
        self.0[slot(kind)]
    }

    pub fn bump(&mut self, kind: CastKind, n: usize) {
        self.0[slot(kind)] += n;
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Add for KindCounts {
    type Output = KindCounts;

    fn add(mut self, rhs: KindCounts) -> KindCounts {
        self += rhs;
        self
    }
}

impl AddAssign for KindCounts {
    fn add_assign(&mut self, rhs: KindCounts) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentRow {
    pub name: String,
    pub assignment: KindCounts,
    pub call: KindCounts,
}

impl ComponentRow {
    pub fn total(&self) -> usize {
        self.assignment.total() + self.call.total()
    }

    pub fn kind_total(&self, kind: CastKind) -> usize {
        self.assignment.get(kind) + self.call.get(kind)
    }

    pub fn site(&self, site: Site) -> &KindCounts {
        match site {
            Site::Assignment => &self.assignment,
            Site::Call => &self.call,
        }
    }
}

/// Per-component cast counts split by site and kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsTable {
    /// Largest component first, ties by name.
    pub rows: Vec<ComponentRow>,
    pub total: ComponentRow,
}

fn share(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

impl StatsTable {
    /// Percentage of all counted casts that are of `kind`.
    pub fn kind_share(&self, kind: CastKind) -> f64 {
        share(self.total.kind_total(kind), self.total.total())
    }

    /// Percentage of all counted casts found at `site`.
    pub fn site_share(&self, site: Site) -> f64 {
        share(self.total.site(site).total(), self.total.total())
    }
}

/// Tally `(component, kind, site)` triples. Casts without a site are not
/// counted.
pub fn aggregate<'a, I>(items: I) -> StatsTable
where
    I: IntoIterator<Item = (&'a str, CastKind, Option<Site>)>,
{
    let mut by_name: BTreeMap<&str, ComponentRow> = BTreeMap::new();
    for (component, kind, site) in items {
        let Some(site) = site else { continue };
        let row = by_name.entry(component).or_insert_with(|| ComponentRow {
            name: component.to_string(),
            ..Default::default()
        });
        match site {
            Site::Assignment => row.assignment.bump(kind, 1),
            Site::Call => row.call.bump(kind, 1),
        }
    }
    let mut rows: Vec<ComponentRow> = by_name.into_values().collect();
    rows.sort_by(|a, b| b.total().cmp(&a.total()).then_with(|| a.name.cmp(&b.name)));
    let mut total = ComponentRow {
        name: "Total".into(),
        ..Default::default()
    };
    for row in &rows {
        total.assignment += row.assignment;
        total.call += row.call;
    }
    StatsTable { rows, total }
}

pub fn aggregate_records(records: &[NamedCastRecord]) -> StatsTable {
    aggregate(
        records
            .iter()
            .map(|r| (r.component.as_str(), r.kind, Site::of(&r.context))),
    )
}
