use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::Scored;
use crate::syntax::CastKind;

/// Casts of one kind, highest conditional entropy first.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList<T> {
    pub kind: CastKind,
    pub entries: Vec<T>,
}

impl<T> RankedList<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) fn rank_order<T: Scored>(a: &T, b: &T) -> Ordering {
    b.ce().total_cmp(&a.ce()).then_with(|| a.location().cmp(&b.location()))
}

/// Split by kind and sort each list by descending conditional entropy,
/// ties broken by file, line and column.
pub fn rank<T: Scored>(scored: impl IntoIterator<Item = T>) -> BTreeMap<CastKind, RankedList<T>> {
    let mut out: BTreeMap<CastKind, RankedList<T>> = BTreeMap::new();
    for item in scored {
        let kind = item.kind();
        out.entry(kind)
            .or_insert_with(|| RankedList {
                kind,
                entries: Vec::new(),
            })
            .entries
            .push(item);
    }
    for list in out.values_mut() {
        list.entries.sort_by(rank_order);
    }
    out
}
