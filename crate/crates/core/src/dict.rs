//! Position-ordered dictionaries of the minima and of the maxima of a list.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::error::BananaError;
use crate::ids::ItemId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// Critical items keyed by their order label.
#[derive(Clone, Debug, Default)]
pub struct CritDict {
    map: BTreeMap<u64, ItemId>,
}

impl CritDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub(crate) fn insert(&mut self, label: u64, item: ItemId) {
        let prev = self.map.insert(label, item);
        debug_assert!(prev.is_none(), "label {label} already present");
    }

    pub(crate) fn remove(&mut self, label: u64) -> Option<ItemId> {
        self.map.remove(&label)
    }

    pub fn contains(&self, label: u64) -> bool {
        self.map.contains_key(&label)
    }

    /// Nearest member strictly on the given side of `label`.
    pub fn nearest(&self, label: u64, dir: Direction) -> Option<ItemId> {
        match dir {
            Direction::Left => self.map.range(..label).next_back().map(|(_, &v)| v),
            Direction::Right => self.map.range((Bound::Excluded(label), Bound::Unbounded)).next().map(|(_, &v)| v),
        }
    }

    /// Members with label `<= at` stay; the rest are returned.
    pub fn split_after(&mut self, at: u64) -> CritDict {
        let right = match at.checked_add(1) {
            Some(k) => self.map.split_off(&k),
            None => BTreeMap::new(),
        };
        CritDict { map: right }
    }

    /// Appends `right`, whose members must all follow ours.
    pub fn concat(&mut self, mut right: CritDict) -> Result<(), BananaError> {
        if let (Some((&l, _)), Some((&r, _))) = (self.map.last_key_value(), right.map.first_key_value()) {
            if l >= r {
                return Err(BananaError::Ordering);
            }
        }
        self.map.append(&mut right.map);
        Ok(())
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.map.values().copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = u64> + '_ {
        self.map.keys().copied()
    }

    pub(crate) fn drain(&mut self) -> Vec<ItemId> {
        std::mem::take(&mut self.map).into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dict(labels: &[u64]) -> CritDict {
        let mut d = CritDict::new();
        for &l in labels {
            d.insert(l, ItemId(l as u32));
        }
        d
    }

    #[test]
    fn nearest_both_sides() {
        let d = dict(&[10, 20, 30]);
        assert_eq!(d.nearest(20, Direction::Right), Some(ItemId(30)));
        assert_eq!(d.nearest(20, Direction::Left), Some(ItemId(10)));
        assert_eq!(d.nearest(15, Direction::Left), Some(ItemId(10)));
        assert_eq!(d.nearest(10, Direction::Left), None);
        assert_eq!(d.nearest(30, Direction::Right), None);
    }

    #[test]
    fn split_then_concat_roundtrip() {
        let mut d = dict(&[1, 2, 3, 5, 6, 7]);
        let r = d.split_after(3);
        assert_eq!(d.labels().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(r.labels().collect::<Vec<_>>(), vec![5, 6, 7]);
        d.concat(r).unwrap();
        assert_eq!(d.labels().collect::<Vec<_>>(), vec![1, 2, 3, 5, 6, 7]);
    }

    #[test]
    fn split_of_empty() {
        let mut d = CritDict::new();
        let r = d.split_after(100);
        assert!(d.is_empty() && r.is_empty());
    }

    #[test]
    fn interleaved_concat_rejected() {
        let mut a = dict(&[1, 5]);
        let b = dict(&[3, 7]);
        assert!(matches!(a.concat(b), Err(BananaError::Ordering)));
    }
}
