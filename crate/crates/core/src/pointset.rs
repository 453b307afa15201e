//! Fixed-universe bitsets over point indices.

use smallvec::SmallVec;
use std::fmt;

type Words = SmallVec<[u64; 2]>;

/// A subset of `0..universe`, stored as packed 64-bit words.
///
/// Sets over universes of at most 128 points live inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    universe: usize,
    words: Words,
}

#[inline]
fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        Self { universe, words: smallvec::smallvec![0; word_count(universe)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self { universe, words: smallvec::smallvec![!0; word_count(universe)] };
        s.trim();
        s
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut s = Self::empty(universe);
        if let Some(w) = s.words.first_mut() {
            *w = mask;
        }
        s.trim();
        s
    }

    /// Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The first word, i.e. the whole set when the universe has ≤ 64 points.
    #[inline]
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "point {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    #[inline]
    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[must_use]
    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    #[must_use]
    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    #[must_use]
    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    #[must_use]
    pub fn complement(&self) -> Self {
        let mut s = Self { universe: self.universe, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    /// Size of `self ∩ other` without allocating.
    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_respects_universe() {
        assert_eq!(PointSet::full(70).len(), 70);
        assert_eq!(PointSet::full(64).len(), 64);
        assert_eq!(PointSet::full(0).len(), 0);
        assert_eq!(PointSet::full(5).complement(), PointSet::empty(5));
    }

    #[test]
    fn iterates_across_words() {
        let s = PointSet::from_indices(200, [0, 63, 64, 129, 199]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 129, 199]);
        assert_eq!(s.first(), Some(0));
        assert!(!s.contains(200));
    }

    proptest! {
        #[test]
        fn set_algebra(a in proptest::collection::btree_set(0usize..150, 0..40),
                       b in proptest::collection::btree_set(0usize..150, 0..40)) {
            let sa = PointSet::from_indices(150, a.iter().copied());
            let sb = PointSet::from_indices(150, b.iter().copied());
            prop_assert_eq!(sa.union(&sb).to_vec(), a.union(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).to_vec(), a.intersection(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.difference(&sb).to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection_len(&sb), a.intersection(&b).count());
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.complement().complement(), sa.clone());
            prop_assert_eq!(sa.complement().len(), 150 - a.len());
        }
    }
}
