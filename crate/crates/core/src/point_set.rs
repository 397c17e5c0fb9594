use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::PointId;

const WORD: usize = u64::BITS as usize;

/// A finite set of points, stored as a bitset over dense point indices.
///
/// The word vector never has trailing zero words, so two sets with the same
/// members are equal regardless of how they were built. Ordering is
/// lexicographic on the ascending member sequence.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct PointSet {
    words: Vec<u64>,
}

impl PointSet {
    pub const fn new() -> Self {
        PointSet { words: Vec::new() }
    }

    /// The set `{0, 1, .., len - 1}`.
    pub fn full(len: usize) -> Self {
        let mut words = alloc::vec![u64::MAX; len / WORD];
        if !len.is_multiple_of(WORD) {
            words.push((1u64 << (len % WORD)) - 1);
        }
        PointSet { words }
    }

    pub fn singleton(p: PointId) -> Self {
        let mut s = PointSet::new();
        s.insert(p);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, p: PointId) -> bool {
        let (i, mask) = location(p.0);
        self.words.get(i).is_some_and(|w| w & mask != 0)
    }

    /// Returns `true` if `p` was not already present.
    pub fn insert(&mut self, p: PointId) -> bool {
        let (i, mask) = location(p.0);
        if i >= self.words.len() {
            self.words.resize(i + 1, 0);
        }
        let fresh = self.words[i] & mask == 0;
        self.words[i] |= mask;
        fresh
    }

    pub fn remove(&mut self, p: PointId) -> bool {
        let (i, mask) = location(p.0);
        let Some(w) = self.words.get_mut(i) else {
            return false;
        };
        let present = *w & mask != 0;
        *w &= !mask;
        self.trim();
        present
    }

    /// Largest member, if any.
    pub fn last(&self) -> Option<PointId> {
        let last = *self.words.last()?;
        let bit = WORD - 1 - last.leading_zeros() as usize;
        Some(PointId((self.words.len() - 1) * WORD + bit))
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<PointId> {
        self.iter().next()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &PointSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        PointSet { words }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.trim();
        out
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

#[inline]
fn location(index: usize) -> (usize, u64) {
    (index / WORD, 1u64 << (index % WORD))
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = PointId;

    fn next(&mut self) -> Option<PointId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(PointId(self.index * WORD + bit));
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = PointId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<PointId> for PointSet {
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        let mut s = PointSet::new();
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl Extend<PointId> for PointSet {
    fn extend<I: IntoIterator<Item = PointId>>(&mut self, iter: I) {
        for p in iter {
            self.insert(p);
        }
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for PointSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}
