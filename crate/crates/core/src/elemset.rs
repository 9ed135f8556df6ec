//! Fixed-arity bitsets over the indices of a finite carrier.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

/// A subset of `0..arity`, stored as little-endian 64-bit words.
///
/// Sets compare by the integer value of their bit encoding (bit `i` has
/// weight `2^i`), which is the canonical order for every enumerated family
/// in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    arity: usize,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(arity: usize) -> Self {
        ElemSet {
            arity,
            words: vec![0; arity.div_ceil(WORD)],
        }
    }

    pub fn full(arity: usize) -> Self {
        let mut s = Self::empty(arity);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(arity: usize, i: usize) -> Self {
        let mut s = Self::empty(arity);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(arity: usize, it: I) -> Self {
        let mut s = Self::empty(arity);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Builds the set whose bit encoding is `mask`. Bits at or above `arity`
    /// are dropped.
    pub fn from_mask(arity: usize, mask: u64) -> Self {
        let mut s = Self::empty(arity);
        if !s.words.is_empty() {
            s.words[0] = mask;
        }
        s.trim();
        s
    }

    /// The bit encoding as a `u64`, if the arity allows it.
    pub fn to_mask(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    fn trim(&mut self) {
        let rem = self.arity % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.arity && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// Panics if `i >= arity`.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.arity, "index {i} out of range {}", self.arity);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.arity {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.arity)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        debug_assert_eq!(self.arity, other.arity);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        debug_assert_eq!(self.arity, other.arity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        debug_assert_eq!(self.arity, other.arity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        debug_assert_eq!(self.arity, other.arity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> ElemSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * WORD + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

impl<'a> IntoIterator for &'a ElemSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in (0..n).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.arity.cmp(&other.arity)
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Deserializes a plain index list; the arity is the smallest one that fits.
/// Callers that know the carrier should re-embed with [`ElemSet::from_indices`].
impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        let arity = v.iter().max().map_or(0, |m| m + 1);
        Ok(ElemSet::from_indices(arity, v))
    }
}
