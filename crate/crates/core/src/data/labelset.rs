use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A subset of a fixed label universe `{0, .., M-1}`, stored as a bitset.
///
/// Ordering compares the bit patterns as unsigned integers in which label
/// `j` carries weight `2^j`; sets over a smaller universe order first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelSet {
    words: Vec<u64>,
    universe: usize,
}

impl LabelSet {
    pub fn empty(universe: usize) -> Self {
        LabelSet {
            words: vec![0; universe.div_ceil(WORD_BITS)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for j in 0..universe {
            set.insert_unchecked(j);
        }
        set
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(universe);
        for j in indices {
            set.insert(j)?;
        }
        Ok(set)
    }

    /// Builds a set from a 0/1 membership vector of length `M`.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut set = Self::empty(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b {
                set.insert_unchecked(j);
            }
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, label: usize) -> Result<()> {
        if label >= self.universe {
            return Err(Error::LabelOutOfRange {
                index: label,
                universe: self.universe,
            });
        }
        self.insert_unchecked(label);
        Ok(())
    }

    fn insert_unchecked(&mut self, label: usize) {
        self.words[label / WORD_BITS] |= 1 << (label % WORD_BITS);
    }

    pub fn remove(&mut self, label: usize) {
        if label < self.universe {
            self.words[label / WORD_BITS] &= !(1 << (label % WORD_BITS));
        }
    }

    pub fn contains(&self, label: usize) -> bool {
        label < self.universe && self.words[label / WORD_BITS] & (1 << (label % WORD_BITS)) != 0
    }

    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.cardinality() == self.universe
    }

    /// Member labels in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&j| self.contains(j))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.universe).map(|j| self.contains(j)).collect()
    }

    fn check_universe(&self, other: &LabelSet) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch {
                left: self.universe,
                right: other.universe,
            });
        }
        Ok(())
    }

    fn zip_words(&self, other: &LabelSet, op: impl Fn(u64, u64) -> u64) -> Result<LabelSet> {
        self.check_universe(other)?;
        Ok(LabelSet {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
            universe: self.universe,
        })
    }

    pub fn union(&self, other: &LabelSet) -> Result<LabelSet> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &LabelSet) -> Result<LabelSet> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn symmetric_difference(&self, other: &LabelSet) -> Result<LabelSet> {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> LabelSet {
        let mut out = LabelSet::empty(self.universe);
        for j in 0..self.universe {
            if !self.contains(j) {
                out.insert_unchecked(j);
            }
        }
        out
    }

    /// `|self Δ other|`, the number of labels on which the two sets disagree.
    pub fn symdiff_count(&self, other: &LabelSet) -> Result<usize> {
        Ok(self.symmetric_difference(other)?.cardinality())
    }

    pub fn is_subset_of(&self, other: &LabelSet) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    /// Restricts the set to `labels`, re-indexed into a universe of
    /// `labels.len()`: position `i` of the result is `labels[i]` here.
    pub fn project(&self, labels: &[usize]) -> LabelSet {
        let mut out = LabelSet::empty(labels.len());
        for (i, &j) in labels.iter().enumerate() {
            if self.contains(j) {
                out.insert_unchecked(i);
            }
        }
        out
    }
}

/// Free-function form of [`LabelSet::symdiff_count`].
pub fn labelset_symdiff_count(a: &LabelSet, b: &LabelSet) -> Result<usize> {
    a.symdiff_count(b)
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet{{")?;
        for (i, j) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}/{}", self.universe)
    }
}
