use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot remove {requested} copies of {formula}: only {available} present")]
pub struct InsufficientMultiplicity {
    pub formula: Formula,
    pub requested: u32,
    pub available: u32,
}

/// Finite multiset of formulas. Iteration follows the canonical formula order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FMultiset {
    counts: BTreeMap<Formula, u32>,
}

impl FMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(f: Formula) -> Self {
        let mut m = Self::new();
        m.insert(f);
        m
    }

    pub fn insert(&mut self, f: Formula) {
        self.insert_n(f, 1);
    }

    pub fn insert_n(&mut self, f: Formula, n: u32) {
        if n == 0 {
            return;
        }
        let slot = self.counts.entry(f).or_insert(0);
        *slot = slot.checked_add(n).expect("multiplicity overflow");
    }

    pub fn count(&self, f: &Formula) -> u32 {
        self.counts.get(f).copied().unwrap_or(0)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.counts.contains_key(f)
    }

    /// Removes exactly `k` copies of `f`.
    pub fn remove(&mut self, f: &Formula, k: u32) -> Result<(), InsufficientMultiplicity> {
        let available = self.count(f);
        if available < k {
            return Err(InsufficientMultiplicity {
                formula: f.clone(),
                requested: k,
                available,
            });
        }
        if available == k {
            self.counts.remove(f);
        } else if k > 0 {
            *self.counts.get_mut(f).unwrap() -= k;
        }
        Ok(())
    }

    pub fn without(&self, f: &Formula, k: u32) -> Result<FMultiset, InsufficientMultiplicity> {
        let mut m = self.clone();
        m.remove(f, k)?;
        Ok(m)
    }

    pub fn union(&self, other: &FMultiset) -> FMultiset {
        let mut m = self.clone();
        m.extend_from(other);
        m
    }

    pub fn extend_from(&mut self, other: &FMultiset) {
        for (f, n) in other.iter_counts() {
            self.insert_n(f.clone(), n);
        }
    }

    /// `self - other`, saturating at zero.
    pub fn difference(&self, other: &FMultiset) -> FMultiset {
        let mut m = FMultiset::new();
        for (f, n) in self.iter_counts() {
            let k = other.count(f);
            if n > k {
                m.insert_n(f.clone(), n - k);
            }
        }
        m
    }

    pub fn is_submultiset_of(&self, other: &FMultiset) -> bool {
        self.iter_counts().all(|(f, n)| other.count(f) >= n)
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&n| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    /// Distinct formulas with their multiplicities.
    pub fn iter_counts(&self) -> impl Iterator<Item = (&Formula, u32)> + '_ {
        self.counts.iter().map(|(f, &n)| (f, n))
    }

    pub fn distinct(&self) -> btree_map::Keys<'_, Formula, u32> {
        self.counts.keys()
    }

    /// Every occurrence, repeated according to multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.counts
            .iter()
            .flat_map(|(f, &n)| std::iter::repeat_n(f, n as usize))
    }

    pub fn map<F: FnMut(&Formula) -> Formula>(&self, mut op: F) -> FMultiset {
        let mut m = FMultiset::new();
        for (f, n) in self.iter_counts() {
            m.insert_n(op(f), n);
        }
        m
    }

    /// `⊡_i Γ`: prefix every element with the modal operator.
    pub fn boxed(&self, index: u32) -> FMultiset {
        self.map(|f| Formula::modal(index, f.clone()))
    }
}

impl FromIterator<Formula> for FMultiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut m = FMultiset::new();
        for f in iter {
            m.insert(f);
        }
        m
    }
}

impl Extend<Formula> for FMultiset {
    fn extend<I: IntoIterator<Item = Formula>>(&mut self, iter: I) {
        for f in iter {
            self.insert(f);
        }
    }
}

impl fmt::Debug for FMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for FMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
