use std::collections::BTreeSet;
use std::fmt;

use super::{FMultiset, Formula};

/// A single-conclusion sequent `Γ ⇒ Δ` with `Δ` empty or a single formula.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: FMultiset,
    pub succedent: Option<Formula>,
}

impl Sequent {
    pub fn new(antecedent: FMultiset, succedent: Option<Formula>) -> Self {
        Sequent {
            antecedent,
            succedent,
        }
    }

    /// `⇒ φ`
    pub fn theorem(goal: Formula) -> Self {
        Sequent::new(FMultiset::new(), Some(goal))
    }

    pub fn from_parts<I: IntoIterator<Item = Formula>>(ante: I, succ: Option<Formula>) -> Self {
        Sequent::new(ante.into_iter().collect(), succ)
    }

    /// `S^a ∪ S^s`, the multiset compared by the sequent order.
    pub fn all_formulas(&self) -> FMultiset {
        let mut m = self.antecedent.clone();
        if let Some(s) = &self.succedent {
            m.insert(s.clone());
        }
        m
    }

    /// The antecedent with multiplicities dropped, paired with the succedent.
    pub fn set_projection(&self) -> (BTreeSet<Formula>, Option<Formula>) {
        (
            self.antecedent.distinct().cloned().collect(),
            self.succedent.clone(),
        )
    }

    pub fn size(&self) -> usize {
        self.antecedent.iter().map(Formula::size).sum::<usize>()
            + self.succedent.as_ref().map_or(0, Formula::size)
    }

    /// `I(Γ ⇒ Δ) = ⋀Γ → ⋁Δ`. The conjunction folds left over the canonical order,
    /// an empty succedent reads as `⊥`, and an empty antecedent yields `⋁Δ` alone.
    pub fn interpret(&self) -> Formula {
        let disj = self.succedent.clone().unwrap_or(Formula::Bot);
        let mut items = self.antecedent.iter().cloned();
        match items.next() {
            None => disj,
            Some(first) => {
                let conj = items.fold(first, Formula::and);
                Formula::imp(conj, disj)
            }
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_sequent(self))
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
