//! Formula weights, the multiset extension of the weight order, the induced order on
//! sequents, and termination checks for rule instances and schemas.

mod termination;

use serde::{Deserialize, Serialize};

use crate::syntax::{FMultiset, Formula, Sequent};

pub use termination::{check_schema_termination, SamplingConfig, Verdict};

/// Positive weight on formulas. Atoms and ⊥ must weigh 1 and everything else more.
pub trait WeightFunction: Sync {
    fn weight(&self, f: &Formula) -> u64;

    /// The coefficients when the weight is linear, which enables the symbolic
    /// termination criterion.
    fn as_linear(&self) -> Option<LinearWeight> {
        None
    }
}

/// `w(a ∘ b) = w(a) + w(b) + k∘` and `w(⊡a) = w(a) + modal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearWeight {
    pub and: u64,
    pub or: u64,
    pub imp: u64,
    pub modal: u64,
}

impl LinearWeight {
    pub const DYCKHOFF: LinearWeight = LinearWeight {
        and: 2,
        or: 1,
        imp: 1,
        modal: 1,
    };

    /// A zero modal increment would give `⊡p` the weight of an atom.
    pub fn check(&self) -> Result<(), String> {
        if self.modal == 0 {
            Err("modal increment must be at least 1".into())
        } else {
            Ok(())
        }
    }
}

impl Default for LinearWeight {
    fn default() -> Self {
        LinearWeight::DYCKHOFF
    }
}

impl WeightFunction for LinearWeight {
    fn weight(&self, f: &Formula) -> u64 {
        match f {
            Formula::Bot | Formula::Atom(_) => 1,
            Formula::And(a, b) => self.weight(a) + self.weight(b) + self.and,
            Formula::Or(a, b) => self.weight(a) + self.weight(b) + self.or,
            Formula::Imp(a, b) => self.weight(a) + self.weight(b) + self.imp,
            Formula::Modal(_, a) => self.weight(a) + self.modal,
        }
    }

    fn as_linear(&self) -> Option<LinearWeight> {
        Some(*self)
    }
}

/// Wraps an arbitrary evaluator. Only sampling applies to it.
pub struct FnWeight<F>(pub F);

impl<F: Fn(&Formula) -> u64 + Sync> WeightFunction for FnWeight<F> {
    fn weight(&self, f: &Formula) -> u64 {
        (self.0)(f)
    }
}

pub fn weight_dyckhoff(f: &Formula) -> u64 {
    LinearWeight::DYCKHOFF.weight(f)
}

/// `delta` is obtained from `gamma` by replacing a nonempty part of it with formulas that
/// are each lighter than some replaced formula.
pub fn multiset_less(w: &dyn WeightFunction, delta: &FMultiset, gamma: &FMultiset) -> bool {
    let removed = gamma.difference(delta);
    if removed.is_empty() {
        return false;
    }
    let heaviest = removed.distinct().map(|f| w.weight(f)).max().unwrap_or(0);
    delta.difference(gamma).distinct().all(|f| w.weight(f) < heaviest)
}

pub fn sequent_less(w: &dyn WeightFunction, s0: &Sequent, s1: &Sequent) -> bool {
    multiset_less(w, &s0.all_formulas(), &s1.all_formulas())
}

/// Every premise precedes the conclusion.
pub fn check_instance_decrease(w: &dyn WeightFunction, premises: &[Sequent], conclusion: &Sequent) -> bool {
    premises.iter().all(|p| sequent_less(w, p, conclusion))
}
