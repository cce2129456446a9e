//! Backward proof search, derivations, and the normal-form predicates on derivations.

mod derivation;
mod normal;
mod search;

use std::fmt;

use thiserror::Error;

pub use derivation::{check_derivation, Derivation, DerivationJsonError};
pub use normal::{is_irreducible, is_sensible, is_strict, is_strict_sensible_throughout};
pub use search::{find_strict_sensible, prove_g3, prove_g3_with, prove_g4, prove_g4_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnknownReason {
    BudgetExhausted,
    IncompleteStrategy,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::BudgetExhausted => "budget-exhausted",
            UnknownReason::IncompleteStrategy => "incomplete-strategy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    Provable(Derivation),
    Unprovable,
    Unknown(UnknownReason),
}

impl ProofResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, ProofResult::Provable(_))
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, ProofResult::Unknown(_))
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            ProofResult::Provable(d) => Some(d),
            _ => None,
        }
    }

    /// `PROVABLE`, `UNPROVABLE`, or `UNKNOWN (reason)`.
    pub fn verdict(&self) -> String {
        match self {
            ProofResult::Provable(_) => "PROVABLE".into(),
            ProofResult::Unprovable => "UNPROVABLE".into(),
            ProofResult::Unknown(r) => format!("UNKNOWN ({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 128,
            max_nodes: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("rule `{rule}` applied to {conclusion} does not decrease in the Dyckhoff order")]
    TerminationViolation { rule: String, conclusion: String },
    #[error("sequent {0} is not irreducible")]
    NotIrreducible(String),
}
