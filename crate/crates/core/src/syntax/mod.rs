//! Formulas, multisets of formulas, sequents, and their concrete syntax.

mod formula;
mod multiset;
pub(crate) mod parse;
pub(crate) mod print;
mod sequent;

pub use formula::Formula;
pub use multiset::{FMultiset, InsufficientMultiplicity};
pub use parse::{parse_formula, parse_sequent, ParseError};
pub use print::{print_formula, print_sequent};
pub use sequent::Sequent;
