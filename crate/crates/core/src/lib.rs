//! Sequent calculi for intuitionistic propositional logic extended with modal rules:
//! a contraction-based G3 style prover, a terminating G4 style prover, orders for
//! termination checking, and a randomised harness comparing the two.

pub mod calculus;
pub mod gen;
pub mod harness;
pub mod orders;
pub mod prover;
pub mod syntax;
