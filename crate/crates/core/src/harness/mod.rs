//! Randomised checks comparing the two calculi and probing structural properties.

mod suites;

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::gen::{case_rng, random_formula, random_sequent, Shape};
use crate::prover::SearchBudget;
use crate::syntax::{Formula, Sequent};

pub use suites::{admissibility_suite, equivalence_fuzz, equivalence_fuzz_with, invertibility_suite, strict_sensible_suite};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    /// Node bound for a generated formula, and for the sum over a generated sequent.
    pub max_size: usize,
    pub atoms: usize,
    pub max_modal_depth: usize,
    pub modal_rules: Vec<String>,
    pub budget: SearchBudget,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 42,
            count: 200,
            max_size: 10,
            atoms: 3,
            max_modal_depth: 2,
            modal_rules: Vec::new(),
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("unknown modal rule `{0}`")]
    UnknownRule(String),
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("invalid rule set: {0}")]
    Rules(String),
}

impl FuzzConfig {
    pub fn shape(&self) -> Shape {
        Shape {
            max_size: self.max_size,
            atoms: self.atoms,
            max_modal_depth: self.max_modal_depth,
        }
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        if self.max_size == 0 {
            return Err(HarnessError::Zero("max_size"));
        }
        if self.atoms == 0 {
            return Err(HarnessError::Zero("atoms"));
        }
        Ok(())
    }
}

/// Deterministic in `(cfg.seed, index)`.
pub fn gen_formula(cfg: &FuzzConfig, index: u64) -> Formula {
    random_formula(&mut case_rng(cfg.seed, index), &cfg.shape())
}

/// Deterministic in `(cfg.seed, index)`.
pub fn gen_sequent(cfg: &FuzzConfig, index: u64) -> Sequent {
    random_sequent(&mut case_rng(cfg.seed, index), &cfg.shape())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    /// Verdicts agree, or the property held.
    Agree,
    Disagree,
    /// No definite verdict within the search budget.
    Indefinite,
}

impl Flag {
    fn label(self) -> &'static str {
        match self {
            Flag::Agree => "ok",
            Flag::Disagree => "FAIL",
            Flag::Indefinite => "indefinite",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub index: usize,
    pub check: String,
    /// Printed sequent that reproduces the case on its own.
    pub input: String,
    pub g3: Option<String>,
    pub g4: Option<String>,
    pub flag: Flag,
    pub note: String,
    pub termination_violation: bool,
    pub invalid_derivation: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub agree: usize,
    pub disagree: usize,
    pub indefinite: usize,
    /// G4 steps that failed to decrease in the Dyckhoff order.
    pub termination_violations: usize,
    /// Proofs rejected by the derivation checker.
    pub invalid_derivations: usize,
}

impl Summary {
    pub fn total(&self) -> usize {
        self.agree + self.disagree + self.indefinite
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: String,
    pub records: Vec<CaseRecord>,
    pub summary: Summary,
    /// Samples wanted per check.
    pub requested: usize,
    /// Assumptions the run relies on but cannot verify.
    pub caveats: Vec<String>,
}

/// Largest share of indefinite cases a run may have.
pub const MAX_INDEFINITE_FRACTION: f64 = 0.05;

impl Report {
    fn new(suite: &str, requested: usize) -> Self {
        Report {
            suite: suite.to_string(),
            records: Vec::new(),
            summary: Summary::default(),
            requested,
            caveats: Vec::new(),
        }
    }

    fn push(&mut self, rec: CaseRecord) {
        match rec.flag {
            Flag::Agree => self.summary.agree += 1,
            Flag::Disagree => self.summary.disagree += 1,
            Flag::Indefinite => self.summary.indefinite += 1,
        }
        self.summary.termination_violations += usize::from(rec.termination_violation);
        self.summary.invalid_derivations += usize::from(rec.invalid_derivation);
        self.records.push(rec);
    }

    pub fn indefinite_fraction(&self) -> f64 {
        match self.summary.total() {
            0 => 0.0,
            n => self.summary.indefinite as f64 / n as f64,
        }
    }

    pub fn calibrated(&self) -> bool {
        self.indefinite_fraction() < MAX_INDEFINITE_FRACTION
    }

    /// No disagreement and a calibrated share of indefinite cases.
    pub fn passed(&self) -> bool {
        self.summary.disagree == 0
            && self.summary.termination_violations == 0
            && self.summary.invalid_derivations == 0
            && self.calibrated()
    }

    pub fn records_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.records.iter().filter(move |r| r.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> + '_ {
        self.records.iter().filter(|r| r.flag == Flag::Disagree)
    }

    /// One tab-separated line per case: index, check, sequent, g3, g4, flag, note.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\tg3={}\tg4={}\t{}{}",
                r.index,
                r.check,
                r.input,
                r.g3.as_deref().unwrap_or("-"),
                r.g4.as_deref().unwrap_or("-"),
                r.flag.label(),
                if r.note.is_empty() { String::new() } else { format!("\t{}", r.note) }
            );
        }
        out
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            suite: &'a str,
            count: usize,
            #[serde(flatten)]
            summary: Summary,
            indefinite_fraction: f64,
            calibrated: bool,
            passed: bool,
            #[serde(skip_serializing_if = "<[String]>::is_empty")]
            caveats: &'a [String],
        }
        let doc = Doc {
            suite: &self.suite,
            count: self.summary.total(),
            summary: self.summary,
            indefinite_fraction: self.indefinite_fraction(),
            calibrated: self.calibrated(),
            passed: self.passed(),
            caveats: &self.caveats,
        };
        serde_json::to_string_pretty(&doc).expect("summary serializes")
    }
}
