//! Rule schemas, the builtin calculi, the implication rule generated from a right modal
//! rule, and assembly of the G3 and G4 extensions.

pub mod builtin;
mod dsl;
mod matching;
mod schema;

use std::fmt;

pub use builtin::{builtin_modal_rules, g3ip, g4ip, modal_rule, MODAL_RULE_NAMES};
pub use dsl::{parse_rules, print_rules, DslValidationError};
pub use matching::{instantiate_premises, match_conclusion, match_pattern, MatchMode};
pub use schema::{
    AnteItem, CalculusError, Instantiation, Pattern, Provenance, RuleKind, RuleSchema, Sort,
    SuccPattern, Template,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    G3,
    G4,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::G3 => "G3",
            Style::G4 => "G4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calculus {
    pub name: String,
    pub rules: Vec<RuleSchema>,
    pub style: Style,
}

impl Calculus {
    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn rule_names(&self) -> Vec<&str> {
        self.rules.iter().map(|r| r.name.as_str()).collect()
    }

    /// No user-defined rules.
    pub fn is_builtin_only(&self) -> bool {
        self.rules.iter().all(RuleSchema::is_builtin_family)
    }

    pub fn is_nonflat(&self) -> bool {
        self.rules.iter().all(|r| r.is_axiom() || r.is_nonflat())
    }

    /// One line per non-axiom rule that is not nonflat.
    pub fn nonflat_warnings(&self) -> Vec<String> {
        self.rules
            .iter()
            .filter(|r| !r.is_axiom() && !r.is_nonflat())
            .map(|r| format!("rule {} is flat: its conclusion may contain no connective or modal operator", r.name))
            .collect()
    }
}

fn fresh_name(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.iter().any(|t| t == n))
        .unwrap()
}

/// From a right modal rule `S1 .. Sn / C ⇒ ⊡φ` builds
/// `S1 .. Sn, (C, ψ ⇒ Δ) / (C, ⊡φ → ψ ⇒ Δ)` with fresh `ψ` and `Δ`.
pub fn transform_right_modal(r: &RuleSchema) -> Result<RuleSchema, CalculusError> {
    if !r.is_right_modal() {
        return Err(CalculusError::NotRightModal(r.name.clone()));
    }
    let SuccPattern::Formula(boxed) = &r.conclusion.succedent else {
        return Err(CalculusError::NotRightModal(r.name.clone()));
    };
    let taken: Vec<String> = r
        .premises
        .iter()
        .chain(std::iter::once(&r.conclusion))
        .flat_map(|p| p.vars().into_iter().map(|(v, _)| v))
        .collect();
    let psi = fresh_name(&taken, "psi");
    let delta = fresh_name(&taken, "D");

    let mut side = r.conclusion.antecedent.clone();
    side.push(AnteItem::Formula(Template::var(&psi)));
    let mut premises = r.premises.clone();
    premises.push(Pattern {
        antecedent: side,
        succedent: SuccPattern::Var(delta.clone()),
    });

    let mut ante = r.conclusion.antecedent.clone();
    ante.push(AnteItem::Formula(Template::imp(boxed.clone(), Template::var(&psi))));
    let conclusion = Pattern {
        antecedent: ante,
        succedent: SuccPattern::Var(delta),
    };
    Ok(RuleSchema::new(
        &format!("{}_imp", r.name),
        premises,
        conclusion,
        Provenance::GeneratedFrom(r.name.clone()),
    ))
}

fn validated(modal: &[RuleSchema]) -> Result<Vec<RuleSchema>, Vec<DslValidationError>> {
    let mut errors = Vec::new();
    let mut out: Vec<RuleSchema> = Vec::new();
    for r in modal {
        for message in r.validate() {
            errors.push(DslValidationError {
                line: 0,
                rule: Some(r.name.clone()),
                message,
            });
        }
        if !out.iter().any(|o| o.name == r.name && o.same_shape(r)) {
            out.push(r.clone());
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn extension_name(prefix: &str, modal: &[RuleSchema]) -> String {
    if modal.is_empty() {
        format!("{prefix}p")
    } else {
        let names: Vec<&str> = modal.iter().map(|r| r.name.as_str()).collect();
        format!("{prefix}+{}", names.join(","))
    }
}

/// G3ip together with the given modal rules.
pub fn build_g3ix(modal: &[RuleSchema]) -> Result<Calculus, Vec<DslValidationError>> {
    let modal = validated(modal)?;
    let mut c = g3ip();
    c.name = extension_name("G3i", &modal);
    c.rules.extend(modal);
    Ok(c)
}

/// G4ip together with the given modal rules and the implication rule generated from each
/// right modal rule. Generated rules whose shape duplicates an existing rule are dropped.
pub fn build_g4ix(modal: &[RuleSchema]) -> Result<Calculus, Vec<DslValidationError>> {
    let modal = validated(modal)?;
    let mut c = g4ip();
    c.name = extension_name("G4i", &modal);
    let generated: Vec<RuleSchema> = modal
        .iter()
        .filter(|r| r.is_right_modal())
        .map(|r| transform_right_modal(r).expect("right modal"))
        .collect();
    c.rules.extend(modal);
    for g in generated {
        if !c.rules.iter().any(|r| r.same_shape(&g)) {
            c.rules.push(g);
        }
    }
    Ok(c)
}
