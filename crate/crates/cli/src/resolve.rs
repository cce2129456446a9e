//! Turning command-line names, lists and files into calculi, rules and weights.

use std::fs;
use std::path::Path;

use g4ix_core::calculus::{build_g3ix, build_g4ix, modal_rule, parse_rules, Calculus, RuleSchema, Style};
use g4ix_core::orders::{check_schema_termination, LinearWeight, SamplingConfig, Verdict};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unparsable input, unknown names. Exit 3.
    #[error("{0}")]
    Input(String),
    /// The termination guard refused to run the G4 engine. Exit 4.
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Refused(_) => 4,
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Letter suffixes of calculus names such as `G4iKD`, longest first.
const LETTERS: [(&str, &str); 7] = [
    ("GL", "R_GL"),
    ("SL", "R_SL"),
    ("K", "R_K"),
    ("D", "R_D"),
    ("T", "R_T"),
    ("4", "R_K4"),
    ("X", "R_X"),
];

fn builtin(name: &str) -> Result<RuleSchema, CliError> {
    modal_rule(name).ok_or_else(|| input(format!("unknown modal rule `{name}`")))
}

/// A comma separated list of builtin rule names, or a file of rules in the DSL.
pub fn rules_arg(arg: &str) -> Result<Vec<RuleSchema>, CliError> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).map_err(|e| input(format!("{arg}: {e}")))?;
        return rules_text(&text, arg);
    }
    arg.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(builtin)
        .collect()
}

pub fn rules_text(text: &str, origin: &str) -> Result<Vec<RuleSchema>, CliError> {
    let (rules, errs) = parse_rules(text);
    if errs.is_empty() {
        Ok(rules)
    } else {
        let lines: Vec<String> = errs.iter().map(|e| format!("{origin}: {e}")).collect();
        Err(input(lines.join("\n")))
    }
}

/// `G3ip`, `G4ip`, `G3i+R_K,R_D`, or letter forms such as `G4iKT`.
pub fn calculus_name(name: &str) -> Result<(Style, Vec<RuleSchema>), CliError> {
    let bad = || input(format!("unknown calculus `{name}`; expected G3ip, G4ip, G3i+RULES, G4i+RULES or a form like G4iKD"));
    let (style, rest) = if let Some(r) = name.strip_prefix("G3i") {
        (Style::G3, r)
    } else if let Some(r) = name.strip_prefix("G4i") {
        (Style::G4, r)
    } else {
        return Err(bad());
    };
    if rest == "p" || rest.is_empty() {
        return Ok((style, Vec::new()));
    }
    if let Some(list) = rest.strip_prefix('+') {
        return Ok((style, rules_arg(list)?));
    }
    let mut rules = Vec::new();
    let mut rest = rest;
    while !rest.is_empty() {
        let (letters, rule) = LETTERS.iter().find(|(l, _)| rest.starts_with(l)).ok_or_else(bad)?;
        rules.push(builtin(rule)?);
        rest = &rest[letters.len()..];
    }
    Ok((style, rules))
}

pub fn build(style: Style, modal: &[RuleSchema]) -> Result<Calculus, CliError> {
    let built = match style {
        Style::G3 => build_g3ix(modal),
        Style::G4 => build_g4ix(modal),
    };
    built.map_err(|errs| input(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")))
}

/// `dyckhoff`, or a TOML file with the keys `and`, `or`, `imp` and `modal`.
pub fn order(arg: &str) -> Result<LinearWeight, CliError> {
    if arg.eq_ignore_ascii_case("dyckhoff") {
        return Ok(LinearWeight::DYCKHOFF);
    }
    let text = fs::read_to_string(arg).map_err(|e| input(format!("{arg}: {e}")))?;
    let w: LinearWeight = toml::from_str(&text).map_err(|e| input(format!("{arg}: {e}")))?;
    w.check().map_err(|e| input(format!("{arg}: {e}")))?;
    Ok(w)
}

/// Refuses a calculus with a rule not shown terminating in the Dyckhoff order.
pub fn termination_guard(c: &Calculus) -> Result<(), CliError> {
    let cfg = SamplingConfig::default();
    let bad: Vec<String> = c
        .rules
        .iter()
        .filter(|r| !r.is_axiom())
        .filter_map(|r| match check_schema_termination(&LinearWeight::DYCKHOFF, r, &cfg) {
            Verdict::Terminating => None,
            v => Some(format!("  {}: {v}", r.name)),
        })
        .collect();
    if bad.is_empty() {
        return Ok(());
    }
    Err(CliError::Refused(format!(
        "the G4 engine requires a terminating calculus, and check-termination fails for {}:\n{}\nrerun with --force to search anyway",
        c.name,
        bad.join("\n")
    )))
}
