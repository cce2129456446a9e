use std::sync::OnceLock;

use super::dsl::parse_rules_as;
use super::schema::{Provenance, RuleSchema};
use super::{Calculus, Style};

const G3IP: &str = "
rule Ax    { premises: none ; conclusion: G, p => p }
rule Lbot  { premises: none ; conclusion: G, false => D }
rule Rand  { premises: G => phi ; G => psi ; conclusion: G => phi & psi }
rule Land  { premises: G, phi, psi => D ; conclusion: G, phi & psi => D }
rule Ror0  { premises: G => phi ; conclusion: G => phi | psi }
rule Ror1  { premises: G => psi ; conclusion: G => phi | psi }
rule Lor   { premises: G, phi => D ; G, psi => D ; conclusion: G, phi | psi => D }
rule Rimp  { premises: G, phi => psi ; conclusion: G => phi -> psi }
rule Limp  { premises: G, (phi -> psi) => phi ; G, psi => D ; conclusion: G, (phi -> psi) => D }
";

// G3ip without Limp, followed by the four implication-left rules.
const G4IP_EXTRA: &str = "
rule Lpimp   { premises: G, p, phi => D ; conclusion: G, p, (p -> phi) => D }
rule Landimp { premises: G, (phi -> psi -> gamma) => D ; conclusion: G, (phi & psi -> gamma) => D }
rule Lorimp  { premises: G, (phi -> gamma), (psi -> gamma) => D ; conclusion: G, (phi | psi -> gamma) => D }
rule Limpimp { premises: G, (psi -> gamma) => phi -> psi ; gamma, G => D ; conclusion: G, ((phi -> psi) -> gamma) => D }
";

const MODAL: &str = "
rule R_K  { premises: G => phi ; conclusion: P, box G => box phi }
rule R_D  { premises: G, phi => _ ; conclusion: P, box G, box phi => D }
rule R_T  { premises: G, phi => D ; conclusion: G, box phi => D }
rule R_K4 { premises: G, box G => phi ; conclusion: P, box G => box phi }
rule R_GL { premises: G, box G, box phi => phi ; conclusion: P, box G => box phi }
rule R_SL { premises: P, box G, G, box phi => phi ; conclusion: box S, P, box G => box phi }
rule R_X  { premises: box G => phi ; conclusion: P, box G => box phi }
";

/// Names of the builtin modal rules, in library order.
pub const MODAL_RULE_NAMES: [&str; 7] = ["R_K", "R_D", "R_T", "R_K4", "R_GL", "R_SL", "R_X"];

fn parse_builtin(text: &str) -> Vec<RuleSchema> {
    let (rules, errors) = parse_rules_as(text, Provenance::Builtin);
    assert!(errors.is_empty(), "builtin rule text is malformed: {errors:?}");
    rules
}

struct Library {
    g3ip: Vec<RuleSchema>,
    g4ip: Vec<RuleSchema>,
    modal: Vec<RuleSchema>,
}

fn library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(|| {
        let g3ip = parse_builtin(G3IP);
        let mut g4ip: Vec<RuleSchema> = g3ip.iter().filter(|r| r.name != "Limp").cloned().collect();
        g4ip.extend(parse_builtin(G4IP_EXTRA));
        Library {
            g3ip,
            g4ip,
            modal: parse_builtin(MODAL),
        }
    })
}

/// Ax, L⊥, R∧, L∧, R∨ (two schemas), L∨, R→ and the L→ that repeats its principal formula.
pub fn g3ip() -> Calculus {
    Calculus {
        name: "G3ip".to_string(),
        rules: library().g3ip.clone(),
        style: Style::G3,
    }
}

/// G3ip with L→ replaced by Lp→, L∧→, L∨→ and L→→.
pub fn g4ip() -> Calculus {
    Calculus {
        name: "G4ip".to_string(),
        rules: library().g4ip.clone(),
        style: Style::G4,
    }
}

pub fn builtin_modal_rules() -> Vec<(&'static str, RuleSchema)> {
    MODAL_RULE_NAMES
        .iter()
        .zip(library().modal.iter())
        .map(|(n, r)| (*n, r.clone()))
        .collect()
}

pub fn modal_rule(name: &str) -> Option<RuleSchema> {
    library().modal.iter().find(|r| r.name == name).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{AnteItem, RuleKind, SuccPattern, Template};

    #[test]
    fn g3ip_shape() {
        let c = g3ip();
        assert_eq!(c.rules.len(), 9);
        assert!(c.rule("Lpimp").is_none());
        assert!(c.rules.iter().all(|r| r.premises.len() <= 2));
        let limp = c.rule("Limp").unwrap();
        let (principal, left) = limp.repeated_implication_left().unwrap();
        assert_eq!(left, 0);
        assert_eq!(principal.to_string(), "phi -> psi");
    }

    #[test]
    fn g4ip_shape() {
        let c = g4ip();
        let names: Vec<&str> = c.rules.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            ["Ax", "Lbot", "Rand", "Land", "Ror0", "Ror1", "Lor", "Rimp", "Lpimp", "Landimp", "Lorimp", "Limpimp"]
        );
        assert_eq!(c.rule("Lpimp").unwrap().conclusion.to_string(), "G, p, (p -> phi) => D");
        let l = c.rule("Limpimp").unwrap();
        assert_eq!(l.premises[0].to_string(), "G, (psi -> gamma) => phi -> psi");
        assert_eq!(l.premises[1].to_string(), "gamma, G => D");
        assert_eq!(
            c.rule("Landimp").unwrap().premises[0].to_string(),
            "G, (phi -> psi -> gamma) => D"
        );
        assert!(c.rules.iter().all(|r| r.repeated_implication_left().is_none()));
    }

    #[test]
    fn modal_kinds() {
        let kind = |n| modal_rule(n).unwrap().kind;
        assert_eq!(kind("R_K"), RuleKind::RightModal);
        assert_eq!(kind("R_D"), RuleKind::OtherModal);
        assert_eq!(kind("R_T"), RuleKind::OtherModal);
        assert_eq!(kind("R_GL"), RuleKind::RightModal);
        assert_eq!(kind("R_K4"), RuleKind::RightModal);
        assert_eq!(kind("R_SL"), RuleKind::RightModal);
        assert_eq!(kind("R_X"), RuleKind::RightModal);
        let rsl = modal_rule("R_SL").unwrap();
        assert_eq!(rsl.conclusion.antecedent[0], AnteItem::BoxedContext(0, "S".into()));
        let rd = modal_rule("R_D").unwrap();
        assert_eq!(rd.premises[0].succedent, SuccPattern::Empty);
        assert_eq!(
            modal_rule("R_K").unwrap().conclusion.succedent,
            SuccPattern::Formula(Template::Modal(0, Box::new(Template::var("phi"))))
        );
    }

    #[test]
    fn propositional_kinds() {
        let c = g4ip();
        assert_eq!(c.rule("Ax").unwrap().kind, RuleKind::Axiom);
        assert_eq!(c.rule("Lbot").unwrap().kind, RuleKind::Axiom);
        assert_eq!(c.rule("Rand").unwrap().kind, RuleKind::Right);
        assert_eq!(c.rule("Rimp").unwrap().kind, RuleKind::Right);
        assert_eq!(c.rule("Land").unwrap().kind, RuleKind::Left);
        assert_eq!(c.rule("Limpimp").unwrap().kind, RuleKind::Left);
    }
}
