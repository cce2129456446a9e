use super::Derivation;
use crate::calculus::{Calculus, RuleKind};
use crate::syntax::{Formula, Sequent};

/// No conjunction, disjunction, or ⊥ in the antecedent, and no atom `p` next to an
/// implication `p → ψ`. The succedent is unconstrained.
pub fn is_irreducible(s: &Sequent) -> bool {
    let mut atoms = Vec::new();
    let mut guards = Vec::new();
    for f in s.antecedent.distinct() {
        match f {
            Formula::And(..) | Formula::Or(..) | Formula::Bot => return false,
            Formula::Atom(_) => atoms.push(f),
            Formula::Imp(a, _) if a.is_atom() => guards.push(&**a),
            _ => {}
        }
    }
    !guards.iter().any(|g| atoms.contains(g))
}

/// The root is not a left rule whose principal formula is `p → ψ` with `p` an atom.
pub fn is_sensible(c: &Calculus, d: &Derivation) -> bool {
    let Some(rule) = c.rule(&d.rule) else {
        return true;
    };
    rule.kind != RuleKind::Left
        || !rule
            .principal_formulas(&d.instantiation)
            .iter()
            .any(|f| matches!(f, Formula::Imp(a, _) if a.is_atom()))
}

/// When the root is the implication-left rule that repeats its principal formula and that
/// formula is `⊡φ → ψ`, the left premise is closed by an axiom or a right modal rule.
pub fn is_strict(c: &Calculus, d: &Derivation) -> bool {
    let Some(rule) = c.rule(&d.rule) else {
        return true;
    };
    let Some((t, i)) = rule.repeated_implication_left() else {
        return true;
    };
    let Ok(principal) = t.instantiate(&d.instantiation) else {
        return true;
    };
    if !matches!(&principal, Formula::Imp(a, _) if matches!(**a, Formula::Modal(..))) {
        return true;
    }
    d.children
        .get(i)
        .and_then(|left| c.rule(&left.rule))
        .is_some_and(|r| r.is_axiom() || r.kind == RuleKind::RightModal)
}

/// Sensible and strict at every node whose conclusion is irreducible.
pub fn is_strict_sensible_throughout(c: &Calculus, d: &Derivation) -> bool {
    d.nodes()
        .into_iter()
        .filter(|n| is_irreducible(&n.conclusion))
        .all(|n| is_sensible(c, n) && is_strict(c, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{build_g3ix, g3ip, modal_rule, Instantiation};
    use crate::syntax::{parse_formula, parse_sequent};

    fn seq(t: &str) -> Sequent {
        parse_sequent(t).unwrap()
    }

    fn f(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    #[test]
    fn irreducibility() {
        assert!(!is_irreducible(&seq("p | q => r")));
        assert!(!is_irreducible(&seq("p & q => r")));
        assert!(!is_irreducible(&seq("false => r")));
        assert!(!is_irreducible(&seq("p, p -> q => r")));
        assert!(is_irreducible(&seq("p, []p -> q => p & q")));
        assert!(is_irreducible(&seq("q, p -> q => r")));
    }

    fn limp(principal: &str, left: Derivation, right: Derivation) -> Derivation {
        let Formula::Imp(a, b) = f(principal) else { panic!() };
        let inst = Instantiation::new()
            .with_context("G", [])
            .with_formula("phi", (*a).clone())
            .with_formula("psi", (*b).clone())
            .with_succedent("D", Some(f("q")));
        Derivation {
            conclusion: Sequent::from_parts([f(principal)], Some(f("q"))),
            rule: "Limp".into(),
            instantiation: inst,
            children: vec![left, right],
        }
    }

    fn stub(rule: &str) -> Derivation {
        Derivation::leaf(seq("=> p"), rule, Instantiation::new())
    }

    #[test]
    fn sensibility() {
        let c = g3ip();
        assert!(is_sensible(&c, &stub("Rimp")));
        assert!(!is_sensible(&c, &limp("p -> q", stub("Ax"), stub("Ax"))));
        assert!(is_sensible(&c, &limp("(p -> q) -> r", stub("Ax"), stub("Ax"))));
    }

    #[test]
    fn strictness() {
        let c = build_g3ix(&[modal_rule("R_K").unwrap()]).unwrap();
        assert!(is_strict(&c, &stub("Rimp")));
        assert!(is_strict(&c, &limp("[]p -> q", stub("R_K"), stub("Ax"))));
        assert!(is_strict(&c, &limp("[]p -> q", stub("Ax"), stub("Ax"))));
        assert!(!is_strict(&c, &limp("[]p -> q", stub("Land"), stub("Ax"))));
        assert!(is_strict(&c, &limp("p -> q", stub("Land"), stub("Ax"))));
    }
}
