use std::collections::BTreeSet;

use super::schema::{AnteItem, Instantiation, Pattern, RuleSchema, SuccPattern, Template};
use crate::syntax::{FMultiset, Formula, Sequent};

/// How leftover antecedent formulas are distributed over context metavariables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Boxed contexts take every suitably boxed formula; the rest goes to the first plain
    /// context. Only principal-formula choices are enumerated.
    #[default]
    Greedy,
    /// Every distribution of the leftover formulas over the context slots.
    Exhaustive,
}

#[derive(Debug, Clone)]
enum Slot {
    Plain(String),
    Boxed(u32, String),
}

impl Slot {
    fn accepts(&self, f: &Formula) -> bool {
        match self {
            Slot::Plain(_) => true,
            Slot::Boxed(i, _) => matches!(f, Formula::Modal(j, _) if j == i),
        }
    }
}

/// All instantiations under which the rule's conclusion is exactly `s`, deduplicated and
/// in canonical order.
pub fn match_conclusion(r: &RuleSchema, s: &Sequent, mode: MatchMode) -> Vec<Instantiation> {
    let prefer = |name: &str| {
        r.premises
            .iter()
            .any(|p| p.vars().iter().any(|(v, _)| v == name))
    };
    match_pattern_with(&r.conclusion, s, mode, &prefer)
}

/// Matches a bare pattern; in greedy mode boxed formulas go to the first boxed context.
pub fn match_pattern(pat: &Pattern, s: &Sequent, mode: MatchMode) -> Vec<Instantiation> {
    match_pattern_with(pat, s, mode, &|_| false)
}

fn match_pattern_with(
    pat: &Pattern,
    s: &Sequent,
    mode: MatchMode,
    prefer: &dyn Fn(&str) -> bool,
) -> Vec<Instantiation> {
    let mut inst = Instantiation::new();
    let ok = match (&pat.succedent, &s.succedent) {
        (SuccPattern::Empty, None) => true,
        (SuccPattern::Formula(t), Some(f)) => t.matches(f, &mut inst),
        (SuccPattern::Var(v), succ) => inst.bind_succedent(v, succ.clone()),
        _ => false,
    };
    if !ok {
        return Vec::new();
    }

    let mut templates = Vec::new();
    let mut slots = Vec::new();
    for item in &pat.antecedent {
        match item {
            AnteItem::Formula(t) => templates.push(t),
            AnteItem::Context(v) => slots.push(Slot::Plain(v.clone())),
            AnteItem::BoxedContext(i, v) => slots.push(Slot::Boxed(*i, v.clone())),
        }
    }
    // Greedy: preferred boxed slots first (those whose context reappears in a premise).
    let mut greedy_order: Vec<usize> = (0..slots.len()).collect();
    greedy_order.sort_by_key(|&k| match &slots[k] {
        Slot::Boxed(_, v) if prefer(v) => 0,
        Slot::Boxed(..) => 1,
        Slot::Plain(_) => 2,
    });

    let mut out = BTreeSet::new();
    let mut cx = Ctx {
        templates: &templates,
        slots: &slots,
        greedy_order: &greedy_order,
        mode,
        out: &mut out,
    };
    cx.choose(0, s.antecedent.clone(), inst);
    out.into_iter().collect()
}

struct Ctx<'a> {
    templates: &'a [&'a Template],
    slots: &'a [Slot],
    greedy_order: &'a [usize],
    mode: MatchMode,
    out: &'a mut BTreeSet<Instantiation>,
}

impl Ctx<'_> {
    fn choose(&mut self, k: usize, remaining: FMultiset, inst: Instantiation) {
        if k == self.templates.len() {
            self.distribute(remaining, inst);
            return;
        }
        let t = self.templates[k];
        for f in remaining.distinct() {
            let mut next = inst.clone();
            if t.matches(f, &mut next) {
                let rest = remaining.without(f, 1).expect("chosen formula is present");
                self.choose(k + 1, rest, next);
            }
        }
    }

    fn distribute(&mut self, remaining: FMultiset, inst: Instantiation) {
        if self.slots.is_empty() {
            if remaining.is_empty() {
                self.out.insert(inst);
            }
            return;
        }
        match self.mode {
            MatchMode::Greedy => {
                let mut parts = vec![FMultiset::new(); self.slots.len()];
                for (f, n) in remaining.iter_counts() {
                    let Some(&k) = self.greedy_order.iter().find(|&&k| self.slots[k].accepts(f)) else {
                        return;
                    };
                    parts[k].insert_n(f.clone(), n);
                }
                self.bind(parts, inst);
            }
            MatchMode::Exhaustive => {
                let items: Vec<(Formula, u32)> =
                    remaining.iter_counts().map(|(f, n)| (f.clone(), n)).collect();
                let parts = vec![FMultiset::new(); self.slots.len()];
                self.enumerate(&items, 0, parts, &inst);
            }
        }
    }

    fn enumerate(&mut self, items: &[(Formula, u32)], i: usize, parts: Vec<FMultiset>, inst: &Instantiation) {
        if i == items.len() {
            self.bind(parts, inst.clone());
            return;
        }
        let (f, n) = &items[i];
        let eligible: Vec<usize> = (0..self.slots.len())
            .filter(|&k| self.slots[k].accepts(f))
            .collect();
        if eligible.is_empty() {
            return;
        }
        self.compositions(items, i, f, *n, &eligible, 0, parts, inst);
    }

    #[allow(clippy::too_many_arguments)]
    fn compositions(
        &mut self,
        items: &[(Formula, u32)],
        i: usize,
        f: &Formula,
        left: u32,
        eligible: &[usize],
        e: usize,
        parts: Vec<FMultiset>,
        inst: &Instantiation,
    ) {
        if e + 1 == eligible.len() {
            let mut parts = parts;
            parts[eligible[e]].insert_n(f.clone(), left);
            self.enumerate(items, i + 1, parts, inst);
            return;
        }
        for take in 0..=left {
            let mut next = parts.clone();
            next[eligible[e]].insert_n(f.clone(), take);
            self.compositions(items, i, f, left - take, eligible, e + 1, next, inst);
        }
    }

    fn bind(&mut self, parts: Vec<FMultiset>, mut inst: Instantiation) {
        for (slot, part) in self.slots.iter().zip(parts) {
            let ok = match slot {
                Slot::Plain(v) => inst.bind_context(v, part),
                Slot::Boxed(_, v) => {
                    let unboxed = part.map(|f| match f {
                        Formula::Modal(_, body) => (**body).clone(),
                        _ => unreachable!("boxed slot holds only boxed formulas"),
                    });
                    inst.bind_context(v, unboxed)
                }
            };
            if !ok {
                return;
            }
        }
        self.out.insert(inst);
    }
}

/// Premises of `r` under `inst`, in schema order.
pub fn instantiate_premises(
    r: &RuleSchema,
    inst: &Instantiation,
) -> Result<Vec<crate::syntax::Sequent>, super::CalculusError> {
    r.premises.iter().map(|p| p.instantiate(inst)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin;
    use crate::syntax::parse_sequent;

    fn seq(t: &str) -> Sequent {
        parse_sequent(t).unwrap()
    }

    fn f(t: &str) -> Formula {
        crate::syntax::parse_formula(t).unwrap()
    }

    #[test]
    fn rk_greedy_binds_all_boxes() {
        let rk = builtin::modal_rule("R_K").unwrap();
        let got = match_conclusion(&rk, &seq("[]p, []q, r => [](p & q)"), MatchMode::Greedy);
        assert_eq!(got.len(), 1);
        let inst = &got[0];
        assert_eq!(inst.contexts["G"], [f("p"), f("q")].into_iter().collect());
        assert_eq!(inst.contexts["P"], FMultiset::singleton(f("r")));
        assert_eq!(inst.formulas["phi"], f("p & q"));
    }

    #[test]
    fn rk_needs_boxed_succedent() {
        let rk = builtin::modal_rule("R_K").unwrap();
        assert!(match_conclusion(&rk, &seq("p => q"), MatchMode::Greedy).is_empty());
        assert!(match_conclusion(&rk, &seq("p =>"), MatchMode::Exhaustive).is_empty());
    }

    #[test]
    fn lp_imp_single_match() {
        let lp = builtin::g4ip().rule("Lpimp").unwrap().clone();
        let got = match_conclusion(&lp, &seq("p, p -> q => r"), MatchMode::Greedy);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].formulas["p"], f("p"));
        assert_eq!(got[0].formulas["phi"], f("q"));
        assert!(got[0].contexts["G"].is_empty());
        assert_eq!(got[0].succedents["D"], Some(f("r")));
        // atom metavariable refuses compound formulas
        assert!(match_conclusion(&lp, &seq("p & q, p & q -> r => r"), MatchMode::Greedy).is_empty());
    }

    #[test]
    fn exhaustive_enumerates_partitions() {
        let rk = builtin::modal_rule("R_K").unwrap();
        let got = match_conclusion(&rk, &seq("[]p, []q => []r"), MatchMode::Exhaustive);
        // each boxed formula goes to P or to box G
        assert_eq!(got.len(), 4);
        let greedy = match_conclusion(&rk, &seq("[]p, []q => []r"), MatchMode::Greedy);
        assert!(greedy.iter().all(|g| got.contains(g)));
    }

    #[test]
    fn multiplicities_split_in_exhaustive_mode() {
        let rk = builtin::modal_rule("R_K").unwrap();
        let got = match_conclusion(&rk, &seq("[]p, []p => []r"), MatchMode::Exhaustive);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn instantiate_rk_premise() {
        let rk = builtin::modal_rule("R_K").unwrap();
        let inst = Instantiation::new()
            .with_context("G", [f("p"), f("q")])
            .with_context("P", [])
            .with_formula("phi", f("p & q"));
        assert_eq!(instantiate_premises(&rk, &inst).unwrap(), vec![seq("p, q => p & q")]);
    }

    #[test]
    fn instantiate_limpimp_premises() {
        let r = builtin::g4ip().rule("Limpimp").unwrap().clone();
        let inst = Instantiation::new()
            .with_formula("phi", f("p"))
            .with_formula("psi", f("q"))
            .with_formula("gamma", f("r"))
            .with_context("G", [])
            .with_succedent("D", Some(f("s")));
        assert_eq!(
            instantiate_premises(&r, &inst).unwrap(),
            vec![seq("q -> r => p -> q"), seq("r => s")]
        );
    }

    #[test]
    fn unbound_metavariable_is_reported() {
        let rk = builtin::modal_rule("R_K").unwrap();
        let err = instantiate_premises(&rk, &Instantiation::new()).unwrap_err();
        assert!(matches!(err, crate::calculus::CalculusError::Unbound(_)));
    }
}
