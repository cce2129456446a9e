use std::collections::BTreeMap;
use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_instance_decrease, LinearWeight, WeightFunction};
use crate::calculus::{instantiate_premises, AnteItem, Instantiation, Pattern, RuleSchema, Sort, SuccPattern, Template};
use crate::gen::{atom, random_instantiation, rule_vars, Shape};

/// Random instantiation parameters for the counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub count: usize,
    /// Node bound for each sampled formula.
    pub size: usize,
    pub atoms: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            count: 2000,
            size: 4,
            atoms: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Terminating,
    CounterexampleFound(Instantiation),
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Terminating => f.write_str("TERMINATING"),
            Verdict::CounterexampleFound(inst) => write!(f, "COUNTEREXAMPLE {inst}"),
            Verdict::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// Decides whether every instance of `r` has all premises below the conclusion.
/// `Terminating` is only returned when the symbolic criterion proves it; otherwise a few
/// canonical instances and then `cfg.count` random ones are tried.
pub fn check_schema_termination(w: &dyn WeightFunction, r: &RuleSchema, cfg: &SamplingConfig) -> Verdict {
    if r.is_axiom() {
        return Verdict::Terminating;
    }
    if let Some(lin) = w.as_linear() {
        if lin.check().is_ok() && symbolic_decrease(&lin, r) {
            return Verdict::Terminating;
        }
    }
    let vars = rule_vars(r);
    for inst in canonical_instances(r, &vars) {
        if violates(w, r, &inst) {
            return Verdict::CounterexampleFound(inst);
        }
    }
    let shape = Shape {
        max_size: cfg.size,
        atoms: cfg.atoms,
        max_modal_depth: 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.count {
        let inst = random_instantiation(&mut rng, &vars, &shape, 2);
        if violates(w, r, &inst) {
            return Verdict::CounterexampleFound(inst);
        }
    }
    Verdict::Unknown
}

fn violates(w: &dyn WeightFunction, r: &RuleSchema, inst: &Instantiation) -> bool {
    let (Ok(prem), Ok(concl)) = (instantiate_premises(r, inst), r.conclusion.instantiate(inst)) else {
        return false;
    };
    !check_instance_decrease(w, &prem, &concl)
}

fn boxed_contexts(p: &Pattern) -> Vec<&str> {
    p.antecedent
        .iter()
        .filter_map(|i| match i {
            AnteItem::BoxedContext(_, v) => Some(v.as_str()),
            _ => None,
        })
        .collect()
}

/// Fresh atoms everywhere. First with one atom in each boxed context, then with every
/// context empty.
fn canonical_instances(r: &RuleSchema, vars: &[(String, Sort)]) -> Vec<Instantiation> {
    let boxed = boxed_contexts(&r.conclusion);
    [true, false]
        .into_iter()
        .map(|fill_boxed| {
            let mut next = 0;
            let mut fresh = || {
                next += 1;
                atom(next - 1)
            };
            let mut inst = Instantiation::new();
            for (v, _) in vars.iter().filter(|(_, s)| *s == Sort::Context) {
                let content = if fill_boxed && boxed.contains(&v.as_str()) {
                    vec![fresh()]
                } else {
                    vec![]
                };
                inst = inst.with_context(v, content);
            }
            for (v, s) in vars {
                inst = match s {
                    Sort::Atom | Sort::Formula => inst.with_formula(v, fresh()),
                    Sort::Succedent => inst.with_succedent(v, Some(fresh())),
                    Sort::Context => inst,
                };
            }
            inst
        })
        .collect()
}

/// Weight as an affine polynomial in the weights of formula metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Poly {
    konst: i64,
    coeffs: BTreeMap<String, i64>,
}

impl Poly {
    fn of(w: &LinearWeight, t: &Template) -> Poly {
        let bin = |a: &Template, b: &Template, k: u64| {
            let mut p = Poly::of(w, a);
            p.add(&Poly::of(w, b), 1);
            p.konst += k as i64;
            p
        };
        match t {
            Template::Bot | Template::AtomVar(_) => Poly {
                konst: 1,
                ..Poly::default()
            },
            Template::Var(v) => Poly {
                konst: 0,
                coeffs: BTreeMap::from([(v.clone(), 1)]),
            },
            Template::And(a, b) => bin(a, b, w.and),
            Template::Or(a, b) => bin(a, b, w.or),
            Template::Imp(a, b) => bin(a, b, w.imp),
            Template::Modal(_, a) => {
                let mut p = Poly::of(w, a);
                p.konst += w.modal as i64;
                p
            }
        }
    }

    fn add(&mut self, other: &Poly, sign: i64) {
        self.konst += sign * other.konst;
        for (v, c) in &other.coeffs {
            *self.coeffs.entry(v.clone()).or_insert(0) += sign * c;
        }
    }

    /// At least 1 whenever every variable is at least 1.
    fn surely_positive(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0) && self.konst + self.coeffs.values().sum::<i64>() >= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Elem {
    /// A context (or succedent) metavariable under a stack of boxes, outermost first.
    Ctx(String, Vec<u32>),
    Tmpl(Template),
}

fn elements(p: &Pattern) -> Vec<Elem> {
    let mut out: Vec<Elem> = p
        .antecedent
        .iter()
        .map(|i| match i {
            AnteItem::Formula(t) => Elem::Tmpl(t.clone()),
            AnteItem::Context(v) => Elem::Ctx(v.clone(), vec![]),
            AnteItem::BoxedContext(k, v) => Elem::Ctx(v.clone(), vec![*k]),
        })
        .collect();
    match &p.succedent {
        SuccPattern::Empty => {}
        SuccPattern::Formula(t) => out.push(Elem::Tmpl(t.clone())),
        SuccPattern::Var(v) => out.push(Elem::Ctx(v.clone(), vec![])),
    }
    out
}

fn dominates(w: &LinearWeight, big: &Elem, small: &Elem) -> bool {
    match (big, small) {
        (Elem::Ctx(v, outer), Elem::Ctx(u, inner)) => {
            v == u && outer.len() > inner.len() && outer.ends_with(inner)
        }
        (Elem::Tmpl(a), Elem::Tmpl(b)) => {
            let mut d = Poly::of(w, a);
            d.add(&Poly::of(w, b), -1);
            d.surely_positive()
        }
        _ => false,
    }
}

/// After cancelling common parts, the conclusion keeps a formula template and every
/// remaining premise part is dominated by a remaining conclusion part.
fn symbolic_decrease(w: &LinearWeight, r: &RuleSchema) -> bool {
    let concl = elements(&r.conclusion);
    r.premises.iter().all(|p| {
        let mut c = concl.clone();
        let mut rest = Vec::new();
        for e in elements(p) {
            match c.iter().position(|x| *x == e) {
                Some(k) => {
                    c.remove(k);
                }
                None => rest.push(e),
            }
        }
        c.iter().any(|e| matches!(e, Elem::Tmpl(_)))
            && rest.iter().all(|e| c.iter().any(|big| dominates(w, big, e)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{g3ip, g4ip, modal_rule, parse_rules};
    use crate::orders::LinearWeight;
    use crate::syntax::{parse_formula, FMultiset};

    fn verdict(r: &RuleSchema) -> Verdict {
        check_schema_termination(&LinearWeight::DYCKHOFF, r, &SamplingConfig::default())
    }

    #[test]
    fn g4ip_terminates() {
        for r in g4ip().rules {
            assert_eq!(verdict(&r), Verdict::Terminating, "{}", r.name);
        }
    }

    #[test]
    fn g3_implication_left_loops() {
        let limp = g3ip().rule("Limp").unwrap().clone();
        assert!(matches!(verdict(&limp), Verdict::CounterexampleFound(_)));
    }

    #[test]
    fn modal_library() {
        for n in ["R_K", "R_D", "R_T", "R_X"] {
            assert_eq!(verdict(&modal_rule(n).unwrap()), Verdict::Terminating, "{n}");
        }
        for n in ["R_K4", "R_GL", "R_SL"] {
            assert!(matches!(verdict(&modal_rule(n).unwrap()), Verdict::CounterexampleFound(_)), "{n}");
        }
    }

    #[test]
    fn gl_counterexample_is_the_canonical_instance() {
        let Verdict::CounterexampleFound(inst) = verdict(&modal_rule("R_GL").unwrap()) else {
            panic!("expected a counterexample");
        };
        assert_eq!(inst.contexts["P"], FMultiset::new());
        assert_eq!(inst.contexts["G"], FMultiset::singleton(parse_formula("p").unwrap()));
        assert_eq!(inst.formulas["phi"], parse_formula("q").unwrap());
    }

    #[test]
    fn generated_implication_rules_terminate() {
        for n in ["R_K", "R_X"] {
            let t = crate::calculus::transform_right_modal(&modal_rule(n).unwrap()).unwrap();
            assert_eq!(verdict(&t), Verdict::Terminating, "{n}");
        }
    }

    #[test]
    fn templates_dominate_by_weight_polynomial() {
        let (rules, errs) = parse_rules(
            "rule U { premises: phi, phi => psi ; conclusion: phi -> phi => psi }\n\
             rule V { premises: phi & phi => psi ; conclusion: phi | phi => psi }",
        );
        assert!(errs.is_empty(), "{errs:?}");
        assert_eq!(verdict(&rules[0]), Verdict::Terminating);
        // equal weight polynomials: 2 phi + 2 against 2 phi + 1
        assert!(matches!(verdict(&rules[1]), Verdict::CounterexampleFound(_)));
    }

    #[test]
    fn nonlinear_weights_never_certify() {
        let size = crate::orders::FnWeight(|f: &crate::syntax::Formula| f.size() as u64);
        let rk = modal_rule("R_K").unwrap();
        assert_eq!(
            check_schema_termination(&size, &rk, &SamplingConfig { count: 200, ..Default::default() }),
            Verdict::Unknown
        );
    }

    #[test]
    fn verdict_lines() {
        assert_eq!(Verdict::Terminating.to_string(), "TERMINATING");
        assert_eq!(Verdict::Unknown.to_string(), "UNKNOWN");
        let inst = Instantiation::new().with_formula("phi", parse_formula("q").unwrap());
        assert!(Verdict::CounterexampleFound(inst).to_string().starts_with("COUNTEREXAMPLE "));
    }
}
