//! Seeded random formulas and sequents.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Instantiation, RuleSchema, Sort};
use crate::syntax::{FMultiset, Formula, Sequent};

const NAMES: [&str; 5] = ["p", "q", "r", "s", "t"];

/// The `i`-th atom: p, q, r, s, t, then p5, p6, ...
pub fn atom_name(i: usize) -> String {
    match NAMES.get(i) {
        Some(n) => n.to_string(),
        None => format!("p{i}"),
    }
}

pub fn atom(i: usize) -> Formula {
    Formula::atom(&atom_name(i))
}

/// Shape bounds for random formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_size: usize,
    pub atoms: usize,
    pub max_modal_depth: usize,
}

/// An rng for case `index` of a run seeded with `seed`. Distinct indices draw from
/// independent streams, so a case can be regenerated without replaying earlier ones.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A formula with exactly `size` nodes where the bounds allow it, never more.
pub fn formula_of_size<R: Rng + ?Sized>(rng: &mut R, size: usize, atoms: usize, modal_depth: usize) -> Formula {
    let atoms = atoms.max(1);
    let can_box = modal_depth > 0 && size >= 2;
    let can_bin = size >= 3;
    if !can_box && !can_bin {
        return if rng.gen_bool(0.05) {
            Formula::Bot
        } else {
            atom(rng.gen_range(0..atoms))
        };
    }
    let choices = if can_bin { 3 } else { 0 } + usize::from(can_box);
    let pick = rng.gen_range(0..choices);
    if can_bin && pick < 3 {
        let left = rng.gen_range(1..=size - 2);
        let right = size - 1 - left;
        let a = formula_of_size(rng, left, atoms, modal_depth);
        let b = formula_of_size(rng, right, atoms, modal_depth);
        match pick {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            _ => Formula::imp(a, b),
        }
    } else {
        Formula::boxed(formula_of_size(rng, size - 1, atoms, modal_depth - 1))
    }
}

/// A formula whose size is uniform in `1..=shape.max_size`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Formula {
    let size = rng.gen_range(1..=shape.max_size.max(1));
    formula_of_size(rng, size, shape.atoms, shape.max_modal_depth)
}

/// A sequent with up to three antecedent formulas. The total size stays within
/// `shape.max_size` counting each formula separately.
pub fn random_sequent<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Sequent {
    let n = rng.gen_range(0..=3usize);
    let mut budget = shape.max_size.max(1);
    let mut ante = FMultiset::new();
    for _ in 0..n {
        if budget < 2 {
            break;
        }
        let size = rng.gen_range(1..=budget / 2);
        budget -= size;
        ante.insert(formula_of_size(rng, size, shape.atoms, shape.max_modal_depth));
    }
    let succ = if rng.gen_bool(0.1) {
        None
    } else {
        let size = rng.gen_range(1..=budget);
        Some(formula_of_size(rng, size, shape.atoms, shape.max_modal_depth))
    };
    Sequent::new(ante, succ)
}

/// Metavariables of a rule with their sorts, sorted by name.
pub(crate) fn rule_vars(r: &RuleSchema) -> Vec<(String, Sort)> {
    let mut seen = std::collections::BTreeMap::new();
    for (v, s) in r.conclusion.vars() {
        seen.entry(v).or_insert(s);
    }
    seen.into_iter().collect()
}

/// Random formulas for formula metavariables, random atoms for atom metavariables, up to
/// `max_context` formulas per context, and an empty succedent a quarter of the time.
pub fn random_instantiation<R: Rng + ?Sized>(
    rng: &mut R,
    vars: &[(String, Sort)],
    shape: &Shape,
    max_context: usize,
) -> Instantiation {
    let mut inst = Instantiation::new();
    for (v, s) in vars {
        inst = match s {
            Sort::Atom => inst.with_formula(v, atom(rng.gen_range(0..shape.atoms.max(1)))),
            Sort::Formula => {
                let f = random_formula(rng, shape);
                inst.with_formula(v, f)
            }
            Sort::Context => {
                let n = rng.gen_range(0..=max_context);
                let items: Vec<_> = (0..n).map(|_| random_formula(rng, shape)).collect();
                inst.with_context(v, items)
            }
            Sort::Succedent => {
                let f = if rng.gen_bool(0.25) { None } else { Some(random_formula(rng, shape)) };
                inst.with_succedent(v, f)
            }
        };
    }
    inst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_are_respected() {
        let mut rng = case_rng(7, 0);
        for size in 1..15 {
            for _ in 0..50 {
                let f = formula_of_size(&mut rng, size, 3, 2);
                assert!(f.size() <= size);
                assert!(f.modal_depth() <= 2);
            }
        }
    }

    #[test]
    fn no_boxes_at_depth_zero() {
        let mut rng = case_rng(1, 3);
        let shape = Shape { max_size: 12, atoms: 2, max_modal_depth: 0 };
        for _ in 0..200 {
            assert_eq!(random_formula(&mut rng, &shape).modal_depth(), 0);
        }
    }

    #[test]
    fn streams_are_deterministic() {
        let shape = Shape { max_size: 10, atoms: 3, max_modal_depth: 1 };
        let a = random_sequent(&mut case_rng(42, 5), &shape);
        let b = random_sequent(&mut case_rng(42, 5), &shape);
        assert_eq!(a, b);
    }

    #[test]
    fn atom_names() {
        assert_eq!(atom_name(0), "p");
        assert_eq!(atom_name(4), "t");
        assert_eq!(atom_name(5), "p5");
    }
}
