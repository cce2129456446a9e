use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{gen_sequent, CaseRecord, Flag, FuzzConfig, HarnessError, Report};
use crate::calculus::{
    build_g3ix, build_g4ix, g3ip, g4ip, instantiate_premises, modal_rule, parse_rules, Calculus, RuleSchema,
};
use crate::gen::{case_rng, random_formula, random_instantiation, random_sequent, rule_vars, Shape};
use crate::prover::{
    check_derivation, find_strict_sensible, is_strict_sensible_throughout, prove_g3, prove_g4, ProofResult,
};
use crate::syntax::{FMultiset, Formula, Sequent};

fn resolve(names: &[String]) -> Result<Vec<RuleSchema>, HarnessError> {
    names
        .iter()
        .map(|n| modal_rule(n).ok_or_else(|| HarnessError::UnknownRule(n.clone())))
        .collect()
}

fn rules_error(errs: Vec<crate::calculus::DslValidationError>) -> HarnessError {
    HarnessError::Rules(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))
}

fn record(index: usize, check: &str, input: &Sequent) -> CaseRecord {
    CaseRecord {
        index,
        check: check.to_string(),
        input: input.to_string(),
        g3: None,
        g4: None,
        flag: Flag::Agree,
        note: String::new(),
        termination_violation: false,
        invalid_derivation: false,
        elapsed: Duration::ZERO,
    }
}

/// Outcome of a G4 query; errors and rejected proofs are kept on the record.
fn g4_query(c: &Calculus, s: &Sequent, rec: &mut CaseRecord) -> Option<bool> {
    match prove_g4(c, s) {
        Ok(r) => {
            if let Some(d) = r.derivation() {
                if !check_derivation(c, d) {
                    rec.invalid_derivation = true;
                }
            }
            Some(r.is_provable())
        }
        Err(e) => {
            rec.termination_violation = true;
            rec.note = e.to_string();
            None
        }
    }
}

fn g3_query(c: &Calculus, s: &Sequent, cfg: &FuzzConfig, rec: &mut CaseRecord) -> ProofResult {
    let r = prove_g3(c, s, cfg.budget);
    if let Some(d) = r.derivation() {
        if !check_derivation(c, d) {
            rec.invalid_derivation = true;
        }
    }
    r
}

fn finalize(mut rec: CaseRecord) -> CaseRecord {
    if rec.termination_violation || rec.invalid_derivation {
        rec.flag = Flag::Disagree;
    }
    rec
}

/// Compares G4iX and G3iX on `cfg.count` generated sequents, using builtin modal rules
/// named in `cfg.modal_rules`.
pub fn equivalence_fuzz(cfg: &FuzzConfig) -> Result<Report, HarnessError> {
    equivalence_fuzz_with(cfg, &resolve(&cfg.modal_rules)?)
}

pub fn equivalence_fuzz_with(cfg: &FuzzConfig, modal: &[RuleSchema]) -> Result<Report, HarnessError> {
    cfg.check()?;
    let c4 = build_g4ix(modal).map_err(rules_error)?;
    let c3 = build_g3ix(modal).map_err(rules_error)?;
    let records: Vec<CaseRecord> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let s = gen_sequent(cfg, i as u64);
            let start = Instant::now();
            let mut rec = record(i, "equivalence", &s);
            let g4 = g4_query(&c4, &s, &mut rec);
            let g3 = g3_query(&c3, &s, cfg, &mut rec);
            rec.g4 = Some(match g4 {
                Some(true) => "PROVABLE".into(),
                Some(false) => "UNPROVABLE".into(),
                None => "ERROR".into(),
            });
            rec.g3 = Some(g3.verdict());
            rec.flag = match (g4, &g3) {
                (_, ProofResult::Unknown(_)) => Flag::Indefinite,
                (Some(a), r) if a == r.is_provable() => Flag::Agree,
                _ => Flag::Disagree,
            };
            rec.elapsed = start.elapsed();
            finalize(rec)
        })
        .collect();
    let mut report = Report::new(&format!("equivalence {} / {}", c4.name, c3.name), cfg.count);
    if !c4.is_builtin_only() {
        report.caveats.push(
            "user rules: closure of the G4 calculus under weakening is sampled here, not established".into(),
        );
    }
    for r in records {
        report.push(r);
    }
    Ok(report)
}

/// Attempts allowed per requested case before a sampler gives up.
const SAMPLE_CAP: usize = 100;

/// Draws up to `cfg.count` accepted cases from at most `SAMPLE_CAP` times as many attempts.
/// Attempt `a` of check number `salt` uses its own rng stream, and accepted cases keep
/// attempt order, so the result does not depend on scheduling.
fn sample<F>(cfg: &FuzzConfig, salt: u64, attempt: F) -> Vec<CaseRecord>
where
    F: Fn(&mut ChaCha8Rng, usize) -> Option<CaseRecord> + Sync,
{
    let cap = cfg.count.saturating_mul(SAMPLE_CAP);
    let batch = cfg.count.max(1);
    let mut out = Vec::new();
    let mut next = 0;
    while out.len() < cfg.count && next < cap {
        let end = (next + batch).min(cap);
        let found: Vec<CaseRecord> = (next..end)
            .into_par_iter()
            .filter_map(|a| {
                let mut rng = case_rng(cfg.seed, (salt << 40) | a as u64);
                attempt(&mut rng, a)
            })
            .collect();
        out.extend(found);
        next = end;
    }
    out.truncate(cfg.count);
    out
}

fn part_shape(cfg: &FuzzConfig) -> Shape {
    Shape {
        max_size: (cfg.max_size / 2).max(1),
        ..cfg.shape()
    }
}

fn timed<F: FnOnce() -> Option<CaseRecord>>(f: F) -> Option<CaseRecord> {
    let start = Instant::now();
    let mut rec = f()?;
    rec.elapsed = start.elapsed();
    Some(finalize(rec))
}

fn provable_g4(c: &Calculus, s: &Sequent, rec: &mut CaseRecord) -> Option<bool> {
    g4_query(c, s, rec)
}

fn verdict_flag(provable: Option<bool>) -> (Flag, String) {
    match provable {
        Some(true) => (Flag::Agree, "PROVABLE".into()),
        Some(false) => (Flag::Disagree, "UNPROVABLE".into()),
        None => (Flag::Disagree, "ERROR".into()),
    }
}

/// Weakening on both sides, contraction, and cut, each on `cfg.count` sampled provable
/// sequents of the G4 style calculus `calc`.
pub fn admissibility_suite(calc: &Calculus, cfg: &FuzzConfig) -> Result<Report, HarnessError> {
    cfg.check()?;
    let shape = cfg.shape();
    let small = part_shape(cfg);
    let mut report = Report::new(&format!("admissibility {}", calc.name), cfg.count);

    // A provable base sequent; a violation while sampling is reported as a failed case.
    let base = |s: &Sequent, check: &str, a: usize| -> Result<bool, CaseRecord> {
        let mut rec = record(a, check, s);
        match provable_g4(calc, s, &mut rec) {
            Some(p) if !rec.invalid_derivation => Ok(p),
            _ => {
                rec.g4 = Some("ERROR".into());
                rec.note = format!("while sampling: {}", rec.note);
                Err(finalize(rec))
            }
        }
    };

    let checks: [(&str, u64); 4] = [("weakening-left", 1), ("weakening-right", 2), ("contraction", 3), ("cut", 4)];
    for (check, salt) in checks {
        let recs = sample(cfg, salt, |rng, a| {
            timed(|| {
                let s = random_sequent(rng, &shape);
                let (target, origin): (Sequent, String) = match check {
                    "weakening-left" => {
                        match base(&s, check, a) {
                            Ok(true) => {}
                            Ok(false) => return None,
                            Err(rec) => return Some(rec),
                        }
                        let phi = random_formula(rng, &small);
                        let mut ante = s.antecedent.clone();
                        ante.insert(phi);
                        (Sequent::new(ante, s.succedent.clone()), format!("from {s}"))
                    }
                    "weakening-right" => {
                        let mut ante = s.antecedent.clone();
                        if let Some(chi) = &s.succedent {
                            ante.insert(Formula::not(chi.clone()));
                        }
                        let empty = Sequent::new(ante, None);
                        match base(&empty, check, a) {
                            Ok(true) => {}
                            Ok(false) => return None,
                            Err(rec) => return Some(rec),
                        }
                        let phi = random_formula(rng, &small);
                        (Sequent::new(empty.antecedent.clone(), Some(phi)), format!("from {empty}"))
                    }
                    "contraction" => {
                        let distinct: Vec<&Formula> = s.antecedent.distinct().collect();
                        let phi = (*distinct.choose(rng)?).clone();
                        let mut ante = s.antecedent.clone();
                        ante.insert(phi);
                        let doubled = Sequent::new(ante, s.succedent.clone());
                        match base(&doubled, check, a) {
                            Ok(true) => {}
                            Ok(false) => return None,
                            Err(rec) => return Some(rec),
                        }
                        (s, format!("from {doubled}"))
                    }
                    _ => {
                        let mut pool: Vec<Formula> = s.all_formulas().distinct().flat_map(|f| f.subformulas()).collect();
                        pool.push(random_formula(rng, &Shape { max_size: 4, ..shape }));
                        pool.push(random_formula(rng, &Shape { max_size: 4, ..shape }));
                        pool.sort();
                        pool.dedup();
                        let phi = pool.choose(rng)?.clone();
                        let mut left = FMultiset::new();
                        let mut right = FMultiset::new();
                        for f in s.antecedent.iter() {
                            if rng.gen_bool(0.5) {
                                left.insert(f.clone());
                            } else {
                                right.insert(f.clone());
                            }
                        }
                        let first = Sequent::new(left, Some(phi.clone()));
                        right.insert(phi);
                        let second = Sequent::new(right, s.succedent.clone());
                        for premise in [&first, &second] {
                            match base(premise, check, a) {
                                Ok(true) => {}
                                Ok(false) => return None,
                                Err(rec) => return Some(rec),
                            }
                        }
                        (s, format!("from {first} and {second}"))
                    }
                };
                let mut rec = record(a, check, &target);
                let (flag, verdict) = verdict_flag(provable_g4(calc, &target, &mut rec));
                rec.flag = flag;
                rec.g4 = Some(verdict);
                if rec.note.is_empty() {
                    rec.note = origin;
                }
                Some(rec)
            })
        });
        for r in recs {
            report.push(r);
        }
    }
    Ok(report)
}

const IMPLICATION_INVERSION: &str = "rule ImpInv { premises: G, psi => D ; conclusion: G, phi -> psi => D }";

/// Invertibility of R∧, L∧, L∨, R→, Lp→ and implication inversion, checked in G3iX: for
/// sampled provable conclusions every premise must be provable.
pub fn invertibility_suite(modal: &[RuleSchema], cfg: &FuzzConfig) -> Result<Report, HarnessError> {
    cfg.check()?;
    let c3 = build_g3ix(modal).map_err(rules_error)?;
    let (inv, errs) = parse_rules(IMPLICATION_INVERSION);
    debug_assert!(errs.is_empty());
    let g3 = g3ip();
    let g4 = g4ip();
    let rules: Vec<RuleSchema> = ["Rand", "Land", "Lor", "Rimp"]
        .iter()
        .map(|n| g3.rule(n).unwrap().clone())
        .chain(std::iter::once(g4.rule("Lpimp").unwrap().clone()))
        .chain(inv)
        .collect();
    let shape = part_shape(cfg);
    let mut report = Report::new(&format!("invertibility {}", c3.name), cfg.count);
    for (k, rule) in rules.iter().enumerate() {
        let vars = rule_vars(rule);
        let recs = sample(cfg, 16 + k as u64, |rng, a| {
            timed(|| {
                let inst = random_instantiation(rng, &vars, &shape, 2);
                let concl = rule.conclusion.instantiate(&inst).ok()?;
                let premises = instantiate_premises(rule, &inst).ok()?;
                let mut rec = record(a, &rule.name, &concl);
                if !g3_query(&c3, &concl, cfg, &mut rec).is_provable() {
                    return (rec.invalid_derivation).then_some(rec);
                }
                let mut flag = Flag::Agree;
                let mut verdicts = Vec::new();
                for p in &premises {
                    let r = g3_query(&c3, p, cfg, &mut rec);
                    verdicts.push(r.verdict());
                    flag = match (&r, flag) {
                        (_, Flag::Disagree) => Flag::Disagree,
                        (ProofResult::Unprovable, _) => Flag::Disagree,
                        (ProofResult::Unknown(_), _) => Flag::Indefinite,
                        (ProofResult::Provable(_), f) => f,
                    };
                }
                rec.g3 = Some(verdicts.join(","));
                rec.flag = flag;
                rec.note = format!(
                    "premises {}",
                    premises.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ; ")
                );
                Some(rec)
            })
        });
        for r in recs {
            report.push(r);
        }
    }
    Ok(report)
}

/// Decomposes conjunctions, keeps one disjunct, drops ⊥, and replaces `p → ψ` by `ψ` when
/// `p` is present, until the antecedent is irreducible.
fn make_irreducible(s: &Sequent, rng: &mut ChaCha8Rng) -> Sequent {
    let mut todo: Vec<Formula> = s.antecedent.iter().cloned().collect();
    let mut done = FMultiset::new();
    loop {
        while let Some(f) = todo.pop() {
            match f {
                Formula::And(a, b) => {
                    todo.push((*a).clone());
                    todo.push((*b).clone());
                }
                Formula::Or(a, b) => todo.push(if rng.gen_bool(0.5) { (*a).clone() } else { (*b).clone() }),
                Formula::Bot => {}
                other => done.insert(other),
            }
        }
        let fire = done
            .distinct()
            .find(|f| matches!(f, Formula::Imp(a, _) if done.contains(a)))
            .cloned();
        match fire {
            Some(f) => {
                done.remove(&f, 1).expect("present");
                if let Formula::Imp(_, b) = f {
                    todo.push((*b).clone());
                }
            }
            None => return Sequent::new(done, s.succedent.clone()),
        }
    }
}

/// For sampled provable irreducible sequents of G3iX, a derivation that is strict and
/// sensible at every irreducible node exists.
pub fn strict_sensible_suite(modal: &[RuleSchema], cfg: &FuzzConfig) -> Result<Report, HarnessError> {
    cfg.check()?;
    let c3 = build_g3ix(modal).map_err(rules_error)?;
    let shape = cfg.shape();
    let mut report = Report::new(&format!("strict-sensible {}", c3.name), cfg.count);
    let recs = sample(cfg, 32, |rng, a| {
        timed(|| {
            let s = make_irreducible(&random_sequent(rng, &shape), rng);
            let mut rec = record(a, "strict-sensible", &s);
            let plain = g3_query(&c3, &s, cfg, &mut rec);
            if !plain.is_provable() {
                return (rec.invalid_derivation).then_some(rec);
            }
            let r = find_strict_sensible(&c3, &s, cfg.budget).ok()?;
            rec.g3 = Some(r.verdict());
            rec.flag = match &r {
                ProofResult::Provable(d) => {
                    if !check_derivation(&c3, d) {
                        rec.invalid_derivation = true;
                    }
                    if is_strict_sensible_throughout(&c3, d) {
                        Flag::Agree
                    } else {
                        rec.note = "derivation is not strict and sensible throughout".into();
                        Flag::Disagree
                    }
                }
                ProofResult::Unprovable => Flag::Disagree,
                ProofResult::Unknown(_) => Flag::Indefinite,
            };
            Some(rec)
        })
    });
    for r in recs {
        report.push(r);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::is_irreducible;

    fn small(count: usize) -> FuzzConfig {
        FuzzConfig {
            count,
            max_size: 8,
            ..Default::default()
        }
    }

    #[test]
    fn empty_run() {
        let r = equivalence_fuzz(&small(0)).unwrap();
        assert!(r.records.is_empty() && r.passed());
    }

    #[test]
    fn unknown_rule_is_rejected() {
        let cfg = FuzzConfig { modal_rules: vec!["R_Q".into()], ..small(1) };
        assert_eq!(equivalence_fuzz(&cfg).unwrap_err(), HarnessError::UnknownRule("R_Q".into()));
    }

    #[test]
    fn small_equivalence_run() {
        let cfg = FuzzConfig { modal_rules: vec!["R_K".into()], ..small(30) };
        let r = equivalence_fuzz(&cfg).unwrap();
        assert_eq!(r.summary.total(), 30);
        assert_eq!(r.summary.disagree, 0, "{}", r.to_text());
        assert_eq!(r.to_text(), equivalence_fuzz(&cfg).unwrap().to_text());
        assert!(r.caveats.is_empty());
        let (user, _) = parse_rules("rule U { premises: G => phi ; conclusion: P, box G => box phi }");
        let r = equivalence_fuzz_with(&small(5), &user).unwrap();
        assert_eq!(r.caveats.len(), 1);
        assert!(r.summary_json().contains("caveats"));
    }

    #[test]
    fn irreducible_normal_form() {
        let cfg = small(1);
        for i in 0..200 {
            let mut rng = case_rng(3, i);
            let s = random_sequent(&mut rng, &cfg.shape());
            assert!(is_irreducible(&make_irreducible(&s, &mut rng)));
        }
    }

    #[test]
    fn small_suites() {
        let cfg = small(10);
        let adm = admissibility_suite(&g4ip(), &cfg).unwrap();
        assert_eq!(adm.summary.disagree, 0, "{}", adm.to_text());
        let inv = invertibility_suite(&[], &cfg).unwrap();
        assert_eq!(inv.summary.disagree, 0, "{}", inv.to_text());
        let ss = strict_sensible_suite(&[], &cfg).unwrap();
        assert_eq!(ss.summary.disagree, 0, "{}", ss.to_text());
    }
}
