use std::collections::{BTreeSet, HashMap, HashSet};

use super::normal::is_irreducible;
use super::{Derivation, ProofResult, ProverError, SearchBudget, UnknownReason};
use crate::calculus::{
    instantiate_premises, match_conclusion, Calculus, Instantiation, MatchMode, RuleKind, RuleSchema,
};
use crate::orders::{check_instance_decrease, LinearWeight};
use crate::syntax::{Formula, Sequent};

const INVERTIBLE_G4: [&str; 7] = ["Land", "Lor", "Rand", "Rimp", "Lpimp", "Landimp", "Lorimp"];
const INVERTIBLE_G3: [&str; 4] = ["Land", "Lor", "Rand", "Rimp"];

struct Step<'c> {
    rule: &'c RuleSchema,
    inst: Instantiation,
    premises: Vec<Sequent>,
}

fn steps<'c>(rule: &'c RuleSchema, s: &Sequent, mode: MatchMode) -> Vec<Step<'c>> {
    match_conclusion(rule, s, mode)
        .into_iter()
        .filter_map(|inst| {
            let premises = instantiate_premises(rule, &inst).ok()?;
            Some(Step { rule, inst, premises })
        })
        .collect()
}

fn axiom_leaf(c: &Calculus, s: &Sequent, mode: MatchMode) -> Option<Derivation> {
    c.rules.iter().filter(|r| r.is_axiom()).find_map(|r| {
        let inst = match_conclusion(r, s, mode).into_iter().next()?;
        Some(Derivation::leaf(s.clone(), &r.name, inst))
    })
}

/// The first invertible rule with an instance, when the calculus is made of builtin rules.
fn committed<'c>(c: &'c Calculus, names: &[&str], s: &Sequent, mode: MatchMode) -> Option<Step<'c>> {
    if !c.is_builtin_only() {
        return None;
    }
    names
        .iter()
        .filter_map(|n| c.rule(n))
        .find_map(|r| steps(r, s, mode).into_iter().next())
}

fn node(s: &Sequent, step: Step<'_>, children: Vec<Derivation>) -> Derivation {
    Derivation {
        conclusion: s.clone(),
        rule: step.rule.name.clone(),
        instantiation: step.inst,
        children,
    }
}

struct G4<'c> {
    c: &'c Calculus,
    mode: MatchMode,
    memo: HashMap<Sequent, Option<Derivation>>,
}

impl<'c> G4<'c> {
    fn prove(&mut self, s: &Sequent) -> Result<Option<Derivation>, ProverError> {
        if let Some(hit) = self.memo.get(s) {
            return Ok(hit.clone());
        }
        let out = self.search(s)?;
        self.memo.insert(s.clone(), out.clone());
        Ok(out)
    }

    fn apply(&mut self, s: &Sequent, step: Step<'c>) -> Result<Option<Derivation>, ProverError> {
        if !check_instance_decrease(&LinearWeight::DYCKHOFF, &step.premises, s) {
            return Err(ProverError::TerminationViolation {
                rule: step.rule.name.clone(),
                conclusion: s.to_string(),
            });
        }
        let mut children = Vec::with_capacity(step.premises.len());
        for p in &step.premises {
            match self.prove(p)? {
                Some(d) => children.push(d),
                None => return Ok(None),
            }
        }
        Ok(Some(node(s, step, children)))
    }

    fn search(&mut self, s: &Sequent) -> Result<Option<Derivation>, ProverError> {
        if let Some(leaf) = axiom_leaf(self.c, s, self.mode) {
            return Ok(Some(leaf));
        }
        if let Some(step) = committed(self.c, &INVERTIBLE_G4, s, self.mode) {
            return self.apply(s, step);
        }
        for r in self.c.rules.iter().filter(|r| !r.is_axiom()) {
            for step in steps(r, s, self.mode) {
                if let Some(d) = self.apply(s, step)? {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    }
}

/// Backward search without loop checking. Every applied instance must lie below its
/// conclusion in the Dyckhoff order; otherwise the search stops with an error.
pub fn prove_g4(c: &Calculus, s: &Sequent) -> Result<ProofResult, ProverError> {
    prove_g4_with(c, s, MatchMode::Greedy)
}

pub fn prove_g4_with(c: &Calculus, s: &Sequent, mode: MatchMode) -> Result<ProofResult, ProverError> {
    let mut engine = G4 {
        c,
        mode,
        memo: HashMap::new(),
    };
    Ok(match engine.prove(s)? {
        Some(d) => ProofResult::Provable(d),
        None => ProofResult::Unprovable,
    })
}

#[derive(Debug)]
enum Outcome {
    Proved(Derivation),
    /// `min_ref` is the shallowest branch depth a loop prune below referred to.
    Failed { min_ref: usize },
    Unknown,
}

/// Restriction on the root of a subsearch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Root {
    Any,
    /// Only axioms and right modal rules.
    AxiomOrRightModal,
}

type LoopKey = (BTreeSet<Formula>, Option<Formula>, Root);

struct G3<'c> {
    c: &'c Calculus,
    mode: MatchMode,
    budget: SearchBudget,
    /// Strict and sensible at every irreducible node.
    normal: bool,
    nodes: usize,
    pruned: bool,
    branch: HashMap<LoopKey, usize>,
    proved: HashMap<(Sequent, Root), Derivation>,
    refuted: HashSet<(Sequent, Root)>,
}

impl<'c> G3<'c> {
    fn new(c: &'c Calculus, budget: SearchBudget, mode: MatchMode, normal: bool) -> Self {
        G3 {
            c,
            mode,
            budget,
            normal,
            nodes: 0,
            pruned: false,
            branch: HashMap::new(),
            proved: HashMap::new(),
            refuted: HashSet::new(),
        }
    }

    fn search(&mut self, s: &Sequent, depth: usize, root: Root) -> Outcome {
        let memo_key = (s.clone(), root);
        if let Some(d) = self.proved.get(&memo_key) {
            return Outcome::Proved(d.clone());
        }
        if self.refuted.contains(&memo_key) {
            return Outcome::Failed { min_ref: usize::MAX };
        }
        let (set, succ) = s.set_projection();
        let key = (set, succ, root);
        if let Some(&d) = self.branch.get(&key) {
            self.pruned = true;
            return Outcome::Failed { min_ref: d };
        }
        if let Some(leaf) = axiom_leaf(self.c, s, self.mode) {
            self.proved.insert(memo_key, leaf.clone());
            return Outcome::Proved(leaf);
        }
        if depth >= self.budget.max_depth || self.nodes >= self.budget.max_nodes {
            return Outcome::Unknown;
        }
        self.nodes += 1;

        self.branch.insert(key.clone(), depth);
        let out = self.expand(s, depth, root);
        self.branch.remove(&key);

        match &out {
            Outcome::Proved(d) => {
                self.proved.insert(memo_key, d.clone());
            }
            Outcome::Failed { min_ref } if *min_ref >= depth => {
                self.refuted.insert(memo_key);
            }
            _ => {}
        }
        out
    }

    fn expand(&mut self, s: &Sequent, depth: usize, root: Root) -> Outcome {
        let constrained = self.normal && is_irreducible(s);
        if root == Root::Any && !constrained {
            if let Some(step) = committed(self.c, &INVERTIBLE_G3, s, self.mode) {
                return self.apply(s, step, depth, constrained);
            }
        }
        let mut min_ref = usize::MAX;
        let mut unknown = false;
        let c = self.c;
        for r in c.rules.iter().filter(|r| !r.is_axiom()) {
            if root == Root::AxiomOrRightModal && r.kind != RuleKind::RightModal {
                continue;
            }
            for step in steps(r, s, self.mode) {
                if constrained && !sensible_step(&step) {
                    continue;
                }
                match self.apply(s, step, depth, constrained) {
                    Outcome::Proved(d) => return Outcome::Proved(d),
                    Outcome::Failed { min_ref: m } => min_ref = min_ref.min(m),
                    Outcome::Unknown => unknown = true,
                }
            }
        }
        if unknown {
            Outcome::Unknown
        } else {
            Outcome::Failed { min_ref }
        }
    }

    /// Proves the premises in order. After an unknown premise the remaining ones are still
    /// tried, since a definite failure among them settles the step.
    fn apply(&mut self, s: &Sequent, step: Step<'c>, depth: usize, constrained: bool) -> Outcome {
        let strict_left = if constrained { strict_left_premise(&step) } else { None };
        let mut children = Vec::with_capacity(step.premises.len());
        let mut unknown = false;
        for (i, p) in step.premises.iter().enumerate() {
            let root = if strict_left == Some(i) { Root::AxiomOrRightModal } else { Root::Any };
            match self.search(p, depth + 1, root) {
                Outcome::Proved(d) => children.push(d),
                Outcome::Failed { min_ref } => return Outcome::Failed { min_ref },
                Outcome::Unknown => unknown = true,
            }
        }
        if unknown {
            Outcome::Unknown
        } else {
            Outcome::Proved(node(s, step, children))
        }
    }

    fn finish(&self, out: Outcome) -> ProofResult {
        match out {
            Outcome::Proved(d) => ProofResult::Provable(d),
            Outcome::Unknown => ProofResult::Unknown(UnknownReason::BudgetExhausted),
            Outcome::Failed { .. } => {
                let user_modal = self
                    .c
                    .rules
                    .iter()
                    .any(|r| !r.is_builtin_family() && r.kind.is_modal());
                if self.pruned && user_modal {
                    ProofResult::Unknown(UnknownReason::IncompleteStrategy)
                } else {
                    ProofResult::Unprovable
                }
            }
        }
    }
}

/// Not a left rule acting on an implication with an atomic antecedent.
fn sensible_step(step: &Step<'_>) -> bool {
    step.rule.kind != RuleKind::Left
        || !step
            .rule
            .principal_formulas(&step.inst)
            .iter()
            .any(|f| matches!(f, Formula::Imp(a, _) if a.is_atom()))
}

/// For the implication-left rule that repeats its principal formula, acting on `⊡φ → ψ`,
/// the index of the premise that must be closed by an axiom or a right modal rule.
fn strict_left_premise(step: &Step<'_>) -> Option<usize> {
    let (t, i) = step.rule.repeated_implication_left()?;
    let f = t.instantiate(&step.inst).ok()?;
    matches!(f, Formula::Imp(ref a, _) if matches!(**a, Formula::Modal(..))).then_some(i)
}

/// Backward search with a per-branch loop check on the set of antecedent formulas and the
/// succedent. Returns `Unknown` when the budget runs out first.
pub fn prove_g3(c: &Calculus, s: &Sequent, b: SearchBudget) -> ProofResult {
    prove_g3_with(c, s, b, MatchMode::Greedy)
}

pub fn prove_g3_with(c: &Calculus, s: &Sequent, b: SearchBudget, mode: MatchMode) -> ProofResult {
    let mut engine = G3::new(c, b, mode, false);
    let out = engine.search(s, 0, Root::Any);
    engine.finish(out)
}

/// Like [`prove_g3`], restricted to derivations that are sensible and strict at every node
/// with an irreducible conclusion.
pub fn find_strict_sensible(c: &Calculus, s: &Sequent, b: SearchBudget) -> Result<ProofResult, ProverError> {
    if !is_irreducible(s) {
        return Err(ProverError::NotIrreducible(s.to_string()));
    }
    let mut engine = G3::new(c, b, MatchMode::Greedy, true);
    let out = engine.search(s, 0, Root::Any);
    Ok(engine.finish(out))
}
