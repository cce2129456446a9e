use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::parse::Expr;
use crate::syntax::print::print_expr;
use crate::syntax::{FMultiset, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("metavariable `{0}` is not bound by the instantiation")]
    Unbound(String),
    #[error("atom metavariable `{name}` bound to non-atomic formula {formula}")]
    NotAnAtom { name: String, formula: Formula },
    #[error("rule `{0}` is not a right modal rule")]
    NotRightModal(String),
}

/// Formula template over metavariables. `AtomVar` only matches atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    Bot,
    AtomVar(String),
    Var(String),
    And(Box<Template>, Box<Template>),
    Or(Box<Template>, Box<Template>),
    Imp(Box<Template>, Box<Template>),
    Modal(u32, Box<Template>),
}

impl Template {
    pub fn var(name: &str) -> Template {
        Template::Var(name.to_string())
    }

    pub fn imp(a: Template, b: Template) -> Template {
        Template::Imp(Box::new(a), Box::new(b))
    }

    /// True if every instance contains a connective or modal operator.
    pub fn is_compound(&self) -> bool {
        !matches!(self, Template::Bot | Template::AtomVar(_) | Template::Var(_))
    }

    pub fn contains_modal(&self) -> bool {
        match self {
            Template::Modal(..) => true,
            Template::And(a, b) | Template::Or(a, b) | Template::Imp(a, b) => {
                a.contains_modal() || b.contains_modal()
            }
            _ => false,
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<(String, Sort)>) {
        match self {
            Template::Bot => {}
            Template::AtomVar(v) => out.push((v.clone(), Sort::Atom)),
            Template::Var(v) => out.push((v.clone(), Sort::Formula)),
            Template::Modal(_, a) => a.collect_vars(out),
            Template::And(a, b) | Template::Or(a, b) | Template::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Result<Formula, CalculusError> {
        Ok(match self {
            Template::Bot => Formula::Bot,
            Template::AtomVar(v) => {
                let f = inst.formula(v)?;
                if !f.is_atom() {
                    return Err(CalculusError::NotAnAtom {
                        name: v.clone(),
                        formula: f.clone(),
                    });
                }
                f.clone()
            }
            Template::Var(v) => inst.formula(v)?.clone(),
            Template::And(a, b) => Formula::and(a.instantiate(inst)?, b.instantiate(inst)?),
            Template::Or(a, b) => Formula::or(a.instantiate(inst)?, b.instantiate(inst)?),
            Template::Imp(a, b) => Formula::imp(a.instantiate(inst)?, b.instantiate(inst)?),
            Template::Modal(i, a) => Formula::modal(*i, a.instantiate(inst)?),
        })
    }

    /// One-way matching; extends `inst` on success. On failure `inst` may hold partial
    /// bindings and must be discarded.
    pub fn matches(&self, f: &Formula, inst: &mut Instantiation) -> bool {
        match (self, f) {
            (Template::Bot, Formula::Bot) => true,
            (Template::AtomVar(v), Formula::Atom(_)) => inst.bind_formula(v, f),
            (Template::Var(v), _) => inst.bind_formula(v, f),
            (Template::And(a, b), Formula::And(x, y))
            | (Template::Or(a, b), Formula::Or(x, y))
            | (Template::Imp(a, b), Formula::Imp(x, y)) => a.matches(x, inst) && b.matches(y, inst),
            (Template::Modal(i, a), Formula::Modal(j, x)) => i == j && a.matches(x, inst),
            _ => false,
        }
    }

    pub(crate) fn to_expr(&self) -> Expr {
        match self {
            Template::Bot => Expr::Bot,
            Template::AtomVar(v) | Template::Var(v) => Expr::Ident(v.clone(), 0),
            Template::And(a, b) => Expr::And(Box::new(a.to_expr()), Box::new(b.to_expr())),
            Template::Or(a, b) => Expr::Or(Box::new(a.to_expr()), Box::new(b.to_expr())),
            Template::Imp(a, b) => Expr::Imp(Box::new(a.to_expr()), Box::new(b.to_expr())),
            Template::Modal(i, a) => Expr::Modal(*i, Box::new(a.to_expr())),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(&self.to_expr(), true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnteItem {
    Formula(Template),
    Context(String),
    /// `⊡_i Γ`
    BoxedContext(u32, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuccPattern {
    Empty,
    Formula(Template),
    /// Binds an empty succedent or a single formula.
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub antecedent: Vec<AnteItem>,
    pub succedent: SuccPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Atom,
    Formula,
    Context,
    Succedent,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Atom => "atom",
            Sort::Formula => "formula",
            Sort::Context => "context",
            Sort::Succedent => "succedent",
        })
    }
}

impl Pattern {
    pub(crate) fn vars(&self) -> Vec<(String, Sort)> {
        let mut out = Vec::new();
        for item in &self.antecedent {
            match item {
                AnteItem::Formula(t) => t.collect_vars(&mut out),
                AnteItem::Context(v) | AnteItem::BoxedContext(_, v) => {
                    out.push((v.clone(), Sort::Context))
                }
            }
        }
        match &self.succedent {
            SuccPattern::Empty => {}
            SuccPattern::Formula(t) => t.collect_vars(&mut out),
            SuccPattern::Var(v) => out.push((v.clone(), Sort::Succedent)),
        }
        out
    }

    pub fn templates(&self) -> impl Iterator<Item = &Template> + '_ {
        self.antecedent.iter().filter_map(|i| match i {
            AnteItem::Formula(t) => Some(t),
            _ => None,
        })
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Result<Sequent, CalculusError> {
        let mut ante = FMultiset::new();
        for item in &self.antecedent {
            match item {
                AnteItem::Formula(t) => ante.insert(t.instantiate(inst)?),
                AnteItem::Context(v) => ante.extend_from(inst.context(v)?),
                AnteItem::BoxedContext(i, v) => ante.extend_from(&inst.context(v)?.boxed(*i)),
            }
        }
        let succ = match &self.succedent {
            SuccPattern::Empty => None,
            SuccPattern::Formula(t) => Some(t.instantiate(inst)?),
            SuccPattern::Var(v) => inst.succedent(v)?.clone(),
        };
        Ok(Sequent::new(ante, succ))
    }

    /// True if every instance of the pattern contains a connective or modal operator.
    pub fn guarantees_connective(&self) -> bool {
        self.templates().any(Template::is_compound)
            || matches!(&self.succedent, SuccPattern::Formula(t) if t.is_compound())
    }

    fn mentions_modal(&self) -> bool {
        self.antecedent.iter().any(|i| match i {
            AnteItem::Formula(t) => t.contains_modal(),
            AnteItem::BoxedContext(..) => true,
            AnteItem::Context(_) => false,
        }) || matches!(&self.succedent, SuccPattern::Formula(t) if t.contains_modal())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .antecedent
            .iter()
            .map(|item| match item {
                AnteItem::Formula(t @ Template::Imp(_, b)) if **b != Template::Bot => {
                    format!("({t})")
                }
                AnteItem::Formula(t) => t.to_string(),
                AnteItem::Context(v) => v.clone(),
                AnteItem::BoxedContext(0, v) => format!("box {v}"),
                AnteItem::BoxedContext(i, v) => format!("box({i}) {v}"),
            })
            .collect();
        let lhs = items.join(", ");
        if !lhs.is_empty() {
            write!(f, "{lhs} ")?;
        }
        match &self.succedent {
            SuccPattern::Empty => write!(f, "=> _"),
            SuccPattern::Formula(t) => write!(f, "=> {t}"),
            SuccPattern::Var(v) => write!(f, "=> {v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Axiom,
    Left,
    Right,
    RightModal,
    OtherModal,
}

impl RuleKind {
    pub fn is_modal(self) -> bool {
        matches!(self, RuleKind::RightModal | RuleKind::OtherModal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Builtin,
    User,
    GeneratedFrom(String),
}

/// A rule given by premise patterns and a conclusion pattern.
///
/// Equality ignores provenance: a user rule with the same name and shape as a builtin
/// compares equal to it.
#[derive(Debug, Clone)]
pub struct RuleSchema {
    pub name: String,
    pub premises: Vec<Pattern>,
    pub conclusion: Pattern,
    pub kind: RuleKind,
    pub provenance: Provenance,
}

impl PartialEq for RuleSchema {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.premises == other.premises
            && self.conclusion == other.conclusion
            && self.kind == other.kind
    }
}

impl Eq for RuleSchema {}

impl RuleSchema {
    /// Builds a schema and classifies its kind from the shape.
    pub fn new(name: &str, premises: Vec<Pattern>, conclusion: Pattern, provenance: Provenance) -> Self {
        let kind = classify(&premises, &conclusion);
        RuleSchema {
            name: name.to_string(),
            premises,
            conclusion,
            kind,
            provenance,
        }
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn is_right_modal(&self) -> bool {
        self.kind == RuleKind::RightModal
    }

    /// Non-axiom whose conclusion always contains a connective or modal operator.
    pub fn is_nonflat(&self) -> bool {
        !self.premises.is_empty() && self.conclusion.guarantees_connective()
    }

    /// Same premises and conclusion, ignoring name, kind, and provenance.
    pub fn same_shape(&self, other: &RuleSchema) -> bool {
        self.premises == other.premises && self.conclusion == other.conclusion
    }

    pub fn is_builtin_family(&self) -> bool {
        !matches!(self.provenance, Provenance::User)
    }

    /// Sort and binding checks. Returns one message per problem.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut sorts: BTreeMap<String, Sort> = BTreeMap::new();
        let all = self.premises.iter().chain(std::iter::once(&self.conclusion));
        for pat in all {
            for (v, s) in pat.vars() {
                match sorts.get(&v) {
                    Some(&prev) if prev != s => {
                        let msg = format!("metavariable `{v}` used both as {prev} and as {s}");
                        if !problems.contains(&msg) {
                            problems.push(msg);
                        }
                    }
                    Some(_) => {}
                    None => {
                        sorts.insert(v, s);
                    }
                }
            }
        }
        let bound: BTreeSet<String> = self.conclusion.vars().into_iter().map(|(v, _)| v).collect();
        for (i, pat) in self.premises.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (v, _) in pat.vars() {
                if !bound.contains(&v) && seen.insert(v.clone()) {
                    problems.push(format!(
                        "metavariable `{v}` in premise {} does not occur in the conclusion",
                        i + 1
                    ));
                }
            }
        }
        problems
    }

    /// Principal formulas of an instance: the conclusion's antecedent templates.
    pub fn principal_formulas(&self, inst: &Instantiation) -> Vec<Formula> {
        self.conclusion
            .templates()
            .filter_map(|t| t.instantiate(inst).ok())
            .collect()
    }

    /// Recognizes the shape of an implication-left rule that keeps its principal formula
    /// in the left premise: conclusion `.., a -> b => ..` with a premise `.., a -> b => a`.
    /// Returns the principal template and the index of that left premise.
    pub fn repeated_implication_left(&self) -> Option<(&Template, usize)> {
        for t in self.conclusion.templates() {
            if let Template::Imp(a, _) = t {
                for (i, prem) in self.premises.iter().enumerate() {
                    let succ_is_a = matches!(&prem.succedent, SuccPattern::Formula(s) if s == &**a);
                    if succ_is_a && prem.templates().any(|u| u == t) {
                        return Some((t, i));
                    }
                }
            }
        }
        None
    }
}

fn classify(premises: &[Pattern], conclusion: &Pattern) -> RuleKind {
    if premises.is_empty() {
        return RuleKind::Axiom;
    }
    if conclusion.mentions_modal() {
        return match &conclusion.succedent {
            SuccPattern::Formula(Template::Modal(_, body)) if matches!(**body, Template::Var(_)) => {
                RuleKind::RightModal
            }
            _ => RuleKind::OtherModal,
        };
    }
    let succ_compound = matches!(&conclusion.succedent, SuccPattern::Formula(t) if t.is_compound());
    let ante_compound = conclusion.templates().any(Template::is_compound);
    if succ_compound && !ante_compound {
        RuleKind::Right
    } else {
        RuleKind::Left
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} {{ premises: ", self.name)?;
        if self.premises.is_empty() {
            write!(f, "none")?;
        } else {
            let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", ps.join(" ; "))?;
        }
        write!(f, " ; conclusion: {} }}", self.conclusion)
    }
}

/// Binding of metavariables to formulas, multisets, and optional succedents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instantiation {
    pub formulas: BTreeMap<String, Formula>,
    pub contexts: BTreeMap<String, FMultiset>,
    pub succedents: BTreeMap<String, Option<Formula>>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_formula(mut self, name: &str, f: Formula) -> Self {
        self.formulas.insert(name.to_string(), f);
        self
    }

    pub fn with_context<I: IntoIterator<Item = Formula>>(mut self, name: &str, fs: I) -> Self {
        self.contexts.insert(name.to_string(), fs.into_iter().collect());
        self
    }

    pub fn with_succedent(mut self, name: &str, f: Option<Formula>) -> Self {
        self.succedents.insert(name.to_string(), f);
        self
    }

    pub fn formula(&self, name: &str) -> Result<&Formula, CalculusError> {
        self.formulas
            .get(name)
            .ok_or_else(|| CalculusError::Unbound(name.to_string()))
    }

    pub fn context(&self, name: &str) -> Result<&FMultiset, CalculusError> {
        self.contexts
            .get(name)
            .ok_or_else(|| CalculusError::Unbound(name.to_string()))
    }

    pub fn succedent(&self, name: &str) -> Result<&Option<Formula>, CalculusError> {
        self.succedents
            .get(name)
            .ok_or_else(|| CalculusError::Unbound(name.to_string()))
    }

    pub(crate) fn bind_formula(&mut self, name: &str, f: &Formula) -> bool {
        match self.formulas.get(name) {
            Some(prev) => prev == f,
            None => {
                self.formulas.insert(name.to_string(), f.clone());
                true
            }
        }
    }

    pub(crate) fn bind_context(&mut self, name: &str, m: FMultiset) -> bool {
        match self.contexts.get(name) {
            Some(prev) => *prev == m,
            None => {
                self.contexts.insert(name.to_string(), m);
                true
            }
        }
    }

    pub(crate) fn bind_succedent(&mut self, name: &str, f: Option<Formula>) -> bool {
        match self.succedents.get(name) {
            Some(prev) => *prev == f,
            None => {
                self.succedents.insert(name.to_string(), f);
                true
            }
        }
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(String, String)> = Vec::new();
        for (k, v) in &self.formulas {
            parts.push((k.clone(), v.to_string()));
        }
        for (k, v) in &self.contexts {
            parts.push((k.clone(), format!("{v}")));
        }
        for (k, v) in &self.succedents {
            let shown = v.as_ref().map_or_else(|| "_".to_string(), |g| g.to_string());
            parts.push((k.clone(), shown));
        }
        parts.sort();
        let joined: Vec<String> = parts.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&joined.join(", "))
    }
}
