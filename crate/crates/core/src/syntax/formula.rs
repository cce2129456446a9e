use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A propositional formula with indexed modal operators.
///
/// Negation is not a constructor: `~phi` is `phi -> false`. `Bot` is not an atom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Atom(Arc<str>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Modal(u32, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Modal(0, Arc::new(a))
    }

    pub fn modal(index: u32, a: Formula) -> Formula {
        Formula::Modal(index, Arc::new(a))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Atoms and `Bot` carry no connective or modal operator.
    pub fn is_flat(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Bot)
    }

    /// d(⊥)=0, d(p)=1, one more for every connective or modal operator.
    pub fn degree(&self) -> u64 {
        match self {
            Formula::Bot => 0,
            Formula::Atom(_) => 1,
            Formula::Modal(_, a) => a.degree() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.degree() + b.degree() + 1
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 1,
            Formula::Modal(_, a) => a.size() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.size() + b.size() + 1,
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 0,
            Formula::Modal(_, a) => a.modal_depth() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    /// All subformulas including `self`, in pre-order (duplicates kept).
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        out.push(self.clone());
        match self {
            Formula::Bot | Formula::Atom(_) => {}
            Formula::Modal(_, a) => a.collect_subformulas(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn contains_subformula(&self, needle: &Formula) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Formula::Bot | Formula::Atom(_) => false,
            Formula::Modal(_, a) => a.contains_subformula(needle),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.contains_subformula(needle) || b.contains_subformula(needle)
            }
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Formula::Bot => 0,
            Formula::Atom(_) => 1,
            Formula::And(..) => 2,
            Formula::Or(..) => 3,
            Formula::Imp(..) => 4,
            Formula::Modal(..) => 5,
        }
    }
}

// Canonical order: constructor tag, then children, then atom name, then modal index.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag().cmp(&other.tag()).then_with(|| match (self, other) {
            (Formula::Atom(a), Formula::Atom(b)) => a.cmp(b),
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2))
            | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Formula::Modal(i, a), Formula::Modal(j, b)) => a.cmp(b).then_with(|| i.cmp(j)),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn degree_examples() {
        assert_eq!(Formula::Bot.degree(), 0);
        assert_eq!(p().degree(), 1);
        assert_eq!(Formula::boxed(Formula::and(p(), q())).degree(), 4);
        assert_eq!(Formula::not(p()).degree(), 2);
    }

    #[test]
    fn canonical_order_is_tag_first() {
        assert!(Formula::Bot < p());
        assert!(p() < q());
        assert!(q() < Formula::and(p(), p()));
        assert!(Formula::imp(p(), q()) < Formula::boxed(p()));
        assert!(Formula::modal(1, p()) < Formula::modal(0, q()));
        assert!(Formula::modal(0, p()) < Formula::modal(1, p()));
    }
}
