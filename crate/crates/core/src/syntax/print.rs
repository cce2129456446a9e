use super::parse::Expr;
use super::{Formula, Sequent};

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

pub(crate) fn formula_to_expr(f: &Formula) -> Expr {
    match f {
        Formula::Bot => Expr::Bot,
        Formula::Atom(n) => Expr::Ident(n.to_string(), 0),
        Formula::And(a, b) => Expr::And(Box::new(formula_to_expr(a)), Box::new(formula_to_expr(b))),
        Formula::Or(a, b) => Expr::Or(Box::new(formula_to_expr(a)), Box::new(formula_to_expr(b))),
        Formula::Imp(a, b) => Expr::Imp(Box::new(formula_to_expr(a)), Box::new(formula_to_expr(b))),
        Formula::Modal(i, a) => Expr::Modal(*i, Box::new(formula_to_expr(a))),
    }
}

/// Prints with minimal parentheses. `rule_style` writes modal operators as `box`/`box(i)`.
pub(crate) fn print_expr(e: &Expr, rule_style: bool) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0, rule_style);
    out
}

fn write_expr(out: &mut String, e: &Expr, ctx: u8, rule_style: bool) {
    let prec = match e {
        Expr::Bot | Expr::Ident(..) | Expr::Modal(..) => PREC_UNARY,
        Expr::Imp(_, b) if **b == Expr::Bot => PREC_UNARY,
        Expr::Imp(..) => PREC_IMP,
        Expr::Or(..) => PREC_OR,
        Expr::And(..) => PREC_AND,
    };
    let wrap = prec < ctx;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Bot => out.push_str("false"),
        Expr::Ident(n, _) => out.push_str(n),
        Expr::Imp(a, b) if **b == Expr::Bot => {
            out.push('~');
            write_expr(out, a, PREC_UNARY, rule_style);
        }
        Expr::Imp(a, b) => {
            write_expr(out, a, PREC_OR, rule_style);
            out.push_str(" -> ");
            write_expr(out, b, PREC_IMP, rule_style);
        }
        Expr::Or(a, b) => {
            write_expr(out, a, PREC_OR, rule_style);
            out.push_str(" | ");
            write_expr(out, b, PREC_AND, rule_style);
        }
        Expr::And(a, b) => {
            write_expr(out, a, PREC_AND, rule_style);
            out.push_str(" & ");
            write_expr(out, b, PREC_UNARY, rule_style);
        }
        Expr::Modal(i, a) => {
            match (rule_style, i) {
                (true, 0) => out.push_str("box "),
                (true, i) => out.push_str(&format!("box({i}) ")),
                (false, 0) => out.push_str("[]"),
                (false, i) => out.push_str(&format!("[{i}]")),
            }
            write_expr(out, a, PREC_UNARY, rule_style);
        }
    }
    if wrap {
        out.push(')');
    }
}

pub fn print_formula(f: &Formula) -> String {
    print_expr(&formula_to_expr(f), false)
}

pub fn print_sequent(s: &Sequent) -> String {
    let ante: Vec<String> = s.antecedent.iter().map(print_formula).collect();
    let mut out = ante.join(", ");
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str("=>");
    if let Some(g) = &s.succedent {
        out.push(' ');
        out.push_str(&print_formula(g));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(print_formula(&Formula::imp(a("p"), Formula::Bot)), "~p");
        assert_eq!(
            print_formula(&Formula::and(a("p"), Formula::or(a("q"), a("r")))),
            "p & (q | r)"
        );
        assert_eq!(print_formula(&Formula::modal(1, a("p"))), "[1]p");
    }

    #[test]
    fn minimal_parentheses() {
        for text in [
            "(p -> q) -> r",
            "p -> q -> r",
            "p | q | r",
            "p | (q | r)",
            "p & q | r",
            "p & (q & r)",
            "~(p -> q)",
            "~~p",
            "[](p & q)",
            "[]~p -> q",
            "~(false -> p)",
        ] {
            assert_eq!(print_formula(&parse_formula(text).unwrap()), text);
        }
    }

    #[test]
    fn sequent_text() {
        let s = Sequent::from_parts([a("q"), a("p")], Some(a("r")));
        assert_eq!(print_sequent(&s), "p, q => r");
        assert_eq!(print_sequent(&Sequent::from_parts([a("p")], None)), "p =>");
        assert_eq!(print_sequent(&Sequent::theorem(a("p"))), "=> p");
    }
}
