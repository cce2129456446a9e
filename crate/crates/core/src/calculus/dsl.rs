//! The rule-definition language.
//!
//! ```text
//! rule NAME { premises: SEQPAT (";" SEQPAT)* | "none" ; conclusion: SEQPAT }
//! SEQPAT  := [ITEM ("," ITEM)*] "=>" (TEMPLATE | CTXVAR | "_")
//! ITEM    := CTXVAR | "box" CTXVAR | "box(" INT ")" CTXVAR | TEMPLATE
//! ```
//!
//! Uppercase identifiers are context metavariables (or the succedent metavariable when
//! they stand alone after `=>`). Lowercase identifiers `p`, `q`, `r`, `s` (optionally
//! followed by digits) are atom metavariables; every other lowercase identifier is a
//! formula metavariable. `false`, `~`, `&`, `|`, `->`, `box`, `[]` and `[i]` have their
//! formula meaning.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::schema::{AnteItem, Pattern, Provenance, RuleSchema, SuccPattern, Template};
use crate::syntax::parse::{Expr, ParseError, Parser, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct DslValidationError {
    pub line: usize,
    pub rule: Option<String>,
    pub message: String,
}

impl fmt::Display for DslValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Some(r) => write!(f, "line {}: rule {}: {}", self.line, r, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

fn is_context_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

fn is_atom_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('p' | 'q' | 'r' | 's')) && chars.all(|c| c.is_ascii_digit())
}

struct RuleParser<'a> {
    p: Parser<'a>,
}

impl<'a> RuleParser<'a> {
    fn line_of(&self, pos: usize) -> usize {
        self.p.text[..pos.min(self.p.text.len())].matches('\n').count() + 1
    }

    fn template(&self, e: Expr) -> Result<Template, ParseError> {
        Ok(match e {
            Expr::Bot => Template::Bot,
            Expr::Ident(name, pos) => {
                if is_context_name(&name) {
                    return Err(ParseError::at(
                        self.p.text,
                        pos,
                        format!("context metavariable `{name}` used inside a formula"),
                    ));
                }
                if name == "_" {
                    return Err(ParseError::at(self.p.text, pos, "`_` is only allowed as a succedent"));
                }
                if is_atom_var_name(&name) {
                    Template::AtomVar(name)
                } else {
                    Template::Var(name)
                }
            }
            Expr::And(a, b) => Template::And(Box::new(self.template(*a)?), Box::new(self.template(*b)?)),
            Expr::Or(a, b) => Template::Or(Box::new(self.template(*a)?), Box::new(self.template(*b)?)),
            Expr::Imp(a, b) => Template::Imp(Box::new(self.template(*a)?), Box::new(self.template(*b)?)),
            Expr::Modal(i, a) => Template::Modal(i, Box::new(self.template(*a)?)),
        })
    }

    fn ante_item(&mut self) -> Result<AnteItem, ParseError> {
        let pos = self.p.pos();
        let e = self.p.parse_expr()?;
        match e {
            Expr::Ident(name, _) if is_context_name(&name) => Ok(AnteItem::Context(name)),
            Expr::Modal(i, inner) => match *inner {
                Expr::Ident(name, _) if is_context_name(&name) => Ok(AnteItem::BoxedContext(i, name)),
                Expr::Modal(_, ref deeper)
                    if matches!(&**deeper, Expr::Ident(n, _) if is_context_name(n)) =>
                {
                    Err(ParseError::at(self.p.text, pos, "nested boxed contexts are not supported"))
                }
                other => Ok(AnteItem::Formula(Template::Modal(i, Box::new(self.template(other)?)))),
            },
            other => Ok(AnteItem::Formula(self.template(other)?)),
        }
    }

    fn seq_pattern(&mut self) -> Result<Pattern, ParseError> {
        let mut antecedent = Vec::new();
        if *self.p.peek() != Tok::FatArrow {
            loop {
                antecedent.push(self.ante_item()?);
                match self.p.peek() {
                    Tok::Comma => {
                        self.p.bump();
                    }
                    Tok::FatArrow => break,
                    _ => return Err(self.p.unexpected("`,` or `=>`")),
                }
            }
        }
        self.p.expect(Tok::FatArrow)?;
        let succedent = match self.p.peek().clone() {
            Tok::Ident(n) if n == "_" => {
                self.p.bump();
                SuccPattern::Empty
            }
            Tok::Ident(n) if is_context_name(&n) && matches!(self.p.peek_at(1), Tok::Semi | Tok::RBrace) => {
                self.p.bump();
                SuccPattern::Var(n)
            }
            _ => {
                let e = self.p.parse_expr()?;
                SuccPattern::Formula(self.template(e)?)
            }
        };
        Ok(Pattern {
            antecedent,
            succedent,
        })
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.p.peek().clone() {
            Tok::Ident(n) if n == word => {
                self.p.bump();
                self.p.expect(Tok::Colon)
            }
            _ => Err(self.p.unexpected(&format!("`{word}:`"))),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.p.peek(), Tok::Ident(n) if n == word) && *self.p.peek_at(1) == Tok::Colon
    }

    /// Parses the body after `rule NAME`.
    fn rule_body(&mut self) -> Result<(Vec<Pattern>, Pattern), ParseError> {
        self.p.expect(Tok::LBrace)?;
        self.keyword("premises")?;
        let mut premises = Vec::new();
        if matches!(self.p.peek(), Tok::Ident(n) if n == "none") {
            self.p.bump();
            self.p.expect(Tok::Semi)?;
        } else {
            loop {
                premises.push(self.seq_pattern()?);
                self.p.expect(Tok::Semi)?;
                if self.at_keyword("conclusion") {
                    break;
                }
            }
        }
        self.keyword("conclusion")?;
        let conclusion = self.seq_pattern()?;
        if *self.p.peek() == Tok::Semi {
            self.p.bump();
        }
        self.p.expect(Tok::RBrace)?;
        Ok((premises, conclusion))
    }

    fn skip_block(&mut self) {
        while !matches!(self.p.peek(), Tok::RBrace | Tok::Eof) {
            self.p.bump();
        }
        if *self.p.peek() == Tok::RBrace {
            self.p.bump();
        }
    }
}

/// Parses a rule file. Rules with errors are reported and skipped; the valid ones are
/// returned in file order.
pub fn parse_rules(text: &str) -> (Vec<RuleSchema>, Vec<DslValidationError>) {
    parse_rules_as(text, Provenance::User)
}

pub(crate) fn parse_rules_as(
    text: &str,
    provenance: Provenance,
) -> (Vec<RuleSchema>, Vec<DslValidationError>) {
    let mut rules: Vec<RuleSchema> = Vec::new();
    let mut errors = Vec::new();
    let p = match Parser::new(text, true) {
        Ok(p) => p,
        Err(e) => {
            errors.push(DslValidationError {
                line: e.line,
                rule: None,
                message: e.message,
            });
            return (rules, errors);
        }
    };
    let mut rp = RuleParser { p };
    let mut names = BTreeSet::new();
    while !rp.p.at_eof() {
        let start = rp.p.pos();
        let line = rp.line_of(start);
        match rp.p.peek().clone() {
            Tok::Ident(kw) if kw == "rule" => {
                rp.p.bump();
            }
            _ => {
                errors.push(DslValidationError {
                    line,
                    rule: None,
                    message: format!("expected `rule`, found {}", rp.p.peek().describe()),
                });
                rp.skip_block();
                continue;
            }
        }
        let name = match rp.p.expect_ident() {
            Ok(n) => n,
            Err(e) => {
                errors.push(DslValidationError {
                    line: e.line,
                    rule: None,
                    message: e.message,
                });
                rp.skip_block();
                continue;
            }
        };
        match rp.rule_body() {
            Ok((premises, conclusion)) => {
                let schema = RuleSchema::new(&name, premises, conclusion, provenance.clone());
                let mut problems = schema.validate();
                if !names.insert(name.clone()) {
                    problems.push(format!("duplicate rule name `{name}`"));
                }
                if problems.is_empty() {
                    rules.push(schema);
                } else {
                    errors.extend(problems.into_iter().map(|message| DslValidationError {
                        line,
                        rule: Some(name.clone()),
                        message,
                    }));
                }
            }
            Err(e) => {
                errors.push(DslValidationError {
                    line: e.line,
                    rule: Some(name),
                    message: e.message,
                });
                rp.skip_block();
            }
        }
    }
    (rules, errors)
}

/// Renders rules in the DSL, one per line.
pub fn print_rules(rules: &[RuleSchema]) -> String {
    let mut out = String::new();
    for r in rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{builtin, RuleKind};

    #[test]
    fn rk_text_equals_builtin() {
        let (rules, errs) = parse_rules("rule R_K { premises: G => phi ; conclusion: P, box G => box phi }");
        assert!(errs.is_empty(), "{errs:?}");
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0], builtin::modal_rule("R_K").unwrap());
        assert_eq!(rules[0].provenance, Provenance::User);
        assert_eq!(rules[0].kind, RuleKind::RightModal);
    }

    #[test]
    fn unbound_premise_variable_is_rejected() {
        let (rules, errs) = parse_rules("rule Bad { premises: G, chi => phi ; conclusion: G => box phi }");
        assert!(rules.is_empty());
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("chi"), "{}", errs[0]);
        assert_eq!(errs[0].rule.as_deref(), Some("Bad"));
    }

    #[test]
    fn empty_file() {
        let (rules, errs) = parse_rules("");
        assert!(rules.is_empty() && errs.is_empty());
        let (rules, errs) = parse_rules("  # only a comment\n");
        assert!(rules.is_empty() && errs.is_empty());
    }

    #[test]
    fn valid_rules_survive_errors() {
        let text = "rule A { premises: G => phi ; conclusion: P, box G => box phi }\n\
                    rule B { premises: G => ; conclusion: G => phi }\n\
                    rule C { premises: none ; conclusion: G, false => D }\n";
        let (rules, errs) = parse_rules(text);
        assert_eq!(rules.iter().map(|r| r.name.as_str()).collect::<Vec<_>>(), ["A", "C"]);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].line, 2);
    }

    #[test]
    fn sort_conflicts() {
        let (_, errs) = parse_rules("rule S { premises: G, phi => G ; conclusion: G, box phi => G }");
        assert!(errs.iter().any(|e| e.message.contains("both")), "{errs:?}");
        let (_, errs) = parse_rules("rule S { premises: G => phi & G ; conclusion: G => phi }");
        assert!(!errs.is_empty());
    }

    #[test]
    fn nested_boxed_context_rejected() {
        let (_, errs) = parse_rules("rule N { premises: G => phi ; conclusion: box box G => box phi }");
        assert!(errs[0].message.contains("nested"), "{errs:?}");
    }

    #[test]
    fn indexed_boxes_and_empty_succedent() {
        let (rules, errs) =
            parse_rules("rule D1 { premises: G, phi => _ ; conclusion: P, box(1) G, [1]phi => D }");
        assert!(errs.is_empty(), "{errs:?}");
        let r = &rules[0];
        assert_eq!(r.premises[0].succedent, SuccPattern::Empty);
        assert_eq!(r.conclusion.antecedent[1], AnteItem::BoxedContext(1, "G".into()));
        assert_eq!(r.kind, RuleKind::OtherModal);
        assert_eq!(
            r.to_string(),
            "rule D1 { premises: G, phi => _ ; conclusion: P, box(1) G, box(1) phi => D }"
        );
    }

    #[test]
    fn builtins_round_trip_through_print() {
        let mut all = builtin::g4ip().rules;
        all.extend(builtin::g3ip().rules);
        all.extend(builtin::builtin_modal_rules().into_iter().map(|(_, r)| r));
        all.dedup_by(|a, b| a.name == b.name);
        let mut seen = BTreeSet::new();
        all.retain(|r| seen.insert(r.name.clone()));
        let text = print_rules(&all);
        let (back, errs) = parse_rules(&text);
        assert!(errs.is_empty(), "{errs:?}");
        assert_eq!(back, all);
    }
}
