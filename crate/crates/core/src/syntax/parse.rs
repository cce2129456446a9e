//! Lexer and recursive-descent parser shared by the formula grammar and the rule DSL.
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "[]" unary | "[" INT "]" unary | IDENT | "false" | "(" formula ")"
//! ```
//!
//! In rule mode `box` and `box(i)` are accepted as modal prefixes as well.

use thiserror::Error;

use super::{FMultiset, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(text: &str, pos: usize, message: impl Into<String>) -> Self {
        let before = &text[..pos.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
        ParseError {
            pos,
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u32),
    Tilde,
    BoxEmpty,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Amp,
    Bar,
    Arrow,
    FatArrow,
    Comma,
    Semi,
    Colon,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Eof => "end of input".to_string(),
            Tok::Tilde => "`~`".into(),
            Tok::BoxEmpty => "`[]`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let tok = match c {
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Tok::BoxEmpty
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'{' => {
                i += 1;
                Tok::LBrace
            }
            b'}' => {
                i += 1;
                Tok::RBrace
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b';' => {
                i += 1;
                Tok::Semi
            }
            b':' => {
                i += 1;
                Tok::Colon
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::FatArrow
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse::<u32>()
                    .map_err(|_| ParseError::at(text, start, "modal index out of range"))?;
                Tok::Int(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(ParseError::at(text, start, format!("unexpected character `{ch}`")));
            }
        };
        out.push(Token { tok, pos: start });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: text.len(),
    });
    Ok(out)
}

/// Syntax tree shared by concrete formulas and rule templates; identifiers are resolved
/// by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Expr {
    Bot,
    Ident(String, usize),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Modal(u32, Box<Expr>),
}

pub(crate) struct Parser<'a> {
    pub text: &'a str,
    toks: Vec<Token>,
    idx: usize,
    rule_mode: bool,
}

impl<'a> Parser<'a> {
    pub fn new(text: &'a str, rule_mode: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            text,
            toks: lex(text)?,
            idx: 0,
            rule_mode,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.idx + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn pos(&self) -> usize {
        self.toks[self.idx].pos
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].tok.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.text, self.pos(), message)
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.parse_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.parse_expr()?;
            return Ok(Expr::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.parse_unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                let e = self.parse_unary()?;
                Ok(Expr::Imp(Box::new(e), Box::new(Expr::Bot)))
            }
            Tok::BoxEmpty => {
                self.bump();
                Ok(Expr::Modal(0, Box::new(self.parse_unary()?)))
            }
            Tok::LBracket => {
                self.bump();
                let n = match self.bump() {
                    Tok::Int(n) => n,
                    _ => return Err(ParseError::at(self.text, pos + 1, "expected modal index")),
                };
                self.expect(Tok::RBracket)?;
                Ok(Expr::Modal(n, Box::new(self.parse_unary()?)))
            }
            Tok::Ident(name) if self.rule_mode && name == "box" => {
                self.bump();
                let mut index = 0;
                if *self.peek() == Tok::LParen {
                    if let (Tok::Int(n), Tok::RParen) = (self.peek_at(1).clone(), self.peek_at(2)) {
                        self.bump();
                        self.bump();
                        self.bump();
                        index = n;
                    }
                }
                Ok(Expr::Modal(index, Box::new(self.parse_unary()?)))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "false" {
                    Ok(Expr::Bot)
                } else {
                    Ok(Expr::Ident(name, pos))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn expr_to_formula(e: Expr) -> Formula {
    match e {
        Expr::Bot => Formula::Bot,
        Expr::Ident(name, _) => Formula::atom(&name),
        Expr::And(a, b) => Formula::and(expr_to_formula(*a), expr_to_formula(*b)),
        Expr::Or(a, b) => Formula::or(expr_to_formula(*a), expr_to_formula(*b)),
        Expr::Imp(a, b) => Formula::imp(expr_to_formula(*a), expr_to_formula(*b)),
        Expr::Modal(i, a) => Formula::modal(i, expr_to_formula(*a)),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, false)?;
    let e = p.parse_expr()?;
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(expr_to_formula(e))
}

/// Parses `f1, f2, ... => g`, `f1, ... =>`, or `=> g`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text, false)?;
    let mut ante = FMultiset::new();
    if *p.peek() != Tok::FatArrow {
        loop {
            ante.insert(expr_to_formula(p.parse_expr()?));
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::FatArrow => break,
                _ => return Err(p.unexpected("`,` or `=>`")),
            }
        }
    }
    p.expect(Tok::FatArrow)?;
    let succ = if p.at_eof() {
        None
    } else {
        Some(expr_to_formula(p.parse_expr()?))
    };
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(Sequent::new(ante, succ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(parse_formula("p -> p").unwrap(), Formula::imp(a("p"), a("p")));
        assert_eq!(parse_formula("~p").unwrap(), Formula::imp(a("p"), Formula::Bot));
        assert_eq!(
            parse_formula("[]p & []q").unwrap(),
            Formula::and(Formula::boxed(a("p")), Formula::boxed(a("q")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::imp(a("p"), Formula::imp(a("q"), a("r")))
        );
        assert_eq!(
            parse_formula("p | q | r").unwrap(),
            Formula::or(Formula::or(a("p"), a("q")), a("r"))
        );
        assert_eq!(
            parse_formula("p & q | r -> s").unwrap(),
            Formula::imp(Formula::or(Formula::and(a("p"), a("q")), a("r")), a("s"))
        );
        assert_eq!(
            parse_formula("[2]~p").unwrap(),
            Formula::modal(2, Formula::not(a("p")))
        );
        assert_eq!(parse_formula("false").unwrap(), Formula::Bot);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_formula("p & ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_formula("p $ q").unwrap_err();
        assert_eq!(e.pos, 2);
        assert_eq!(e.column, 3);
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("[x]p").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn box_is_an_atom_outside_rule_mode() {
        assert_eq!(parse_formula("box").unwrap(), a("box"));
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("p, q => r").unwrap();
        assert_eq!(s.antecedent.len(), 2);
        assert_eq!(s.succedent, Some(a("r")));
        let s = parse_sequent("p, p =>").unwrap();
        assert_eq!(s.antecedent.count(&a("p")), 2);
        assert_eq!(s.succedent, None);
        let s = parse_sequent("=> p -> p").unwrap();
        assert!(s.antecedent.is_empty());
        let s = parse_sequent("=>").unwrap();
        assert_eq!(s, Sequent::from_parts([], None));
        assert!(parse_sequent("p, => q").is_err());
        assert!(parse_sequent("p q").is_err());
    }
}
