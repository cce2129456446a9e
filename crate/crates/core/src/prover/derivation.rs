use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{instantiate_premises, match_conclusion, Calculus, Instantiation, MatchMode};
use crate::syntax::{parse_sequent, print_sequent, ParseError, Sequent};

/// A proof tree. Each node records the rule and the instantiation that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: String,
    pub instantiation: Instantiation,
    pub children: Vec<Derivation>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Node {
    sequent: String,
    rule: String,
    children: Vec<Node>,
}

#[derive(Debug, Error)]
pub enum DerivationJsonError {
    #[error("malformed derivation document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad sequent {text:?}: {source}")]
    Sequent { text: String, source: ParseError },
    #[error("rule `{0}` is not part of the calculus")]
    UnknownRule(String),
    #[error("no instance of `{rule}` yields {sequent} with the listed children")]
    NoInstance { rule: String, sequent: String },
}

impl Derivation {
    pub fn leaf(conclusion: Sequent, rule: &str, instantiation: Instantiation) -> Self {
        Derivation {
            conclusion,
            rule: rule.to_string(),
            instantiation,
            children: Vec::new(),
        }
    }

    /// Longest branch, counting nodes.
    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Leftmost branch, counting nodes.
    pub fn leftmost_length(&self) -> usize {
        1 + self.children.first().map_or(0, Derivation::leftmost_length)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    fn to_node(&self) -> Node {
        Node {
            sequent: print_sequent(&self.conclusion),
            rule: self.rule.clone(),
            children: self.children.iter().map(Derivation::to_node).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_node()).expect("derivations always serialize")
    }

    /// Reads a derivation document, recovering each node's instantiation from the calculus.
    pub fn from_json(c: &Calculus, text: &str) -> Result<Derivation, DerivationJsonError> {
        let node: Node = serde_json::from_str(text)?;
        rebuild(c, &node)
    }

    /// One line per node, children indented below their parent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&print_sequent(&self.conclusion));
        out.push_str("   [");
        out.push_str(&self.rule);
        out.push_str("]\n");
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }
}

fn rebuild(c: &Calculus, node: &Node) -> Result<Derivation, DerivationJsonError> {
    let conclusion = parse_sequent(&node.sequent).map_err(|source| DerivationJsonError::Sequent {
        text: node.sequent.clone(),
        source,
    })?;
    let rule = c
        .rule(&node.rule)
        .ok_or_else(|| DerivationJsonError::UnknownRule(node.rule.clone()))?;
    let children = node
        .children
        .iter()
        .map(|n| rebuild(c, n))
        .collect::<Result<Vec<_>, _>>()?;
    let wanted: Vec<&Sequent> = children.iter().map(|d| &d.conclusion).collect();
    let inst = match_conclusion(rule, &conclusion, MatchMode::Exhaustive)
        .into_iter()
        .find(|inst| {
            instantiate_premises(rule, inst)
                .map(|ps| ps.iter().collect::<Vec<_>>() == wanted)
                .unwrap_or(false)
        })
        .ok_or_else(|| DerivationJsonError::NoInstance {
            rule: node.rule.clone(),
            sequent: node.sequent.clone(),
        })?;
    Ok(Derivation {
        conclusion,
        rule: node.rule.clone(),
        instantiation: inst,
        children,
    })
}

/// Every node is an instance of a rule of `c` under its recorded instantiation, and its
/// children prove exactly the instantiated premises.
pub fn check_derivation(c: &Calculus, d: &Derivation) -> bool {
    let Some(rule) = c.rule(&d.rule) else {
        return false;
    };
    let Ok(concl) = rule.conclusion.instantiate(&d.instantiation) else {
        return false;
    };
    let Ok(premises) = instantiate_premises(rule, &d.instantiation) else {
        return false;
    };
    concl == d.conclusion
        && premises.len() == d.children.len()
        && premises.iter().zip(&d.children).all(|(p, ch)| *p == ch.conclusion)
        && d.children.iter().all(|ch| check_derivation(c, ch))
}
