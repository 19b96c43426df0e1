//! Newick input with branch lengths, converted to a [`MetricTree`].
//!
//! Unnamed nodes get labels `_n0, _n1, …` in preorder (skipping any label
//! already used in the input). Every non-root node needs a `:length`.

use std::collections::BTreeSet;

use crate::rational::{parse_rational, Rational};
use crate::tree::{MetricTree, TreeError};

struct Node {
    label: Option<String>,
    length: Option<Rational>,
    children: Vec<usize>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> TreeError {
        let line = self.text[..self.pos.min(self.text.len())].matches('\n').count() + 1;
        TreeError::Parse {
            line,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if "(),:;".contains(c) || c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
        self.text[start..self.pos].to_string()
    }

    fn subtree(&mut self) -> Result<usize, TreeError> {
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.subtree()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        let label = self.token();
        self.skip_ws();
        let length = if self.peek() == Some(':') {
            self.pos += 1;
            let raw = self.token();
            Some(parse_rational(&raw).map_err(|e| self.error(e.to_string()))?)
        } else {
            None
        };
        self.nodes.push(Node {
            label: (!label.is_empty()).then_some(label),
            length,
            children,
        });
        Ok(self.nodes.len() - 1)
    }
}

pub fn parse_newick(text: &str) -> Result<MetricTree, TreeError> {
    let mut parser = Parser {
        text,
        pos: 0,
        nodes: Vec::new(),
    };
    let root = parser.subtree()?;
    parser.skip_ws();
    if parser.peek() != Some(';') {
        return Err(parser.error("expected `;` after tree"));
    }
    parser.pos += 1;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("trailing input after `;`"));
    }

    let nodes = parser.nodes;
    let taken: BTreeSet<&str> = nodes.iter().filter_map(|n| n.label.as_deref()).collect();
    if taken.len() != nodes.iter().filter(|n| n.label.is_some()).count() {
        return Err(TreeError::Parse {
            line: 1,
            message: "duplicate node label".into(),
        });
    }

    // Preorder numbering for unnamed nodes.
    let mut labels: Vec<String> = vec![String::new(); nodes.len()];
    let mut counter = 0;
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        labels[i] = match &nodes[i].label {
            Some(l) => l.clone(),
            None => loop {
                let candidate = format!("_n{counter}");
                counter += 1;
                if !taken.contains(candidate.as_str()) {
                    break candidate;
                }
            },
        };
        stack.extend(nodes[i].children.iter().rev());
    }

    let mut edges = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            let length = nodes[c].length.clone().ok_or_else(|| TreeError::Parse {
                line: 1,
                message: format!("node `{}` has no branch length", labels[c]),
            })?;
            edges.push((labels[i].clone(), labels[c].clone(), length));
        }
    }
    MetricTree::from_edges(edges)
}
