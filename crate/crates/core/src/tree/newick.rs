//! Newick reading and writing for equidistant trees.
//!
//! Leaf labels are the integers `1..=n`; branch lengths may be integers,
//! decimals or `p/q` rationals. The reader checks equidistance exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::equidistant::{EquidistantTree, VertexId};
use crate::error::{Error, Result};
use crate::metric::ExactScalar;

struct Node {
    children: Vec<usize>,
    leaf: Option<usize>,
    length: Option<ExactScalar>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let before = &self.text[..at.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn token(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|c: char| "(),:;".contains(c) || c.is_whitespace())
            .unwrap_or(rest.len());
        self.pos += len;
        (start, &rest[..len])
    }

    fn subtree(&mut self) -> Result<usize> {
        let mut children = Vec::new();
        let leaf = if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.subtree()?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error(self.pos, "expected `,` or `)`")),
                }
            }
            // internal labels are ignored
            self.token();
            None
        } else {
            let (at, label) = self.token();
            if label.is_empty() {
                return Err(self.error(at, "expected a leaf label or `(`"));
            }
            let value: usize = label
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| self.error(at, format!("leaf label `{label}` is not a positive integer")))?;
            Some(value)
        };
        let length = if self.peek() == Some(':') {
            self.pos += 1;
            let (at, text) = self.token();
            let value = text
                .parse::<ExactScalar>()
                .map_err(|e| self.error(at, e.to_string()))?;
            Some(value)
        } else {
            None
        };
        self.nodes.push(Node {
            children,
            leaf,
            length,
        });
        Ok(self.nodes.len() - 1)
    }
}

/// Reads one rooted tree terminated by `;`.
pub fn parse_newick(text: &str) -> Result<EquidistantTree> {
    let mut p = Parser {
        text,
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    if p.peek() != Some(';') {
        return Err(p.error(p.pos, "expected `;`"));
    }
    p.pos += 1;
    if p.peek().is_some() {
        return Err(p.error(p.pos, "trailing input after `;`"));
    }
    let nodes = p.nodes;

    let leaves: Vec<usize> = nodes.iter().filter_map(|nd| nd.leaf).collect();
    let n = leaves.len();
    let mut seen = vec![false; n + 1];
    for &label in &leaves {
        if label > n || std::mem::replace(&mut seen[label], true) {
            return Err(Error::InvalidTree(format!(
                "leaf labels must be exactly 1..={n}; found {label} out of place"
            )));
        }
    }
    if n < 2 {
        return Err(Error::TooFewLeaves { n, min: 2 });
    }

    // depth of every node from the root
    let mut depth = vec![ExactScalar::zero(); nodes.len()];
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &c in &nodes[v].children {
            let len = nodes[c].length.as_ref().ok_or_else(|| {
                Error::InvalidTree("every non-root branch needs a length".into())
            })?;
            depth[c] = &depth[v] + len;
            stack.push(c);
        }
    }
    let leaf_nodes: Vec<usize> = (0..nodes.len()).filter(|&v| nodes[v].leaf.is_some()).collect();
    let total = depth[leaf_nodes[0]].clone();
    for &v in &leaf_nodes {
        if depth[v] != total {
            let first = nodes[leaf_nodes[0]].leaf.unwrap();
            let label = nodes[v].leaf.unwrap();
            return Err(Error::NotEquidistant {
                leaf: label,
                depth: depth[v].to_string(),
                expected: format!("{total} (depth of leaf {first})"),
            });
        }
    }

    let mut internal_id = vec![usize::MAX; nodes.len()];
    let mut next = n;
    for (v, node) in nodes.iter().enumerate() {
        if node.leaf.is_none() {
            if node.children.len() < 2 {
                return Err(Error::InvalidTree("internal vertex with fewer than two children".into()));
            }
            internal_id[v] = next;
            next += 1;
        }
    }
    let mut internal_children = Vec::new();
    let mut heights = Vec::new();
    for (v, node) in nodes.iter().enumerate() {
        if node.leaf.is_some() {
            continue;
        }
        for &c in &node.children {
            if nodes[c].leaf.is_none() && !nodes[c].length.as_ref().unwrap().is_positive() {
                return Err(Error::NonPositiveEdge(nodes[c].length.as_ref().unwrap().to_string()));
            }
        }
        internal_children.push(
            node.children
                .iter()
                .map(|&c| nodes[c].leaf.map_or(internal_id[c], |l| l - 1))
                .collect(),
        );
        heights.push(&total - &depth[v]);
    }
    EquidistantTree::from_internal(n, internal_children, heights)
}

/// Canonical Newick: children ordered by smallest leaf, lengths written
/// as terminating decimals when possible and `p/q` otherwise.
pub fn write_newick(tree: &EquidistantTree) -> String {
    let mut out = String::new();
    write_vertex(tree, tree.root(), &mut out);
    out.push(';');
    out
}

fn write_vertex(tree: &EquidistantTree, v: VertexId, out: &mut String) {
    if tree.is_leaf(v) {
        out.push_str(&(v.0 + 1).to_string());
    } else {
        out.push('(');
        for (k, c) in tree.children(v).enumerate() {
            if k > 0 {
                out.push(',');
            }
            write_vertex(tree, c, out);
            out.push(':');
            out.push_str(&format_length(&(tree.height(v) - tree.height(c))));
        }
        out.push(')');
    }
}

/// Exact decimal when the denominator has only factors 2 and 5.
pub fn format_length(x: &ExactScalar) -> String {
    let den = x.denom();
    if den.is_one() {
        return x.numer().to_string();
    }
    let (mut twos, mut fives, mut rest) = (0usize, 0usize, den);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return x.to_string();
    }
    x.to_decimal_string(twos.max(fives))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::UltraVector;

    #[test]
    fn reads_the_cherry_example() {
        let t = parse_newick("((1:0.5,2:0.5):1.0,3:1.5);").unwrap();
        assert_eq!(t.to_ultrametric(), UltraVector::from_integers(3, &[1, 3, 3]).unwrap());
        assert_eq!(write_newick(&t), "((1:0.5,2:0.5):1,3:1.5);");
    }

    #[test]
    fn canonical_output_round_trips() {
        for text in [
            "((1:0.5,2:0.5):1,3:1.5);",
            "((1:1,(2:1/3,4:1/3):2/3):4,(3:2,5:2):3);",
            "(1:0,2:0,3:0);",
            "((1:-1,2:-1):2,3:1);",
        ] {
            let t = parse_newick(text).unwrap();
            assert_eq!(write_newick(&t), text);
        }
    }

    #[test]
    fn rejects_non_equidistant_trees() {
        assert!(matches!(
            parse_newick("((1:1,2:2):1,3:2);"),
            Err(Error::NotEquidistant { leaf: 2, .. })
        ));
    }

    #[test]
    fn rejects_non_positive_internal_edges() {
        assert!(matches!(
            parse_newick("((1:1,2:1):0,3:1);"),
            Err(Error::NonPositiveEdge(_))
        ));
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["((1:1,2:1):1,3:2)", "((1:1,2:1:1,3:2);", "((1:1,x:1):1,3:2);", "((1:1,2:1):1,3:2);;", "(1:1,1:1);", "(1,2);", "((1:1):1,2:2);"] {
            assert!(parse_newick(bad).is_err(), "{bad}");
        }
        match parse_newick("((1:1,2:1):1,\n 3:zz);") {
            Err(Error::Parse { line: 2, column: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn length_formatting() {
        let q = |s: &str| s.parse::<ExactScalar>().unwrap();
        assert_eq!(format_length(&q("3/8")), "0.375");
        assert_eq!(format_length(&q("-1/5")), "-0.2");
        assert_eq!(format_length(&q("1/3")), "1/3");
        assert_eq!(format_length(&q("7")), "7");
    }
}
