//! Clique-width expressions over order types and their unary restriction.
//!
//! An expression is stored as an arena in post-order: children always precede
//! their parent and the root is the last node. Post-order also lists `create`
//! leaves left to right, which is the point numbering used everywhere.

mod eval;
mod parse;
pub mod unary;

use std::fmt::{self, Write as _};

pub use eval::{evaluate, evaluate_node, validate, LabelledStructure, Mismatch, ValidatedExpr};
pub use parse::parse_expression;

pub type NodeId = usize;
pub type Label = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arity {
    Unary,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Create(Label),
    Union(NodeId, NodeId),
    /// Binary label `k` on every ordered pair `(a, b)` with `a` in `i` and `b` in `j`.
    AddPair { child: NodeId, i: Label, j: Label, k: Label },
    /// Cyclic closure of `(a, b, c)` for pairs `(a, b)` carrying `k` and apexes `c` in `i`.
    Ccw { child: NodeId, k: Label, i: Label },
    /// As [`Op::Ccw`] but adds `(b, a, c)`.
    Cw { child: NodeId, k: Label, i: Label },
    Relabel { child: NodeId, arity: Arity, from: Label, to: Label },
}

impl Op {
    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Op::Create(_) => (None, None),
            Op::Union(l, r) => (Some(l), Some(r)),
            Op::AddPair { child, .. } | Op::Ccw { child, .. } | Op::Cw { child, .. } | Op::Relabel { child, .. } => {
                (Some(child), None)
            }
        };
        a.into_iter().chain(b)
    }
}

/// A clique-width expression with interned label names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwExpression {
    unary: Vec<String>,
    binary: Vec<String>,
    nodes: Vec<Op>,
}

impl CwExpression {
    /// The expression with no nodes; it denotes the empty structure.
    pub fn empty() -> Self {
        CwExpression { unary: Vec::new(), binary: Vec::new(), nodes: Vec::new() }
    }

    pub fn nodes(&self) -> &[Op] {
        &self.nodes
    }

    pub fn root(&self) -> Option<NodeId> {
        self.nodes.len().checked_sub(1)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn unary_labels(&self) -> &[String] {
        &self.unary
    }

    pub fn binary_labels(&self) -> &[String] {
        &self.binary
    }

    pub fn point_count(&self) -> usize {
        self.nodes.iter().filter(|op| matches!(op, Op::Create(_))).count()
    }

    /// Sum of the arities of all labels that occur in the expression.
    pub fn width(&self) -> usize {
        self.unary.len() + 2 * self.binary.len()
    }

    pub fn label_name(&self, arity: Arity, label: Label) -> &str {
        match arity {
            Arity::Unary => &self.unary[label as usize],
            Arity::Binary => &self.binary[label as usize],
        }
    }

    /// Start index of the contiguous post-order range holding `node`'s subtree.
    pub fn subtree_start(&self, node: NodeId) -> NodeId {
        let mut start = node;
        let mut stack = vec![node];
        while let Some(t) = stack.pop() {
            start = start.min(t);
            stack.extend(self.nodes[t].children());
        }
        start
    }

    /// Applies a bijective renaming to the label names (node structure unchanged).
    pub fn rename_labels(&self, unary: impl Fn(&str) -> String, binary: impl Fn(&str) -> String) -> CwExpression {
        CwExpression {
            unary: self.unary.iter().map(|s| unary(s)).collect(),
            binary: self.binary.iter().map(|s| binary(s)).collect(),
            nodes: self.nodes.clone(),
        }
    }

    fn write_node(&self, node: NodeId, out: &mut String) {
        let u = |l: Label| self.unary[l as usize].as_str();
        let b = |l: Label| self.binary[l as usize].as_str();
        match self.nodes[node] {
            Op::Create(i) => {
                let _ = write!(out, "create({})", u(i));
            }
            Op::Union(l, r) => {
                out.push_str("union(");
                self.write_node(l, out);
                out.push(',');
                self.write_node(r, out);
                out.push(')');
            }
            Op::AddPair { child, i, j, k } => {
                out.push_str("addpair(");
                self.write_node(child, out);
                let _ = write!(out, "; {},{}->{})", u(i), u(j), b(k));
            }
            Op::Ccw { child, k, i } | Op::Cw { child, k, i } => {
                out.push_str(if matches!(self.nodes[node], Op::Ccw { .. }) { "ccw(" } else { "cw(" });
                self.write_node(child, out);
                let _ = write!(out, "; {},{})", b(k), u(i));
            }
            Op::Relabel { child, arity, from, to } => {
                out.push_str("relab(");
                self.write_node(child, out);
                let (tag, f, t) = match arity {
                    Arity::Unary => ("u", u(from), u(to)),
                    Arity::Binary => ("b", b(from), b(to)),
                };
                let _ = write!(out, "; {tag} {f}->{t})");
            }
        }
    }
}

impl fmt::Display for CwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if let Some(root) = self.root() {
            self.write_node(root, &mut out);
        }
        f.write_str(&out)
    }
}

/// Incremental construction of expressions by label name.
///
/// Nodes may be created in any order as long as each is used as a child at
/// most once; [`ExprBuilder::finish`] re-linearises the tree in post-order.
#[derive(Debug, Default)]
pub struct ExprBuilder {
    unary: Vec<String>,
    binary: Vec<String>,
    nodes: Vec<Op>,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(table: &mut Vec<String>, name: &str) -> Label {
        match table.iter().position(|s| s == name) {
            Some(p) => p as Label,
            None => {
                table.push(name.to_string());
                (table.len() - 1) as Label
            }
        }
    }

    fn u(&mut self, name: &str) -> Label {
        Self::intern(&mut self.unary, name)
    }

    fn b(&mut self, name: &str) -> Label {
        Self::intern(&mut self.binary, name)
    }

    fn push(&mut self, op: Op) -> NodeId {
        self.nodes.push(op);
        self.nodes.len() - 1
    }

    pub fn create(&mut self, label: &str) -> NodeId {
        let l = self.u(label);
        self.push(Op::Create(l))
    }

    pub fn union(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.push(Op::Union(left, right))
    }

    pub fn add_pair(&mut self, child: NodeId, i: &str, j: &str, k: &str) -> NodeId {
        assert_ne!(i, j, "addpair labels must differ");
        let (i, j, k) = (self.u(i), self.u(j), self.b(k));
        self.push(Op::AddPair { child, i, j, k })
    }

    pub fn ccw(&mut self, child: NodeId, k: &str, i: &str) -> NodeId {
        let (k, i) = (self.b(k), self.u(i));
        self.push(Op::Ccw { child, k, i })
    }

    pub fn cw(&mut self, child: NodeId, k: &str, i: &str) -> NodeId {
        let (k, i) = (self.b(k), self.u(i));
        self.push(Op::Cw { child, k, i })
    }

    pub fn relabel_unary(&mut self, child: NodeId, from: &str, to: &str) -> NodeId {
        assert_ne!(from, to, "relabel must change the label");
        let (from, to) = (self.u(from), self.u(to));
        self.push(Op::Relabel { child, arity: Arity::Unary, from, to })
    }

    pub fn relabel_binary(&mut self, child: NodeId, from: &str, to: &str) -> NodeId {
        assert_ne!(from, to, "relabel must change the label");
        let (from, to) = (self.b(from), self.b(to));
        self.push(Op::Relabel { child, arity: Arity::Binary, from, to })
    }

    /// The expression rooted at `root`, in post-order, keeping only labels it uses.
    pub fn finish(self, root: NodeId) -> CwExpression {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                order.push(t);
                continue;
            }
            stack.push((t, true));
            let children: Vec<NodeId> = self.nodes[t].children().collect();
            for &c in children.iter().rev() {
                stack.push((c, false));
            }
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (pos, &old) in order.iter().enumerate() {
            assert_eq!(new_id[old], usize::MAX, "node {old} used twice");
            new_id[old] = pos;
        }
        let mut umap: Vec<Option<Label>> = vec![None; self.unary.len()];
        let mut bmap: Vec<Option<Label>> = vec![None; self.binary.len()];
        let mut unary = Vec::new();
        let mut binary = Vec::new();
        let mut mu = |l: Label| -> Label {
            *umap[l as usize].get_or_insert_with(|| {
                unary.push(self.unary[l as usize].clone());
                (unary.len() - 1) as Label
            })
        };
        let mut mb = |l: Label| -> Label {
            *bmap[l as usize].get_or_insert_with(|| {
                binary.push(self.binary[l as usize].clone());
                (binary.len() - 1) as Label
            })
        };
        let nodes: Vec<Op> = order
            .iter()
            .map(|&old| match self.nodes[old] {
                Op::Create(i) => Op::Create(mu(i)),
                Op::Union(l, r) => Op::Union(new_id[l], new_id[r]),
                Op::AddPair { child, i, j, k } => Op::AddPair { child: new_id[child], i: mu(i), j: mu(j), k: mb(k) },
                Op::Ccw { child, k, i } => Op::Ccw { child: new_id[child], k: mb(k), i: mu(i) },
                Op::Cw { child, k, i } => Op::Cw { child: new_id[child], k: mb(k), i: mu(i) },
                Op::Relabel { child, arity, from, to } => {
                    let (from, to) = match arity {
                        Arity::Unary => (mu(from), mu(to)),
                        Arity::Binary => (mb(from), mb(to)),
                    };
                    Op::Relabel { child: new_id[child], arity, from, to }
                }
            })
            .collect();
        CwExpression { unary, binary, nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_counts_all_labels() {
        let e = parse_expression("create(a)").unwrap();
        assert_eq!(e.width(), 1);
        let e = parse_expression("relab(addpair(union(create(a),create(b)); a,b->k); u b->c)").unwrap();
        assert_eq!(e.width(), 3 + 2);
    }

    #[test]
    fn builder_normalises_to_post_order() {
        let mut b = ExprBuilder::new();
        let right = b.create("y");
        let left = b.create("x");
        let u = b.union(left, right);
        let e = b.finish(u);
        assert_eq!(e.to_string(), "union(create(x),create(y))");
        assert_eq!(e.nodes()[0], Op::Create(0));
        assert_eq!(e.unary_labels(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn subtree_ranges_are_contiguous() {
        let e = parse_expression("union(union(create(a),create(b)),ccw(create(c); k,a))").unwrap();
        // post-order: a b U c ccw U
        assert_eq!(e.subtree_start(2), 0);
        assert_eq!(e.subtree_start(4), 3);
        assert_eq!(e.subtree_start(5), 0);
    }

    #[test]
    fn bijective_renaming_keeps_width() {
        let e = parse_expression("relab(addpair(union(create(a),create(b)); a,b->k); u b->a)").unwrap();
        let r = e.rename_labels(|s| format!("{s}{s}"), |s| format!("z{s}"));
        assert_eq!(r.width(), e.width());
        assert_eq!(parse_expression(&r.to_string()).unwrap(), r);
    }
}
