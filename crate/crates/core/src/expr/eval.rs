use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::{Arity, CwExpression, Label, NodeId, Op};
use crate::geometry::{order_type, PointSet, TripleSet};

/// The value of an expression: points with their current labels plus the
/// accumulated triple relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledStructure {
    pub n: usize,
    pub unary_label: Vec<Label>,
    /// Nonempty binary label sets of ordered pairs, each sorted.
    pub pair_labels: BTreeMap<(usize, usize), Vec<Label>>,
    pub triples: TripleSet,
}

impl LabelledStructure {
    pub fn pairs_with(&self, k: Label) -> Vec<(usize, usize)> {
        self.pair_labels.iter().filter(|(_, ls)| ls.contains(&k)).map(|(&p, _)| p).collect()
    }
}

#[derive(Default)]
struct Frame {
    points: Vec<usize>,
    pairs: FxHashMap<(usize, usize), Vec<Label>>,
}

fn insert_label(set: &mut Vec<Label>, k: Label) {
    if let Err(pos) = set.binary_search(&k) {
        set.insert(pos, k);
    }
}

pub fn evaluate(expr: &CwExpression) -> LabelledStructure {
    match expr.root() {
        Some(root) => evaluate_node(expr, root),
        None => LabelledStructure {
            n: 0,
            unary_label: Vec::new(),
            pair_labels: BTreeMap::new(),
            triples: TripleSet::new(0),
        },
    }
}

/// Value of the subexpression rooted at `node`, with its points numbered from 0.
pub fn evaluate_node(expr: &CwExpression, node: NodeId) -> LabelledStructure {
    let start = expr.subtree_start(node);
    let ops = &expr.nodes()[start..=node];
    let n = ops.iter().filter(|op| matches!(op, Op::Create(_))).count();
    let mut label: Vec<Label> = Vec::with_capacity(n);
    let mut triples = TripleSet::new(n);
    let mut stack: Vec<Frame> = Vec::new();
    for op in ops {
        match *op {
            Op::Create(i) => {
                label.push(i);
                stack.push(Frame { points: vec![label.len() - 1], pairs: FxHashMap::default() });
            }
            Op::Union(..) => {
                let right = stack.pop().expect("post-order");
                let left = stack.last_mut().expect("post-order");
                left.points.extend(right.points);
                left.pairs.extend(right.pairs);
            }
            Op::AddPair { i, j, k, .. } => {
                let f = stack.last_mut().expect("post-order");
                let left: Vec<usize> = f.points.iter().copied().filter(|&p| label[p] == i).collect();
                let right: Vec<usize> = f.points.iter().copied().filter(|&p| label[p] == j).collect();
                for &a in &left {
                    for &b in &right {
                        insert_label(f.pairs.entry((a, b)).or_default(), k);
                    }
                }
            }
            Op::Ccw { k, i, .. } | Op::Cw { k, i, .. } => {
                let ccw = matches!(op, Op::Ccw { .. });
                let f = stack.last().expect("post-order");
                let apexes: Vec<usize> = f.points.iter().copied().filter(|&p| label[p] == i).collect();
                for (&(a, b), ls) in &f.pairs {
                    if ls.binary_search(&k).is_err() {
                        continue;
                    }
                    for &c in &apexes {
                        if c != a && c != b {
                            if ccw {
                                triples.insert_cyclic(a, b, c);
                            } else {
                                triples.insert_cyclic(b, a, c);
                            }
                        }
                    }
                }
            }
            Op::Relabel { arity: Arity::Unary, from, to, .. } => {
                let f = stack.last().expect("post-order");
                for &p in &f.points {
                    if label[p] == from {
                        label[p] = to;
                    }
                }
            }
            Op::Relabel { arity: Arity::Binary, from, to, .. } => {
                let f = stack.last_mut().expect("post-order");
                for ls in f.pairs.values_mut() {
                    if let Ok(pos) = ls.binary_search(&from) {
                        ls.remove(pos);
                        insert_label(ls, to);
                    }
                }
            }
        }
    }
    let frame = stack.pop().unwrap_or_default();
    debug_assert!(stack.is_empty());
    LabelledStructure {
        n,
        unary_label: label,
        pair_labels: frame.pairs.into_iter().filter(|(_, ls)| !ls.is_empty()).collect(),
        triples,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Mismatch {
    #[error("expression creates {got} points but the point set has {expected}")]
    CountMismatch { expected: usize, got: usize },
    #[error("triple ({}, {}, {}): order type has it {}, expression {}", .triple.0, .triple.1, .triple.2,
            presence(*.expected), presence(*.got))]
    Triple { triple: (usize, usize, usize), expected: bool, got: bool },
}

fn presence(b: bool) -> &'static str {
    if b {
        "present"
    } else {
        "absent"
    }
}

/// An expression whose value was checked to equal the order type of a point set.
#[derive(Clone, Debug)]
pub struct ValidatedExpr {
    expr: CwExpression,
}

impl ValidatedExpr {
    pub fn expr(&self) -> &CwExpression {
        &self.expr
    }

    pub fn into_inner(self) -> CwExpression {
        self.expr
    }
}

pub fn validate(expr: &CwExpression, points: &PointSet) -> Result<ValidatedExpr, Mismatch> {
    let got = expr.point_count();
    if got != points.len() {
        return Err(Mismatch::CountMismatch { expected: points.len(), got });
    }
    let value = evaluate(expr);
    let expected = order_type(points);
    if let Some(triple) = expected.triples().first_difference(&value.triples) {
        let (a, b, c) = triple;
        return Err(Mismatch::Triple { triple, expected: expected.contains(a, b, c), got: value.triples.contains(a, b, c) });
    }
    Ok(ValidatedExpr { expr: expr.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    #[test]
    fn apex_must_differ_from_pair_endpoints() {
        let e = parse_expression("ccw(addpair(union(create(a),create(b)); a,b->k); k,a)").unwrap();
        let v = evaluate(&e);
        assert_eq!(v.n, 2);
        assert!(v.triples.is_empty());
        assert_eq!(v.pairs_with(0), vec![(0, 1)]);
    }

    #[test]
    fn single_triangle() {
        let e = parse_expression("ccw(addpair(union(union(create(a),create(b)),create(c)); a,b->k); k,c)").unwrap();
        let v = evaluate(&e);
        let t: Vec<_> = v.triples.iter().collect();
        assert_eq!(t, vec![(0, 1, 2), (1, 2, 0), (2, 0, 1)]);
        let e = parse_expression("cw(addpair(union(union(create(a),create(b)),create(c)); a,b->k); k,c)").unwrap();
        let t: Vec<_> = evaluate(&e).triples.iter().collect();
        assert_eq!(t, vec![(0, 2, 1), (1, 0, 2), (2, 1, 0)]);
    }

    #[test]
    fn no_orientation_ops_means_no_triples() {
        let e = parse_expression("relab(addpair(union(create(a),union(create(b),create(c))); a,b->k); b k->j)").unwrap();
        let v = evaluate(&e);
        assert!(v.triples.is_empty());
        assert_eq!(v.pair_labels.len(), 1);
        assert_eq!(v.pair_labels[&(0, 1)], vec![1]);
    }

    #[test]
    fn pair_labels_are_sets() {
        let e = parse_expression("addpair(addpair(union(create(a),create(b)); a,b->k); a,b->k)").unwrap();
        assert_eq!(evaluate(&e).pair_labels[&(0, 1)], vec![0]);
    }

    #[test]
    fn relabel_acts_on_subtree_only() {
        let e = parse_expression("union(relab(create(a); u a->b),create(a))").unwrap();
        let v = evaluate(&e);
        assert_eq!(v.unary_label, vec![1, 0]);
    }

    #[test]
    fn empty_expression_validates_against_no_points() {
        let pts = PointSet::new(Vec::new()).unwrap();
        assert!(validate(&CwExpression::empty(), &pts).is_ok());
    }

    #[test]
    fn count_mismatch_is_distinct() {
        let pts = PointSet::from_ints(&[(0, 0), (1, 0)]).unwrap();
        let e = parse_expression("create(a)").unwrap();
        assert_eq!(validate(&e, &pts).unwrap_err(), Mismatch::CountMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn triple_mismatch_reports_witness() {
        let pts = PointSet::from_ints(&[(0, 0), (2, 0), (1, 2)]).unwrap();
        let e = parse_expression("cw(addpair(union(union(create(a),create(b)),create(c)); a,b->k); k,c)").unwrap();
        let err = validate(&e, &pts).unwrap_err();
        assert_eq!(err, Mismatch::Triple { triple: (0, 1, 2), expected: true, got: false });
    }
}
