//! Maximum general-position subset by dynamic programming over a validated
//! clique-width expression.
//!
//! Soundness. Operations act uniformly on label classes, so a point's future
//! labels depend only on its current label, and a pair's future binary labels
//! only on its current set and the labels of its endpoints. Whether a triple
//! ever receives an orientation is therefore a function of its signature at the
//! union node where its three points first meet: two points from one side with
//! their pair sets, one apex from the other side, and four empty cross pairs.
//! A state records, for the selected points of a subtree, the per-label counts
//! capped at 2 and which pair classes occur. A union rejects a combination as
//! soon as one newly met triple would never be oriented. Validated expressions
//! never create both `(a,b,c)` and `(b,a,c)`, so a never-oriented triple is
//! exactly a collinear one.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::error::DpError;
use crate::expr::{Arity, CwExpression, Label, NodeId, Op, ValidatedExpr};

/// Labels of an ordered pair of points and the binary label sets of the pair
/// in both directions (bit `k` for binary label `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairClass {
    pub first: Label,
    pub second: Label,
    pub forward: u64,
    pub backward: u64,
}

impl PairClass {
    fn reversed(self) -> PairClass {
        PairClass { first: self.second, second: self.first, forward: self.backward, backward: self.forward }
    }
}

/// Ordered pairs of a triple's positions `0, 1, 2`, with the remaining position.
const ROUTES: [(usize, usize, usize); 6] = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct TripleState {
    labels: [Label; 3],
    /// Binary label sets indexed like `ROUTES`.
    pairs: [u64; 6],
}

impl TripleState {
    fn fires(&self, k: Label, i: Label) -> bool {
        ROUTES.iter().enumerate().any(|(r, &(_, _, apex))| self.pairs[r] >> k & 1 == 1 && self.labels[apex] == i)
    }

    fn apply(&mut self, op: &Op) {
        match *op {
            Op::AddPair { i, j, k, .. } => {
                for (r, &(p, q, _)) in ROUTES.iter().enumerate() {
                    if self.labels[p] == i && self.labels[q] == j {
                        self.pairs[r] |= 1 << k;
                    }
                }
            }
            Op::Relabel { arity: Arity::Unary, from, to, .. } => {
                for l in &mut self.labels {
                    if *l == from {
                        *l = to;
                    }
                }
            }
            Op::Relabel { arity: Arity::Binary, from, to, .. } => {
                for s in &mut self.pairs {
                    if *s >> from & 1 == 1 {
                        *s = (*s & !(1 << from)) | 1 << to;
                    }
                }
            }
            Op::Create(_) | Op::Union(..) | Op::Ccw { .. } | Op::Cw { .. } => {}
        }
    }
}

/// Answers whether a triple meeting at a node is oriented by some operation
/// above it. Filled lazily by forward simulation along the root path.
pub struct OrientsTable<'a> {
    expr: &'a CwExpression,
    parent: Vec<Option<NodeId>>,
    memo: FxHashMap<(NodeId, TripleState), bool>,
}

pub fn precompute_orients(expr: &CwExpression) -> OrientsTable<'_> {
    let mut parent = vec![None; expr.node_count()];
    for (t, op) in expr.nodes().iter().enumerate() {
        for c in op.children() {
            parent[c] = Some(t);
        }
    }
    OrientsTable { expr, parent, memo: FxHashMap::default() }
}

impl OrientsTable<'_> {
    /// Whether a triple whose pair `(a, b)` has class `pair`, whose apex has
    /// label `apex`, and whose four pairs with the apex are unlabelled at
    /// `node`, gets oriented by an operation strictly above `node`.
    pub fn will_orient(&mut self, node: NodeId, pair: PairClass, apex: Label) -> bool {
        let start = TripleState { labels: [pair.first, pair.second, apex], pairs: [pair.forward, pair.backward, 0, 0, 0, 0] };
        self.simulate(node, start)
    }

    fn simulate(&mut self, node: NodeId, start: TripleState) -> bool {
        let mut path = Vec::new();
        let (mut cur, mut st) = (node, start);
        let result = loop {
            if let Some(&r) = self.memo.get(&(cur, st)) {
                break r;
            }
            path.push((cur, st));
            let Some(p) = self.parent[cur] else { break false };
            let op = &self.expr.nodes()[p];
            if let Op::Ccw { k, i, .. } | Op::Cw { k, i, .. } = *op {
                if st.fires(k, i) {
                    break true;
                }
            }
            st.apply(op);
            cur = p;
        };
        for key in path {
            self.memo.insert(key, result);
        }
        result
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct DpState {
    counts: Vec<u8>,
    classes: Vec<PairClass>,
}

type StateMap = BTreeMap<DpState, usize>;

/// Outcome of [`gps_dp`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub feasible: bool,
    pub objective: usize,
    /// Largest number of states kept at any node.
    pub max_states: usize,
}

/// Base-2 logarithm of the state bound `3^u * 2^(u^2 * 4^b)`.
fn log2_state_bound(u: usize, b: usize) -> f64 {
    u as f64 * 3f64.log2() + (u * u) as f64 * 4f64.powi(b as i32)
}

/// Size of a maximum subset of the validated expression's points with no
/// three collinear; feasible when it is at least `k`.
pub fn gps_dp(validated: &ValidatedExpr, k: usize) -> Result<DpOutcome, DpError> {
    let expr = validated.expr();
    let u = expr.unary_labels().len();
    let b = expr.binary_labels().len();
    if b > 64 {
        return Err(DpError::StateBound { node: 0, states: 0, bound: format!("{b} binary labels exceed 64") });
    }
    let Some(_) = expr.root() else {
        return Ok(DpOutcome { feasible: k == 0, objective: 0, max_states: 1 });
    };
    let mut table = precompute_orients(expr);
    let log_bound = log2_state_bound(u, b);
    let mut stack: Vec<StateMap> = Vec::new();
    let mut max_states = 0;
    for (t, op) in expr.nodes().iter().enumerate() {
        let states = match *op {
            Op::Create(l) => {
                let mut m = StateMap::new();
                let mut counts = vec![0u8; u];
                m.insert(DpState { counts: counts.clone(), classes: Vec::new() }, 0);
                counts[l as usize] = 1;
                m.insert(DpState { counts, classes: Vec::new() }, 1);
                m
            }
            Op::Union(..) => {
                let right = stack.pop().expect("post-order");
                let left = stack.pop().expect("post-order");
                union(&mut table, t, &left, &right)
            }
            Op::AddPair { i, j, k, .. } => remap(stack.pop().expect("post-order"), |s| {
                for c in &mut s.classes {
                    if c.first == i && c.second == j {
                        c.forward |= 1 << k;
                    }
                    if c.second == i && c.first == j {
                        c.backward |= 1 << k;
                    }
                }
            }),
            Op::Ccw { .. } | Op::Cw { .. } => stack.pop().expect("post-order"),
            Op::Relabel { arity: Arity::Unary, from, to, .. } => remap(stack.pop().expect("post-order"), |s| {
                let moved = s.counts[from as usize];
                s.counts[from as usize] = 0;
                s.counts[to as usize] = (s.counts[to as usize] + moved).min(2);
                for c in &mut s.classes {
                    if c.first == from {
                        c.first = to;
                    }
                    if c.second == from {
                        c.second = to;
                    }
                }
            }),
            Op::Relabel { arity: Arity::Binary, from, to, .. } => remap(stack.pop().expect("post-order"), |s| {
                let swap = |x: &mut u64| {
                    if *x >> from & 1 == 1 {
                        *x = (*x & !(1 << from)) | 1 << to;
                    }
                };
                for c in &mut s.classes {
                    swap(&mut c.forward);
                    swap(&mut c.backward);
                }
            }),
        };
        if (states.len() as f64).log2() > log_bound {
            return Err(DpError::StateBound {
                node: t,
                states: states.len(),
                bound: format!("3^{u} * 2^({u}^2 * 4^{b})"),
            });
        }
        max_states = max_states.max(states.len());
        stack.push(states);
    }
    let root = stack.pop().expect("one value at the root");
    let objective = root.values().copied().max().unwrap_or(0);
    Ok(DpOutcome { feasible: objective >= k, objective, max_states })
}

fn insert_best(m: &mut StateMap, s: DpState, obj: usize) {
    let e = m.entry(s).or_insert(obj);
    *e = (*e).max(obj);
}

fn remap(states: StateMap, f: impl Fn(&mut DpState)) -> StateMap {
    let mut out = StateMap::new();
    for (mut s, obj) in states {
        f(&mut s);
        s.classes.sort_unstable();
        s.classes.dedup();
        insert_best(&mut out, s, obj);
    }
    out
}

/// Apex labels that would close a never-oriented triple with some pair of `s`.
fn forbidden_apexes(table: &mut OrientsTable, node: NodeId, s: &DpState, u: usize) -> Vec<bool> {
    let mut bad = vec![false; u];
    for &c in &s.classes {
        for (l, flag) in bad.iter_mut().enumerate() {
            if !*flag && !table.will_orient(node, c, l as Label) {
                *flag = true;
            }
        }
    }
    bad
}

fn union(table: &mut OrientsTable, node: NodeId, left: &StateMap, right: &StateMap) -> StateMap {
    let u = left.keys().next().map_or(0, |s| s.counts.len());
    let lbad: Vec<Vec<bool>> = left.keys().map(|s| forbidden_apexes(table, node, s, u)).collect();
    let rbad: Vec<Vec<bool>> = right.keys().map(|s| forbidden_apexes(table, node, s, u)).collect();
    let mut out = StateMap::new();
    for ((ls, &lobj), lb) in left.iter().zip(&lbad) {
        for ((rs, &robj), rb) in right.iter().zip(&rbad) {
            let clash = (0..u).any(|l| (rs.counts[l] > 0 && lb[l]) || (ls.counts[l] > 0 && rb[l]));
            if clash {
                continue;
            }
            let counts: Vec<u8> = ls.counts.iter().zip(&rs.counts).map(|(a, b)| (a + b).min(2)).collect();
            let mut classes: Vec<PairClass> = ls.classes.iter().chain(&rs.classes).copied().collect();
            for la in (0..u).filter(|&l| ls.counts[l] > 0) {
                for lc in (0..u).filter(|&l| rs.counts[l] > 0) {
                    let c = PairClass { first: la as Label, second: lc as Label, forward: 0, backward: 0 };
                    classes.push(c);
                    classes.push(c.reversed());
                }
            }
            classes.sort_unstable();
            classes.dedup();
            insert_best(&mut out, DpState { counts, classes }, lobj + robj);
        }
    }
    out
}
