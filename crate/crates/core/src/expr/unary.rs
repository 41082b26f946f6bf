//! Unary clique-width expressions: only unary labels, and triples are created
//! directly from three label classes.

use std::fmt::{self, Write as _};

use rand::Rng;

use super::parse::{Cursor, Tok};
use super::{Label, NodeId};
use crate::error::ExprError;
use crate::geometry::TripleSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Create(Label),
    Union(NodeId, NodeId),
    /// Cyclic closure of every `(a, b, c)` of pairwise distinct points labelled `i, j, k`.
    AddTriple { child: NodeId, i: Label, j: Label, k: Label },
    Relabel { child: NodeId, from: Label, to: Label },
}

/// Post-order arena, root last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryCwExpression {
    labels: Vec<String>,
    nodes: Vec<UnaryOp>,
}

impl UnaryCwExpression {
    pub fn nodes(&self) -> &[UnaryOp] {
        &self.nodes
    }

    pub fn width(&self) -> usize {
        self.labels.len()
    }

    pub fn point_count(&self) -> usize {
        self.nodes.iter().filter(|op| matches!(op, UnaryOp::Create(_))).count()
    }

    fn write_node(&self, node: NodeId, out: &mut String) {
        let l = |x: Label| self.labels[x as usize].as_str();
        match self.nodes[node] {
            UnaryOp::Create(i) => {
                let _ = write!(out, "create({})", l(i));
            }
            UnaryOp::Union(a, b) => {
                out.push_str("union(");
                self.write_node(a, out);
                out.push(',');
                self.write_node(b, out);
                out.push(')');
            }
            UnaryOp::AddTriple { child, i, j, k } => {
                out.push_str("addtriple(");
                self.write_node(child, out);
                let _ = write!(out, "; {},{},{})", l(i), l(j), l(k));
            }
            UnaryOp::Relabel { child, from, to } => {
                out.push_str("relab(");
                self.write_node(child, out);
                let _ = write!(out, "; {}->{})", l(from), l(to));
            }
        }
    }
}

impl fmt::Display for UnaryCwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.nodes.is_empty() {
            self.write_node(self.nodes.len() - 1, &mut out);
        }
        f.write_str(&out)
    }
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    nodes: Vec<UnaryOp>,
}

impl Builder {
    fn label(&mut self, name: &str) -> Label {
        match self.labels.iter().position(|s| s == name) {
            Some(p) => p as Label,
            None => {
                self.labels.push(name.to_string());
                (self.labels.len() - 1) as Label
            }
        }
    }

    fn push(&mut self, op: UnaryOp) -> NodeId {
        self.nodes.push(op);
        self.nodes.len() - 1
    }
}

/// Grammar: `create(U) | union(e,e) | addtriple(e; U,U,U) | relab(e; U->U)`.
pub fn parse_unary(text: &str) -> Result<UnaryCwExpression, ExprError> {
    let mut cur = Cursor::new(text)?;
    let mut b = Builder::default();
    if !cur.at_end() {
        parse_node(&mut cur, &mut b)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input after expression"));
        }
    }
    Ok(UnaryCwExpression { labels: b.labels, nodes: b.nodes })
}

fn parse_node(cur: &mut Cursor, b: &mut Builder) -> Result<NodeId, ExprError> {
    let at = cur.position();
    let keyword = cur.ident()?;
    cur.expect(Tok::LParen, "`(`")?;
    let node = match keyword.as_str() {
        "create" => {
            let l = cur.ident()?;
            let l = b.label(&l);
            b.push(UnaryOp::Create(l))
        }
        "union" => {
            let left = parse_node(cur, b)?;
            cur.expect(Tok::Comma, "`,`")?;
            let right = parse_node(cur, b)?;
            b.push(UnaryOp::Union(left, right))
        }
        "addtriple" => {
            let child = parse_node(cur, b)?;
            cur.expect(Tok::Semi, "`;`")?;
            let i = cur.ident()?;
            cur.expect(Tok::Comma, "`,`")?;
            let j = cur.ident()?;
            cur.expect(Tok::Comma, "`,`")?;
            let k = cur.ident()?;
            let (i, j, k) = (b.label(&i), b.label(&j), b.label(&k));
            b.push(UnaryOp::AddTriple { child, i, j, k })
        }
        "relab" => {
            let child = parse_node(cur, b)?;
            cur.expect(Tok::Semi, "`;`")?;
            let from = cur.ident()?;
            cur.expect(Tok::Arrow, "`->`")?;
            let to = cur.ident()?;
            if from == to {
                return Err(ExprError::TrivialRelabel(from));
            }
            let (from, to) = (b.label(&from), b.label(&to));
            b.push(UnaryOp::Relabel { child, from, to })
        }
        other => return Err(cur.error_at(at, format!("unknown operation `{other}`"))),
    };
    cur.expect(Tok::RParen, "`)`")?;
    Ok(node)
}

/// Points (numbered in creation order) with final labels and the triple relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryValue {
    pub labels: Vec<Label>,
    pub triples: TripleSet,
}

pub fn evaluate_unary(expr: &UnaryCwExpression) -> UnaryValue {
    let n = expr.point_count();
    let mut labels = Vec::with_capacity(n);
    let mut triples = TripleSet::new(n);
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for op in &expr.nodes {
        match *op {
            UnaryOp::Create(i) => {
                labels.push(i);
                stack.push(vec![labels.len() - 1]);
            }
            UnaryOp::Union(..) => {
                let right = stack.pop().expect("post-order");
                stack.last_mut().expect("post-order").extend(right);
            }
            UnaryOp::AddTriple { i, j, k, .. } => {
                let pts = stack.last().expect("post-order");
                let class = |l: Label| pts.iter().copied().filter(|&p| labels[p] == l).collect::<Vec<_>>();
                let (ci, cj, ck) = (class(i), class(j), class(k));
                for &a in &ci {
                    for &b in &cj {
                        if a == b {
                            continue;
                        }
                        for &c in &ck {
                            if c != a && c != b {
                                triples.insert_cyclic(a, b, c);
                            }
                        }
                    }
                }
            }
            UnaryOp::Relabel { from, to, .. } => {
                for &p in stack.last().expect("post-order") {
                    if labels[p] == from {
                        labels[p] = to;
                    }
                }
            }
        }
    }
    UnaryValue { labels, triples }
}

/// A random unary expression over at most `max_labels` labels and `max_points` points.
///
/// Half of the generated trees grow one point at a time and immediately emit
/// triples between the newcomer and existing label classes, which is the only
/// shape that tends to produce complete (convex-looking) order types.
pub fn random_unary<R: Rng>(rng: &mut R, max_labels: usize, max_points: usize) -> UnaryCwExpression {
    assert!(max_labels >= 1 && max_points >= 1);
    let labels = rng.gen_range(1..=max_labels);
    let points = rng.gen_range(1..=max_points);
    let mut b = Builder::default();
    let names: Vec<Label> = (0..labels).map(|i| b.label(&format!("l{i}"))).collect();
    let pick = |rng: &mut R| names[rng.gen_range(0..names.len())];
    let sprinkle = |b: &mut Builder, rng: &mut R, mut node: NodeId, ops: usize| {
        for _ in 0..ops {
            node = if labels >= 2 && rng.gen_bool(0.25) {
                let (from, to) = (pick(rng), pick(rng));
                if from == to {
                    node
                } else {
                    b.push(UnaryOp::Relabel { child: node, from, to })
                }
            } else {
                let (i, j, k) = (pick(rng), pick(rng), pick(rng));
                b.push(UnaryOp::AddTriple { child: node, i, j, k })
            };
        }
        node
    };
    if rng.gen_bool(0.5) {
        let l = pick(rng);
        let mut root = b.push(UnaryOp::Create(l));
        for _ in 1..points {
            let l = pick(rng);
            let leaf = b.push(UnaryOp::Create(l));
            root = if rng.gen_bool(0.5) { b.push(UnaryOp::Union(root, leaf)) } else { b.push(UnaryOp::Union(leaf, root)) };
            let ops = rng.gen_range(0..=3);
            root = sprinkle(&mut b, rng, root, ops);
        }
        renumber(b, root)
    } else {
        let mut forest: Vec<NodeId> = Vec::new();
        for _ in 0..points {
            let l = pick(rng);
            forest.push(b.push(UnaryOp::Create(l)));
        }
        while forest.len() > 1 {
            let x = forest.swap_remove(rng.gen_range(0..forest.len()));
            let y = forest.swap_remove(rng.gen_range(0..forest.len()));
            let u = b.push(UnaryOp::Union(x, y));
            let ops = rng.gen_range(0..=2);
            let t = sprinkle(&mut b, rng, u, ops);
            forest.push(t);
        }
        let ops = rng.gen_range(0..=2);
        let root = sprinkle(&mut b, rng, forest[0], ops);
        renumber(b, root)
    }
}

/// Re-linearises a builder's arena into post-order from `root`, keeping used labels only.
fn renumber(b: Builder, root: NodeId) -> UnaryCwExpression {
    let mut order = Vec::new();
    let mut stack = vec![(root, false)];
    while let Some((t, done)) = stack.pop() {
        if done {
            order.push(t);
            continue;
        }
        stack.push((t, true));
        match b.nodes[t] {
            UnaryOp::Create(_) => {}
            UnaryOp::Union(l, r) => {
                stack.push((r, false));
                stack.push((l, false));
            }
            UnaryOp::AddTriple { child, .. } | UnaryOp::Relabel { child, .. } => stack.push((child, false)),
        }
    }
    let mut id = vec![usize::MAX; b.nodes.len()];
    for (pos, &old) in order.iter().enumerate() {
        id[old] = pos;
    }
    let mut remap: Vec<Option<Label>> = vec![None; b.labels.len()];
    let mut labels = Vec::new();
    let mut m = |l: Label| -> Label {
        *remap[l as usize].get_or_insert_with(|| {
            labels.push(b.labels[l as usize].clone());
            (labels.len() - 1) as Label
        })
    };
    let nodes = order
        .iter()
        .map(|&old| match b.nodes[old] {
            UnaryOp::Create(i) => UnaryOp::Create(m(i)),
            UnaryOp::Union(l, r) => UnaryOp::Union(id[l], id[r]),
            UnaryOp::AddTriple { child, i, j, k } => UnaryOp::AddTriple { child: id[child], i: m(i), j: m(j), k: m(k) },
            UnaryOp::Relabel { child, from, to } => UnaryOp::Relabel { child: id[child], from: m(from), to: m(to) },
        })
        .collect();
    UnaryCwExpression { labels, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_triple() {
        let e = parse_unary("addtriple(union(union(create(1),create(2)),create(3)); 1,2,3)").unwrap();
        assert_eq!(e.width(), 3);
        let v = evaluate_unary(&e);
        let t: Vec<_> = v.triples.iter().collect();
        assert_eq!(t, vec![(0, 1, 2), (1, 2, 0), (2, 0, 1)]);
    }

    #[test]
    fn shared_label_fires_both_orders() {
        let e = parse_unary("addtriple(union(union(create(1),create(1)),create(2)); 1,1,2)").unwrap();
        let v = evaluate_unary(&e);
        assert!(v.triples.contains(0, 1, 2));
        assert!(v.triples.contains(1, 0, 2));
    }

    #[test]
    fn round_trip_and_relabel() {
        let text = "addtriple(relab(union(create(a),create(b)); a->b),b,b,b)";
        assert!(parse_unary(text).is_err());
        let text = "addtriple(relab(union(union(create(a),create(b)),create(c)); a->b); b,b,c)";
        let e = parse_unary(text).unwrap();
        assert_eq!(parse_unary(&e.to_string()).unwrap(), e);
        assert_eq!(e.to_string(), text);
        let v = evaluate_unary(&e);
        assert_eq!(v.labels, vec![1, 1, 2]);
        assert_eq!(v.triples.len(), 6);
    }

    #[test]
    fn random_expressions_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let e = random_unary(&mut rng, 4, 9);
            assert!(e.width() <= 4);
            assert!(e.point_count() <= 9);
            assert_eq!(parse_unary(&e.to_string()).unwrap(), e);
        }
    }
}
