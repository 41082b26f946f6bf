//! Automatic construction of bounded-width expressions for three families of
//! point sets, and the coordinates of the grid gadget.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::ConstructError;
use crate::expr::{validate, CwExpression, ExprBuilder};
use crate::geometry::{convex_hull, orient, Orientation, Point, PointSet};

/// A constructed expression. The `k`-th point created by the expression is
/// input point `point_order[k]`.
#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub expression: CwExpression,
    pub claimed_width: usize,
    pub point_order: Vec<usize>,
}

impl ConstructionReport {
    /// The input points permuted into creation order.
    pub fn ordered_points(&self, points: &PointSet) -> PointSet {
        points.select(&self.point_order)
    }

    /// Checks the width claim and that the expression reproduces the order type.
    pub fn verify(&self, points: &PointSet) -> Result<(), ConstructError> {
        if self.expression.width() != self.claimed_width {
            return Err(ConstructError::Validation(format!(
                "width {} differs from the claimed {}",
                self.expression.width(),
                self.claimed_width
            )));
        }
        validate(&self.expression, &self.ordered_points(points))
            .map(|_| ())
            .map_err(|m| ConstructError::Validation(m.to_string()))
    }
}

/// Width-4 expression for points in strictly convex position.
///
/// Points are added counter-clockwise from the lexicographically least one.
/// Each new point gets label 2, every earlier point (label 1) is paired with
/// it under binary label 3, every earlier 3-pair is oriented towards it, and
/// it is then renamed to 1.
pub fn convex_expression(points: &PointSet) -> Result<ConstructionReport, ConstructError> {
    let n = points.len();
    if n < 3 {
        return Err(ConstructError::TooFew { needed: 3, got: n });
    }
    let hull = convex_hull(points);
    if hull.len() != n {
        let offender = (0..n).find(|i| !hull.contains(i)).expect("some point is not a hull vertex");
        return Err(ConstructError::NotConvex(offender));
    }
    let mut b = ExprBuilder::new();
    let mut e = b.create("1");
    for _ in 1..n {
        let c = b.create("2");
        e = b.union(e, c);
        e = b.add_pair(e, "1", "2", "3");
        e = b.ccw(e, "3", "2");
        e = b.relabel_unary(e, "2", "1");
    }
    Ok(ConstructionReport { expression: b.finish(e), claimed_width: 4, point_order: hull })
}

/// Width-`(d + 8)` expression for a collinear set `line` plus `d` other points.
///
/// Outliers get unique labels and are created first, with their mutual
/// triples. Line points follow in increasing `(x, y)` order with labels
/// 2 (newest) and 1 (older); each newcomer receives the triples it forms with
/// outlier pairs through the scratch label `k1`, which is retired into `k2`
/// after every use. Binary label 3 collects the ordered line pairs, which are
/// finally oriented towards each outlier according to its side of the line.
pub fn collinear_plus_d_expression(points: &PointSet, line: &[usize]) -> Result<ConstructionReport, ConstructError> {
    let n = points.len();
    if line.len() < 2 {
        return Err(ConstructError::TooFew { needed: 2, got: line.len() });
    }
    let mut on_line = vec![false; n];
    for &i in line {
        if i >= n || on_line[i] {
            return Err(ConstructError::BadIndex(i));
        }
        on_line[i] = true;
    }
    let mut sorted: Vec<usize> = line.to_vec();
    sorted.sort_by(|&a, &b| points.point(a).cmp(points.point(b)));
    let (first, last) = (sorted[0], sorted[sorted.len() - 1]);
    for &i in &sorted[1..sorted.len() - 1] {
        if points.orient(first, last, i) != Orientation::Collinear {
            return Err(ConstructError::NotCollinear([first, last, i]));
        }
    }
    let outliers: Vec<usize> = (0..n).filter(|&i| !on_line[i]).collect();
    for &q in &outliers {
        if points.orient(first, last, q) == Orientation::Collinear {
            return Err(ConstructError::OutlierOnLine(q));
        }
    }
    let name = |a: usize| format!("q{a}");
    let d = outliers.len();

    let mut b = ExprBuilder::new();
    let mut e: Option<usize> = None;
    for (a, _) in outliers.iter().enumerate() {
        let c = b.create(&name(a));
        e = Some(match e {
            None => c,
            Some(prev) => b.union(prev, c),
        });
    }
    if let Some(mut t) = e {
        for a in 0..d {
            for bb in a + 1..d {
                let apexes: Vec<(usize, Orientation)> = (bb + 1..d)
                    .map(|c| (c, points.orient(outliers[a], outliers[bb], outliers[c])))
                    .filter(|(_, o)| *o != Orientation::Collinear)
                    .collect();
                if apexes.is_empty() {
                    continue;
                }
                t = b.add_pair(t, &name(a), &name(bb), "k1");
                for (c, o) in apexes {
                    t = if o == Orientation::Ccw { b.ccw(t, "k1", &name(c)) } else { b.cw(t, "k1", &name(c)) };
                }
                t = b.relabel_binary(t, "k1", "k2");
            }
        }
        e = Some(t);
    }
    let mut retired_scratch = false;
    for &p in &sorted {
        let c = b.create("2");
        let mut t = match e {
            None => c,
            Some(prev) => b.union(prev, c),
        };
        for wanted in [Orientation::Ccw, Orientation::Cw] {
            let mut group = Vec::new();
            for a in 0..d {
                for bb in a + 1..d {
                    if points.orient(outliers[a], outliers[bb], p) == wanted {
                        group.push((a, bb));
                    }
                }
            }
            if group.is_empty() {
                continue;
            }
            for (a, bb) in group {
                t = b.add_pair(t, &name(a), &name(bb), "k1");
            }
            t = if wanted == Orientation::Ccw { b.ccw(t, "k1", "2") } else { b.cw(t, "k1", "2") };
            t = b.relabel_binary(t, "k1", "k2");
            retired_scratch = true;
        }
        t = b.add_pair(t, "1", "2", "3");
        t = b.relabel_unary(t, "2", "1");
        e = Some(t);
    }
    let mut t = e.expect("at least two line points");
    if !retired_scratch {
        // Keeps the label budget uniform when no outlier pair ever needs the scratch label.
        t = b.relabel_binary(t, "k1", "k2");
    }
    for (a, &q) in outliers.iter().enumerate() {
        t = if points.orient(first, last, q) == Orientation::Ccw { b.ccw(t, "3", &name(a)) } else { b.cw(t, "3", &name(a)) };
    }
    let mut point_order = outliers.clone();
    point_order.extend(&sorted);
    Ok(ConstructionReport { expression: b.finish(t), claimed_width: d + 8, point_order })
}

/// Width-8 expression for a strictly convex set plus one interior point `m`.
///
/// Around `m`, the line through the lexicographically least hull point `p1`
/// splits the hull into a clockwise chain starting at `p1` and the opposite
/// chain. A half-turn sweep about `m` adds points of both chains in order of
/// their direction modulo a half-turn (opposite-chain points measured through
/// their reflection in `m`). Binary label `S` joins an older and a newer point
/// of the same chain, `X` joins a clockwise-chain point or `m` to an
/// opposite-chain point or `m`. Every triple is oriented when its last point
/// arrives: same-chain pairs by `cw(S, N)`, mixed pairs by `ccw(X, N)` or
/// `cw(X, N)` depending on the chain of the newcomer.
pub fn convex_plus_one_expression(points: &PointSet, m: usize) -> Result<ConstructionReport, ConstructError> {
    let n = points.len();
    if m >= n {
        return Err(ConstructError::BadIndex(m));
    }
    if n < 4 {
        return Err(ConstructError::TooFew { needed: 4, got: n });
    }
    let rest: Vec<usize> = (0..n).filter(|&i| i != m).collect();
    let ring = crate::geometry::convex_hull_of(points, &rest);
    if ring.len() != rest.len() {
        let offender = rest.iter().copied().find(|i| !ring.contains(i)).expect("a non-vertex exists");
        return Err(ConstructError::NotConvex(offender));
    }
    let h = ring.len();
    for i in 0..h {
        if points.orient(ring[i], ring[(i + 1) % h], m) != Orientation::Ccw {
            return Err(ConstructError::NotInterior(m));
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            if points.orient(ring[i], ring[j], m) == Orientation::Collinear {
                return Err(ConstructError::CollinearWithCenter(ring[i], ring[j]));
            }
        }
    }
    let p1 = ring[0];
    let center = points.point(m);
    // Direction used by the sweep, folded into the clockwise side of m -> p1.
    let folded = |x: usize| -> (Point, bool) {
        let px = points.point(x);
        let on_first_chain = x == p1 || points.orient(m, p1, x) == Orientation::Cw;
        let d = if on_first_chain {
            Point::new(&px.x - &center.x, &px.y - &center.y)
        } else {
            Point::new(&center.x - &px.x, &center.y - &px.y)
        };
        (d, on_first_chain)
    };
    let mut order: Vec<(usize, Point, bool)> = ring
        .iter()
        .map(|&x| {
            let (d, first_chain) = folded(x);
            (x, d, first_chain)
        })
        .collect();
    let origin = Point::new(BigRational::zero(), BigRational::zero());
    order.sort_by(|a, b| match orient(&origin, &a.1, &b.1) {
        Orientation::Cw => Ordering::Less,
        Orientation::Ccw => Ordering::Greater,
        Orientation::Collinear => Ordering::Equal,
    });
    debug_assert_eq!(order[0].0, p1);

    let mut b = ExprBuilder::new();
    let mut e = b.create("M");
    for (_, _, first_chain) in &order {
        let c = b.create("N");
        let mut t = b.union(e, c);
        t = b.cw(t, "S", "N");
        if *first_chain {
            t = b.ccw(t, "X", "N");
            t = b.add_pair(t, "P", "N", "S");
            t = b.add_pair(t, "N", "Q", "X");
            t = b.add_pair(t, "N", "M", "X");
            t = b.relabel_unary(t, "N", "P");
        } else {
            t = b.cw(t, "X", "N");
            t = b.add_pair(t, "Q", "N", "S");
            t = b.add_pair(t, "P", "N", "X");
            t = b.add_pair(t, "M", "N", "X");
            t = b.relabel_unary(t, "N", "Q");
        }
        e = t;
    }
    let mut point_order = vec![m];
    point_order.extend(order.iter().map(|(x, _, _)| *x));
    Ok(ConstructionReport { expression: b.finish(e), claimed_width: 8, point_order })
}

/// Coordinates of the grid gadget and the roles of its points.
#[derive(Clone, Debug, Serialize)]
pub struct GridGadget {
    pub k: usize,
    #[serde(skip)]
    pub points: PointSet,
    pub m: usize,
    pub n: usize,
    /// `p[i]` for `i < k^2 + k`.
    pub p: Vec<usize>,
    /// `q[i]` for `i < k^2`.
    pub q: Vec<usize>,
}

impl GridGadget {
    /// Indices of the grid vertices `p_0 .. p_{k^2 - 1}`.
    pub fn grid(&self) -> Vec<usize> {
        self.p[..self.k * self.k].to_vec()
    }

    /// Indices of the last vertex of every grid row.
    pub fn row_ends(&self) -> Vec<usize> {
        (0..self.k * self.k).filter(|i| i % self.k == self.k - 1).map(|i| self.p[i]).collect()
    }

    /// The prescribed collinear triples `(p_i, m, q_i)` and `(p_{i+k}, n, q_i)`.
    pub fn designed_triples(&self) -> Vec<[usize; 3]> {
        let kk = self.k * self.k;
        let mut out = Vec::with_capacity(2 * kk);
        for i in 0..kk {
            out.push([self.p[i], self.m, self.q[i]]);
            out.push([self.p[i + self.k], self.n, self.q[i]]);
        }
        out
    }

    /// Edges of the `k x k` grid graph on point indices (rook adjacency of p-indices).
    pub fn expected_edges(&self) -> Vec<(usize, usize)> {
        let k = self.k;
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let i = r * k + c;
                if c + 1 < k {
                    edges.push(ordered(self.p[i], self.p[i + 1]));
                }
                if r + 1 < k {
                    edges.push(ordered(self.p[i], self.p[i + k]));
                }
            }
        }
        edges.sort();
        edges
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Second intersection of the line through `x` (on the unit circle) and `c` with the circle.
fn reflect_through(x: &Point, c: &Point) -> Point {
    let dx = &c.x - &x.x;
    let dy = &c.y - &x.y;
    let two = BigRational::from_integer(2.into());
    let t = -(two * (&x.x * &dx + &x.y * &dy)) / (&dx * &dx + &dy * &dy);
    Point::new(&x.x + &t * &dx, &x.y + &t * &dy)
}

/// Circle parameter of a point on the unit circle other than `(-1, 0)`.
fn circle_parameter(p: &Point) -> BigRational {
    &p.y / (BigRational::one() + &p.x)
}

/// All unordered collinear triples, by exhaustive scan.
pub fn collinear_triples(points: &PointSet) -> Vec<[usize; 3]> {
    let n = points.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if points.orient(a, b, c) == Orientation::Collinear {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Builds the grid gadget for `k >= 2`.
///
/// All `p` and `q` points lie on the unit circle, `m` and `n` on the x-axis
/// inside it. With `s_c` the involution of the circle through `c`, the map
/// `T = s_m s_n` fixes only `(1, 0)` and `(-1, 0)`, so iterating it from
/// points of the upper half circle never leaves it and never repeats. We put
/// `q_{i+k} = T(q_i)`, `p_i = s_m(q_i)`, `p_{i+k} = s_n(q_i)`, seeding
/// `q_0 .. q_{k-1}` between `q_0` and `T(q_0)`. Each line through `m` or `n`
/// meets the circle twice, so the only collinear triples are the designed
/// ones; this is re-verified exactly below.
pub fn grid_gadget(k: usize) -> Result<GridGadget, ConstructError> {
    if k < 2 {
        return Err(ConstructError::TooFew { needed: 2, got: k });
    }
    let kk = k * k;
    let m = Point::from_fracs(-1, 5, 0, 1);
    let n = Point::from_fracs(1, 5, 0, 1);
    let step = |x: &Point| reflect_through(&reflect_through(x, &n), &m);
    let q0 = crate::gen::circle_point(&BigRational::new(1.into(), 4.into()));
    let t0 = circle_parameter(&q0);
    let t1 = circle_parameter(&step(&q0));
    let mut q: Vec<Point> = (0..k)
        .map(|i| {
            let frac = BigRational::new((i as i64).into(), (k as i64).into());
            crate::gen::circle_point(&(&t0 + (&t1 - &t0) * frac))
        })
        .collect();
    for i in k..kk {
        let next = step(&q[i - k]);
        q.push(next);
    }
    let mut p: Vec<Point> = q.iter().map(|x| reflect_through(x, &m)).collect();
    p.extend(q[kk - k..].iter().map(|x| reflect_through(x, &n)));
    debug_assert_eq!(p.len(), kk + k);

    let mut all = vec![m, n];
    all.extend(p);
    all.extend(q);
    let mut points = PointSet::new(all).map_err(|e| ConstructError::Gadget(e.to_string()))?;
    let p_idx: Vec<usize> = (2..2 + kk + k).collect();
    let q_idx: Vec<usize> = (2 + kk + k..2 + kk + k + kk).collect();
    // p indices must run counter-clockwise along the hull; mirror otherwise.
    if points.orient(p_idx[0], p_idx[1], q_idx[0]) != Orientation::Ccw {
        let flipped: Vec<Point> = points.iter().map(|pt| Point::new(pt.x.clone(), -&pt.y)).collect();
        points = PointSet::new(flipped).expect("mirroring keeps points distinct");
    }
    let gadget = GridGadget { k, points, m: 0, n: 1, p: p_idx, q: q_idx };
    verify_gadget(&gadget)?;
    Ok(gadget)
}

fn verify_gadget(g: &GridGadget) -> Result<(), ConstructError> {
    let mut want: Vec<[usize; 3]> = g
        .designed_triples()
        .into_iter()
        .map(|mut t| {
            t.sort();
            t
        })
        .collect();
    want.sort();
    let found = collinear_triples(&g.points);
    if found != want {
        return Err(ConstructError::Gadget(format!(
            "expected {} collinear triples, found {}",
            want.len(),
            found.len()
        )));
    }
    let hull = convex_hull(&g.points);
    if hull.len() != g.points.len() - 2 || hull.contains(&g.m) || hull.contains(&g.n) {
        return Err(ConstructError::Gadget("m and n are not exactly the interior points".into()));
    }
    let pos = |x: usize| hull.iter().position(|&h| h == x).expect("hull vertex");
    let h = hull.len();
    for w in g.p.windows(2) {
        if (pos(w[0]) + 1) % h != pos(w[1]) {
            return Err(ConstructError::Gadget("p points are not consecutive counter-clockwise".into()));
        }
    }
    if g.points.iter().any(|pt| pt.y.is_zero() && pt.x.abs() == BigRational::one()) {
        return Err(ConstructError::Gadget("a point sits on a fixed point of the sweep".into()));
    }
    Ok(())
}
