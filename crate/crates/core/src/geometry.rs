//! Exact planar predicates, order types and the geometric brute-force oracles.
//!
//! Every predicate here is decided with exact rational (or exact integer)
//! arithmetic. A [`PointSet`] keeps, next to its rational coordinates, an
//! integer frame obtained by clearing all denominators; orientation signs are
//! invariant under that positive scaling, so bulk order-type extraction runs
//! on `i128` whenever the scaled coordinates fit and falls back to `BigInt`
//! otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    /// `(xn/xd, yn/yd)`; panics on a zero denominator.
    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point {
            x: BigRational::new(xn.into(), xd.into()),
            y: BigRational::new(yn.into(), yd.into()),
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Point { x: &self.x * factor, y: &self.y * factor }
    }

    /// Reflection across the y-axis.
    pub fn mirrored(&self) -> Self {
        Point { x: -&self.x, y: self.y.clone() }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let two = BigRational::from_integer(2.into());
        Point { x: (&self.x + &other.x) / &two, y: (&self.y + &other.y) / two }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    fn from_sign(sign: Ordering) -> Self {
        match sign {
            Ordering::Greater => Orientation::Ccw,
            Ordering::Less => Orientation::Cw,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// `u - v` as an unreduced fraction with positive denominator.
fn difference(u: &BigRational, v: &BigRational) -> (BigInt, BigInt) {
    if u.denom() == v.denom() {
        (u.numer() - v.numer(), u.denom().clone())
    } else {
        (u.numer() * v.denom() - v.numer() * u.denom(), u.denom() * v.denom())
    }
}

// Skips the gcd normalisation of rational arithmetic; only the sign is needed.
fn cross_sign(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (n1, d1) = difference(&b.x, &a.x);
    let (n2, d2) = difference(&c.y, &a.y);
    let (n3, d3) = difference(&b.y, &a.y);
    let (n4, d4) = difference(&c.x, &a.x);
    let lhs = n1 * n2 * (&d3 * &d4);
    let rhs = n3 * n4 * (d1 * d2);
    lhs.cmp(&rhs)
}

/// Sign of the determinant of `(b - a, c - a)`. Coincident inputs are collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Orientation {
    Orientation::from_sign(cross_sign(a, b, c))
}

/// Integer coordinates after multiplying every point by the common denominator.
#[derive(Clone, Debug)]
enum IntFrame {
    Small(Vec<[i64; 2]>),
    Big(Vec<[BigInt; 2]>),
}

impl IntFrame {
    fn build(points: &[Point]) -> Self {
        let mut lcm = BigInt::one();
        for p in points {
            lcm = lcm.lcm(p.x.denom());
            lcm = lcm.lcm(p.y.denom());
        }
        let scale = |r: &BigRational| -> BigInt { r.numer() * (&lcm / r.denom()) };
        let big: Vec<[BigInt; 2]> = points.iter().map(|p| [scale(&p.x), scale(&p.y)]).collect();
        // |coord| < 2^62 keeps every difference below 2^63 and every product in i128.
        let limit = BigInt::from(1i64 << 62);
        if big.iter().all(|c| c[0].abs() < limit && c[1].abs() < limit) {
            IntFrame::Small(
                big.iter()
                    .map(|c| [c[0].to_i64().unwrap(), c[1].to_i64().unwrap()])
                    .collect(),
            )
        } else {
            IntFrame::Big(big)
        }
    }

    fn orient(&self, i: usize, j: usize, k: usize) -> Orientation {
        match self {
            IntFrame::Small(c) => {
                let (a, b, d) = (c[i], c[j], c[k]);
                let lhs = (b[0] - a[0]) as i128 * (d[1] - a[1]) as i128;
                let rhs = (b[1] - a[1]) as i128 * (d[0] - a[0]) as i128;
                Orientation::from_sign(lhs.cmp(&rhs))
            }
            IntFrame::Big(c) => {
                let (a, b, d) = (&c[i], &c[j], &c[k]);
                let lhs = (&b[0] - &a[0]) * (&d[1] - &a[1]);
                let rhs = (&b[1] - &a[1]) * (&d[0] - &a[0]);
                Orientation::from_sign(lhs.cmp(&rhs))
            }
        }
    }
}

/// An indexed set of pairwise distinct points.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    frame: IntFrame,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let mut sorted: Vec<(usize, &Point)> = points.iter().enumerate().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1));
        for w in sorted.windows(2) {
            if w[0].1 == w[1].1 {
                let (first, second) = (w[0].0.min(w[1].0), w[0].0.max(w[1].0));
                return Err(GeometryError::DuplicatePoint { first, second });
            }
        }
        let frame = IntFrame::build(&points);
        Ok(PointSet { points, frame })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self, GeometryError> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Orientation of the points with indices `i, j, k`.
    pub fn orient(&self, i: usize, j: usize, k: usize) -> Orientation {
        self.frame.orient(i, j, k)
    }

    /// The points listed in `order` (a permutation or a subset), re-indexed from 0.
    pub fn select(&self, order: &[usize]) -> PointSet {
        PointSet::new(order.iter().map(|&i| self.points[i].clone()).collect())
            .expect("a selection of distinct points stays distinct")
    }

    pub fn scaled(&self, factor: &BigRational) -> PointSet {
        PointSet::new(self.points.iter().map(|p| p.scaled(factor)).collect())
            .expect("positive scaling keeps points distinct")
    }

    pub fn mirrored(&self) -> PointSet {
        PointSet::new(self.points.iter().map(Point::mirrored).collect())
            .expect("mirroring keeps points distinct")
    }

    /// Parses the line-oriented point format: `x y` per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(GeometryError::Parse {
                    line: lineno + 1,
                    message: format!("expected two coordinates, found {}", parts.len()),
                });
            }
            let x = parse_rational(parts[0]).map_err(|message| GeometryError::Parse { line: lineno + 1, message })?;
            let y = parse_rational(parts[1]).map_err(|message| GeometryError::Parse { line: lineno + 1, message })?;
            points.push(Point::new(x, y));
        }
        PointSet::new(points)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }

    /// True when no three points are collinear.
    pub fn in_general_position(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if self.orient(a, b, c) == Orientation::Collinear {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn parse_rational(token: &str) -> Result<BigRational, String> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed { s.strip_prefix(['-', '+']).unwrap_or(s) } else { s };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(format!("malformed number `{token}`"));
    }
    let numer = BigInt::from_str(num.trim_start_matches('+')).map_err(|e| e.to_string())?;
    let denom = match den {
        Some(d) => {
            if !valid_int(d, false) {
                return Err(format!("malformed denominator in `{token}`"));
            }
            BigInt::from_str(d).map_err(|e| e.to_string())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in `{token}`"));
    }
    Ok(BigRational::new(numer, denom))
}

/// A set of ordered index triples closed under cyclic rotation, stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct TripleSet {
    n: usize,
    bits: Vec<u64>,
    count: usize,
}

impl fmt::Debug for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleSet").field("n", &self.n).field("len", &self.count).finish()
    }
}

impl TripleSet {
    pub fn new(n: usize) -> Self {
        let total = n * n * n;
        TripleSet { n, bits: vec![0; total.div_ceil(64)], count: 0 }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        let s = self.slot(a, b, c);
        self.bits[s >> 6] >> (s & 63) & 1 == 1
    }

    fn insert_one(&mut self, a: usize, b: usize, c: usize) -> bool {
        let s = self.slot(a, b, c);
        let mask = 1u64 << (s & 63);
        if self.bits[s >> 6] & mask == 0 {
            self.bits[s >> 6] |= mask;
            self.count += 1;
            true
        } else {
            false
        }
    }

    /// Inserts the cyclic closure of `(a, b, c)`. Indices must be pairwise distinct.
    pub fn insert_cyclic(&mut self, a: usize, b: usize, c: usize) {
        debug_assert!(a != b && b != c && a != c);
        if self.insert_one(a, b, c) {
            self.insert_one(b, c, a);
            self.insert_one(c, a, b);
        }
    }

    /// Number of ordered triples (each cyclic class counts three times).
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// All triples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let s = w * 64 + bit;
                Some((s / (n * n), (s / n) % n, s % n))
            })
        })
    }

    /// First triple (lexicographically) where the two sets differ.
    pub fn first_difference(&self, other: &TripleSet) -> Option<(usize, usize, usize)> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        for (w, (x, y)) in self.bits.iter().zip(&other.bits).enumerate() {
            let diff = x ^ y;
            if diff != 0 {
                let s = w * 64 + diff.trailing_zeros() as usize;
                return Some((s / (n * n), (s / n) % n, s % n));
            }
        }
        None
    }
}

/// The ternary relation of counter-clockwise triples of a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderType {
    triples: TripleSet,
}

impl OrderType {
    /// Accepts a cyclically closed triple set if it never holds both `(a,b,c)` and `(b,a,c)`.
    pub fn from_triples(triples: TripleSet) -> Result<Self, GeometryError> {
        for (a, b, c) in triples.iter() {
            if triples.contains(b, a, c) {
                return Err(GeometryError::InconsistentTriples { a, b, c });
            }
        }
        Ok(OrderType { triples })
    }

    pub fn n(&self) -> usize {
        self.triples.universe()
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        self.triples.contains(a, b, c)
    }

    pub fn orientation(&self, a: usize, b: usize, c: usize) -> Orientation {
        if a == b || b == c || a == c {
            Orientation::Collinear
        } else if self.contains(a, b, c) {
            Orientation::Ccw
        } else if self.contains(b, a, c) {
            Orientation::Cw
        } else {
            Orientation::Collinear
        }
    }

    pub fn triples(&self) -> &TripleSet {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Order type of the mirror image: `(a,b,c)` becomes `(b,a,c)`.
    pub fn mirrored(&self) -> OrderType {
        let mut t = TripleSet::new(self.n());
        for (a, b, c) in self.triples.iter() {
            t.insert_cyclic(b, a, c);
        }
        OrderType { triples: t }
    }
}

pub fn order_type(points: &PointSet) -> OrderType {
    let n = points.len();
    let mut triples = TripleSet::new(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                match points.orient(a, b, c) {
                    Orientation::Ccw => triples.insert_cyclic(a, b, c),
                    Orientation::Cw => triples.insert_cyclic(b, a, c),
                    Orientation::Collinear => {}
                }
            }
        }
    }
    OrderType { triples }
}

/// Whether `triples` is the order type of some set of points in strictly
/// convex position, i.e. there is a cyclic sequence of all `n` indices such
/// that a triple is present exactly when it appears counter-clockwise in it.
pub fn is_convex_order_type(triples: &TripleSet) -> bool {
    let n = triples.universe();
    if n < 3 {
        return true;
    }
    if triples.len() != n * (n - 1) * (n - 2) / 2 {
        return false;
    }
    // Seen from point 0, the others of a convex polygon appear in angular order.
    let mut rest: Vec<usize> = (1..n).collect();
    rest.sort_by(|&b, &c| {
        if b == c {
            Ordering::Equal
        } else if triples.contains(0, b, c) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    let mut cycle = vec![0];
    cycle.extend(rest);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !triples.contains(cycle[i], cycle[j], cycle[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Strictly convex hull vertices of the indexed subset, counter-clockwise,
/// starting from the lexicographically least point.
pub fn convex_hull_of(points: &PointSet, subset: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_by(|&a, &b| points.point(a).cmp(points.point(b)));
    idx.dedup();
    if idx.len() <= 2 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && points.orient(lower[lower.len() - 2], lower[lower.len() - 1], i) != Orientation::Ccw
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && points.orient(upper[upper.len() - 2], upper[upper.len() - 1], i) != Orientation::Ccw
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

pub fn convex_hull(points: &PointSet) -> Vec<usize> {
    let all: Vec<usize> = (0..points.len()).collect();
    convex_hull_of(points, &all)
}

/// Closed convex hull membership.
pub fn in_convex_hull(subset: &[Point], y: &Point) -> bool {
    assert!(!subset.is_empty(), "in_convex_hull needs a nonempty set");
    let mut pts: Vec<Point> = subset.to_vec();
    pts.sort();
    pts.dedup();
    let set = PointSet::new(pts).expect("deduplicated");
    let hull = convex_hull(&set);
    match hull.len() {
        1 => set.point(hull[0]) == y,
        2 => {
            let (a, b) = (set.point(hull[0]), set.point(hull[1]));
            orient(a, b, y) == Orientation::Collinear && on_closed_segment(a, b, y)
        }
        h => (0..h).all(|i| orient(set.point(hull[i]), set.point(hull[(i + 1) % h]), y) != Orientation::Cw),
    }
}

/// For collinear `a, b, y`: whether `y` lies between `a` and `b` inclusive.
fn on_closed_segment(a: &Point, b: &Point, y: &Point) -> bool {
    let within = |lo: &BigRational, hi: &BigRational, v: &BigRational| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo <= v && v <= hi
    };
    within(&a.x, &b.x, &y.x) && within(&a.y, &b.y, &y.y)
}

/// Whether the open segments `xx'` and `yy'` share a point interior to both.
pub fn segments_cross(x: &Point, x2: &Point, y: &Point, y2: &Point) -> bool {
    let strictly_opposite = |p: Orientation, q: Orientation| {
        matches!((p, q), (Orientation::Ccw, Orientation::Cw) | (Orientation::Cw, Orientation::Ccw))
    };
    strictly_opposite(orient(y, y2, x), orient(y, y2, x2)) && strictly_opposite(orient(x, x2, y), orient(x, x2, y2))
}

fn require_x_monotone(points: &PointSet) -> Result<(), GeometryError> {
    for i in 1..points.len() {
        if points.point(i - 1).x >= points.point(i).x {
            return Err(GeometryError::NotXMonotone { index: i });
        }
    }
    Ok(())
}

/// Whether terrain vertex `g` sees the terrain point `target` (a vertex index):
/// no vertex strictly between them in x lies strictly above the sight line.
fn terrain_vertex_sees(points: &PointSet, g: usize, target: usize) -> bool {
    let (l, r) = if g <= target { (g, target) } else { (target, g) };
    (l + 1..r).all(|v| points.orient(l, r, v) != Orientation::Ccw)
}

/// Whether terrain vertex `g` sees every point of terrain segment `seg`
/// (from vertex `seg` to vertex `seg + 1`). The vertices must be sorted by
/// strictly increasing x.
///
/// For an x-monotone chain and a vertex guard, the seen part of a segment is
/// connected and the sight lines to its interior are squeezed between the
/// sight lines to its endpoints, so full visibility reduces to the two
/// endpoints.
pub fn terrain_sees(points: &PointSet, g: usize, seg: usize) -> Result<bool, GeometryError> {
    require_x_monotone(points)?;
    if seg + 1 >= points.len() {
        return Err(GeometryError::SegmentOutOfRange { seg, vertices: points.len() });
    }
    if g >= points.len() {
        return Err(GeometryError::IndexOutOfRange { index: g, len: points.len() });
    }
    Ok(terrain_vertex_sees(points, g, seg) && terrain_vertex_sees(points, g, seg + 1))
}

/// A simple polygon in general position, vertices in counter-clockwise order.
#[derive(Clone, Debug)]
pub struct SimplePolygon {
    vertices: PointSet,
}

impl SimplePolygon {
    pub fn new(vertices: PointSet) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidPolygon("fewer than three vertices".into()));
        }
        if !vertices.in_general_position() {
            return Err(GeometryError::InvalidPolygon("three vertices are collinear".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a, b) = (vertices.point(i), vertices.point((i + 1) % n));
                let (c, d) = (vertices.point(j), vertices.point((j + 1) % n));
                if segments_cross(a, b, c, d) {
                    return Err(GeometryError::InvalidPolygon(format!("edges {i} and {j} cross")));
                }
            }
        }
        let mut twice_area = BigRational::zero();
        for i in 0..n {
            let (p, q) = (vertices.point(i), vertices.point((i + 1) % n));
            twice_area += &p.x * &q.y - &q.x * &p.y;
        }
        if !twice_area.is_positive() {
            return Err(GeometryError::InvalidPolygon("vertices are not in counter-clockwise order".into()));
        }
        Ok(SimplePolygon { vertices })
    }

    pub fn vertices(&self) -> &PointSet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Strict interior test by ray casting; boundary points are not interior.
    fn strictly_inside(&self, p: &Point) -> bool {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices.point(i);
            let b = self.vertices.point((i + 1) % n);
            if (a.y > p.y) != (b.y > p.y) {
                // x coordinate of the edge at height p.y
                let t = (&p.y - &a.y) / (&b.y - &a.y);
                let x = &a.x + t * (&b.x - &a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Whether segment `xy` lies in the closed polygon.
    pub fn visible(&self, x: usize, y: usize) -> bool {
        let n = self.len();
        if x == y {
            return false;
        }
        if (x + 1) % n == y || (y + 1) % n == x {
            return true;
        }
        let (px, py) = (self.vertices.point(x), self.vertices.point(y));
        for i in 0..n {
            let (a, b) = (self.vertices.point(i), self.vertices.point((i + 1) % n));
            if segments_cross(px, py, a, b) {
                return false;
            }
        }
        self.strictly_inside(&px.midpoint(py))
    }
}

pub fn polygon_visible(polygon: &PointSet, x: usize, y: usize) -> Result<bool, GeometryError> {
    if x >= polygon.len() || y >= polygon.len() {
        return Err(GeometryError::IndexOutOfRange { index: x.max(y), len: polygon.len() });
    }
    Ok(SimplePolygon::new(polygon.clone())?.visible(x, y))
}

/// Twice the signed area of the polygon through the given points in order.
pub fn twice_signed_area(points: &PointSet, cycle: &[usize]) -> BigRational {
    let k = cycle.len();
    let mut acc = BigRational::zero();
    for i in 0..k {
        let (p, q) = (points.point(cycle[i]), points.point(cycle[(i + 1) % k]));
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orient_basic_cases() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), Orientation::Ccw);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), Orientation::Cw);
        assert_eq!(orient(&p(1, 0), &p(0, 0), &p(0, 1)), Orientation::Cw);
        assert_eq!(orient(&p(3, 4), &p(3, 4), &p(9, 1)), Orientation::Collinear);
    }

    #[test]
    fn triangle_order_type_is_one_cyclic_class() {
        let pts = PointSet::from_ints(&[(0, 0), (2, 0), (1, 2)]).unwrap();
        let ot = order_type(&pts);
        let triples: Vec<_> = ot.triples().iter().collect();
        assert_eq!(triples, vec![(0, 1, 2), (1, 2, 0), (2, 0, 1)]);
    }

    #[test]
    fn collinear_points_have_empty_order_type() {
        let pts = PointSet::from_ints(&[(0, 0), (1, 1), (5, 5)]).unwrap();
        assert!(order_type(&pts).is_empty());
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = PointSet::from_ints(&[(0, 0), (1, 1), (0, 0)]).unwrap_err();
        assert!(matches!(err, GeometryError::DuplicatePoint { first: 0, second: 2 }));
        let err = PointSet::parse("0 0\n1/2 1\n2/4 2/2\n").unwrap_err();
        assert!(matches!(err, GeometryError::DuplicatePoint { .. }));
    }

    #[test]
    fn parses_point_files() {
        let pts = PointSet::parse("# header\n\n 1 -2/3 # trailing\n+4 6/4\n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.point(0), &Point::from_fracs(1, 1, -2, 3));
        assert_eq!(pts.point(1), &Point::from_fracs(4, 1, 3, 2));
        assert!(PointSet::parse("1 2 3").is_err());
        assert!(PointSet::parse("1 2/0").is_err());
        assert!(PointSet::parse("1.5 2").is_err());
        let round = PointSet::parse(&pts.to_text()).unwrap();
        assert_eq!(round, pts);
    }

    #[test]
    fn recognises_convex_order_types() {
        let hex = PointSet::from_ints(&[(0, 0), (2, 0), (3, 1), (2, 2), (0, 2), (-1, 1)]).unwrap();
        assert!(is_convex_order_type(order_type(&hex).triples()));
        assert!(is_convex_order_type(order_type(&hex.mirrored()).triples()));
        let with_center = PointSet::from_ints(&[(0, 0), (4, 0), (0, 4), (1, 1)]).unwrap();
        assert!(!is_convex_order_type(order_type(&with_center).triples()));
        let mut both = TripleSet::new(3);
        both.insert_cyclic(0, 1, 2);
        both.insert_cyclic(1, 0, 2);
        assert!(!is_convex_order_type(&both));
    }

    #[test]
    fn hull_of_square_with_center() {
        let pts = PointSet::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]).unwrap();
        assert_eq!(convex_hull(&pts), vec![0, 1, 2, 3]);
        let edge = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        assert_eq!(convex_hull(&edge), vec![0, 2, 3, 4]);
    }

    #[test]
    fn hull_of_degenerate_sets() {
        let one = PointSet::from_ints(&[(3, 3)]).unwrap();
        assert_eq!(convex_hull(&one), vec![0]);
        let line = PointSet::from_ints(&[(1, 1), (0, 0), (2, 2)]).unwrap();
        assert_eq!(convex_hull(&line), vec![1, 2]);
    }

    #[test]
    fn hull_membership_is_closed() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        assert!(in_convex_hull(&sq, &p(1, 1)));
        assert!(in_convex_hull(&sq, &p(1, 0)));
        assert!(in_convex_hull(&sq, &p(2, 2)));
        assert!(!in_convex_hull(&sq, &p(3, 1)));
        assert!(in_convex_hull(&[p(0, 0), p(2, 2)], &p(1, 1)));
        assert!(!in_convex_hull(&[p(0, 0), p(2, 2)], &p(3, 3)));
        assert!(in_convex_hull(&[p(5, 5)], &p(5, 5)));
        assert!(!in_convex_hull(&[p(5, 5)], &p(5, 6)));
    }

    #[test]
    fn crossing_segments() {
        assert!(segments_cross(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(!segments_cross(&p(0, 0), &p(1, 1), &p(2, 2), &p(3, 3)));
        assert!(!segments_cross(&p(0, 0), &p(2, 0), &p(0, 0), &p(1, 1)));
        assert!(!segments_cross(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 1)));
        assert!(!segments_cross(&p(0, 0), &p(1, 0), &p(0, 1), &p(0, 0)));
    }

    #[test]
    fn v_terrain_visibility() {
        let t = PointSet::from_ints(&[(0, 2), (1, 0), (2, 2)]).unwrap();
        assert!(terrain_sees(&t, 0, 1).unwrap());
        assert!(terrain_sees(&t, 0, 0).unwrap());
        assert!(terrain_sees(&t, 1, 0).unwrap());
        assert!(terrain_sees(&t, 2, 0).unwrap());
        assert!(matches!(terrain_sees(&t, 0, 2), Err(GeometryError::SegmentOutOfRange { .. })));
        let bad = PointSet::from_ints(&[(0, 0), (0, 1)]).unwrap();
        assert!(matches!(terrain_sees(&bad, 0, 0), Err(GeometryError::NotXMonotone { .. })));
    }

    #[test]
    fn dart_polygon_visibility() {
        // Reflex vertex at index 2 hides the diagonal 1-3.
        let dart = PointSet::from_ints(&[(0, 0), (4, 2), (1, 1), (2, 4)]).unwrap();
        let poly = SimplePolygon::new(dart).unwrap();
        assert!(poly.visible(0, 2));
        assert!(!poly.visible(1, 3));
        for i in 0..4 {
            assert!(poly.visible(i, (i + 1) % 4));
        }
    }

    #[test]
    fn rejects_bad_polygons() {
        let bowtie = PointSet::from_ints(&[(0, 0), (2, 2), (2, 0), (0, 2)]).unwrap();
        assert!(SimplePolygon::new(bowtie).is_err());
        let cw = PointSet::from_ints(&[(0, 0), (0, 2), (2, 2), (2, 0)]).unwrap();
        assert!(SimplePolygon::new(cw).is_err());
    }
}
