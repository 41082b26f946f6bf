//! The point problems, each solved through an MSO formula and through a
//! direct geometric search, with independent witness verifiers.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::dp::gps_dp;
use crate::error::{DpError, SolveError};
use crate::expr::ValidatedExpr;
use crate::geometry::{
    convex_hull, convex_hull_of, in_convex_hull, terrain_sees, twice_signed_area, Orientation, PointSet,
    SimplePolygon,
};
use crate::mso::{
    check_with_witness, formula_library, AnnotatedStructure, Assignment, Checker, Direction,
};

pub const MSO_CAP: usize = 12;
pub const ORACLE_CAP: usize = 15;
pub const DP_CAP: usize = 200;
pub const MAX_FACES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mso,
    Oracle,
    Dp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mso => "mso",
            Method::Oracle => "oracle",
            Method::Dp => "dp",
        }
    }

    fn cap(self) -> usize {
        match self {
            Method::Mso => MSO_CAP,
            Method::Oracle => ORACLE_CAP,
            Method::Dp => DP_CAP,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mso" => Ok(Method::Mso),
            "oracle" => Ok(Method::Oracle),
            "dp" => Ok(Method::Dp),
            other => Err(format!("unknown method `{other}` (expected mso, oracle or dp)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Set(Vec<usize>),
    Partition(Vec<Vec<usize>>),
    Edges(Vec<[usize; 2]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub feasible: bool,
    /// Optimum value, or `None` when no solution exists within the bound.
    pub objective: Option<usize>,
    pub witness: Option<Witness>,
    pub method: Method,
}

fn cap(n: usize, method: Method) -> Result<(), SolveError> {
    if n > method.cap() {
        return Err(SolveError::TooLarge { n, cap: method.cap(), method: method.name() });
    }
    Ok(())
}

fn collinear(p: &PointSet, a: usize, b: usize, c: usize) -> bool {
    p.orient(a, b, c) == Orientation::Collinear
}

/// No three of `set` are collinear.
pub fn verify_general_position(points: &PointSet, set: &[usize]) -> bool {
    set.iter().tuple_combinations().all(|(&a, &b, &c)| !collinear(points, a, b, c))
}

/// Every line through two points of the set contains a point of `hit`.
pub fn verify_hitting_set(points: &PointSet, hit: &[usize]) -> bool {
    (0..points.len())
        .tuple_combinations()
        .all(|(x, y)| hit.iter().any(|&h| h == x || h == y || collinear(points, x, y, h)))
}

/// Every terrain segment is seen entirely by one guard, and all guards are allowed.
pub fn verify_guards(terrain: &PointSet, allowed: &[usize], guards: &[usize]) -> Result<bool, SolveError> {
    if !guards.iter().all(|g| allowed.contains(g)) {
        return Ok(false);
    }
    for seg in 0..terrain.len().saturating_sub(1) {
        let mut seen = false;
        for &g in guards {
            if terrain_sees(terrain, g, seg)? {
                seen = true;
                break;
            }
        }
        if !seen {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Faces are convex holes with pairwise disjoint interiors whose areas add
/// up to the area of the hull.
pub fn verify_partition(points: &PointSet, faces: &[Vec<usize>]) -> bool {
    let Some(shapes) = faces.iter().map(|f| Face::new(points, f)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let disjoint = shapes.iter().tuple_combinations().all(|(a, b)| a.interior_disjoint(b, points));
    let total: BigRational = shapes.iter().map(|f| f.twice_area.clone()).sum();
    disjoint && total == twice_signed_area(points, &convex_hull(points))
}

#[derive(Clone, Debug)]
struct Face {
    members: Vec<usize>,
    cycle: Vec<usize>,
    twice_area: BigRational,
}

impl Face {
    /// A strictly convex subset of at least three points whose closed hull
    /// holds no other point.
    fn new(points: &PointSet, members: &[usize]) -> Option<Face> {
        if members.len() < 3 {
            return None;
        }
        let cycle = convex_hull_of(points, members);
        if cycle.len() != members.len() {
            return None;
        }
        let corners: Vec<_> = cycle.iter().map(|&i| points.point(i).clone()).collect();
        if (0..points.len()).any(|y| !members.contains(&y) && in_convex_hull(&corners, points.point(y))) {
            return None;
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let twice_area = twice_signed_area(points, &cycle);
        Some(Face { members: sorted, cycle, twice_area })
    }

    /// Some edge line of one polygon has the other one weakly on its outer side.
    fn interior_disjoint(&self, other: &Face, points: &PointSet) -> bool {
        let separates = |a: &Face, b: &Face| {
            let h = a.cycle.len();
            (0..h).any(|i| {
                let (p, q) = (a.cycle[i], a.cycle[(i + 1) % h]);
                b.cycle.iter().all(|&v| points.orient(p, q, v) != Orientation::Ccw)
            })
        };
        separates(self, other) || separates(other, self)
    }
}

fn structure(points: &PointSet) -> AnnotatedStructure {
    AnnotatedStructure::from_points(points)
}

fn optimize_library(
    s: &AnnotatedStructure,
    name: &str,
    direction: Direction,
) -> Result<Option<(Vec<usize>, usize)>, SolveError> {
    let f = formula_library(name, None)?;
    Ok(Checker::new(s, &f)?.optimize(direction)?)
}

/// Largest subset with no three collinear points; feasible when it has at least `k` points.
pub fn general_position_subset(points: &PointSet, k: usize, method: Method) -> Result<SolveResult, SolveError> {
    let n = points.len();
    cap(n, method)?;
    let best = match method {
        Method::Mso => optimize_library(&structure(points), "genpos", Direction::Max)?
            .map(|(set, _)| set)
            .expect("the empty set is in general position"),
        Method::Oracle => (0..=n)
            .rev()
            .find_map(|size| (0..n).combinations(size).find(|c| verify_general_position(points, c)))
            .expect("the empty set is in general position"),
        Method::Dp => return Err(DpError::Unvalidated.into()),
    };
    Ok(SolveResult { feasible: best.len() >= k, objective: Some(best.len()), witness: Some(Witness::Set(best)), method })
}

/// General position subset through the expression dynamic program.
pub fn general_position_subset_dp(expr: &ValidatedExpr, k: usize) -> Result<SolveResult, SolveError> {
    cap(expr.expr().point_count(), Method::Dp)?;
    let out = gps_dp(expr, k)?;
    Ok(SolveResult { feasible: out.feasible, objective: Some(out.objective), witness: None, method: Method::Dp })
}

/// Smallest set of points meeting every line spanned by two points.
pub fn hitting_set_induced_lines(points: &PointSet, method: Method) -> Result<SolveResult, SolveError> {
    let n = points.len();
    if n < 2 {
        return Err(SolveError::Invalid("hitting set needs at least two points".into()));
    }
    cap(n, method)?;
    let best = match method {
        Method::Mso => optimize_library(&structure(points), "hitting", Direction::Min)?
            .map(|(set, _)| set)
            .expect("the whole set hits every line"),
        Method::Oracle => (0..=n)
            .find_map(|size| (0..n).combinations(size).find(|c| verify_hitting_set(points, c)))
            .expect("the whole set hits every line"),
        Method::Dp => return Err(SolveError::UnsupportedMethod("dp")),
    };
    Ok(SolveResult { feasible: true, objective: Some(best.len()), witness: Some(Witness::Set(best)), method })
}

fn faces_of(points: &PointSet) -> Vec<Face> {
    let n = points.len();
    (3..=n).flat_map(|size| (0..n).combinations(size)).filter_map(|c| Face::new(points, &c)).collect()
}

/// Depth-first search for exactly `j` pairwise disjoint faces covering the hull area.
fn partition_search(
    faces: &[Face],
    points: &PointSet,
    j: usize,
    remaining: &BigRational,
    from: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == j {
        return remaining.is_zero();
    }
    for i in from..faces.len() {
        let f = &faces[i];
        if &f.twice_area > remaining {
            continue;
        }
        if chosen.iter().all(|&c| faces[c].interior_disjoint(f, points)) {
            chosen.push(i);
            if partition_search(faces, points, j, &(remaining - &f.twice_area), i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Partition of the hull into at most `k` convex faces spanned by the points,
/// each face empty of other points; the fewest faces are reported.
pub fn min_convex_partition(points: &PointSet, k: usize, method: Method) -> Result<SolveResult, SolveError> {
    let n = points.len();
    if !(1..=MAX_FACES).contains(&k) {
        return Err(SolveError::BadK(k, "1..=6"));
    }
    if n < 3 || !points.in_general_position() {
        return Err(SolveError::Invalid("convex partition needs at least three points in general position".into()));
    }
    cap(n, method)?;
    let mut found: Option<Vec<Vec<usize>>> = None;
    match method {
        Method::Mso => {
            let s = structure(points);
            for j in 1..=k {
                let f = formula_library("partition", Some(j))?;
                if let Some(w) = check_with_witness(&s, &f, &Assignment::new())? {
                    found = Some((1..=j).map(|i| w.sets[&format!("X{i}")].iter().copied().collect()).collect());
                    break;
                }
            }
        }
        Method::Oracle => {
            let faces = faces_of(points);
            let total = twice_signed_area(points, &convex_hull(points));
            for j in 1..=k {
                let mut chosen = Vec::new();
                if partition_search(&faces, points, j, &total, 0, &mut chosen) {
                    found = Some(chosen.iter().map(|&i| faces[i].members.clone()).collect());
                    break;
                }
            }
        }
        Method::Dp => return Err(SolveError::UnsupportedMethod("dp")),
    }
    Ok(match found {
        Some(parts) => SolveResult {
            feasible: true,
            objective: Some(parts.len()),
            witness: Some(Witness::Partition(parts)),
            method,
        },
        None => SolveResult { feasible: false, objective: None, witness: None, method },
    })
}

/// Fewest allowed vertex guards such that every terrain segment is entirely
/// seen by one of them. Vertices must be ordered by strictly increasing x.
pub fn segmented_terrain_guarding(
    terrain: &PointSet,
    canguard: Option<&[usize]>,
    method: Method,
) -> Result<SolveResult, SolveError> {
    let n = terrain.len();
    if n < 2 {
        return Err(SolveError::Invalid("a terrain needs at least two vertices".into()));
    }
    if n > 1 {
        // surfaces non-monotone input as a geometry error
        terrain_sees(terrain, 0, 0)?;
    }
    cap(n, method)?;
    let allowed: Vec<usize> = canguard.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    if let Some(&g) = allowed.iter().find(|&&g| g >= n) {
        return Err(SolveError::Invalid(format!("guard {g} is out of range")));
    }
    let best = match method {
        Method::Mso => {
            let s = AnnotatedStructure::terrain(terrain, Some(&allowed))?;
            let f = formula_library("guards", None)?;
            Checker::new(&s, &f)?.optimize(Direction::Min)?.map(|(set, _)| set)
        }
        Method::Oracle => {
            let mut sees = vec![vec![false; n - 1]; n];
            for &g in &allowed {
                for (seg, seen) in sees[g].iter_mut().enumerate() {
                    *seen = terrain_sees(terrain, g, seg)?;
                }
            }
            let mut pool = allowed.clone();
            pool.sort_unstable();
            pool.dedup();
            (0..=pool.len()).find_map(|size| {
                pool.iter()
                    .copied()
                    .combinations(size)
                    .find(|c| (0..n - 1).all(|seg| c.iter().any(|&g| sees[g][seg])))
            })
        }
        Method::Dp => return Err(SolveError::UnsupportedMethod("dp")),
    };
    Ok(match best {
        Some(set) => {
            SolveResult { feasible: true, objective: Some(set.len()), witness: Some(Witness::Set(set)), method }
        }
        None => SolveResult { feasible: false, objective: None, witness: None, method },
    })
}

/// Visibility graph of a simple polygon given by its vertices in
/// counter-clockwise order.
pub fn visibility_graph(polygon: &PointSet, method: Method) -> Result<SolveResult, SolveError> {
    let n = polygon.len();
    cap(n, method)?;
    let poly = SimplePolygon::new(polygon.clone())?;
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let visible: Vec<bool> = match method {
        Method::Mso => {
            let s = AnnotatedStructure::polygon(polygon)?;
            let f = formula_library("visedge", None)?;
            Checker::new(&s, &f)?.eval_many(pairs.iter().map(|&(x, y)| vec![x as u64, y as u64]))
        }
        Method::Oracle => pairs.iter().map(|&(x, y)| poly.visible(x, y)).collect(),
        Method::Dp => return Err(SolveError::UnsupportedMethod("dp")),
    };
    let edges: Vec<[usize; 2]> =
        pairs.iter().zip(visible).filter(|(_, v)| *v).map(|(&(x, y), _)| [x, y]).collect();
    Ok(SolveResult { feasible: true, objective: Some(edges.len()), witness: Some(Witness::Edges(edges)), method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn pts(c: &[(i64, i64)]) -> PointSet {
        PointSet::from_ints(c).unwrap()
    }

    fn both<F: Fn(Method) -> SolveResult>(f: F) -> SolveResult {
        let a = f(Method::Mso);
        let b = f(Method::Oracle);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.feasible, b.feasible);
        a
    }

    #[test]
    fn gps_examples() {
        let line = pts(&[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
        let r = both(|m| general_position_subset(&line, 3, m).unwrap());
        assert!(!r.feasible);
        assert_eq!(r.objective, Some(2));
        let grid: Vec<(i64, i64)> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
        let r = both(|m| general_position_subset(&pts(&grid), 7, m).unwrap());
        assert_eq!(r.objective, Some(6));
        assert!(matches!(general_position_subset(&line, 1, Method::Dp), Err(SolveError::Dp(DpError::Unvalidated))));
    }

    #[test]
    fn hitting_examples() {
        let line = pts(&[(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(both(|m| hitting_set_induced_lines(&line, m).unwrap()).objective, Some(1));
        let tri = pts(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(both(|m| hitting_set_induced_lines(&tri, m).unwrap()).objective, Some(2));
    }

    #[test]
    fn partition_examples() {
        let quad = pts(&[(0, 0), (3, 0), (4, 3), (0, 2)]);
        let r = both(|m| min_convex_partition(&quad, 1, m).unwrap());
        assert_eq!(r.witness, Some(Witness::Partition(vec![vec![0, 1, 2, 3]])));
        let tri = pts(&[(0, 0), (6, 0), (0, 6), (1, 2)]);
        assert!(!both(|m| min_convex_partition(&tri, 2, m).unwrap()).feasible);
        assert_eq!(both(|m| min_convex_partition(&tri, 3, m).unwrap()).objective, Some(3));
        // a square with its center has three collinear points; nudge the center
        let sq = PointSet::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(4, 0),
            Point::from_ints(4, 4),
            Point::from_ints(0, 4),
            Point::from_fracs(21, 10, 17, 10),
        ])
        .unwrap();
        let r = both(|m| min_convex_partition(&sq, 4, m).unwrap());
        assert!(r.feasible);
        if let Some(Witness::Partition(p)) = &r.witness {
            assert!(verify_partition(&sq, p));
        }
        assert!(min_convex_partition(&sq, 7, Method::Oracle).is_err());
    }

    #[test]
    fn terrain_examples() {
        let v = pts(&[(0, 2), (1, 0), (2, 2)]);
        let r = both(|m| segmented_terrain_guarding(&v, None, m).unwrap());
        assert_eq!(r.objective, Some(1));
        assert!(segmented_terrain_guarding(&pts(&[(0, 0), (0, 1)]), None, Method::Oracle).is_err());
    }

    #[test]
    fn visibility_examples() {
        let pent = pts(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]);
        assert_eq!(both(|m| visibility_graph(&pent, m).unwrap()).objective, Some(10));
        let dart = pts(&[(0, 0), (4, 2), (0, 4), (1, 2)]);
        let r = both(|m| visibility_graph(&dart, m).unwrap());
        assert_eq!(r.objective, Some(5));
    }
}
