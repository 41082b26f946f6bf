//! Seeded random instances. Every generator is a pure function of its RNG.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{convex_hull, Orientation, Point, PointSet, SimplePolygon};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Point on the unit circle for parameter `t` (never the point `(-1, 0)`).
pub fn circle_point(t: &BigRational) -> Point {
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let t2 = t * t;
    let den = &one + &t2;
    Point::new((&one - &t2) / &den, two * t / den)
}

/// `n` points in strictly convex position on the unit circle, in random index order.
pub fn convex<R: Rng>(rng: &mut R, n: usize) -> PointSet {
    let mut ts: Vec<BigRational> = Vec::with_capacity(n);
    while ts.len() < n {
        let t = rat(rng.gen_range(-400..=400), rng.gen_range(1..=60));
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    let mut pts: Vec<Point> = ts.iter().map(circle_point).collect();
    pts.shuffle(rng);
    PointSet::new(pts).expect("distinct parameters give distinct points")
}

/// `n` integer points in `[-range, range]^2` with no three collinear.
pub fn general_position<R: Rng>(rng: &mut R, n: usize, range: i64) -> PointSet {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        assert!(attempts < 100_000, "range {range} too small for {n} points in general position");
        let c = Point::from_ints(rng.gen_range(-range..=range), rng.gen_range(-range..=range));
        if pts.contains(&c) {
            continue;
        }
        let clash = (0..pts.len())
            .any(|i| (i + 1..pts.len()).any(|j| crate::geometry::orient(&pts[i], &pts[j], &c) == Orientation::Collinear));
        if !clash {
            pts.push(c);
        }
    }
    PointSet::new(pts).expect("distinct")
}

/// Integer points in `[-range, range]^2`, duplicates excluded, collinearities allowed.
pub fn arbitrary<R: Rng>(rng: &mut R, n: usize, range: i64) -> PointSet {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let c = Point::from_ints(rng.gen_range(-range..=range), rng.gen_range(-range..=range));
        if !pts.contains(&c) {
            pts.push(c);
        }
    }
    PointSet::new(pts).expect("distinct")
}

/// `n0` collinear points and `d` outliers off their line, shuffled. Returns the
/// set and the indices of the collinear points.
pub fn collinear_plus<R: Rng>(rng: &mut R, n0: usize, d: usize) -> (PointSet, Vec<usize>) {
    let base = (rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64));
    let mut dir = (0i64, 0i64);
    while dir == (0, 0) {
        dir = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    }
    let mut ts: Vec<i64> = Vec::new();
    while ts.len() < n0 {
        let t = rng.gen_range(-12..=12);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    let mut tagged: Vec<(Point, bool)> =
        ts.iter().map(|&t| (Point::from_ints(base.0 + t * dir.0, base.1 + t * dir.1), true)).collect();
    let on_line = |x: i64, y: i64| (x - base.0) * dir.1 - (y - base.1) * dir.0 == 0;
    while tagged.len() < n0 + d {
        let (x, y) = (rng.gen_range(-40..=40), rng.gen_range(-40..=40));
        let p = Point::from_ints(x, y);
        if !on_line(x, y) && tagged.iter().all(|(q, _)| *q != p) {
            tagged.push((p, false));
        }
    }
    tagged.shuffle(rng);
    let line: Vec<usize> = tagged.iter().enumerate().filter(|(_, t)| t.1).map(|(i, _)| i).collect();
    let set = PointSet::new(tagged.into_iter().map(|(p, _)| p).collect()).expect("distinct");
    (set, line)
}

/// `n - 1` points in strictly convex position and one point strictly inside
/// their hull, collinear with no two of them. Returns the set and the index of
/// the interior point.
pub fn convex_plus_one<R: Rng>(rng: &mut R, n: usize) -> (PointSet, usize) {
    assert!(n >= 4);
    loop {
        let ring = convex(rng, n - 1);
        let m = Point::new(rat(rng.gen_range(-30..=30), 61), rat(rng.gen_range(-30..=30), 67));
        let mut pts = ring.points().to_vec();
        let pos = rng.gen_range(0..=pts.len());
        pts.insert(pos, m);
        let set = PointSet::new(pts).expect("interior point is off the circle");
        let k = set.len();
        let collinear = (0..k).filter(|&i| i != pos).any(|i| {
            (i + 1..k).filter(|&j| j != pos).any(|j| set.orient(i, j, pos) == Orientation::Collinear)
        });
        let hull = convex_hull(&set);
        if !collinear && hull.len() == k - 1 && !hull.contains(&pos) {
            return (set, pos);
        }
    }
}

/// A simple polygon on `n` vertices in general position, counter-clockwise.
pub fn polygon<R: Rng>(rng: &mut R, n: usize) -> PointSet {
    assert!(n >= 3);
    loop {
        let cloud = general_position(rng, n, 3 * n as i64 + 6);
        // star-shaped around a random interior-ish center; ties in angle are rejected
        let center = Point::new(rat(rng.gen_range(-20..=20), 7), rat(rng.gen_range(-20..=20), 11));
        let mut pts = cloud.points().to_vec();
        if pts.contains(&center) {
            continue;
        }
        let half = |p: &Point| (p.y < center.y || (p.y == center.y && p.x < center.x)) as u8;
        pts.sort_by(|a, b| {
            half(a).cmp(&half(b)).then_with(|| match crate::geometry::orient(&center, a, b) {
                Orientation::Ccw => std::cmp::Ordering::Less,
                Orientation::Cw => std::cmp::Ordering::Greater,
                Orientation::Collinear => std::cmp::Ordering::Equal,
            })
        });
        if let Ok(poly) = PointSet::new(pts).and_then(SimplePolygon::new) {
            let verts = poly.vertices();
            let start = rng.gen_range(0..n);
            let order: Vec<usize> = (0..n).map(|i| (start + i) % n).collect();
            return verts.select(&order);
        }
    }
}

/// An x-monotone terrain with `n` vertices in general position.
pub fn terrain<R: Rng>(rng: &mut R, n: usize) -> PointSet {
    loop {
        let mut x = 0i64;
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            x += rng.gen_range(1..=4);
            pts.push(Point::from_ints(x, rng.gen_range(0..=12)));
        }
        let set = PointSet::new(pts).expect("x strictly increases");
        if set.in_general_position() {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..10 {
            let c = convex(&mut rng, n);
            assert_eq!(convex_hull(&c).len(), n);
            assert!(general_position(&mut rng, n, 20).in_general_position());
            let (p, line) = collinear_plus(&mut rng, n, 3);
            assert_eq!(line.len(), n);
            assert!(line.windows(3).all(|w| p.orient(w[0], w[1], w[2]) == Orientation::Collinear));
            let poly = polygon(&mut rng, n);
            assert!(SimplePolygon::new(poly).is_ok());
            let t = terrain(&mut rng, n);
            assert!(t.points().windows(2).all(|w| w[0].x < w[1].x));
        }
        for n in 4..10 {
            let (p, m) = convex_plus_one(&mut rng, n);
            let hull = convex_hull(&p);
            assert_eq!(hull.len(), n - 1);
            assert!(!hull.contains(&m));
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = convex(&mut ChaCha8Rng::seed_from_u64(11), 12);
        let b = convex(&mut ChaCha8Rng::seed_from_u64(11), 12);
        assert_eq!(a, b);
    }
}
