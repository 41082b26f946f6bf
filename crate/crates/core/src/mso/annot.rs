use std::collections::{BTreeMap, BTreeSet};

use super::parse::Signature;
use crate::error::MsoError;
use crate::geometry::{order_type, OrderType, PointSet};

/// An order type with named unary and binary annotation relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedStructure {
    order: OrderType,
    binary: BTreeMap<String, BTreeSet<(usize, usize)>>,
    unary: BTreeMap<String, BTreeSet<usize>>,
}

/// Relations read from an annotation file, not yet attached to a structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    pub binary: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub unary: BTreeMap<String, BTreeSet<usize>>,
}

fn known_arity(name: &str) -> Option<usize> {
    match name {
        "terredge" | "poledge" => Some(2),
        "canguard" => Some(1),
        _ => None,
    }
}

impl Annotations {
    /// Parses sections `[name]`, `[name/1]` or `[name/2]`, each followed by
    /// lines of one index (unary) or two indices (binary). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Annotations, MsoError> {
        let mut sections: Vec<(String, Option<usize>, Vec<Vec<usize>>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| MsoError::Annotation(format!("line {}: {m}", ln + 1));
            if let Some(head) = line.strip_prefix('[') {
                let head = head.strip_suffix(']').ok_or_else(|| err("unterminated section header".into()))?;
                let (name, arity) = match head.split_once('/') {
                    Some((name, a)) => match a.trim() {
                        "1" => (name.trim(), Some(1)),
                        "2" => (name.trim(), Some(2)),
                        other => return Err(err(format!("bad arity `{other}`"))),
                    },
                    None => (head.trim(), known_arity(head.trim())),
                };
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err(format!("bad relation name `{name}`")));
                }
                if let (Some(a), Some(k)) = (arity, known_arity(name)) {
                    if a != k {
                        return Err(err(format!("`{name}` has arity {k}")));
                    }
                }
                if sections.iter().any(|s| s.0 == name) {
                    return Err(err(format!("section `{name}` repeated")));
                }
                sections.push((name.to_string(), arity, Vec::new()));
                continue;
            }
            let section = sections.last_mut().ok_or_else(|| err("entry before any section header".into()))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad index `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() > 2 || section.1.is_some_and(|a| a != row.len()) {
                return Err(err(format!("wrong number of indices for `{}`", section.0)));
            }
            section.2.push(row);
        }
        let mut out = Annotations::default();
        for (name, arity, rows) in sections {
            let arity = match arity {
                Some(a) => a,
                None if !rows.is_empty() && rows.iter().all(|r| r.len() == 2) => 2,
                None => 1,
            };
            if rows.iter().any(|r| r.len() != arity) {
                return Err(MsoError::Annotation(format!("mixed arities in section `{name}`")));
            }
            if arity == 2 {
                out.binary.insert(name, rows.iter().map(|r| (r[0], r[1])).collect());
            } else {
                out.unary.insert(name, rows.iter().map(|r| r[0]).collect());
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, pairs) in &self.binary {
            s.push_str(&format!("[{name}/2]\n"));
            for (a, b) in pairs {
                s.push_str(&format!("{a} {b}\n"));
            }
        }
        for (name, set) in &self.unary {
            s.push_str(&format!("[{name}/1]\n"));
            for a in set {
                s.push_str(&format!("{a}\n"));
            }
        }
        s
    }
}

impl AnnotatedStructure {
    pub fn new(order: OrderType) -> AnnotatedStructure {
        AnnotatedStructure { order, binary: BTreeMap::new(), unary: BTreeMap::new() }
    }

    pub fn from_points(points: &PointSet) -> AnnotatedStructure {
        AnnotatedStructure::new(order_type(points))
    }

    /// Terrain structure: `terredge` joins consecutive vertices left to right
    /// and `canguard` holds the allowed guards (all vertices when `None`).
    pub fn terrain(points: &PointSet, canguard: Option<&[usize]>) -> Result<AnnotatedStructure, MsoError> {
        let n = points.len();
        if let Some(i) = (1..n).find(|&i| points.point(i - 1).x >= points.point(i).x) {
            return Err(MsoError::Annotation(format!("terrain vertex {i} is not strictly right of its predecessor")));
        }
        let guards: Vec<usize> = canguard.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
        AnnotatedStructure::from_points(points)
            .with_binary("terredge", (1..n).map(|i| (i - 1, i)))?
            .with_unary("canguard", guards)
    }

    /// Polygon structure: `poledge` joins each vertex to the next, cyclically.
    pub fn polygon(points: &PointSet) -> Result<AnnotatedStructure, MsoError> {
        let n = points.len();
        AnnotatedStructure::from_points(points).with_binary("poledge", (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn with_binary(
        mut self,
        name: &str,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<AnnotatedStructure, MsoError> {
        let n = self.n();
        let set: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(a, b)) = set.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(MsoError::Annotation(format!("pair ({a},{b}) of `{name}` is out of range for {n} points")));
        }
        match name {
            "poledge" => hamiltonian(n, &set, true).map_err(|m| MsoError::Annotation(format!("poledge: {m}")))?,
            "terredge" => hamiltonian(n, &set, false).map_err(|m| MsoError::Annotation(format!("terredge: {m}")))?,
            _ => {}
        }
        self.binary.insert(name.to_string(), set);
        Ok(self)
    }

    pub fn with_unary(
        mut self,
        name: &str,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<AnnotatedStructure, MsoError> {
        let n = self.n();
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&a) = set.iter().find(|&&a| a >= n) {
            return Err(MsoError::Annotation(format!("index {a} of `{name}` is out of range for {n} points")));
        }
        self.unary.insert(name.to_string(), set);
        Ok(self)
    }

    pub fn with_annotations(self, ann: &Annotations) -> Result<AnnotatedStructure, MsoError> {
        let mut s = self;
        for (name, pairs) in &ann.binary {
            s = s.with_binary(name, pairs.iter().copied())?;
        }
        for (name, set) in &ann.unary {
            s = s.with_unary(name, set.iter().copied())?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    pub fn order(&self) -> &OrderType {
        &self.order
    }

    pub fn binary(&self, name: &str) -> Option<&BTreeSet<(usize, usize)>> {
        self.binary.get(name)
    }

    pub fn unary(&self, name: &str) -> Option<&BTreeSet<usize>> {
        self.unary.get(name)
    }

    pub fn signature(&self) -> Signature {
        self.binary.keys().map(|k| (k.clone(), 2)).chain(self.unary.keys().map(|k| (k.clone(), 1))).collect()
    }

    /// The mirror image: same annotations, `ordccw` reflected.
    pub fn mirrored(&self) -> AnnotatedStructure {
        AnnotatedStructure { order: self.order.mirrored(), binary: self.binary.clone(), unary: self.unary.clone() }
    }
}

/// Checks that `pairs` is one directed Hamiltonian cycle (or path) on `0..n`.
fn hamiltonian(n: usize, pairs: &BTreeSet<(usize, usize)>, cycle: bool) -> Result<(), String> {
    let expected = if cycle { n } else { n.saturating_sub(1) };
    if pairs.len() != expected {
        return Err(format!("expected {expected} pairs, found {}", pairs.len()));
    }
    if n == 0 {
        return Ok(());
    }
    let mut succ = vec![None; n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in pairs {
        if a == b {
            return Err(format!("loop at {a}"));
        }
        if succ[a].replace(b).is_some() {
            return Err(format!("vertex {a} has two successors"));
        }
        indeg[b] += 1;
    }
    let start = if cycle {
        0
    } else {
        match (0..n).filter(|&v| indeg[v] == 0).collect::<Vec<_>>()[..] {
            [s] => s,
            _ => return Err("no unique start vertex".into()),
        }
    };
    let mut seen = vec![false; n];
    let mut v = start;
    for _ in 0..n {
        if seen[v] {
            return Err(format!("vertex {v} is revisited"));
        }
        seen[v] = true;
        match succ[v] {
            Some(w) => v = w,
            None => break,
        }
    }
    if seen.iter().all(|&s| s) && (!cycle || v == start) {
        Ok(())
    } else {
        Err("does not visit every vertex exactly once".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PointSet {
        PointSet::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn parse_sections() {
        let text = "# guards\n[terredge]\n0 1\n1 2\n[canguard]\n1\n[mark]\n0\n2\n[pairs]\n0 2\n[odd/1]\n";
        let a = Annotations::parse(text).unwrap();
        assert_eq!(a.binary["terredge"].len(), 2);
        assert_eq!(a.binary["pairs"].iter().copied().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(a.unary["mark"].len(), 2);
        assert!(a.unary["odd"].is_empty());
        assert_eq!(Annotations::parse(&a.to_text()).unwrap(), a);
        assert!(Annotations::parse("0 1\n").is_err());
        assert!(Annotations::parse("[terredge]\n0\n").is_err());
        assert!(Annotations::parse("[canguard/2]\n").is_err());
    }

    #[test]
    fn hamiltonian_checks() {
        let s = AnnotatedStructure::from_points(&square());
        assert!(s.clone().with_binary("poledge", [(0, 1), (1, 2), (2, 3), (3, 0)]).is_ok());
        assert!(s.clone().with_binary("poledge", [(0, 1), (1, 0), (2, 3), (3, 2)]).is_err());
        assert!(s.clone().with_binary("terredge", [(2, 1), (1, 0), (0, 3)]).is_ok());
        assert!(s.clone().with_binary("terredge", [(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(s.clone().with_binary("other", [(0, 7)]).is_err());
        assert!(AnnotatedStructure::polygon(&square()).is_ok());
    }

    #[test]
    fn terrain_requires_monotone_order() {
        let t = PointSet::from_ints(&[(0, 2), (1, 0), (2, 2)]).unwrap();
        let s = AnnotatedStructure::terrain(&t, None).unwrap();
        assert_eq!(s.unary("canguard").unwrap().len(), 3);
        assert_eq!(s.signature().get("terredge"), Some(&2));
        assert!(AnnotatedStructure::terrain(&square(), None).is_err());
    }
}
