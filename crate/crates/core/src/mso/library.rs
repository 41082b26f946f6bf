use super::ast::{Formula, MsoFormula};
use super::parse::{parse_with_macros, Signature};
use crate::error::MsoError;

const LIBRARY: &str = r"
def collin(x,y,z) := !ordccw(x,y,z) & !ordccw(y,x,z);
def triangle_contains(x1,x2,x3,y) :=
    (ordccw(x1,x2,x3) & ordccw(x1,x2,y) & ordccw(x2,x3,y) & ordccw(x3,x1,y))
  | (ordccw(x3,x2,x1) & ordccw(x2,x1,y) & ordccw(x3,x2,y) & ordccw(x1,x3,y));
def convhull(X,y) := y in X
  | ((ex x in X. ex x2 in X. !(x = x2))
     & (all x in X. all x2 in X. ((!(x = x2) & (all z in X. !ordccw(x2,x,z))) -> !ordccw(x2,x,y))));
def convhole(X) := (all y. (!(y in X) -> !convhull(X,y)))
  & (ALL Y sub X. all z in X. (convhull(Y,z) -> z in Y));
def genpos(X) := all x in X. all y in X. all z in X.
    ((!(x = y) & !(y = z) & !(z = x)) -> (ordccw(x,y,z) | ordccw(y,x,z)));
def hitting(H) := all x. all y. (!(x = y) -> (ex h in H. (h = x | h = y | collin(x,y,h))));
def hulledge(x,y) := !(x = y) & (all z. ((!(z = x) & !(z = y)) -> ordccw(x,y,z)));
def hullvertex(x) := ex y. (!(y = x) & hulledge(x,y));
def inner(x) := !hullvertex(x);
def gamma(x,y,m,n) := ex z. (!(z = x) & !(z = y) & collin(x,m,z) & collin(y,n,z));
def vert(x,y) := ex a. ex b. (inner(a) & inner(b) & !(a = b) & !(x = y) & gamma(x,y,a,b));
def gridedge(x,y) := grid(x) & grid(y) & !(x = y)
  & ((hulledge(x,y) & !rowend(x)) | (hulledge(y,x) & !rowend(y)) | vert(x,y) | vert(y,x));
def bdedge(Y,x,y) := x in Y & y in Y & !(x = y)
  & (all z. ((z in Y & !(z = x) & !(z = y)) -> ordccw(x,y,z)));
def ecross(x,x2,y,y2) :=
    ((ordccw(x,y,y2) & ordccw(x2,y2,y)) | (ordccw(x,y2,y) & ordccw(x2,y,y2)))
  & ((ordccw(y,x,x2) & ordccw(y2,x2,x)) | (ordccw(y,x2,x) & ordccw(y2,x,x2)));
def face(X) := convhole(X) & (ex a in X. ex b in X. ex c in X. (!(a = b) & !(b = c) & !(a = c)));
def compat(X,Y) := (ex x in X. !(x in Y)) & (ex y in Y. !(y in X))
  & (all x in X. all x2 in X. (bdedge(X,x,x2)
       -> (all y in Y. all y2 in Y. (bdedge(Y,y,y2) -> !ecross(x,x2,y,y2)))));
def tc_terredge(x,y) := ALL X. ((x in X & (all u. all v. ((u in X & terredge(u,v)) -> v in X))) -> y in X);
def nopeak(x,y,y2) :=
    (all z. ((terredge(y,y2) & tc_terredge(y2,z) & tc_terredge(z,x)) -> !ordccw(y2,x,z)))
  & (all z. ((terredge(y,y2) & tc_terredge(x,z) & tc_terredge(z,y)) -> !ordccw(x,y,z)));
def seguard(X) := all y. all y2. (terredge(y,y2) -> (ex x in X. (!ordccw(x,y2,y) & nopeak(x,y,y2))));
def guards(X) := seguard(X) & (all x in X. canguard(x));
def wedge(x,y) := ex x1. ex x2. (poledge(x1,x) & poledge(x,x2)
  & ((ordccw(x1,x,x2) & !ordccw(x,x1,y) & !ordccw(x,y,x2))
     | (!ordccw(x1,x,x2) & (!ordccw(x,x1,y) | !ordccw(x,y,x2)))));
def nocross(x,y) := all z1. all z2. (poledge(z1,z2) -> !ecross(x,y,z1,z2));
def eps(x,y) := !(x = y) & wedge(x,y) & nocross(x,y);
def visedge(x,y) := eps(x,y) & eps(y,x);
true
";

/// Names accepted by [`formula_library`].
pub const LIBRARY_NAMES: &[&str] = &[
    "collin",
    "triangle_contains",
    "convhull",
    "convhole",
    "genpos",
    "hitting",
    "hulledge",
    "gamma",
    "gridedge",
    "bdedge",
    "ecross",
    "face",
    "compat",
    "convpartition",
    "partition",
    "tc_terredge",
    "nopeak",
    "seguard",
    "guards",
    "visedge",
];

fn library_signature() -> Signature {
    [("terredge", 2), ("poledge", 2), ("canguard", 1), ("grid", 1), ("rowend", 1)]
        .into_iter()
        .map(|(k, a)| (k.to_string(), a))
        .collect()
}

/// The library definitions, usable as macros by user formulas.
pub fn library_macros() -> Vec<super::ast::Macro> {
    parse_with_macros(LIBRARY, &library_signature(), Vec::new()).expect("library parses").macros
}

fn with_library(text: &str) -> MsoFormula {
    parse_with_macros(text, &library_signature(), library_macros()).expect("library formula parses").pruned()
}

/// A library formula with its parameters free. `k` is the number of faces for
/// `convpartition` and `partition`, and is ignored otherwise.
pub fn formula_library(name: &str, k: Option<usize>) -> Result<MsoFormula, MsoError> {
    match name {
        "convpartition" => {
            return convpartition(k.ok_or_else(|| MsoError::UnknownFormula("convpartition needs k".into()))?)
        }
        "partition" => {
            return partition_sentence(k.ok_or_else(|| MsoError::UnknownFormula("partition needs k".into()))?)
        }
        _ => {}
    }
    let macros = library_macros();
    let m = macros
        .iter()
        .find(|m| m.name == name && LIBRARY_NAMES.contains(&name))
        .ok_or_else(|| MsoError::UnknownFormula(name.to_string()))?;
    let formula = MsoFormula {
        macros: macros.clone(),
        free: m.params.clone(),
        body: Formula::Call(m.name.clone(), m.params.clone()),
    };
    Ok(formula.pruned())
}

fn set_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("X{i}")).collect()
}

/// Every boundary edge of each face is a hull edge of the whole set or the
/// reverse of a boundary edge of exactly one other face, and not both.
fn edges_text(xs: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, xi) in xs.iter().enumerate() {
        let mut options = vec!["hulledge(x,y)".to_string()];
        options.extend(xs.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, xl)| format!("bdedge({xl},y,x)")));
        let any = options.join(" | ");
        let mut exclusive = Vec::new();
        for a in 0..options.len() {
            for b in a + 1..options.len() {
                exclusive.push(format!("!({} & {})", options[a], options[b]));
            }
        }
        let exactly = if exclusive.is_empty() { format!("({any})") } else { format!("({any}) & {}", exclusive.join(" & ")) };
        parts.push(format!("(all x in {xi}. all y in {xi}. (bdedge({xi},x,y) -> ({exactly})))"));
    }
    parts.join(" & ")
}

fn pairwise_compat(xs: &[String], upto: usize) -> Vec<String> {
    (0..upto).map(|i| format!("compat({},{})", xs[i], xs[upto])).collect()
}

/// The partition conditions on `k` face variables `X1 .. Xk`, left free.
pub fn convpartition(k: usize) -> Result<MsoFormula, MsoError> {
    if !(1..=6).contains(&k) {
        return Err(MsoError::UnknownFormula(format!("convpartition needs 1 <= k <= 6, got {k}")));
    }
    let xs = set_names(k);
    let mut conj: Vec<String> = (1..k).flat_map(|j| pairwise_compat(&xs, j)).collect();
    conj.push(edges_text(&xs));
    Ok(with_library(&format!("free {};\n{}", xs.join(","), conj.join(" & "))))
}

/// Closed sentence: some `k` faces satisfy the partition conditions. Each
/// face is checked against the earlier ones as soon as it is chosen.
pub fn partition_sentence(k: usize) -> Result<MsoFormula, MsoError> {
    if !(1..=6).contains(&k) {
        return Err(MsoError::UnknownFormula(format!("partition needs 1 <= k <= 6, got {k}")));
    }
    let xs = set_names(k);
    let mut text = edges_text(&xs);
    for j in (0..k).rev() {
        let mut conj = vec![format!("face({})", xs[j])];
        conj.extend(pairwise_compat(&xs, j));
        conj.push(format!("({text})"));
        text = format!("EX {}. ({})", xs[j], conj.join(" & "));
    }
    Ok(with_library(&text))
}
