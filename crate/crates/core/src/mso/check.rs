//! Exhaustive model checking. Element quantifiers range over all points and
//! set quantifiers over all subsets, encoded as `u64` masks.
//!
//! Quantifier-free macros are inlined. Macros with quantifiers become separate
//! units whose results are memoized on their arguments. A set quantifier whose
//! body starts with a one-parameter set macro, as in `EX X. (m(X) & ...)` or
//! `ALL X. (m(X) -> ...)`, only visits the cached subsets satisfying `m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::annot::AnnotatedStructure;
use super::ast::{Formula, Macro, MsoFormula, Quantifier, Sort};
use crate::error::MsoError;

/// Largest structure on which set quantifiers are evaluated.
pub const SET_QUANTIFIER_CAP: usize = 20;
const MAX_UNIT_PARAMS: usize = 8;
const MEMO_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Elem(u16),
    Set(u16),
}

#[derive(Debug)]
enum Node {
    Const(bool),
    Ord(u16, u16, u16),
    Rel1(usize, u16),
    Rel2(usize, u16, u16),
    Eq(u16, u16),
    In(u16, u16),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Elem { exists: bool, slot: u16, within: Option<u16>, body: Box<Node> },
    Set { exists: bool, slot: u16, within: Option<u16>, filter: Option<usize>, body: Box<Node> },
    Call { unit: usize, args: Vec<Var> },
}

#[derive(Debug)]
struct Unit {
    params: Vec<Var>,
    elem_names: Vec<String>,
    set_names: Vec<String>,
    body: Node,
}

#[derive(Default)]
struct UnitBuilder {
    elem_names: Vec<String>,
    set_names: Vec<String>,
}

impl UnitBuilder {
    fn alloc(&mut self, name: &str) -> Var {
        match Sort::of(name) {
            Sort::Element => {
                self.elem_names.push(name.to_string());
                Var::Elem((self.elem_names.len() - 1) as u16)
            }
            Sort::Set => {
                self.set_names.push(name.to_string());
                Var::Set((self.set_names.len() - 1) as u16)
            }
        }
    }
}

struct Compiler<'a> {
    formula: &'a MsoFormula,
    rel1: &'a HashMap<&'a str, usize>,
    rel2: &'a HashMap<&'a str, usize>,
    units: Vec<Option<Unit>>,
    unit_of: HashMap<String, usize>,
    set_quantified: bool,
}

type Scope = Vec<(String, Var)>;

fn lookup(scope: &Scope, name: &str) -> Result<Var, MsoError> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, v)| *v).ok_or_else(|| MsoError::Unbound(name.to_string()))
}

fn elem(scope: &Scope, name: &str) -> Result<u16, MsoError> {
    match lookup(scope, name)? {
        Var::Elem(s) => Ok(s),
        Var::Set(_) => Err(MsoError::Sort(name.to_string())),
    }
}

fn set(scope: &Scope, name: &str) -> Result<u16, MsoError> {
    match lookup(scope, name)? {
        Var::Set(s) => Ok(s),
        Var::Elem(_) => Err(MsoError::Sort(name.to_string())),
    }
}

impl<'a> Compiler<'a> {
    fn macro_def(&self, name: &str) -> Result<&'a Macro, MsoError> {
        self.formula.macro_def(name).ok_or_else(|| MsoError::UnknownSymbol(name.to_string()))
    }

    fn unit(&mut self, name: &str) -> Result<usize, MsoError> {
        if let Some(&u) = self.unit_of.get(name) {
            return Ok(u);
        }
        let m = self.macro_def(name)?;
        let id = self.units.len();
        self.units.push(None);
        self.unit_of.insert(name.to_string(), id);
        let mut ub = UnitBuilder::default();
        let mut scope = Scope::new();
        let mut params = Vec::new();
        for p in &m.params {
            let v = ub.alloc(p);
            params.push(v);
            scope.push((p.clone(), v));
        }
        let body = self.compile(&m.body, &mut scope, &mut ub)?;
        self.units[id] = Some(Unit { params, elem_names: ub.elem_names, set_names: ub.set_names, body });
        Ok(id)
    }

    /// Splits a leading one-parameter set macro applied to `var` off a conjunction.
    fn strip_filter(&self, f: &Formula, var: &str) -> Option<(String, Formula)> {
        match f {
            Formula::Call(name, args) if args.len() == 1 && args[0] == var => {
                let m = self.formula.macro_def(name)?;
                (Sort::of(&m.params[0]) == Sort::Set).then(|| (name.clone(), Formula::Bool(true)))
            }
            Formula::And(a, b) => {
                let (m, rest) = self.strip_filter(a, var)?;
                Some((m, if rest == Formula::Bool(true) { (**b).clone() } else { Formula::and(rest, (**b).clone()) }))
            }
            _ => None,
        }
    }

    fn compile(&mut self, f: &Formula, scope: &mut Scope, ub: &mut UnitBuilder) -> Result<Node, MsoError> {
        let bx = |n: Node| Box::new(n);
        Ok(match f {
            Formula::Bool(b) => Node::Const(*b),
            Formula::Ordccw([a, b, c]) => Node::Ord(elem(scope, a)?, elem(scope, b)?, elem(scope, c)?),
            Formula::Rel(name, args) => {
                let missing = || MsoError::UnknownSymbol(name.clone());
                match args.len() {
                    1 => Node::Rel1(*self.rel1.get(name.as_str()).ok_or_else(missing)?, elem(scope, &args[0])?),
                    2 => Node::Rel2(
                        *self.rel2.get(name.as_str()).ok_or_else(missing)?,
                        elem(scope, &args[0])?,
                        elem(scope, &args[1])?,
                    ),
                    got => {
                        let expected = if self.rel1.contains_key(name.as_str()) { 1 } else { 2 };
                        return Err(MsoError::Arity { name: name.clone(), expected, got });
                    }
                }
            }
            Formula::Eq(a, b) => Node::Eq(elem(scope, a)?, elem(scope, b)?),
            Formula::In(a, b) => Node::In(elem(scope, a)?, set(scope, b)?),
            Formula::Not(a) => Node::Not(bx(self.compile(a, scope, ub)?)),
            Formula::And(a, b) => Node::And(bx(self.compile(a, scope, ub)?), bx(self.compile(b, scope, ub)?)),
            Formula::Or(a, b) => Node::Or(bx(self.compile(a, scope, ub)?), bx(self.compile(b, scope, ub)?)),
            Formula::Implies(a, b) => Node::Implies(bx(self.compile(a, scope, ub)?), bx(self.compile(b, scope, ub)?)),
            Formula::Iff(a, b) => Node::Iff(bx(self.compile(a, scope, ub)?), bx(self.compile(b, scope, ub)?)),
            Formula::Quant { q, var, within, body } => {
                let within = within.as_deref().map(|w| set(scope, w)).transpose()?;
                let exists = *q == Quantifier::Exists;
                let slot = ub.alloc(var);
                let (filter, body) = match slot {
                    Var::Set(_) => {
                        self.set_quantified = true;
                        let split = if exists {
                            self.strip_filter(body, var)
                        } else if let Formula::Implies(a, b) = &**body {
                            self.strip_filter(a, var).map(|(m, rest)| {
                                let f = if rest == Formula::Bool(true) {
                                    (**b).clone()
                                } else {
                                    Formula::Implies(Box::new(rest), b.clone())
                                };
                                (m, f)
                            })
                        } else {
                            None
                        };
                        match split {
                            Some((m, rest)) => (Some(self.unit(&m)?), rest),
                            None => (None, (**body).clone()),
                        }
                    }
                    Var::Elem(_) => (None, (**body).clone()),
                };
                scope.push((var.clone(), slot));
                let body = bx(self.compile(&body, scope, ub)?);
                scope.pop();
                match slot {
                    Var::Elem(slot) => Node::Elem { exists, slot, within, body },
                    Var::Set(slot) => Node::Set { exists, slot, within, filter, body },
                }
            }
            Formula::Call(name, args) => {
                let m = self.macro_def(name)?;
                if args.len() != m.params.len() {
                    return Err(MsoError::Arity { name: name.clone(), expected: m.params.len(), got: args.len() });
                }
                let mut vars = Vec::with_capacity(args.len());
                for (a, p) in args.iter().zip(&m.params) {
                    let v = lookup(scope, a)?;
                    if matches!(v, Var::Set(_)) != (Sort::of(p) == Sort::Set) {
                        return Err(MsoError::Sort(a.clone()));
                    }
                    vars.push(v);
                }
                if m.body.has_quantifier() && m.params.len() <= MAX_UNIT_PARAMS {
                    Node::Call { unit: self.unit(name)?, args: vars }
                } else {
                    // bodies only mention their parameters, so a fresh scope is exact
                    let mut inner: Scope = m.params.iter().cloned().zip(vars).collect();
                    self.compile(&m.body, &mut inner, ub)?
                }
            }
        })
    }
}

/// A formula compiled against one structure.
#[derive(Debug)]
struct Compiled {
    units: Vec<Unit>,
    main: usize,
    free: Vec<(String, Var)>,
    rel1: Vec<Vec<bool>>,
    rel2: Vec<Vec<bool>>,
    set_quantified: bool,
}

fn compile(s: &AnnotatedStructure, f: &MsoFormula) -> Result<Compiled, MsoError> {
    let sig = s.signature();
    let names1: Vec<&str> = sig.iter().filter(|(_, &a)| a == 1).map(|(k, _)| k.as_str()).collect();
    let names2: Vec<&str> = sig.iter().filter(|(_, &a)| a == 2).map(|(k, _)| k.as_str()).collect();
    let rel1: HashMap<&str, usize> = names1.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let rel2: HashMap<&str, usize> = names2.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let n = s.n();
    let table1: Vec<Vec<bool>> = names1
        .iter()
        .map(|k| {
            let mut t = vec![false; n];
            for &i in s.unary(k).expect("listed in the signature") {
                t[i] = true;
            }
            t
        })
        .collect();
    let table2: Vec<Vec<bool>> = names2
        .iter()
        .map(|k| {
            let mut t = vec![false; n * n];
            for &(a, b) in s.binary(k).expect("listed in the signature") {
                t[a * n + b] = true;
            }
            t
        })
        .collect();
    let mut c = Compiler {
        formula: f,
        rel1: &rel1,
        rel2: &rel2,
        units: Vec::new(),
        unit_of: HashMap::new(),
        set_quantified: false,
    };
    let mut ub = UnitBuilder::default();
    let mut scope = Scope::new();
    let mut free = Vec::new();
    for v in &f.free {
        let slot = ub.alloc(v);
        scope.push((v.clone(), slot));
        free.push((v.clone(), slot));
    }
    let body = c.compile(&f.body, &mut scope, &mut ub)?;
    let main = c.units.len();
    let params = free.iter().map(|(_, v)| *v).collect();
    c.units.push(Some(Unit { params, elem_names: ub.elem_names, set_names: ub.set_names, body }));
    let set_quantified = c.set_quantified;
    Ok(Compiled {
        units: c.units.into_iter().map(|u| u.expect("every unit is finished")).collect(),
        main,
        free,
        rel1: table1,
        rel2: table2,
        set_quantified,
    })
}

/// Values for free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub elements: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, BTreeSet<usize>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn element(mut self, name: &str, index: usize) -> Assignment {
        self.elements.insert(name.to_string(), index);
        self
    }

    pub fn set(mut self, name: &str, members: impl IntoIterator<Item = usize>) -> Assignment {
        self.sets.insert(name.to_string(), members.into_iter().collect());
        self
    }
}

/// Memo table for macro units; valid for one compiled formula and structure.
#[derive(Default)]
struct Memo(FxHashMap<(u32, [u64; MAX_UNIT_PARAMS]), bool>);

struct Frame {
    e: Vec<usize>,
    s: Vec<u64>,
}

impl Frame {
    fn for_unit(u: &Unit) -> Frame {
        Frame { e: vec![0; u.elem_names.len()], s: vec![0; u.set_names.len()] }
    }
}

/// Iterates the submasks of `w` in increasing numeric order.
fn submasks(w: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let s = next?;
        next = if s == w { None } else { Some(s.wrapping_sub(w) & w) };
        Some(s)
    })
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

fn mask_of(set: &BTreeSet<usize>) -> u64 {
    set.iter().fold(0u64, |m, &i| m | (1 << i))
}

fn indices_of(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// A formula bound to a structure, ready for repeated evaluation.
pub struct Checker<'a> {
    s: &'a AnnotatedStructure,
    c: Compiled,
    n: usize,
    all: u64,
    candidates: Vec<OnceLock<Vec<u64>>>,
}

impl<'a> Checker<'a> {
    pub fn new(s: &'a AnnotatedStructure, f: &MsoFormula) -> Result<Checker<'a>, MsoError> {
        let n = s.n();
        let c = compile(s, f)?;
        if c.set_quantified && n > SET_QUANTIFIER_CAP {
            return Err(MsoError::TooLarge(n, SET_QUANTIFIER_CAP));
        }
        if n > 64 && c.free.iter().any(|(_, v)| matches!(v, Var::Set(_))) {
            return Err(MsoError::TooLarge(n, 64));
        }
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let candidates = (0..c.units.len()).map(|_| OnceLock::new()).collect();
        Ok(Checker { s, c, n, all, candidates })
    }

    pub fn free_variables(&self) -> Vec<&str> {
        self.c.free.iter().map(|(n, _)| n.as_str()).collect()
    }

    fn frame(&self, a: &Assignment) -> Result<Frame, MsoError> {
        let mut fr = Frame::for_unit(&self.c.units[self.c.main]);
        for (name, v) in &self.c.free {
            match *v {
                Var::Elem(slot) => {
                    let &i = a.elements.get(name).ok_or_else(|| MsoError::MissingBinding(name.clone()))?;
                    if i >= self.n {
                        return Err(MsoError::Annotation(format!("`{name}` is bound to {i}, out of range")));
                    }
                    fr.e[slot as usize] = i;
                }
                Var::Set(slot) => {
                    let set = a.sets.get(name).ok_or_else(|| MsoError::MissingBinding(name.clone()))?;
                    if let Some(&i) = set.iter().find(|&&i| i >= self.n) {
                        return Err(MsoError::Annotation(format!("`{name}` contains {i}, out of range")));
                    }
                    fr.s[slot as usize] = mask_of(set);
                }
            }
        }
        Ok(fr)
    }

    /// Truth under an assignment of the free variables.
    pub fn eval(&self, a: &Assignment) -> Result<bool, MsoError> {
        let mut fr = self.frame(a)?;
        Ok(self.node(&self.c.units[self.c.main].body, &mut fr, &mut Memo::default()))
    }

    /// Evaluates many assignments given positionally (elements as indices,
    /// sets as masks, in declaration order of the free variables), sharing one memo.
    pub fn eval_many(&self, values: impl IntoIterator<Item = Vec<u64>>) -> Vec<bool> {
        let mut memo = Memo::default();
        let main = &self.c.units[self.c.main];
        values
            .into_iter()
            .map(|vals| {
                let mut fr = Frame::for_unit(main);
                for ((_, v), x) in self.c.free.iter().zip(vals) {
                    match *v {
                        Var::Elem(s) => fr.e[s as usize] = x as usize,
                        Var::Set(s) => fr.s[s as usize] = x,
                    }
                }
                self.node(&main.body, &mut fr, &mut memo)
            })
            .collect()
    }

    fn with_set(&self, memo: &mut Memo, mask: u64) -> bool {
        let main = &self.c.units[self.c.main];
        let mut fr = Frame::for_unit(main);
        if let Some((_, Var::Set(s))) = self.c.free.first() {
            fr.s[*s as usize] = mask;
        }
        self.node(&main.body, &mut fr, memo)
    }

    fn call(&self, unit: usize, args: &[Var], fr: &Frame, memo: &mut Memo) -> bool {
        let mut key = [0u64; MAX_UNIT_PARAMS];
        for (k, a) in key.iter_mut().zip(args) {
            *k = match *a {
                Var::Elem(s) => fr.e[s as usize] as u64,
                Var::Set(s) => fr.s[s as usize],
            };
        }
        if let Some(&r) = memo.0.get(&(unit as u32, key)) {
            return r;
        }
        let u = &self.c.units[unit];
        let mut inner = Frame::for_unit(u);
        for (p, &k) in u.params.iter().zip(&key) {
            match *p {
                Var::Elem(s) => inner.e[s as usize] = k as usize,
                Var::Set(s) => inner.s[s as usize] = k,
            }
        }
        let r = self.node(&u.body, &mut inner, memo);
        if memo.0.len() >= MEMO_LIMIT {
            memo.0.clear();
        }
        memo.0.insert((unit as u32, key), r);
        r
    }

    /// Subsets satisfying a one-parameter set macro, in increasing mask order.
    fn candidates(&self, unit: usize) -> &[u64] {
        self.candidates[unit].get_or_init(|| {
            let mut memo = Memo::default();
            let u = &self.c.units[unit];
            let Var::Set(slot) = u.params[0] else { unreachable!("filters take one set") };
            submasks(self.all)
                .filter(|&m| {
                    let mut fr = Frame::for_unit(u);
                    fr.s[slot as usize] = m;
                    self.node(&u.body, &mut fr, &mut memo)
                })
                .collect()
        })
    }

    fn set_domain(&self, within: Option<u16>, filter: Option<usize>, fr: &Frame) -> Vec<u64> {
        let w = within.map_or(self.all, |w| fr.s[w as usize]);
        match filter {
            Some(u) => self.candidates(u).iter().copied().filter(|&m| m & !w == 0).collect(),
            None => submasks(w).collect(),
        }
    }

    fn node(&self, node: &Node, fr: &mut Frame, memo: &mut Memo) -> bool {
        match node {
            Node::Const(b) => *b,
            Node::Ord(a, b, c) => {
                self.s.order().contains(fr.e[*a as usize], fr.e[*b as usize], fr.e[*c as usize])
            }
            Node::Rel1(r, a) => self.c.rel1[*r][fr.e[*a as usize]],
            Node::Rel2(r, a, b) => self.c.rel2[*r][fr.e[*a as usize] * self.n + fr.e[*b as usize]],
            Node::Eq(a, b) => fr.e[*a as usize] == fr.e[*b as usize],
            Node::In(a, x) => fr.s[*x as usize] >> fr.e[*a as usize] & 1 == 1,
            Node::Not(a) => !self.node(a, fr, memo),
            Node::And(a, b) => self.node(a, fr, memo) && self.node(b, fr, memo),
            Node::Or(a, b) => self.node(a, fr, memo) || self.node(b, fr, memo),
            Node::Implies(a, b) => !self.node(a, fr, memo) || self.node(b, fr, memo),
            Node::Iff(a, b) => self.node(a, fr, memo) == self.node(b, fr, memo),
            Node::Elem { exists, slot, within, body } => {
                let dom = within.map_or(self.all, |w| fr.s[w as usize]);
                for v in bits(dom) {
                    fr.e[*slot as usize] = v;
                    if self.node(body, fr, memo) == *exists {
                        return *exists;
                    }
                }
                !*exists
            }
            Node::Set { exists, slot, within, filter, body } => {
                for m in self.set_domain(*within, *filter, fr) {
                    fr.s[*slot as usize] = m;
                    if self.node(body, fr, memo) == *exists {
                        return *exists;
                    }
                }
                !*exists
            }
            Node::Call { unit, args } => self.call(*unit, args, fr, memo),
        }
    }

    /// Records existential choices along the positive paths of a true formula.
    fn witness(&self, node: &Node, fr: &mut Frame, memo: &mut Memo, out: &mut Assignment) {
        let main = &self.c.units[self.c.main];
        match node {
            Node::And(a, b) => {
                self.witness(a, fr, memo, out);
                self.witness(b, fr, memo, out);
            }
            Node::Or(a, b) => {
                if self.node(a, fr, memo) {
                    self.witness(a, fr, memo, out)
                } else {
                    self.witness(b, fr, memo, out)
                }
            }
            Node::Elem { exists: true, slot, within, body } => {
                let dom = within.map_or(self.all, |w| fr.s[w as usize]);
                for v in bits(dom) {
                    fr.e[*slot as usize] = v;
                    if self.node(body, fr, memo) {
                        out.elements.insert(main.elem_names[*slot as usize].clone(), v);
                        self.witness(body, fr, memo, out);
                        return;
                    }
                }
            }
            Node::Set { exists: true, slot, within, filter, body } => {
                for m in self.set_domain(*within, *filter, fr) {
                    fr.s[*slot as usize] = m;
                    if self.node(body, fr, memo) {
                        out.sets.insert(main.set_names[*slot as usize].clone(), bits(m).collect());
                        self.witness(body, fr, memo, out);
                        return;
                    }
                }
            }
            _ => {}
        }
    }

    fn single_free_set(&self) -> Result<(), MsoError> {
        let sets = self.c.free.iter().filter(|(_, v)| matches!(v, Var::Set(_))).count();
        if sets != 1 {
            return Err(MsoError::FreeSets(sets));
        }
        if let Some((name, _)) = self.c.free.iter().find(|(_, v)| matches!(v, Var::Elem(_))) {
            return Err(MsoError::MissingBinding(name.clone()));
        }
        Ok(())
    }

    /// Best satisfying set for the single free set variable, least in
    /// lexicographic index order among optima.
    pub fn optimize(&self, direction: Direction) -> Result<Option<(Vec<usize>, usize)>, MsoError> {
        self.single_free_set()?;
        let n = self.n;
        let sizes: Vec<usize> = match direction {
            Direction::Min => (0..=n).collect(),
            Direction::Max => (0..=n).rev().collect(),
        };
        for k in sizes {
            for chunk in &(0..n).combinations(k).chunks(1 << 14) {
                let masks: Vec<u64> = chunk.map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
                let hit = masks
                    .par_iter()
                    .map_init(Memo::default, |memo, &m| (m, self.with_set(memo, m)))
                    .find_first(|&(_, ok)| ok);
                if let Some((m, _)) = hit {
                    return Ok(Some((indices_of(m), k)));
                }
            }
        }
        Ok(None)
    }

    /// All satisfying sets, ordered by size and then lexicographically.
    pub fn enumerate(&self) -> Result<Vec<Vec<usize>>, MsoError> {
        self.single_free_set()?;
        let n = self.n;
        if n > SET_QUANTIFIER_CAP {
            return Err(MsoError::TooLarge(n, SET_QUANTIFIER_CAP));
        }
        let mut out = Vec::new();
        for k in 0..=n {
            let masks: Vec<u64> = (0..n).combinations(k).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
            let keep: Vec<bool> =
                masks.par_iter().map_init(Memo::default, |memo, &m| self.with_set(memo, m)).collect();
            out.extend(masks.iter().zip(keep).filter(|(_, k)| *k).map(|(&m, _)| indices_of(m)));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Truth of a closed formula.
pub fn check(s: &AnnotatedStructure, f: &MsoFormula) -> Result<bool, MsoError> {
    if let Some(v) = f.free.first() {
        return Err(MsoError::MissingBinding(v.clone()));
    }
    Checker::new(s, f)?.eval(&Assignment::new())
}

/// Truth under an assignment covering the free variables.
pub fn eval_free(s: &AnnotatedStructure, f: &MsoFormula, a: &Assignment) -> Result<bool, MsoError> {
    Checker::new(s, f)?.eval(a)
}

/// For a true formula, the existential choices made along its positive paths.
pub fn check_with_witness(
    s: &AnnotatedStructure,
    f: &MsoFormula,
    a: &Assignment,
) -> Result<Option<Assignment>, MsoError> {
    let c = Checker::new(s, f)?;
    let mut fr = c.frame(a)?;
    let mut memo = Memo::default();
    let body = &c.c.units[c.c.main].body;
    if !c.node(body, &mut fr, &mut memo) {
        return Ok(None);
    }
    let mut out = Assignment::new();
    c.witness(body, &mut fr, &mut memo, &mut out);
    Ok(Some(out))
}

pub fn optimize(
    s: &AnnotatedStructure,
    f: &MsoFormula,
    direction: Direction,
) -> Result<Option<(Vec<usize>, usize)>, MsoError> {
    Checker::new(s, f)?.optimize(direction)
}

pub fn enumerate(s: &AnnotatedStructure, f: &MsoFormula) -> Result<Vec<Vec<usize>>, MsoError> {
    Checker::new(s, f)?.enumerate()
}
