use std::fmt;

/// Variables whose name starts with an uppercase letter range over sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Element,
    Set,
}

impl Sort {
    pub fn of(name: &str) -> Sort {
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            Sort::Set
        } else {
            Sort::Element
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    ForAll,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Bool(bool),
    Ordccw([String; 3]),
    /// An annotation relation of the structure.
    Rel(String, Vec<String>),
    Eq(String, String),
    In(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `within` restricts an element variable to members of a set, or a set
    /// variable to subsets of a set.
    Quant { q: Quantifier, var: String, within: Option<String>, body: Box<Formula> },
    Call(String, Vec<String>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Quant { .. } => true,
            Formula::Not(a) => a.has_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
            _ => false,
        }
    }

    /// Names of the macros called directly.
    pub fn calls(&self, out: &mut Vec<String>) {
        match self {
            Formula::Call(name, _) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Formula::Not(a) | Formula::Quant { body: a, .. } => a.calls(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.calls(out);
                b.calls(out);
            }
            _ => {}
        }
    }

    /// Annotation relation names used directly.
    pub fn relations(&self, out: &mut Vec<String>) {
        match self {
            Formula::Rel(name, _) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Formula::Not(a) | Formula::Quant { body: a, .. } => a.relations(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.relations(out);
                b.relations(out);
            }
            _ => {}
        }
    }

    /// Swaps the first two arguments of every `ordccw` atom.
    pub fn mirror_ordccw(&self) -> Formula {
        let m = |f: &Formula| Box::new(f.mirror_ordccw());
        match self {
            Formula::Ordccw([a, b, c]) => Formula::Ordccw([b.clone(), a.clone(), c.clone()]),
            Formula::Not(a) => Formula::Not(m(a)),
            Formula::And(a, b) => Formula::And(m(a), m(b)),
            Formula::Or(a, b) => Formula::Or(m(a), m(b)),
            Formula::Implies(a, b) => Formula::Implies(m(a), m(b)),
            Formula::Iff(a, b) => Formula::Iff(m(a), m(b)),
            Formula::Quant { q, var, within, body } => {
                Formula::Quant { q: *q, var: var.clone(), within: within.clone(), body: m(body) }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Ordccw([a, b, c]) => write!(f, "ordccw({a},{b},{c})"),
            Formula::Rel(name, args) | Formula::Call(name, args) => write!(f, "{name}({})", args.join(",")),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::In(a, b) => write!(f, "{a} in {b}"),
            Formula::Not(a) => match **a {
                Formula::Eq(..) | Formula::In(..) => write!(f, "!({a})"),
                _ => write!(f, "!{a}"),
            },
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Quant { q, var, within, body } => {
                let kw = match (q, Sort::of(var)) {
                    (Quantifier::Exists, Sort::Element) => "ex",
                    (Quantifier::ForAll, Sort::Element) => "all",
                    (Quantifier::Exists, Sort::Set) => "EX",
                    (Quantifier::ForAll, Sort::Set) => "ALL",
                };
                match within {
                    None => write!(f, "({kw} {var}. {body})"),
                    Some(w) if Sort::of(var) == Sort::Element => write!(f, "({kw} {var} in {w}. {body})"),
                    Some(w) => write!(f, "({kw} {var} sub {w}. {body})"),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro {
    pub name: String,
    pub params: Vec<String>,
    pub body: Formula,
}

/// A formula together with the macros it may call and its declared free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsoFormula {
    pub macros: Vec<Macro>,
    pub free: Vec<String>,
    pub body: Formula,
}

impl MsoFormula {
    pub fn free_sets(&self) -> Vec<&str> {
        self.free.iter().filter(|v| Sort::of(v) == Sort::Set).map(String::as_str).collect()
    }

    pub fn free_elements(&self) -> Vec<&str> {
        self.free.iter().filter(|v| Sort::of(v) == Sort::Element).map(String::as_str).collect()
    }

    pub fn macro_def(&self, name: &str) -> Option<&Macro> {
        self.macros.iter().find(|m| m.name == name)
    }

    /// Annotation relations used by the body or any macro reachable from it.
    pub fn used_relations(&self) -> Vec<String> {
        let mut rels = Vec::new();
        self.body.relations(&mut rels);
        for m in self.reachable_macros() {
            m.body.relations(&mut rels);
        }
        rels.sort();
        rels
    }

    /// Macros reachable from the body, callees before callers.
    pub fn reachable_macros(&self) -> Vec<&Macro> {
        let mut names = Vec::new();
        self.body.calls(&mut names);
        let mut i = 0;
        while i < names.len() {
            if let Some(m) = self.macro_def(&names[i]) {
                let mut more = Vec::new();
                m.body.calls(&mut more);
                for c in more {
                    if !names.contains(&c) {
                        names.push(c);
                    }
                }
            }
            i += 1;
        }
        self.macros.iter().filter(|m| names.contains(&m.name)).collect()
    }

    /// Drops macros the body cannot reach.
    pub fn pruned(&self) -> MsoFormula {
        let keep: Vec<Macro> = self.reachable_macros().into_iter().cloned().collect();
        MsoFormula { macros: keep, free: self.free.clone(), body: self.body.clone() }
    }

    pub fn mirror_ordccw(&self) -> MsoFormula {
        MsoFormula {
            macros: self
                .macros
                .iter()
                .map(|m| Macro { name: m.name.clone(), params: m.params.clone(), body: m.body.mirror_ordccw() })
                .collect(),
            free: self.free.clone(),
            body: self.body.mirror_ordccw(),
        }
    }
}

impl fmt::Display for MsoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.macros {
            writeln!(f, "def {}({}) := {};", m.name, m.params.join(","), m.body)?;
        }
        if !self.free.is_empty() {
            writeln!(f, "free {};", self.free.join(","))?;
        }
        write!(f, "{}", self.body)
    }
}
