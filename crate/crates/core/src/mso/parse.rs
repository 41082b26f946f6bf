use std::collections::BTreeMap;

use super::ast::{Formula, Macro, MsoFormula, Quantifier, Sort};
use crate::error::MsoError;

/// Annotation relation names and arities available to a formula.
pub type Signature = BTreeMap<String, usize>;

const KEYWORDS: &[&str] = &["all", "ex", "ALL", "EX", "def", "free", "in", "sub", "distinct", "true", "false", "ordccw"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: &[&str] = &["<->", ":=", "->", "!=", "(", ")", ",", ".", ";", "!", "&", "|", "="];

fn lex(text: &str) -> Result<Vec<Spanned>, MsoError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut i = 0;
        let bytes = line.as_bytes();
        while i < bytes.len() {
            let c = bytes[i] as char;
            let (l, column) = (li + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(line[start..i].to_string()), line: l, column });
                continue;
            }
            match SYMBOLS.iter().find(|s| line[i..].starts_with(**s)) {
                Some(s) => {
                    out.push(Spanned { tok: Tok::Sym(s), line: l, column });
                    i += s.len();
                }
                None => {
                    return Err(MsoError::Syntax { line: l, column, message: format!("unexpected character `{c}`") })
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    signature: &'a Signature,
    macros: Vec<Macro>,
    scope: Vec<String>,
}

/// Parses a formula file: `def name(params) := formula;` definitions, an
/// optional `free v, ...;` declaration, then the formula itself.
pub fn parse_formula(text: &str, signature: &Signature) -> Result<MsoFormula, MsoError> {
    parse_with_macros(text, signature, Vec::new())
}

/// As [`parse_formula`], with `macros` already defined.
pub fn parse_with_macros(text: &str, signature: &Signature, macros: Vec<Macro>) -> Result<MsoFormula, MsoError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, signature, macros, scope: Vec::new() };
    let mut free = Vec::new();
    loop {
        if p.peek_ident("def") {
            p.pos += 1;
            p.definition()?;
        } else if p.peek_ident("free") {
            p.pos += 1;
            loop {
                let v = p.variable()?;
                if !free.contains(&v) {
                    free.push(v);
                }
                if !p.eat(",") {
                    break;
                }
            }
            p.expect(";")?;
        } else {
            break;
        }
    }
    p.scope = free.clone();
    let body = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected input after the formula"));
    }
    Ok(MsoFormula { macros: p.macros, free, body })
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> MsoError {
        let (line, column) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        };
        MsoError::Syntax { line, column, message: message.into() }
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Spanned { tok: Tok::Sym(t), .. }) if *t == s)
    }

    fn peek_ident(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Spanned { tok: Tok::Ident(t), .. }) if t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), MsoError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, MsoError> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    fn variable(&mut self) -> Result<String, MsoError> {
        let v = self.ident()?;
        if KEYWORDS.contains(&v.as_str()) || v.starts_with(|c: char| c.is_ascii_digit()) {
            self.pos -= 1;
            return Err(self.error(format!("`{v}` cannot be a variable")));
        }
        Ok(v)
    }

    fn bound(&self, v: &str) -> Result<(), MsoError> {
        if self.scope.iter().any(|s| s == v) {
            Ok(())
        } else {
            Err(MsoError::Unbound(v.to_string()))
        }
    }

    fn element(&self, v: &str) -> Result<(), MsoError> {
        self.bound(v)?;
        if Sort::of(v) != Sort::Element {
            return Err(MsoError::Sort(v.to_string()));
        }
        Ok(())
    }

    fn set(&self, v: &str) -> Result<(), MsoError> {
        self.bound(v)?;
        if Sort::of(v) != Sort::Set {
            return Err(MsoError::Sort(v.to_string()));
        }
        Ok(())
    }

    fn definition(&mut self) -> Result<(), MsoError> {
        let name = self.variable()?;
        if self.macros.iter().any(|m| m.name == name) {
            return Err(MsoError::DuplicateMacro(name));
        }
        if self.signature.contains_key(&name) {
            return Err(MsoError::DuplicateMacro(name));
        }
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.peek_sym(")") {
            loop {
                params.push(self.variable()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        self.expect(":=")?;
        self.scope = params.clone();
        let body = self.formula()?;
        self.expect(";")?;
        self.scope.clear();
        self.macros.push(Macro { name, params, body });
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula, MsoError> {
        let lhs = self.implication()?;
        if self.eat("<->") {
            let rhs = self.formula()?;
            return Ok(Formula::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, MsoError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, MsoError> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            let rhs = self.conjunction()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, MsoError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, MsoError> {
        if self.eat("!") {
            return Ok(Formula::negate(self.unary()?));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        for (kw, q) in [("ex", Quantifier::Exists), ("all", Quantifier::ForAll), ("EX", Quantifier::Exists), ("ALL", Quantifier::ForAll)] {
            if self.peek_ident(kw) {
                self.pos += 1;
                let sort = if kw.starts_with(|c: char| c.is_ascii_uppercase()) { Sort::Set } else { Sort::Element };
                return self.quantified(q, sort);
            }
        }
        self.atom()
    }

    fn quantified(&mut self, q: Quantifier, sort: Sort) -> Result<Formula, MsoError> {
        let mut vars = Vec::new();
        loop {
            let v = self.variable()?;
            if Sort::of(&v) != sort {
                return Err(MsoError::Sort(v));
            }
            vars.push(v);
            if !self.eat(",") {
                break;
            }
        }
        let mut within = None;
        let mut distinct = false;
        let restrict = if sort == Sort::Element { "in" } else { "sub" };
        // `distinct` and the restriction may come in either order.
        for _ in 0..2 {
            if within.is_none() && self.peek_ident(restrict) {
                self.pos += 1;
                let w = self.variable()?;
                self.set(&w)?;
                within = Some(w);
            } else if !distinct && self.peek_ident("distinct") {
                if sort == Sort::Set {
                    return Err(self.error("`distinct` applies to element variables only"));
                }
                self.pos += 1;
                distinct = true;
            }
        }
        self.expect(".")?;
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let mut body = self.formula()?;
        self.scope.truncate(depth);
        if distinct && vars.len() > 1 {
            let mut ne = Vec::new();
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    ne.push(Formula::negate(Formula::Eq(vars[i].clone(), vars[j].clone())));
                }
            }
            let guard = ne.into_iter().reduce(Formula::and).expect("at least one pair");
            body = match q {
                Quantifier::Exists => Formula::and(guard, body),
                Quantifier::ForAll => Formula::Implies(Box::new(guard), Box::new(body)),
            };
        }
        for v in vars.into_iter().rev() {
            body = Formula::Quant { q, var: v, within: within.clone(), body: Box::new(body) };
        }
        Ok(body)
    }

    fn atom(&mut self) -> Result<Formula, MsoError> {
        let name = self.ident()?;
        match name.as_str() {
            "true" => return Ok(Formula::Bool(true)),
            "false" => return Ok(Formula::Bool(false)),
            _ => {}
        }
        if self.eat("(") {
            let mut args = Vec::new();
            if !self.peek_sym(")") {
                loop {
                    args.push(self.variable()?);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect(")")?;
            return self.application(name, args);
        }
        if KEYWORDS.contains(&name.as_str()) {
            self.pos -= 1;
            return Err(self.error(format!("unexpected keyword `{name}`")));
        }
        if self.eat("=") {
            let rhs = self.variable()?;
            self.element(&name)?;
            self.element(&rhs)?;
            return Ok(Formula::Eq(name, rhs));
        }
        if self.eat("!=") {
            let rhs = self.variable()?;
            self.element(&name)?;
            self.element(&rhs)?;
            return Ok(Formula::negate(Formula::Eq(name, rhs)));
        }
        if self.peek_ident("in") {
            self.pos += 1;
            let set = self.variable()?;
            self.element(&name)?;
            self.set(&set)?;
            return Ok(Formula::In(name, set));
        }
        self.pos -= 1;
        Err(self.error(format!("expected an atom after `{name}`")))
    }

    fn application(&mut self, name: String, args: Vec<String>) -> Result<Formula, MsoError> {
        let arity_error = |expected: usize| MsoError::Arity { name: name.clone(), expected, got: args.len() };
        if name == "ordccw" {
            if args.len() != 3 {
                return Err(arity_error(3));
            }
            for a in &args {
                self.element(a)?;
            }
            return Ok(Formula::Ordccw([args[0].clone(), args[1].clone(), args[2].clone()]));
        }
        if let Some(m) = self.macros.iter().find(|m| m.name == name) {
            if args.len() != m.params.len() {
                return Err(arity_error(m.params.len()));
            }
            for (a, p) in args.iter().zip(&m.params) {
                self.bound(a)?;
                if Sort::of(a) != Sort::of(p) {
                    return Err(MsoError::Sort(a.clone()));
                }
            }
            return Ok(Formula::Call(name, args));
        }
        if let Some(&arity) = self.signature.get(&name) {
            if args.len() != arity {
                return Err(arity_error(arity));
            }
            for a in &args {
                self.element(a)?;
            }
            return Ok(Formula::Rel(name, args));
        }
        Err(MsoError::UnknownSymbol(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        [("terredge".to_string(), 2), ("canguard".to_string(), 1)].into_iter().collect()
    }

    #[test]
    fn closed_sentence() {
        let f = parse_formula("ex x. ex y. ex z. ordccw(x,y,z)", &sig()).unwrap();
        assert!(f.free.is_empty());
        assert!(matches!(f.body, Formula::Quant { q: Quantifier::Exists, .. }));
    }

    #[test]
    fn free_set_variable() {
        let text = "free X;\nall x,y,z in X. ((x != y & y != z & z != x) -> (ordccw(x,y,z) | ordccw(y,x,z)))";
        let f = parse_formula(text, &sig()).unwrap();
        assert_eq!(f.free_sets(), vec!["X"]);
    }

    #[test]
    fn scope_and_symbol_errors() {
        assert_eq!(parse_formula("ex x. ordccw(x,y,x)", &sig()).unwrap_err(), MsoError::Unbound("y".into()));
        assert_eq!(parse_formula("ex x. foo(x)", &sig()).unwrap_err(), MsoError::UnknownSymbol("foo".into()));
        assert!(matches!(parse_formula("ex x. terredge(x)", &sig()), Err(MsoError::Arity { .. })));
        assert!(matches!(parse_formula("ex X. X = X", &sig()), Err(MsoError::Sort(_))));
        assert!(matches!(parse_formula("ex x. ex y. x in y", &sig()), Err(MsoError::Sort(_))));
        assert!(matches!(parse_formula("ex x. (x = x", &sig()), Err(MsoError::Syntax { .. })));
        assert!(matches!(parse_formula("def f(x) := ordccw(x,x,x); def f(y) := true; true", &sig()), Err(MsoError::DuplicateMacro(_))));
        // macros only see their parameters
        assert!(parse_formula("free z;\ndef f(x) := x = z; ex x. f(x)", &sig()).is_err());
    }

    #[test]
    fn precedence_and_round_trip() {
        let text = "def c(x,y,z) := !ordccw(x,y,z) & !ordccw(y,x,z);\nfree X;\n\
                    all x in X. ex y. (c(x,y,y) | x = y -> canguard(x) <-> !(x in X)) & ALL Y sub X. EX Z. true";
        let f = parse_formula(text, &sig()).unwrap();
        let printed = f.to_string();
        let again = parse_formula(&printed, &sig()).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.to_string(), printed);
        match &f.body {
            Formula::Quant { body, .. } => match &**body {
                Formula::Quant { body, .. } => match &**body {
                    Formula::And(l, _) => assert!(matches!(**l, Formula::Iff(..))),
                    other => panic!("{other:?}"),
                },
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distinct_sugar() {
        let f = parse_formula("ex x,y,z distinct. true", &sig()).unwrap();
        let g = parse_formula("ex x. ex y. ex z. ((x != y & x != z) & y != z) & true", &sig()).unwrap();
        assert_eq!(f, g);
        let f = parse_formula("all x,y distinct. false", &sig()).unwrap();
        let g = parse_formula("all x. all y. (x != y -> false)", &sig()).unwrap();
        assert_eq!(f, g);
        assert_eq!(
            parse_formula("free X; ex a,b in X distinct. true", &sig()).unwrap(),
            parse_formula("free X; ex a,b distinct in X. true", &sig()).unwrap()
        );
    }
}
