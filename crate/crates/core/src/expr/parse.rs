use super::{CwExpression, ExprBuilder, NodeId};
use crate::error::ExprError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ExprError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            let tok = match c {
                '#' => break,
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '-' if chars.get(i + 1) == Some(&'>') => {
                    i += 1;
                    Tok::Arrow
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                        i += 1;
                    }
                    Tok::Ident(chars[start..=i].iter().collect())
                }
                other => {
                    return Err(ExprError::Syntax { line, column, message: format!("unexpected character `{other}`") })
                }
            };
            out.push(Spanned { tok, line, column });
            i += 1;
        }
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, ExprError> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let last = text.lines().last().map_or(0, |l| l.chars().count());
        Ok(Cursor { toks, pos: 0, end: (lines, last + 1) })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn error_at(&self, pos: usize, message: impl Into<String>) -> ExprError {
        let (line, column) = self.toks.get(pos).map_or(self.end, |s| (s.line, s.column));
        ExprError::Syntax { line, column, message: message.into() }
    }

    pub fn error(&self, message: impl Into<String>) -> ExprError {
        let (line, column) = self.here();
        ExprError::Syntax { line, column, message: message.into() }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        match self.toks.get(self.pos) {
            Some(s) if s.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    pub fn ident(&mut self) -> Result<String, ExprError> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }
}

/// Parses the textual expression grammar. Empty input (blank or only comments)
/// yields the empty expression.
pub fn parse_expression(text: &str) -> Result<CwExpression, ExprError> {
    let mut cur = Cursor::new(text)?;
    if cur.at_end() {
        return Ok(CwExpression::empty());
    }
    let mut b = ExprBuilder::new();
    let mut unary_names = Vec::new();
    let mut binary_names = Vec::new();
    let root = parse_node(&mut cur, &mut b, &mut unary_names, &mut binary_names)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after expression"));
    }
    for name in &unary_names {
        if binary_names.contains(name) {
            return Err(ExprError::ArityClash(name.clone()));
        }
    }
    Ok(b.finish(root))
}

fn parse_node(
    cur: &mut Cursor,
    b: &mut ExprBuilder,
    un: &mut Vec<String>,
    bn: &mut Vec<String>,
) -> Result<NodeId, ExprError> {
    let at = cur.position();
    let keyword = cur.ident()?;
    cur.expect(Tok::LParen, "`(`")?;
    let note = |list: &mut Vec<String>, s: &String| {
        if !list.contains(s) {
            list.push(s.clone());
        }
    };
    let node = match keyword.as_str() {
        "create" => {
            let l = cur.ident()?;
            note(un, &l);
            b.create(&l)
        }
        "union" => {
            let left = parse_node(cur, b, un, bn)?;
            cur.expect(Tok::Comma, "`,`")?;
            let right = parse_node(cur, b, un, bn)?;
            b.union(left, right)
        }
        "addpair" => {
            let child = parse_node(cur, b, un, bn)?;
            cur.expect(Tok::Semi, "`;`")?;
            let i = cur.ident()?;
            cur.expect(Tok::Comma, "`,`")?;
            let j = cur.ident()?;
            cur.expect(Tok::Arrow, "`->`")?;
            let k = cur.ident()?;
            if i == j {
                return Err(ExprError::SameLabels(i));
            }
            note(un, &i);
            note(un, &j);
            note(bn, &k);
            b.add_pair(child, &i, &j, &k)
        }
        "ccw" | "cw" => {
            let child = parse_node(cur, b, un, bn)?;
            cur.expect(Tok::Semi, "`;`")?;
            let k = cur.ident()?;
            cur.expect(Tok::Comma, "`,`")?;
            let i = cur.ident()?;
            note(bn, &k);
            note(un, &i);
            if keyword == "ccw" {
                b.ccw(child, &k, &i)
            } else {
                b.cw(child, &k, &i)
            }
        }
        "relab" => {
            let child = parse_node(cur, b, un, bn)?;
            cur.expect(Tok::Semi, "`;`")?;
            let tag = cur.ident()?;
            let from = cur.ident()?;
            cur.expect(Tok::Arrow, "`->`")?;
            let to = cur.ident()?;
            if from == to {
                return Err(ExprError::TrivialRelabel(from));
            }
            match tag.as_str() {
                "u" => {
                    note(un, &from);
                    note(un, &to);
                    b.relabel_unary(child, &from, &to)
                }
                "b" => {
                    note(bn, &from);
                    note(bn, &to);
                    b.relabel_binary(child, &from, &to)
                }
                _ => return Err(cur.error("relabel arity must be `u` or `b`")),
            }
        }
        other => return Err(cur.error_at(at, format!("unknown operation `{other}`"))),
    };
    cur.expect(Tok::RParen, "`)`")?;
    Ok(node)
}
