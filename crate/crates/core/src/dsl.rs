//! The `.curve` text format.
//!
//! ```text
//! field Q
//! # one line per singular point
//! point P branches [0] semigroup [3,4,5]
//! point N branches [1, -1] node
//! point X branches [0, 1] conductor [2, 2] basis { 1, 1 ; u, -u }
//! ```
//!
//! Basis rows list one polynomial in the local parameter `u` per branch.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{fmt_q, Poly, Q};
use crate::curve::{make_cluster, ClusterKind, CurveModel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDecl {
    pub name: String,
    pub branches: Vec<Q>,
    pub kind: ClusterKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFile {
    pub field: String,
    pub points: Vec<PointDecl>,
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<CurveModel> {
        let clusters = self
            .points
            .iter()
            .map(|p| make_cluster(p.name.clone(), p.branches.clone(), &p.kind))
            .collect::<Result<Vec<_>>>()?;
        CurveModel::validated(clusters)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Newline,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let col = i + 1;
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: ln + 1, col });
            if ch == '#' {
                break;
            } else if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                push(&mut out, Tok::Int(s.parse().unwrap()));
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            } else if "[]{},;+-*/^".contains(ch) {
                match ch {
                    '{' => depth += 1,
                    '}' => depth = depth.saturating_sub(1),
                    _ => {}
                }
                push(&mut out, Tok::Sym(ch));
                i += 1;
            } else {
                return Err(Error::Syntax { line: ln + 1, col, msg: format!("unexpected character '{ch}'") });
            }
        }
        if depth == 0 {
            out.push(Token { tok: Tok::Newline, line: ln + 1, col: chars.len() + 1 });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn sym(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{kw}'")),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn rational(&mut self) -> Result<Q> {
        let neg = self.eat('-');
        let n = self.int()?;
        let d = if self.eat('/') { self.int()? } else { BigInt::one() };
        if d.is_zero() {
            return self.err("zero denominator");
        }
        let x = Q::new(n, d);
        Ok(if neg { -x } else { x })
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.sym('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(']') {
                return Ok(out);
            }
            self.sym(',')?;
        }
    }

    fn small(&mut self) -> Result<i64> {
        let (line, col) = self.here();
        let neg = self.eat('-');
        let n = self.int()?;
        let v: i64 = n.try_into().map_err(|_| Error::Syntax { line, col, msg: "integer out of range".into() })?;
        Ok(if neg { -v } else { v })
    }

    /// A term: optional rational coefficient, optional `u^e`.
    fn term(&mut self) -> Result<Poly> {
        let coef = match self.peek() {
            Some(Tok::Int(_)) => {
                let n = self.int()?;
                let d = if self.eat('/') { self.int()? } else { BigInt::one() };
                if d.is_zero() {
                    return self.err("zero denominator");
                }
                Some(Q::new(n, d))
            }
            _ => None,
        };
        let has_var = match (&coef, self.peek()) {
            (Some(_), Some(Tok::Sym('*'))) => {
                self.pos += 1;
                true
            }
            (_, Some(Tok::Ident(s))) if s == "u" => true,
            (None, _) => return self.err("expected a term"),
            _ => false,
        };
        let coef = coef.unwrap_or_else(Q::one);
        if !has_var {
            return Ok(Poly::constant(coef));
        }
        self.keyword("u")?;
        let e = if self.eat('^') {
            let (line, col) = self.here();
            usize::try_from(self.int()?).map_err(|_| Error::Syntax { line, col, msg: "exponent too large".into() })?
        } else {
            1
        };
        Ok(Poly::monomial(coef, e))
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero();
        let mut neg = self.eat('-');
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn rows(&mut self) -> Result<Vec<Vec<Poly>>> {
        self.sym('{')?;
        let mut rows = Vec::new();
        if self.eat('}') {
            return Ok(rows);
        }
        loop {
            let mut row = vec![self.poly()?];
            while self.eat(',') {
                row.push(self.poly()?);
            }
            rows.push(row);
            if self.eat('}') {
                return Ok(rows);
            }
            self.sym(';')?;
        }
    }

    fn kind(&mut self) -> Result<ClusterKind> {
        let (line, col) = self.here();
        let kw = self.ident("a point kind")?;
        match kw.as_str() {
            "node" => Ok(ClusterKind::Node),
            "cusp" => Ok(ClusterKind::Cusp),
            "semigroup" => {
                let gens = self.list(|p| p.small())?;
                let gens = gens
                    .into_iter()
                    .map(|g| u64::try_from(g).map_err(|_| Error::Syntax { line, col, msg: "negative generator".into() }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ClusterKind::Semigroup(gens))
            }
            "conductor" => {
                let conductor = self.list(|p| p.small())?;
                self.keyword("basis")?;
                let rows = self.rows()?;
                Ok(ClusterKind::Explicit { conductor, rows })
            }
            other => Err(Error::Syntax { line, col, msg: format!("unknown point kind '{other}'") }),
        }
    }

    fn end_of_statement(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::Newline) => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err("expected end of line"),
        }
    }
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), 1);
    let mut p = Parser { toks, pos: 0, end };
    let mut field: Option<String> = None;
    let mut points = Vec::new();
    let mut names = BTreeSet::new();
    while let Some(tok) = p.peek().cloned() {
        match tok {
            Tok::Newline => {
                p.pos += 1;
            }
            Tok::Ident(kw) if kw == "field" => {
                let (line, col) = p.here();
                p.pos += 1;
                let f = p.ident("a field name")?;
                if f != "Q" {
                    return Err(Error::Semantic(format!("line {line}: only the field Q is supported, got '{f}'")));
                }
                if field.replace(f).is_some() {
                    return Err(Error::Semantic(format!("line {line}, col {col}: field declared twice")));
                }
                p.end_of_statement()?;
            }
            Tok::Ident(kw) if kw == "point" => {
                let (line, _) = p.here();
                p.pos += 1;
                let name = p.ident("a point name")?;
                p.keyword("branches")?;
                let branches = p.list(|p| p.rational())?;
                let kind = p.kind()?;
                p.end_of_statement()?;
                if !names.insert(name.clone()) {
                    return Err(Error::Semantic(format!("line {line}: point '{name}' declared twice")));
                }
                points.push(PointDecl { name, branches, kind });
            }
            _ => return p.err("expected 'field' or 'point'"),
        }
    }
    Ok(CurveFile { field: field.unwrap_or_else(|| "Q".into()), points })
}

pub fn parse_curve(text: &str) -> Result<CurveModel> {
    parse_curve_file(text)?.to_curve()
}

fn list_str<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    format!("[{}]", xs.iter().map(f).collect::<Vec<_>>().join(", "))
}

pub fn serialize_curve_file(file: &CurveFile) -> String {
    let mut out = format!("field {}\n", file.field);
    for p in &file.points {
        let _ = write!(out, "point {} branches {} ", p.name, list_str(&p.branches, fmt_q));
        match &p.kind {
            ClusterKind::Node => out.push_str("node"),
            ClusterKind::Cusp => out.push_str("cusp"),
            ClusterKind::Semigroup(g) => {
                let _ = write!(out, "semigroup {}", list_str(g, |x| x.to_string()));
            }
            ClusterKind::Explicit { conductor, rows } => {
                let body: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|p| p.render("u")).collect::<Vec<_>>().join(", "))
                    .collect();
                let _ = write!(out, "conductor {} basis {{ {} }}", list_str(conductor, |x| x.to_string()), body.join(" ; "));
            }
        }
        out.push('\n');
    }
    out
}

/// A `.curve` description of an arbitrary curve, with explicit bases.
pub fn describe_curve(c: &CurveModel) -> CurveFile {
    let points = c
        .clusters
        .iter()
        .map(|cl| {
            let rows = cl
                .basis
                .rows()
                .iter()
                .map(|row| {
                    let mut off = 0;
                    cl.conductor
                        .iter()
                        .map(|&ci| {
                            let p = Poly::from_coeffs(row[off..off + ci as usize].to_vec());
                            off += ci as usize;
                            p
                        })
                        .collect()
                })
                .collect();
            PointDecl {
                name: cl.name.clone(),
                branches: cl.points.clone(),
                kind: ClusterKind::Explicit { conductor: cl.conductor.clone(), rows },
            }
        })
        .collect();
    CurveFile { field: "Q".into(), points }
}
