//! Structure-equation DSL: parsing and canonical rendering of algebra files.
//!
//! ```text
//! algebra n21
//! params a b c
//! dim 5
//! de 1 = 0
//! ...
//! de 5 = a*(e12 - e34) + b*(e13 + e24) + c*(e14 - e23)
//! structure
//! eta = e5
//! F1 = e12 + e34
//! F2 = e13 + e42
//! F3 = e14 + e23
//! ```
//!
//! Coefficients are ring expressions over the declared parameters; `e125`
//! denotes `e^1 ^ e^2 ^ e^5`; `0` is allowed for the zero form. `#` starts
//! a comment. Rendering is canonical and stable, and re-parsing a rendered
//! source is the identity.

use crate::error::{Error, Result};
use crate::exterior::{Coframe, KForm};
use crate::liealg::LieAlgebra;
use crate::ring::{ParamSet, Rat, RingElement};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::sync::Arc;

/// A parsed algebra file.
#[derive(Debug, Clone)]
pub struct AlgebraSource {
    pub name: String,
    pub params: Arc<ParamSet>,
    pub dim: usize,
    pub d_eqs: Vec<KForm>,
    pub structure: Option<StructureForms>,
}

/// The optional structure block: `eta` and the triple `F1, F2, F3`.
#[derive(Debug, Clone)]
pub struct StructureForms {
    pub eta: KForm,
    pub f: [KForm; 3],
}

impl AlgebraSource {
    pub fn parse(text: &str) -> Result<AlgebraSource> {
        Parser::new(text).file()
    }

    /// The underlying Lie algebra; the Reeb index is read off a structure
    /// block whose `eta` is a single coframe element.
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let reeb = self.structure.as_ref().and_then(|s| single_coframe_index(&s.eta));
        LieAlgebra::new(
            self.name.clone(),
            Coframe::new(self.dim, reeb)?,
            self.d_eqs.clone(),
            self.params.clone(),
        )
    }

    /// Canonical rendering; stable across runs and idempotent under
    /// re-parsing.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algebra {}\n", self.name));
        out.push_str("params");
        for n in self.params.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        out.push_str(&format!("dim {}\n", self.dim));
        for (i, f) in self.d_eqs.iter().enumerate() {
            out.push_str(&format!("de {} = {}\n", i + 1, f.render()));
        }
        if let Some(s) = &self.structure {
            out.push_str("structure\n");
            out.push_str(&format!("eta = {}\n", s.eta.render()));
            for (i, f) in s.f.iter().enumerate() {
                out.push_str(&format!("F{} = {}\n", i + 1, f.render()));
            }
        }
        out
    }
}

/// `eta` must be exactly one coframe element with coefficient 1.
pub fn single_coframe_index(eta: &KForm) -> Option<usize> {
    if eta.degree() != 1 {
        return None;
    }
    let mut terms = eta.terms();
    let (idx, c) = terms.next()?;
    if terms.next().is_some() || !c.is_one() {
        return None;
    }
    Some(idx[0] as usize)
}

/// Parse a scalar ring expression (the `RingElement` text form) over the
/// given parameters, e.g. `"(a^2 + b^2 + c^2)/(1)"` or `"3/2*a"`.
pub fn parse_scalar(params: &Arc<ParamSet>, text: &str) -> Result<RingElement> {
    let tokens = tokenize(text, 0)?;
    let mut ex = ExprParser { tokens: &tokens, pos: 0, params, dim: None, line: 0 };
    let v = ex.expr(0)?;
    ex.expect_end()?;
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(err_at(0, 1, "expected a scalar expression, found a form")),
    }
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(BigInt),
    EForm(Vec<u8>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '#' => break,
            '+' => {
                out.push((Token::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, col));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, col));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, col));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, col));
                i += 1;
            }
            '=' => {
                out.push((Token::Equals, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<BigInt>().map_err(|_| err_at(line, col, "bad integer"))?;
                out.push((Token::Int(n), col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                if text.len() > 1 && text.starts_with('e') && text[1..].chars().all(|d| d.is_ascii_digit()) {
                    let mut idxs = Vec::new();
                    for d in text[1..].chars() {
                        let v = d.to_digit(10).unwrap() as u8;
                        if v == 0 {
                            return Err(err_at(line, col, "coframe index 0 is invalid"));
                        }
                        if idxs.contains(&v) {
                            return Err(err_at(line, col, format!("repeated index in `{text}`")));
                        }
                        idxs.push(v);
                    }
                    out.push((Token::EForm(idxs), col));
                } else {
                    out.push((Token::Ident(text), col));
                }
            }
            other => return Err(err_at(line, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(RingElement),
    Form(KForm),
}

struct ExprParser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    params: &'a Arc<ParamSet>,
    dim: Option<usize>,
    line: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|(_, c)| *c)
            .unwrap_or(1)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos != self.tokens.len() {
            return Err(err_at(self.line, self.col(), "trailing tokens after expression"));
        }
        Ok(())
    }

    fn expr(&mut self, min_bp: u8) -> Result<Value> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Some(Token::Plus) => ('+', 1, 2),
                Some(Token::Minus) => ('-', 1, 2),
                Some(Token::Star) => ('*', 3, 4),
                Some(Token::Slash) => ('/', 3, 4),
                Some(Token::Caret) => ('^', 7, 6),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            let col = self.col();
            self.next();
            let rhs = self.expr(rbp)?;
            lhs = self.apply(op, lhs, rhs, col)?;
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Value> {
        let col = self.col();
        match self.next() {
            Some(Token::Minus) => {
                let v = self.expr(5)?;
                Ok(match v {
                    Value::Scalar(s) => Value::Scalar(s.neg()),
                    Value::Form(f) => Value::Form(f.neg()),
                })
            }
            Some(Token::LParen) => {
                let v = self.expr(0)?;
                match self.next() {
                    Some(Token::RParen) => Ok(v),
                    _ => Err(err_at(self.line, col, "missing closing parenthesis")),
                }
            }
            Some(Token::Int(n)) => Ok(Value::Scalar(RingElement::constant(
                self.params,
                Rat::from(n),
            ))),
            Some(Token::Ident(name)) => match RingElement::var(self.params, &name) {
                Ok(v) => Ok(Value::Scalar(v)),
                Err(_) => Err(err_at(self.line, col, format!("undeclared parameter `{name}`"))),
            },
            Some(Token::EForm(idxs)) => {
                let dim = self.dim.ok_or_else(|| {
                    err_at(self.line, col, "coframe forms are not allowed in this context")
                })?;
                for &i in &idxs {
                    if i as usize > dim {
                        return Err(err_at(
                            self.line,
                            col,
                            format!("index {i} out of range for dim {dim}"),
                        ));
                    }
                }
                Ok(Value::Form(KForm::basis(self.params, dim, &idxs)))
            }
            other => Err(err_at(self.line, col, format!("unexpected token {other:?}"))),
        }
    }

    fn apply(&self, op: char, lhs: Value, rhs: Value, col: usize) -> Result<Value> {
        use Value::*;
        let line = self.line;
        match (op, lhs, rhs) {
            ('+', Scalar(a), Scalar(b)) => Ok(Scalar(a.add(&b))),
            ('-', Scalar(a), Scalar(b)) => Ok(Scalar(a.sub(&b))),
            ('*', Scalar(a), Scalar(b)) => Ok(Scalar(a.mul(&b))),
            ('/', Scalar(a), Scalar(b)) => a
                .div(&b)
                .map(Scalar)
                .map_err(|_| err_at(line, col, "division by zero")),
            ('^', Scalar(a), Scalar(b)) => {
                let k = b
                    .as_constant()
                    .filter(|r| r.is_integer())
                    .and_then(|r| r.to_integer().to_i64())
                    .ok_or_else(|| err_at(line, col, "exponent must be an integer"))?;
                a.pow(k).map(Scalar).map_err(|_| err_at(line, col, "zero to a negative power"))
            }
            ('*', Scalar(a), Form(f)) | ('*', Form(f), Scalar(a)) => Ok(Form(f.scale(&a))),
            ('/', Form(f), Scalar(a)) => {
                let inv = a.inv().map_err(|_| err_at(line, col, "division by zero"))?;
                Ok(Form(f.scale(&inv)))
            }
            ('+', Form(f), Form(g)) | ('-', Form(f), Form(g)) => {
                let g = if op == '-' { g.neg() } else { g };
                f.add(&g).map(Form).map_err(|_| {
                    err_at(line, col, "cannot add forms of different degrees")
                })
            }
            ('+', Scalar(a), Form(f)) | ('+', Form(f), Scalar(a)) if a.is_zero() => Ok(Form(f)),
            ('-', Form(f), Scalar(a)) if a.is_zero() => Ok(Form(f)),
            ('-', Scalar(a), Form(f)) if a.is_zero() => Ok(Form(f.neg())),
            ('*', Form(_), Form(_)) => {
                Err(err_at(line, col, "forms cannot be multiplied; write separate terms"))
            }
            ('^', Form(_), _) => Err(err_at(line, col, "forms cannot be raised to powers")),
            ('/', _, Form(_)) => Err(err_at(line, col, "cannot divide by a form")),
            _ => Err(err_at(line, col, "cannot mix scalars and forms here")),
        }
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    cursor: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.split('#').next().unwrap_or("").trim();
                !t.is_empty()
            })
            .collect();
        Parser { lines, cursor: 0 }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let l = self.lines.get(self.cursor).copied();
        if l.is_some() {
            self.cursor += 1;
        }
        l
    }

    fn peek_line(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.cursor).copied()
    }

    fn file(&mut self) -> Result<AlgebraSource> {
        // header
        let (ln, l) = self.next_line().ok_or_else(|| err_at(1, 1, "empty file"))?;
        let name = match l.split_whitespace().collect::<Vec<_>>()[..] {
            ["algebra", n] => n.to_string(),
            _ => return Err(err_at(ln, 1, "expected `algebra NAME`")),
        };
        let (ln, l) = self.next_line().ok_or_else(|| err_at(ln, 1, "missing `params` line"))?;
        let mut words = l.split_whitespace();
        if words.next() != Some("params") {
            return Err(err_at(ln, 1, "expected `params NAME*`"));
        }
        let names: Vec<String> = words.map(|w| w.to_string()).collect();
        for n in &names {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(err_at(ln, 1, format!("bad parameter name `{n}`")));
            }
        }
        let params = ParamSet::new(names).map_err(|e| err_at(ln, 1, e.to_string()))?;
        let (ln, l) = self.next_line().ok_or_else(|| err_at(ln, 1, "missing `dim` line"))?;
        let dim: usize = match l.split_whitespace().collect::<Vec<_>>()[..] {
            ["dim", d] => d.parse().map_err(|_| err_at(ln, 5, "bad dimension"))?,
            _ => return Err(err_at(ln, 1, "expected `dim INT`")),
        };
        if dim == 0 || dim > 9 {
            return Err(err_at(ln, 5, format!("dimension {dim} out of range 1..=9")));
        }

        // d-equations
        let mut d_eqs: Vec<Option<KForm>> = vec![None; dim];
        loop {
            let Some((ln, l)) = self.peek_line() else { break };
            let mut words = l.split_whitespace();
            if words.next() != Some("de") {
                break;
            }
            self.next_line();
            let rest = l.trim_start().strip_prefix("de").unwrap();
            let (idx_part, expr_part) = rest
                .split_once('=')
                .ok_or_else(|| err_at(ln, 1, "expected `de INT = formexpr`"))?;
            let idx: usize = idx_part
                .trim()
                .parse()
                .map_err(|_| err_at(ln, 4, "expected a coframe index after `de`"))?;
            if idx == 0 || idx > dim {
                return Err(err_at(ln, 4, format!("index {idx} out of range for dim {dim}")));
            }
            if d_eqs[idx - 1].is_some() {
                return Err(err_at(ln, 1, format!("duplicate d-equation for e^{idx}")));
            }
            let f = parse_form(&params, dim, 2, expr_part, ln)?;
            d_eqs[idx - 1] = Some(f);
        }
        let mut eqs = Vec::with_capacity(dim);
        for (i, f) in d_eqs.into_iter().enumerate() {
            eqs.push(f.ok_or_else(|| err_at(0, 0, format!("missing d-equation for e^{}", i + 1)))?);
        }

        // optional structure block
        let structure = if let Some((ln, l)) = self.peek_line() {
            if l.trim() != "structure" {
                return Err(err_at(ln, 1, format!("unexpected line `{}`", l.trim())));
            }
            self.next_line();
            let mut eta: Option<KForm> = None;
            let mut f: [Option<KForm>; 3] = [None, None, None];
            for _ in 0..4 {
                let (ln, l) = self
                    .next_line()
                    .ok_or_else(|| err_at(ln, 1, "structure block needs eta, F1, F2, F3"))?;
                let (head, expr_part) = l
                    .split_once('=')
                    .ok_or_else(|| err_at(ln, 1, "expected `eta|F1|F2|F3 = formexpr`"))?;
                match head.trim() {
                    "eta" => {
                        if eta.is_some() {
                            return Err(err_at(ln, 1, "duplicate eta".to_string()));
                        }
                        eta = Some(parse_form(&params, dim, 1, expr_part, ln)?);
                    }
                    "F1" | "F2" | "F3" => {
                        let i = head.trim()[1..].parse::<usize>().unwrap() - 1;
                        if f[i].is_some() {
                            return Err(err_at(ln, 1, format!("duplicate {}", head.trim())));
                        }
                        f[i] = Some(parse_form(&params, dim, 2, expr_part, ln)?);
                    }
                    other => return Err(err_at(ln, 1, format!("unexpected `{other}` in structure"))),
                }
            }
            if let Some((ln, l)) = self.peek_line() {
                return Err(err_at(ln, 1, format!("unexpected trailing line `{}`", l.trim())));
            }
            let eta = eta.ok_or_else(|| err_at(ln, 1, "structure block misses eta"))?;
            let [f1, f2, f3] = f;
            let f1 = f1.ok_or_else(|| err_at(ln, 1, "structure block misses F1"))?;
            let f2 = f2.ok_or_else(|| err_at(ln, 1, "structure block misses F2"))?;
            let f3 = f3.ok_or_else(|| err_at(ln, 1, "structure block misses F3"))?;
            Some(StructureForms { eta, f: [f1, f2, f3] })
        } else {
            None
        };

        Ok(AlgebraSource { name, params, dim, d_eqs: eqs, structure })
    }
}

fn parse_form(
    params: &Arc<ParamSet>,
    dim: usize,
    degree: usize,
    text: &str,
    line: usize,
) -> Result<KForm> {
    let tokens = tokenize(text, line)?;
    if tokens.is_empty() {
        return Err(err_at(line, 1, "empty form expression"));
    }
    let mut ex = ExprParser { tokens: &tokens, pos: 0, params, dim: Some(dim), line };
    let v = ex.expr(0)?;
    ex.expect_end()?;
    match v {
        Value::Form(f) if f.degree() == degree => Ok(f),
        Value::Form(f) => Err(err_at(
            line,
            1,
            format!("expected a {degree}-form, found degree {}", f.degree()),
        )),
        Value::Scalar(s) if s.is_zero() => Ok(KForm::zero(params, dim, degree)),
        Value::Scalar(_) => Err(err_at(line, 1, format!("expected a {degree}-form, found a scalar"))),
    }
}
