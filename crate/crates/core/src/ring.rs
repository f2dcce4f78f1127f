//! Named rings and the expression syntax `(-g*l2)*d^2+g/l1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{ParamFraction, ParamPoly};
use crate::groebner::{ModElement, ModMatrix, OpPoly};
use crate::ordering::ModOrder;

/// `Q(params)[vars]` with a module ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub params: Vec<String>,
    pub vars: Vec<String>,
    pub order: ModOrder,
}

/// A syntax or name error at byte `offset` of the parsed text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at offset {})", self.message, self.offset)
    }
}

impl std::error::Error for ExprError {}

impl Ring {
    pub fn new<S: AsRef<str>>(params: &[S], vars: &[S], order: ModOrder) -> Self {
        Ring {
            params: params.iter().map(|s| s.as_ref().to_string()).collect(),
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            order,
        }
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    pub fn parse(&self, text: &str) -> Result<OpPoly, ExprError> {
        self.parse_with(text, &BTreeMap::new())
    }

    /// Parses with extra named values; ring symbols shadow bindings.
    pub fn parse_with(&self, text: &str, bindings: &BTreeMap<String, OpPoly>) -> Result<OpPoly, ExprError> {
        let mut p = Parser { ring: self, bindings, src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err(format!("unexpected `{}`", &text[p.pos..].chars().next().unwrap())));
        }
        Ok(v)
    }

    /// Parses an expression free of operator variables.
    pub fn parse_param(&self, text: &str) -> Result<ParamFraction, ExprError> {
        let v = self.parse(text)?;
        v.constant_value().ok_or(ExprError { offset: 0, message: format!("`{text}` involves operator variables") })
    }

    pub fn parse_param_poly(&self, text: &str) -> Result<ParamPoly, ExprError> {
        let f = self.parse_param(text)?;
        if !f.is_polynomial() {
            return Err(ExprError { offset: 0, message: format!("`{text}` is not a polynomial in the parameters") });
        }
        Ok(f.numer().clone())
    }

    /// Test helper: parses or panics.
    pub fn poly(&self, text: &str) -> OpPoly {
        self.parse(text).unwrap_or_else(|e| panic!("cannot parse `{text}`: {e}"))
    }

    pub fn param_poly(&self, text: &str) -> ParamPoly {
        self.parse_param_poly(text).unwrap_or_else(|e| panic!("cannot parse `{text}`: {e}"))
    }

    pub fn fraction(&self, text: &str) -> ParamFraction {
        self.parse_param(text).unwrap_or_else(|e| panic!("cannot parse `{text}`: {e}"))
    }

    /// Matrix from row-major entry texts; panics on bad input.
    pub fn matrix(&self, rows: &[&[&str]]) -> ModMatrix {
        let rows = rows.iter().map(|r| r.iter().map(|e| self.poly(e)).collect()).collect();
        ModMatrix::from_rows(self.nvars(), self.nparams(), rows).expect("rectangular")
    }

    pub fn column(&self, entries: &[&str]) -> ModElement {
        ModElement::from_entries(self.nvars(), self.nparams(), entries.iter().map(|e| self.poly(e)).collect())
    }

    pub fn render(&self, p: &OpPoly) -> String {
        p.render(&self.vars, &self.params)
    }

    pub fn render_fraction(&self, f: &ParamFraction) -> String {
        f.render(&self.params)
    }

    pub fn render_param_poly(&self, p: &ParamPoly) -> String {
        p.render(&self.params)
    }

    pub fn render_element(&self, v: &ModElement) -> String {
        v.render(&self.vars, &self.params)
    }

    pub fn zero(&self) -> OpPoly {
        OpPoly::zero(self.nvars(), self.nparams())
    }
}

/// Identifiers of `text` with their byte offsets, in order of appearance.
pub fn scan_identifiers(text: &str) -> Vec<(String, usize)> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_alphabetic() || b[i] == b'_' {
            let start = i;
            while i < b.len() && is_ident_byte(b[i]) {
                i += 1;
            }
            out.push((text[start..i].to_string(), start));
        } else if b[i].is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    out
}

fn is_ident_byte(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

struct Parser<'a> {
    ring: &'a Ring,
    bindings: &'a BTreeMap<String, OpPoly>,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: String) -> ExprError {
        ExprError { offset: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<OpPoly, ExprError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OpPoly, ExprError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = d.constant_value().ok_or(ExprError {
                        offset: at,
                        message: "division by an expression involving operator variables".into(),
                    })?;
                    if c.is_zero() {
                        return Err(ExprError { offset: at, message: "division by zero".into() });
                    }
                    acc = acc.scale(&c.inv().expect("nonzero"));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<OpPoly, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<OpPoly, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent after `^`".into()));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = text.parse().map_err(|_| ExprError { offset: start, message: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<OpPoly, ExprError> {
        let (nv, np) = (self.ring.nvars(), self.ring.nparams());
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = text.parse().expect("digits");
                Ok(OpPoly::constant(nv, ParamFraction::constant(np, BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_byte(self.src[self.pos]) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.ring.vars.iter().position(|v| v == name) {
                    Ok(OpPoly::var(nv, np, i))
                } else if let Some(i) = self.ring.param_index(name) {
                    Ok(OpPoly::constant(nv, ParamFraction::param(np, i)))
                } else if let Some(v) = self.bindings.get(name) {
                    Ok(v.clone())
                } else {
                    Err(ExprError { offset: start, message: format!("undeclared identifier `{name}`") })
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of expression".into())),
        }
    }
}
