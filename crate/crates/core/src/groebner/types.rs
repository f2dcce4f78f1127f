//! Operator polynomials, module elements and matrices with rational-function coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::monomial::{cmp_degrevlex, Monomial};
use crate::arith::param_poly::render_rational;
use crate::arith::{gcd_many, ParamFraction, ParamPoly};
use crate::error::{Error, Result};
use crate::ordering::ModOrder;

use super::engine::{Ctx, Term, Vector};
use super::field::RationalFunctions;

/// An element of `Q(p)[d_1, ..., d_n]`; terms strictly descending in degrevlex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpPoly {
    nvars: usize,
    nparams: usize,
    terms: Vec<(Monomial, ParamFraction)>,
}

impl OpPoly {
    pub fn zero(nvars: usize, nparams: usize) -> Self {
        OpPoly { nvars, nparams, terms: Vec::new() }
    }

    pub fn one(nvars: usize, nparams: usize) -> Self {
        Self::constant(nvars, ParamFraction::one(nparams))
    }

    pub fn constant(nvars: usize, c: ParamFraction) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, nparams: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(nvars, index, 1), ParamFraction::one(nparams))
    }

    pub fn monomial(m: Monomial, c: ParamFraction) -> Self {
        let (nvars, nparams) = (m.nvars(), c.nparams());
        if c.is_zero() {
            return Self::zero(nvars, nparams);
        }
        OpPoly { nvars, nparams, terms: vec![(m, c)] }
    }

    /// Builds from arbitrary terms, merging repeated monomials.
    pub fn from_terms(nvars: usize, nparams: usize, terms: impl IntoIterator<Item = (Monomial, ParamFraction)>) -> Self {
        let mut acc: HashMap<Monomial, ParamFraction> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(x) => *x = &*x + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        OpPoly { nvars, nparams, terms }
    }

    pub fn from_param_poly(nvars: usize, p: &ParamPoly) -> Self {
        Self::constant(nvars, ParamFraction::from_poly(p.clone()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn terms(&self) -> &[(Monomial, ParamFraction)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<ParamFraction> {
        match self.terms.as_slice() {
            [] => Some(ParamFraction::zero(self.nparams)),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn degree(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn leading_coeff(&self) -> Option<&ParamFraction> {
        self.terms.first().map(|t| &t.1)
    }

    fn check(&self, other: &OpPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.nparams != other.nparams {
            return Err(Error::ArityMismatch { expected: self.nparams, found: other.nparams });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &OpPoly) -> Result<OpPoly> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &OpPoly) -> Result<OpPoly> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &OpPoly, subtract: bool) -> OpPoly {
        use std::cmp::Ordering::*;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &ParamFraction| if subtract { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            match cmp_degrevlex(&self.terms[i].0, &other.terms[j].0) {
                Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Less => {
                    out.push((other.terms[j].0.clone(), sign(&other.terms[j].1)));
                    j += 1;
                }
                Equal => {
                    let c = if subtract { &self.terms[i].1 - &other.terms[j].1 } else { &self.terms[i].1 + &other.terms[j].1 };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        OpPoly { nvars: self.nvars, nparams: self.nparams, terms: out }
    }

    pub fn checked_mul(&self, other: &OpPoly) -> Result<OpPoly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars, self.nparams));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        Ok(Self::from_terms(
            self.nvars,
            self.nparams,
            self.terms
                .iter()
                .flat_map(|(ma, ca)| other.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        ))
    }

    pub fn scale(&self, c: &ParamFraction) -> OpPoly {
        if c.is_zero() {
            return Self::zero(self.nvars, self.nparams);
        }
        if c.is_one() {
            return self.clone();
        }
        OpPoly { nvars: self.nvars, nparams: self.nparams, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> OpPoly {
        let mut acc = Self::one(self.nvars, self.nparams);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `f` to every coefficient; the result lives over `nparams` parameters.
    pub fn map_coeffs(&self, nparams: usize, f: impl Fn(&ParamFraction) -> Result<ParamFraction>) -> Result<OpPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(Self::from_terms(self.nvars, nparams, terms))
    }

    /// Monic lcm of the coefficient denominators.
    pub fn denominator_lcm(&self) -> ParamPoly {
        let mut acc = ParamPoly::one(self.nparams);
        for (_, c) in &self.terms {
            if !c.denom().is_one() {
                acc = crate::arith::lcm(&acc, c.denom()).expect("nonzero denominators");
            }
        }
        acc
    }

    /// Monic gcd of the coefficient numerators (`None` for zero).
    pub fn numerator_gcd(&self) -> Option<ParamPoly> {
        gcd_many(self.terms.iter().map(|(_, c)| c.numer()))
    }

    pub fn render(&self, vars: &[String], params: &[String]) -> String {
        render_terms(self.terms.iter().map(|(m, c)| (m, c)), vars, params)
    }
}

/// Renders `sum c*m` in the session style: `(-g*l2)*d^2+(-g^2)`.
pub(crate) fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a ParamFraction)>,
    vars: &[String],
    params: &[String],
) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        let piece = render_term(m, c, vars, params);
        if !out.is_empty() && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn render_term(m: &Monomial, c: &ParamFraction, vars: &[String], params: &[String]) -> String {
    let mono = if m.is_one() { None } else { Some(m.render(vars)) };
    if let Some(q) = c.constant_value() {
        let mono = match mono {
            None => return render_rational(&q),
            Some(s) => s,
        };
        if q.is_one() {
            return mono;
        }
        if (-&q).is_one() {
            return format!("-{mono}");
        }
        return format!("{}*{}", render_rational(&q), mono);
    }
    let coeff = if c.is_polynomial() { format!("({})", c.render(params)) } else { c.render(params) };
    match mono {
        None => coeff,
        Some(s) => format!("{coeff}*{s}"),
    }
}

impl fmt::Debug for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.nvars).map(|i| format!("d{i}")).collect();
        write!(f, "{}", self.render(&vars, &ParamPoly::default_names(self.nparams)))
    }
}

macro_rules! op_impl {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr for &OpPoly {
            type Output = OpPoly;
            fn $method(self, rhs: &OpPoly) -> OpPoly {
                self.$checked(rhs).expect("operator ring mismatch")
            }
        }
    };
}
op_impl!(Add, add, checked_add);
op_impl!(Sub, sub, checked_sub);
op_impl!(Mul, mul, checked_mul);

impl std::ops::Neg for &OpPoly {
    type Output = OpPoly;
    fn neg(self) -> OpPoly {
        OpPoly { nvars: self.nvars, nparams: self.nparams, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// A vector in the free module `A^rank`; zero entries are not stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModElement {
    rank: usize,
    nvars: usize,
    nparams: usize,
    entries: BTreeMap<usize, OpPoly>,
}

impl ModElement {
    pub fn zero(rank: usize, nvars: usize, nparams: usize) -> Self {
        ModElement { rank, nvars, nparams, entries: BTreeMap::new() }
    }

    /// The unit vector `e_index` (0-based).
    pub fn unit(rank: usize, nvars: usize, nparams: usize, index: usize) -> Self {
        let mut v = Self::zero(rank, nvars, nparams);
        v.entries.insert(index, OpPoly::one(nvars, nparams));
        v
    }

    pub fn from_entries(nvars: usize, nparams: usize, entries: Vec<OpPoly>) -> Self {
        let rank = entries.len();
        let mut v = Self::zero(rank, nvars, nparams);
        for (i, p) in entries.into_iter().enumerate() {
            v.set(i, p);
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> OpPoly {
        self.entries.get(&i).cloned().unwrap_or_else(|| OpPoly::zero(self.nvars, self.nparams))
    }

    pub fn entry(&self, i: usize) -> Option<&OpPoly> {
        self.entries.get(&i)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &OpPoly)> {
        self.entries.iter().map(|(i, p)| (*i, p))
    }

    pub fn set(&mut self, i: usize, p: OpPoly) {
        assert!(i < self.rank, "component {i} out of range for rank {}", self.rank);
        if p.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, p);
        }
    }

    pub fn to_dense(&self) -> Vec<OpPoly> {
        (0..self.rank).map(|i| self.get(i)).collect()
    }

    pub fn add(&self, other: &ModElement) -> ModElement {
        let mut out = self.clone();
        for (i, p) in &other.entries {
            let s = &out.get(*i) + p;
            out.set(*i, s);
        }
        out
    }

    pub fn sub(&self, other: &ModElement) -> ModElement {
        self.add(&other.scale_poly(&OpPoly::constant(self.nvars, -ParamFraction::one(self.nparams))))
    }

    pub fn scale_poly(&self, c: &OpPoly) -> ModElement {
        let mut out = Self::zero(self.rank, self.nvars, self.nparams);
        for (i, p) in &self.entries {
            out.set(*i, p * c);
        }
        out
    }

    pub fn scale(&self, c: &ParamFraction) -> ModElement {
        let mut out = Self::zero(self.rank, self.nvars, self.nparams);
        for (i, p) in &self.entries {
            out.set(*i, p.scale(c));
        }
        out
    }

    /// Copy with components mapped through `f` into an ambient module of rank `rank`.
    pub fn reindex(&self, rank: usize, f: impl Fn(usize) -> Option<usize>) -> ModElement {
        let mut out = Self::zero(rank, self.nvars, self.nparams);
        for (i, p) in &self.entries {
            if let Some(j) = f(*i) {
                out.set(j, p.clone());
            }
        }
        out
    }

    pub fn to_vector(&self, order: &ModOrder) -> Vector<ParamFraction> {
        self.to_vector_shifted(order, 0)
    }

    pub(crate) fn to_vector_shifted(&self, order: &ModOrder, shift: usize) -> Vector<ParamFraction> {
        let field = RationalFunctions { nparams: self.nparams };
        let ctx = Ctx::new(&field, order);
        let mut terms = Vec::new();
        for (i, p) in &self.entries {
            for (m, c) in p.terms() {
                terms.push(Term { mono: m.clone(), comp: i + shift, coeff: c.clone() });
            }
        }
        ctx.vector(terms)
    }

    /// Collects the terms with component in `range`, shifted down to start at 0.
    pub fn from_vector(
        v: &Vector<ParamFraction>,
        range: std::ops::Range<usize>,
        nvars: usize,
        nparams: usize,
    ) -> ModElement {
        let mut buckets: BTreeMap<usize, Vec<(Monomial, ParamFraction)>> = BTreeMap::new();
        for t in &v.terms {
            if range.contains(&t.comp) {
                buckets.entry(t.comp - range.start).or_default().push((t.mono.clone(), t.coeff.clone()));
            }
        }
        let mut out = Self::zero(range.len(), nvars, nparams);
        for (i, ts) in buckets {
            out.set(i, OpPoly::from_terms(nvars, nparams, ts));
        }
        out
    }

    /// Leading `(monomial, component)` under `order`.
    pub fn lead(&self, order: &ModOrder) -> Option<(Monomial, usize)> {
        self.to_vector(order).lead().map(|t| (t.mono.clone(), t.comp))
    }

    /// Clears denominators and removes the polynomial content, with a positive leading
    /// rational coefficient under `order`.
    pub fn primitive(&self, order: &ModOrder) -> ModElement {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = ParamPoly::one(self.nparams);
        for p in self.entries.values() {
            l = crate::arith::lcm(&l, &p.denominator_lcm()).expect("nonzero");
        }
        let cleared = self.scale(&ParamFraction::from_poly(l));
        let g = gcd_many(cleared.entries.values().flat_map(|p| p.terms().iter().map(|(_, c)| c.numer()))).expect("nonzero");
        let mut scale = ParamFraction::new(ParamPoly::one(self.nparams), g).expect("nonzero");
        let scaled = cleared.scale(&scale);
        // integer content: multiply by the lcm of rational denominators, divide by the gcd
        let coeffs: Vec<BigRational> = scaled
            .entries
            .values()
            .flat_map(|p| p.terms().iter().flat_map(|(_, c)| c.numer().terms().iter().map(|(_, q)| q.clone())))
            .collect();
        let d = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let n = coeffs.iter().fold(BigInt::zero(), |acc, q| acc.gcd(&(q.numer() * (&d / q.denom()))));
        scale = scale.scale(&BigRational::new(d, n));
        let mut out = cleared.scale(&scale);
        let v = out.to_vector(order);
        let lc = &v.terms[0].coeff;
        if lc.numer().leading_coeff().is_negative() {
            out = out.scale(&-ParamFraction::one(self.nparams));
        }
        out
    }

    pub fn render(&self, vars: &[String], params: &[String]) -> String {
        let parts: Vec<String> = (0..self.rank).map(|i| self.get(i).render(vars, params)).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Debug for ModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.rank).map(|i| format!("{:?}", self.get(i))).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A `rows x cols` matrix over the operator ring, stored by columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: usize,
    nvars: usize,
    nparams: usize,
    cols: Vec<ModElement>,
}

impl ModMatrix {
    pub fn new(rows: usize, nvars: usize, nparams: usize, cols: Vec<ModElement>) -> Result<Self> {
        for c in &cols {
            if c.rank != rows {
                return Err(Error::ShapeMismatch(format!("column of rank {} in a matrix with {rows} rows", c.rank)));
            }
            if c.nvars != nvars || c.nparams != nparams {
                return Err(Error::ShapeMismatch("columns over different rings".into()));
            }
        }
        Ok(ModMatrix { rows, nvars, nparams, cols })
    }

    pub fn empty(rows: usize, nvars: usize, nparams: usize) -> Self {
        ModMatrix { rows, nvars, nparams, cols: Vec::new() }
    }

    pub fn zeros(rows: usize, ncols: usize, nvars: usize, nparams: usize) -> Self {
        ModMatrix { rows, nvars, nparams, cols: vec![ModElement::zero(rows, nvars, nparams); ncols] }
    }

    pub fn identity(n: usize, nvars: usize, nparams: usize) -> Self {
        ModMatrix { rows: n, nvars, nparams, cols: (0..n).map(|i| ModElement::unit(n, nvars, nparams, i)).collect() }
    }

    /// Builds from row-major entries; all rows must have equal length.
    pub fn from_rows(nvars: usize, nparams: usize, rows: Vec<Vec<OpPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("rows of unequal length".into()));
        }
        let mut m = Self::zeros(nrows, ncols, nvars, nparams);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                m.cols[j].set(i, p);
            }
        }
        Ok(m)
    }

    pub fn from_columns(nvars: usize, nparams: usize, rows: usize, cols: Vec<ModElement>) -> Result<Self> {
        Self::new(rows, nvars, nparams, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn columns(&self) -> &[ModElement] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &ModElement {
        &self.cols[j]
    }

    pub fn into_columns(self) -> Vec<ModElement> {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> OpPoly {
        self.cols[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, p: OpPoly) {
        self.cols[j].set(i, p);
    }

    pub fn row(&self, i: usize) -> Vec<OpPoly> {
        self.cols.iter().map(|c| c.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn push_column(&mut self, c: ModElement) -> Result<()> {
        if c.rank != self.rows {
            return Err(Error::ShapeMismatch(format!("column of rank {} in a matrix with {} rows", c.rank, self.rows)));
        }
        self.cols.push(c);
        Ok(())
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut t = Self::zeros(self.ncols(), self.rows, self.nvars, self.nparams);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, p) in c.entries() {
                t.cols[i].set(j, p.clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.ncols() != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.ncols(),
                other.rows,
                other.ncols()
            )));
        }
        let cols = other
            .cols
            .iter()
            .map(|b| {
                let mut acc = ModElement::zero(self.rows, self.nvars, self.nparams);
                for (k, p) in b.entries() {
                    acc = acc.add(&self.cols[k].scale_poly(p));
                }
                acc
            })
            .collect();
        Ok(ModMatrix { rows: self.rows, nvars: self.nvars, nparams: self.nparams, cols })
    }

    pub fn sub(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.rows != other.rows || self.ncols() != other.ncols() {
            return Err(Error::ShapeMismatch("matrix difference of unequal shapes".into()));
        }
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect();
        Ok(ModMatrix { rows: self.rows, nvars: self.nvars, nparams: self.nparams, cols })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn concat(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("concatenation of matrices with different row counts".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(ModMatrix { rows: self.rows, nvars: self.nvars, nparams: self.nparams, cols })
    }

    /// Submatrix of the given columns.
    pub fn select_columns(&self, idx: impl IntoIterator<Item = usize>) -> ModMatrix {
        let cols = idx.into_iter().map(|j| self.cols[j].clone()).collect();
        ModMatrix { rows: self.rows, nvars: self.nvars, nparams: self.nparams, cols }
    }

    /// Applies `f` to every coefficient of every entry.
    pub fn map_coeffs(&self, nparams: usize, f: impl Fn(&ParamFraction) -> Result<ParamFraction>) -> Result<ModMatrix> {
        let mut out = Self::zeros(self.rows, self.ncols(), self.nvars, nparams);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, p) in c.entries() {
                out.cols[j].set(i, p.map_coeffs(nparams, &f)?);
            }
        }
        Ok(out)
    }

    pub fn render_rows(&self, vars: &[String], params: &[String]) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|p| p.render(vars, params)).collect();
                format!("[{}]", r.join(","))
            })
            .collect()
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.ncols())?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|p| format!("{p:?}")).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}
