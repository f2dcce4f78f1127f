//! Sparse multivariate polynomials over the rationals in the system parameters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{cmp_degrevlex, Monomial};
use crate::error::{Error, Result};

/// A polynomial in `Q[p_1, ..., p_t]`.
///
/// Terms are kept strictly descending in degrevlex with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    nvars: usize,
    terms: Vec<(Monomial, BigRational)>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ParamPoly {
    pub fn zero(nvars: usize) -> Self {
        ParamPoly { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        ParamPoly { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    /// The parameter `p_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        ParamPoly { nvars, terms: vec![(Monomial::var(nvars, index, 1), BigRational::one())] }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        ParamPoly { nvars, terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, BigRational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        ParamPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Variables occurring in the polynomial, ascending.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0)).collect()
    }

    fn check_arity(&self, other: &ParamPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_arity(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_arity(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_arity(other)?;
        Ok(self.mul_impl(other))
    }

    fn merge(&self, other: &ParamPoly, subtract: bool) -> ParamPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match cmp_degrevlex(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if subtract { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), if subtract { -c } else { c.clone() })));
        ParamPoly { nvars: self.nvars, terms: out }
    }

    fn mul_impl(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if other.is_constant() {
            return self.scale(&other.terms[0].1);
        }
        if self.is_constant() {
            return other.scale(&self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        ParamPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Multiplication by the term `c * m`; preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        ParamPoly { nvars: self.nvars, terms: self.terms.iter().map(|(a, x)| (a.mul(m), x * c)).collect() }
    }

    pub fn pow(&self, mut k: u32) -> ParamPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self` (or is zero).
    pub fn exact_div(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if divisor.is_constant() {
            return Some(self.scale(&divisor.terms[0].1.recip()));
        }
        let (dm, dc) = &divisor.terms[0];
        if divisor.terms.len() == 1 {
            let inv = dc.recip();
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((dm.quotient_of(m)?, c * &inv));
            }
            return Some(ParamPoly { nvars: self.nvars, terms: out });
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        let dc_inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let qm = dm.quotient_of(rm)?;
            let qc = rc * &dc_inv;
            rem = rem.merge(&divisor.mul_term(&qm, &qc), true);
            quot.push((qm, qc));
        }
        Some(ParamPoly { nvars: self.nvars, terms: quot })
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> ParamPoly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn derivative(&self, var: usize) -> ParamPoly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                let mut m2 = m.clone();
                m2.set_exponent(var, e - 1);
                terms.push((m2, c * rat(e as i64)));
            }
        }
        Self::from_terms(self.nvars, terms)
    }

    /// Dense coefficient list in `var` (index = power of `var`); coefficients do not
    /// contain `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<ParamPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        // iterating in descending degrevlex order and removing a variable keeps each bucket
        // sorted only for some orders, so re-sort through from_terms
        for (m, c) in &self.terms {
            buckets[m.exponent(var) as usize].push((m.without(var), c.clone()));
        }
        buckets.into_iter().map(|b| Self::from_terms(self.nvars, b)).collect()
    }

    /// Inverse of [`ParamPoly::coefficients_in`].
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::var(nvars, var, k as u32);
            for (m, a) in &c.terms {
                terms.push((m.mul(&xk), a.clone()));
            }
        }
        Self::from_terms(nvars, terms)
    }

    /// Evaluates at a full assignment of the parameters.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates at a named assignment; every parameter that occurs must be assigned.
    pub fn evaluate(&self, names: &[String], point: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut values = Vec::with_capacity(self.nvars);
        let used = self.variables();
        for i in 0..self.nvars {
            match point.get(&names[i]) {
                Some(v) => values.push(v.clone()),
                None if used.contains(&i) => return Err(Error::MissingAssignment(names[i].clone())),
                None => values.push(BigRational::zero()),
            }
        }
        Ok(self.eval(&values))
    }

    /// Gcd of the numerators over lcm of the denominators, signed like the leading
    /// coefficient. Dividing by it yields a primitive integer polynomial with positive
    /// leading coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let content = BigRational::new(g, l);
        if self.terms[0].1.is_negative() {
            -content
        } else {
            content
        }
    }

    /// Primitive integer form with positive leading coefficient.
    pub fn primitive(&self) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.rational_content().recip())
    }

    /// Monomial gcd of all terms (the largest monomial dividing the polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some((m, _)) => it.fold(m.clone(), |acc, (m, _)| acc.gcd(m)),
        }
    }

    /// Applies a variable renaming/embedding (`map[i]` = new index of variable `i`).
    pub fn remap(&self, map: &[usize], nvars: usize) -> ParamPoly {
        Self::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.remap(map, nvars), c.clone())))
    }

    /// Canonical text form: degrevlex descending, `*` and `^`, e.g. `g^2*l1-g^2*l2`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if m.is_one() {
                out.push_str(&render_rational(&a));
            } else if a.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&render_rational(&a));
                out.push('*');
                out.push_str(&m.render(names));
            }
        }
        out
    }

    /// Default names `p1, p2, ...` used by `Debug`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("p{i}")).collect()
    }
}

pub(crate) fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&Self::default_names(self.nvars)))
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(mut self) -> ParamPoly {
        for t in &mut self.terms {
            t.1 = -std::mem::take(&mut t.1);
        }
        self
    }
}

// Operator forms panic on arity mismatch; use the `checked_*` methods to get an error.
impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_add(rhs).expect("parameter arity mismatch")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_sub(rhs).expect("parameter arity mismatch")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_mul(rhs).expect("parameter arity mismatch")
    }
}
