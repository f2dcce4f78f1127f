//! The coefficient field `Q(p_1, ..., p_t)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd_rec;
use super::param_poly::ParamPoly;
use crate::error::{Error, Result};

/// A reduced quotient of parameter polynomials.
///
/// Invariants: the denominator is nonzero with leading coefficient `1` (degrevlex),
/// numerator and denominator are coprime, and zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamFraction {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamFraction {
    pub fn zero(nparams: usize) -> Self {
        ParamFraction { num: ParamPoly::zero(nparams), den: ParamPoly::one(nparams) }
    }

    pub fn one(nparams: usize) -> Self {
        ParamFraction { num: ParamPoly::one(nparams), den: ParamPoly::one(nparams) }
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        let n = p.nvars();
        ParamFraction { num: p, den: ParamPoly::one(n) }
    }

    pub fn constant(nparams: usize, c: BigRational) -> Self {
        Self::from_poly(ParamPoly::constant(nparams, c))
    }

    pub fn from_int(nparams: usize, c: i64) -> Self {
        Self::from_poly(ParamPoly::from_int(nparams, c))
    }

    pub fn param(nparams: usize, index: usize) -> Self {
        Self::from_poly(ParamPoly::var(nparams, index))
    }

    /// Normalizing constructor.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::ArityMismatch { expected: num.nvars(), found: den.nvars() });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: ParamPoly, den: ParamPoly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if let Some(c) = den.constant_value() {
            return ParamFraction { num: num.scale(&c.recip()), den: ParamPoly::one(n) };
        }
        let (num, den) = if num.is_constant() {
            (num, den)
        } else {
            let g = gcd_rec(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        Self::make_monic(num, den)
    }

    fn make_monic(num: ParamPoly, den: ParamPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            ParamFraction { num, den }
        } else {
            let inv = lc.recip();
            ParamFraction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn nparams(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `true` for elements of `Q` (no parameters involved).
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nparams() != other.nparams() {
            return Err(Error::ArityMismatch { expected: self.nparams(), found: other.nparams() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::make_monic(self.den.clone(), self.num.clone()))
    }

    fn add_impl(&self, other: &Self, subtract: bool) -> Self {
        let n = self.nparams();
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { -other } else { other.clone() };
        }
        let c = if subtract { -&other.num } else { other.num.clone() };
        let (a, b, d) = (&self.num, &self.den, &other.den);
        if b == d {
            let num = a + &c;
            if b.is_one() {
                return Self::from_poly(num);
            }
            return Self::reduce(num, b.clone());
        }
        // with one side polynomial, (a*d + c)/d is already reduced
        if b.is_one() {
            return ParamFraction { num: &(a * d) + &c, den: d.clone() };
        }
        if d.is_one() {
            return ParamFraction { num: a + &(&c * b), den: b.clone() };
        }
        let g = gcd_rec(b, d).monic();
        if g.is_one() {
            let num = &(a * d) + &(&c * b);
            if num.is_zero() {
                return Self::zero(n);
            }
            return ParamFraction { num, den: b * d };
        }
        let b1 = b.exact_div(&g).expect("gcd divides");
        let d1 = d.exact_div(&g).expect("gcd divides");
        let num = &(a * &d1) + &(&c * &b1);
        if num.is_zero() {
            return Self::zero(n);
        }
        let den = &b1 * d;
        let g2 = gcd_rec(&num, &g);
        if g2.is_constant() {
            Self::make_monic(num, den)
        } else {
            Self::make_monic(num.exact_div(&g2).expect("gcd divides"), den.exact_div(&g2).expect("gcd divides"))
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let n = self.nparams();
        if self.is_zero() || other.is_zero() {
            return Self::zero(n);
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        let (a, b, c, d) = (&self.num, &self.den, &other.num, &other.den);
        let g1 = if d.is_one() || a.is_constant() { None } else { Some(gcd_rec(a, d)).filter(|g| !g.is_constant()) };
        let g2 = if b.is_one() || c.is_constant() { None } else { Some(gcd_rec(c, b)).filter(|g| !g.is_constant()) };
        let div = |p: &ParamPoly, g: &Option<ParamPoly>| match g {
            Some(g) => p.exact_div(g).expect("gcd divides"),
            None => p.clone(),
        };
        let num = &div(a, &g1) * &div(c, &g2);
        let den = &div(b, &g2) * &div(d, &g1);
        Self::make_monic(num, den)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nparams());
        }
        ParamFraction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, k: u32) -> Self {
        ParamFraction { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Evaluates at a full assignment; fails when the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::VanishingDenominator(format!("{:?}", self.den)));
        }
        Ok(self.num.eval(point) / d)
    }

    /// Substitutes `images[i]` for parameter `i`; all images share one arity.
    pub fn substitute(&self, images: &[ParamFraction], target_nparams: usize) -> Result<Self> {
        let n = compose_poly(&self.num, images, target_nparams)?;
        let d = compose_poly(&self.den, images, target_nparams)?;
        if d.is_zero() {
            return Err(Error::VanishingDenominator(format!("{:?}", self.den)));
        }
        n.checked_div(&d)
    }

    /// Text form: `num` for polynomials, `(num)/(den)` otherwise.
    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

/// Evaluates a parameter polynomial at rational-function images of its variables.
pub fn compose_poly(p: &ParamPoly, images: &[ParamFraction], target_nparams: usize) -> Result<ParamFraction> {
    if images.len() != p.nvars() {
        return Err(Error::ArityMismatch { expected: p.nvars(), found: images.len() });
    }
    let mut acc = ParamFraction::zero(target_nparams);
    // cache powers per variable
    let mut powers: Vec<Vec<ParamFraction>> = images.iter().map(|im| vec![ParamFraction::one(target_nparams), im.clone()]).collect();
    for (m, c) in p.terms() {
        let mut t = ParamFraction::constant(target_nparams, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().checked_mul(&images[i])?;
                powers[i].push(next);
            }
            t = t.checked_mul(&powers[i][e as usize])?;
        }
        acc = acc.checked_add(&t)?;
    }
    Ok(acc)
}

impl fmt::Debug for ParamFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&ParamPoly::default_names(self.nparams())))
    }
}

impl Neg for &ParamFraction {
    type Output = ParamFraction;
    fn neg(self) -> ParamFraction {
        ParamFraction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for ParamFraction {
    type Output = ParamFraction;
    fn neg(self) -> ParamFraction {
        ParamFraction { num: -self.num, den: self.den }
    }
}

impl Add for &ParamFraction {
    type Output = ParamFraction;
    fn add(self, rhs: &ParamFraction) -> ParamFraction {
        self.checked_add(rhs).expect("parameter arity mismatch")
    }
}

impl Sub for &ParamFraction {
    type Output = ParamFraction;
    fn sub(self, rhs: &ParamFraction) -> ParamFraction {
        self.checked_sub(rhs).expect("parameter arity mismatch")
    }
}

impl Mul for &ParamFraction {
    type Output = ParamFraction;
    fn mul(self, rhs: &ParamFraction) -> ParamFraction {
        self.checked_mul(rhs).expect("parameter arity mismatch")
    }
}

/// Panics on division by zero; use [`ParamFraction::checked_div`] for an error.
impl Div for &ParamFraction {
    type Output = ParamFraction;
    fn div(self, rhs: &ParamFraction) -> ParamFraction {
        self.checked_div(rhs).expect("division by zero")
    }
}
