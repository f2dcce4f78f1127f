//! Squarefree factorization with extraction of factors linear in some variable.
//!
//! The result is not a full irreducible factorization: a squarefree factor of degree
//! at least two in every variable it contains is kept whole. Factors of the form
//! `a*x + b` (with `a`, `b` free of `x`) are always split off.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::gcd::{content_in, gcd_rec};
use super::param_poly::ParamPoly;
use crate::error::{Error, Result};

/// `content * prod factor^multiplicity`, factors monic, pairwise coprime and distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub content: BigRational,
    pub factors: Vec<(ParamPoly, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> ParamPoly {
        let n = self.factors.first().map_or(0, |f| f.0.nvars());
        let mut acc = ParamPoly::constant(n, self.content.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }
}

/// Upper bound on candidate linear factors tried per variable.
const MAX_LINEAR_CANDIDATES: usize = 4096;
/// Integer contents above this bound contribute only the divisor `1`.
const MAX_DIVISOR_SEARCH: u64 = 1 << 16;

/// Factors a nonzero polynomial; factors are sorted by total degree, then terms.
pub fn factorize(p: &ParamPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroFactorization);
    }
    let n = p.nvars();
    let lc = p.leading_coeff();
    let f = p.monic();
    let mut factors = Vec::new();
    let mc = f.monomial_content();
    for i in mc.support() {
        factors.push((ParamPoly::var(n, i), mc.exponent(i)));
    }
    let f = if mc.is_one() {
        f
    } else {
        f.exact_div(&ParamPoly::monomial(mc, One::one())).expect("monomial content divides")
    };
    for (g, e) in squarefree_rec(&f) {
        for h in split_linear(&g) {
            factors.push((h.monic(), e));
        }
    }
    sort_factors(&mut factors);
    let out = Factorization { content: BigRational::one(), factors };
    // the monic factors multiply to a polynomial with leading coefficient 1
    let expanded = out.expand();
    let content = if expanded.is_zero() { lc } else { lc / expanded.leading_coeff() };
    Ok(Factorization { content, ..out })
}

/// Distinct non-constant factors, sorted.
pub fn factor_set(p: &ParamPoly) -> Result<Vec<ParamPoly>> {
    Ok(factorize(p)?.factors.into_iter().map(|(f, _)| f).collect())
}

pub fn sort_factors(factors: &mut [(ParamPoly, u32)]) {
    factors.sort_by(|a, b| cmp_polys(&a.0, &b.0));
}

/// Total order used for presenting factor lists: total degree, then term count, then terms.
pub fn cmp_polys(a: &ParamPoly, b: &ParamPoly) -> std::cmp::Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then(a.num_terms().cmp(&b.num_terms()))
        .then_with(|| {
            for (x, y) in a.terms().iter().zip(b.terms()) {
                let o = super::monomial::cmp_degrevlex(&y.0, &x.0).then_with(|| x.1.cmp(&y.1));
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// Squarefree decomposition of a polynomial without monomial content.
fn squarefree_rec(f: &ParamPoly) -> Vec<(ParamPoly, u32)> {
    if f.is_constant() {
        return Vec::new();
    }
    let x = f.variables()[0];
    let c = content_in(f, x);
    let pp = f.exact_div(&c).expect("content divides");
    let mut out = yun(&pp, x);
    out.extend(squarefree_rec(&c));
    out
}

/// Yun's algorithm for a polynomial primitive in `x`.
fn yun(f: &ParamPoly, x: usize) -> Vec<(ParamPoly, u32)> {
    let mut out = Vec::new();
    let df = f.derivative(x);
    let c = gcd_rec(f, &df);
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut y = df.exact_div(&c).expect("gcd divides");
    let mut z = &y - &w.derivative(x);
    let mut i = 1;
    while !w.is_constant() {
        let g = if z.is_zero() { w.clone() } else { gcd_rec(&w, &z) };
        if !g.is_constant() {
            out.push((g.monic(), i));
        }
        w = w.exact_div(&g).expect("gcd divides");
        y = z.exact_div(&g).expect("gcd divides");
        z = &y - &w.derivative(x);
        i += 1;
    }
    out
}

/// Splits off factors linear in a single variable from a squarefree polynomial.
fn split_linear(f: &ParamPoly) -> Vec<ParamPoly> {
    if f.is_constant() {
        return Vec::new();
    }
    for x in f.variables() {
        if f.degree_in(x) < 2 {
            continue;
        }
        if let Some(lin) = find_linear_factor(f, x) {
            let rest = f.exact_div(&lin).expect("found factor divides");
            let mut out = vec![lin];
            out.extend(split_linear(&rest));
            return out;
        }
    }
    vec![f.clone()]
}

/// All divisors (up to sign) of a polynomial with integer coefficients, built from
/// its factorization and the divisors of its integer content.
fn divisors(p: &ParamPoly) -> Vec<ParamPoly> {
    let n = p.nvars();
    let content = p.rational_content().abs();
    let mut out = vec![ParamPoly::one(n)];
    if let Some(c) = content.to_integer().to_u64().filter(|c| *c <= MAX_DIVISOR_SEARCH && content.is_integer()) {
        out = (1..=c).filter(|d| c % d == 0).map(|d| ParamPoly::from_int(n, d as i64)).collect();
    }
    if p.is_constant() {
        return out;
    }
    let fac = match factorize(p) {
        Ok(f) => f,
        Err(_) => return out,
    };
    for (g, e) in fac.factors {
        let g = g.primitive();
        let mut next = Vec::new();
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = &acc * &g;
                next.push(acc.clone());
            }
            if next.len() > MAX_LINEAR_CANDIDATES {
                break;
            }
        }
        out = next;
    }
    out
}

fn find_linear_factor(f: &ParamPoly, x: usize) -> Option<ParamPoly> {
    let n = f.nvars();
    let f = f.primitive();
    let coeffs = f.coefficients_in(x);
    let lc = coeffs.last()?.clone();
    let tc = coeffs.first()?.clone();
    if tc.is_zero() {
        return Some(ParamPoly::var(n, x));
    }
    let alphas = divisors(&lc);
    let betas = divisors(&tc);
    let xv = ParamPoly::var(n, x);
    let mut tried = 0usize;
    for a in &alphas {
        let ax = a * &xv;
        for b in &betas {
            for sign in [1i64, -1] {
                tried += 1;
                if tried > MAX_LINEAR_CANDIDATES {
                    return None;
                }
                let cand = &ax + &b.scale(&BigRational::from_integer(BigInt::from(sign)));
                if !linear_candidate_coprime(a, b) {
                    continue;
                }
                if f.exact_div(&cand).is_some() {
                    return Some(cand.monic());
                }
            }
        }
    }
    None
}

fn linear_candidate_coprime(a: &ParamPoly, b: &ParamPoly) -> bool {
    if a.is_constant() || b.is_constant() {
        return true;
    }
    gcd_rec(a, b).is_constant()
}
