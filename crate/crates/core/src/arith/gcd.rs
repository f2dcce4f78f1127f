//! Multivariate polynomial gcd over the rationals.
//!
//! The polynomial is viewed as univariate in one shared variable with coefficients
//! in the remaining ones; contents are extracted recursively and the primitive parts
//! are combined with the subresultant remainder sequence.
//!
//! Two exact shortcuts run first: a modular certificate that the primitive parts are
//! coprime, and (for few variables) a candidate from evaluation at large integers that
//! is accepted only after trial division and a coprimality certificate for the cofactors.

use super::param_poly::ParamPoly;
use crate::error::{Error, Result};

/// Monic greatest common divisor. `gcd(a, 0)` is `monic(a)`.
pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> Result<ParamPoly> {
    if a.nvars() != b.nvars() {
        return Err(Error::ArityMismatch { expected: a.nvars(), found: b.nvars() });
    }
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::ZeroGcd),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => Ok(gcd_rec(a, b).monic()),
    }
}

/// Gcd of a list of polynomials (zeros ignored); `None` if all are zero.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a ParamPoly>) -> Option<ParamPoly> {
    let mut acc: Option<ParamPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.clone(),
            Some(g) => {
                if g.is_constant() {
                    return Some(g.monic());
                }
                gcd_rec(&g, p)
            }
        });
    }
    acc.map(|g| g.monic())
}

pub fn lcm(a: &ParamPoly, b: &ParamPoly) -> Result<ParamPoly> {
    if a.is_zero() || b.is_zero() {
        return Ok(ParamPoly::zero(a.nvars()));
    }
    let g = gcd(a, b)?;
    Ok((a * &b.exact_div(&g).expect("gcd divides")).monic())
}

/// Gcd up to a rational unit; both inputs nonzero.
pub(crate) fn gcd_rec(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one(n);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let mono_gcd = ParamPoly::monomial(mg, num_traits::One::one());
    if a.is_monomial() || b.is_monomial() {
        return mono_gcd;
    }
    let a1 = divide_by_monomial(a, &ma);
    let b1 = divide_by_monomial(b, &mb);
    let core = gcd_no_monomial(a1, b1);
    &core * &mono_gcd
}

/// Fast path: a candidate from evaluation at large integers, accepted only when it divides
/// both inputs and the cofactors are certified coprime. `None` leaves the exact algorithm
/// to decide.
fn heuristic_gcd(a: &ParamPoly, b: &ParamPoly) -> Option<ParamPoly> {
    let (a, b) = (a.primitive(), b.primitive());
    let mut budget = HEU_CALLS;
    let h = heu_rec(&a, &b, &mut budget)?;
    let ca = a.exact_div(&h)?;
    let cb = b.exact_div(&h)?;
    let vb = cb.variables();
    let shared: Vec<usize> = ca.variables().into_iter().filter(|v| vb.contains(v)).collect();
    if shared.iter().all(|&v| coprime_by_evaluation(&ca.coefficients_in(v), &cb.coefficients_in(v), a.nvars())) {
        Some(h)
    } else {
        None
    }
}

fn max_norm(p: &ParamPoly) -> num_bigint::BigInt {
    use num_traits::Signed;
    p.terms().iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// `p` with variable `v` set to the integer `xi`.
fn eval_var(p: &ParamPoly, v: usize, xi: &num_bigint::BigInt) -> ParamPoly {
    let xi = num_rational::BigRational::from_integer(xi.clone());
    let coeffs = p.coefficients_in(v);
    let mut acc = ParamPoly::zero(p.nvars());
    for c in coeffs.iter().rev() {
        acc = &acc.scale(&xi) + c;
    }
    acc
}

/// Inverse of [`eval_var`] for small coefficients: the `xi`-adic digits of each integer
/// coefficient, taken in the symmetric range, become the coefficients of `v^i`.
fn interpolate(h: &ParamPoly, v: usize, xi: &num_bigint::BigInt) -> ParamPoly {
    use num_integer::Integer;
    let n = h.nvars();
    let half = xi / 2;
    let mut rest: Vec<(super::monomial::Monomial, num_bigint::BigInt)> =
        h.terms().iter().map(|(m, c)| (m.clone(), c.numer().clone())).collect();
    let mut terms = Vec::new();
    let mut power = 0u32;
    while !rest.is_empty() {
        let mut next = Vec::new();
        for (m, c) in rest {
            let mut digit = c.mod_floor(xi);
            if digit > half {
                digit -= xi;
            }
            if !num_traits::Zero::is_zero(&digit) {
                let mut mm = m.clone();
                mm.set_exponent(v, power);
                terms.push((mm, num_rational::BigRational::from_integer(digit.clone())));
            }
            let q = (c - digit) / xi;
            if !num_traits::Zero::is_zero(&q) {
                next.push((m, q));
            }
        }
        rest = next;
        power += 1;
        if power > 1 << 12 {
            break;
        }
    }
    ParamPoly::from_terms(n, terms)
}

const HEU_MAX_VARS: usize = 4;
/// Evaluations allowed per top-level attempt; the recursion is exponential in the number
/// of variables when evaluations are unlucky.
const HEU_CALLS: usize = 48;
/// Largest evaluation point, in bits, before giving up.
const HEU_MAX_BITS: u64 = 2048;

/// Gcd over the integers, including the integer content, up to sign; `None` on failure.
fn heu_rec(a: &ParamPoly, b: &ParamPoly, budget: &mut usize) -> Option<ParamPoly> {
    use num_integer::Integer;
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        let ints = a.terms().iter().chain(b.terms()).map(|(_, c)| c.numer().clone());
        let g = ints.fold(num_bigint::BigInt::default(), |acc, c| acc.gcd(&c));
        return Some(ParamPoly::constant(n, num_rational::BigRational::from_integer(g)));
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let int_content = |p: &ParamPoly| p.terms().iter().fold(num_bigint::BigInt::default(), |acc, (_, c)| acc.gcd(c.numer()));
    let cont = int_content(a).gcd(&int_content(b));
    let (pa, pb) = (a.primitive(), b.primitive());
    let mut vars = pa.variables();
    vars.extend(pb.variables());
    let v = *vars.iter().max().expect("nonconstant");
    let two = num_bigint::BigInt::from(2);
    let mut xi: num_bigint::BigInt = max_norm(&pa).min(max_norm(&pb)) * &two + 29;
    let degree = pa.degree_in(v).max(pb.degree_in(v)) as u64;
    for _ in 0..6 {
        if xi.bits() * degree.max(1) > HEU_MAX_BITS {
            return None;
        }
        let (ea, eb) = (eval_var(&pa, v, &xi), eval_var(&pb, v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(he) = heu_rec(&ea, &eb, budget) {
                let h = interpolate(&he, v, &xi);
                if !h.is_zero() {
                    let h = h.primitive();
                    if pa.exact_div(&h).is_some() && pb.exact_div(&h).is_some() {
                        return Some(h.scale(&num_rational::BigRational::from_integer(cont)));
                    }
                }
            }
        }
        xi = &xi * 73794 * xi.sqrt().sqrt() / 27011;
    }
    None
}

fn divide_by_monomial(p: &ParamPoly, m: &super::monomial::Monomial) -> ParamPoly {
    if m.is_one() {
        return p.clone();
    }
    p.exact_div(&ParamPoly::monomial(m.clone(), num_traits::One::one())).expect("monomial content divides")
}

/// Gcd of two polynomials without monomial content.
fn gcd_no_monomial(mut a: ParamPoly, mut b: ParamPoly) -> ParamPoly {
    let n = a.nvars();
    loop {
        if a.is_constant() || b.is_constant() {
            return ParamPoly::one(n);
        }
        if a == b {
            return a;
        }
        let va = a.variables();
        let vb = b.variables();
        // a variable missing from one side can only contribute through the content
        if let Some(&x) = va.iter().find(|x| !vb.contains(x)) {
            a = content_in(&a, x);
            continue;
        }
        if let Some(&x) = vb.iter().find(|x| !va.contains(x)) {
            b = content_in(&b, x);
            continue;
        }
        break;
    }
    // cheap divisibility shortcut
    if b.num_terms() <= a.num_terms() {
        if a.exact_div(&b).is_some() {
            return b;
        }
    } else if b.exact_div(&a).is_some() {
        return a;
    }
    let vars = a.variables();
    let x = *vars
        .iter()
        .min_by_key(|&&x| (a.degree_in(x).max(b.degree_in(x)), x))
        .expect("nonconstant polynomial has a variable");
    let ca = a.coefficients_in(x);
    let cb = b.coefficients_in(x);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let c = gcd_rec(&conta, &contb);
    let pa: Vec<ParamPoly> = ca.iter().map(|p| p.exact_div(&conta).expect("content divides")).collect();
    let pb: Vec<ParamPoly> = cb.iter().map(|p| p.exact_div(&contb).expect("content divides")).collect();
    if coprime_by_evaluation(&pa, &pb, n) {
        return c;
    }
    // the evaluation heuristic pays off only with few variables
    if vars.len() <= HEU_MAX_VARS {
        let (fa, fb) = (ParamPoly::from_coefficients_in(n, x, &pa), ParamPoly::from_coefficients_in(n, x, &pb));
        if let Some(h) = heuristic_gcd(&fa, &fb) {
            return &h * &c;
        }
    }
    let g = subresultant_gcd(pa, pb);
    let g = ParamPoly::from_coefficients_in(n, x, &g);
    &g * &c
}

/// Modulus of the coprimality certificate, `2^61 - 1`.
const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce_rational(c: &num_rational::BigRational) -> Option<u64> {
    use num_traits::ToPrimitive;
    let p = num_bigint::BigInt::from(PRIME);
    let residue = |v: &num_bigint::BigInt| -> u64 {
        let r = v % &p;
        let r = if r.sign() == num_bigint::Sign::Minus { r + &p } else { r };
        r.to_u64().expect("residue fits")
    };
    let d = residue(c.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(residue(c.numer()), powmod(d, PRIME - 2)))
}

fn eval_mod(p: &ParamPoly, point: &[u64]) -> Option<u64> {
    let mut acc = 0u64;
    for (m, c) in p.terms() {
        let mut t = reduce_rational(c)?;
        for (v, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = mulmod(t, powmod(point[v], e as u64));
            }
        }
        acc = (acc + t) % PRIME;
    }
    Some(acc)
}

/// Degree of the gcd of two univariate polynomials over `F_p`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = powmod(*b.last().unwrap(), PRIME - 2);
        while a.len() >= b.len() {
            let q = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + PRIME - mulmod(q, bc)) % PRIME;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Certifies that two primitive univariate polynomials (coefficients in the other
/// variables) have no common factor of positive degree.
///
/// At a point where both leading coefficients survive reduction mod `PRIME`, a common
/// factor of degree `k` would survive too (Gauss's lemma), so a specialized gcd of degree
/// zero is a proof. `false` means "not certified", not "not coprime".
fn coprime_by_evaluation(a: &UPoly, b: &UPoly, nvars: usize) -> bool {
    for attempt in 0..2u64 {
        let point: Vec<u64> = (0..nvars as u64).map(|v| 1_000_003 + 7919 * v + 104_729 * attempt + v * v).collect();
        let ea: Option<Vec<u64>> = a.iter().map(|c| eval_mod(c, &point)).collect();
        let eb: Option<Vec<u64>> = b.iter().map(|c| eval_mod(c, &point)).collect();
        let (Some(ea), Some(eb)) = (ea, eb) else { return false };
        let lead_survives = |orig: &UPoly, ev: &[u64]| udeg(orig).map_or(false, |d| ev[d] != 0);
        if !lead_survives(a, &ea) || !lead_survives(b, &eb) {
            continue;
        }
        return gcd_degree_mod(ea, eb) == 0;
    }
    false
}

/// Content with respect to `x`: gcd of the coefficients of `p` seen as a polynomial in `x`.
pub(crate) fn content_in(p: &ParamPoly, x: usize) -> ParamPoly {
    content_of(&p.coefficients_in(x))
}

fn content_of(coeffs: &[ParamPoly]) -> ParamPoly {
    let mut nonzero: Vec<&ParamPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // start from the smallest coefficient, it bounds the gcd
    nonzero.sort_by_key(|c| (c.total_degree(), c.num_terms()));
    let mut it = nonzero.into_iter();
    let mut g = it.next().expect("nonzero polynomial").clone();
    for c in it {
        if g.is_constant() {
            break;
        }
        g = gcd_rec(&g, c);
    }
    g
}

type UPoly = Vec<ParamPoly>;

fn udeg(p: &UPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn utrim(p: &mut UPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn uprem(a: &UPoly, b: &UPoly) -> UPoly {
    let db = udeg(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = a.clone();
    utrim(&mut r);
    let da = match udeg(&r) {
        Some(d) => d,
        None => return r,
    };
    if da < db {
        return r;
    }
    let mut e = da - db + 1;
    while let Some(dr) = udeg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                r[i + shift] = &r[i + shift] - &(&lr * bc);
            }
        }
        utrim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Primitive gcd of two primitive univariate polynomials via the subresultant PRS.
fn subresultant_gcd(mut a: UPoly, mut b: UPoly) -> UPoly {
    utrim(&mut a);
    utrim(&mut b);
    let n = a[0].nvars();
    if udeg(&a) < udeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = ParamPoly::one(n);
    let mut h = ParamPoly::one(n);
    loop {
        let da = udeg(&a).unwrap();
        let db = udeg(&b).unwrap();
        if db == 0 {
            return vec![ParamPoly::one(n)];
        }
        let delta = (da - db) as u32;
        let r = uprem(&a, &b);
        match udeg(&r) {
            None => break,
            Some(0) => return vec![ParamPoly::one(n)],
            Some(_) => {}
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r.iter().map(|c| c.exact_div(&divisor).expect("subresultant division is exact")).collect();
        g = a[udeg(&a).unwrap()].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant h update is exact")
        };
    }
    let cont = content_of(&b);
    b.iter().map(|c| c.exact_div(&cont).expect("content divides")).collect()
}
