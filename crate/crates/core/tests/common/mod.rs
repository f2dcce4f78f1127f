//! Helpers shared by the integration suites: comparison up to units, S-vectors, seeded
//! random instances.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use parametra_core::arith::{ParamFraction, ParamPoly};
use parametra_core::groebner::{groebner_basis, normal_form, ModElement, ModMatrix, OpPoly};
use parametra_core::ideal::{in_radical, locus_is_empty};
use parametra_core::ordering::ModOrder;
use parametra_core::stratify::{Stratum, StratumStatus};
use parametra_core::Ring;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `b = c * a` for a nonzero `c` in the coefficient field.
pub fn unit_multiple(a: &OpPoly, b: &OpPoly) -> Option<ParamFraction> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let c = b.leading_coeff()?.checked_div(a.leading_coeff()?).ok()?;
    (a.scale(&c) == *b).then_some(c)
}

pub fn proportional(a: &OpPoly, b: &OpPoly) -> bool {
    (a.is_zero() && b.is_zero()) || unit_multiple(a, b).is_some()
}

/// Proportional by a nonzero rational number, not just a unit of the coefficient field.
pub fn rationally_proportional(a: &OpPoly, b: &OpPoly) -> bool {
    unit_multiple(a, b).map_or(false, |c| c.is_constant())
}

/// Entry lists equal up to one common nonzero factor.
pub fn vectors_proportional(a: &[OpPoly], b: &[OpPoly]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(k) = a.iter().position(|p| !p.is_zero()) else {
        return b.iter().all(|p| p.is_zero());
    };
    let Some(c) = unit_multiple(&a[k], &b[k]) else { return false };
    a.iter().zip(b).all(|(x, y)| x.scale(&c) == *y)
}

/// The ideal list is a single generator proportional to `want`.
pub fn principal_like(got: &[OpPoly], want: &OpPoly) -> bool {
    got.len() == 1 && proportional(&got[0], want)
}

/// Same set of polynomials up to rational constants.
pub fn same_poly_set(got: &[ParamPoly], want: &[ParamPoly]) -> bool {
    let norm = |v: &[ParamPoly]| {
        let mut out: Vec<String> = v.iter().map(|p| format!("{:?}", p.monic())).collect();
        out.sort();
        out.dedup();
        out
    };
    got.len() == want.len() && norm(got) == norm(want)
}

pub fn render_polys(ring: &Ring, v: &[ParamPoly]) -> String {
    v.iter().map(|p| ring.render_param_poly(p)).collect::<Vec<_>>().join(", ")
}

/// Parses `text` in `ring` with extra names bound to expressions of `ring`.
pub fn parse_bound(ring: &Ring, text: &str, bindings: &[(&str, &str)]) -> OpPoly {
    let map = bindings.iter().map(|(k, v)| (k.to_string(), ring.poly(v))).collect();
    ring.parse_with(text, &map).unwrap_or_else(|e| panic!("cannot parse `{text}`: {e}"))
}

pub fn matrix_bound(ring: &Ring, rows: &[&[&str]], bindings: &[(&str, &str)]) -> ModMatrix {
    let rows = rows.iter().map(|r| r.iter().map(|e| parse_bound(ring, e, bindings)).collect()).collect();
    ModMatrix::from_rows(ring.nvars(), ring.nparams(), rows).expect("rectangular")
}

fn lead_coeff(v: &ModElement, m: &parametra_core::arith::Monomial, comp: usize) -> ParamFraction {
    v.entry(comp).and_then(|p| p.terms().iter().find(|(t, _)| t == m).map(|(_, c)| c.clone())).expect("leading term present")
}

/// S-vector of two columns with the same leading component.
pub fn s_vector(a: &ModElement, b: &ModElement, order: &ModOrder) -> Option<ModElement> {
    let (ma, ia) = a.lead(order)?;
    let (mb, ib) = b.lead(order)?;
    if ia != ib {
        return None;
    }
    let l = ma.lcm(&mb);
    let fa = OpPoly::monomial(ma.quotient_of(&l)?, lead_coeff(a, &ma, ia).inv().ok()?);
    let fb = OpPoly::monomial(mb.quotient_of(&l)?, lead_coeff(b, &mb, ib).inv().ok()?);
    Some(a.scale_poly(&fa).sub(&b.scale_poly(&fb)))
}

/// Every S-vector of the columns of `g` reduces to zero modulo `g`.
pub fn buchberger_criterion(g: &ModMatrix, order: &ModOrder) -> bool {
    let cols = g.columns();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            if let Some(s) = s_vector(&cols[i], &cols[j], order) {
                if !normal_form(&s, g, order).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Every column of `a` lies in the span of `b`.
pub fn contained(a: &ModMatrix, b: &ModMatrix, order: &ModOrder) -> bool {
    let gb = groebner_basis(b, order).expect("basis");
    a.columns().iter().all(|c| normal_form(c, &gb, order).is_zero())
}

const INT_COEFFS: [&str; 5] = ["1", "2", "-1", "-3", "5"];
const PARAM_COEFFS: [&str; 6] = ["a", "b", "c", "a+1", "a-b", "2*c"];
const DEN_COEFFS: [&str; 4] = ["1/a", "b/(a+1)", "1/(b-c)", "(a-1)/b"];
/// Share of parametric coefficients; denser parameters make exact coefficient growth
/// dominate the run time without exercising anything new.
const PARAM_SHARE: f64 = 0.25;

/// Random operator polynomial over `Q(a,b,c)[x,y]` with monomials of degree `<= max_deg`.
pub fn random_entry(ring: &Ring, rng: &mut ChaCha8Rng, max_deg: u32, fractions: bool) -> String {
    if rng.gen_bool(0.3) {
        return "0".into();
    }
    let terms = rng.gen_range(1..=3);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let c = if fractions && rng.gen_bool(0.1) {
            DEN_COEFFS[rng.gen_range(0..DEN_COEFFS.len())]
        } else if rng.gen_bool(PARAM_SHARE) {
            PARAM_COEFFS[rng.gen_range(0..PARAM_COEFFS.len())]
        } else {
            INT_COEFFS[rng.gen_range(0..INT_COEFFS.len())]
        };
        let mut mono = Vec::new();
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            mono.push(ring.vars[rng.gen_range(0..ring.nvars())].clone());
        }
        let m = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
        parts.push(format!("({c})*{m}"));
    }
    parts.join("+")
}

/// The ring of the random instances: parameters `a, b, c`, operator variables `x, y`.
pub fn random_ring() -> Ring {
    Ring::new(&["a", "b", "c"], &["x", "y"], ModOrder::default())
}

/// Random matrix of at most `max_rows x max_cols`.
pub fn random_matrix(ring: &Ring, rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize, max_deg: u32) -> ModMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let fractions = rng.gen_bool(0.3);
    let texts: Vec<Vec<String>> = (0..rows).map(|_| (0..cols).map(|_| random_entry(ring, rng, max_deg, fractions)).collect()).collect();
    let refs: Vec<Vec<&str>> = texts.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    let rows: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
    ring.matrix(&rows)
}

/// A column stack `E * [I_k; 0]` for a product `E` of elementary matrices; it has a left
/// inverse by construction.
pub fn unimodular_columns(ring: &Ring, rng: &mut ChaCha8Rng, n: usize, k: usize) -> ModMatrix {
    let (nv, np) = (ring.nvars(), ring.nparams());
    let mut e = ModMatrix::identity(n, nv, np);
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let mut step = ModMatrix::identity(n, nv, np);
        step.set(i, j, ring.poly(&random_entry(ring, rng, 1, false)));
        e = step.checked_mul(&e).expect("square");
    }
    e.select_columns(0..k)
}

/// Certifies the components of `V(eqs) \ V(∏ ineqs)`:
/// each lies in `V(eqs)`, none lies inside `V(∏ ineqs)`, and together they cover the locus
/// (checked over all choices of one generator per component when that is small).
pub fn certify_components(eqs: &[ParamPoly], ineqs: &[ParamPoly], comps: &[Stratum], nvars: usize) -> Result<(), String> {
    for (k, c) in comps.iter().enumerate() {
        if c.status != StratumStatus::NonEmpty {
            return Err(format!("component {k} is not certified nonempty"));
        }
        for f in eqs {
            if !in_radical(f, &c.equations, nvars).map_err(|e| e.to_string())? {
                return Err(format!("component {k}: an equation is not in the radical of its ideal"));
            }
        }
        if locus_is_empty(&c.equations, ineqs, nvars).map_err(|e| e.to_string())? {
            return Err(format!("component {k} lies inside the excluded set"));
        }
    }
    let choices: usize = comps.iter().map(|c| c.equations.len()).product();
    if choices > 64 {
        return Ok(());
    }
    let excl = ineqs.iter().fold(ParamPoly::one(nvars), |acc, p| &acc * p);
    // V(eqs) \ V(excl) is inside the union iff every product g_1*...*g_r*excl is in rad(eqs)
    let mut idx = vec![0usize; comps.len()];
    loop {
        let prod = comps.iter().zip(&idx).fold(excl.clone(), |acc, (c, &i)| &acc * &c.equations[i]);
        if !in_radical(&prod, eqs, nvars).map_err(|e| e.to_string())? {
            return Err("components do not cover the locus".into());
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < comps[k].equations.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Point with coordinates in `1..=hi` avoiding the zero sets of `avoid`.
pub fn admissible_point(rng: &mut ChaCha8Rng, n: usize, hi: i64, avoid: &[ParamPoly]) -> Vec<BigRational> {
    loop {
        let p: Vec<BigRational> = (0..n).map(|_| q(rng.gen_range(1..=hi))).collect();
        if avoid.iter().all(|f| !f.eval(&p).is_zero()) {
            return p;
        }
    }
}
