//! Gröbner basis, syzygies and transformation matrix from one run over tagged generators.
//!
//! Generator `f_k` in `F^m` is extended to `(f_k, e_k)` in `F^(m+l)`; the ordering puts all
//! tag components below the real ones. Basis elements with a real leading term give the
//! basis and the transformation; those with a tag leading term are syzygies.

use crate::arith::monomial::Monomial;
use crate::error::{Error, Result};
use crate::ordering::ModOrder;

use super::engine::{groebner, Ctx, DenominatorLog, GbConfig, Term, Vector};
use super::field::CoeffField;

/// A Gröbner basis of the tagged generators, split into its three parts.
#[derive(Clone, Debug)]
pub struct Split<E> {
    /// Real parts of the elements with real leading term (a Gröbner basis of the span).
    pub gb: Vec<Vector<E>>,
    /// Tag parts of the same elements, shifted to components `0..l`.
    pub transform: Vec<Vector<E>>,
    /// Tag parts of elements with tag leading term (a Gröbner basis of the syzygies).
    pub syzygies: Vec<Vector<E>>,
    /// The full basis under the tagged ordering.
    pub full: Vec<Vector<E>>,
}

/// Tagged generators `(f_k, e_k)` in the ordering `order.lift(m)`.
pub fn tagged<F: CoeffField>(field: &F, order: &ModOrder, gens: &[Vector<F::Elem>], m: usize, nvars: usize) -> Vec<Vector<F::Elem>> {
    let lo = order.lift(m);
    let ctx = Ctx::new(field, &lo);
    gens.iter()
        .enumerate()
        .map(|(k, g)| {
            let mut terms = g.terms.clone();
            terms.push(Term { mono: Monomial::one(nvars), comp: m + k, coeff: field.one() });
            ctx.vector(terms)
        })
        .collect()
}

fn restrict<E: Clone>(v: &Vector<E>, lo: usize, hi: usize) -> Vector<E> {
    Vector {
        terms: v
            .terms
            .iter()
            .filter(|t| t.comp >= lo && t.comp < hi)
            .map(|t| Term { mono: t.mono.clone(), comp: t.comp - lo, coeff: t.coeff.clone() })
            .collect(),
    }
}

/// Runs the tagged computation; `gens` live in components `0..m`.
pub fn split_gb<F: CoeffField>(
    field: &F,
    order: &ModOrder,
    gens: &[Vector<F::Elem>],
    m: usize,
    nvars: usize,
    cfg: &GbConfig,
    log: &mut DenominatorLog,
) -> Result<Split<F::Elem>> {
    let l = gens.len();
    let lo = order.lift(m);
    let ctx = Ctx::new(field, &lo);
    let full = groebner(&ctx, tagged(field, order, gens, m, nvars), cfg, log)?;
    let mut out = Split { gb: Vec::new(), transform: Vec::new(), syzygies: Vec::new(), full: Vec::new() };
    for v in &full {
        if v.terms[0].comp < m {
            out.gb.push(restrict(v, 0, m));
            out.transform.push(restrict(v, m, m + l));
        } else {
            out.syzygies.push(restrict(v, m, m + l));
        }
    }
    out.full = full;
    Ok(out)
}

/// Expresses each target as a combination of the generators.
///
/// The coefficient vectors are normal forms modulo the syzygies, hence canonical
/// for the ordering. Fails on the first target outside the span.
pub fn lift_targets<F: CoeffField>(
    field: &F,
    order: &ModOrder,
    split: &Split<F::Elem>,
    m: usize,
    l: usize,
    targets: &[Vector<F::Elem>],
) -> Result<Vec<Vector<F::Elem>>> {
    let lo = order.lift(m);
    let ctx = Ctx::new(field, &lo);
    let active: Vec<usize> = (0..split.full.len()).collect();
    let mut out = Vec::with_capacity(targets.len());
    for (j, h) in targets.iter().enumerate() {
        let h = ctx.vector(h.terms.clone());
        let r = ctx.full_reduce(h, &split.full, &active);
        if r.terms.first().map_or(false, |t| t.comp < m) {
            return Err(Error::NotInSpan { column: j });
        }
        let neg = field.neg(&field.one());
        let t = restrict(&r, m, m + l);
        out.push(Vector { terms: t.terms.into_iter().map(|x| Term { coeff: field.mul(&neg, &x.coeff), ..x }).collect() });
    }
    Ok(out)
}

/// Syzygies of `gens` (in `0..m`) as vectors in `0..l`, a Gröbner basis under `order`.
pub fn syzygy_vectors<F: CoeffField>(
    field: &F,
    order: &ModOrder,
    gens: &[Vector<F::Elem>],
    m: usize,
    nvars: usize,
) -> Result<Vec<Vector<F::Elem>>> {
    let mut log = DenominatorLog::default();
    Ok(split_gb(field, order, gens, m, nvars, &GbConfig::default(), &mut log)?.syzygies)
}
