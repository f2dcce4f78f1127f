//! Ideals of the parameter ring `Q[p_1, ..., p_t]`: bases, radical membership, emptiness.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Signed;

use crate::arith::monomial::Monomial;
use crate::arith::ParamPoly;
use crate::error::Result;
use crate::groebner::engine::{groebner, Ctx, Term, Vector};
use crate::groebner::{DenominatorLog, GbConfig, Rationals};
use crate::ordering::{ComponentOrder, ModOrder, MonoOrder};

/// Pair budget for a single parameter-ring basis; exceeding it yields `BudgetExhausted`.
pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

fn as_module_order(order: &MonoOrder) -> ModOrder {
    ModOrder::top(order.clone(), ComponentOrder::Descending)
}

fn to_vector(ctx: &Ctx<'_, Rationals>, p: &ParamPoly) -> Vector<BigRational> {
    ctx.vector(p.terms().iter().map(|(m, c)| Term { mono: m.clone(), comp: 0, coeff: c.clone() }).collect())
}

fn from_vector(v: &Vector<BigRational>, nvars: usize) -> ParamPoly {
    ParamPoly::from_terms(nvars, v.terms.iter().map(|t| (t.mono.clone(), t.coeff.clone())))
}

/// Reduced Gröbner basis of `gens` in `nvars` variables, each element primitive over the
/// integers with positive leading coefficient, sorted ascending by leading monomial.
pub fn ideal_gb(gens: &[ParamPoly], nvars: usize, order: &MonoOrder) -> Result<Vec<ParamPoly>> {
    ideal_gb_with(gens, nvars, order, DEFAULT_PAIR_BUDGET)
}

pub fn ideal_gb_with(gens: &[ParamPoly], nvars: usize, order: &MonoOrder, max_pairs: usize) -> Result<Vec<ParamPoly>> {
    let field = Rationals;
    let mo = as_module_order(order);
    let ctx = Ctx::new(&field, &mo);
    let vs: Vec<_> = gens.iter().filter(|p| !p.is_zero()).map(|p| to_vector(&ctx, p)).collect();
    let cfg = GbConfig { max_pairs: Some(max_pairs), skip_tag_pairs: false, product_criterion: true };
    let gb = groebner(&ctx, vs, &cfg, &mut DenominatorLog::default())?;
    Ok(gb.iter().map(|v| integral(&from_vector(v, nvars), order)).collect())
}

/// `p` scaled to coprime integer coefficients with positive leading coefficient under `order`.
pub fn integral(p: &ParamPoly, order: &MonoOrder) -> ParamPoly {
    let q = p.primitive();
    match leading_term(&q, order) {
        Some((_, c)) if c.is_negative() => -&q,
        _ => q,
    }
}

/// Leading monomial and coefficient under `order`.
pub fn leading_term<'a>(p: &'a ParamPoly, order: &MonoOrder) -> Option<(&'a Monomial, &'a BigRational)> {
    p.terms()
        .iter()
        .max_by(|a, b| order.cmp(&a.0, &b.0))
        .map(|(m, c)| (m, c))
}

/// `true` when the reduced basis is `{1}`.
pub fn is_unit_ideal(gb: &[ParamPoly]) -> bool {
    gb.len() == 1 && gb[0].is_constant()
}

/// Remainder of `f` modulo the basis `gb`.
pub fn reduce(f: &ParamPoly, gb: &[ParamPoly], order: &MonoOrder) -> ParamPoly {
    let field = Rationals;
    let mo = as_module_order(order);
    let ctx = Ctx::new(&field, &mo);
    let basis: Vec<_> = gb.iter().map(|g| to_vector(&ctx, g)).collect();
    from_vector(&ctx.normal_form(&to_vector(&ctx, f), &basis), f.nvars())
}

/// Ideal membership of `f` in the ideal with basis `gb`.
pub fn ideal_contains(gb: &[ParamPoly], f: &ParamPoly, order: &MonoOrder) -> bool {
    reduce(f, gb, order).is_zero()
}

/// `V(gens) ⊆ V(f_1) ∪ ... ∪ V(f_k)` for `avoid = [f_1..f_k]`, i.e. `V(gens) \ V(∏ f)` is
/// empty. Certified by `1 ∈ <gens, 1 - y_1 f_1, ..., 1 - y_k f_k>` with one fresh variable
/// per inequation.
pub fn locus_is_empty(gens: &[ParamPoly], avoid: &[ParamPoly], nvars: usize) -> Result<bool> {
    locus_is_empty_with(gens, avoid, nvars, DEFAULT_PAIR_BUDGET)
}

pub fn locus_is_empty_with(gens: &[ParamPoly], avoid: &[ParamPoly], nvars: usize, max_pairs: usize) -> Result<bool> {
    let k = avoid.len();
    let total = nvars + k;
    let embed: Vec<usize> = (0..nvars).collect();
    let mut ext: Vec<ParamPoly> = gens.iter().map(|g| g.remap(&embed, total)).collect();
    for (i, f) in avoid.iter().enumerate() {
        let y = ParamPoly::var(total, nvars + i);
        ext.push(&ParamPoly::one(total) - &(&y * &f.remap(&embed, total)));
    }
    // membership of 1 does not depend on the ordering
    let gb = ideal_gb_with(&ext, total, &MonoOrder::DegRevLex, max_pairs)?;
    Ok(is_unit_ideal(&gb))
}

/// Radical membership `f ∈ √<gens>`.
pub fn in_radical(f: &ParamPoly, gens: &[ParamPoly], nvars: usize) -> Result<bool> {
    locus_is_empty(gens, std::slice::from_ref(f), nvars)
}

/// Compares ideals given by reduced bases under the same ordering.
pub fn ideal_cmp(a: &[ParamPoly], b: &[ParamPoly]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let o = crate::arith::factor::cmp_polys(x, y);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// `true` when every generator of `b` lies in the ideal with basis `a` (so `V(a) ⊆ V(b)`).
pub fn ideal_contains_all(a: &[ParamPoly], b: &[ParamPoly], order: &MonoOrder) -> bool {
    b.iter().all(|g| ideal_contains(a, g, order))
}

/// Product of polynomials (`1` for the empty list).
pub fn product(ps: &[ParamPoly], nvars: usize) -> ParamPoly {
    ps.iter().fold(ParamPoly::one(nvars), |acc, p| &acc * p)
}
