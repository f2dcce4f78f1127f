//! Transpose, inverses, kernels, rank and dimension of presentation matrices.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::arith::fraction::compose_poly;
use crate::arith::monomial::Monomial;
use crate::arith::ParamFraction;
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, lift, syzygies, ModElement, ModMatrix};
use crate::ordering::{ComponentOrder, ModOrder, Scheme};

pub fn transpose(m: &ModMatrix) -> ModMatrix {
    m.transpose()
}

/// `true` when the columns of `m` generate the whole free module.
pub fn spans_free_module(m: &ModMatrix, order: &ModOrder) -> Result<bool> {
    // the reduced basis of the free module is the set of unit vectors, in some order
    let gb = groebner_basis(m, order)?;
    let units = ModMatrix::identity(m.nrows(), m.nvars(), m.nparams());
    Ok(gb.ncols() == m.nrows() && units.columns().iter().all(|u| gb.columns().contains(u)))
}

/// `L` with `L*M = Id`, or `None` when no left inverse exists.
pub fn left_inverse(m: &ModMatrix, order: &ModOrder) -> Result<Option<ModMatrix>> {
    let mt = m.transpose();
    if !spans_free_module(&mt, order)? {
        return Ok(None);
    }
    let k = lift(&mt, &ModMatrix::identity(mt.nrows(), m.nvars(), m.nparams()), order)?;
    Ok(Some(k.transpose()))
}

/// `X` with `M*X = Id`, or `None`.
pub fn right_inverse(m: &ModMatrix, order: &ModOrder) -> Result<Option<ModMatrix>> {
    Ok(left_inverse(&m.transpose(), order)?.map(|l| l.transpose()))
}

/// Columns generating `{x : M*x = 0}`.
pub fn right_kernel(m: &ModMatrix, order: &ModOrder) -> Result<ModMatrix> {
    syzygies(m, order)
}

/// Rows generating `{y : y*M = 0}`.
pub fn left_kernel(m: &ModMatrix, order: &ModOrder) -> Result<ModMatrix> {
    Ok(right_kernel(&m.transpose(), order)?.transpose())
}

/// Rank over the fraction field of the column span of `m`.
///
/// Computed from a position-over-term basis: its elements are in echelon form, so the
/// rank is the number of distinct leading components.
pub fn module_rank(m: &ModMatrix, order: &ModOrder) -> Result<usize> {
    let comps = match order.scheme {
        Scheme::TermOverPosition(c) | Scheme::PositionOverTerm(c) => c,
    };
    let pot = ModOrder { base: order.base.clone(), scheme: Scheme::PositionOverTerm(comps), tag_start: None };
    let gb = groebner_basis(m, &pot)?;
    let mut leads: Vec<usize> = gb.columns().iter().filter_map(|c| c.lead(&pot).map(|l| l.1)).collect();
    leads.sort_unstable();
    leads.dedup();
    Ok(leads.len())
}

/// Column rank: number of columns minus the rank of the syzygy module.
pub fn column_rank(m: &ModMatrix, order: &ModOrder) -> Result<usize> {
    let s = syzygies(m, order)?;
    Ok(m.ncols() - module_rank(&s, order)?)
}

/// Krull dimension of `A^q / A^{1 x p} R` read off the staircase of leading terms,
/// `-1` for the zero module.
pub fn system_dimension(r: &ModMatrix, order: &ModOrder) -> Result<i64> {
    let rows_as_columns = r.transpose();
    let gb = groebner_basis(&rows_as_columns, order)?;
    let n = r.nvars();
    let mut per_comp: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
    for c in gb.columns() {
        if let Some((m, i)) = c.lead(order) {
            per_comp.entry(i).or_default().push(m);
        }
    }
    let mut best = -1i64;
    for i in 0..rows_as_columns.nrows() {
        let d = match per_comp.get(&i) {
            None => n as i64,
            Some(gens) => monomial_ideal_dimension(gens, n),
        };
        best = best.max(d);
    }
    Ok(best)
}

/// Dimension of `K[x_1..x_n]/J` for the monomial ideal `J` (`-1` if `J` contains 1).
pub fn monomial_ideal_dimension(gens: &[Monomial], n: usize) -> i64 {
    if gens.iter().any(|g| g.is_one()) {
        return -1;
    }
    let supports: Vec<u64> = gens.iter().map(|g| g.support().fold(0u64, |acc, i| acc | (1 << i))).collect();
    assert!(n < 64, "too many variables for the subset search");
    let mut best = 0i64;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as i64;
        if size <= best {
            continue;
        }
        // independent: no generator is supported inside `set`
        if supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    best
}

/// Substitutes `images[i]` (over `nparams` parameters) for parameter `i` in every entry.
pub fn substitute_params(m: &ModMatrix, images: &[ParamFraction], nparams: usize) -> Result<ModMatrix> {
    m.map_coeffs(nparams, |c| c.substitute(images, nparams))
}

/// Specializes all parameters to rationals, giving a matrix over `Q[d]`.
pub fn specialize(m: &ModMatrix, point: &[BigRational]) -> Result<ModMatrix> {
    let images: Vec<ParamFraction> = point.iter().map(|q| ParamFraction::constant(0, q.clone())).collect();
    m.map_coeffs(0, |c| {
        let n = compose_poly(c.numer(), &images, 0)?;
        let d = compose_poly(c.denom(), &images, 0)?;
        if d.is_zero() {
            return Err(Error::VanishingDenominator(format!("{:?}", c.denom())));
        }
        n.checked_div(&d)
    })
}

/// Canonical column set: each column made primitive with positive leading coefficient.
pub fn canonize_columns(m: &ModMatrix, order: &ModOrder) -> ModMatrix {
    let cols: Vec<ModElement> = m.columns().iter().map(|c| c.primitive(order)).collect();
    ModMatrix::new(m.nrows(), m.nvars(), m.nparams(), cols).expect("same shape")
}

/// The descending term-over-position ordering over degrevlex.
pub fn default_order() -> ModOrder {
    ModOrder::top(crate::ordering::MonoOrder::DegRevLex, ComponentOrder::Descending)
}
