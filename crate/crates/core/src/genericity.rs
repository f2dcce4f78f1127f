//! Obstructions to genericity: parameter polynomials whose vanishing may change a basis.

use std::collections::BTreeSet;

use crate::arith::factor::{cmp_polys, factorize};
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::monomial::Monomial;
use crate::arith::{ParamFraction, ParamPoly};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, normal_form, DenomContext, DenominatorLog, ModElement, ModMatrix, OpPoly};
use crate::homological::{ideal_basis, intersect_ideals, quotient_ideal};
use crate::ideal::locus_is_empty;
use crate::module_ops::specialize;
use crate::ordering::{ComponentOrder, ModOrder, MonoOrder};

/// Deduplicated, sorted, monic squarefree factors; `excluded` lists the factors removed
/// by an admissibility filter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObstructionSet {
    pub factors: Vec<ParamPoly>,
    pub excluded: Vec<ParamPoly>,
}

impl ObstructionSet {
    /// Factorizes, deduplicates and sorts (total degree, then terms).
    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a ParamPoly>) -> Result<Self> {
        let mut factors: Vec<ParamPoly> = Vec::new();
        for p in polys {
            if p.is_zero() {
                continue;
            }
            for (f, _) in factorize(p)?.factors {
                if !factors.contains(&f) {
                    factors.push(f);
                }
            }
        }
        factors.sort_by(cmp_polys);
        Ok(ObstructionSet { factors, excluded: Vec::new() })
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn contains(&self, p: &ParamPoly) -> bool {
        self.factors.iter().any(|f| f == &p.monic())
    }

    /// Product of the factors.
    pub fn product(&self, nparams: usize) -> ParamPoly {
        self.factors.iter().fold(ParamPoly::one(nparams), |acc, f| &acc * f)
    }

    /// Session-style text items: single-parameter factors comma-joined in parameter order
    /// as the first item, then one item per remaining factor.
    pub fn render_items(&self, names: &[String]) -> Vec<String> {
        let mut singles: Vec<usize> = Vec::new();
        let mut rest = Vec::new();
        for f in &self.factors {
            match single_parameter(f) {
                Some(i) => singles.push(i),
                None => rest.push(f.render(names)),
            }
        }
        singles.sort_unstable();
        let mut items = Vec::new();
        if !singles.is_empty() {
            items.push(singles.iter().map(|&i| names[i].clone()).collect::<Vec<_>>().join(","));
        }
        items.extend(rest);
        items
    }
}

/// Index of `p` when `p` is a single parameter.
pub fn single_parameter(p: &ParamPoly) -> Option<usize> {
    match p.terms() {
        [(m, c)] if c == &num_rational::BigRational::from_integer(1.into()) && m.degree() == 1 => m.support().next(),
        _ => None,
    }
}

/// Obstructions from a transformation matrix `T` with `gb = M*T`.
///
/// For basis column `j` with leading component `i`, the denominators of `T[k][j]` are
/// collected whenever `M[i][k]` is nonzero.
pub fn genericity(m: &ModMatrix, t: &ModMatrix, order: &ModOrder, log: &mut DenominatorLog) -> Result<ObstructionSet> {
    if m.ncols() != t.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "generators have {} columns but the transformation has {} rows",
            m.ncols(),
            t.nrows()
        )));
    }
    let h = m.checked_mul(t)?;
    for (j, col) in h.columns().iter().enumerate() {
        let Some((_, i)) = col.lead(order) else { continue };
        for k in 0..t.nrows() {
            if m.column(k).entry(i).is_none() {
                continue;
            }
            if let Some(p) = t.column(j).entry(k) {
                for (_, c) in p.terms() {
                    log.record(c.denom().clone(), DenomContext::TransformEntry { row: k, col: j, lead_component: i });
                }
            }
        }
    }
    let polys: Vec<&ParamPoly> = log
        .events
        .iter()
        .filter(|e| matches!(e.context, DenomContext::TransformEntry { .. }))
        .map(|e| &e.denominator)
        .collect();
    ObstructionSet::from_polys(polys)
}

/// As [`genericity`], also including every leading-coefficient division in `log`.
pub fn genericity_with_normalizations(
    m: &ModMatrix,
    t: &ModMatrix,
    order: &ModOrder,
    log: &mut DenominatorLog,
) -> Result<ObstructionSet> {
    genericity(m, t, order, log)?;
    ObstructionSet::from_polys(log.events.iter().map(|e| &e.denominator))
}

/// Obstructions from the denominators of every entry of `T`.
pub fn genericity_of_transform(t: &ModMatrix) -> Result<ObstructionSet> {
    let mut dens = Vec::new();
    for col in t.columns() {
        for (_, p) in col.entries() {
            for (_, c) in p.terms() {
                if !c.denom().is_constant() {
                    dens.push(c.denom().clone());
                }
            }
        }
    }
    ObstructionSet::from_polys(dens.iter())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignConstraint {
    Positive,
    NonNegative,
    NonZero,
}

/// Removes factors that cannot vanish under the constraints: single parameters that are
/// positive or nonzero, and monomials in such parameters.
pub fn admissibility_filter(s: &ObstructionSet, constraints: &[(usize, SignConstraint)]) -> ObstructionSet {
    let nonvanishing: BTreeSet<usize> = constraints
        .iter()
        .filter(|(_, c)| matches!(c, SignConstraint::Positive | SignConstraint::NonZero))
        .map(|(i, _)| *i)
        .collect();
    let mut out = ObstructionSet { factors: Vec::new(), excluded: s.excluded.clone() };
    for f in &s.factors {
        let drop = f.is_monomial() && f.leading_monomial().map_or(false, |m| m.support().all(|i| nonvanishing.contains(&i)));
        if drop {
            out.excluded.push(f.clone());
        } else {
            out.factors.push(f.clone());
        }
    }
    out
}

/// Result of the comparison method with parameters adjoined as variables.
#[derive(Clone, Debug)]
pub struct LeykinWalther {
    /// Product of the parameter leading coefficients of the relevant basis elements.
    pub h: ParamPoly,
    /// Distinct factors of `h`.
    pub factors: Vec<ParamPoly>,
    /// Generators of `{p in K[p] : p*A^s ⊆ N}`.
    pub annihilating_params: Vec<ParamPoly>,
}

/// Clears parameter denominators column by column and moves the parameters into the
/// variables: the result lives over `Q[d_1..d_n, p_1..p_t]` (no parameters).
pub fn adjoin_parameters(m: &ModMatrix) -> Result<ModMatrix> {
    let (n, t) = (m.nvars(), m.nparams());
    let mut cols = Vec::new();
    for col in m.columns() {
        let den = col.entries().fold(ParamPoly::one(t), |acc, (_, p)| crate::arith::lcm(&acc, &p.denominator_lcm()).unwrap_or(acc));
        let den = ParamFraction::from_poly(den);
        let mut out = ModElement::zero(m.nrows(), n + t, 0);
        for (i, p) in col.entries() {
            let mut terms = Vec::new();
            for (dm, c) in p.scale(&den).terms() {
                debug_assert!(c.is_polynomial());
                for (pm, q) in c.numer().terms() {
                    terms.push((dm.concat(pm), ParamFraction::constant(0, q.clone())));
                }
            }
            out.set(i, OpPoly::from_terms(n + t, 0, terms));
        }
        cols.push(out);
    }
    ModMatrix::new(m.nrows(), n + t, 0, cols)
}

/// Elimination ordering for the operator variables (weights on `d`, then degrevlex),
/// extended position over term.
pub fn adjoined_order(nvars: usize, nparams: usize) -> ModOrder {
    let mut weights = vec![1u64; nvars];
    weights.extend(std::iter::repeat(0).take(nparams));
    ModOrder::pot(MonoOrder::weighted(weights, MonoOrder::DegRevLex), ComponentOrder::Descending)
}

fn param_part(p: &OpPoly, n: usize) -> Option<ParamPoly> {
    // `p` must be free of operator variables
    let t = p.nvars() - n;
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let (dm, pm) = m.split_at(n);
        if !dm.is_one() {
            return None;
        }
        terms.push((pm, c.constant_value()?));
    }
    Some(ParamPoly::from_terms(t, terms))
}

/// Leading coefficient with respect to the operator variables: the parameter polynomial
/// multiplying the leading `(d-monomial, component)`.
fn param_leading_coeff(v: &ModElement, order: &ModOrder, n: usize) -> Option<ParamPoly> {
    let (lm, comp) = v.lead(order)?;
    let (ld, _) = lm.split_at(n);
    let t = v.nvars() - n;
    let entry = v.entry(comp)?;
    let terms = entry.terms().iter().filter_map(|(m, c)| {
        let (dm, pm) = m.split_at(n);
        (dm == ld).then(|| (pm, c.constant_value().expect("rational coefficient")))
    });
    Some(ParamPoly::from_terms(t, terms))
}

/// The comparison method: with parameters adjoined and an elimination ordering, `h` is the
/// product of the parameter leading coefficients of the reduced basis elements outside
/// `Q_N * A^s`; away from `V(h)` the specialized basis stays a Gröbner basis.
pub fn leykin_walther(m: &ModMatrix) -> Result<LeykinWalther> {
    let (n, t, s) = (m.nvars(), m.nparams(), m.nrows());
    let adj = adjoin_parameters(m)?;
    let order = adjoined_order(n, t);
    let gb = groebner_basis(&adj, &order)?;
    // Q_N: intersect the quotients (N : e_j), then keep the parameter-only elements
    let mut acc: Option<Vec<OpPoly>> = None;
    for j in 0..s {
        let q = quotient_ideal(&adj, &ModElement::unit(s, n + t, 0, j), &order)?;
        acc = Some(match acc {
            None => ideal_basis(&q, n + t, 0, &order)?,
            Some(prev) => intersect_ideals(&prev, &q, n + t, 0, &order)?,
        });
    }
    let qn: Vec<OpPoly> = acc.unwrap_or_default().into_iter().filter(|p| param_part(p, n).is_some()).collect();
    let annihilating_params: Vec<ParamPoly> = qn.iter().filter_map(|p| param_part(p, n)).collect();
    let qn_ideal = if qn.is_empty() {
        None
    } else {
        let cols = qn.iter().map(|p| ModElement::from_entries(n + t, 0, vec![p.clone()])).collect();
        Some(groebner_basis(&ModMatrix::new(1, n + t, 0, cols)?, &order)?)
    };
    let in_qn = |v: &ModElement| -> bool {
        match &qn_ideal {
            None => v.is_zero(),
            Some(g) => v.entries().all(|(_, p)| normal_form(&ModElement::from_entries(n + t, 0, vec![p.clone()]), g, &order).is_zero()),
        }
    };
    let mut h = ParamPoly::one(t);
    for v in gb.columns() {
        if in_qn(v) {
            continue;
        }
        if let Some(c) = param_leading_coeff(v, &order, n) {
            h = &h * &c;
        }
    }
    let factors = if h.is_constant() { Vec::new() } else { ObstructionSet::from_polys([&h])?.factors };
    Ok(LeykinWalther { h, factors, annihilating_params })
}

/// `V(f) \ V(∏ localize) ⊆ V(h)`, certified by radical membership.
pub fn variety_contained(f: &ParamPoly, h: &ParamPoly, localize: &[ParamPoly]) -> Result<bool> {
    let mut avoid = vec![h.clone()];
    avoid.extend(localize.iter().cloned());
    locus_is_empty(std::slice::from_ref(f), &avoid, f.nvars())
}

/// Leading `(monomial, component)` pairs of the columns, sorted.
pub fn leading_module(gb: &ModMatrix, order: &ModOrder) -> Vec<(Monomial, usize)> {
    let mut out: Vec<(Monomial, usize)> = gb.columns().iter().filter_map(|c| c.lead(order)).collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.exponents().cmp(b.0.exponents())));
    out
}

/// Whether the basis recomputed at `point` has the same leading module as the generic basis
/// specialized at `point`. Errors when `point` makes a denominator vanish.
pub fn specialization_agrees(m: &ModMatrix, generic_gb: &ModMatrix, point: &[BigRational], order: &ModOrder) -> Result<bool> {
    let specialized_generic = specialize(generic_gb, point)?;
    let direct = groebner_basis(&specialize(m, point)?, order)?;
    Ok(leading_module(&direct, order) == leading_module(&specialized_generic, order))
}

/// Whether the basis recomputed at `point` differs from the specialized generic basis in
/// its leading module or as a reduced basis.
pub fn specialization_differs(m: &ModMatrix, generic_gb: &ModMatrix, point: &[BigRational], order: &ModOrder) -> Result<bool> {
    let direct = groebner_basis(&specialize(m, point)?, order)?;
    match specialize(generic_gb, point) {
        // a vanishing denominator in the generic basis already marks a different basis
        Err(Error::VanishingDenominator(_)) => Ok(true),
        Err(e) => Err(e),
        Ok(g) => {
            let g = groebner_basis(&g, order)?;
            Ok(leading_module(&direct, order) != leading_module(&g, order) || direct != g)
        }
    }
}

/// Completes `point` to a zero of `f` by solving for a parameter in which `f` is linear,
/// keeping the other coordinates. `None` if no such parameter gives a defined value.
pub fn solve_on_factor(f: &ParamPoly, point: &[BigRational]) -> Option<Vec<BigRational>> {
    for v in f.variables() {
        if f.degree_in(v) != 1 {
            continue;
        }
        let cs = f.coefficients_in(v);
        let (c0, c1) = (cs[0].eval(point), cs[1].eval(point));
        if c1.is_zero() {
            continue;
        }
        let mut p = point.to_vec();
        p[v] = -c0 / c1;
        return Some(p);
    }
    None
}
