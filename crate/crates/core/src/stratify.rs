//! Constructible strata of the parameter space: sign-pattern systems over obstruction
//! factors, refined by factorizing Gröbner bases.

use std::fmt;

use crate::arith::factor::{cmp_polys, factor_set};
use crate::arith::ParamPoly;
use crate::error::{Error, Result};
use crate::ideal::{ideal_cmp, ideal_contains_all, ideal_gb, is_unit_ideal, locus_is_empty, reduce};
use crate::ordering::MonoOrder;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumStatus {
    /// Certified: the equations do not generate `<1>` and the inequations do not vanish
    /// identically on their zero set.
    NonEmpty,
    /// Certified empty by a Rabinowitsch test.
    Empty,
    /// A basis computation ran out of budget.
    Unknown,
}

impl fmt::Display for StratumStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumStatus::NonEmpty => "nonempty",
            StratumStatus::Empty => "empty",
            StratumStatus::Unknown => "unknown",
        })
    }
}

/// `{p : equations(p) = 0, inequations(p) != 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub equations: Vec<ParamPoly>,
    pub inequations: Vec<ParamPoly>,
    pub status: StratumStatus,
}

impl Stratum {
    pub fn render(&self, names: &[String]) -> String {
        let mut parts: Vec<String> = self.equations.iter().map(|p| format!("{} = 0", p.render(names))).collect();
        parts.extend(self.inequations.iter().map(|p| format!("{} != 0", p.render(names))));
        if parts.is_empty() {
            return "(whole parameter space)".into();
        }
        parts.join(", ")
    }

    /// Whether `point` satisfies every equation and inequation.
    pub fn contains(&self, point: &[num_rational::BigRational]) -> bool {
        use num_traits::Zero;
        self.equations.iter().all(|p| p.eval(point).is_zero()) && self.inequations.iter().all(|p| !p.eval(point).is_zero())
    }
}

/// Distinct nonconstant factors of the inequations after reduction modulo `gb`.
fn refine_inequations(ineqs: &[ParamPoly], gb: &[ParamPoly], order: &MonoOrder) -> Result<Vec<ParamPoly>> {
    let mut out: Vec<ParamPoly> = Vec::new();
    for q in ineqs {
        let r = reduce(q, gb, order);
        if r.is_zero() {
            continue;
        }
        for f in factor_set(&r)? {
            if !f.is_constant() && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out.sort_by(cmp_polys);
    Ok(out)
}

/// Components of `V(I) \ V(∏ J)` as equation systems.
///
/// The basis of each branch is factorized element by element; a reducible or non-squarefree
/// element splits the branch into one branch per distinct factor. Branches whose locus lies
/// inside `V(∏ J)` are discarded, and so are branches whose variety lies inside another's.
pub fn fact_gb(i: &[ParamPoly], j: &[ParamPoly], nvars: usize, order: &MonoOrder) -> Result<Vec<Stratum>> {
    let mut work: Vec<Vec<ParamPoly>> = vec![i.to_vec()];
    let mut seen: Vec<Vec<ParamPoly>> = Vec::new();
    let mut done: Vec<Stratum> = Vec::new();
    while let Some(gens) = work.pop() {
        let gb = match ideal_gb(&gens, nvars, order) {
            Ok(gb) => gb,
            Err(Error::BudgetExhausted(_)) => {
                done.push(Stratum { equations: gens, inequations: j.to_vec(), status: StratumStatus::Unknown });
                continue;
            }
            Err(e) => return Err(e),
        };
        if is_unit_ideal(&gb) || seen.contains(&gb) {
            continue;
        }
        seen.push(gb.clone());
        match locus_is_empty(&gb, j, nvars) {
            Ok(true) => continue,
            Ok(false) => {}
            Err(Error::BudgetExhausted(_)) => {
                done.push(Stratum { equations: gb, inequations: j.to_vec(), status: StratumStatus::Unknown });
                continue;
            }
            Err(e) => return Err(e),
        }
        let mut split = None;
        for (k, e) in gb.iter().enumerate() {
            let fs = crate::arith::factorize(e)?;
            if fs.factors.len() > 1 || fs.factors.iter().any(|(_, m)| *m > 1) {
                split = Some((k, fs.factors.into_iter().map(|(f, _)| f).collect::<Vec<_>>()));
                break;
            }
        }
        match split {
            Some((k, factors)) => {
                for f in factors {
                    let mut next = gb.clone();
                    next[k] = f;
                    work.push(next);
                }
            }
            None => {
                let inequations = refine_inequations(j, &gb, order)?;
                done.push(Stratum { equations: gb, inequations, status: StratumStatus::NonEmpty });
            }
        }
    }
    // drop components contained in another component
    let mut keep: Vec<Stratum> = Vec::new();
    for (a, s) in done.iter().enumerate() {
        let redundant = s.status == StratumStatus::NonEmpty
            && done.iter().enumerate().any(|(b, t)| {
                b != a
                    && t.status == StratumStatus::NonEmpty
                    && ideal_contains_all(&s.equations, &t.equations, order)
                    && (!ideal_contains_all(&t.equations, &s.equations, order) || b < a)
            });
        if !redundant {
            keep.push(s.clone());
        }
    }
    keep.sort_by(|a, b| ideal_cmp(&a.equations, &b.equations));
    Ok(keep)
}

/// One sign system of the stratification tree and its refinement.
#[derive(Clone, Debug)]
pub struct Branch {
    /// `vanishing[i]` is `true` when factor `i` is set to zero.
    pub vanishing: Vec<bool>,
    pub system: Stratum,
    pub components: Vec<Stratum>,
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub factors: Vec<ParamPoly>,
    pub branches: Vec<Branch>,
}

impl Stratification {
    /// The nonempty refined components, in branch order.
    pub fn cases(&self) -> Vec<&Stratum> {
        self.branches.iter().flat_map(|b| b.components.iter()).filter(|s| s.status != StratumStatus::Empty).collect()
    }
}

/// The `2^n - 1` sign patterns of `n` factors with at least one factor vanishing, in the
/// order of the binary tree that tries `= 0` before `!= 0` for each factor in turn.
pub fn sign_patterns(n: usize) -> Vec<Vec<bool>> {
    assert!(n < 32, "too many obstruction factors");
    let total = 1u64 << n;
    (0..total - 1)
        .map(|mask| (0..n).map(|i| mask & (1 << (n - 1 - i)) == 0).collect())
        .collect()
}

/// Squarefree, monic, deduplicated factors sorted by degree.
pub fn normalize_factors(p: &[ParamPoly]) -> Result<Vec<ParamPoly>> {
    let mut out: Vec<ParamPoly> = Vec::new();
    for q in p {
        if q.is_zero() || q.is_constant() {
            continue;
        }
        let sq = crate::arith::factorize(q)?.factors.iter().fold(ParamPoly::one(q.nvars()), |acc, (f, _)| &acc * f);
        let sq = sq.monic();
        if !out.contains(&sq) {
            out.push(sq);
        }
    }
    out.sort_by(cmp_polys);
    Ok(out)
}

/// Decomposes `C(P) = V(∏ P)` into sign-pattern systems, each refined by [`fact_gb`].
pub fn stratify_lc(p: &[ParamPoly], nvars: usize, order: &MonoOrder) -> Result<Stratification> {
    let factors = normalize_factors(p)?;
    let mut branches = Vec::new();
    for vanishing in sign_patterns(factors.len()) {
        let eqs: Vec<ParamPoly> = factors.iter().zip(&vanishing).filter(|(_, z)| **z).map(|(f, _)| f.clone()).collect();
        let ineqs: Vec<ParamPoly> = factors.iter().zip(&vanishing).filter(|(_, z)| !**z).map(|(f, _)| f.clone()).collect();
        let components = fact_gb(&eqs, &ineqs, nvars, order)?;
        let status = if components.is_empty() {
            StratumStatus::Empty
        } else if components.iter().any(|c| c.status == StratumStatus::NonEmpty) {
            StratumStatus::NonEmpty
        } else {
            StratumStatus::Unknown
        };
        let system = Stratum { equations: eqs, inequations: ineqs, status };
        branches.push(Branch { vanishing, system, components });
    }
    Ok(Stratification { factors, branches })
}
