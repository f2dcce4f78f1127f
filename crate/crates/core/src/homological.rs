//! Hom and Ext of presented modules, torsion, and the controllability and autonomy reports.
//!
//! A module is presented by relation rows: `M = A^{1 x q} / A^{1 x p} R` for a `p x q`
//! matrix `R`. Its transposed module is presented by `R^T`.

use std::fmt;

use crate::error::Result;
use crate::genericity::{genericity, ObstructionSet};
use crate::groebner::{groebner_basis, lift, normal_form, syzygies, DenominatorLog, ModElement, ModMatrix, OpPoly};
use crate::module_ops::{canonize_columns, column_rank, left_inverse, left_kernel, right_kernel, spans_free_module, system_dimension};
use crate::ordering::ModOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    /// Relation rows.
    pub relations: ModMatrix,
}

impl PresentedModule {
    pub fn new(relations: ModMatrix) -> Self {
        PresentedModule { relations }
    }

    /// Number of generators.
    pub fn generators(&self) -> usize {
        self.relations.ncols()
    }

    pub fn transposed(&self) -> PresentedModule {
        PresentedModule { relations: self.relations.transpose() }
    }

    /// `true` when the relations generate all of `A^{1 x q}`.
    pub fn is_zero(&self, order: &ModOrder) -> Result<bool> {
        spans_free_module(&self.relations.transpose(), order)
    }
}

/// `R_1 = R`, `R_{i+1}` generating the left kernel of `R_i`; stops early at a zero map.
pub fn resolution(r: &ModMatrix, len: usize, order: &ModOrder) -> Result<Vec<ModMatrix>> {
    let mut maps = vec![r.clone()];
    while maps.len() < len {
        let last = maps.last().unwrap();
        if last.nrows() == 0 {
            break;
        }
        let next = left_kernel(last, order)?;
        let done = next.nrows() == 0;
        maps.push(next);
        if done {
            break;
        }
    }
    Ok(maps)
}

/// `Ext^i(M, A)` as a subquotient: `generators` span the kernel of the dual map, and
/// `presentation` holds the relations among them modulo the image.
#[derive(Clone, Debug)]
pub struct ExtModule {
    pub index: usize,
    pub generators: ModMatrix,
    pub presentation: PresentedModule,
    pub is_zero: bool,
}

fn map_at(maps: &[ModMatrix], i: usize, nvars: usize, nparams: usize) -> ModMatrix {
    // past the end of a finite resolution all maps are zero between zero modules
    maps.get(i).cloned().unwrap_or_else(|| {
        let cols = maps.get(i - 1).map_or(0, |m| m.nrows());
        ModMatrix::zeros(0, cols, nvars, nparams)
    })
}

/// `Ext^i` for `i = 0..=max_index`.
pub fn ext_modules(m: &PresentedModule, max_index: usize, order: &ModOrder) -> Result<Vec<ExtModule>> {
    let r = &m.relations;
    let (nv, np) = (r.nvars(), r.nparams());
    let maps = resolution(r, max_index + 1, order)?;
    let mut out = Vec::new();
    for i in 0..=max_index {
        // dual complex: A^{p_{i-1}} --R_i--> A^{p_i} --R_{i+1}--> A^{p_{i+1}}
        let next = map_at(&maps, i, nv, np);
        let kernel = right_kernel(&next, order)?;
        let (presentation, is_zero) = if i == 0 {
            let rel = ModMatrix::zeros(0, kernel.ncols(), nv, np);
            (PresentedModule::new(rel), kernel.ncols() == 0)
        } else {
            let image = map_at(&maps, i - 1, nv, np);
            subquotient(&kernel, &image, order)?
        };
        out.push(ExtModule { index: i, generators: kernel, presentation, is_zero });
    }
    Ok(out)
}

/// Presentation of `span(k) / span(img)` (with `span(img)` inside `span(k)`).
fn subquotient(k: &ModMatrix, img: &ModMatrix, order: &ModOrder) -> Result<(PresentedModule, bool)> {
    let gb = groebner_basis(img, order)?;
    let is_zero = k.columns().iter().all(|c| normal_form(c, &gb, order).is_zero());
    let s = k.ncols();
    let joint = k.concat(img)?;
    let syz = syzygies(&joint, order)?;
    let rows: Vec<ModElement> = syz
        .columns()
        .iter()
        .map(|c| c.reindex(s, |i| (i < s).then_some(i)))
        .filter(|c| !c.is_zero())
        .collect();
    let rel = ModMatrix::new(s, k.nvars(), k.nparams(), rows)?.transpose();
    Ok((PresentedModule::new(rel), is_zero))
}

/// Whether `Ext^i(M, A)` vanishes.
pub fn ext_vanishes(m: &PresentedModule, i: usize, order: &ModOrder) -> Result<bool> {
    Ok(ext_modules(m, i, order)?.pop().expect("nonempty").is_zero)
}

/// `Hom(M, A) = 0`, i.e. `{x : R*x = 0} = 0`.
pub fn hom_vanishes(m: &PresentedModule, order: &ModOrder) -> Result<bool> {
    Ok(right_kernel(&m.relations, order)?.ncols() == 0)
}

/// Smallest `i` in `from..=to` with `Ext^i(M, A) != 0`, or `-1`.
pub fn first_nonzero_ext(m: &PresentedModule, from: usize, to: usize, order: &ModOrder) -> Result<i64> {
    let exts = ext_modules(m, to, order)?;
    Ok(exts.iter().skip(from).find(|e| !e.is_zero).map_or(-1, |e| e.index as i64))
}

/// Ideal generators `{a : a*v in span(u)}`.
pub fn quotient_ideal(u: &ModMatrix, v: &ModElement, order: &ModOrder) -> Result<Vec<OpPoly>> {
    let mut cols = u.clone();
    cols.push_column(v.clone())?;
    let last = u.ncols();
    let syz = syzygies(&cols, order)?;
    Ok(syz.columns().iter().map(|c| c.get(last)).filter(|p| !p.is_zero()).collect())
}

/// Generators of the intersection of two ideals.
pub fn intersect_ideals(a: &[OpPoly], b: &[OpPoly], nvars: usize, nparams: usize, order: &ModOrder) -> Result<Vec<OpPoly>> {
    let one = OpPoly::one(nvars, nparams);
    let zero = OpPoly::zero(nvars, nparams);
    let mut cols = vec![ModElement::from_entries(nvars, nparams, vec![one.clone(), one])];
    cols.extend(a.iter().map(|p| ModElement::from_entries(nvars, nparams, vec![p.clone(), zero.clone()])));
    cols.extend(b.iter().map(|p| ModElement::from_entries(nvars, nparams, vec![zero.clone(), p.clone()])));
    let syz = syzygies(&ModMatrix::new(2, nvars, nparams, cols)?, order)?;
    let gens: Vec<OpPoly> = syz.columns().iter().map(|c| c.get(0)).filter(|p| !p.is_zero()).collect();
    ideal_basis(&gens, nvars, nparams, order)
}

/// Reduced basis of an ideal, each generator primitive with positive leading coefficient.
pub fn ideal_basis(gens: &[OpPoly], nvars: usize, nparams: usize, order: &ModOrder) -> Result<Vec<OpPoly>> {
    let cols: Vec<ModElement> = gens.iter().map(|p| ModElement::from_entries(nvars, nparams, vec![p.clone()])).collect();
    let gb = groebner_basis(&ModMatrix::new(1, nvars, nparams, cols)?, order)?;
    Ok(canonize_columns(&gb, order).columns().iter().map(|c| c.get(0)).collect())
}

/// Annihilator of `A^{1 x s} / rowspan(U)`: the intersection of `(U : e_j)`.
pub fn annihilator(u: &PresentedModule, order: &ModOrder) -> Result<Vec<OpPoly>> {
    let r = &u.relations;
    let (nv, np, s) = (r.nvars(), r.nparams(), r.ncols());
    let cols = r.transpose();
    let mut acc: Option<Vec<OpPoly>> = None;
    for j in 0..s {
        let q = quotient_ideal(&cols, &ModElement::unit(s, nv, np, j), order)?;
        acc = Some(match acc {
            None => ideal_basis(&q, nv, np, order)?,
            Some(prev) => intersect_ideals(&prev, &q, nv, np, order)?,
        });
    }
    Ok(acc.unwrap_or_else(|| vec![OpPoly::one(nv, np)]))
}

/// The torsion submodule `t(M)` as `rowspan(R') / rowspan(R)` with `R'` the kernel
/// representation of the controllable part; returned presented on the rows of `R'`.
pub fn torsion_presentation(m: &PresentedModule, order: &ModOrder) -> Result<(ModMatrix, ModMatrix, PresentedModule)> {
    let r = &m.relations;
    let q = right_kernel(r, order)?;
    let kernel_rep = left_kernel(&q, order)?;
    // R = X R': lift the rows of R through the rows of R'
    let x = lift(&kernel_rep.transpose(), &r.transpose(), order)?.transpose();
    let ker = left_kernel(&kernel_rep, order)?;
    let mut rows: Vec<ModElement> = x.transpose().into_columns();
    rows.extend(ker.transpose().into_columns());
    let rows: Vec<ModElement> = rows.into_iter().filter(|c| !c.is_zero()).collect();
    let u = ModMatrix::new(kernel_rep.nrows(), r.nvars(), r.nparams(), rows)?.transpose();
    Ok((q, kernel_rep, PresentedModule::new(u)))
}

/// Annihilator of the torsion submodule; `[1]` for a torsion-free module.
pub fn torsion_annihilator(m: &PresentedModule, order: &ModOrder) -> Result<Vec<OpPoly>> {
    let (_, _, u) = torsion_presentation(m, order)?;
    annihilator(&u, order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Controllable,
    NotControllable,
    Autonomous,
    NotAutonomous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Controllable => "strongly controllable(flat)",
            Verdict::NotControllable => "not controllable",
            Verdict::Autonomous => "autonomous",
            Verdict::NotAutonomous => "not autonomous",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub first_nonzero_ext: i64,
    pub verdict: Verdict,
    pub image_rep: Option<ModMatrix>,
    pub left_inverse: Option<ModMatrix>,
    pub kernel_rep: Option<ModMatrix>,
    pub obstruction_to_controllability: Option<PresentedModule>,
    pub torsion_annihilator: Option<Vec<OpPoly>>,
    pub column_rank: Option<usize>,
    pub dimension: i64,
    pub genericity_obstructions: Option<ObstructionSet>,
}

/// Controllability analysis of the system with relation rows `R`.
pub fn control_analysis(m: &PresentedModule, order: &ModOrder) -> Result<AnalysisReport> {
    control_analysis_with(m, order, None)
}

/// As [`control_analysis`], searching `Ext^1..Ext^max_ext` (default: number of variables).
pub fn control_analysis_with(m: &PresentedModule, order: &ModOrder, max_ext: Option<usize>) -> Result<AnalysisReport> {
    let r = &m.relations;
    let n = r.nvars();
    let first = first_nonzero_ext(&m.transposed(), 1, max_ext.unwrap_or(n).max(1), order)?;
    let dimension = system_dimension(r, order)?;
    if first == -1 {
        let q = canonize_columns(&right_kernel(r, order)?, order);
        let qt = q.transpose();
        let mut obstructions = None;
        let li = left_inverse(&q, order)?;
        if li.is_some() {
            let k = lift(&qt, &ModMatrix::identity(qt.nrows(), n, r.nparams()), order)?;
            obstructions = Some(genericity(&qt, &k, order, &mut DenominatorLog::default())?);
        }
        return Ok(AnalysisReport {
            first_nonzero_ext: first,
            verdict: Verdict::Controllable,
            image_rep: Some(q),
            left_inverse: li,
            kernel_rep: None,
            obstruction_to_controllability: None,
            torsion_annihilator: None,
            column_rank: None,
            dimension,
            genericity_obstructions: obstructions,
        });
    }
    let (q, kernel_rep, u) = torsion_presentation(m, order)?;
    let ann = annihilator(&u, order)?;
    Ok(AnalysisReport {
        first_nonzero_ext: first,
        verdict: Verdict::NotControllable,
        image_rep: Some(canonize_columns(&q, order)),
        left_inverse: None,
        kernel_rep: Some(canonize_columns(&kernel_rep.transpose(), order).transpose()),
        obstruction_to_controllability: Some(u),
        torsion_annihilator: Some(ann),
        column_rank: None,
        dimension,
        genericity_obstructions: None,
    })
}

/// Autonomy analysis: autonomous exactly when `Hom(M, A) = 0`.
pub fn autonomy_analysis(m: &PresentedModule, order: &ModOrder) -> Result<AnalysisReport> {
    autonomy_analysis_with(m, order, None)
}

pub fn autonomy_analysis_with(m: &PresentedModule, order: &ModOrder, max_ext: Option<usize>) -> Result<AnalysisReport> {
    let r = &m.relations;
    let n = r.nvars();
    let first = first_nonzero_ext(m, 0, max_ext.unwrap_or(n), order)?;
    let autonomous = hom_vanishes(m, order)?;
    let q = right_kernel(r, order)?;
    let kernel_rep = left_kernel(&q, order)?;
    Ok(AnalysisReport {
        first_nonzero_ext: first,
        verdict: if autonomous { Verdict::Autonomous } else { Verdict::NotAutonomous },
        image_rep: None,
        left_inverse: None,
        kernel_rep: Some(canonize_columns(&kernel_rep.transpose(), order).transpose()),
        obstruction_to_controllability: None,
        torsion_annihilator: None,
        column_rank: Some(column_rank(r, order)?),
        dimension: system_dimension(r, order)?,
        genericity_obstructions: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn bipendulum_equal_lengths() {
        let r = Ring::new(&["g", "l"], &["d"], ModOrder::default());
        let rr = r.matrix(&[&["d^2+g/l", "0", "-g/l"], &["0", "d^2+g/l", "-g/l"]]);
        let m = PresentedModule::new(rr);
        let rep = control_analysis(&m, &r.order).unwrap();
        assert_eq!(rep.first_nonzero_ext, 1);
        assert_eq!(rep.torsion_annihilator.unwrap(), vec![r.poly("l*d^2+g")]);
        let a = autonomy_analysis(&m, &r.order).unwrap();
        assert_eq!(a.verdict, Verdict::NotAutonomous);
        assert_eq!(a.first_nonzero_ext, 0);
        assert_eq!(a.column_rank, Some(2));
        assert_eq!(a.dimension, 1);
    }

    #[test]
    fn free_and_zero_modules() {
        let r = Ring::new(&["a"], &["d"], ModOrder::default());
        let free = PresentedModule::new(ModMatrix::zeros(0, 2, 1, 1));
        let exts = ext_modules(&free, 2, &r.order).unwrap();
        assert!(!exts[0].is_zero);
        assert!(exts[1].is_zero && exts[2].is_zero);
        assert!(!hom_vanishes(&free, &r.order).unwrap());
        assert_eq!(torsion_annihilator(&free, &r.order).unwrap(), vec![r.poly("1")]);
        let zero = PresentedModule::new(r.matrix(&[&["a"]]));
        assert!(zero.is_zero(&r.order).unwrap());
        assert!(hom_vanishes(&zero, &r.order).unwrap());
    }

    #[test]
    fn resolution_composes_to_zero() {
        let r = Ring::new(&["a"], &["x", "y"], ModOrder::default());
        let m = r.matrix(&[&["x", "y"], &["a*y", "x"]]);
        let maps = resolution(&m, 3, &r.order).unwrap();
        for w in maps.windows(2) {
            assert!(w[1].checked_mul(&w[0]).unwrap().is_zero());
        }
    }
}
