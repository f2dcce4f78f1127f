//! Gröbner bases, syzygies and transformation matrices for submodules of `A^m`.

pub mod engine;
pub mod field;
pub mod lifting;
pub mod types;

pub use engine::{DenomContext, DenomEvent, DenominatorLog, GbConfig};
pub use field::{CoeffField, RationalFunctions, Rationals};
pub use types::{ModElement, ModMatrix, OpPoly};

use crate::arith::ParamFraction;
use crate::error::Result;
use crate::ordering::ModOrder;

use engine::{Ctx, Vector};

/// Basis `H`, transformation `T` with `H = F*T`, and syzygies `S` with `F*S = 0`.
#[derive(Clone, Debug)]
pub struct Trinity {
    pub gb: ModMatrix,
    pub transform: ModMatrix,
    pub syzygies: ModMatrix,
    pub log: DenominatorLog,
}

fn field_of(f: &ModMatrix) -> RationalFunctions {
    RationalFunctions { nparams: f.nparams() }
}

fn vectors(f: &ModMatrix, order: &ModOrder) -> Vec<Vector<ParamFraction>> {
    f.columns().iter().map(|c| c.to_vector(order)).collect()
}

fn matrix(f: &ModMatrix, rows: usize, vs: &[Vector<ParamFraction>]) -> ModMatrix {
    let cols = vs.iter().map(|v| ModElement::from_vector(v, 0..rows, f.nvars(), f.nparams())).collect();
    ModMatrix::new(rows, f.nvars(), f.nparams(), cols).expect("engine output has uniform shape")
}

/// The full trinity: all S-pairs are processed so that syzygies are complete.
pub fn trinity(f: &ModMatrix, order: &ModOrder) -> Result<Trinity> {
    trinity_with(f, order, &GbConfig::default())
}

/// Trinity with explicit engine settings; with `skip_tag_pairs` the syzygy part is empty.
pub fn trinity_with(f: &ModMatrix, order: &ModOrder, cfg: &GbConfig) -> Result<Trinity> {
    let m = f.nrows();
    let l = f.ncols();
    let mut log = DenominatorLog::default();
    let split = lifting::split_gb(&field_of(f), order, &vectors(f, order), m, f.nvars(), cfg, &mut log)?;
    Ok(Trinity {
        gb: matrix(f, m, &split.gb),
        transform: matrix(f, l, &split.transform),
        syzygies: matrix(f, l, &split.syzygies),
        log,
    })
}

/// Reduced, minimal, monic Gröbner basis of the column span, sorted by leading term.
pub fn groebner_basis(f: &ModMatrix, order: &ModOrder) -> Result<ModMatrix> {
    groebner_basis_logged(f, order, &GbConfig::default(), &mut DenominatorLog::default())
}

pub fn groebner_basis_logged(f: &ModMatrix, order: &ModOrder, cfg: &GbConfig, log: &mut DenominatorLog) -> Result<ModMatrix> {
    let field = field_of(f);
    let ctx = Ctx::new(&field, order);
    let mut cfg = cfg.clone();
    cfg.product_criterion &= f.nrows() == 1;
    let gb = engine::groebner(&ctx, vectors(f, order), &cfg, log)?;
    Ok(matrix(f, f.nrows(), &gb))
}

/// Normal form of `v` modulo the columns of `g` (any generating set; a Gröbner basis
/// gives the canonical remainder).
pub fn normal_form(v: &ModElement, g: &ModMatrix, order: &ModOrder) -> ModElement {
    let field = field_of(g);
    let ctx = Ctx::new(&field, order);
    let r = ctx.normal_form(&v.to_vector(order), &vectors(g, order));
    ModElement::from_vector(&r, 0..v.rank(), v.nvars(), v.nparams())
}

/// Membership of each column of `h` in the span of `f`.
pub fn in_span(h: &ModMatrix, f: &ModMatrix, order: &ModOrder) -> Result<bool> {
    let gb = groebner_basis(f, order)?;
    Ok(h.columns().iter().all(|c| normal_form(c, &gb, order).is_zero()))
}

/// `T` with `H = F*T`; each column is reduced modulo the syzygies of `F`.
pub fn lift(f: &ModMatrix, h: &ModMatrix, order: &ModOrder) -> Result<ModMatrix> {
    if h.nrows() != f.nrows() {
        return Err(crate::Error::ShapeMismatch(format!("lift target has {} rows, generators {}", h.nrows(), f.nrows())));
    }
    let m = f.nrows();
    let l = f.ncols();
    let field = field_of(f);
    let mut log = DenominatorLog::default();
    let split = lifting::split_gb(&field, order, &vectors(f, order), m, f.nvars(), &GbConfig::default(), &mut log)?;
    let t = lifting::lift_targets(&field, order, &split, m, l, &vectors(h, order))?;
    Ok(matrix(f, l, &t))
}

/// Generators of `{x : F*x = 0}`, forming a Gröbner basis.
pub fn syzygies(f: &ModMatrix, order: &ModOrder) -> Result<ModMatrix> {
    let s = lifting::syzygy_vectors(&field_of(f), order, &vectors(f, order), f.nrows(), f.nvars())?;
    Ok(matrix(f, f.ncols(), &s))
}
