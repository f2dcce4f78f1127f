//! Buchberger's algorithm for submodules of `F[x_1, ..., x_n]^r` over a coefficient field `F`.

use std::cmp::Ordering;

use crate::arith::monomial::Monomial;
use crate::arith::ParamPoly;
use crate::error::{Error, Result};
use crate::ordering::ModOrder;

use super::field::CoeffField;

#[derive(Clone, Debug, PartialEq)]
pub struct Term<E> {
    pub mono: Monomial,
    pub comp: usize,
    pub coeff: E,
}

/// A module element as a list of terms, strictly descending under the active order.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<E> {
    pub terms: Vec<Term<E>>,
}

impl<E> Vector<E> {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term<E>> {
        self.terms.first()
    }
}

/// Where a logged denominator came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenomContext {
    /// Entry `(row, col)` of a transformation matrix whose column has leading component `lead_component`.
    TransformEntry { row: usize, col: usize, lead_component: usize },
    /// Division by a leading coefficient when making a basis element monic.
    Normalization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenomEvent {
    pub denominator: ParamPoly,
    pub context: DenomContext,
}

/// Denominators met during a computation; every entry is a nonconstant polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DenominatorLog {
    pub events: Vec<DenomEvent>,
}

impl DenominatorLog {
    pub fn record(&mut self, denominator: ParamPoly, context: DenomContext) {
        if !denominator.is_constant() && !denominator.is_zero() {
            self.events.push(DenomEvent { denominator, context });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Maximum number of S-pairs to process.
    pub max_pairs: Option<usize>,
    /// Drop elements whose leading term lies in a tag component (no syzygies wanted).
    pub skip_tag_pairs: bool,
    /// Apply the coprime-leading-monomial criterion (valid for ideals only).
    pub product_criterion: bool,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { max_pairs: None, skip_tag_pairs: false, product_criterion: false }
    }
}

/// Field plus ordering: everything the term-level routines need.
#[derive(Clone, Debug)]
pub struct Ctx<'a, F: CoeffField> {
    pub field: &'a F,
    pub order: &'a ModOrder,
}

impl<'a, F: CoeffField> Ctx<'a, F> {
    pub fn new(field: &'a F, order: &'a ModOrder) -> Self {
        Ctx { field, order }
    }

    pub fn cmp_terms(&self, a: &Term<F::Elem>, b: &Term<F::Elem>) -> Ordering {
        self.order.cmp((&a.mono, a.comp), (&b.mono, b.comp))
    }

    /// Builds a vector from unsorted terms, merging repeats and dropping zeros.
    pub fn vector(&self, mut terms: Vec<Term<F::Elem>>) -> Vector<F::Elem> {
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        let mut out: Vec<Term<F::Elem>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono && last.comp == t.comp => {
                    last.coeff = self.field.add(&last.coeff, &t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !self.field.is_zero(&t.coeff));
        Vector { terms: out }
    }

    /// `a - c * m * b` for term slices sorted descending.
    pub fn axpy(&self, a: &[Term<F::Elem>], c: &F::Elem, m: &Monomial, b: &[Term<F::Elem>]) -> Vec<Term<F::Elem>> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let shifted = |t: &Term<F::Elem>| (t.mono.mul(m), t.comp);
        let mut bj = b.first().map(shifted);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), &bj) {
                (Some(x), Some((bm, bc))) => self.order.cmp((&x.mono, x.comp), (bm, *bc)),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (mono, comp) = bj.take().unwrap();
                    out.push(Term { mono, comp, coeff: f.neg(&f.mul(c, &b[j].coeff)) });
                    j += 1;
                    bj = b.get(j).map(shifted);
                }
                Ordering::Equal => {
                    let coeff = f.sub(&a[i].coeff, &f.mul(c, &b[j].coeff));
                    if !f.is_zero(&coeff) {
                        out.push(Term { mono: a[i].mono.clone(), comp: a[i].comp, coeff });
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(shifted);
                }
            }
        }
        out
    }

    pub fn add(&self, a: &Vector<F::Elem>, b: &Vector<F::Elem>) -> Vector<F::Elem> {
        let minus_one = self.field.neg(&self.field.one());
        let one = Monomial::one(self.nvars_of(a, b));
        Vector { terms: self.axpy(&a.terms, &minus_one, &one, &b.terms) }
    }

    pub fn sub(&self, a: &Vector<F::Elem>, b: &Vector<F::Elem>) -> Vector<F::Elem> {
        let one = Monomial::one(self.nvars_of(a, b));
        Vector { terms: self.axpy(&a.terms, &self.field.one(), &one, &b.terms) }
    }

    fn nvars_of(&self, a: &Vector<F::Elem>, b: &Vector<F::Elem>) -> usize {
        a.lead().or(b.lead()).map_or(0, |t| t.mono.nvars())
    }

    /// `c * m * v`.
    pub fn mul_term(&self, v: &Vector<F::Elem>, c: &F::Elem, m: &Monomial) -> Vector<F::Elem> {
        if self.field.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: v
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.mul(m), comp: t.comp, coeff: self.field.mul(c, &t.coeff) })
                .collect(),
        }
    }

    pub fn scale(&self, v: &Vector<F::Elem>, c: &F::Elem) -> Vector<F::Elem> {
        if self.field.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: v
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.clone(), comp: t.comp, coeff: self.field.mul(c, &t.coeff) })
                .collect(),
        }
    }

    /// Divides by the leading coefficient, logging the division.
    pub fn monic(&self, v: Vector<F::Elem>, log: Option<&mut DenominatorLog>) -> Vector<F::Elem> {
        let lc = match v.lead() {
            Some(t) => t.coeff.clone(),
            None => return v,
        };
        if self.field.is_one(&lc) {
            return v;
        }
        if let (Some(log), Some(p)) = (log, self.field.normalization_event(&lc)) {
            log.record(p, DenomContext::Normalization);
        }
        let inv = self.field.inv(&lc);
        let mut out = self.scale(&v, &inv);
        out.terms[0].coeff = self.field.one();
        out
    }

    /// Index of the first basis element whose leading term divides `t`.
    fn find_reducer(&self, basis: &[Vector<F::Elem>], active: &[usize], t: &Term<F::Elem>) -> Option<usize> {
        active.iter().copied().find(|&k| {
            let l = basis[k].lead().expect("basis elements are nonzero");
            l.comp == t.comp && l.mono.divides(&t.mono)
        })
    }

    /// Reduces the leading term until it is irreducible; basis elements must be monic.
    pub fn top_reduce(&self, f: Vector<F::Elem>, basis: &[Vector<F::Elem>], active: &[usize]) -> Vector<F::Elem> {
        let mut terms = f.terms;
        while let Some(lt) = terms.first() {
            match self.find_reducer(basis, active, lt) {
                None => break,
                Some(k) => {
                    let g = &basis[k].terms;
                    let q = g[0].mono.quotient_of(&lt.mono).expect("reducer divides");
                    let c = lt.coeff.clone();
                    terms = self.axpy(&terms[1..], &c, &q, &g[1..]);
                }
            }
        }
        Vector { terms }
    }

    /// Full normal form: no term of the result is divisible by a leading term of the basis.
    pub fn full_reduce(&self, f: Vector<F::Elem>, basis: &[Vector<F::Elem>], active: &[usize]) -> Vector<F::Elem> {
        let mut rem = Vec::new();
        let mut terms = f.terms;
        while let Some(lt) = terms.first() {
            match self.find_reducer(basis, active, lt) {
                None => rem.push(terms.remove(0)),
                Some(k) => {
                    let g = &basis[k].terms;
                    let q = g[0].mono.quotient_of(&lt.mono).expect("reducer divides");
                    let c = lt.coeff.clone();
                    terms = self.axpy(&terms[1..], &c, &q, &g[1..]);
                }
            }
        }
        Vector { terms: rem }
    }

    /// Normal form against an arbitrary (not necessarily monic) list of vectors.
    pub fn normal_form(&self, f: &Vector<F::Elem>, g: &[Vector<F::Elem>]) -> Vector<F::Elem> {
        let monic: Vec<_> = g.iter().filter(|v| !v.is_zero()).map(|v| self.monic(v.clone(), None)).collect();
        let active: Vec<usize> = (0..monic.len()).collect();
        self.full_reduce(f.clone(), &monic, &active)
    }

    /// S-vector of two monic vectors with equal leading component.
    pub fn spoly(&self, a: &Vector<F::Elem>, b: &Vector<F::Elem>) -> Vector<F::Elem> {
        let la = &a.terms[0];
        let lb = &b.terms[0];
        debug_assert_eq!(la.comp, lb.comp);
        let l = la.mono.lcm(&lb.mono);
        let qa = la.mono.quotient_of(&l).unwrap();
        let qb = lb.mono.quotient_of(&l).unwrap();
        let one = self.field.one();
        let lhs = self.mul_term(&Vector { terms: a.terms[1..].to_vec() }, &one, &qa);
        Vector { terms: self.axpy(&lhs.terms, &one, &qb, &b.terms[1..]) }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: usize,
}

/// Reduced Gröbner basis, monic, sorted ascending by leading term.
pub fn groebner<F: CoeffField>(
    ctx: &Ctx<'_, F>,
    gens: Vec<Vector<F::Elem>>,
    cfg: &GbConfig,
    log: &mut DenominatorLog,
) -> Result<Vec<Vector<F::Elem>>> {
    let mut st = State { basis: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in gens {
        let r = ctx.top_reduce(g, &st.basis, &st.active);
        st.insert(ctx, r, cfg, log);
    }
    let mut processed = 0usize;
    while let Some(p) = st.pop_pair(ctx) {
        processed += 1;
        if let Some(max) = cfg.max_pairs {
            if processed > max {
                return Err(Error::BudgetExhausted(max));
            }
        }
        let s = ctx.spoly(&st.basis[p.i], &st.basis[p.j]);
        let r = ctx.top_reduce(s, &st.basis, &st.active);
        st.insert(ctx, r, cfg, log);
    }
    // interreduce the minimal basis
    let basis = &st.basis;
    let active = &st.active;
    let mut out: Vec<Vector<F::Elem>> = active
        .iter()
        .map(|&k| {
            let v = &basis[k];
            let tail = Vector { terms: v.terms[1..].to_vec() };
            let others: Vec<usize> = active.iter().copied().filter(|&o| o != k).collect();
            let mut tail = ctx.full_reduce(tail, basis, &others);
            let mut terms = vec![v.terms[0].clone()];
            terms.append(&mut tail.terms);
            Vector { terms }
        })
        .collect();
    out.sort_by(|a, b| ctx.cmp_terms(&a.terms[0], &b.terms[0]));
    Ok(out)
}

struct State<E> {
    basis: Vec<Vector<E>>,
    /// Indices of basis elements with leading terms not divisible by a later one.
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> State<E> {
    fn pop_pair<F: CoeffField<Elem = E>>(&mut self, ctx: &Ctx<'_, F>) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = a
                .lcm
                .degree()
                .cmp(&b.lcm.degree())
                .then_with(|| ctx.order.cmp((&a.lcm, a.comp), (&b.lcm, b.comp)))
                .then((a.j, a.i).cmp(&(b.j, b.i)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn insert<F: CoeffField<Elem = E>>(&mut self, ctx: &Ctx<'_, F>, r: Vector<E>, cfg: &GbConfig, log: &mut DenominatorLog) {
        if r.is_zero() {
            return;
        }
        let lead_comp = r.terms[0].comp;
        if cfg.skip_tag_pairs && ctx.order.is_tag(lead_comp) {
            return;
        }
        let h = ctx.monic(r, Some(log));
        let t = self.basis.len();
        let hm = h.terms[0].mono.clone();
        let lead = |v: &Vector<E>| (v.terms[0].mono.clone(), v.terms[0].comp);

        // new pairs, chain criterion among them
        let cands: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .copied()
            .filter(|&g| self.basis[g].terms[0].comp == lead_comp)
            .map(|g| {
                let gm = &self.basis[g].terms[0].mono;
                (g, gm.lcm(&hm), cfg.product_criterion && gm.is_coprime(&hm))
            })
            .collect();
        let mut keep = vec![false; cands.len()];
        let mut in_c = vec![true; cands.len()];
        for a in 0..cands.len() {
            in_c[a] = false;
            let (_, la, coprime) = &cands[a];
            let dominated = (0..cands.len())
                .filter(|&b| b != a && (in_c[b] || keep[b]))
                .any(|b| cands[b].1.divides(la));
            if *coprime || !dominated {
                keep[a] = true;
            }
        }
        // old pairs whose lcm is a multiple of the new leading term
        self.pairs.retain(|p| {
            if p.comp != lead_comp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = self.basis[p.i].terms[0].mono.lcm(&hm);
            let lj = self.basis[p.j].terms[0].mono.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        for (k, (g, l, coprime)) in cands.into_iter().enumerate() {
            if keep[k] && !coprime {
                self.pairs.push(Pair { i: g, j: t, lcm: l, comp: lead_comp });
            }
        }
        let basis = &self.basis;
        self.active.retain(|&g| {
            let (gm, gc) = lead(&basis[g]);
            !(gc == lead_comp && hm.divides(&gm))
        });
        self.basis.push(h);
        self.active.push(t);
    }
}
