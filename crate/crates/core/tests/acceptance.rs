//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.
//!
//! Comparisons are exact. Polynomials and vectors are compared up to a nonzero constant
//! factor and columns up to permutation; nothing numeric is approximated.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use parametra_core::arith::{ParamPoly};
use parametra_core::genericity::{
    admissibility_filter, genericity, leykin_walther, specialization_agrees, variety_contained, ObstructionSet,
    SignConstraint,
};
use parametra_core::groebner::{
    groebner_basis, groebner_basis_logged, lift, trinity, DenominatorLog, GbConfig, ModMatrix, OpPoly,
};
use parametra_core::homological::{autonomy_analysis, control_analysis, PresentedModule, Verdict};
use parametra_core::module_ops::{column_rank, left_inverse};
use parametra_core::ordering::{ModOrder, MonoOrder};
use parametra_core::stratify::{fact_gb, sign_patterns, stratify_lc, StratumStatus};
use parametra_core::Ring;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Wall-clock budget per criterion.
const TIME_BUDGET: Duration = Duration::from_secs(10);
/// Seed of every randomized check below.
const SEED: u64 = 0x5eed;
const RANDOM_INSTANCES: usize = 200;
const COHERENCE_POINTS: usize = 20;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn positive(ring: &Ring, names: &[&str]) -> Vec<(usize, SignConstraint)> {
    names.iter().map(|n| (ring.param_index(n).expect("declared"), SignConstraint::Positive)).collect()
}

fn polys(ring: &Ring, texts: &[&str]) -> Vec<ParamPoly> {
    texts.iter().map(|t| ring.param_poly(t)).collect()
}

/// Obstructions of the column span: the basis is lifted through the generators.
fn obstructions(m: &ModMatrix, o: &ModOrder) -> Result<ObstructionSet, String> {
    let gb = groebner_basis(m, o).map_err(err)?;
    let t = lift(m, &gb, o).map_err(err)?;
    genericity(m, &t, o, &mut DenominatorLog::default()).map_err(err)
}

fn annihilator_of(m: &ModMatrix, o: &ModOrder) -> Result<Vec<OpPoly>, String> {
    let rep = control_analysis(&PresentedModule::new(m.clone()), o).map_err(err)?;
    ensure!(rep.verdict == Verdict::NotControllable, "expected a torsion part, got {}", rep.verdict);
    Ok(rep.torsion_annihilator.unwrap_or_default())
}

fn show(ring: &Ring, v: &[OpPoly]) -> String {
    v.iter().map(|p| ring.render(p)).collect::<Vec<_>>().join(", ")
}

fn bipendulum() -> (Ring, ModMatrix) {
    let r = Ring::new(&["g", "l1", "l2"], &["d"], ModOrder::default());
    let m = r.matrix(&[&["d^2+g/l1", "0", "-g/l1"], &["0", "d^2+g/l2", "-g/l2"]]);
    (r, m)
}

fn pendula() -> (Ring, ModMatrix) {
    let r = Ring::new(&["g", "m1", "m2", "L1", "L2"], &["d"], ModOrder::default());
    let m = r.matrix(&[&["L1*d^2-g", "0", "m1*L1*d^2"], &["0", "L2*d^2-g", "m2*L2*d^2"]]);
    (r, m)
}

/// Friction model divided through by `m_i*L_i`; `d1, d2, z1, z2` are the scaled damping
/// and stiffness terms.
fn friction_scaled() -> (Ring, ModMatrix) {
    let r = Ring::new(&["m1", "m2", "L1", "L2", "d1", "d2", "z1", "z2"], &["d"], ModOrder::default());
    let m = r.matrix(&[&["L1*d^2+d1*d+z1", "0", "m1*L1*d^2"], &["0", "L2*d^2+d2*d+z2", "m2*L2*d^2"]]);
    (r, m)
}

const FRICTION_ROWS: [&[&str]; 2] =
    [&["m1*L1^2*d^2+d1*d+z1", "0", "m1*L1*d^2"], &["0", "m2*L2^2*d^2+d2*d+z2", "m2*L2*d^2"]];

/// The friction obstruction in collected form over scaled names.
const P_COLLECTED: &str = "L1^2*z2^2-2*L1*L2*z1*z2-L1*d1*d2*z2+L1*d2^2*z1+L2^2*z1^2+L2*d1^2*z2-L2*d1*d2*z1";
/// The same polynomial as a sum of two products.
const P_PRODUCTS: &str = "(L2*z1-L1*z2)^2+(L2*d1-L1*d2)*(d1*z2-d2*z1)";
/// The friction obstruction over the unscaled names with stiffness `k_i = z_i + m_i*L_i*g`.
const P_STIFFNESS: &str = "k1^2*L2^4*m2^2-2*k1*k2*L1^2*L2^2*m1*m2-k1*d1*d2*L2^2*m2+\
k1*d2^2*L1^2*m1+2*k1*g*L1^2*L2^3*m1*m2^2-2*k1*g*L1*L2^4*m1*m2^2+\
k2^2*L1^4*m1^2+k2*d1^2*L2^2*m2-k2*d1*d2*L1^2*m1-2*k2*g*L1^4*L2*m1^2*m2+\
2*k2*g*L1^3*L2^2*m1^2*m2-d1^2*g*L2^3*m2^2+d1*d2*g*L1^2*L2*m1*m2+\
d1*d2*g*L1*L2^2*m1*m2-d2^2*g*L1^3*m1^2+g^2*L1^4*L2^2*m1^2*m2^2-\
2*g^2*L1^3*L2^3*m1^2*m2^2+g^2*L1^2*L2^4*m1^2*m2^2";

fn criterion_1() -> Check {
    let (r, m) = bipendulum();
    let rep = control_analysis(&PresentedModule::new(m), &r.order).map_err(err)?;
    ensure!(rep.first_nonzero_ext == -1, "first nonzero Ext index {}", rep.first_nonzero_ext);
    ensure!(rep.verdict == Verdict::Controllable, "verdict {}", rep.verdict);
    let q = rep.image_rep.ok_or("no image representation")?;
    ensure!(q.ncols() == 1, "image representation has {} columns", q.ncols());
    let want_q = ["(-g*l2)*d^2-g^2", "(-g*l1)*d^2-g^2", "(-l1*l2)*d^4+(-g*l1-g*l2)*d^2-g^2"].map(|t| r.poly(t));
    let got_q = q.column(0).to_dense();
    ensure!(
        vectors_proportional(&got_q, &want_q) && rationally_proportional(&got_q[0], &want_q[0]),
        "image representation {}",
        show(&r, &got_q)
    );
    let l = rep.left_inverse.ok_or("no left inverse")?;
    let want_l = ["(-l1)/(g^2*l1-g^2*l2)", "l2/(g^2*l1-g^2*l2)", "0"].map(|t| r.poly(t));
    let got_l = l.row(0);
    ensure!(vectors_proportional(&got_l, &want_l), "left inverse {}", show(&r, &got_l));
    // independent check: L*Q is the 1x1 identity
    ensure!(l.checked_mul(&q).map_err(err)? == ModMatrix::identity(1, 1, 3), "L*Q is not the identity");
    ensure!(rep.dimension == 1, "dimension {}", rep.dimension);
    let obs = rep.genericity_obstructions.ok_or("no obstructions")?;
    let want = polys(&r, &["g", "l1-l2"]);
    ensure!(same_poly_set(&obs.factors, &want), "obstructions {}", render_polys(&r, &obs.factors));
    // independent check: the factors of the left inverse's denominators
    let den = got_l.iter().fold(ParamPoly::one(3), |acc, p| &acc * &p.denominator_lcm());
    let dens = ObstructionSet::from_polys([&den]).map_err(err)?;
    ensure!(same_poly_set(&dens.factors, &want), "left inverse denominators {}", render_polys(&r, &dens.factors));
    Ok(())
}

fn criterion_2() -> Check {
    let r = Ring::new(&["g", "l"], &["d"], ModOrder::default());
    let m = r.matrix(&[&["d^2+g/l", "0", "-g/l"], &["0", "d^2+g/l", "-g/l"]]);
    let sys = PresentedModule::new(m.clone());
    let rep = control_analysis(&sys, &r.order).map_err(err)?;
    ensure!(rep.first_nonzero_ext == 1, "first nonzero Ext index {}", rep.first_nonzero_ext);
    let ann = rep.torsion_annihilator.unwrap_or_default();
    ensure!(principal_like(&ann, &r.poly("l*d^2+g")), "annihilator {}", show(&r, &ann));
    let aut = autonomy_analysis(&sys, &r.order).map_err(err)?;
    ensure!(aut.verdict == Verdict::NotAutonomous, "autonomy verdict {}", aut.verdict);
    ensure!(aut.column_rank == Some(2), "column rank {:?}", aut.column_rank);
    ensure!(aut.dimension == 1, "dimension {}", aut.dimension);
    Ok(())
}

fn criterion_3() -> Check {
    let (r, m) = pendula();
    let o = &r.order;
    let gb = groebner_basis(&m, o).map_err(err)?;
    let id = ModMatrix::identity(2, 1, 5);
    ensure!(gb.ncols() == 2 && id.columns().iter().all(|c| gb.columns().contains(c)), "basis is not the identity");
    let t = lift(&m, &id, o).map_err(err)?;
    let want = r.matrix(&[
        &["(L1*L2)/(g^2*L1-g^2*L2)*d^2-1/g", "-(m1*L1*L2)/(g^2*m2*L1-g^2*m2*L2)*d^2"],
        &["(m2*L1*L2)/(g^2*m1*L1-g^2*m1*L2)*d^2", "-(L1*L2)/(g^2*L1-g^2*L2)*d^2-1/g"],
        &[
            "-(L1*L2)/(g^2*m1*(L1-L2))*d^2+L1/(g*m1*(L1-L2))",
            "(L1*L2)/(g^2*m2*(L1-L2))*d^2-L2/(g*m2*(L1-L2))",
        ],
    ]);
    // independent check of the displayed matrix itself
    ensure!(m.checked_mul(&want).map_err(err)? == id, "displayed transformation does not lift the identity");
    for j in 0..2 {
        ensure!(
            vectors_proportional(&t.column(j).to_dense(), &want.column(j).to_dense()),
            "transformation column {j}: {}",
            r.render_element(t.column(j))
        );
    }
    let den = (0..3)
        .flat_map(|i| t.row(i))
        .try_fold(ParamPoly::one(5), |acc, p| parametra_core::arith::lcm(&acc, &p.denominator_lcm()))
        .map_err(err)?;
    let want_lcm = r.param_poly("m1*m2*g^2*(L1-L2)");
    ensure!(den.monic() == want_lcm.monic(), "denominator lcm {}", r.render_param_poly(&den));
    let obs = obstructions(&m, o)?;
    ensure!(same_poly_set(&obs.factors, &polys(&r, &["g", "m1", "m2", "L1-L2"])), "obstructions {}", render_polys(&r, &obs.factors));
    let kept = admissibility_filter(&obs, &positive(&r, &["g", "m1", "m2", "L1", "L2"]));
    ensure!(same_poly_set(&kept.factors, &polys(&r, &["L1-L2"])), "admissible {}", render_polys(&r, &kept.factors));

    let r = Ring::new(&["g", "m1", "m2", "L"], &["d"], ModOrder::default());
    let m = r.matrix(&[&["L*d^2-g", "0", "m1*L*d^2"], &["0", "L*d^2-g", "m2*L*d^2"]]);
    let gb = groebner_basis(&m, &r.order).map_err(err)?;
    let want = [r.column(&["0", "L*d^2-g"]), r.column(&["1", "m2/m1"])];
    ensure!(gb.ncols() == 2, "basis has {} columns", gb.ncols());
    for w in &want {
        ensure!(
            gb.columns().iter().any(|c| vectors_proportional(&c.to_dense(), &w.to_dense())),
            "basis {:?} lacks {}",
            gb.columns().iter().map(|c| r.render_element(c)).collect::<Vec<_>>(),
            r.render_element(w)
        );
    }
    let ann = annihilator_of(&m, &r.order)?;
    ensure!(principal_like(&ann, &r.poly("L*d^2-g")), "annihilator {}", show(&r, &ann));
    Ok(())
}

fn criterion_4() -> Check {
    // genericity of the scaled model, restricted by positivity of masses, lengths and damping
    let (r, m) = friction_scaled();
    let obs = obstructions(&m, &r.order)?;
    let kept = admissibility_filter(&obs, &positive(&r, &["m1", "m2", "L1", "L2", "d1", "d2"]));
    let p = r.param_poly(P_COLLECTED);
    ensure!(r.param_poly(P_PRODUCTS) == p, "sum-of-products form does not expand to the collected form");
    ensure!(
        same_poly_set(&kept.factors, &[r.param_poly("z1"), r.param_poly("z2"), p.clone()]),
        "admissible obstructions {}",
        render_polys(&r, &kept.factors)
    );
    // the stiffness form is the same polynomial up to a monomial factor
    let rk = Ring::new(&["g", "m1", "m2", "L1", "L2", "d1", "d2", "k1", "k2"], &["d"], ModOrder::default());
    let scaled = parse_bound(
        &rk,
        &P_COLLECTED.replace('z', "Z").replace('d', "D"),
        &[("Z1", "(k1-m1*L1*g)/(m1*L1)"), ("Z2", "(k2-m2*L2*g)/(m2*L2)"), ("D1", "d1/(m1*L1)"), ("D2", "d2/(m2*L2)")],
    )
    .constant_value()
    .ok_or("scaled obstruction involves d")?;
    let ratio = rk.fraction(P_STIFFNESS).checked_div(&scaled).map_err(err)?;
    ensure!(ratio.numer().is_monomial() && ratio.denom().is_monomial(), "stiffness form differs: ratio {}", rk.render_fraction(&ratio));

    // sign systems over z1, z2, P
    let st = stratify_lc(&kept.factors, r.nparams(), &MonoOrder::DegRevLex).map_err(err)?;
    ensure!(st.branches.len() == 7, "{} sign systems", st.branches.len());
    let empty: Vec<_> = st.branches.iter().filter(|b| b.system.status == StratumStatus::Empty).collect();
    ensure!(empty.len() == 1, "{} empty systems", empty.len());
    ensure!(
        same_poly_set(&empty[0].system.equations, &polys(&r, &["z1", "z2"])),
        "empty system is not z1 = z2 = 0, P != 0"
    );
    ensure!(
        st.branches.iter().all(|b| b.system.status != StratumStatus::Unknown),
        "a system could not be decided"
    );
    let cases = st.cases();
    ensure!(cases.len() == 6, "{} cases", cases.len());
    for b in &st.branches {
        certify_components(&b.system.equations, &b.system.inequations, &b.components, r.nparams())?;
    }

    // case 1: z1 = z2 = 0
    let r1 = Ring::new(&["m1", "m2", "L1", "L2", "d1", "d2"], &["d"], ModOrder::default());
    let m1 = matrix_bound(&r1, &FRICTION_ROWS, &[("z1", "0"), ("z2", "0")]);
    let ann = annihilator_of(&m1, &r1.order)?;
    ensure!(principal_like(&ann, &r1.poly("d")), "case 1 annihilator {}", show(&r1, &ann));
    let aut = autonomy_analysis(&PresentedModule::new(m1), &r1.order).map_err(err)?;
    ensure!(aut.verdict == Verdict::NotAutonomous, "case 1 is autonomous");

    // case 2: the locally closed set z1 = P = 0, z2 != 0 in the stiffness variables
    let r2 = Ring::new(&["k1", "k2", "m1", "m2", "L1", "L2", "d1", "d2", "g"], &["d"], ModOrder::default());
    let mut weights = vec![1, 1];
    weights.extend([0; 7]);
    let elim = MonoOrder::weighted(weights, MonoOrder::DegRevLex);
    let eqs = polys(&r2, &[P_STIFFNESS, "k1-m1*L1*g"]);
    let ineqs = polys(&r2, &["k2-m2*L2*g"]);
    let comps = fact_gb(&eqs, &ineqs, 9, &elim).map_err(err)?;
    ensure!(comps.len() == 1, "case 2 has {} components", comps.len());
    let want = polys(&r2, &["k1+(-g)*m1*L1", "k2*m1^2*L1^4+(-g)*m1^2*m2*L1^4*L2+m2*L2^2*d1^2-m1*L1^2*d1*d2"]);
    ensure!(same_poly_set(&comps[0].equations, &want), "case 2 component {}", render_polys(&r2, &comps[0].equations));
    certify_components(&eqs, &ineqs, &comps, 9)?;
    let z2 = "(m1*L1^2*d2-m2*L2^2*d1)*d1/(m1^2*L1^4)";
    let m2 = matrix_bound(&r1, &FRICTION_ROWS, &[("z1", "0"), ("z2", z2)]);
    let ann = annihilator_of(&m2, &r1.order)?;
    ensure!(principal_like(&ann, &r1.poly("m1*L1^2*d^2+d1*d")), "case 2 annihilator {}", show(&r1, &ann));

    // case 3: z1 = 0 and z2 = u for a fresh parameter u
    let r3 = Ring::new(&["m1", "m2", "L1", "L2", "d1", "d2", "u"], &["d"], ModOrder::default());
    let m3 = matrix_bound(&r3, &FRICTION_ROWS, &[("z1", "0"), ("z2", "u")]);
    let obs = obstructions(&m3, &r3.order)?;
    let want = polys(&r3, &["u", "m2", "L2", "d1", "m1^2*L1^4*u-m1*L1^2*d1*d2+m2*L2^2*d1^2"]);
    ensure!(same_poly_set(&obs.factors, &want), "case 3 obstructions {}", render_polys(&r3, &obs.factors));
    let ann = annihilator_of(&m3, &r3.order)?;
    ensure!(principal_like(&ann, &r3.poly("d")), "case 3 annihilator {}", show(&r3, &ann));

    // case 6: the common ratio t of masses-lengths, stiffness and damping
    let r6 = Ring::new(&["g", "t", "m1", "L1", "L2", "d1", "k1"], &["d"], ModOrder::default());
    let m2_of_t = "t*m1*L1^2/L2^2";
    let on_ratio = parse_bound(
        &r6,
        P_STIFFNESS,
        &[("m2", m2_of_t), ("d2", "t*d1"), ("k2", &format!("t*k1+(({m2_of_t})*L2-t*m1*L1)*g"))],
    );
    ensure!(on_ratio.is_zero(), "the ratio condition does not make the obstruction vanish");
    let m6 = r6.matrix(&[
        &["m1*L1^2*d^2+d1*d+k1-m1*L1*g", "0", "L2*d^2"],
        &["0", "m1*L1^2*d^2+d1*d+k1-m1*L1*g", "t*L1*d^2"],
    ]);
    let ann = annihilator_of(&m6, &r6.order)?;
    ensure!(principal_like(&ann, &r6.poly("m1*L1^2*d^2+d1*d+k1-m1*L1*g")), "case 6 annihilator {}", show(&r6, &ann));

    // P = 0 with neither summand zero: d1 is a root of a quadratic, s^2 = d2^2 - 4*m2*L2^2*z2
    let rs = Ring::new(&["m1", "m2", "L1", "L2", "d2", "z1", "s", "g"], &["d"], ModOrder::default());
    let z2 = "(d2^2-s^2)/(4*m2*L2^2)";
    let mut found = Vec::new();
    for sign in ["+", "-"] {
        let d1 = format!("(d2*(m2*L2^2*z1+m1*L1^2*{z2}){sign}(m2*L2^2*z1-m1*L1^2*{z2})*s)/(2*m2*L2^2*{z2})");
        let binds = [("d1", d1.as_str()), ("z2", z2)];
        let k1 = "z1+m1*L1*g".to_string();
        let k2 = format!("{z2}+m2*L2*g");
        let on_root = parse_bound(&rs, P_STIFFNESS, &[("d1", &d1), ("k1", &k1), ("k2", &k2)]);
        ensure!(on_root.is_zero(), "root with sign {sign} is not on the obstruction");
        let m = matrix_bound(&rs, &FRICTION_ROWS, &binds);
        let ann = annihilator_of(&m, &rs.order)?;
        ensure!(ann.len() == 1, "root {sign}: annihilator {}", show(&rs, &ann));
        found.push(ann[0].clone());
    }
    let want = [rs.poly("2*m2*L2^2*d+d2+s"), rs.poly("2*m2*L2^2*d+d2-s")];
    let matched = want.iter().all(|w| found.iter().any(|f| proportional(f, w)));
    ensure!(matched, "root annihilators {}", show(&rs, &found));
    Ok(())
}

fn free_rank(r: &ModMatrix, o: &ModOrder) -> Result<Option<usize>, String> {
    let rep = control_analysis(&PresentedModule::new(r.clone()), o).map_err(err)?;
    if rep.first_nonzero_ext != -1 {
        return Ok(None);
    }
    Ok(Some(r.ncols() - column_rank(r, o).map_err(err)?))
}

fn criterion_5() -> Check {
    let r = Ring::new(&["a", "b"], &["d"], ModOrder::default());
    let o = &r.order;
    let generic = PresentedModule::new(r.matrix(&[&["a*d+b"]]));
    let aut = autonomy_analysis(&generic, o).map_err(err)?;
    ensure!(aut.verdict == Verdict::Autonomous, "generic: {}", aut.verdict);
    ensure!(aut.dimension == 0, "generic: dimension {}", aut.dimension);
    let diag = r.matrix(&[&["0", "0"], &["0", "a*d+b"]]);
    let ann = annihilator_of(&diag, o)?;
    ensure!(principal_like(&ann, &r.poly("a*d+b")), "diagonal annihilator {}", show(&r, &ann));
    ensure!(free_rank(&diag, o)?.is_none(), "diagonal system is torsion-free");

    // a = 0, b != 0
    let rb = Ring::new(&["b"], &["d"], ModOrder::default());
    let zero_mod = PresentedModule::new(rb.matrix(&[&["b"]]));
    ensure!(zero_mod.is_zero(&rb.order).map_err(err)?, "a = 0: module is not zero");
    let aut = autonomy_analysis(&zero_mod, &rb.order).map_err(err)?;
    ensure!(aut.verdict == Verdict::Autonomous && aut.dimension == -1, "a = 0: {} of dimension {}", aut.verdict, aut.dimension);
    ensure!(free_rank(&rb.matrix(&[&["0", "0"], &["0", "b"]]), &rb.order)? == Some(1), "diagonal with a = 0 is not free of rank 1");

    // a = b = 0
    let r0 = Ring::new(&[] as &[&str], &["d"], ModOrder::default());
    ensure!(free_rank(&r0.matrix(&[&["0"]]), &r0.order)? == Some(1), "a = b = 0 is not free of rank 1");
    let aut = autonomy_analysis(&PresentedModule::new(r0.matrix(&[&["0"]])), &r0.order).map_err(err)?;
    ensure!(aut.verdict == Verdict::NotAutonomous, "a = b = 0 is autonomous");
    ensure!(free_rank(&r0.matrix(&[&["0", "0"], &["0", "0"]]), &r0.order)? == Some(2), "zero diagonal is not free of rank 2");

    // a != 0, b = 0
    let ra = Ring::new(&["a"], &["d"], ModOrder::default());
    let ann = annihilator_of(&ra.matrix(&[&["0", "0"], &["0", "a*d"]]), &ra.order)?;
    ensure!(principal_like(&ann, &ra.poly("d")), "b = 0 annihilator {}", show(&ra, &ann));
    Ok(())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ring = random_ring();
    let o = &ring.order;
    let mut inverses = 0;
    for k in 0..RANDOM_INSTANCES {
        // alternate wide-and-linear with narrow-and-cubic shapes
        let f = if k % 2 == 0 { random_matrix(&ring, &mut rng, 3, 4, 1) } else { random_matrix(&ring, &mut rng, 2, 3, 3) };
        let t = trinity(&f, o).map_err(err)?;
        ensure!(f.checked_mul(&t.transform).map_err(err)? == t.gb, "instance {k}: H != F*T");
        ensure!(f.checked_mul(&t.syzygies).map_err(err)?.is_zero(), "instance {k}: F*S != 0");
        ensure!(buchberger_criterion(&t.gb, o), "instance {k}: basis fails the Buchberger criterion");
        ensure!(contained(&f, &t.gb, o) && contained(&t.gb, &f, o), "instance {k}: spans differ");
        if let Some(l) = left_inverse(&f, o).map_err(err)? {
            inverses += 1;
            ensure!(l.checked_mul(&f).map_err(err)? == ModMatrix::identity(f.ncols(), 2, 3), "instance {k}: L*M != Id");
        }
    }
    for k in 0..40 {
        let n = 2 + k % 2;
        let m = unimodular_columns(&ring, &mut rng, n, 1 + k % n);
        let l = left_inverse(&m, o).map_err(err)?.ok_or(format!("unimodular instance {k}: no left inverse"))?;
        ensure!(l.checked_mul(&m).map_err(err)? == ModMatrix::identity(m.ncols(), 2, 3), "unimodular instance {k}: L*M != Id");
        inverses += 1;
    }
    ensure!(inverses >= 40, "only {inverses} left inverses checked");

    for (name, (r, m)) in [("bipendulum", bipendulum()), ("pendula", pendula()), ("friction", friction_scaled())] {
        let mut log = DenominatorLog::default();
        let gb = groebner_basis_logged(&m, &r.order, &GbConfig::default(), &mut log).map_err(err)?;
        ensure!(buchberger_criterion(&gb, &r.order), "{name}: basis fails the Buchberger criterion");
        let mut avoid: Vec<ParamPoly> = obstructions(&m, &r.order)?.factors;
        avoid.extend(log.events.into_iter().map(|e| e.denominator));
        for c in gb.columns().iter().chain(m.columns()) {
            avoid.extend(c.entries().map(|(_, p)| p.denominator_lcm()));
        }
        for _ in 0..COHERENCE_POINTS {
            let point = admissible_point(&mut rng, r.nparams(), 17, &avoid);
            ensure!(specialization_agrees(&m, &gb, &point, &r.order).map_err(err)?, "{name}: incoherent at {point:?}");
        }
    }

    let rp = Ring::new(&["p", "q", "w", "v"], &["d"], ModOrder::default());
    let pool = polys(&rp, &["p", "q-1", "p-w", "v+q", "p*q-w"]);
    for n in 1..=4 {
        ensure!(sign_patterns(n).len() == (1 << n) - 1, "{n} factors: wrong pattern count");
        let st = stratify_lc(&pool[..n], 4, &MonoOrder::DegRevLex).map_err(err)?;
        ensure!(st.branches.len() == (1 << n) - 1, "{n} factors: {} sign systems", st.branches.len());
        for b in &st.branches {
            certify_components(&b.system.equations, &b.system.inequations, &b.components, 4)?;
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let (r, m) = bipendulum();
    let lw = leykin_walther(&m).map_err(err)?;
    ensure!(same_poly_set(&lw.factors, &polys(&r, &["g", "l1", "l2", "l1-l2"])), "bipendulum factors {}", render_polys(&r, &lw.factors));
    let positives = polys(&r, &["g", "l1", "l2"]);
    let h = lw.factors.iter().fold(ParamPoly::one(3), |acc, f| &acc * f);
    let kept = admissibility_filter(&obstructions(&m, &r.order)?, &positive(&r, &["g", "l1", "l2"]));
    ensure!(!kept.is_empty(), "bipendulum: no admissible obstructions");
    for f in &kept.factors {
        ensure!(variety_contained(f, &h, &positives).map_err(err)?, "bipendulum: V({}) not inside V(h)", r.render_param_poly(f));
    }

    let (r, m) = pendula();
    let lw = leykin_walther(&m).map_err(err)?;
    let want = polys(&r, &["g", "m1", "m2", "L1", "L2", "L1-L2"]);
    ensure!(same_poly_set(&lw.factors, &want), "pendula factors {}", render_polys(&r, &lw.factors));
    let names = ["g", "m1", "m2", "L1", "L2"];
    let positives = polys(&r, &names);
    let h = lw.factors.iter().fold(ParamPoly::one(5), |acc, f| &acc * f);
    let kept = admissibility_filter(&obstructions(&m, &r.order)?, &positive(&r, &names));
    ensure!(!kept.is_empty(), "pendula: no admissible obstructions");
    for f in &kept.factors {
        ensure!(variety_contained(f, &h, &positives).map_err(err)?, "pendula: V({}) not inside V(h)", r.render_param_poly(f));
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("bipendulum, generic parameters", criterion_1),
        ("bipendulum, equal lengths", criterion_2),
        ("two pendula without friction", criterion_3),
        ("two pendula with friction", criterion_4),
        ("first-order strata", criterion_5),
        ("property suites", criterion_6),
        ("comparison-method cross-check", criterion_7),
    ];
    // optional arguments select criteria by number
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if took > TIME_BUDGET {
                Err(format!("exceeded the {} s budget", TIME_BUDGET.as_secs()))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({} ms)", k + 1, took.as_millis()),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({} ms): {e}", k + 1, took.as_millis());
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
