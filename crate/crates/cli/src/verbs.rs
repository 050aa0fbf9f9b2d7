//! One function per subcommand. Library errors inside a verb become failed checks; only
//! problems with the input itself are returned as errors.

use crate::problem::{InputError, Mode, ProblemSpec};
use acaf::bgg::{
    bgg_operator, curvature_residual, highest_weights, ricci_element_parallel, ricci_identity_residual, splitting_operator,
    weyl_dimension, DerivativeData, Engine, Flavor, Geometry, Hodge,
};
use acaf::checks::{run_all, KNOWN_CONFLICTS};
use acaf::connection::{build_nabla0, decompose_dj, dj, torsion_of, Connection};
use acaf::curvature::{lowered_curvature, normal_rho, normality_display, normality_obstruction, verify_escur};
use acaf::frame::PolyTensor;
use acaf::generate::rng_from_seed;
use acaf::linalg::{Matrix, FLOAT_TOL};
use acaf::poly::Poly;
use acaf::report::{Check, Report};
use acaf::scalar::{Field, Ring, Q};
use acaf::tensor::Tensor;
use acaf::tractor::{d_t, TractorForm};
use acaf::Result;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Verb {
    DecomposeConn,
    Nabla0,
    Curvature,
    BggVerify,
    Cohomology,
    Eigenvalues,
    Selftest,
}

impl Verb {
    fn exact_only(self) -> bool {
        matches!(self, Verb::BggVerify | Verb::Cohomology | Verb::Eigenvalues | Verb::Selftest)
    }
}

pub fn run(verb: Verb, spec: &ProblemSpec) -> std::result::Result<Report, InputError> {
    if spec.mode == Mode::Float && verb.exact_only() {
        return Err(InputError::Invalid { field: "mode".into(), reason: format!("{} runs in exact arithmetic only", clap::ValueEnum::to_possible_value(&verb).expect("named").get_name()) });
    }
    if spec.mode == Mode::Float && spec.theta.is_some() {
        return Err(InputError::Invalid { field: "theta".into(), reason: "the Ricci-type check runs in exact arithmetic only".into() });
    }
    let float = |c: &Connection<Q>| c.map_field(|x: &Q| f64::from_q(x));
    let to_f = |t: &PolyTensor<Q>| t.map(|p| p.map_field(|x: &Q| f64::from_q(x)));
    Ok(match (verb, spec.mode) {
        (Verb::DecomposeConn, Mode::Exact) => decompose_conn(&spec.connection, spec.h.as_ref(), spec.s.as_ref(), 0.0),
        (Verb::DecomposeConn, Mode::Float) => {
            decompose_conn(&float(&spec.connection), spec.h.as_ref().map(to_f).as_ref(), spec.s.as_ref().map(to_f).as_ref(), FLOAT_TOL)
        }
        (Verb::Nabla0, Mode::Exact) => nabla0(&spec.connection, 0.0),
        (Verb::Nabla0, Mode::Float) => nabla0(&float(&spec.connection), FLOAT_TOL),
        (Verb::Curvature, Mode::Exact) => {
            let mut rep = curvature(&spec.connection, 0.0);
            if let Some(theta) = &spec.theta {
                ricci_type(&mut rep, theta);
            }
            rep
        }
        (Verb::Curvature, Mode::Float) => curvature(&float(&spec.connection), FLOAT_TOL),
        (Verb::BggVerify, _) => bgg_verify(spec),
        (Verb::Cohomology, _) => cohomology(spec.n),
        (Verb::Eigenvalues, _) => eigenvalues(spec.n),
        (Verb::Selftest, _) => selftest(spec.seed),
    })
}

/// Runs `body`, turning an error into a failed check called `name`.
fn attempt(rep: &mut Report, name: &str, anchor: &str, body: impl FnOnce(&mut Report) -> Result<()>) {
    let start = Instant::now();
    if let Err(e) = body(rep) {
        rep.push(Check::new(name, anchor, false, format!("error: {e}")).timed(start));
    }
}

/// Records every nonzero entry of `t` under `prefix[i,j,…]`.
fn record<F: Field>(rep: &mut Report, prefix: &str, t: &PolyTensor<F>, tol: f64) {
    for (idx, p) in t.indices().zip(t.data()) {
        if !p.is_negligible(tol) {
            let key = idx.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            rep.data.insert(format!("{prefix}[{key}]"), p.render());
        }
    }
}

fn same<F: Field>(a: &PolyTensor<F>, b: &PolyTensor<F>, tol: f64) -> bool {
    a.data().iter().zip(b.data()).all(|(x, y)| x.sub(y).is_negligible(tol))
}

fn decompose_conn<F: Field>(d: &Connection<F>, h: Option<&PolyTensor<F>>, s: Option<&PolyTensor<F>>, tol: f64) -> Report {
    let mut rep = Report::new("decomposition of D_a J_bc");
    attempt(&mut rep, "decomposition", "D_a J_bc = 2α_a J_bc + J_ab β_c − J_ac β_b − H_bca + 2S_bca", |rep| {
        let start = Instant::now();
        let x = dj(d);
        let dec = decompose_dj(&x)?;
        rep.push(Check::zero_tensor("reconstruction", "D_a J_bc from α, β, H, S", &dec.reconstruct().sub(&x), tol).timed(start));
        for (name, ok) in dec.symmetry_checks() {
            rep.push(Check::new(format!("symmetry {name}"), "H and S symmetries", ok, if ok { "0" } else { "violated" }));
        }
        for (label, want, got) in [("H", h, &dec.h), ("S", s, &dec.s)] {
            if let Some(want) = want {
                let ok = same(want, got, tol);
                rep.push(Check::new(format!("supplied {label} matches"), "problem file", ok, if ok { "0" } else { "differs" }));
            }
        }
        record(rep, "alpha", &dec.alpha, tol);
        record(rep, "beta", &dec.beta, tol);
        record(rep, "H", &dec.h, tol);
        record(rep, "S", &dec.s, tol);
        Ok(())
    });
    rep
}

fn nabla0<F: Field>(d: &Connection<F>, tol: f64) -> Report {
    let mut rep = Report::new("distinguished connection");
    attempt(&mut rep, "pipeline", "D ↦ D⁰ ↦ ∇⁰", |rep| {
        let start = Instant::now();
        let p = build_nabla0(d)?;
        rep.push(Check::zero_tensor("beta(D0) = 0", "D⁰ has β = 0", &decompose_dj(&dj(&p.d0))?.beta, tol).timed(start));
        rep.push(Check::zero_tensor("nabla0 J = 0", "∇⁰_a J_bc = 0", &dj(&p.nabla0), tol));
        let t = torsion_of(&p.nabla0);
        rep.push(Check::zero_tensor("torsion trace T_ai^i = 0", "trace of the torsion", &t.contract_trace(2, 1)?, tol));
        rep.push(Check::zero_tensor("torsion trace J^ab T_ab^d = 0", "J-trace of the torsion", &t.contract_j(0, 1)?, tol));
        let equal = same(p.nabla0.gamma(), d.gamma(), tol) && p.nabla0.frame() == d.frame();
        rep.data.insert("nabla0 equals input".into(), equal.to_string());
        record(rep, "H", &p.h, tol);
        record(rep, "S", &p.s, tol);
        record(rep, "Gamma0", p.nabla0.gamma(), tol);
        Ok(())
    });
    rep
}

fn curvature<F: Field>(d: &Connection<F>, tol: f64) -> Report {
    let mut rep = Report::new("curvature of the distinguished connection");
    attempt(&mut rep, "pipeline", "D ↦ ∇⁰", |rep| {
        let p = build_nabla0(d)?;
        rep.extend(verify_escur(&p));
        let start = Instant::now();
        let r0 = lowered_curvature(&p.nabla0);
        if p.h.is_negligible(tol) {
            let rho = normal_rho(&r0, &p.h, &p.nabla0)?;
            let ok = normality_display(&r0, &p.h, &rho, &p.nabla0)?.is_negligible(tol);
            rep.push(Check::new("normal Rho zeroes the display", "normality with H = 0", ok, if ok { "0" } else { "nonzero" }).timed(start));
            record(rep, "P_ab", &rho.pab, tol);
            record(rep, "P_a", &rho.pa, tol);
        } else {
            let ob = normality_obstruction(&p.h);
            let ok = !ob.is_negligible(tol);
            rep.push(Check::new("normality obstruction for H != 0", "−2H_ac^d − 2H_a^d_c", ok, if ok { "0" } else { "vanishes" }).timed(start));
            record(rep, "obstruction", &ob, tol);
        }
        Ok(())
    });
    rep
}

fn ricci_type(rep: &mut Report, theta: &PolyTensor<Q>) {
    attempt(rep, "Ricci-type cancellation", "Alt₂(dτ(−2JΘ)) + 2J∧dτ(Θ) + dτ(Θ)2J∧ = 0", |rep| {
        let start = Instant::now();
        let n = theta.dim();
        let e = Engine::standard(n)?;
        let m = Matrix::from_fn(n, n, |a, b| theta.get(&[a, b]).constant_term());
        let y = ricci_element_parallel(&e, &m)?;
        for deg in 0..3 {
            let ok = ricci_identity_residual(&e, deg, &y).is_zero();
            rep.push(Check::new(format!("Ricci-type cancellation, degree {deg}"), "§5.2", ok, if ok { "0" } else { "nonzero" }).timed(start));
        }
        Ok(())
    });
}

fn first_nonzero(v: &[Poly<Q>]) -> Option<String> {
    v.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(i, p)| format!("[{i}]: {}", p.render()))
}

fn zero_vec(name: &str, anchor: &str, v: &[Poly<Q>], start: Instant) -> Check {
    match first_nonzero(v) {
        None => Check::new(name, anchor, true, "0"),
        Some(r) => Check::new(name, anchor, false, r),
    }
    .timed(start)
}

fn bgg_verify(spec: &ProblemSpec) -> Report {
    let mut rep = Report::new("BGG operators");
    let n = spec.n;
    let rho_zero = spec.rho.pab.is_zero() && spec.rho.pa.is_zero();
    attempt(&mut rep, "setup", "Weyl geometry of the input", |rep| {
        let e = Engine::standard(n)?;
        let conn = if spec.flat { spec.connection.clone() } else { build_nabla0(&spec.connection)?.nabla0 };
        let curved = !lowered_curvature(&conn).is_zero();
        let data = DerivativeData::new(&e, Geometry::new(conn.clone(), spec.rho.clone()))?;
        let hodge = (0..3).map(|k| Hodge::new(&e, Flavor::LV, k)).collect::<Result<Vec<_>>>()?;
        let mut rng = rng_from_seed(spec.seed);

        let start = Instant::now();
        let mut f = TractorForm::zero(n, 0);
        let t = Poly::random(&mut rng, n, spec.degree, 3, 0.2);
        f.t = Tensor::from_fn(n, &[], -1, |_| t.clone());
        let s0 = splitting_operator(&data, &hodge[0], &f.to_raw(&e)?)?;
        let b0 = bgg_operator(&data, &s0, &hodge[1])?;
        let s1 = splitting_operator(&data, &hodge[1], &b0)?;
        let b1b0 = bgg_operator(&data, &s1, &hodge[2])?;
        if curved || !rho_zero {
            rep.data.insert("B1 B0 residual".into(), first_nonzero(&b1b0).unwrap_or_else(|| "0".into()));
        } else {
            rep.push(zero_vec("B1 B0 = 0", "flat chart: the BGG sequence is a complex", &b1b0, start));
        }

        if rho_zero {
            for k in 0..2 {
                let start = Instant::now();
                let dim = e.space(Flavor::Full, k)?.dim();
                let phi: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, n, 1, 3, 0.3)).collect();
                let name = format!("(d^W)^2 = Alt2(d^omega(-R)), degree {k}");
                rep.push(zero_vec(&name, "curvature of the twisted differential, P = 0", &curvature_residual(&data, k, &phi)?, start));
            }
            for k in 0..=2 {
                let start = Instant::now();
                let dim = e.space(Flavor::LV, k)?.dim();
                let raw: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, n, 1, 3, 0.15)).collect();
                let phi = e.r0(Flavor::LV, k)?.apply(&raw);
                let ours = d_t(&conn, &TractorForm::from_raw(&e, k, &phi)?)?.to_raw(&e)?;
                let theirs = data.d_l(Flavor::LV, k, &phi)?;
                let diff: Vec<Poly<Q>> = ours.iter().zip(&theirs).map(|(a, b)| a.sub(b)).collect();
                rep.push(zero_vec(&format!("d^T double entry, k = {k}"), "slot formula against the engine", &diff, start));
            }
        }
        rep.data.insert("curved".into(), curved.to_string());
        Ok(())
    });
    rep
}

fn cohomology(n: usize) -> Report {
    let mut rep = Report::new("Lie algebra cohomology H^k(p+, V)");
    attempt(&mut rep, "harmonic forms", "Hodge decomposition", |rep| {
        let e = Engine::standard(n)?;
        let mut counts = Vec::new();
        for k in 0..=n {
            let start = Instant::now();
            let h = Hodge::new(&e, Flavor::LV, k)?;
            let hw = highest_weights(&e, &h)?;
            let total: u64 = hw.iter().map(|x| x.multiplicity as u64 * weyl_dimension(&x.weight)).sum();
            rep.push(Check::equal(format!("Weyl dimension, k = {k}"), "Weyl dimension formula", total, h.harmonic.len() as u64).timed(start));
            let rows: Vec<String> = hw
                .iter()
                .map(|x| format!("{} x{} (dim {}, homogeneity {})", x.label_string(), x.multiplicity, x.dim, x.homogeneity))
                .collect();
            rep.data.insert(format!("H^{k:02}"), rows.join("; "));
            counts.push(hw.iter().map(|x| x.multiplicity).sum::<usize>());
        }
        if n == 6 {
            let text = |v: &[usize]| format!("{v:?}");
            rep.push(Check::equal("block counts", "n = 6 cohomology diagram", text(&counts), text(&[1, 1, 2, 3, 2, 1, 1])));
        }
        Ok(())
    });
    rep
}

fn eigenvalues(n: usize) -> Report {
    let mut rep = Report::new("eigenvalues of the Kostant Laplacian");
    attempt(&mut rep, "eigenvalues", "Hodge decomposition", |rep| {
        let e = Engine::standard(n)?;
        for k in 0..n {
            let start = Instant::now();
            let h = Hodge::new(&e, Flavor::LV, k)?;
            for b in &h.blocks {
                rep.data.insert(format!("k={k:02} homogeneity={:+03}", b.homogeneity), format!("{} (dim {})", b.eigenvalue, b.dim));
            }
            let want = Q::from_integer((-(((k + 1) * (n - k)) as i64)).into());
            let got: Vec<String> = h.blocks.iter().filter(|b| b.homogeneity == k as i32 + 1).map(|b| b.eigenvalue.to_string()).collect();
            let ok = got == [want.to_string()];
            rep.push(Check::new(format!("top slot, k = {k}"), "−(k+1)(n−k)", ok, if ok { "0".into() } else { format!("{got:?}") }).timed(start));
        }
        Ok(())
    });
    rep
}

fn selftest(seed: u64) -> Report {
    let mut rep = Report::new("acceptance criteria");
    for (_, r) in run_all(seed) {
        rep.extend(r);
    }
    rep.data.insert("documented conflicts".into(), KNOWN_CONFLICTS.join("; "));
    rep
}
