//! The acceptance suite: one report per criterion, all in exact arithmetic.
//!
//! Every check name starts with `c<id>`. Checks that reproduce a printed constant which the
//! implementation shows to be inconsistent are listed in [`KNOWN_CONFLICTS`]; they are run and
//! reported like every other check.

use crate::bgg::{
    bgg_operator, curvature_residual, highest_weights, ricci_element_parallel, ricci_identity_residual, splitting_operator,
    weyl_dimension, DerivativeData, Engine, Flavor, Geometry, Hodge,
};
use crate::connection::{
    build_nabla0, covariant_derivative, decompose_dj, dj, j_field, torsion_of, transform_connection, Connection,
    ConnectionChange, RhoTensor,
};
use crate::curvature::{
    decompose_curvature, lowered_curvature, normal_rho, normality_display, normality_obstruction, verify_escur,
    AcsComponents, CurvatureComponents, DecompositionKind, ProjectiveComponents,
};
use crate::error::{AcafError, Result};
use crate::forms::{bits, sort_sign};
use crate::frame::{Frame, PolyTensor};
use crate::generate::{random_acf, random_cf, random_torsion_free, rng_from_seed};
use crate::linalg::{Matrix, SparseMatrix};
use crate::poly::{monomials_up_to, unpack, Poly};
use crate::report::{Check, Report};
use crate::scalar::{Ring, Q};
use crate::tensor::{make_standard_j, std_j, IndexMove, Lower, Projection, Tensor, Upper};
use crate::tractor::{self, TractorForm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Criterion ids with a short title.
pub const CRITERIA: [(u8, &str); 11] = [
    (1, "sign and weight conventions"),
    (2, "distinguished connection pipeline"),
    (3, "curvature decompositions and theorem"),
    (4, "Lie algebra differentials and Hodge decomposition"),
    (5, "tractor eigenvalues and splitting coefficients"),
    (6, "first BGG operators on the flat chart"),
    (7, "curvature of the twisted differential"),
    (8, "normality"),
    (9, "Ricci-type cancellation"),
    (10, "cohomology blocks"),
    (11, "double entry of the tractor operators"),
];

/// Name prefixes of checks that compare against a printed value the computation contradicts.
pub const KNOWN_CONFLICTS: [&str; 4] = [
    "c1 raise-lower round trip",
    "c4 tractor (∂*₀)² coefficient",
    "c5 middle-slot eigenvalues",
    "c7 printed CF formula for (d^T)²",
];

pub fn is_known_conflict(name: &str) -> bool {
    KNOWN_CONFLICTS.iter().any(|p| name.starts_with(p))
}

pub fn title(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, t)| *t)
}

/// Runs one criterion. Internal errors become failed checks.
pub fn run_criterion(id: u8, seed: u64) -> Result<Report> {
    let title = title(id).ok_or_else(|| AcafError::Input(format!("no criterion {id}")))?;
    let mut rep = Report::new(format!("criterion {id}: {title}"));
    let mut ctx = Ctx { rep: &mut rep, seed };
    match id {
        1 => c1(&mut ctx),
        2 => c2(&mut ctx),
        3 => c3(&mut ctx),
        4 => c4(&mut ctx),
        5 => c5(&mut ctx),
        6 => c6(&mut ctx),
        7 => c7(&mut ctx),
        8 => c8(&mut ctx),
        9 => c9(&mut ctx),
        10 => c10(&mut ctx),
        _ => c11(&mut ctx),
    }
    Ok(rep)
}

/// All criteria in order.
pub fn run_all(seed: u64) -> Vec<(u8, Report)> {
    CRITERIA.iter().map(|&(id, _)| (id, run_criterion(id, seed).expect("known id"))).collect()
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    rng_from_seed(seed.wrapping_mul(1_000_003).wrapping_add(salt))
}

struct Ctx<'a> {
    rep: &'a mut Report,
    seed: u64,
}

/// Outcome of a check body: `Ok(None)` passes, `Ok(Some(residual))` fails.
type Outcome = Result<Option<String>>;

impl Ctx<'_> {
    fn check(&mut self, name: &str, anchor: &str, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let c = match body() {
            Ok(None) => Check::new(name, anchor, true, "0"),
            Ok(Some(r)) => Check::new(name, anchor, false, r),
            Err(e) => Check::new(name, anchor, false, format!("error: {e}")),
        };
        self.rep.push(c.timed(start));
    }
}

fn first_nonzero_poly(v: &[Poly<Q>]) -> Option<String> {
    v.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(i, p)| format!("[{i}]: {}", p.render()))
}

fn first_nonzero<C: Ring>(t: &Tensor<C>) -> Option<String> {
    t.indices().zip(t.data()).find(|(_, c)| !c.is_zero()).map(|(i, c)| format!("{i:?}: {}", c.render()))
}

fn tagged(tag: impl std::fmt::Display, r: Option<String>) -> Option<String> {
    r.map(|r| format!("{tag}: {r}"))
}

/// Runs `f` on each item and stops at the first failure.
fn each<T>(items: impl IntoIterator<Item = T>, mut f: impl FnMut(T) -> Outcome) -> Outcome {
    for it in items {
        if let Some(r) = f(it)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn random_ints(rng: &mut ChaCha8Rng, n: usize, var: &[crate::tensor::Variance], w: i32) -> Tensor<Q> {
    Tensor::from_fn(n, var, w, |_| Q::from_ratio(rng.gen_range(-4..=4), 1))
}

// ---------------------------------------------------------------- 1

fn c1(ctx: &mut Ctx) {
    let seed = ctx.seed;
    for n in [4usize, 6, 8] {
        ctx.check(&format!("c1 J_ab J^bd = -delta n={n}"), "§1, J_abJ^bd = −δ_a^d", || {
            let sd = make_standard_j(n)?;
            let prod = sd.j_lower.outer(&sd.j_upper).contract_trace(2, 1)?;
            let delta = Tensor::from_fn(n, &[Lower, Upper], 0, |i| if i[0] == i[1] { Q::from_ratio(-1, 1) } else { Q::zero() });
            Ok(first_nonzero(&prod.sub(&delta)))
        });
        ctx.check(&format!("c1 weights of lowering and raising n={n}"), "§1, lowering maps to T^*M[−2]", || {
            let xi = random_ints(&mut rng_for(seed, n as u64), n, &[Upper], 3);
            let low = xi.adjust_index(0, IndexMove::Lower)?;
            let back = low.adjust_index(0, IndexMove::Raise)?;
            Ok((low.weight() != 1 || back.weight() != 3).then(|| format!("weights {} and {}", low.weight(), back.weight())))
        });
        ctx.check(&format!("c1 raise-lower round trip n={n}"), "§1, round trip = −id", || {
            let mut rng = rng_for(seed, n as u64);
            let xi = random_ints(&mut rng, n, &[Upper], 0);
            let ups = random_ints(&mut rng, n, &[Lower], 0);
            let a = xi.adjust_index(0, IndexMove::Lower)?.adjust_index(0, IndexMove::Raise)?.with_weight(0);
            let b = ups.adjust_index(0, IndexMove::Raise)?.adjust_index(0, IndexMove::Lower)?.with_weight(0);
            let r = tagged("vector", first_nonzero(&a.add(&xi))).or(tagged("covector", first_nonzero(&b.add(&ups))));
            Ok(r.map(|r| format!("round trip is not −id ({r}); it is {}", if a == xi && b == ups { "+id" } else { "neither" })))
        });
    }
}

// ---------------------------------------------------------------- 2

fn c2(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6;
    let inputs: Vec<(u64, Connection<Q>)> = (0..20).map(|i| (i, random_torsion_free(&mut rng_for(seed, 200 + i), n, 2))).collect();
    let pipes: Vec<Result<_>> = inputs.iter().map(|(_, d)| build_nabla0(d)).collect();
    ctx.check("c2 nabla0 J = 0", "§2, ∇⁰J = 0", || {
        each(inputs.iter().zip(&pipes), |((i, _), p)| {
            let p = p.as_ref().map_err(Clone::clone)?;
            Ok(tagged(format!("input {i}"), first_nonzero(&covariant_derivative(&p.nabla0, &j_field(n))?)))
        })
    });
    ctx.check("c2 torsion traces vanish", "§2, T_ai^i = 0 and J^abT_ab^d = 0", || {
        each(inputs.iter().zip(&pipes), |((i, _), p)| {
            let t = torsion_of(&p.as_ref().map_err(Clone::clone)?.nabla0);
            let r = first_nonzero(&t.contract_trace(2, 1)?).or(first_nonzero(&t.contract_j(0, 1)?));
            Ok(tagged(format!("input {i}"), r))
        })
    });
    ctx.check("c2 decomposition symmetries", "§2, symmetries of H and S", || {
        each(inputs.iter().zip(&pipes), |((i, _), p)| {
            let p = p.as_ref().map_err(Clone::clone)?;
            Ok(p.input_decomposition.symmetry_checks().into_iter().find(|(_, ok)| !ok).map(|(name, _)| format!("input {i}: {name}")))
        })
    });
    ctx.check("c2 projective covariance", "§2, ᾱ = α + Υ/n, β̄ = β + Υ", || {
        each(inputs.iter(), |(i, d)| {
            let mut rng = rng_for(seed, 300 + i);
            let ups = Tensor::from_fn(n, &[Lower], 0, |_| Poly::random(&mut rng, n, 1, 3, 0.4));
            let dec = decompose_dj(&dj(d))?;
            let bar = decompose_dj(&dj(&transform_connection(d, &ConnectionChange::Projective(ups.clone()))?))?;
            let r = first_nonzero(&bar.beta.sub(&dec.beta).sub(&ups))
                .or(first_nonzero(&bar.alpha.sub(&dec.alpha).sub(&ups.scale_ratio(1, n as i64))));
            Ok(tagged(format!("input {i}"), r))
        })
    });
}

// ---------------------------------------------------------------- 3

fn constant_part(t: &PolyTensor<Q>) -> Tensor<Q> {
    t.map(|p| p.constant_term())
}

/// A random `csp`-valued `R_abcd`: antisymmetric in `ab`, symmetric in `cd` plus `J_cd Y_ab`.
fn random_csp_curvature(rng: &mut ChaCha8Rng, n: usize) -> Tensor<Q> {
    let x = random_ints(rng, n, &[Lower; 4], 0);
    let x = x.symmetrize_project(&[0, 1], Projection::Antisym).unwrap().symmetrize_project(&[2, 3], Projection::Sym).unwrap();
    let y = random_ints(rng, n, &[Lower; 2], 0).symmetrize_project(&[0, 1], Projection::Antisym).unwrap();
    x.add(&Tensor::from_fn(n, &[Lower; 4], 0, |i| y.get(&[i[0], i[1]]).scale_ratio(std_j(n, i[2], i[3]).unwrap_or(0), 1)))
}

fn projective(c: CurvatureComponents<Q>) -> Result<ProjectiveComponents<Q>> {
    match c {
        CurvatureComponents::Projective(p) => Ok(p),
        _ => Err(AcafError::Structural("expected projective components".into())),
    }
}

fn acs(c: CurvatureComponents<Q>) -> Result<AcsComponents<Q>> {
    match c {
        CurvatureComponents::Acs(p) => Ok(p),
        _ => Err(AcafError::Structural("expected ACS components".into())),
    }
}

fn c3(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6;
    ctx.check("c3 projective round trip", "App B, projective decomposition", || {
        each(0..20u64, |i| {
            let mut rng = rng_for(seed, 400 + i);
            let r1 = constant_part(&lowered_curvature(&random_torsion_free(&mut rng, n, 1)));
            let r2 = constant_part(&lowered_curvature(&random_torsion_free(&mut rng, n, 1)));
            let a = projective(decompose_curvature(&r1, DecompositionKind::Projective, 0.0)?)?;
            let b = projective(decompose_curvature(&r2, DecompositionKind::Projective, 0.0)?)?;
            // mix the components of two inputs so the set is not the decomposition of a given tensor
            let mixed = ProjectiveComponents {
                w: a.w.scale_ratio(2, 1),
                y: b.y.clone(),
                z: a.z.add(&b.z),
                theta: b.theta.clone(),
                sigma: a.sigma.scale_ratio(-1, 3),
                rho_s: b.rho_s.clone(),
                rho_a: a.rho_a.clone(),
                rho_t: b.rho_t.clone(),
            };
            let back = projective(decompose_curvature(&mixed.synthesize(), DecompositionKind::Projective, 0.0)?)?;
            Ok((back != mixed).then(|| format!("set {i}: extracted components differ")))
        })
    });
    ctx.check("c3 ACS round trip", "App B, ACS decomposition", || {
        each(0..20u64, |i| {
            let mut rng = rng_for(seed, 500 + i);
            let a = acs(decompose_curvature(&random_csp_curvature(&mut rng, n), DecompositionKind::Acs, 0.0)?)?;
            let b = acs(decompose_curvature(&random_csp_curvature(&mut rng, n), DecompositionKind::Acs, 0.0)?)?;
            let mixed = AcsComponents {
                u: a.u.add(&b.u),
                v: b.v.clone(),
                a: a.a.clone(),
                b: b.b.scale_ratio(3, 1),
                c: a.c.clone(),
                e: b.e.clone(),
                f: a.f.clone(),
            };
            let back = acs(decompose_curvature(&mixed.synthesize(), DecompositionKind::Acs, 0.0)?)?;
            Ok((back != mixed).then(|| format!("set {i}: extracted components differ")))
        })
    });
    for i in 0..4u64 {
        let mut rng = rng_for(seed, 600 + i);
        let input = if i < 2 { Ok(random_torsion_free(&mut rng, n, 2)) } else { random_acf(&mut rng, n, 1).map(|(d, _)| d) };
        match input.and_then(|d| build_nabla0(&d)) {
            Ok(p) => {
                for c in verify_escur(&p).checks {
                    ctx.rep.push(Check { name: format!("c3 {} (input {i})", c.name), ..c });
                }
            }
            Err(e) => ctx.rep.push(Check::new(format!("c3 pipeline input {i}"), "App B theorem", false, e.to_string())),
        }
    }
}

// ---------------------------------------------------------------- 4

/// `J^{ab}φ_{…ab}` followed by `dτ(z)` on raw `L^k` coordinates, `k ≥ 2`.
fn trace_then_z(e: &Engine, k: usize) -> Result<SparseMatrix<Q>> {
    let src = e.space(Flavor::LV, k)?;
    let dst = e.space(Flavor::LV, k - 2)?;
    let n = e.n();
    let z = e.rep().matrix(e.algebra().idx_z());
    let pos = |beta: usize| (0..dst.value_dim()).find(|&p| dst.value(p) == beta);
    let mut t = Vec::new();
    for (di, mask) in dst.sets().iter() {
        let s = bits(mask);
        for a in (0..n).filter(|a| mask & (1 << a) == 0) {
            for b in (0..n).filter(|&b| b != a && mask & (1 << b) == 0) {
                let Some(jab) = std_j(n, a, b) else { continue };
                let mut idx = s.clone();
                idx.extend([a, b]);
                let sg = sort_sign(&idx) * jab;
                let si = src.sets().index(mask | (1 << a) | (1 << b)).expect("subset");
                for p in 0..dst.value_dim() {
                    for (beta, c) in z.row(dst.value(p)) {
                        // inputs outside V do not occur in V-valued forms
                        let Some(q) = pos(*beta) else { continue };
                        t.push((dst.index(di, p), src.index(si, q), c.scale_ratio(sg, 1)));
                    }
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(dst.dim(), src.dim(), t))
}

fn c4(ctx: &mut Ctx) {
    let seed = ctx.seed;
    for n in [6usize, 8] {
        let engine = Engine::standard(n);
        for flavor in [Flavor::LV, Flavor::LV2] {
            let tag = if flavor == Flavor::LV { "T" } else { "T[2]" };
            ctx.check(&format!("c4 ∂² = 0 on L^k({tag}) n={n}"), "§5.1, ∂ is a differential", || {
                let e = engine.as_ref().map_err(Clone::clone)?;
                each((0..=4).filter(|k| k + 2 <= e.max_degree(flavor)), |k| {
                    let dd = e.differential(flavor, k + 1)?.mul(&e.differential(flavor, k)?);
                    Ok((!dd.is_zero()).then(|| format!("k = {k}")))
                })
            });
            ctx.check(&format!("c4 (∂*)² = 0 on L^k({tag}) n={n}"), "§5.1, ∂* is a codifferential", || {
                let e = engine.as_ref().map_err(Clone::clone)?;
                each(2..=4, |k| {
                    let ss = e.codifferential(flavor, k - 1)?.mul(&e.codifferential(flavor, k)?);
                    Ok((!ss.is_zero()).then(|| format!("k = {k}")))
                })
            });
        }
        ctx.check(&format!("c4 Hodge decomposition n={n}"), "§5.1, L = Im∂ ⊕ Im∂* ⊕ H", || {
            let e = engine.as_ref().map_err(Clone::clone)?;
            each(0..=e.max_degree(Flavor::LV), |k| {
                let h = Hodge::new(e, Flavor::LV, k)?;
                let im_d = if k == 0 { 0 } else { e.differential(Flavor::LV, k - 1)?.rank() };
                let im_s = if k == e.max_degree(Flavor::LV) { 0 } else { e.codifferential(Flavor::LV, k + 1)?.rank() };
                let dim = e.l_dim(Flavor::LV, k)?;
                if im_d + im_s + h.harmonic.len() != dim {
                    return Ok(Some(format!("k = {k}: {im_d} + {im_s} + {} ≠ {dim}", h.harmonic.len())));
                }
                let bh = SparseMatrix::from_columns(e.space(Flavor::LV, k)?.dim(), &h.harmonic);
                let closed = k == e.max_degree(Flavor::LV) || e.differential(Flavor::LV, k)?.mul(&bh).is_zero();
                let coclosed = k == 0 || e.codifferential(Flavor::LV, k)?.mul(&bh).is_zero();
                Ok((!closed || !coclosed).then(|| format!("k = {k}: harmonic forms are not closed and coclosed")))
            })
        });
    }
    let e6 = Engine::standard(6);
    ctx.check("c4 generic (∂*₀)² display", "§5.1, (∂*₀)² = dτ(−(i+1)(i+2) z)(φ_{…a}^a)", || {
        let engines = [e6.clone(), Engine::adjoint(6)];
        each(engines, |e| {
            let e = e?;
            each(0..=2usize, |i| {
                let lhs = e.codiff0(Flavor::LV, i + 1).mul(&e.codiff0(Flavor::LV, i + 2));
                let c = -(((i + 1) * (i + 2)) as i64);
                let rhs = trace_then_z(&e, i + 2)?.scale(&Q::from_ratio(c, 1));
                Ok((lhs != rhs).then(|| format!("V of dim {}, i = {i}", e.rep().dim())))
            })
        })
    });
    ctx.check("c4 tractor (∂*₀)² coefficient", "App C, (∂*₀)² = −k(k+1)(t_{…i}^i, 0, 0)", || {
        let e = e6.as_ref().map_err(Clone::clone)?;
        let mut rng = rng_for(seed, 700);
        each(2..=4usize, |k| {
            let dim = e.space(Flavor::LV, k)?.dim();
            let raw: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, 6, 0, 4, 0.6)).collect();
            let f = TractorForm::from_raw(e, k, &raw)?;
            let printed = tractor::codiff0_squared_printed(&f)?.to_raw(e)?;
            let ours = e.codiff0(Flavor::LV, k - 1).apply(&e.codiff0(Flavor::LV, k).apply(&raw));
            if ours == printed {
                return Ok(None);
            }
            let kk = k as i64;
            let scaled: Vec<Poly<Q>> = printed.iter().map(|p| p.scale_ratio(kk - 1, kk + 1)).collect();
            let note = if scaled == ours { format!("composition has coefficient −k(k−1) = {}", -kk * (kk - 1)) } else { "mismatch".into() };
            Ok(Some(format!("k = {k}: printed −k(k+1) = {}; {note}", -kk * (kk + 1))))
        })
    });
}

// ---------------------------------------------------------------- 5

/// `Γ_ac^d = x_3 δ_{a0} δ_c^d`: a `csp` connection whose trace is not closed.
pub fn trace_connection(n: usize) -> Connection<Q> {
    let gam = Tensor::from_fn(n, &[Lower, Lower, Upper], 0, |i| if i[0] == 0 && i[1] == i[2] { Poly::var(3) } else { Poly::zero() });
    Connection::new(Frame::coordinate(n), gam).expect("shape")
}

fn harmonic_section(h: &Hodge, rng: &mut ChaCha8Rng, deg: u32) -> Vec<Poly<Q>> {
    let n = 6;
    let mut phi = vec![Poly::zero(); h.harmonic.first().map_or(0, |v| v.len())];
    for v in &h.harmonic {
        let p = Poly::random(rng, n, deg, 3, 0.3);
        for (o, c) in phi.iter_mut().zip(v) {
            *o = o.add(&p.scale(c));
        }
    }
    phi
}

fn c5(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    let engine = Engine::standard(n);
    let hodges: Vec<Result<Hodge>> =
        (0..n).map(|k| engine.as_ref().map_err(Clone::clone).and_then(|e| Hodge::new(e, Flavor::LV, k))).collect();
    ctx.check("c5 top-slot eigenvalues", "App C, −(k+1)(n−k) on the top slot", || {
        each(0..n, |k| {
            let h = hodges[k].as_ref().map_err(Clone::clone)?;
            let want = Q::from_ratio(-(((k + 1) * (n - k)) as i64), 1);
            let got: Vec<&Q> = h.blocks.iter().filter(|b| b.homogeneity == k as i32 + 1).map(|b| &b.eigenvalue).collect();
            Ok((got != vec![&want]).then(|| format!("k = {k}: {got:?}")))
        })
    });
    ctx.check("c5 middle-slot eigenvalues", "App C, −(k+1) on the middle slot", || {
        let mut bad = Vec::new();
        for k in 0..n / 2 {
            let h = hodges[k].as_ref().map_err(Clone::clone)?;
            let want = Q::from_ratio(-(k as i64 + 1), 1);
            let got: Vec<String> = h.blocks.iter().filter(|b| b.homogeneity == k as i32).map(|b| b.eigenvalue.to_string()).collect();
            if got != vec![want.to_string()] {
                bad.push(format!("k = {k}: {}", got.join(",")));
            }
        }
        Ok((!bad.is_empty()).then(|| format!("printed −(k+1); found {}", bad.join("; "))))
    });
    let e = match engine.as_ref() {
        Ok(e) => e.clone(),
        Err(_) => return,
    };
    let data = DerivativeData::new(&e, Geometry::new(trace_connection(n), RhoTensor::zero(n)));
    let coefficient = |steps: &[Vec<Q>], want: i64| -> Option<String> {
        let found = steps.iter().flatten().any(|l| *l == Q::from_ratio(want, 1));
        (!found).then(|| format!("steps {steps:?} do not contain {want}"))
    };
    ctx.check("c5 L0 coefficient -1/6", "App C, L₀ = (−(1/6)∇_i∇^i t, −∇_d t, t)", || {
        let data = data.as_ref().map_err(Clone::clone)?;
        let h = hodges[0].as_ref().map_err(Clone::clone)?;
        let s = splitting_operator(data, h, &harmonic_section(h, &mut rng_for(seed, 800), 2))?;
        Ok(coefficient(&s.steps, -6))
    });
    ctx.check("c5 L1 coefficient -1/10", "App C, L₁ = (−(1/10)∇_d(s_a^d + s^d_a), s, 0)", || {
        let data = data.as_ref().map_err(Clone::clone)?;
        let h = hodges[1].as_ref().map_err(Clone::clone)?;
        let s = splitting_operator(data, h, &harmonic_section(h, &mut rng_for(seed, 801), 2))?;
        Ok(coefficient(&s.steps, -10))
    });
}

// ---------------------------------------------------------------- 6

fn slot_form(e: &Engine, k: usize, s: PolyTensor<Q>) -> Result<Vec<Poly<Q>>> {
    let mut f = TractorForm::zero(e.n(), k);
    f.s = s.with_weight(-1);
    f.to_raw(e)
}

fn density(e: &Engine, t: Poly<Q>) -> Result<Vec<Poly<Q>>> {
    let mut f = TractorForm::zero(e.n(), 0);
    f.t = Tensor::from_fn(e.n(), &[], -1, |_| t.clone());
    f.to_raw(e)
}

fn c6(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    let setup = Engine::standard(n).and_then(|e| {
        let data = DerivativeData::new(&e, Geometry::flat(n))?;
        let h = (0..3).map(|k| Hodge::new(&e, Flavor::LV, k)).collect::<Result<Vec<_>>>()?;
        Ok((e, data, h))
    });
    let flat = Connection::flat(n);
    let b0 = |e: &Engine, data: &DerivativeData, h: &[Hodge], t: Poly<Q>| -> Result<Vec<Poly<Q>>> {
        bgg_operator(data, &splitting_operator(data, &h[0], &density(e, t)?)?, &h[1])
    };
    ctx.check("c6 B0 on every monomial of degree <= 4", "App C, B₀(t) = −∇_(a∇_d)t", || {
        let (e, data, h) = setup.as_ref().map_err(Clone::clone)?;
        each(monomials_up_to(n, 4), |m| {
            let t = Poly::monomial(&unpack(m, n), Q::one());
            let printed = tractor::b0_printed(&flat, &Tensor::from_fn(n, &[], -1, |_| t.clone()))?;
            let ok = b0(e, data, h, t.clone())? == slot_form(e, 1, printed)?;
            Ok((!ok).then(|| format!("t = {}", t.render())))
        })
    });
    ctx.check("c6 B1 four-term display", "App C, B₁(s_(a₁d))", || {
        let (e, data, h) = setup.as_ref().map_err(Clone::clone)?;
        each(0..20u64, |i| {
            let mut rng = rng_for(seed, 900 + i);
            let s = Tensor::from_fn(n, &[Lower, Lower], -1, |_| Poly::random(&mut rng, n, 3, 3, 0.03))
                .symmetrize_project(&[0, 1], Projection::Sym)?;
            let engine_b1 = bgg_operator(data, &splitting_operator(data, &h[1], &slot_form(e, 1, s.clone())?)?, &h[2])?;
            let ok = engine_b1 == slot_form(e, 2, tractor::b1_printed(&flat, &s)?)?;
            Ok((!ok).then(|| format!("section {i}")))
        })
    });
    ctx.check("c6 B1 B0 = 0", "App C, the BGG-like sequence is a complex", || {
        let (e, data, h) = setup.as_ref().map_err(Clone::clone)?;
        each(0..20u64, |i| {
            let t = Poly::random(&mut rng_for(seed, 1000 + i), n, 4, 3, 0.2);
            let first = b0(e, data, h, t)?;
            let second = bgg_operator(data, &splitting_operator(data, &h[1], &first)?, &h[2])?;
            Ok(tagged(format!("section {i}"), first_nonzero_poly(&second)))
        })
    });
    ctx.check("c6 (d^T)² = 0 on the flat chart", "App C, (d^T)² = 0 when R⁰ = 0", || {
        let (e, data, _) = setup.as_ref().map_err(Clone::clone)?;
        each(0..20u64, |i| {
            let k = (i % 3) as usize;
            let mut rng = rng_for(seed, 1100 + i);
            let raw: Vec<Poly<Q>> = (0..e.space(Flavor::LV, k)?.dim()).map(|_| Poly::random(&mut rng, n, 3, 3, 0.05)).collect();
            let phi = e.r0(Flavor::LV, k)?.apply(&raw);
            let dd = data.d_l(Flavor::LV, k + 1, &data.d_l(Flavor::LV, k, &phi)?)?;
            Ok(tagged(format!("section {i} (k = {k})"), first_nonzero_poly(&dd)))
        })
    });
}

// ---------------------------------------------------------------- 7

fn c7(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    let engine = Engine::standard(n);
    ctx.check("c7 (d^W)² = Alt₂(d^ω(−R̃)) with P = 0", "Prop 6.2", || {
        let e = engine.as_ref().map_err(Clone::clone)?;
        each(0..10u64, |i| {
            let mut rng = rng_for(seed, 1200 + i);
            let nb = build_nabla0(&random_torsion_free(&mut rng, n, 1))?;
            let data = DerivativeData::new(e, Geometry::new(nb.nabla0, RhoTensor::zero(n)))?;
            each(0..2usize, |deg| {
                let dim = e.space(Flavor::Full, deg)?.dim();
                let phi: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, n, 1, 3, 0.3)).collect();
                Ok(tagged(format!("input {i}, degree {deg}"), first_nonzero_poly(&curvature_residual(&data, deg, &phi)?)))
            })
        })
    });
    ctx.check("c7 printed CF formula for (d^T)²", "App C, Σ_{i<j}(−1)^{i+j+1}R⁰_{a_ia_jd}^e s_{…e}", || {
        let e = engine.as_ref().map_err(Clone::clone)?;
        let mut opposite = 0;
        let mut tried = 0;
        let out = each(0..10u64, |i| {
            let mut rng = rng_for(seed, 1300 + i);
            let conn = random_cf(&mut rng, n, 1);
            let data = DerivativeData::new(e, Geometry::new(conn.clone(), RhoTensor::zero(n)))?;
            let k = (i % 2) as usize;
            let raw: Vec<Poly<Q>> = (0..e.space(Flavor::LV, k)?.dim()).map(|_| Poly::random(&mut rng, n, 1, 3, 0.15)).collect();
            let phi = e.r0(Flavor::LV, k)?.apply(&raw);
            let dd = data.d_l(Flavor::LV, k + 1, &data.d_l(Flavor::LV, k, &phi)?)?;
            let printed = tractor::dt_squared_printed(&conn, &TractorForm::from_raw(e, k, &phi)?).to_raw(e)?;
            tried += 1;
            if dd == printed {
                return Ok(None);
            }
            if dd.iter().zip(&printed).all(|(a, b)| a.add(b).is_zero()) {
                opposite += 1;
                return Ok(None);
            }
            Ok(Some(format!("input {i}: differs from ± the printed formula")))
        })?;
        Ok(out.or_else(|| (opposite > 0).then(|| format!("(d^T)² equals minus the printed formula on {opposite} of {tried} inputs"))))
    });
}

// ---------------------------------------------------------------- 8

fn c8(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    ctx.check("c8 normal Rho zeroes the display", "ApA, (1/2)(∂*R̃)_a = 0", || {
        each(0..10u64, |i| {
            let (d, _) = random_acf(&mut rng_for(seed, 1400 + i), n, 1)?;
            let p = build_nabla0(&d)?;
            if !p.h.is_zero() || p.s.is_zero() {
                return Ok(Some(format!("input {i} is not ACF with S ≠ 0")));
            }
            let r0 = lowered_curvature(&p.nabla0);
            let rho = normal_rho(&r0, &p.h, &p.nabla0)?;
            Ok((!normality_display(&r0, &p.h, &rho, &p.nabla0)?.is_zero()).then(|| format!("input {i}")))
        })
    });
    ctx.check("c8 obstruction for H != 0 is nonzero", "ApA, −2H_ac^d − 2H_a^d_c", || {
        each(0..10u64, |i| {
            let p = build_nabla0(&random_torsion_free(&mut rng_for(seed, 1500 + i), n, 1))?;
            Ok((p.h.is_zero() || normality_obstruction(&p.h).is_zero()).then(|| format!("input {i}: obstruction vanishes")))
        })
    });
}

// ---------------------------------------------------------------- 9

fn c9(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    let engine = Engine::standard(n);
    ctx.check("c9 Ricci-type cancellation", "§5.2, Alt₂(dτ(−2JΘ)) + 2J∧dτ(Θ) + dτ(Θ)2J∧ = 0", || {
        let e = engine.as_ref().map_err(Clone::clone)?;
        each(0..20u64, |i| {
            let mut rng = rng_for(seed, 1600 + i);
            let th = random_ints(&mut rng, n, &[Lower, Lower], 0).symmetrize_project(&[0, 1], Projection::Sym)?;
            let theta = ricci_element_parallel(e, &Matrix::from_fn(n, n, |a, b| th.get(&[a, b]).clone()))?;
            each(0..3usize, |deg| Ok((!ricci_identity_residual(e, deg, &theta).is_zero()).then(|| format!("Θ {i}, degree {deg}"))))
        })
    });
}

// ---------------------------------------------------------------- 10

fn c10(ctx: &mut Ctx) {
    let n = 6usize;
    let expected = [1usize, 1, 2, 3, 2, 1, 1];
    let weights: Vec<Result<(usize, Vec<crate::bgg::HighestWeight>)>> = (0..=n)
        .map(|k| {
            let e = Engine::standard(n)?;
            let h = Hodge::new(&e, Flavor::LV, k)?;
            Ok((h.harmonic.len(), highest_weights(&e, &h)?))
        })
        .collect();
    ctx.check("c10 harmonic block counts", "App C, n = 6 cohomology diagram", || {
        let counts = weights.iter().map(|w| w.as_ref().map(|(_, hw)| hw.iter().map(|x| x.multiplicity).sum::<usize>()).map_err(Clone::clone)).collect::<Result<Vec<_>>>()?;
        Ok((counts != expected).then(|| format!("{counts:?}")))
    });
    ctx.check("c10 Weyl dimension cross-check", "Weyl dimension formula", || {
        each(weights.iter().enumerate(), |(k, w)| {
            let (dim, hw) = w.as_ref().map_err(Clone::clone)?;
            let total: u64 = hw.iter().map(|x| x.multiplicity as u64 * weyl_dimension(&x.weight)).sum();
            let labels: Vec<String> = hw.iter().map(|x| x.label_string()).collect();
            Ok((total != *dim as u64).then(|| format!("k = {k}: {labels:?} give {total}, harmonic dim {dim}")))
        })
    });
}

// ---------------------------------------------------------------- 11

fn c11(ctx: &mut Ctx) {
    let seed = ctx.seed;
    let n = 6usize;
    let setup = Engine::standard(n).and_then(|e| {
        let conn = random_cf(&mut rng_for(seed, 1700), n, 1);
        let data = DerivativeData::new(&e, Geometry::new(conn.clone(), RhoTensor::zero(n)))?;
        Ok((e, conn, data))
    });
    let random_l = |e: &Engine, k: usize, rng: &mut ChaCha8Rng, deg: u32| -> Result<Vec<Poly<Q>>> {
        let raw: Vec<Poly<Q>> = (0..e.space(Flavor::LV, k)?.dim()).map(|_| Poly::random(rng, n, deg, 3, 0.15)).collect();
        Ok(e.r0(Flavor::LV, k)?.apply(&raw))
    };
    ctx.check("c11 ∂*₀ entry-wise", "App C, ∂*₀ = (−1)^k k(s_{…i}^i, t_{…d}, 0)", || {
        let (e, _, _) = setup.as_ref().map_err(Clone::clone)?;
        let mut rng = rng_for(seed, 1701);
        each(1..=3usize, |k| {
            let dim = e.space(Flavor::LV, k)?.dim();
            let m = e.codiff0(Flavor::LV, k);
            // column by column: the transcription applied to each basis form
            each(0..dim, |j| {
                let mut raw = vec![Poly::zero(); dim];
                raw[j] = Poly::constant(Q::from_ratio(rng.gen_range(1..=3), 1));
                let ours = tractor::codiff0(&TractorForm::from_raw(e, k, &raw)?)?.to_raw(e)?;
                Ok((ours != m.apply(&raw)).then(|| format!("k = {k}, column {j}")))
            })
        })
    });
    ctx.check("c11 ∇^T entry-wise", "App C, ∇^T", || {
        let (e, conn, data) = setup.as_ref().map_err(Clone::clone)?;
        let phi = random_l(e, 0, &mut rng_for(seed, 1702), 2)?;
        let ours = tractor::nabla_t(conn, &TractorForm::from_raw(e, 0, &phi)?)?.to_raw(e)?;
        Ok((ours != data.d_l(Flavor::LV, 0, &phi)?).then(|| "sections differ".to_string()))
    });
    ctx.check("c11 d^T entry-wise", "App C, d^T", || {
        let (e, conn, data) = setup.as_ref().map_err(Clone::clone)?;
        let mut rng = rng_for(seed, 1703);
        each(0..=3usize, |k| {
            let phi = random_l(e, k, &mut rng, 2)?;
            let ours = tractor::d_t(conn, &TractorForm::from_raw(e, k, &phi)?)?.to_raw(e)?;
            Ok((ours != data.d_l(Flavor::LV, k, &phi)?).then(|| format!("k = {k}")))
        })
    });
    ctx.check("c11 ∂* d^T entry-wise", "App C, ∂*d^T", || {
        let (e, conn, data) = setup.as_ref().map_err(Clone::clone)?;
        let mut rng = rng_for(seed, 1704);
        each(0..=3usize, |k| {
            let phi = random_l(e, k, &mut rng, 2)?;
            let ours = tractor::codiff_d_printed(conn, &TractorForm::from_raw(e, k, &phi)?)?.to_raw(e)?;
            let theirs = e.codiff_l(Flavor::LV, k + 1)?.apply(&data.d_l(Flavor::LV, k, &phi)?);
            Ok((ours != theirs).then(|| format!("k = {k}")))
        })
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conflicts_are_matched_by_prefix() {
        assert!(is_known_conflict("c1 raise-lower round trip n=6"));
        assert!(!is_known_conflict("c1 J_ab J^bd = -delta n=6"));
        assert_eq!(title(5), Some("tractor eigenvalues and splitting coefficients"));
        assert!(run_criterion(12, 0).is_err());
    }

    #[test]
    fn trace_and_z_agree_with_the_composed_codifferential() {
        let e = Engine::standard(6).unwrap();
        let lhs = e.codiff0(Flavor::LV, 1).mul(&e.codiff0(Flavor::LV, 2));
        assert_eq!(lhs, trace_then_z(&e, 2).unwrap().scale(&Q::from_ratio(-2, 1)));
    }
}
