//! Curvature of chart connections and its decompositions.
//!
//! Curvature is `R_abc^d = e_aΓ_bc^d − e_bΓ_ac^d + Γ_ae^dΓ_bc^e − Γ_be^dΓ_ac^e − c_ab^eΓ_ec^d`, so
//! that `∇_a∇_b ν^d − ∇_b∇_a ν^d + T_ab^e∇_e ν^d = R_abc^d ν^c`. The lowered form
//! `R_abcd = R_abc^e J_ed` is the input to both decompositions.
//!
//! The projective split follows the printed trace formulas for `Θ, Σ, ρ_S, ρ_A, ρ_T`. The
//! remaining trace-free Bianchi part is split by isotypic projection: `W` is the part symmetric
//! in `cd` outside the `(2,1,1)` type, `Y` the pair-symmetric `cd`-antisymmetric part, `Z` the
//! rest. The ACS split is analogous with `U` and `V`.

use crate::connection::{covariant_derivative, lower_last, raise_last, Connection, Nabla0, RhoTensor};
use crate::error::{AcafError, Result};
use crate::frame::PolyTensor;
use crate::poly::Poly;
use crate::report::{Check, Report};
use crate::scalar::{Field, Ring};
use crate::tensor::{std_j, Lower, Projection, Tensor, Upper};
use std::time::Instant;

/// Normalization of the `(2,1,1)` Young projector `X ↦ alt3(X) + alt3(X)_abdc` on tensors that are
/// symmetric in the last pair: it acts as `4/3` on its image.
const YOUNG_211: (i64, i64) = (3, 4);

/// `R_abc^d` of a connection, including the non-holonomic term.
pub fn curvature_of<F: Field>(conn: &Connection<F>) -> PolyTensor<F> {
    let n = conn.dim();
    let g = conn.gamma();
    let c = conn.frame().structure();
    let dg = conn.frame().gradient(g);
    Tensor::from_fn(n, &[Lower, Lower, Lower, Upper], 0, |i| {
        let (a, b, cc, d) = (i[0], i[1], i[2], i[3]);
        let mut acc = dg.get(&[a, b, cc, d]).sub(dg.get(&[b, a, cc, d]));
        for e in 0..n {
            let t1 = g.get(&[a, e, d]).mul(g.get(&[b, cc, e]));
            let t2 = g.get(&[b, e, d]).mul(g.get(&[a, cc, e]));
            acc = acc.add(&t1.sub(&t2));
            let ce = c.get(&[a, b, e]);
            if !ce.is_zero() {
                acc = acc.sub(&ce.mul(g.get(&[e, cc, d])));
            }
        }
        acc
    })
}

/// `R_abcd = R_abc^e J_ed`.
pub fn lowered_curvature<F: Field>(conn: &Connection<F>) -> PolyTensor<F> {
    lower_last(&curvature_of(conn))
}

/// `K_abcd = ∇_a(H+S)_bcd − ∇_b(H+S)_acd + 2(H+S)_ced(H+S)_ba^e − (H+S)_aed(H+S)_bc^e + (H+S)_bed(H+S)_ac^e`
/// for `hs = (H+S)_abc` with all indices lower.
pub fn k_tensor<F: Field>(hs: &PolyTensor<F>, nabla0: &Connection<F>) -> Result<PolyTensor<F>> {
    let n = hs.dim();
    let nhs = covariant_derivative(nabla0, hs)?;
    let hsu = raise_last(hs);
    Ok(Tensor::from_fn(n, &[Lower; 4], -2, |i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let mut acc = nhs.get(&[a, b, c, d]).sub(nhs.get(&[b, a, c, d]));
        for e in 0..n {
            acc = acc.add(&hs.get(&[c, e, d]).mul(hsu.get(&[b, a, e])).scale_ratio(2, 1));
            acc = acc.sub(&hs.get(&[a, e, d]).mul(hsu.get(&[b, c, e])));
            acc = acc.add(&hs.get(&[b, e, d]).mul(hsu.get(&[a, c, e])));
        }
        acc
    }))
}

fn jv<C: Ring>(n: usize, a: usize, b: usize) -> Option<C> {
    std_j(n, a, b).map(|s| C::from_ratio(s, 1))
}

/// Rank-4 product `X_{i_p i_q} J_{i_r i_s}` with `xp = (p, q)` and `jp = (r, s)`.
fn xj<C: Ring>(x: &Tensor<C>, xp: (usize, usize), jp: (usize, usize)) -> Tensor<C> {
    let n = x.dim();
    Tensor::from_fn(n, &[Lower; 4], x.weight() - 2, |i| match std_j(n, i[jp.0], i[jp.1]) {
        Some(s) => x.get(&[i[xp.0], i[xp.1]]).scale_ratio(s, 1),
        None => C::zero(),
    })
}

fn t1<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (0, 2), (1, 3))
}
fn t2<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (1, 2), (0, 3))
}
fn t3<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (0, 3), (1, 2))
}
fn t4<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (1, 3), (0, 2))
}
fn t5<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (2, 3), (0, 1))
}
fn t6<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    xj(x, (0, 1), (2, 3))
}

/// `X_ac J_bd − X_bc J_ad + X_ad J_bc − X_bd J_ac`.
fn cross<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    t1(x).sub(&t2(x)).add(&t3(x)).sub(&t4(x))
}

/// `s J_ab J_cd` for a scalar `s`.
fn jj<C: Ring>(n: usize, s: &C) -> Tensor<C> {
    Tensor::from_fn(n, &[Lower; 4], -4, |i| match (jv::<C>(n, i[0], i[1]), jv::<C>(n, i[2], i[3])) {
        (Some(x), Some(y)) => x.mul(&y).mul(s),
        _ => C::zero(),
    })
}

/// `s J_ab`.
fn j2<C: Ring>(n: usize, s: &C) -> Tensor<C> {
    Tensor::from_fn(n, &[Lower; 2], -2, |i| jv::<C>(n, i[0], i[1]).map_or(C::zero(), |x| x.mul(s)))
}

/// Splits a rank-2 tensor into symmetric part, primitive antisymmetric part and `J`-trace
/// `t = J^{ab}X_ab/n`.
fn split2<C: Ring>(x: &Tensor<C>) -> (Tensor<C>, Tensor<C>, C) {
    let n = x.dim();
    let xt = x.permute(&[1, 0]);
    let s = x.add(&xt).scale_ratio(1, 2);
    let a = x.sub(&xt).scale_ratio(1, 2);
    let t = x.contract_j(0, 1).expect("rank 2").data()[0].scale_ratio(1, n as i64);
    let a0 = a.sub(&j2(n, &t).with_weight(x.weight()));
    (s, a0, t)
}

fn alt3<C: Ring>(x: &Tensor<C>) -> Tensor<C> {
    x.symmetrize_project(&[0, 1, 2], Projection::Antisym).expect("slots")
}

/// `alt3(Q) + alt3(Q)_abdc`.
fn young_211_raw<C: Ring>(q: &Tensor<C>) -> Tensor<C> {
    let x = alt3(q);
    x.add(&x.permute(&[0, 1, 3, 2]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    /// Torsion-free (Bianchi) curvature of a projective-class connection.
    Projective,
    /// Curvature of an ACS connection (values in `csp`).
    Acs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveComponents<C: Ring> {
    pub w: Tensor<C>,
    pub y: Tensor<C>,
    pub z: Tensor<C>,
    pub theta: Tensor<C>,
    pub sigma: Tensor<C>,
    pub rho_s: Tensor<C>,
    pub rho_a: Tensor<C>,
    pub rho_t: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcsComponents<C: Ring> {
    pub u: Tensor<C>,
    /// `V_abcd` itself; the curvature contains `V_abcd + V_abdc`.
    pub v: Tensor<C>,
    pub a: Tensor<C>,
    pub b: Tensor<C>,
    pub c: Tensor<C>,
    pub e: Tensor<C>,
    pub f: C,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurvatureComponents<C: Ring> {
    Projective(ProjectiveComponents<C>),
    Acs(AcsComponents<C>),
}

fn theta_row<C: Ring>(th: &Tensor<C>) -> Tensor<C> {
    let n = th.dim() as i64;
    t1(th).scale_ratio(-3, n - 1).add(&t2(th).scale_ratio(3, n - 1)).add(&t3(th)).sub(&t4(th)).sub(&t5(th).scale_ratio(2, 1))
}

fn sigma_row<C: Ring>(sg: &Tensor<C>) -> Tensor<C> {
    let n = sg.dim() as i64;
    t6(sg).scale_ratio(2, n + 1)
        .add(&t1(sg).scale_ratio(1, n + 1))
        .sub(&t2(sg).scale_ratio(1, n + 1))
        .add(&t3(sg))
        .sub(&t4(sg))
        .sub(&t5(sg).scale_ratio(2, 1))
}

fn rho_row<C: Ring>(rs: &Tensor<C>, ra: &Tensor<C>, rt: &C) -> Tensor<C> {
    let n = rs.dim();
    let pr = rs.add(ra).add(&j2(n, rt).with_weight(rs.weight()));
    t1(&pr).sub(&t2(&pr)).add(&t6(ra).scale_ratio(2, 1)).add(&jj(n, rt).scale_ratio(2, 1).with_weight(-2))
}

impl<C: Ring> ProjectiveComponents<C> {
    pub fn synthesize(&self) -> Tensor<C> {
        self.w
            .add(&self.y)
            .add(&self.z)
            .add(&theta_row(&self.theta))
            .add(&sigma_row(&self.sigma))
            .add(&rho_row(&self.rho_s, &self.rho_a, &self.rho_t))
    }
}

impl<C: Ring> AcsComponents<C> {
    pub fn synthesize(&self) -> Tensor<C> {
        let n = self.u.dim();
        self.u
            .add(&self.v)
            .add(&self.v.permute(&[0, 1, 3, 2]))
            .add(&t5(&self.a).scale_ratio(2, 1))
            .add(&t6(&self.b).scale_ratio(2, 1))
            .add(&jj(n, &self.f).with_weight(-2))
            .add(&cross(&self.c))
            .add(&cross(&self.e))
    }
}

impl<C: Ring> CurvatureComponents<C> {
    pub fn synthesize(&self) -> Tensor<C> {
        match self {
            CurvatureComponents::Projective(p) => p.synthesize(),
            CurvatureComponents::Acs(a) => a.synthesize(),
        }
    }
}

/// True if `R_abcd` is antisymmetric in `ab` and satisfies `R_[abc]d = 0`.
pub fn is_bianchi<C: Ring>(r: &Tensor<C>, tol: f64) -> bool {
    r.add(&r.permute(&[1, 0, 2, 3])).is_negligible(tol) && alt3(r).is_negligible(tol)
}

/// True if `R_abcd` is antisymmetric in `ab` and `csp`-valued in `cd` (symmetric plus a `J_cd` multiple).
pub fn is_csp_valued<C: Ring>(r: &Tensor<C>, tol: f64) -> bool {
    let n = r.dim();
    if !r.add(&r.permute(&[1, 0, 2, 3])).is_negligible(tol) {
        return false;
    }
    let skew = r.sub(&r.permute(&[0, 1, 3, 2])).scale_ratio(1, 2);
    let tr = skew.contract_j(2, 3).expect("rank 4").scale_ratio(1, n as i64);
    let pure = Tensor::from_fn(n, &[Lower; 4], r.weight(), |i| match std_j(n, i[2], i[3]) {
        Some(s) => tr.get(&[i[0], i[1]]).scale_ratio(s, 1),
        None => C::zero(),
    });
    skew.sub(&pure).is_negligible(tol)
}

pub fn decompose_curvature<C: Ring>(r: &Tensor<C>, kind: DecompositionKind, tol: f64) -> Result<CurvatureComponents<C>> {
    let n = r.dim();
    if n < 6 || n % 2 != 0 {
        return Err(AcafError::InvalidDimension { n, reason: "curvature decompositions need even n >= 6".into() });
    }
    if r.variance() != [Lower; 4] {
        return Err(AcafError::Shape("expected R_abcd with all indices lower".into()));
    }
    let comps = match kind {
        DecompositionKind::Projective => {
            if !is_bianchi(r, tol) {
                return Err(AcafError::Input("projective decomposition needs a Bianchi-type tensor".into()));
            }
            CurvatureComponents::Projective(decompose_projective(r))
        }
        DecompositionKind::Acs => {
            if !is_csp_valued(r, tol) {
                return Err(AcafError::Input("ACS decomposition needs a csp-valued curvature".into()));
            }
            CurvatureComponents::Acs(decompose_acs(r))
        }
    };
    if !comps.synthesize().sub(r).is_negligible(tol) {
        return Err(AcafError::Structural("curvature decomposition does not reconstruct its input".into()));
    }
    Ok(comps)
}

fn decompose_projective<C: Ring>(k: &Tensor<C>) -> ProjectiveComponents<C> {
    let ni = k.dim() as i64;
    let tr1 = k.contract_j(0, 2).expect("rank 4");
    let tr4 = k.contract_j(0, 3).expect("rank 4");
    let (s4, a4, j4) = split2(&tr4);
    let (s1, a1, _) = split2(&tr1);
    let rho_s = s4.scale_ratio(-1, ni - 1).with_weight(0);
    let rho_a = a4.scale_ratio(-1, ni + 1).with_weight(0);
    let rho_t = j4.scale_ratio(-1, ni + 1);
    // Θ(3/(n−1) − 1 − n) = s1 + ρ_S,  Σ(1/(n+1) − n − 1) = a1 − ρ_A
    let theta = s1.with_weight(0).add(&rho_s).scale_ratio(ni - 1, 3 - (ni - 1) * (ni + 1));
    let sigma = a1.with_weight(0).sub(&rho_a).scale_ratio(ni + 1, 1 - (ni + 1) * (ni + 1));
    let q = k.sub(&theta_row(&theta)).sub(&sigma_row(&sigma)).sub(&rho_row(&rho_s, &rho_a, &rho_t));
    let qp = q.permute(&[0, 1, 3, 2]);
    let qs = q.add(&qp).scale_ratio(1, 2);
    let qa = q.sub(&qp).scale_ratio(1, 2);
    let qa_swap = qa.permute(&[2, 3, 0, 1]);
    let y = qa.add(&qa_swap).scale_ratio(1, 2);
    let za = qa.sub(&qa_swap).scale_ratio(1, 2);
    let zs = young_211_raw(&qs).scale_ratio(YOUNG_211.0, YOUNG_211.1);
    let w = qs.sub(&zs);
    ProjectiveComponents { w, y, z: za.add(&zs), theta, sigma, rho_s, rho_a, rho_t }
}

fn decompose_acs<C: Ring>(r: &Tensor<C>) -> AcsComponents<C> {
    let n = r.dim();
    let ni = n as i64;
    let tr3 = r.contract_j(2, 3).expect("rank 4");
    let (_, a3, j3) = split2(&tr3);
    let f = j3.scale_ratio(1, ni);
    let b = a3.scale_ratio(1, 2 * ni).with_weight(0);
    let s = r.add(&r.permute(&[0, 1, 3, 2])).scale_ratio(1, 2);
    let tr1 = s.contract_j(0, 2).expect("rank 4");
    let tr2 = s.contract_j(0, 1).expect("rank 4");
    let x = tr1.add(&tr1.permute(&[1, 0])).scale_ratio(1, 2).with_weight(0);
    let y = tr2.add(&tr2.permute(&[1, 0])).scale_ratio(1, 2).with_weight(0);
    let c = y.sub(&x.scale_ratio(ni, 1)).scale_ratio(1, ni * ni - 4);
    let a = x.add(&c.scale_ratio(ni, 1)).scale_ratio(1, 2);
    let e = tr1.sub(&tr1.permute(&[1, 0])).scale_ratio(-1, 2 * ni).with_weight(0);
    let q = s.sub(&t5(&a).scale_ratio(2, 1)).sub(&cross(&c)).sub(&cross(&e));
    let vs = young_211_raw(&q).scale_ratio(YOUNG_211.0, YOUNG_211.1);
    let u = q.sub(&vs);
    let v = alt3(&vs).scale_ratio(YOUNG_211.0, YOUNG_211.1);
    AcsComponents { u, v, a, b, c, e, f }
}

/// `Θ_ac J_bd − Θ_bc J_ad + Θ_ad J_bc − Θ_bd J_ac − 2Θ_cd J_ab`.
pub fn ricci_type_r<C: Ring>(theta: &Tensor<C>) -> Result<Tensor<C>> {
    if theta.rank() != 2 || !theta.sub(&theta.permute(&[1, 0])).is_zero() {
        return Err(AcafError::Input("Θ must be a symmetric rank-2 tensor".into()));
    }
    Ok(cross(theta).sub(&t5(theta).scale_ratio(2, 1)))
}

/// The K contractions entering the solved trace formulas, each as a matrix indexed `[a][b]`.
struct KTraces<C: Ring> {
    /// `K_e^e_ab`
    ee_ab: Tensor<C>,
    /// `K_eb^e_a`
    eb_e_a: Tensor<C>,
    /// `K_eba^e`
    eba_e: Tensor<C>,
}

impl<C: Ring> KTraces<C> {
    fn new(k: &Tensor<C>) -> Self {
        KTraces {
            ee_ab: k.contract_j(0, 1).expect("rank 4").with_weight(0),
            eb_e_a: k.contract_j(0, 2).expect("rank 4").permute(&[1, 0]).with_weight(0),
            eba_e: k.contract_j(0, 3).expect("rank 4").permute(&[1, 0]).with_weight(0),
        }
    }
    fn ee_ba(&self) -> Tensor<C> {
        self.ee_ab.permute(&[1, 0])
    }
    fn ea_e_b(&self) -> Tensor<C> {
        self.eb_e_a.permute(&[1, 0])
    }
    fn eab_e(&self) -> Tensor<C> {
        self.eba_e.permute(&[1, 0])
    }
}

/// The seven solved formulas of the Appendix B theorem, as predicted values.
pub struct SolvedComponents<C: Ring> {
    pub a: Tensor<C>,
    pub b: Tensor<C>,
    pub c: Tensor<C>,
    pub e: Tensor<C>,
    pub sigma: Tensor<C>,
    pub rho_a: Tensor<C>,
    pub rho_s: Tensor<C>,
}

pub fn solved_components<C: Ring>(k: &Tensor<C>, theta: &Tensor<C>) -> SolvedComponents<C> {
    let ni = k.dim() as i64;
    let t = KTraces::new(k);
    let (ee_ab, ee_ba) = (t.ee_ab.clone(), t.ee_ba());
    let (eb_e_a, ea_e_b) = (t.eb_e_a.clone(), t.ea_e_b());
    let (eba_e, eab_e) = (t.eba_e.clone(), t.eab_e());
    let th = theta.clone().with_weight(0);
    let a = th.neg().add(
        &ee_ba.scale_ratio(ni, 1)
            .add(&ee_ab.scale_ratio(ni, 1))
            .sub(&eb_e_a.scale_ratio(2, 1))
            .sub(&ea_e_b.scale_ratio(2, 1))
            .sub(&eba_e.scale_ratio(2, 1))
            .sub(&eab_e.scale_ratio(2, 1))
            .scale_ratio(1, 4 * (ni - 2) * (ni + 2)),
    );
    let b = eab_e
        .sub(&eba_e)
        .scale_ratio(2, 1)
        .add(&ee_ab)
        .sub(&ee_ba)
        .add(&eb_e_a.scale_ratio(2, 1))
        .sub(&ea_e_b.scale_ratio(2, 1))
        .scale_ratio(1, 4 * (ni - 4));
    let c = th.add(
        &eb_e_a.add(&ea_e_b)
            .scale_ratio(-(ni + 1), 1)
            .add(&ee_ba)
            .add(&ee_ab)
            .add(&eba_e)
            .add(&eab_e)
            .scale_ratio(1, 2 * (ni - 2) * (ni + 2)),
    );
    let e = ee_ab
        .sub(&ee_ba)
        .scale_ratio(ni - 2, 1)
        .add(&eb_e_a.sub(&ea_e_b).scale_ratio(2 * (ni - 2), 1))
        .sub(&eba_e.scale_ratio(4, 1))
        .add(&eab_e.scale_ratio(4, 1))
        .scale_ratio(1, 4 * (ni - 4) * ni);
    let sigma = ee_ab
        .sub(&ee_ba)
        .scale_ratio(ni * ni - 2 * ni - 4, 1)
        .add(&eb_e_a.sub(&ea_e_b).scale_ratio(2 * ni, 1))
        .add(&eab_e.sub(&eba_e).scale_ratio(2 * ni, 1))
        .scale_ratio(1, 4 * (ni - 4) * ni * (ni + 2));
    let rho_a = ee_ab
        .sub(&ee_ba)
        .add(&eb_e_a.scale_ratio(2, 1))
        .sub(&ea_e_b.scale_ratio(2, 1))
        .sub(&eba_e.scale_ratio(2, 1))
        .add(&eab_e.scale_ratio(2, 1))
        .scale_ratio(ni, 4 * (ni - 4) * (ni + 1));
    let rho_s = th
        .scale_ratio(ni + 2, ni - 1)
        .add(&eba_e.add(&eab_e).sub(&eb_e_a).sub(&ea_e_b).scale_ratio(1, 2 * (ni - 2)));
    SolvedComponents { a, b, c, e, sigma, rho_a, rho_s }
}

/// `∇_e X_ac^e` for a covariant rank-3 `X` (contracting the derivative with the raised last slot).
fn divergence_last<F: Field>(x: &PolyTensor<F>, conn: &Connection<F>) -> Result<PolyTensor<F>> {
    Ok(covariant_derivative(conn, x)?.contract_j(0, 3)?)
}

/// `X_ce^f X_af^e` indexed `[a][c]` for a covariant rank-3 `X`.
fn quadratic_trace<F: Field>(x: &PolyTensor<F>) -> PolyTensor<F> {
    let n = x.dim();
    let xu = raise_last(x);
    Tensor::from_fn(n, &[Lower, Lower], 0, |i| {
        let (a, c) = (i[0], i[1]);
        let mut acc = Poly::zero();
        for e in 0..n {
            for f in 0..n {
                let p = xu.get(&[c, e, f]);
                if !p.is_zero() {
                    acc = acc.add(&p.mul(xu.get(&[a, f, e])));
                }
            }
        }
        acc
    })
}

/// Everything derived from a `∇⁰` pipeline output that the Appendix B checks need.
pub struct CurvatureData<F: Field> {
    pub kappa0: PolyTensor<F>,
    pub r0: PolyTensor<F>,
    pub k: PolyTensor<F>,
    pub projective: ProjectiveComponents<Poly<F>>,
    pub acs: AcsComponents<Poly<F>>,
}

pub fn curvature_data<F: Field>(p: &Nabla0<F>) -> Result<CurvatureData<F>> {
    let tol = crate::linalg::FLOAT_TOL;
    let kappa0 = lowered_curvature(&p.d0);
    let r0 = lowered_curvature(&p.nabla0);
    let k = k_tensor(&p.h.add(&p.s), &p.nabla0)?;
    let projective = match decompose_curvature(&kappa0, DecompositionKind::Projective, tol)? {
        CurvatureComponents::Projective(c) => c,
        _ => unreachable!(),
    };
    let acs = match decompose_curvature(&r0, DecompositionKind::Acs, tol)? {
        CurvatureComponents::Acs(c) => c,
        _ => unreachable!(),
    };
    Ok(CurvatureData { kappa0, r0, k, projective, acs })
}

/// Checks the Appendix B theorem on a pipeline output: `R⁰ = κ⁰ + K`, `F = ρ_T = 0`, the seven
/// solved formulas and both trace identities.
pub fn verify_escur<F: Field>(p: &Nabla0<F>) -> Report {
    let tol = crate::linalg::FLOAT_TOL;
    let mut rep = Report::new("curvature theorem");
    let start = Instant::now();
    let data = match curvature_data(p) {
        Ok(d) => d,
        Err(e) => {
            rep.push(Check::new("curvature decompositions", "App B", false, e.to_string()));
            return rep;
        }
    };
    let n = p.nabla0.dim() as i64;
    let anchor = "App B theorem";
    rep.push(Check::zero_tensor("R0 = kappa0 + K", "App B, (R⁰)_abcd = (κ⁰)_abcd + K_abcd", &data.r0.sub(&data.kappa0).sub(&data.k), tol).timed(start));
    rep.push(Check::zero_tensor("kappa0 first Bianchi", "App B, (κ⁰)_[abc]^d = 0", &alt3(&data.kappa0), tol));
    let scal = |name: &str, x: &Poly<F>| Check::zero_tensor(name, anchor, &Tensor::from_data(1, &[], 0, vec![x.clone()]).expect("scalar"), tol);
    rep.push(scal("F = 0", &data.acs.f));
    rep.push(scal("rhoT = 0", &data.projective.rho_t));
    let solved = solved_components(&data.k, &data.projective.theta);
    let pairs = [
        ("solved A", &data.acs.a, &solved.a),
        ("solved B", &data.acs.b, &solved.b),
        ("solved C", &data.acs.c, &solved.c),
        ("solved E", &data.acs.e, &solved.e),
        ("solved Sigma", &data.projective.sigma, &solved.sigma),
        ("solved rhoA", &data.projective.rho_a, &solved.rho_a),
        ("solved rhoS", &data.projective.rho_s, &solved.rho_s),
    ];
    for (name, got, want) in pairs {
        rep.push(Check::zero_tensor(name, anchor, &got.sub(want), tol));
    }
    let hs = p.h.add(&p.s);
    let trace1 = data.r0.contract_j(1, 3).expect("rank 4").with_weight(0);
    let rhs1 = data
        .projective
        .rho_s
        .scale_ratio(n - 1, 1)
        .add(&data.projective.rho_a.scale_ratio(n + 1, 1))
        .sub(&divergence_last(&hs, &p.nabla0).expect("dims").with_weight(0))
        .sub(&quadratic_trace(&hs));
    rep.push(Check::zero_tensor("trace (R0)_aic^i", "App B, (R⁰)_aic^i = (n−1)ρS + (n+1)ρA − ∇⁰_e(H+S)_ac^e − (H+S)(H+S)", &trace1.sub(&rhs1), tol));
    let trace2 = data.r0.contract_j(2, 3).expect("rank 4").with_weight(0);
    rep.push(Check::zero_tensor("trace (R0)_abi^i", "App B, (R⁰)_abi^i = 2(n+1)(ρA)_ab", &trace2.sub(&data.projective.rho_a.scale_ratio(2 * (n + 1), 1)), tol));
    rep
}

/// `−2H_ac^d − 2H_a^d_c`, the `P`-independent entry of the normality display; indexed `[a][c][d]`.
pub fn normality_obstruction<F: Field>(h: &PolyTensor<F>) -> PolyTensor<F> {
    raise_last(h).add(&raise_last(&h.permute(&[0, 2, 1]))).scale_ratio(-2, 1).with_weight(0)
}

/// The entries of the printed `(1/2)(∂*R̃^P)_a` display.
#[derive(Clone, Debug)]
pub struct NormalityDisplay<F: Field> {
    /// `P_ca − (n+1)P_ac + (R⁰)_aic^i`, indexed `[a][c]`.
    pub top_middle: PolyTensor<F>,
    /// `2(1−n)P_a − 2∇⁰_i P_a^i`.
    pub top_right: PolyTensor<F>,
    /// `−2H_ac^d − 2H_a^d_c`.
    pub middle_middle: PolyTensor<F>,
    /// `P^d_a − (n+1)P_a^d + (R⁰)_ai^{di}`, indexed `[a][d]`.
    pub middle_right: PolyTensor<F>,
}

impl<F: Field> NormalityDisplay<F> {
    pub fn is_zero(&self) -> bool {
        self.is_negligible(0.0)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        [&self.top_middle, &self.top_right, &self.middle_middle, &self.middle_right].iter().all(|t| t.is_negligible(tol))
    }
}

fn p_divergence<F: Field>(pab: &PolyTensor<F>, nabla0: &Connection<F>) -> Result<PolyTensor<F>> {
    // ∇⁰_i P_a^i with P_a^i = J^{ij} P_aj
    let pu = raise_last(pab);
    covariant_derivative(nabla0, &pu)?.contract_trace(2, 0)
}

pub fn normality_display<F: Field>(r0: &PolyTensor<F>, h: &PolyTensor<F>, p: &RhoTensor<F>, nabla0: &Connection<F>) -> Result<NormalityDisplay<F>> {
    let n = r0.dim() as i64;
    let ric = r0.contract_j(1, 3)?.with_weight(0);
    let pab = p.pab.clone().with_weight(0);
    let top_middle = pab.permute(&[1, 0]).sub(&pab.scale_ratio(n + 1, 1)).add(&ric);
    let top_right = p.pa.scale_ratio(2 * (1 - n), 1).sub(&p_divergence(&pab, nabla0)?.with_weight(2).scale_ratio(2, 1));
    let middle_right = raise_last(&top_middle);
    Ok(NormalityDisplay { top_middle, top_right, middle_middle: normality_obstruction(h), middle_right })
}

/// The unique Rho with `∂*R̃ = 0`, which exists iff `H = 0`:
/// `P_ac = ((n+1)/(n(n+2)))(R⁰)_aic^i + (1/(n(n+2)))(R⁰)_cia^i`, `P_a = (1/(1−n))∇⁰_i P_a^i`.
pub fn normal_rho<F: Field>(r0: &PolyTensor<F>, h: &PolyTensor<F>, nabla0: &Connection<F>) -> Result<RhoTensor<F>> {
    let n = r0.dim() as i64;
    if n < 6 {
        return Err(AcafError::InvalidDimension { n: n as usize, reason: "normal Rho needs n >= 6".into() });
    }
    if !h.is_negligible(crate::linalg::FLOAT_TOL) {
        let ob = normality_obstruction(h);
        return Err(AcafError::Input(format!(
            "no normal Rho: H != 0 (obstruction entry {})",
            Check::zero_tensor("obstruction", "ApA", &ob, crate::linalg::FLOAT_TOL).residual
        )));
    }
    let ric = r0.contract_j(1, 3)?.with_weight(0);
    let den = n * (n + 2);
    let pab = ric.scale_ratio(n + 1, den).add(&ric.permute(&[1, 0]).scale_ratio(1, den));
    let pa = p_divergence(&pab, nabla0)?.scale_ratio(1, 1 - n).with_weight(2);
    Ok(RhoTensor { pab, pa })
}

/// Second form of the normal `P_ac`:
/// `((n−1)/n)ρS + ((n+1)/(n+2))ρA − (1/(n+2))∇⁰_e S_ac^e − (1/n) S_ce^f S_af^e`.
pub fn normal_rho_via_components<F: Field>(p: &Nabla0<F>, proj: &ProjectiveComponents<Poly<F>>) -> Result<PolyTensor<F>> {
    let n = p.nabla0.dim() as i64;
    Ok(proj
        .rho_s
        .scale_ratio(n - 1, n)
        .add(&proj.rho_a.scale_ratio(n + 1, n + 2))
        .sub(&divergence_last(&p.s, &p.nabla0)?.with_weight(0).scale_ratio(1, n + 2))
        .sub(&quadratic_trace(&p.s).scale_ratio(1, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::build_nabla0;
    use crate::generate::{random_acf, random_cf, random_torsion_free, rng_from_seed};
    use crate::scalar::{qi, Q};

    #[test]
    fn flat_has_no_curvature() {
        assert!(curvature_of(&Connection::<Q>::flat(6)).is_zero());
    }

    #[test]
    fn theorem_on_random_input() {
        let mut rng = rng_from_seed(11);
        let d = random_torsion_free(&mut rng, 6, 2);
        let p = build_nabla0(&d).unwrap();
        let rep = verify_escur(&p);
        for c in &rep.checks {
            assert!(c.passed(), "{} failed: {}", c.name, c.residual);
        }
    }

    #[test]
    fn theorem_with_structure_torsion() {
        let mut rng = rng_from_seed(4);
        let (d, _) = random_acf(&mut rng, 6, 1).unwrap();
        let p = build_nabla0(&d).unwrap();
        assert!(!p.s.is_zero());
        let rep = verify_escur(&p);
        for c in &rep.checks {
            assert!(c.passed(), "{} failed: {}", c.name, c.residual);
        }
    }

    #[test]
    fn ricci_type_components() {
        let th = Tensor::from_fn(6, &[Lower, Lower], 0, |i| qi(((i[0] + 1) * (i[1] + 1)) as i64 % 5 - 2));
        let r = ricci_type_r(&th).unwrap();
        match decompose_curvature(&r, DecompositionKind::Acs, 0.0).unwrap() {
            CurvatureComponents::Acs(c) => {
                assert!(c.u.is_zero() && c.v.is_zero() && c.b.is_zero() && c.e.is_zero() && c.f.is_zero());
                assert_eq!(c.a, th.neg());
                assert_eq!(c.c, th);
            }
            _ => unreachable!(),
        }
        match decompose_curvature(&r, DecompositionKind::Projective, 0.0).unwrap() {
            CurvatureComponents::Projective(c) => assert!(c.w.is_zero()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn normal_rho_zeroes_display() {
        let mut rng = rng_from_seed(8);
        let (d, _) = random_acf(&mut rng, 6, 1).unwrap();
        let p = build_nabla0(&d).unwrap();
        let r0 = lowered_curvature(&p.nabla0);
        let rho = normal_rho(&r0, &p.h, &p.nabla0).unwrap();
        assert!(normality_display(&r0, &p.h, &rho, &p.nabla0).unwrap().is_zero());
        let data = curvature_data(&p).unwrap();
        assert_eq!(normal_rho_via_components(&p, &data.projective).unwrap(), rho.pab);
    }

    #[test]
    fn cf_curvature_is_csp_valued() {
        let mut rng = rng_from_seed(2);
        let c = random_cf(&mut rng, 6, 1);
        let r = lowered_curvature(&c);
        assert!(!r.is_zero());
        assert!(is_csp_valued(&r, 0.0) && is_bianchi(&r, 0.0));
    }
}
