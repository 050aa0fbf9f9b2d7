//! Polynomial sections of form bundles and the twisted exterior differentials.
//!
//! A section is a vector of chart polynomials indexed like the basis of a [`super::FormSpace`].
//! Differentials are assembled from the algebraic operators of the engine and the geometry
//! `(∇⁰, P_ab, P_a)` in the splitting of a Weyl structure.

use super::{insert_sign, Engine, Flavor};
use crate::connection::{covariant_derivative, torsion_of, Connection, RhoTensor};
use crate::curvature::curvature_of;
use crate::error::{AcafError, Result};
use crate::forms::IndexSets;
use crate::frame::{Frame, PolyTensor};
use crate::linalg::SparseMatrix;
use crate::poly::Poly;
use crate::scalar::{Ring, Q};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub type PolyVec = Vec<Poly<Q>>;

/// Weyl connection data: `∇⁰` in a frame and the Rho tensor.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub conn: Connection<Q>,
    pub rho: RhoTensor<Q>,
}

impl Geometry {
    pub fn flat(n: usize) -> Self {
        Geometry { conn: Connection::flat(n), rho: RhoTensor::zero(n) }
    }

    pub fn new(conn: Connection<Q>, rho: RhoTensor<Q>) -> Self {
        Geometry { conn, rho }
    }

    pub fn n(&self) -> usize {
        self.conn.dim()
    }

    pub fn frame(&self) -> &Frame<Q> {
        self.conn.frame()
    }
}

/// Algebra coordinates (with polynomial entries) of a section of the adjoint bundle.
pub type PolyCoords = Vec<Poly<Q>>;

/// `ι(Γ_a)` in algebra coordinates, one entry per frame direction `a`.
pub fn csp_section(engine: &Engine, gamma: &PolyTensor<Q>) -> Vec<PolyCoords> {
    let n = engine.n();
    (0..n).map(|a| engine.algebra().csp_coords(|d, c| gamma.get(&[a, c, d]).clone())).collect()
}

fn rho_coords(engine: &Engine, rho: &RhoTensor<Q>) -> Vec<PolyCoords> {
    let alg = engine.algebra();
    (0..engine.n())
        .map(|a| {
            let mut v = vec![Poly::zero(); alg.dim()];
            for c in 0..engine.n() {
                v[alg.idx_zb(c)] = rho.pab.get(&[a, c]).clone();
            }
            v[alg.idx_z()] = rho.pa.get(&[a]).clone();
            v
        })
        .collect()
}

/// Bracket of algebra elements with polynomial coordinates.
pub fn poly_bracket(engine: &Engine, u: &[Poly<Q>], v: &[Poly<Q>]) -> PolyCoords {
    let alg = engine.algebra();
    let mut out = vec![Poly::zero(); alg.dim()];
    for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (k, vk) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let prod = ui.mul(vk);
            for (j, c) in alg.bracket_basis(i, k) {
                out[*j].add_assign(&prod.scale(c));
            }
        }
    }
    out
}

/// Cached per-degree matrices used by the differentials.
#[derive(Debug, Default)]
struct Cache {
    form_action: HashMap<usize, Arc<Vec<SparseMatrix<Q>>>>,
    partial: HashMap<usize, Arc<SparseMatrix<Q>>>,
    lmats: HashMap<(Flavor, usize), Arc<[SparseMatrix<Q>; 3]>>,
}

/// Everything needed to differentiate sections: engine, geometry and algebra-valued coefficients.
#[derive(Debug)]
pub struct DerivativeData {
    engine: Engine,
    geom: Geometry,
    gamma: Vec<PolyCoords>,
    rho: Vec<PolyCoords>,
    /// Algebra indices of `p` (grade `≥ 0`), in the order of the form-action cache.
    p_idx: Vec<usize>,
    cache: Mutex<Cache>,
}

impl DerivativeData {
    pub fn new(engine: &Engine, geom: Geometry) -> Result<Self> {
        if geom.n() != engine.n() {
            return Err(AcafError::Shape(format!("geometry has n = {}, engine n = {}", geom.n(), engine.n())));
        }
        let gamma = csp_section(engine, geom.conn.gamma());
        let rho = rho_coords(engine, &geom.rho);
        let alg = engine.algebra();
        let p_idx = (0..alg.dim()).filter(|&i| alg.grading(i) >= 0).collect();
        Ok(DerivativeData { engine: engine.clone(), geom, gamma, rho, p_idx, cache: Mutex::new(Cache::default()) })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    fn form_action(&self, i: usize) -> Arc<Vec<SparseMatrix<Q>>> {
        let mut c = self.cache.lock().expect("cache lock");
        c.form_action
            .entry(i)
            .or_insert_with(|| {
                let d = self.engine.algebra().dim();
                Arc::new(
                    self.p_idx
                        .iter()
                        .map(|&k| {
                            let mut e = vec![Q::zero(); d];
                            e[k] = Q::one();
                            self.engine.form_action_full(i, &e)
                        })
                        .collect(),
                )
            })
            .clone()
    }

    fn partial(&self, i: usize) -> Arc<SparseMatrix<Q>> {
        let mut c = self.cache.lock().expect("cache lock");
        c.partial.entry(i).or_insert_with(|| Arc::new(self.engine.partial_full(i))).clone()
    }

    /// `[r₀ at i, ι at i, r₀ r at i + 1]` for an `L` flavour.
    fn lmats(&self, flavor: Flavor, i: usize) -> Result<Arc<[SparseMatrix<Q>; 3]>> {
        if let Some(m) = self.cache.lock().expect("cache lock").lmats.get(&(flavor, i)) {
            return Ok(m.clone());
        }
        let e = &self.engine;
        let m = Arc::new([e.r0(flavor, i)?, e.iota(flavor, i), e.r0(flavor, i + 1)?.mul(&e.proj(flavor, i + 1))]);
        self.cache.lock().expect("cache lock").lmats.insert((flavor, i), m.clone());
        Ok(m)
    }

    /// `Σ_k c_k · (form action of basis element k)` for an element of `p`; other entries are ignored.
    pub fn act(&self, i: usize, coeffs: &[Poly<Q>], phi: &[Poly<Q>]) -> PolyVec {
        let fa = self.form_action(i);
        let mut out = vec![Poly::zero(); phi.len()];
        for (pos, &k) in self.p_idx.iter().enumerate() {
            if coeffs[k].is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(fa[pos].apply(phi)) {
                if !v.is_zero() {
                    o.add_assign(&coeffs[k].mul(&v));
                }
            }
        }
        out
    }

    /// `∇_a φ` on full `i`-forms: frame derivative plus the `p₀` action of `Γ_a`.
    pub fn nabla(&self, a: usize, i: usize, phi: &[Poly<Q>]) -> PolyVec {
        let frame = self.geom.frame();
        let mut out: PolyVec = phi.iter().map(|p| frame.deriv(a, p)).collect();
        add_into(&mut out, &self.act(i, &self.gamma[a], phi));
        out
    }

    /// `∇_a φ + P(X_a)·φ`.
    fn nabla_rho(&self, a: usize, i: usize, phi: &[Poly<Q>]) -> PolyVec {
        let mut out = self.nabla(a, i, phi);
        add_into(&mut out, &self.act(i, &self.rho[a], phi));
        out
    }

    /// `d^W` on full `i`-forms: `∂φ + Σ_a e^{X_a} ∧ (∇_a φ + P(X_a)·φ)`.
    pub fn d_full(&self, i: usize, phi: &[Poly<Q>]) -> PolyVec {
        let mut out = self.partial(i).apply(phi);
        for a in 0..self.engine.n() {
            let v = self.nabla_rho(a, i, phi);
            add_into(&mut out, &wedge_direction(&self.engine, i, 1 + a, &v));
        }
        out
    }

    /// `d^V = r₀ r d^W ι r₀` on raw `L` coordinates of degree `i`.
    pub fn d_l(&self, flavor: Flavor, i: usize, phi: &[Poly<Q>]) -> Result<PolyVec> {
        if flavor == Flavor::Full {
            return Ok(self.d_full(i, phi));
        }
        let m = self.lmats(flavor, i)?;
        let fd = if flavor == Flavor::LV2 { i + 1 } else { i };
        let full = m[1].apply(&m[0].apply(phi));
        Ok(m[2].apply(&self.d_full(fd, &full)))
    }

    /// `d^ω(s)φ = Σ_a s^{X_a}(∇_a φ + P(X_a)·φ) − s_p·φ` for an algebra-valued `s` without `x`
    /// component.
    pub fn d_omega(&self, i: usize, s: &[Poly<Q>], phi: &[Poly<Q>]) -> Result<PolyVec> {
        let alg = self.engine.algebra();
        if !s[alg.idx_x()].is_zero() {
            return Err(AcafError::Input("d^ω needs an argument without g_{−2} part".into()));
        }
        let mut out = self.act(i, s, phi);
        out.iter_mut().for_each(|p| *p = p.neg());
        for a in 0..self.engine.n() {
            let c = &s[alg.idx_xa(a)];
            if c.is_zero() {
                continue;
            }
            let v = self.nabla_rho(a, i, phi);
            for (o, x) in out.iter_mut().zip(v) {
                if !x.is_zero() {
                    o.add_assign(&c.mul(&x));
                }
            }
        }
        Ok(out)
    }

    /// The curvature `R̃_ab` of `∇⁰ + ι + P` in algebra coordinates, one entry per pair `a < b`
    /// (lexicographic, as in `IndexSets::new(n, 2)`).
    pub fn rtilde(&self) -> Result<Vec<PolyCoords>> {
        rtilde(&self.engine, &self.geom)
    }
}

fn add_into(acc: &mut [Poly<Q>], v: &[Poly<Q>]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            a.add_assign(x);
        }
    }
}

/// `e^d ∧ φ` on full `i`-forms.
pub fn wedge_direction(engine: &Engine, i: usize, d: usize, phi: &[Poly<Q>]) -> PolyVec {
    let src = engine.space_unchecked(Flavor::Full, i);
    let dst = engine.space_unchecked(Flavor::Full, i + 1);
    let wd = src.value_dim();
    let mut out = vec![Poly::zero(); dst.dim()];
    for (si, mask) in src.sets().iter() {
        if mask & (1 << d) != 0 {
            continue;
        }
        let oi = dst.sets().index(mask | (1 << d)).expect("subset");
        let s = insert_sign(mask, d);
        for g in 0..wd {
            let v = &phi[src.index(si, g)];
            if !v.is_zero() {
                out[dst.index(oi, g)].add_assign(&v.scale_ratio(s, 1));
            }
        }
    }
    out
}

/// `Alt₂`: combines full `i`-forms `ψ_ab` (one per pair `a < b`) into the `(i+2)`-form
/// `Σ_{a<b} e^{X_a} ∧ e^{X_b} ∧ ψ_ab`, with the arguments `X_a, X_b` moved into sorted position.
pub fn alt2(engine: &Engine, i: usize, psi: &[PolyVec]) -> PolyVec {
    let pairs = IndexSets::new(engine.n(), 2);
    let dst = engine.space_unchecked(Flavor::Full, i + 2);
    let mut out = vec![Poly::zero(); dst.dim()];
    for (pi, pm) in pairs.iter() {
        let ab = crate::forms::bits(pm);
        let (da, db) = (1 + ab[0], 1 + ab[1]);
        let with_b = wedge_direction(engine, i, db, &psi[pi]);
        let both = wedge_direction(engine, i + 1, da, &with_b);
        add_into(&mut out, &both);
    }
    out
}

/// `R̃_ab` for the geometry: `p₀` part from `R_abc^d`, `g_−` part from the torsion, `p₊` part from
/// the Cotton-type derivatives of `P`, plus the brackets with `P`.
pub fn rtilde(engine: &Engine, geom: &Geometry) -> Result<Vec<PolyCoords>> {
    let n = engine.n();
    let alg = engine.algebra();
    let conn = &geom.conn;
    let r = curvature_of(conn);
    let tor = torsion_of(conn);
    let dpab = covariant_derivative(conn, &geom.rho.pab)?;
    let dpa = covariant_derivative(conn, &geom.rho.pa)?;
    let rho = rho_coords(engine, &geom.rho);
    let unit = |k: usize| {
        let mut v = vec![Poly::zero(); alg.dim()];
        v[k] = Poly::one();
        v
    };
    let pairs = IndexSets::new(n, 2);
    let mut out = Vec::with_capacity(pairs.len());
    for (_, pm) in pairs.iter() {
        let ab = crate::forms::bits(pm);
        let (a, b) = (ab[0], ab[1]);
        let mut v = poly_bracket(engine, &rho[a], &unit(alg.idx_xa(b)));
        sub_into(&mut v, &poly_bracket(engine, &rho[b], &unit(alg.idx_xa(a))));
        add_into(&mut v, &poly_bracket(engine, &rho[a], &rho[b]));
        add_into(&mut v, &alg.csp_coords(|d, c| r.get(&[a, b, c, d]).clone()));
        for d in 0..n {
            v[alg.idx_xa(d)].add_assign(tor.get(&[a, b, d]));
        }
        for c in 0..n {
            let mut z = dpab.get(&[a, b, c]).sub(dpab.get(&[b, a, c]));
            for e in 0..n {
                z.add_assign(&tor.get(&[a, b, e]).mul(geom.rho.pab.get(&[e, c])));
            }
            v[alg.idx_zb(c)].add_assign(&z);
        }
        let mut z = dpa.get(&[a, b]).sub(dpa.get(&[b, a]));
        for e in 0..n {
            z.add_assign(&tor.get(&[a, b, e]).mul(geom.rho.pa.get(&[e])));
        }
        v[alg.idx_z()].add_assign(&z);
        out.push(v);
    }
    Ok(out)
}

fn sub_into(acc: &mut [Poly<Q>], v: &[Poly<Q>]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.sub(x);
        }
    }
}

/// `(d^W)² φ − Alt₂(d^ω(−R̃) φ)` on a full `i`-form.
pub fn curvature_residual(data: &DerivativeData, i: usize, phi: &[Poly<Q>]) -> Result<PolyVec> {
    let n = data.engine.n();
    if i + 2 > n + 1 {
        return Err(AcafError::Input(format!("degree {i} leaves no room for two more arguments")));
    }
    let dd = data.d_full(i + 1, &data.d_full(i, phi));
    let rt = data.rtilde()?;
    let psi = rt
        .iter()
        .map(|s| {
            let neg: PolyCoords = s.iter().map(|p| p.neg()).collect();
            data.d_omega(i, &neg, phi)
        })
        .collect::<Result<Vec<_>>>()?;
    let alt = alt2(&data.engine, i, &psi);
    Ok(dd.iter().zip(&alt).map(|(x, y)| x.sub(y)).collect())
}
