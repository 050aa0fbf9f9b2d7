//! Linear connections on a polynomial chart, the decomposition of `D_a J_bc`, the family of ACS
//! connections sharing geodesics with a projective class, and the distinguished connection `∇⁰`.
//!
//! Coefficients are stored in the frame: `∇_a ν^d = e_a ν^d + Γ_ab^d ν^b`.

use crate::error::{AcafError, Result};
use crate::frame::{Frame, PolyTensor};
use crate::poly::Poly;
use crate::scalar::{Field, Ring};
use crate::tensor::{std_j, Lower, Projection, Tensor, Upper, Variance};

const GAMMA_VAR: [Variance; 3] = [Lower, Lower, Upper];

#[derive(Clone, Debug, PartialEq)]
pub struct Connection<F: Field> {
    frame: Frame<F>,
    gamma: PolyTensor<F>,
}

impl<F: Field> Connection<F> {
    pub fn new(frame: Frame<F>, gamma: PolyTensor<F>) -> Result<Self> {
        if gamma.variance() != GAMMA_VAR || gamma.dim() != frame.dim() {
            return Err(AcafError::Shape("connection coefficients must be (lower, lower, upper) over the frame".into()));
        }
        Ok(Connection { frame, gamma: gamma.with_weight(0) })
    }

    /// The flat connection of the coordinate frame.
    pub fn flat(n: usize) -> Self {
        Connection { frame: Frame::coordinate(n), gamma: Tensor::zeros(n, &GAMMA_VAR, 0) }
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &Frame<F> {
        &self.frame
    }

    pub fn gamma(&self) -> &PolyTensor<F> {
        &self.gamma
    }

    /// Adds a difference tensor `Q_ab^d`.
    pub fn shifted(&self, diff: &PolyTensor<F>) -> Self {
        Connection { frame: self.frame.clone(), gamma: self.gamma.add(&diff.clone().with_weight(0)) }
    }

    /// `Γ_ai^i`.
    pub fn trace(&self) -> PolyTensor<F> {
        self.gamma.contract_trace(2, 1).expect("connection variance")
    }

    /// Exact in `Q`; up to [`crate::linalg::FLOAT_TOL`] in floating point.
    pub fn is_torsion_free(&self) -> bool {
        torsion_of(self).is_negligible(crate::linalg::FLOAT_TOL)
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Connection<G> {
        Connection { frame: self.frame.map_field(f), gamma: self.gamma.map(|p| p.map_field(f)) }
    }
}

/// `∇_a t`: frame derivative, the `Γ`-action on every slot and the density term `−(w/n)Γ_ai^i t`.
/// The new slot is the first one.
pub fn covariant_derivative<F: Field>(conn: &Connection<F>, t: &PolyTensor<F>) -> Result<PolyTensor<F>> {
    let n = conn.dim();
    if t.dim() != n {
        return Err(AcafError::Shape("dimension mismatch".into()));
    }
    let g = &conn.gamma;
    let tr = conn.trace();
    let w = t.weight();
    let var = t.variance().to_vec();
    let mut out = conn.frame.gradient(t);
    let mut src = vec![0; var.len()];
    for idx in out.indices().collect::<Vec<_>>() {
        let a = idx[0];
        let rest = &idx[1..];
        let mut acc = out.get(&idx).clone();
        for (s, v) in var.iter().enumerate() {
            src.copy_from_slice(rest);
            for e in 0..n {
                src[s] = e;
                let te = t.get(&src);
                if te.is_zero() {
                    continue;
                }
                let coef = match v {
                    Upper => g.get(&[a, e, rest[s]]).clone(),
                    Lower => g.get(&[a, rest[s], e]).neg(),
                };
                if !coef.is_zero() {
                    acc = acc.add(&coef.mul(te));
                }
            }
        }
        if w != 0 {
            let d = tr.get(&[a]);
            if !d.is_zero() {
                acc = acc.sub(&d.mul(t.get(rest)).scale_ratio(w as i64, n as i64));
            }
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

/// Torsion `T_ab^d = Γ_ab^d − Γ_ba^d − c_ab^d`.
pub fn torsion_of<F: Field>(conn: &Connection<F>) -> PolyTensor<F> {
    let g = &conn.gamma;
    g.sub(&g.permute(&[1, 0, 2])).sub(conn.frame.structure())
}

/// The constant form `J_ab` (weight −2) as a polynomial field.
pub fn j_field<F: Field>(n: usize) -> PolyTensor<F> {
    Tensor::from_fn(n, &[Lower, Lower], -2, |i| std_j(n, i[0], i[1]).map_or(Poly::zero(), |s| Poly::from_ratio(s, 1)))
}

/// `J^{ab}` (weight +2).
pub fn j_upper_field<F: Field>(n: usize) -> PolyTensor<F> {
    Tensor::from_fn(n, &[Upper, Upper], 2, |i| std_j(n, i[0], i[1]).map_or(Poly::zero(), |s| Poly::from_ratio(s, 1)))
}

/// `D_a J_bc`.
pub fn dj<F: Field>(conn: &Connection<F>) -> PolyTensor<F> {
    covariant_derivative(conn, &j_field(conn.dim())).expect("dimension")
}

/// Components of `D_a J_bc = 2α_a J_bc + J_ab β_c − J_ac β_b − H_bca + 2S_bca`.
#[derive(Clone, Debug, PartialEq)]
pub struct DjDecomposition<F: Field> {
    pub alpha: PolyTensor<F>,
    pub beta: PolyTensor<F>,
    pub h: PolyTensor<F>,
    pub s: PolyTensor<F>,
}

/// `J_ab x_c` style outer product `J_{ij} v_k` placed at positions `(p, q)` for `J` and `r` for `v`.
fn j_times<F: Field>(n: usize, v: &PolyTensor<F>, jpos: (usize, usize), vpos: usize, w: i32) -> PolyTensor<F> {
    Tensor::from_fn(n, &[Lower, Lower, Lower], w, |i| match std_j(n, i[jpos.0], i[jpos.1]) {
        Some(s) => v.get(&[i[vpos]]).scale_ratio(s, 1),
        None => Poly::zero(),
    })
}

/// Extracts `α, β, H, S` from a tensor with the symmetries of `D_a J_bc`.
///
/// The traces `t1_a = J^{bc}X_abc` and `t2_c = J^{ab}X_abc` satisfy `t1 = 2nα − 2β` and
/// `t2 = −2α + (n−1)β`; the rest is split by total antisymmetrization.
pub fn decompose_dj<F: Field>(x: &PolyTensor<F>) -> Result<DjDecomposition<F>> {
    let n = x.dim();
    if n % 2 != 0 || x.variance() != [Lower, Lower, Lower] {
        return Err(AcafError::Shape("expected a rank-3 covariant tensor in even dimension".into()));
    }
    let t1 = x.contract_j(1, 2)?;
    let t2 = x.contract_j(0, 1)?;
    let (ni, det) = (n as i64, 2 * (n as i64) * (n as i64 - 1) - 4);
    let alpha = t1.scale_ratio(ni - 1, det).add(&t2.scale_ratio(2, det)).with_weight(0);
    let beta = t1.scale_ratio(2, det).add(&t2.scale_ratio(2 * ni, det)).with_weight(0);
    let r = x
        .sub(&j_times(n, &alpha, (1, 2), 0, -2).scale_ratio(2, 1))
        .sub(&j_times(n, &beta, (0, 1), 2, -2))
        .add(&j_times(n, &beta, (0, 2), 1, -2));
    let rt = r.permute(&[1, 2, 0]);
    let s = rt.symmetrize_project(&[0, 1, 2], Projection::Antisym)?.scale_ratio(1, 2);
    let h = s.scale_ratio(2, 1).sub(&rt);
    let d = DjDecomposition { alpha, beta, h, s };
    if !d.reconstruct().sub(x).is_negligible(crate::linalg::FLOAT_TOL) {
        return Err(AcafError::Structural("DJ decomposition does not reconstruct its input".into()));
    }
    Ok(d)
}

impl<F: Field> DjDecomposition<F> {
    pub fn reconstruct(&self) -> PolyTensor<F> {
        let n = self.h.dim();
        j_times(n, &self.alpha, (1, 2), 0, -2)
            .scale_ratio(2, 1)
            .add(&j_times(n, &self.beta, (0, 1), 2, -2))
            .sub(&j_times(n, &self.beta, (0, 2), 1, -2))
            .sub(&self.h.permute(&[2, 0, 1]))
            .add(&self.s.permute(&[2, 0, 1]).scale_ratio(2, 1))
    }

    /// The four symmetry and trace conditions on `H` and `S`, by name.
    pub fn symmetry_checks(&self) -> Vec<(&'static str, bool)> {
        let s_sym = self.s.add(&self.s.permute(&[0, 2, 1])).is_zero();
        let s_tr = self.s.contract_j(0, 2).map(|t| t.is_zero()).unwrap_or(false);
        let h_alt = self.h.symmetrize_project(&[0, 1, 2], Projection::Antisym).map(|t| t.is_zero()).unwrap_or(false);
        let h_tr = self.h.contract_j(0, 2).map(|t| t.is_zero()).unwrap_or(false);
        vec![("S_b(ca) = 0", s_sym), ("S_bc^b = 0", s_tr), ("H_[bca] = 0", h_alt), ("H_bc^b = 0", h_tr)]
    }
}

/// `v^d = J^{db} v_b` for a one-form field.
pub fn raise_one_form<F: Field>(v: &PolyTensor<F>) -> PolyTensor<F> {
    v.adjust_index(0, crate::tensor::IndexMove::Raise).expect("one-form")
}

/// Raises the last slot of a covariant rank-3 field.
pub fn raise_last<F: Field>(t: &PolyTensor<F>) -> PolyTensor<F> {
    t.adjust_index(t.rank() - 1, crate::tensor::IndexMove::Raise).expect("lower last slot")
}

/// Lowers the last slot (`ξ_c = ξ^d J_dc`).
pub fn lower_last<F: Field>(t: &PolyTensor<F>) -> PolyTensor<F> {
    t.adjust_index(t.rank() - 1, crate::tensor::IndexMove::Lower).expect("upper last slot")
}

/// Difference tensor `p u_a δ_b^d + q u_b δ_a^d + r J_ab u^d`.
pub fn one_form_difference<F: Field>(u: &PolyTensor<F>, p: i64, q: i64, r: i64) -> PolyTensor<F> {
    let n = u.dim();
    let up = raise_one_form(u);
    Tensor::from_fn(n, &GAMMA_VAR, 0, |i| {
        let (a, b, d) = (i[0], i[1], i[2]);
        let mut acc = Poly::zero();
        if b == d && p != 0 {
            acc = acc.add(&u.get(&[a]).scale_ratio(p, 1));
        }
        if a == d && q != 0 {
            acc = acc.add(&u.get(&[b]).scale_ratio(q, 1));
        }
        if let (Some(s), true) = (std_j(n, a, b), r != 0) {
            acc = acc.add(&up.get(&[d]).scale_ratio(s * r, 1));
        }
        acc
    })
}

/// Connection changes implemented by [`transform_connection`].
#[derive(Clone, Debug)]
pub enum ConnectionChange<F: Field> {
    /// `Υ_a δ_b^d + Υ_b δ_a^d`.
    Projective(PolyTensor<F>),
    /// `s_a δ_b^d − s_b δ_a^d − J_ab s^d`: same geodesics including parametrization.
    AcsSameGeodesics(PolyTensor<F>),
    /// `(β+s)_a δ_b^d + (β−s)_b δ_a^d + J_ab (β−s)^d`.
    AcsProjective { s: PolyTensor<F>, beta: PolyTensor<F> },
    /// `β_a δ_b^d + β_b δ_a^d + J_ab β^d`: change of Weyl connection.
    Weyl(PolyTensor<F>),
    /// `∇^{β,s}` from `D^β` and its decomposition: `s_a δ_b^d − s_b δ_a^d − s^d J_ab + H_ab^d + S_ab^d + J_ab β^d`.
    NablaBetaS { s: PolyTensor<F>, decomposition: DjDecomposition<F> },
}

pub fn change_tensor<F: Field>(change: &ConnectionChange<F>) -> PolyTensor<F> {
    match change {
        ConnectionChange::Projective(u) => one_form_difference(u, 1, 1, 0),
        ConnectionChange::AcsSameGeodesics(s) => one_form_difference(s, 1, -1, -1),
        ConnectionChange::AcsProjective { s, beta } => {
            one_form_difference(beta, 1, 1, 1).add(&one_form_difference(s, 1, -1, -1))
        }
        ConnectionChange::Weyl(b) => one_form_difference(b, 1, 1, 1),
        ConnectionChange::NablaBetaS { s, decomposition } => one_form_difference(s, 1, -1, -1)
            .add(&raise_last(&decomposition.h).with_weight(0))
            .add(&raise_last(&decomposition.s).with_weight(0))
            .add(&one_form_difference(&decomposition.beta, 0, 0, 1)),
    }
}

/// Applies a connection change. Projective changes require a torsion-free input and the ACS
/// and Weyl changes require `∇J = 0`, except `NablaBetaS` which starts from `D^β`.
pub fn transform_connection<F: Field>(conn: &Connection<F>, change: &ConnectionChange<F>) -> Result<Connection<F>> {
    match change {
        ConnectionChange::Projective(_) if !conn.is_torsion_free() => {
            return Err(AcafError::Input("projective change needs a torsion-free connection".into()))
        }
        ConnectionChange::AcsSameGeodesics(_) | ConnectionChange::AcsProjective { .. } | ConnectionChange::Weyl(_)
            if !dj(conn).is_zero() =>
        {
            return Err(AcafError::Input("ACS change needs an ACS connection (∇J = 0)".into()))
        }
        _ => {}
    }
    Ok(conn.shifted(&change_tensor(change)))
}

/// Output of the `∇⁰` pipeline.
#[derive(Clone, Debug)]
pub struct Nabla0<F: Field> {
    /// Decomposition of `D_a J_bc` for the input connection.
    pub input_decomposition: DjDecomposition<F>,
    /// The member `D⁰` of the projective class with `β = 0`.
    pub d0: Connection<F>,
    pub nabla0: Connection<F>,
    pub h: PolyTensor<F>,
    pub s: PolyTensor<F>,
}

impl<F: Field> Nabla0<F> {
    /// `(H+S)_ab^d`, half the torsion of `∇⁰`.
    pub fn hs_upper(&self) -> PolyTensor<F> {
        raise_last(&self.h.add(&self.s))
    }
}

/// `D ↦ ∇⁰`: decompose `DJ`, move to `D⁰` with `Υ = −β`, add `(H+S)_ab^d`.
pub fn build_nabla0<F: Field>(d: &Connection<F>) -> Result<Nabla0<F>> {
    if !d.is_torsion_free() {
        return Err(AcafError::Input("build_nabla0 needs a torsion-free connection".into()));
    }
    let dec = decompose_dj(&dj(d))?;
    let d0 = d.shifted(&change_tensor(&ConnectionChange::Projective(dec.beta.neg())));
    let dec0 = decompose_dj(&dj(&d0))?;
    if !dec0.beta.is_negligible(crate::linalg::FLOAT_TOL) {
        return Err(AcafError::Structural("β did not vanish after the projective change".into()));
    }
    let nabla0 = d0.shifted(&change_tensor(&ConnectionChange::NablaBetaS {
        s: Tensor::zeros(d.dim(), &[Lower], 0),
        decomposition: dec0.clone(),
    }));
    Ok(Nabla0 { input_decomposition: dec, d0, nabla0, h: dec0.h, s: dec0.s })
}

/// Rho tensor of a Weyl structure: `P_ab` (weight 0) and `P_a` (weight 2).
#[derive(Clone, Debug, PartialEq)]
pub struct RhoTensor<F: Field> {
    pub pab: PolyTensor<F>,
    pub pa: PolyTensor<F>,
}

impl<F: Field> RhoTensor<F> {
    pub fn zero(n: usize) -> Self {
        RhoTensor { pab: Tensor::zeros(n, &[Lower, Lower], 0), pa: Tensor::zeros(n, &[Lower], 2) }
    }
}

/// Change of Rho under `σ̂ = σ exp(Υ) exp(y)`, with `∇` the Weyl connection of `σ`:
/// `P̂_ab = P_ab − Υ_aΥ_b + ∇_aΥ_b + yJ_ab`,
/// `P̂_a = P_a + ∇_a y + 2P_abΥ^b + (∇_aΥ_b)Υ^b − 2Υ_a y`.
pub fn rho_transform<F: Field>(
    p: &RhoTensor<F>,
    ups: &PolyTensor<F>,
    y: &PolyTensor<F>,
    conn: &Connection<F>,
) -> Result<RhoTensor<F>> {
    let n = conn.dim();
    let ups = ups.clone().with_weight(0);
    let y = y.clone().with_weight(2);
    let nu = covariant_derivative(conn, &ups)?;
    let ny = covariant_derivative(conn, &y)?;
    let uu = ups.outer(&ups);
    let jy = j_field::<F>(n).scale(y.get(&[])).with_weight(0);
    let pab = p.pab.sub(&uu).add(&nu).add(&jy);
    let uup = raise_one_form(&ups);
    let pa = Tensor::from_fn(n, &[Lower], 2, |i| {
        let a = i[0];
        let mut acc = p.pa.get(&[a]).add(ny.get(&[a]));
        for b in 0..n {
            let ub = uup.get(&[b]);
            if ub.is_zero() {
                continue;
            }
            acc = acc.add(&p.pab.get(&[a, b]).mul(ub).scale_ratio(2, 1));
            acc = acc.add(&nu.get(&[a, b]).mul(ub));
        }
        acc.sub(&ups.get(&[a]).mul(y.get(&[])).scale_ratio(2, 1))
    });
    Ok(RhoTensor { pab, pa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn var(i: usize) -> Poly<Q> {
        Poly::var(i)
    }

    #[test]
    fn flat_constant_is_parallel() {
        let c = Connection::<Q>::flat(6);
        assert!(dj(&c).is_zero());
        let t = Tensor::from_fn(6, &[], 0, |_| var(1));
        let d = covariant_derivative(&c, &t).unwrap();
        for a in 0..6 {
            assert_eq!(d.get(&[a]), &if a == 1 { Poly::one() } else { Poly::zero() });
        }
    }

    #[test]
    fn projective_covariance_of_dj() {
        let n = 6;
        let g = Tensor::from_fn(n, &GAMMA_VAR, 0, |i| {
            let (a, b, d) = (i[0], i[1], i[2]);
            Poly::constant(qi(((a + b) * 3 + d * 5 + a * b) as i64 % 7 - 3))
        });
        let d = Connection::new(Frame::coordinate(n), g).unwrap();
        let dec = decompose_dj(&dj(&d)).unwrap();
        let u = Tensor::from_fn(n, &[Lower], 0, |i| var(i[0]).add(&Poly::constant(qi(i[0] as i64))));
        let db = transform_connection(&d, &ConnectionChange::Projective(u.clone())).unwrap();
        let decb = decompose_dj(&dj(&db)).unwrap();
        assert_eq!(decb.beta, dec.beta.add(&u));
        assert_eq!(decb.alpha, dec.alpha.add(&u.scale_ratio(1, n as i64)));
        assert_eq!(decb.h, dec.h);
        assert_eq!(decb.s, dec.s);
    }

    #[test]
    fn rho_with_only_y() {
        let c = Connection::<Q>::flat(6);
        let y = Tensor::from_fn(6, &[], 2, |_| Poly::one());
        let zero = Tensor::zeros(6, &[Lower], 0);
        let p = rho_transform(&RhoTensor::zero(6), &zero, &y, &c).unwrap();
        assert_eq!(p.pab, j_field::<Q>(6).with_weight(0));
        assert!(p.pa.is_zero());
    }
}
