//! Seeded random inputs.
//!
//! All generators draw from a `ChaCha8Rng` seeded with a `u64`, so a seed fully determines the
//! output. Coefficients are small integers in `[-2, 2]`.
//!
//! * [`random_torsion_free`]: coordinate frame, `Γ_ab^d = Γ_ba^d` with random polynomial entries.
//! * [`random_cf`]: coordinate frame, torsion-free with `∇J = 0` (so `H = S = 0`), curved.
//! * [`random_acf`]: adapted non-holonomic frame, a torsion-free `D` whose `∇⁰` has `H = 0` and
//!   `S ≠ 0`.

use crate::connection::{raise_last, Connection, ConnectionChange};
use crate::error::{AcafError, Result};
use crate::frame::{Frame, PolyTensor};
use crate::linalg::{Matrix, PseudoSolver};
use crate::poly::{monomials_up_to, Mono, Poly};
use crate::scalar::{Ring, Q};
use crate::tensor::{std_j, Lower, Projection, SymmetryClass, Tensor, Upper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_poly<R: Rng>(rng: &mut R, n: usize, deg: u32, density: f64) -> Poly<Q> {
    Poly::random(rng, n, deg, 2, density)
}

/// Random symmetric-in-`ab` coefficients in the coordinate frame.
pub fn random_torsion_free<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Connection<Q> {
    let mut g = Tensor::zeros(n, &[Lower, Lower, Upper], 0);
    for a in 0..n {
        for b in a..n {
            for d in 0..n {
                let p = random_poly(rng, n, deg, 0.15);
                g.set(&[a, b, d], p.clone());
                g.set(&[b, a, d], p);
            }
        }
    }
    Connection::new(Frame::coordinate(n), g).expect("shape")
}

/// Basis of `csp(n)` as matrices `G[b][d] = G_b^d` with `−G_b^e J_ec − G_c^e J_be + (2/n)tr(G) J_bc = 0`.
pub fn csp_basis(n: usize) -> Vec<Matrix<Q>> {
    let jq = |a: usize, b: usize| std_j(n, a, b).unwrap_or(0);
    // rows (b, c), columns (row, col) of G
    let m = Matrix::from_fn(n * n, n * n, |r, k| {
        let (b, c) = (r / n, r % n);
        let (gb, gd) = (k / n, k % n);
        let mut v = 0i64;
        let mut acc = Q::zero();
        if gb == b {
            v -= jq(gd, c);
        }
        if gb == c {
            v -= jq(b, gd);
        }
        acc = acc.add(&Q::from_ratio(v, 1));
        if gb == gd {
            acc = acc.add(&Q::from_ratio(2 * jq(b, c), n as i64));
        }
        acc
    });
    m.nullspace().into_iter().map(|v| Matrix::from_fn(n, n, |b, d| v[b * n + d].clone())).collect()
}

/// The antisymmetrization map `T*⊗csp → Λ²⊗T`, `Γ ↦ Γ_ab^d − Γ_ba^d`, with unknowns ordered
/// `(a, k)` for the csp basis element `k`, and rows `(a<b, d)`.
struct TorsionMap {
    n: usize,
    basis: Vec<Matrix<Q>>,
    matrix: Matrix<Q>,
    pairs: Vec<(usize, usize)>,
}

impl TorsionMap {
    fn new(n: usize) -> Self {
        let basis = csp_basis(n);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let k = basis.len();
        let matrix = Matrix::from_fn(pairs.len() * n, n * k, |r, col| {
            let ((a, b), d) = (pairs[r / n], r % n);
            let (x, kk) = (col / k, col % k);
            let g = &basis[kk];
            let mut acc = Q::zero();
            if x == a {
                acc = acc.add(g.get(b, d));
            }
            if x == b {
                acc = acc.sub(g.get(a, d));
            }
            acc
        });
        TorsionMap { n, basis, matrix, pairs }
    }

    fn gamma_from(&self, coeffs: &[Poly<Q>]) -> PolyTensor<Q> {
        let (n, k) = (self.n, self.basis.len());
        Tensor::from_fn(n, &[Lower, Lower, Upper], 0, |i| {
            let (a, b, d) = (i[0], i[1], i[2]);
            let mut acc = Poly::zero();
            for kk in 0..k {
                let c = &coeffs[a * k + kk];
                let g = self.basis[kk].get(b, d);
                if !c.is_zero() && !g.is_zero() {
                    acc = acc.add(&c.scale_q(g));
                }
            }
            acc
        })
    }

    /// Random polynomial element of `ker M` (torsion-free, csp-valued coefficients).
    fn random_kernel<R: Rng>(&self, rng: &mut R, deg: u32, count: usize) -> PolyTensor<Q> {
        let ker = self.matrix.nullspace();
        let mut coeffs = vec![Poly::zero(); self.matrix.cols()];
        for _ in 0..count {
            let v = &ker[rng.gen_range(0..ker.len())];
            let p = random_poly(rng, self.n, deg, 0.3);
            for (c, x) in coeffs.iter_mut().zip(v) {
                if !x.is_zero() {
                    *c = c.add(&p.scale_q(x));
                }
            }
        }
        self.gamma_from(&coeffs)
    }

    /// Solves `Γ_ab − Γ_ba = rhs_ab` monomial by monomial.
    fn solve(&self, rhs: &PolyTensor<Q>) -> Result<PolyTensor<Q>> {
        let n = self.n;
        let solver = PseudoSolver::new(&self.matrix);
        let mut by_mono: BTreeMap<Mono, Vec<Q>> = BTreeMap::new();
        for (r, &(a, b)) in self.pairs.iter().enumerate() {
            for d in 0..n {
                for (m, c) in rhs.get(&[a, b, d]).terms() {
                    by_mono.entry(*m).or_insert_with(|| vec![Q::zero(); self.matrix.rows()])[r * n + d] = c.clone();
                }
            }
        }
        let mut coeffs = vec![Poly::zero(); self.matrix.cols()];
        for (m, b) in by_mono {
            let x = solver
                .solve(&b)
                .ok_or_else(|| AcafError::Structural("torsion prescription outside the image of T*⊗csp".into()))?;
            for (c, xi) in coeffs.iter_mut().zip(x) {
                if !xi.is_zero() {
                    *c = c.add(&Poly::from_terms([(m, xi)]));
                }
            }
        }
        Ok(self.gamma_from(&coeffs))
    }
}

/// A curved torsion-free connection with `∇J = 0` in the coordinate frame (`H = S = 0`).
pub fn random_cf<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Connection<Q> {
    let tm = TorsionMap::new(n);
    let g = tm.random_kernel(rng, deg, 6);
    Connection::new(Frame::coordinate(n), g).expect("shape")
}

/// Random adapted frame with linear entries in the nilpotent block.
pub fn random_adapted_frame<R: Rng>(rng: &mut R, n: usize) -> Frame<Q> {
    let h = n / 2;
    let mut nm = vec![vec![Poly::zero(); n]; n];
    for row in nm.iter_mut().take(h) {
        for e in row.iter_mut().skip(h) {
            let mut terms: Vec<(Mono, Q)> = Vec::new();
            for m in monomials_up_to(n, 1).into_iter().filter(|&m| m != 0) {
                if rng.gen_bool(0.35) {
                    terms.push((m, Q::from_ratio(rng.gen_range(-2..=2), 1)));
                }
            }
            *e = Poly::from_terms(terms);
        }
    }
    Frame::adapted(n, nm).expect("block structure")
}

/// An ACF input: returns `(D, ∇⁰)` with `D` torsion-free in an adapted frame, `∇⁰` the expected
/// distinguished connection (`H = 0`, `S` from the frame).
pub fn random_acf<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Result<(Connection<Q>, Connection<Q>)> {
    let frame = random_adapted_frame(rng, n);
    let c = frame.structure().clone();
    // 2S = −tf(alt3(c_ab^d J_dc))
    let cl = c.adjust_index(2, crate::tensor::IndexMove::Lower)?;
    let two_s = cl.symmetrize_project(&[0, 1, 2], Projection::TraceFree(SymmetryClass::Antisymmetric))?.neg();
    let s_up = raise_last(&two_s).scale_ratio(1, 2).with_weight(0);
    let tm = TorsionMap::new(n);
    let rhs = c.add(&s_up.scale_ratio(2, 1));
    let g = tm.solve(&rhs)?.add(&tm.random_kernel(rng, deg, 4));
    let nabla0 = Connection::new(frame, g)?;
    let d = nabla0.shifted(&s_up.neg());
    let ups = Tensor::from_fn(n, &[Lower], 0, |_| random_poly(rng, n, deg, 0.2));
    let d = d.shifted(&crate::connection::change_tensor(&ConnectionChange::Projective(ups)));
    Ok((d, nabla0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{build_nabla0, dj, torsion_of};

    #[test]
    fn csp_dimension() {
        assert_eq!(csp_basis(6).len(), 22);
        assert_eq!(csp_basis(4).len(), 11);
    }

    #[test]
    fn torsion_map_rank() {
        let tm = TorsionMap::new(6);
        assert_eq!((tm.matrix.rows(), tm.matrix.cols()), (90, 132));
        assert_eq!(tm.matrix.rank(), 76);
    }

    #[test]
    fn cf_is_fedosov_like() {
        let mut rng = rng_from_seed(3);
        let c = random_cf(&mut rng, 6, 1);
        assert!(c.is_torsion_free());
        assert!(dj(&c).is_zero());
        assert!(!c.gamma().is_zero());
    }

    #[test]
    fn acf_pipeline_recovers_nabla0() {
        let mut rng = rng_from_seed(5);
        let (d, nabla0) = random_acf(&mut rng, 6, 1).unwrap();
        assert!(d.is_torsion_free());
        let out = build_nabla0(&d).unwrap();
        assert!(out.h.is_zero());
        assert!(!out.s.is_zero());
        assert_eq!(out.nabla0, nabla0);
        assert!(dj(&nabla0).is_zero());
        assert_eq!(torsion_of(&nabla0), raise_last(&out.s).scale_ratio(2, 1).with_weight(0));
    }
}
