//! Frames on a flat polynomial chart.
//!
//! A frame is `e_a = F_a^μ ∂_μ` with `F = I + N`, where `N` is nonzero only in the block
//! `a < n/2`, `μ ≥ n/2`. Then `N² = 0` and `F⁻¹ = I − N` stays polynomial. With `N = 0` this is the
//! coordinate frame. A non-holonomic frame is the only way to get a non-closed `J` (and so `S ≠ 0`)
//! while keeping `J` constant.

use crate::error::{AcafError, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Ring};
use crate::tensor::{Tensor, Variance};

/// Polynomial-coefficient tensor field.
pub type PolyTensor<F> = Tensor<Poly<F>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Frame<F: Field> {
    n: usize,
    f: Vec<Vec<Poly<F>>>,
    finv: Vec<Vec<Poly<F>>>,
    /// Structure functions `[e_a, e_b] = c_ab^d e_d`, variance (lower, lower, upper).
    c: Tensor<Poly<F>>,
    holonomic: bool,
}

impl<F: Field> Frame<F> {
    pub fn coordinate(n: usize) -> Self {
        let id = identity(n);
        Frame {
            n,
            f: id.clone(),
            finv: id,
            c: Tensor::zeros(n, &[Variance::Lower, Variance::Lower, Variance::Upper], 0),
            holonomic: true,
        }
    }

    /// Frame `F = I + N` for a block-nilpotent `N` (rows `< n/2`, columns `≥ n/2`).
    pub fn adapted(n: usize, nmat: Vec<Vec<Poly<F>>>) -> Result<Self> {
        let h = n / 2;
        if nmat.len() != n || nmat.iter().any(|r| r.len() != n) {
            return Err(AcafError::Shape("frame matrix must be n x n".into()));
        }
        for (a, row) in nmat.iter().enumerate() {
            for (mu, p) in row.iter().enumerate() {
                if !(a < h && mu >= h) && !p.is_zero() {
                    return Err(AcafError::Input(format!("frame entry ({a},{mu}) outside the nilpotent block")));
                }
            }
        }
        let id = identity::<F>(n);
        let f: Vec<Vec<Poly<F>>> = (0..n).map(|a| (0..n).map(|m| id[a][m].add(&nmat[a][m])).collect()).collect();
        let finv: Vec<Vec<Poly<F>>> = (0..n).map(|a| (0..n).map(|m| id[a][m].sub(&nmat[a][m])).collect()).collect();
        let mut frame = Frame { n, f, finv, c: Tensor::zeros(n, &[Variance::Lower, Variance::Lower, Variance::Upper], 0), holonomic: false };
        frame.holonomic = nmat.iter().flatten().all(|p| p.is_zero());
        frame.c = frame.structure_functions();
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_holonomic(&self) -> bool {
        self.holonomic
    }

    /// `F_a^μ`.
    pub fn matrix(&self) -> &[Vec<Poly<F>>] {
        &self.f
    }

    pub fn inverse_matrix(&self) -> &[Vec<Poly<F>>] {
        &self.finv
    }

    pub fn structure(&self) -> &Tensor<Poly<F>> {
        &self.c
    }

    /// `e_a(p)`.
    pub fn deriv(&self, a: usize, p: &Poly<F>) -> Poly<F> {
        if self.holonomic {
            return p.derivative(a);
        }
        let mut acc = Poly::zero();
        for (mu, fm) in self.f[a].iter().enumerate() {
            if !fm.is_zero() {
                let d = p.derivative(mu);
                if !d.is_zero() {
                    acc = acc.add(&fm.mul(&d));
                }
            }
        }
        acc
    }

    /// Componentwise frame derivative with the new (lower) slot in front: `(e_a t)_{I}`.
    pub fn gradient(&self, t: &Tensor<Poly<F>>) -> Tensor<Poly<F>> {
        let mut var = vec![Variance::Lower];
        var.extend_from_slice(t.variance());
        Tensor::from_fn(self.n, &var, t.weight(), |idx| self.deriv(idx[0], t.get(&idx[1..])))
    }

    fn structure_functions(&self) -> Tensor<Poly<F>> {
        let n = self.n;
        // X_ab^μ = e_a F_b^μ − e_b F_a^μ
        let ef: Vec<Vec<Vec<Poly<F>>>> =
            (0..n).map(|a| (0..n).map(|b| (0..n).map(|m| self.deriv(a, &self.f[b][m])).collect()).collect()).collect();
        Tensor::from_fn(n, &[Variance::Lower, Variance::Lower, Variance::Upper], 0, |i| {
            let (a, b, d) = (i[0], i[1], i[2]);
            let mut acc = Poly::zero();
            for m in 0..n {
                let x = ef[a][b][m].sub(&ef[b][a][m]);
                if !x.is_zero() && !self.finv[m][d].is_zero() {
                    acc = acc.add(&x.mul(&self.finv[m][d]));
                }
            }
            acc
        })
    }

    /// Checks `F F⁻¹ = I`.
    pub fn check_inverse(&self) -> bool {
        let id = identity::<F>(self.n);
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let s = (0..self.n).fold(Poly::zero(), |acc, m| acc.add(&self.f[a][m].mul(&self.finv[m][b])));
                s == id[a][b]
            })
        })
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Frame<G> {
        let conv = |m: &Vec<Vec<Poly<F>>>| m.iter().map(|r| r.iter().map(|p| p.map_field(f)).collect()).collect();
        Frame { n: self.n, f: conv(&self.f), finv: conv(&self.finv), c: self.c.map(|p| p.map_field(f)), holonomic: self.holonomic }
    }
}

fn identity<F: Field>(n: usize) -> Vec<Vec<Poly<F>>> {
    (0..n).map(|a| (0..n).map(|b| if a == b { Poly::one() } else { Poly::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    #[test]
    fn coordinate_frame_is_flat() {
        let f = Frame::<Q>::coordinate(6);
        assert!(f.structure().is_zero());
        let p = Poly::var(2).mul(&Poly::var(4));
        assert_eq!(f.deriv(2, &p), Poly::var(4));
    }

    #[test]
    fn bracket_of_adapted_frame() {
        // e_0 = ∂_0 + x_1 ∂_3, e_1 = ∂_1: [e_1, e_0] = ∂_3 = e_3
        let mut nm = vec![vec![Poly::<Q>::zero(); 6]; 6];
        nm[0][3] = Poly::var(1);
        let f = Frame::adapted(6, nm).unwrap();
        assert!(f.check_inverse());
        let c = f.structure();
        assert_eq!(c.get(&[1, 0, 3]), &Poly::constant(qi(1)));
        assert_eq!(c.get(&[0, 1, 3]), &Poly::constant(qi(-1)));
        assert_eq!(c.data().iter().filter(|p| !p.is_zero()).count(), 2);
    }

    #[test]
    fn rejects_non_nilpotent_block() {
        let mut nm = vec![vec![Poly::<Q>::zero(); 6]; 6];
        nm[4][0] = Poly::var(1);
        assert!(Frame::adapted(6, nm).is_err());
    }
}
