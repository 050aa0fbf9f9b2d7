//! Hodge decomposition `L^i = Im ∂* ⊕ H ⊕ Im ∂` and the inverse of the Kostant Laplacian.

use super::{Engine, Flavor};
use crate::error::{AcafError, Result};
use crate::linalg::{krylov_min_poly, rational_roots, Matrix, SparseMatrix};
use crate::scalar::{Field, Ring, Q};
use std::collections::BTreeMap;

/// Eigenvalue of `□` on `Im ∂*` together with the homogeneity and dimension of the piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenBlock {
    pub eigenvalue: Q,
    pub homogeneity: i32,
    pub dim: usize,
}

/// Eigenvalues and eigenspaces of a square rational matrix, which must be diagonalisable over `Q`.
pub fn rational_eigen(m: &Matrix<Q>) -> Result<Vec<(Q, Vec<Vec<Q>>)>> {
    let d = m.rows();
    let sparse = SparseMatrix::from_dense(m);
    let mut roots: Vec<Q> = Vec::new();
    for k in 0..d {
        let mut e = vec![Q::zero(); d];
        e[k] = Q::one();
        let (r, rest) = rational_roots(&krylov_min_poly(&sparse, &e));
        if rest.len() > 1 {
            return Err(AcafError::Structural("Laplacian has irrational eigenvalues".into()));
        }
        for x in r {
            if !roots.contains(&x) {
                roots.push(x);
            }
        }
    }
    roots.sort();
    let mut out = Vec::new();
    let mut total = 0;
    for lam in roots {
        let shifted = m.sub(&Matrix::identity(d).scale(&lam));
        let vecs = shifted.nullspace();
        total += vecs.len();
        out.push((lam, vecs));
    }
    if total != d {
        return Err(AcafError::Structural("Laplacian is not diagonalisable over Q".into()));
    }
    Ok(out)
}

/// Hodge data of `L^i` (or of the full form space) in raw coordinates.
#[derive(Clone, Debug)]
pub struct Hodge {
    pub flavor: Flavor,
    pub degree: usize,
    /// Basis of the harmonic space `H^i = Ker ∂ ∩ Ker ∂*`.
    pub harmonic: Vec<Vec<Q>>,
    pub blocks: Vec<EigenBlock>,
    box_inv: SparseMatrix<Q>,
    harm_proj: SparseMatrix<Q>,
    eigen_proj: Vec<(Q, SparseMatrix<Q>)>,
}

impl Hodge {
    pub fn new(engine: &Engine, flavor: Flavor, i: usize) -> Result<Self> {
        let space = engine.space(flavor, i)?;
        let dim = space.dim();
        let max = engine.max_degree(flavor);
        let dstar = if i < max { engine.codifferential(flavor, i + 1)? } else { SparseMatrix::zeros(dim, 0) };
        let d_here = if i < max { engine.differential(flavor, i)? } else { SparseMatrix::zeros(0, dim) };
        let codiff_here = engine.codifferential(flavor, i)?;
        let d_below = if i > 0 { engine.differential(flavor, i - 1)? } else { SparseMatrix::zeros(dim, 0) };
        let member = engine.membership(flavor, i)?;
        let outside = SparseMatrix::identity(dim).sub(&member);

        let im_star = dstar.column_space();
        let harmonic = codiff_here.vstack(&d_here).vstack(&outside).nullspace();
        let im_d = d_below.column_space();
        let comp = outside.column_space();
        let (a, h) = (im_star.len(), harmonic.len());
        let mut cols = im_star.clone();
        cols.extend(harmonic.iter().cloned());
        cols.extend(im_d);
        cols.extend(comp);
        if cols.len() != dim {
            return Err(AcafError::Structural(format!(
                "Hodge decomposition of degree {i} has {} of {dim} dimensions",
                cols.len()
            )));
        }
        let basis = Matrix::from_columns(dim, &cols);
        let qinv = basis.inverse().ok_or_else(|| AcafError::Structural("Hodge summands are not independent".into()))?;
        let rows = |lo: usize, hi: usize| Matrix::from_fn(hi - lo, dim, |r, c| qinv.get(lo + r, c).clone());
        let top = rows(0, a);
        let b_star = Matrix::from_columns(dim, &im_star);

        let boxm = dstar.mul(&d_here).to_dense().mul(&b_star);
        let coords = top.mul(&boxm);
        if coords.rows() > 0 && !b_star.mul(&coords).sub(&boxm).is_zero() {
            return Err(AcafError::Structural("Laplacian does not preserve Im ∂*".into()));
        }
        let eig = rational_eigen(&coords)?;
        let mut vcols = Vec::new();
        let mut inv_diag = Vec::new();
        let mut blocks: BTreeMap<(Q, i32), usize> = BTreeMap::new();
        for (lam, vecs) in &eig {
            if lam.is_zero() {
                return Err(AcafError::Structural("Laplacian is singular on Im ∂*".into()));
            }
            let raw: Vec<Vec<Q>> = vecs.iter().map(|v| b_star.mul_vec(v)).collect();
            for (hom, d) in split_by_homogeneity(engine, &space, &raw) {
                *blocks.entry((lam.clone(), hom)).or_default() += d;
            }
            for v in vecs {
                vcols.push(v.clone());
                inv_diag.push(lam.inv());
            }
        }
        let mut eigen_proj = Vec::new();
        let box_inv = if a == 0 {
            SparseMatrix::zeros(dim, dim)
        } else {
            let vm = Matrix::from_columns(a, &vcols);
            let vinv = vm.inverse().ok_or_else(|| AcafError::Structural("eigenvectors are dependent".into()))?;
            let left = b_star.mul(&vm);
            let right = vinv.mul(&top);
            let mut start = 0;
            for (lam, vecs) in &eig {
                let range = start..start + vecs.len();
                let sel = Matrix::from_fn(a, a, |r, c| if r == c && range.contains(&r) { Q::one() } else { Q::zero() });
                eigen_proj.push((lam.clone(), SparseMatrix::from_dense(&left.mul(&sel).mul(&right))));
                start = range.end;
            }
            let diag = Matrix::from_fn(a, a, |r, c| if r == c { inv_diag[r].clone() } else { Q::zero() });
            SparseMatrix::from_dense(&left.mul(&diag).mul(&right))
        };
        let harm_proj = if h == 0 {
            SparseMatrix::zeros(dim, dim)
        } else {
            SparseMatrix::from_dense(&Matrix::from_columns(dim, &harmonic).mul(&rows(a, a + h)))
        };
        let blocks = blocks.into_iter().map(|((eigenvalue, homogeneity), dim)| EigenBlock { eigenvalue, homogeneity, dim }).collect();
        Ok(Hodge { flavor, degree: i, harmonic, blocks, box_inv, harm_proj, eigen_proj })
    }

    /// `□^{-1}` on `Im ∂*`, extended by zero on the other summands.
    pub fn box_inverse(&self) -> &SparseMatrix<Q> {
        &self.box_inv
    }

    /// Projection onto harmonic forms along the other summands.
    pub fn harmonic_projection(&self) -> &SparseMatrix<Q> {
        &self.harm_proj
    }

    /// Projections onto the `□`-eigenspaces in `Im ∂*`, along the other eigenspaces and summands.
    pub fn eigen_projections(&self) -> &[(Q, SparseMatrix<Q>)] {
        &self.eigen_proj
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.blocks.iter().map(|b| b.eigenvalue.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Dimensions of the homogeneous components of the span of `vecs`.
fn split_by_homogeneity(engine: &Engine, space: &super::FormSpace, vecs: &[Vec<Q>]) -> Vec<(i32, usize)> {
    let homs: Vec<i32> = (0..space.dim()).map(|k| engine.homogeneity(space, k)).collect();
    let mut levels = homs.clone();
    levels.sort();
    levels.dedup();
    levels
        .into_iter()
        .filter_map(|h| {
            let parts: Vec<Vec<Q>> = vecs
                .iter()
                .map(|v| v.iter().zip(&homs).map(|(c, &hh)| if hh == h { c.clone() } else { Q::zero() }).collect())
                .collect();
            let r = Matrix::from_columns(space.dim(), &parts).rank();
            (r > 0).then_some((h, r))
        })
        .collect()
}
