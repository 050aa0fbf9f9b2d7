//! Exterior-algebra bookkeeping: sorted index sets, insertion signs and the Lefschetz
//! decomposition `Λ^k = Λ^k_0 ⊕ J∧Λ^{k-2}` of forms on a symplectic vector space.

use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{Ring, Q};
use std::collections::HashMap;

/// Sorted `k`-element subsets of `{0, …, dirs-1}` encoded as bitmasks, in lexicographic order.
#[derive(Clone, Debug)]
pub struct IndexSets {
    dirs: usize,
    k: usize,
    sets: Vec<u32>,
    lookup: HashMap<u32, usize>,
}

impl IndexSets {
    pub fn new(dirs: usize, k: usize) -> Self {
        assert!(dirs <= 31, "too many form directions");
        let mut sets = Vec::new();
        if k <= dirs {
            for c in itertools::Itertools::combinations(0..dirs, k) {
                sets.push(c.iter().fold(0u32, |m, &i| m | (1 << i)));
            }
        }
        let lookup = sets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        IndexSets { dirs, k, sets, lookup }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dirs(&self) -> usize {
        self.dirs
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn mask(&self, i: usize) -> u32 {
        self.sets[i]
    }

    pub fn index(&self, mask: u32) -> Option<usize> {
        self.lookup.get(&mask).copied()
    }

    /// Elements of the `i`-th set in increasing order.
    pub fn elements(&self, i: usize) -> Vec<usize> {
        bits(self.sets[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.sets.iter().copied().enumerate()
    }
}

/// Elements of a bitmask in increasing order.
pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign relating `φ(A, b)` (with `b` appended last) to the component on the sorted set
/// `A ∪ {b}`: `(-1)^{#{a ∈ A : a > b}}`. Returns 0 if `b ∈ A`.
pub fn append_sign(mask: u32, b: usize) -> i64 {
    if mask & (1 << b) != 0 {
        return 0;
    }
    if (mask >> (b + 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation sorting the sequence `idx` (0 if it has repeats).
pub fn sort_sign(idx: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                s = -s;
            }
        }
    }
    s
}

/// Matrix of the contraction `(Cφ)_{A} = J^{bc} φ_{A b c}` from `Λ^k` to `Λ^{k-2}` in the
/// lexicographic bases, for a skew matrix `j_upper` of size `dirs`.
pub fn contraction_matrix(j_upper: &Matrix<Q>, k: usize) -> SparseMatrix<Q> {
    let dirs = j_upper.rows();
    let src = IndexSets::new(dirs, k);
    let dst = IndexSets::new(dirs, k.saturating_sub(2));
    let mut t = Vec::new();
    if k >= 2 {
        for (row, m) in dst.iter() {
            for b in 0..dirs {
                for c in 0..dirs {
                    let j = j_upper.get(b, c);
                    if j.is_zero() || b == c || m & (1 << b) != 0 || m & (1 << c) != 0 {
                        continue;
                    }
                    let s1 = append_sign(m, b);
                    let m1 = m | (1 << b);
                    let s2 = append_sign(m1, c);
                    let col = src.index(m1 | (1 << c)).unwrap();
                    t.push((row, col, j.scale_ratio(s1 * s2, 1)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(dst.len(), src.len(), t)
}

/// Matrix of `α ↦ J∧α` from `Λ^{k-2}` to `Λ^k` in component form
/// `(J∧α)(A) = Σ_{p<q} (-1)^{p+q+1} J_{a_p a_q} α(A ∖ {a_p, a_q})` (positions counted from 0).
pub fn wedge_j_matrix(j_lower: &Matrix<Q>, k: usize) -> SparseMatrix<Q> {
    let dirs = j_lower.rows();
    let src = IndexSets::new(dirs, k.saturating_sub(2));
    let dst = IndexSets::new(dirs, k);
    let mut t = Vec::new();
    if k >= 2 {
        for (row, m) in dst.iter() {
            let el = bits(m);
            for p in 0..el.len() {
                for q in p + 1..el.len() {
                    let j = j_lower.get(el[p], el[q]);
                    if j.is_zero() {
                        continue;
                    }
                    let rest = m & !(1 << el[p]) & !(1 << el[q]);
                    let sign = if (p + q + 1) % 2 == 0 { 1 } else { -1 };
                    t.push((row, src.index(rest).unwrap(), j.scale_ratio(sign, 1)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(dst.len(), src.len(), t)
}

/// Projection of `Λ^k` onto `J∧Λ^{k-2}` along the primitive (trace-free) forms.
///
/// Returns `None` if the two subspaces fail to be complementary, which would signal a wrong
/// symplectic matrix.
pub fn trace_projector(j_lower: &Matrix<Q>, j_upper: &Matrix<Q>, k: usize) -> Option<Matrix<Q>> {
    let dirs = j_lower.rows();
    let dim = IndexSets::new(dirs, k).len();
    if k < 2 {
        return Some(Matrix::zeros(dim, dim));
    }
    let image = wedge_j_matrix(j_lower, k).column_space();
    let kernel = contraction_matrix(j_upper, k).nullspace();
    if image.len() + kernel.len() != dim {
        return None;
    }
    let mut cols = image.clone();
    cols.extend(kernel);
    let b = Matrix::from_columns(dim, &cols);
    let inv = b.inverse()?;
    // keep only the image coordinates
    let mut keep = Matrix::zeros(dim, dim);
    for i in 0..image.len() {
        keep.set(i, i, Q::one());
    }
    Some(b.mul(&keep).mul(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::standard_j_matrix;

    #[test]
    fn subsets_are_lexicographic() {
        let s = IndexSets::new(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s.elements(0), vec![0, 1]);
        assert_eq!(s.elements(5), vec![2, 3]);
        assert_eq!(s.index(0b1010), Some(4));
    }

    #[test]
    fn signs() {
        assert_eq!(append_sign(0b0110, 0), 1);
        assert_eq!(append_sign(0b0100, 0), -1);
        assert_eq!(append_sign(0b0100, 2), 0);
        assert_eq!(sort_sign(&[2, 0, 1]), 1);
        assert_eq!(sort_sign(&[1, 0, 2]), -1);
        assert_eq!(sort_sign(&[1, 1]), 0);
    }

    #[test]
    fn lefschetz_dimensions() {
        // primitive k-forms on R^6: C(6,k) - C(6,k-2)
        let j = standard_j_matrix(6);
        for (k, prim) in [(2usize, 14usize), (3, 14), (4, 0)] {
            let p = trace_projector(&j, &j, k).unwrap();
            let total = IndexSets::new(6, k).len();
            assert_eq!(total - p.rank(), prim, "k = {k}");
            assert_eq!(p.mul(&p), p);
        }
    }
}
