//! The contact grading of `sp(n+2)` in an explicit matrix realization.
//!
//! The symplectic form on `R^{n+2}` is `Ω = [[0,0,1],[0,J,0],[−1,0,0]]` and an element has the block
//! shape
//!
//! ```text
//! [ a    Y_c     z   ]
//! [ X^d  A_c^d   Y^d ]
//! [ x   −X_c    −a   ]
//! ```
//!
//! with `A` in `sp(n)`, lowering and raising done with `J`. Basis order (grading-major):
//!
//! | index                  | element | grade |
//! |------------------------|---------|-------|
//! | `0`                    | `x`     | −2    |
//! | `1 + a`                | `X_a`   | −1    |
//! | `n + 1`                | `E`     | 0     |
//! | `n + 2 + k`            | `−J S_k` for the `k`-th symmetric pair `i ≤ j` | 0 |
//! | `n + 2 + sp + b`       | `Z^b`   | 1     |
//! | `dim − 1`              | `z`     | 2     |
//!
//! `E = diag(1, 0, …, 0, −1)` is the grading element: `[E, B] = grade(B)·B`.

use crate::error::{check_dim, AcafError, Result};
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{Ring, Q};
use crate::tensor::standard_j_matrix;

/// Sparse coordinate vector in the algebra basis.
pub type Coords = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    n: usize,
    basis: Vec<Matrix<Q>>,
    grading: Vec<i32>,
    pairs: Vec<(usize, usize)>,
    /// `structure[i][j]` are the coordinates of `[b_i, b_j]`.
    structure: Vec<Vec<Coords>>,
    j: Matrix<Q>,
}

impl GradedAlgebra {
    pub fn build(n: usize) -> Result<Self> {
        check_dim(n, 6)?;
        let j = standard_j_matrix(n);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |k| (i, k))).collect();
        let m = n + 2;
        let mut basis = Vec::new();
        let mut grading = Vec::new();

        let mut x = Matrix::zeros(m, m);
        x.set(n + 1, 0, Q::one());
        basis.push(x);
        grading.push(-2);
        for a in 0..n {
            let mut e = Matrix::zeros(m, m);
            e.set(1 + a, 0, Q::one());
            for c in 0..n {
                let v = j.get(a, c);
                if !v.is_zero() {
                    e.set(n + 1, 1 + c, -v.clone());
                }
            }
            basis.push(e);
            grading.push(-1);
        }
        let mut e = Matrix::zeros(m, m);
        e.set(0, 0, Q::one());
        e.set(n + 1, n + 1, -Q::one());
        basis.push(e);
        grading.push(0);
        for &(p, q) in &pairs {
            let s = Matrix::from_fn(n, n, |r, c| if (r, c) == (p, q) || (r, c) == (q, p) { Q::one() } else { Q::zero() });
            let a = j.mul(&s).scale(&-Q::one());
            let mut e = Matrix::zeros(m, m);
            for d in 0..n {
                for c in 0..n {
                    e.set(1 + d, 1 + c, a.get(d, c).clone());
                }
            }
            basis.push(e);
            grading.push(0);
        }
        for b in 0..n {
            let mut e = Matrix::zeros(m, m);
            e.set(0, 1 + b, Q::one());
            for d in 0..n {
                let v = j.get(d, b);
                if !v.is_zero() {
                    e.set(1 + d, n + 1, v.clone());
                }
            }
            basis.push(e);
            grading.push(1);
        }
        let mut z = Matrix::zeros(m, m);
        z.set(0, n + 1, Q::one());
        basis.push(z);
        grading.push(2);

        let mut alg = GradedAlgebra { n, basis, grading, pairs, structure: Vec::new(), j };
        let omega = alg.omega();
        for (i, b) in alg.basis.iter().enumerate() {
            if b.transpose().mul(&omega).add(&omega.mul(b)) != Matrix::zeros(m, m) {
                return Err(AcafError::Structural(format!("basis element {i} does not preserve the symplectic form")));
            }
        }
        let dim = alg.dim();
        let mut structure = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for k in 0..dim {
                let c = alg.basis[i].mul(&alg.basis[k]).sub(&alg.basis[k].mul(&alg.basis[i]));
                structure[i][k] = sparse(&alg.coords(&c)?);
            }
        }
        alg.structure = structure;
        Ok(alg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn sp_dim(&self) -> usize {
        self.pairs.len()
    }

    /// The symplectic form `Ω` on `R^{n+2}`.
    pub fn omega(&self) -> Matrix<Q> {
        let (n, m) = (self.n, self.n + 2);
        Matrix::from_fn(m, m, |r, c| {
            if (r, c) == (0, n + 1) {
                Q::one()
            } else if (r, c) == (n + 1, 0) {
                -Q::one()
            } else if (1..=n).contains(&r) && (1..=n).contains(&c) {
                self.j.get(r - 1, c - 1).clone()
            } else {
                Q::zero()
            }
        })
    }

    pub fn j(&self) -> &Matrix<Q> {
        &self.j
    }

    pub fn basis(&self, i: usize) -> &Matrix<Q> {
        &self.basis[i]
    }

    pub fn grading(&self, i: usize) -> i32 {
        self.grading[i]
    }

    /// Basis indices of the piece of the given grade.
    pub fn grade_indices(&self, g: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.grading[i] == g).collect()
    }

    /// `true` on the basis of `l = l_{−1} ⊕ p₀ ⊕ p₁ ⊕ p₂` (everything except `x`).
    pub fn l_mask(&self) -> Vec<bool> {
        (0..self.dim()).map(|i| self.grading[i] != -2).collect()
    }

    pub fn idx_x(&self) -> usize {
        0
    }

    pub fn idx_xa(&self, a: usize) -> usize {
        1 + a
    }

    pub fn idx_e(&self) -> usize {
        self.n + 1
    }

    pub fn idx_sp(&self, k: usize) -> usize {
        self.n + 2 + k
    }

    pub fn idx_zb(&self, b: usize) -> usize {
        self.n + 2 + self.sp_dim() + b
    }

    pub fn idx_z(&self) -> usize {
        self.dim() - 1
    }

    /// Coordinates of a matrix in the basis; errors if it is not in `sp(n+2)`.
    pub fn coords(&self, mat: &Matrix<Q>) -> Result<Vec<Q>> {
        let n = self.n;
        let mut c = vec![Q::zero(); self.dim()];
        c[0] = mat.get(n + 1, 0).clone();
        for d in 0..n {
            c[1 + d] = mat.get(1 + d, 0).clone();
            c[self.idx_zb(d)] = mat.get(0, 1 + d).clone();
        }
        c[self.idx_e()] = mat.get(0, 0).clone();
        let a = Matrix::from_fn(n, n, |d, cc| mat.get(1 + d, 1 + cc).clone());
        let s = self.j.mul(&a);
        for (k, &(p, q)) in self.pairs.iter().enumerate() {
            c[self.idx_sp(k)] = s.get(p, q).clone();
        }
        c[self.idx_z()] = mat.get(0, n + 1).clone();
        if self.element(&c) != *mat {
            return Err(AcafError::Structural("matrix is not in sp(n+2)".into()));
        }
        Ok(c)
    }

    pub fn element(&self, c: &[Q]) -> Matrix<Q> {
        let m = self.n + 2;
        let mut out = Matrix::zeros(m, m);
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                out = out.add(&b.scale(ci));
            }
        }
        out
    }

    /// Structure constants of `[b_i, b_k]`.
    pub fn bracket_basis(&self, i: usize, k: usize) -> &[(usize, Q)] {
        &self.structure[i][k]
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (k, vk) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let f = ui * vk;
                for (l, c) in &self.structure[i][k] {
                    out[*l] += &f * c;
                }
            }
        }
        out
    }

    /// `ad(b_i)` as a matrix on coordinates.
    pub fn ad(&self, i: usize) -> SparseMatrix<Q> {
        let dim = self.dim();
        SparseMatrix::from_triplets(dim, dim, (0..dim).flat_map(|k| self.structure[i][k].iter().map(move |(l, c)| (*l, k, c.clone()))))
    }

    /// Killing form `tr(ad X ad Y)` on basis elements.
    pub fn killing_form(&self) -> Matrix<Q> {
        let ads: Vec<SparseMatrix<Q>> = (0..self.dim()).map(|i| self.ad(i)).collect();
        Matrix::from_fn(self.dim(), self.dim(), |i, k| {
            let p = ads[i].mul(&ads[k]);
            (0..self.dim()).fold(Q::zero(), |acc, d| acc + p.get(d, d))
        })
    }

    /// The pairing `tr(XY)/2`, under which `Z^a` is dual to `X_a` and `2z` to `x`.
    pub fn trace_pairing(&self) -> Matrix<Q> {
        Matrix::from_fn(self.dim(), self.dim(), |i, k| {
            let p = self.basis[i].mul(&self.basis[k]);
            (0..self.n + 2).fold(Q::zero(), |acc, d| acc + p.get(d, d)) / Q::from_ratio(2, 1)
        })
    }

    /// The `g_−` bracket as a two-form: `[X_a, X_b] = c_ab x`.
    pub fn bracket_dual(&self) -> Matrix<Q> {
        Matrix::from_fn(self.n, self.n, |a, b| coeff(&self.structure[1 + a][1 + b], 0))
    }

    /// The element of `p₀` acting on `l_{−1} ≅ R^n` by the matrix `g` (`g[d][c]` maps the `c`-th to
    /// the `d`-th coordinate), which must lie in `csp(n)`: `a = −tr(g)/n` and `A = g + aI`.
    pub fn csp_embed(&self, g: &Matrix<Q>) -> Result<Vec<Q>> {
        let n = self.n;
        let tr = (0..n).fold(Q::zero(), |acc, d| acc + g.get(d, d));
        let a = -tr / Q::from_ratio(n as i64, 1);
        let mut mat = Matrix::zeros(n + 2, n + 2);
        mat.set(0, 0, a.clone());
        mat.set(n + 1, n + 1, -a.clone());
        for d in 0..n {
            for c in 0..n {
                let v = if d == c { g.get(d, c) + &a } else { g.get(d, c).clone() };
                mat.set(1 + d, 1 + c, v);
            }
        }
        self.coords(&mat).map_err(|_| AcafError::Input("matrix is not in csp(n)".into()))
    }

    /// Coordinates of the `p₀` element acting on `l_{−1}` by `g(d, c)`, over any ring. Unlike
    /// [`GradedAlgebra::csp_embed`] this does not check membership in `csp(n)`.
    pub fn csp_coords<C: Ring>(&self, g: impl Fn(usize, usize) -> C) -> Vec<C> {
        let n = self.n;
        let mut tr = C::zero();
        for d in 0..n {
            tr.add_assign(&g(d, d));
        }
        let a = tr.scale_ratio(-1, n as i64);
        let mut out = vec![C::zero(); self.dim()];
        out[self.idx_e()] = a.clone();
        for (k, &(p, q)) in self.pairs.iter().enumerate() {
            // S = J (g + aI); row p of J has a single entry
            let mut acc = C::zero();
            for d in 0..n {
                let jv = self.j.get(p, d);
                if jv.is_zero() {
                    continue;
                }
                let mut e = g(d, q);
                if d == q {
                    e = e.add(&a);
                }
                acc.add_assign(&e.scale_q(jv));
            }
            out[self.idx_sp(k)] = acc;
        }
        out
    }

    /// The element `Σ_c p_c Z^c + w z` of `p₊` (used for `P(X_a)` with `p_c = P_ac`, `w = P_a`).
    pub fn p_plus(&self, p: &[Q], w: &Q) -> Vec<Q> {
        let mut c = vec![Q::zero(); self.dim()];
        for (b, v) in p.iter().enumerate() {
            c[self.idx_zb(b)] = v.clone();
        }
        c[self.idx_z()] = w.clone();
        c
    }
}

fn sparse(v: &[Q]) -> Coords {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

fn coeff(c: &[(usize, Q)], i: usize) -> Q {
    c.iter().find(|(k, _)| *k == i).map_or(Q::zero(), |(_, v)| v.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// `T = R^{n+2}` in slot coordinates `(r, s_0, …, s_{n−1}, t)` with `s_d = m^e J_ed`.
    Standard,
    Adjoint,
    /// `R[w]`, a `p`-module only: `p₀` acts by `w·a` (`= −(w/n)tr`), `p₊` trivially.
    Density(i32),
}

/// A representation given by one action matrix per basis element.
#[derive(Clone, Debug)]
pub struct Rep {
    pub kind: RepKind,
    dim: usize,
    mats: Vec<SparseMatrix<Q>>,
    /// Eigenvalue of `dτ(E)` on each module basis vector.
    grades: Vec<i32>,
}

impl Rep {
    pub fn new(alg: &GradedAlgebra, kind: RepKind) -> Self {
        let n = alg.n();
        match kind {
            RepKind::Standard => {
                let m = n + 2;
                // C maps (v_0, m, v_{n+1}) to (r, s, t)
                let jt = alg.j().transpose();
                let c = Matrix::from_fn(m, m, |r, k| block(r, k, n, &jt));
                let cinv = Matrix::from_fn(m, m, |r, k| block(r, k, n, alg.j()));
                let mats = (0..alg.dim()).map(|i| SparseMatrix::from_dense(&c.mul(alg.basis(i)).mul(&cinv))).collect();
                let grades = (0..m).map(|i| if i == 0 { 1 } else if i == m - 1 { -1 } else { 0 }).collect();
                Rep { kind, dim: m, mats, grades }
            }
            RepKind::Adjoint => {
                let mats = (0..alg.dim()).map(|i| alg.ad(i)).collect();
                let grades = (0..alg.dim()).map(|i| alg.grading(i)).collect();
                Rep { kind, dim: alg.dim(), mats, grades }
            }
            RepKind::Density(w) => {
                let mats = (0..alg.dim())
                    .map(|i| {
                        if i == alg.idx_e() {
                            SparseMatrix::from_triplets(1, 1, [(0, 0, Q::from_ratio(w as i64, 1))])
                        } else {
                            SparseMatrix::zeros(1, 1)
                        }
                    })
                    .collect();
                Rep { kind, dim: 1, mats, grades: vec![w] }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, i: usize) -> &SparseMatrix<Q> {
        &self.mats[i]
    }

    pub fn grade(&self, beta: usize) -> i32 {
        self.grades[beta]
    }

    /// `dτ(X)` for `X` given in coordinates.
    pub fn matrix_of(&self, x: &[Q]) -> SparseMatrix<Q> {
        let mut out = SparseMatrix::zeros(self.dim, self.dim);
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out = out.add(&self.mats[i].scale(c));
        }
        out
    }

    pub fn act(&self, x: &[Q], v: &[Q]) -> Vec<Q> {
        self.matrix_of(x).mul_vec(v)
    }

    /// Splits the basis of the subspace `v` (a sorted list of basis indices) into the part spanning
    /// `Ker dτ(p₂)` and its complement. Errors unless the kernel is spanned by basis vectors.
    pub fn kernel_p2_split(&self, alg: &GradedAlgebra, v: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let z = &self.mats[alg.idx_z()];
        let restricted = z.select_columns(v);
        let (ker, comp): (Vec<usize>, Vec<usize>) = v.iter().partition(|&&b| z.column(b).iter().all(Ring::is_zero));
        if restricted.nullspace().len() != ker.len() {
            return Err(AcafError::Structural("Ker dτ(p₂) is not spanned by basis vectors".into()));
        }
        Ok((ker, comp))
    }
}

fn block(r: usize, k: usize, n: usize, mid: &Matrix<Q>) -> Q {
    if (r == 0 && k == 0) || (r == n + 1 && k == n + 1) {
        Q::one()
    } else if (1..=n).contains(&r) && (1..=n).contains(&k) {
        mid.get(r - 1, k - 1).clone()
    } else {
        Q::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use proptest::prelude::*;

    fn alg6() -> GradedAlgebra {
        GradedAlgebra::build(6).unwrap()
    }

    fn small_coords(dim: usize) -> impl Strategy<Value = Vec<Q>> {
        proptest::collection::vec(-2i64..=2, dim).prop_map(|v| v.into_iter().map(qi).collect())
    }

    #[test]
    fn dimensions() {
        let g = alg6();
        assert_eq!(g.dim(), 36);
        let counts: Vec<usize> = (-2..=2).map(|d| g.grade_indices(d).len()).collect();
        assert_eq!(counts, vec![1, 6, 22, 6, 1]);
        assert_eq!(g.l_mask().iter().filter(|b| !**b).count(), 1);
        assert_eq!(GradedAlgebra::build(8).unwrap().dim(), 55);
        assert!(GradedAlgebra::build(5).is_err());
    }

    #[test]
    fn grading_element_and_brackets() {
        let g = alg6();
        for i in 0..g.dim() {
            let expect = vec![(i, qi(g.grading(i) as i64))];
            let got: Coords = g.bracket_basis(g.idx_e(), i).to_vec();
            if g.grading(i) == 0 {
                assert!(got.is_empty());
            } else {
                assert_eq!(got, expect);
            }
        }
        // [X_a, X_b] = −2 J_ab x
        let c = g.bracket_dual();
        assert_eq!(c, g.j().scale(&qi(-2)));
        // [Z^c, Z^b] = 2 J^{cb} z
        for cc in 0..6 {
            for b in 0..6 {
                let expect = g.j().get(cc, b) * qi(2);
                assert_eq!(coeff(g.bracket_basis(g.idx_zb(cc), g.idx_zb(b)), g.idx_z()), expect);
            }
        }
    }

    #[test]
    fn grading_is_respected() {
        let g = alg6();
        for i in 0..g.dim() {
            for k in 0..g.dim() {
                let s = g.grading(i) + g.grading(k);
                for (l, _) in g.bracket_basis(i, k) {
                    assert_eq!(g.grading(*l), s);
                }
            }
        }
    }

    #[test]
    fn trace_pairing_duality() {
        let g = alg6();
        let b = g.trace_pairing();
        for a in 0..6 {
            for c in 0..6 {
                let expect = if a == c { qi(1) } else { qi(0) };
                assert_eq!(b.get(g.idx_zb(a), g.idx_xa(c)), &expect);
            }
        }
        assert_eq!(b.get(g.idx_z(), g.idx_x()), &q(1, 2));
    }

    fn q(p: i64, d: i64) -> Q {
        crate::scalar::q(p, d)
    }

    #[test]
    fn killing_grading_orthogonality() {
        let g = alg6();
        let k = g.killing_form();
        assert!(!k.get(g.idx_x(), g.idx_z()).is_zero());
        for b in 0..6 {
            assert!(k.get(g.idx_x(), g.idx_zb(b)).is_zero());
        }
        // invariance on basis triples
        let dim = g.dim();
        for i in (0..dim).step_by(5) {
            for a in 0..dim {
                for c in (0..dim).step_by(3) {
                    let mut s = Q::zero();
                    for (l, v) in g.bracket_basis(i, a) {
                        s += v * k.get(*l, c);
                    }
                    for (l, v) in g.bracket_basis(i, c) {
                        s += v * k.get(a, *l);
                    }
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn standard_rep_slots() {
        let g = alg6();
        let t = Rep::new(&g, RepKind::Standard);
        // dτ(X_a)(r, s, t) = (0, J_ad r, s_a)
        let mut v = vec![Q::zero(); 8];
        v[0] = qi(1);
        let a = 2;
        let out = t.matrix(g.idx_xa(a)).mul_vec(&v);
        for d in 0..6 {
            assert_eq!(out[1 + d], g.j().get(a, d).clone());
        }
        let mut v = vec![Q::zero(); 8];
        v[1 + a] = qi(1);
        let out = t.matrix(g.idx_xa(a)).mul_vec(&v);
        assert_eq!(out[7], qi(1));
        let (ker, comp) = t.kernel_p2_split(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(ker, (0..7).collect::<Vec<_>>());
        assert_eq!(comp, vec![7]);
    }

    #[test]
    fn adjoint_kernel_split() {
        let g = alg6();
        let ad = Rep::new(&g, RepKind::Adjoint);
        let l: Vec<usize> = (1..g.dim()).collect();
        let (ker, comp) = ad.kernel_p2_split(&g, &l).unwrap();
        let mut expect: Vec<usize> = (1..=6).collect();
        expect.push(g.idx_e());
        assert_eq!(comp, expect);
        assert_eq!(ker.len(), 22 - 1 + 6 + 1);
    }

    #[test]
    fn density_on_csp_identity() {
        let g = alg6();
        let id = g.csp_embed(&Matrix::identity(6)).unwrap();
        assert_eq!(id[g.idx_e()], qi(-1));
        let d = Rep::new(&g, RepKind::Density(2));
        assert_eq!(d.act(&id, &[qi(1)]), vec![qi(-2)]);
        // p₀ element acts on l_{−1} by the embedded matrix
        let gm = Matrix::from_fn(6, 6, |r, c| if r == c { qi(2) } else if (r, c) == (0, 3) { qi(1) } else { qi(0) });
        let e = g.csp_embed(&gm).unwrap();
        for c in 0..6 {
            let mut xc = vec![Q::zero(); g.dim()];
            xc[g.idx_xa(c)] = qi(1);
            let br = g.bracket(&e, &xc);
            for d in 0..6 {
                assert_eq!(br[g.idx_xa(d)], gm.get(d, c).clone());
            }
        }
        assert!(g.csp_embed(&Matrix::from_fn(6, 6, |r, c| if (r, c) == (0, 1) { qi(1) } else { qi(0) })).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn jacobi(x in small_coords(36), y in small_coords(36), z in small_coords(36)) {
            let g = alg6();
            let t1 = g.bracket(&x, &g.bracket(&y, &z));
            let t2 = g.bracket(&y, &g.bracket(&z, &x));
            let t3 = g.bracket(&z, &g.bracket(&x, &y));
            prop_assert!(t1.iter().zip(&t2).zip(&t3).all(|((a, b), c)| (a + b + c).is_zero()));
            prop_assert!(g.bracket(&x, &x).iter().all(Ring::is_zero));
        }

        #[test]
        fn reps_are_homomorphisms(x in small_coords(36), y in small_coords(36)) {
            let g = alg6();
            let br = g.bracket(&x, &y);
            for kind in [RepKind::Standard, RepKind::Adjoint] {
                let r = Rep::new(&g, kind);
                let (a, b) = (r.matrix_of(&x), r.matrix_of(&y));
                prop_assert_eq!(r.matrix_of(&br).to_dense(), a.mul(&b).sub(&b.mul(&a)).to_dense());
            }
        }

        #[test]
        fn density_is_a_p_module(x in small_coords(36), y in small_coords(36)) {
            let g = alg6();
            let restrict = |v: &[Q]| -> Vec<Q> { v.iter().enumerate().map(|(i, c)| if g.grading(i) >= 0 { c.clone() } else { Q::zero() }).collect() };
            let (x, y) = (restrict(&x), restrict(&y));
            let d = Rep::new(&g, RepKind::Density(3));
            let br = g.bracket(&x, &y);
            let (a, b) = (d.matrix_of(&x), d.matrix_of(&y));
            prop_assert_eq!(d.matrix_of(&br).to_dense(), a.mul(&b).sub(&b.mul(&a)).to_dense());
        }
    }
}
