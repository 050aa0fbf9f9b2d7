//! Dense and sparse linear algebra over a field.
//!
//! Exact fields pivot on the first nonzero entry; `f64` pivots on the largest entry and treats
//! anything below [`FLOAT_TOL`] as zero. Eigenvalue extraction is exact-only.

use crate::scalar::{Field, Ring, Q};
use num::{BigInt, Integer, Signed, ToPrimitive};

/// Pivot tolerance used by the floating-point mode.
pub const FLOAT_TOL: f64 = 1e-9;

fn negligible<F: Field>(x: &F) -> bool {
    if F::EXACT {
        x.is_zero()
    } else {
        x.magnitude() <= FLOAT_TOL
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(negligible)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_assign(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let piv = if F::EXACT {
                (r..m.rows).find(|&i| !m.get(i, c).is_zero())
            } else {
                (r..m.rows)
                    .filter(|&i| !negligible(m.get(i, c)))
                    .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()))
            };
            let Some(p) = piv else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if negligible(&f) {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if !pr.is_zero() {
                        let v = m.get(i, j).sub(&f.mul(pr));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    /// A particular solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        PseudoSolver::new(self).solve(b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// Precomputed solver for `A x = b` with a fixed `A`: reduces `[A | I]` once, then each right
/// hand side costs one matrix-vector product.
#[derive(Clone, Debug)]
pub struct PseudoSolver<F: Field> {
    transform: Matrix<F>,
    pivots: Vec<usize>,
    cols: usize,
}

impl<F: Field> PseudoSolver<F> {
    pub fn new(a: &Matrix<F>) -> Self {
        let (r, pivots_all) = a.hstack(&Matrix::identity(a.rows())).rref();
        let pivots: Vec<usize> = pivots_all.into_iter().filter(|&c| c < a.cols()).collect();
        let transform = Matrix::from_fn(a.rows(), a.rows(), |i, j| r.get(i, a.cols() + j).clone());
        PseudoSolver { transform, pivots, cols: a.cols() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Returns `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let y = self.transform.mul_vec(b);
        if y[self.pivots.len()..].iter().any(|v| !negligible(v)) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = y[i].clone();
        }
        Some(x)
    }
}

/// Sparse matrix stored as sorted rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, F::one()));
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (i, j, v) in t {
            assert!(i < rows && j < cols, "triplet out of range");
            data[i].push((j, v));
        }
        for row in &mut data {
            *row = normalize_row(std::mem::take(row));
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(m: &Matrix<F>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    t.push((i, j, m.get(i, j).clone()));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn to_dense(&self) -> Matrix<F> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, F)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|(_, v)| negligible(v)))
    }

    /// Largest absolute entry, used for residual reporting.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().map(|(_, v)| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t.push((*j, i, v.clone()));
            }
        }
        Self::from_triplets(self.cols, self.rows, t)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in sparse product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, F)> = Vec::new();
                for (k, a) in row {
                    for (j, b) in &o.data[*k] {
                        acc.push((*j, a.mul(b)));
                    }
                }
                normalize_row(acc)
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, neg: bool) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (*j, if neg { v.neg() } else { v.clone() })));
                normalize_row(r)
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| normalize_row(r.iter().map(|(j, v)| (*j, v.mul(c))).collect()))
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        acc.add_assign(&a.mul(&v[*j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            map[c] = k;
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().filter(|(j, _)| map[*j] != usize::MAX).map(|(j, v)| (map[*j], v.clone())).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Stacks vectors as columns.
    pub fn from_columns(dim: usize, cols: &[Vec<F>]) -> Self {
        let mut t = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    t.push((i, j, v.clone()));
                }
            }
        }
        Self::from_triplets(dim, cols.len(), t)
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                r
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols + o.cols, data }
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        SparseMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, self.data.iter().cloned()).rank()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        Echelon::from_rows(self.cols, self.data.iter().cloned()).nullspace()
    }

    /// A maximal linearly independent subset of the columns, as indices.
    pub fn independent_columns(&self) -> Vec<usize> {
        let t = self.transpose();
        let mut ech = Echelon::new(self.rows);
        let mut out = Vec::new();
        for (j, col) in t.data.into_iter().enumerate() {
            if ech.insert(col) {
                out.push(j);
            }
        }
        out
    }

    /// Basis (as columns) of the column space.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        self.independent_columns().into_iter().map(|j| self.column(j)).collect()
    }
}

impl SparseMatrix<Q> {
    /// Applies the matrix to a vector of ring elements (e.g. polynomial coefficients).
    pub fn apply<C: Ring>(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| {
                let mut acc = C::zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        acc.add_assign(&v[*j].scale_q(a));
                    }
                }
                acc
            })
            .collect()
    }
}

fn normalize_row<F: Field>(mut r: Vec<(usize, F)>) -> Vec<(usize, F)> {
    r.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, F)> = Vec::with_capacity(r.len());
    for (j, v) in r {
        match out.last_mut() {
            Some((lj, lv)) if *lj == j => lv.add_assign(&v),
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !negligible(v));
    out
}

/// Incremental row echelon form over sparse rows, keyed by leading column.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    cols: usize,
    rows: std::collections::BTreeMap<usize, Vec<(usize, F)>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Default::default() }
    }

    pub fn from_rows(cols: usize, rows: impl IntoIterator<Item = Vec<(usize, F)>>) -> Self {
        let mut e = Self::new(cols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, row: Vec<(usize, F)>) -> Vec<(usize, F)> {
        let mut r = normalize_row(row);
        let mut start = 0;
        loop {
            let Some(pos) = r.iter().position(|(j, _)| *j >= start) else { return r };
            let (lead, val) = r[pos].clone();
            match self.rows.get(&lead) {
                Some(p) => {
                    // pivot rows are normalized to a leading 1
                    let f = val;
                    let mut acc = r;
                    acc.extend(p.iter().map(|(j, v)| (*j, v.mul(&f).neg())));
                    r = normalize_row(acc);
                }
                None => start = lead + 1,
            }
        }
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: Vec<(usize, F)>) -> bool {
        let mut r = normalize_row(row);
        loop {
            let Some((lead, val)) = r.first().cloned() else { return false };
            match self.rows.get(&lead) {
                Some(p) => {
                    let mut acc = r;
                    acc.extend(p.iter().map(|(j, v)| (*j, v.mul(&val).neg())));
                    r = normalize_row(acc);
                }
                None => {
                    let inv = val.inv();
                    let r: Vec<_> = r.into_iter().map(|(j, v)| (j, v.mul(&inv))).collect();
                    self.rows.insert(lead, r);
                    return true;
                }
            }
        }
    }

    /// True if `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: Vec<(usize, F)>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Fully reduced pivot rows (each pivot column zero in all other rows).
    pub fn reduced(&self) -> Vec<(usize, Vec<(usize, F)>)> {
        let keys: Vec<usize> = self.rows.keys().rev().cloned().collect();
        let mut done: std::collections::BTreeMap<usize, Vec<(usize, F)>> = Default::default();
        for k in keys {
            let mut r = self.rows[&k].clone();
            // eliminate later pivot columns using already reduced rows
            loop {
                let hit = r.iter().skip(1).find(|(j, _)| done.contains_key(j)).cloned();
                let Some((j, v)) = hit else { break };
                let mut acc = r;
                acc.extend(done[&j].iter().map(|(c, w)| (*c, w.mul(&v).neg())));
                r = normalize_row(acc);
            }
            done.insert(k, r);
        }
        done.into_iter().collect()
    }

    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let red = self.reduced();
        let pivots: std::collections::BTreeSet<usize> = red.iter().map(|(k, _)| *k).collect();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (p, row) in &red {
                    if let Ok(k) = row.binary_search_by_key(&f, |e| e.0) {
                        v[*p] = row[k].1.neg();
                    }
                }
                v
            })
            .collect()
    }
}

/// Coordinates with respect to a fixed family of linearly independent vectors.
#[derive(Clone, Debug)]
pub struct Basis<F: Field> {
    dim: usize,
    vectors: Vec<Vec<F>>,
    rows: Vec<usize>,
    inv: Matrix<F>,
}

impl<F: Field> Basis<F> {
    /// Fails if the vectors are dependent.
    pub fn new(dim: usize, vectors: Vec<Vec<F>>) -> Option<Self> {
        let k = vectors.len();
        let m = SparseMatrix::from_columns(dim, &vectors);
        let rows = m.transpose().independent_columns();
        if rows.len() != k {
            return None;
        }
        let sub = Matrix::from_fn(k, k, |i, j| vectors[j][rows[i]].clone());
        let inv = sub.inverse()?;
        Some(Basis { dim, vectors, rows, inv })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[F]) -> Vec<F> {
        let sub: Vec<F> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.mul_vec(&sub)
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.coords_unchecked(v);
        let back = self.combine(&c);
        back.iter().zip(v).all(|(a, b)| negligible(&a.sub(b))).then_some(c)
    }

    pub fn combine(&self, c: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (coef, vec) in c.iter().zip(&self.vectors) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(vec) {
                if !x.is_zero() {
                    o.add_assign(&coef.mul(x));
                }
            }
        }
        out
    }
}

/// Minimal polynomial of `a` relative to the vector `v` (monic, coefficients in increasing
/// degree), found from the Krylov sequence `v, Av, A²v, …`.
pub fn krylov_min_poly(a: &SparseMatrix<Q>, v: &[Q]) -> Vec<Q> {
    let mut seq = vec![v.to_vec()];
    loop {
        let next = a.mul_vec(seq.last().unwrap());
        let m = Matrix::from_columns(v.len(), &seq);
        if let Some(c) = m.solve(&next) {
            let mut p: Vec<Q> = c.into_iter().map(|x| -x).collect();
            p.push(Q::one());
            return p;
        }
        seq.push(next);
        assert!(seq.len() <= v.len() + 1, "Krylov sequence failed to terminate");
    }
}

/// Rational roots of a polynomial with rational coefficients (increasing degree), with
/// multiplicity. Returns the roots and the leftover factor without rational roots.
pub fn rational_roots(p: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut poly = trim(p.to_vec());
    let mut roots = Vec::new();
    // zero roots first
    while poly.len() > 1 && poly[0].is_zero() {
        roots.push(Q::zero());
        poly.remove(0);
    }
    loop {
        if poly.len() <= 1 {
            break;
        }
        let ints = clear_denominators(&poly);
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut found = None;
        'search: for pnum in divisors(&a0) {
            for qden in divisors(&an) {
                for sgn in [1i64, -1] {
                    let cand = Q::new(pnum.clone() * BigInt::from(sgn), qden.clone());
                    if eval_poly(&poly, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                poly = deflate(&poly, &r);
                roots.push(r);
            }
            None => break,
        }
    }
    roots.sort();
    (roots, poly)
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn clear_denominators(p: &[Q]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    p.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(x: &BigInt) -> Vec<BigInt> {
    let v = x.to_u64().expect("root search coefficient out of range");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d != v / d {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    // synthetic division by (x - r)
    let d = p.len() - 1;
    let mut out = vec![Q::zero(); d];
    let mut carry = Q::zero();
    for i in (0..=d).rev() {
        let c = &p[i] + &carry * r;
        if i > 0 {
            out[i - 1] = c.clone();
        }
        carry = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
        let s = SparseMatrix::from_dense(&m);
        assert_eq!(s.rank(), 2);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn pseudo_solver_detects_inconsistency() {
        let m = qm(&[&[1, 1], &[2, 2]]);
        let s = PseudoSolver::new(&m);
        assert_eq!(s.rank(), 1);
        let x = s.solve(&[qi(3), qi(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![qi(3), qi(6)]);
        assert!(s.solve(&[qi(1), qi(1)]).is_none());
    }

    #[test]
    fn eigenvalues_from_krylov() {
        // diag(-6, -1, -1) in a skewed basis
        let d = qm(&[&[-6, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let p = qm(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let a = p.mul(&d).mul(&p.inverse().unwrap());
        let mp = krylov_min_poly(&SparseMatrix::from_dense(&a), &[qi(1), qi(2), qi(5)]);
        let (roots, rest) = rational_roots(&mp);
        assert_eq!(roots, vec![qi(-6), qi(-1)]);
        assert_eq!(rest.len(), 1);
        let (r, _) = rational_roots(&[q(-1, 4), qi(0), qi(1)]);
        assert_eq!(r, vec![q(-1, 2), q(1, 2)]);
    }

    #[test]
    fn basis_coordinates() {
        let b = Basis::new(3, vec![vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]]).unwrap();
        let v = b.combine(&[qi(2), qi(-3)]);
        assert_eq!(b.coords(&v).unwrap(), vec![qi(2), qi(-3)]);
        assert!(b.coords(&[qi(1), qi(0), qi(0)]).is_none());
        assert!(Basis::new(2, vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]]).is_none());
    }
}
