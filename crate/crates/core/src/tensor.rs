//! Weighted tensors over a symplectic vector space.
//!
//! Conventions: `J_ab` is the standard block form (`J_{i, n/2+i} = 1`) with weight −2, and
//! `J^{ab}` has the same entries with weight +2, so that `J_ab J^bd = −δ_a^d`. Indices are lowered
//! by `ξ_b = ξ^a J_ab` and raised by `Υ^d = J^{db} Υ_b`, contracting exactly those slots.

use crate::error::{AcafError, Result};
use crate::forms::{sort_sign, trace_projector, IndexSets};
use crate::linalg::Matrix;
use crate::scalar::{Ring, Q};
use itertools::Itertools;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    Lower,
    Upper,
}

pub use Variance::{Lower, Upper};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMove {
    Raise,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
}

/// Projector selection for [`Tensor::symmetrize_project`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Sym,
    Antisym,
    /// Removes all `J`-trace parts from slots of the declared symmetry class.
    TraceFree(SymmetryClass),
}

/// Dense tensor on `R^n` with an index-variance list and an integer density weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<C: Ring> {
    n: usize,
    variance: Vec<Variance>,
    weight: i32,
    data: Vec<C>,
}

impl<C: Ring> Tensor<C> {
    pub fn zeros(n: usize, variance: &[Variance], weight: i32) -> Self {
        let size = n.pow(variance.len() as u32);
        Tensor { n, variance: variance.to_vec(), weight, data: vec![C::zero(); size] }
    }

    pub fn from_fn(n: usize, variance: &[Variance], weight: i32, mut f: impl FnMut(&[usize]) -> C) -> Self {
        let r = variance.len();
        let size = n.pow(r as u32);
        let mut idx = vec![0usize; r];
        let mut data = Vec::with_capacity(size);
        for flat in 0..size {
            unflatten(flat, n, &mut idx);
            data.push(f(&idx));
        }
        Tensor { n, variance: variance.to_vec(), weight, data }
    }

    /// Builds from raw component data; fails if the length is not `n^rank`.
    pub fn from_data(n: usize, variance: &[Variance], weight: i32, data: Vec<C>) -> Result<Self> {
        if data.len() != n.pow(variance.len() as u32) {
            return Err(AcafError::Shape(format!(
                "expected {} components, got {}",
                n.pow(variance.len() as u32),
                data.len()
            )));
        }
        Ok(Tensor { n, variance: variance.to_vec(), weight, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn with_weight(mut self, w: i32) -> Self {
        self.weight = w;
        self
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn data(&self) -> &[C] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C> {
        self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> &C {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: C) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn at_mut(&mut self, idx: &[usize]) -> &mut C {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        let (n, r) = (self.n, self.rank());
        (0..self.data.len()).map(move |flat| {
            let mut idx = vec![0; r];
            unflatten(flat, n, &mut idx);
            idx
        })
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Tensor<D> {
        Tensor { n: self.n, variance: self.variance.clone(), weight: self.weight, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Exact zero test in exact mode; tolerance test in float mode.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|c| c.is_negligible(tol))
    }

    /// Largest coefficient magnitude, used to report residuals.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn same_shape(&self, o: &Self) {
        assert_eq!(self.n, o.n, "dimension mismatch");
        assert_eq!(self.variance, o.variance, "variance mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_shape(o);
        Tensor {
            n: self.n,
            variance: self.variance.clone(),
            weight: self.weight,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_shape(o);
        Tensor {
            n: self.n,
            variance: self.variance.clone(),
            weight: self.weight,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale_ratio(&self, p: i64, den: i64) -> Self {
        self.map(|c| c.scale_ratio(p, den))
    }

    pub fn scale_q(&self, x: &Q) -> Self {
        self.map(|c| c.scale_q(x))
    }

    /// Multiplies every component by a ring element (e.g. a scalar field).
    pub fn scale(&self, x: &C) -> Self {
        self.map(|c| c.mul(x))
    }

    /// Axis permutation with numpy semantics: output axis `i` is input axis `axes[i]`.
    pub fn permute(&self, axes: &[usize]) -> Self {
        let r = self.rank();
        assert_eq!(axes.len(), r);
        let variance: Vec<Variance> = axes.iter().map(|&a| self.variance[a]).collect();
        let mut src = vec![0; r];
        Tensor::from_fn(self.n, &variance, self.weight, |idx| {
            for (i, &a) in axes.iter().enumerate() {
                src[a] = idx[i];
            }
            self.get(&src).clone()
        })
    }

    /// Tensor product; weights add.
    pub fn outer(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&o.variance);
        let mut data = Vec::with_capacity(self.data.len() * o.data.len());
        for a in &self.data {
            for b in &o.data {
                data.push(a.mul(b));
            }
        }
        Tensor { n: self.n, variance, weight: self.weight + o.weight, data }
    }

    /// Contracts an upper slot against a lower slot. Weight is unchanged.
    pub fn contract_trace(&self, upper: usize, lower: usize) -> Result<Self> {
        if upper == lower || upper >= self.rank() || lower >= self.rank() {
            return Err(AcafError::Shape("invalid contraction slots".into()));
        }
        if self.variance[upper] != Upper {
            return Err(AcafError::VarianceMismatch { slot: upper, op: "contraction (upper slot)" });
        }
        if self.variance[lower] != Lower {
            return Err(AcafError::VarianceMismatch { slot: lower, op: "contraction (lower slot)" });
        }
        Ok(self.pair_contract(upper, lower, |i, j| if i == j { Some(1) } else { None }, 0))
    }

    /// Contracts two slots of equal variance with the symplectic form of the opposite variance,
    /// in the order given (`J^{ab} X_{..a..b..}` for lower slots). Weight shifts by ±2.
    pub fn contract_j(&self, first: usize, second: usize) -> Result<Self> {
        if first == second || first >= self.rank() || second >= self.rank() {
            return Err(AcafError::Shape("invalid contraction slots".into()));
        }
        if self.variance[first] != self.variance[second] {
            return Err(AcafError::VarianceMismatch { slot: second, op: "J contraction" });
        }
        let n = self.n;
        let dw = if self.variance[first] == Lower { 2 } else { -2 };
        Ok(self.pair_contract(first, second, |i, j| std_j(n, i, j), dw))
    }

    fn pair_contract(&self, s1: usize, s2: usize, coef: impl Fn(usize, usize) -> Option<i64>, dw: i32) -> Self {
        let r = self.rank();
        let keep: Vec<usize> = (0..r).filter(|&s| s != s1 && s != s2).collect();
        let variance: Vec<Variance> = keep.iter().map(|&s| self.variance[s]).collect();
        let n = self.n;
        let mut full = vec![0; r];
        Tensor::from_fn(n, &variance, self.weight + dw, |idx| {
            for (k, &s) in keep.iter().enumerate() {
                full[s] = idx[k];
            }
            let mut acc = C::zero();
            for i in 0..n {
                for j in 0..n {
                    if let Some(c) = coef(i, j) {
                        full[s1] = i;
                        full[s2] = j;
                        let v = self.get(&full);
                        if !v.is_zero() {
                            acc.add_assign(&v.scale_ratio(c, 1));
                        }
                    }
                }
            }
            acc
        })
    }

    /// Lowers an upper slot (`ξ_b = ξ^a J_ab`) or raises a lower slot (`Υ^d = J^{db} Υ_b`).
    pub fn adjust_index(&self, slot: usize, dir: IndexMove) -> Result<Self> {
        if slot >= self.rank() {
            return Err(AcafError::Shape(format!("slot {slot} out of range")));
        }
        let (need, new, dw) = match dir {
            IndexMove::Lower => (Upper, Lower, -2),
            IndexMove::Raise => (Lower, Upper, 2),
        };
        if self.variance[slot] != need {
            return Err(AcafError::VarianceMismatch { slot, op: "index adjustment" });
        }
        let n = self.n;
        let mut variance = self.variance.clone();
        variance[slot] = new;
        let mut src = vec![0; self.rank()];
        Ok(Tensor::from_fn(n, &variance, self.weight + dw, |idx| {
            src.copy_from_slice(idx);
            let b = idx[slot];
            let mut acc = C::zero();
            for a in 0..n {
                // lower: Σ_a T^a J_ab ; raise: Σ_a J^{ba} T_a
                let c = match dir {
                    IndexMove::Lower => std_j(n, a, b),
                    IndexMove::Raise => std_j(n, b, a),
                };
                if let Some(c) = c {
                    src[slot] = a;
                    acc.add_assign(&self.get(&src).scale_ratio(c, 1));
                }
            }
            acc
        }))
    }

    /// (Anti)symmetrization over `slots` with `1/k!` normalization, or trace-free projection.
    pub fn symmetrize_project(&self, slots: &[usize], mode: Projection) -> Result<Self> {
        if slots.iter().any(|&s| s >= self.rank()) || slots.iter().duplicates().next().is_some() {
            return Err(AcafError::Shape("invalid slot set".into()));
        }
        if let Some(&s0) = slots.first() {
            if let Some(&bad) = slots.iter().find(|&&s| self.variance[s] != self.variance[s0]) {
                return Err(AcafError::VarianceMismatch { slot: bad, op: "projection over mixed variance" });
            }
        }
        match mode {
            Projection::Sym => Ok(self.average_over(slots, false)),
            Projection::Antisym => Ok(self.average_over(slots, true)),
            Projection::TraceFree(SymmetryClass::Symmetric) => Ok(self.average_over(slots, false)),
            Projection::TraceFree(SymmetryClass::Antisymmetric) => self.primitive_part(slots),
        }
    }

    fn average_over(&self, slots: &[usize], alt: bool) -> Self {
        let k = slots.len();
        if k < 2 {
            return self.clone();
        }
        let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
        let fact = perms.len() as i64;
        let mut src = vec![0; self.rank()];
        Tensor::from_fn(self.n, &self.variance, self.weight, |idx| {
            let mut acc = C::zero();
            for p in &perms {
                src.copy_from_slice(idx);
                for (i, &pi) in p.iter().enumerate() {
                    src[slots[i]] = idx[slots[pi]];
                }
                let v = self.get(&src);
                let s = if alt { sort_sign(p) } else { 1 };
                acc.add_assign(&v.scale_ratio(s, 1));
            }
            acc.scale_ratio(1, fact)
        })
    }

    /// Antisymmetrizes over `slots` and removes the `J∧(…)` part, leaving primitive forms.
    fn primitive_part(&self, slots: &[usize]) -> Result<Self> {
        let k = slots.len();
        let alt = self.average_over(slots, true);
        if k < 2 {
            return Ok(alt);
        }
        let jm = standard_j_matrix(self.n);
        let proj = trace_projector(&jm, &jm, k)
            .ok_or_else(|| AcafError::Structural("Lefschetz splitting failed".into()))?;
        let sets = IndexSets::new(self.n, k);
        let others: Vec<usize> = (0..self.rank()).filter(|s| !slots.contains(s)).collect();
        let mut out = Tensor::zeros(self.n, &self.variance, self.weight);
        let mut full = vec![0; self.rank()];
        for rest in (0..others.len()).map(|_| 0..self.n).multi_cartesian_product() {
            for (i, &s) in others.iter().enumerate() {
                full[s] = rest[i];
            }
            let comps: Vec<C> = (0..sets.len())
                .map(|a| {
                    for (i, e) in sets.elements(a).into_iter().enumerate() {
                        full[slots[i]] = e;
                    }
                    alt.get(&full).clone()
                })
                .collect();
            for a in 0..sets.len() {
                let mut v = comps[a].clone();
                for (b, c) in comps.iter().enumerate() {
                    let p = proj.get(a, b);
                    if !p.is_zero() && !c.is_zero() {
                        v = v.sub(&c.scale_q(p));
                    }
                }
                let el = sets.elements(a);
                for perm in (0..k).permutations(k) {
                    for (i, &pi) in perm.iter().enumerate() {
                        full[slots[i]] = el[pi];
                    }
                    out.set(&full, v.scale_ratio(sort_sign(&perm), 1));
                }
            }
            if others.is_empty() {
                break;
            }
        }
        Ok(out)
    }
}

fn unflatten(mut flat: usize, n: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
}

/// Entry of the standard symplectic matrix as `Some(±1)` or `None` for zero.
pub fn std_j(n: usize, a: usize, b: usize) -> Option<i64> {
    let h = n / 2;
    if a < h && b == a + h {
        Some(1)
    } else if a >= h && b + h == a {
        Some(-1)
    } else {
        None
    }
}

/// The standard symplectic matrix as a rational matrix.
pub fn standard_j_matrix(n: usize) -> Matrix<Q> {
    Matrix::from_fn(n, n, |a, b| std_j(n, a, b).map_or(Q::zero(), |s| Q::from_ratio(s, 1)))
}

/// The fixed symplectic form in both variances.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticData {
    pub n: usize,
    pub j_lower: Tensor<Q>,
    pub j_upper: Tensor<Q>,
}

/// Builds the standard `J_ab`, `J^{ab}` and verifies `J_ab J^{bd} = −δ_a^d`.
pub fn make_standard_j(n: usize) -> Result<SymplecticData> {
    if n % 2 != 0 || n < 2 {
        return Err(AcafError::InvalidDimension { n, reason: "must be even and positive".into() });
    }
    let f = |idx: &[usize]| std_j(n, idx[0], idx[1]).map_or(Q::zero(), |s| Q::from_ratio(s, 1));
    let j_lower = Tensor::from_fn(n, &[Lower, Lower], -2, f);
    let j_upper = Tensor::from_fn(n, &[Upper, Upper], 2, f);
    let data = SymplecticData { n, j_lower, j_upper };
    if !data.check_inverse() {
        return Err(AcafError::Structural("J_ab J^bd != -delta".into()));
    }
    Ok(data)
}

impl SymplecticData {
    /// `J_ab J^{bd} + δ_a^d = 0` entry-wise.
    pub fn check_inverse(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|d| {
                let s = (0..n).fold(Q::zero(), |acc, b| acc + self.j_lower.get(&[a, b]) * self.j_upper.get(&[b, d]));
                s == if a == d { -Q::one() } else { Q::zero() }
            })
        })
    }

    pub fn lower(&self, a: usize, b: usize) -> i64 {
        std_j(self.n, a, b).unwrap_or(0)
    }

    pub fn upper(&self, a: usize, b: usize) -> i64 {
        std_j(self.n, a, b).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn smallest_block() {
        let j = make_standard_j(2).unwrap();
        assert_eq!(j.j_lower.data(), &[qi(0), qi(1), qi(-1), qi(0)]);
        assert!(make_standard_j(5).is_err());
    }

    #[test]
    fn index_positions_n6() {
        let j = make_standard_j(6).unwrap();
        assert_eq!(j.j_lower.get(&[1, 4]), &qi(1));
        assert_eq!(j.j_lower.get(&[4, 1]), &qi(-1));
        assert!((0..6).all(|a| j.j_lower.get(&[a, a]).is_zero()));
    }

    #[test]
    fn lowering_unit_vector() {
        let xi = Tensor::from_fn(6, &[Upper], 0, |i| if i[0] == 1 { qi(1) } else { qi(0) });
        let low = xi.adjust_index(0, IndexMove::Lower).unwrap();
        assert_eq!(low.weight(), -2);
        for b in 0..6 {
            assert_eq!(low.get(&[b]), &if b == 4 { qi(1) } else { qi(0) });
        }
        assert!(xi.adjust_index(0, IndexMove::Raise).is_err());
    }

    #[test]
    fn trace_of_identity() {
        let d = Tensor::from_fn(4, &[Lower, Upper], 0, |i| if i[0] == i[1] { qi(1) } else { qi(0) });
        let t = d.contract_trace(1, 0).unwrap();
        assert_eq!(t.data(), &[qi(4)]);
        assert!(d.contract_trace(0, 1).is_err());
    }

    #[test]
    fn trace_free_pair() {
        let x = Tensor::from_fn(6, &[Lower, Lower], 0, |i| qi((i[0] * 7 + i[1] * 3) as i64 % 5));
        let p = x.symmetrize_project(&[0, 1], Projection::TraceFree(SymmetryClass::Antisymmetric)).unwrap();
        assert!(p.contract_j(0, 1).unwrap().is_zero());
        let a = x.symmetrize_project(&[0, 1], Projection::Antisym).unwrap();
        let t = a.contract_j(0, 1).unwrap().data()[0].clone() / qi(6);
        let jl = make_standard_j(6).unwrap().j_lower;
        assert_eq!(p, a.sub(&jl.scale_q(&t).with_weight(0)));
    }
}
