//! Form spaces, Lie algebra differentials and codifferentials.
//!
//! Full forms are `Λ^i g_−^* ⊗ W` with `g_− = span(x, X_0, …, X_{n−1})`. Direction `0` is `x` and
//! direction `1 + a` is `X_a`, which are also their algebra basis indices. A basis form is a sorted
//! direction set together with a module basis vector; its index is `set · dim W + value`.
//!
//! The `L` flavours live inside `Λ^i (l/p)^* ⊗ V` ("raw" coordinates) as the image of the projector
//! `r₀`. Their operators are raw-to-raw matrices that vanish on the complement of `L`.
//!
//! Sign conventions: `∂` is the Chevalley–Eilenberg differential of `g_−` (action terms carry
//! `(−1)^{k+1}` for the `k`-th argument counted from 1). `∂*` on `m`-forms is `m` times the Kostant
//! codifferential under `g_−^* ≅ p₊`, `X_a ↦ Z^a`, `x ↦ 2z`.

mod hodge;
mod ricci;
mod section;
mod splitting;
mod weights;

pub use hodge::{rational_eigen, EigenBlock, Hodge};
pub use ricci::{j_wedge, partial2_matrix, ricci_element, ricci_element_parallel, ricci_identity_residual, theta_action};
pub use section::{alt2, csp_section, curvature_residual, poly_bracket, rtilde, wedge_direction, DerivativeData, Geometry, PolyCoords, PolyVec};
pub use splitting::{bgg_operator, check_compressable, splitting_operator, CompressCheck, Splitting};
pub use weights::{dynkin_label, highest_weights, weyl_dimension, HighestWeight};

use crate::error::{AcafError, Result};
use crate::forms::{bits, sort_sign, trace_projector, IndexSets};
use crate::lie::{GradedAlgebra, Rep, RepKind};
use crate::linalg::SparseMatrix;
use crate::scalar::{Ring, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `Λ^i g_−^* ⊗ W`.
    Full,
    /// `L^i(V)`: forms on `l_{−1}` only.
    LV,
    /// `L^i(V[2])`: forms with one `x` argument, placed first.
    LV2,
}

/// A basis-indexed form space.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub flavor: Flavor,
    pub degree: usize,
    sets: IndexSets,
    /// Module basis indices (in `W`) of the value basis.
    vals: Vec<usize>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.sets.len() * self.vals.len()
    }

    pub fn sets(&self) -> &IndexSets {
        &self.sets
    }

    pub fn value_dim(&self) -> usize {
        self.vals.len()
    }

    pub fn index(&self, set: usize, val: usize) -> usize {
        set * self.vals.len() + val
    }

    /// `(direction mask, value position)` of a basis index.
    pub fn decode(&self, i: usize) -> (u32, usize) {
        (self.sets.mask(i / self.vals.len()), i % self.vals.len())
    }

    /// `W` index of the value basis vector at position `p`.
    pub fn value(&self, p: usize) -> usize {
        self.vals[p]
    }

    /// Direction mask of the corresponding full form.
    pub fn full_mask(&self, mask: u32) -> u32 {
        match self.flavor {
            Flavor::Full => mask,
            Flavor::LV => mask << 1,
            Flavor::LV2 => (mask << 1) | 1,
        }
    }
}

/// Lie algebra, representation and tractor-like subspace `V ⊆ W`.
#[derive(Clone, Debug)]
pub struct Engine {
    alg: GradedAlgebra,
    rep: Rep,
    v: Vec<usize>,
    /// Per position in `V`: whether it lies in the complement `V'` of `Ker dτ(p₂)`.
    v_comp: Vec<bool>,
}

impl Engine {
    /// The standard tractor case `V = W = T`.
    pub fn standard(n: usize) -> Result<Self> {
        let alg = GradedAlgebra::build(n)?;
        let rep = Rep::new(&alg, RepKind::Standard);
        let v = (0..rep.dim()).collect();
        Engine::with_subspace(alg, rep, v)
    }

    /// The adjoint case `W = sp(n+2)`, `V = l`.
    pub fn adjoint(n: usize) -> Result<Self> {
        let alg = GradedAlgebra::build(n)?;
        let rep = Rep::new(&alg, RepKind::Adjoint);
        let v = (1..alg.dim()).collect();
        Engine::with_subspace(alg, rep, v)
    }

    /// `V` spanned by the given module basis vectors; it must be `p`-invariant.
    pub fn with_subspace(alg: GradedAlgebra, rep: Rep, v: Vec<usize>) -> Result<Self> {
        let inside: Vec<bool> = (0..rep.dim()).map(|b| v.contains(&b)).collect();
        for i in (0..alg.dim()).filter(|&i| alg.grading(i) >= 0) {
            let m = rep.matrix(i);
            for &b in &v {
                if m.column(b).iter().enumerate().any(|(r, c)| !c.is_zero() && !inside[r]) {
                    return Err(AcafError::Input("value subspace is not p-invariant".into()));
                }
            }
        }
        let (_, comp) = rep.kernel_p2_split(&alg, &v)?;
        let v_comp = v.iter().map(|b| comp.contains(b)).collect();
        Ok(Engine { alg, rep, v, v_comp })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn max_degree(&self, flavor: Flavor) -> usize {
        match flavor {
            Flavor::Full => self.n() + 1,
            _ => self.n(),
        }
    }

    pub fn space(&self, flavor: Flavor, i: usize) -> Result<FormSpace> {
        if i > self.max_degree(flavor) {
            return Err(AcafError::Input(format!("form degree {i} out of range for {flavor:?}")));
        }
        Ok(self.space_unchecked(flavor, i))
    }

    pub(crate) fn space_unchecked(&self, flavor: Flavor, i: usize) -> FormSpace {
        match flavor {
            Flavor::Full => FormSpace { flavor, degree: i, sets: IndexSets::new(self.n() + 1, i), vals: (0..self.rep.dim()).collect() },
            _ => FormSpace { flavor, degree: i, sets: IndexSets::new(self.n(), i), vals: self.v.clone() },
        }
    }

    /// Homogeneity of a basis form: `x` arguments count 2, `X_a` arguments 1, plus the
    /// `dτ(E)`-eigenvalue of the value.
    pub fn homogeneity(&self, space: &FormSpace, i: usize) -> i32 {
        let (mask, p) = space.decode(i);
        let full = space.full_mask(mask);
        let args = full.count_ones() as i32 + (full & 1) as i32;
        args + self.rep.grade(space.value(p))
    }

    /// `dτ(A_d)` for the direction `d` of `g_−`.
    fn direction_action(&self, d: usize) -> &SparseMatrix<Q> {
        self.rep.matrix(d)
    }

    /// `∂: Λ^i g_−^* ⊗ W → Λ^{i+1}`.
    pub fn partial_full(&self, i: usize) -> SparseMatrix<Q> {
        let src = self.space_unchecked(Flavor::Full, i);
        let dst = self.space_unchecked(Flavor::Full, i + 1);
        let dirs = self.n() + 1;
        let wd = self.rep.dim();
        let cd = self.alg.bracket_dual();
        let mut t = Vec::new();
        for (si, mask) in src.sets.iter() {
            for d in (0..dirs).filter(|d| mask & (1 << d) == 0) {
                let out = mask | (1 << d);
                let pos = (out & ((1 << d) - 1)).count_ones();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let oi = dst.sets.index(out).unwrap();
                let act = self.direction_action(d);
                for g in 0..wd {
                    for (b, v) in act.row(g) {
                        t.push((dst.index(oi, g), src.index(si, *b), v.scale_ratio(sign, 1)));
                    }
                }
            }
            // bracket terms: φ(x, R) feeds pairs {X_a, X_b} outside R
            if mask & 1 == 1 {
                let rest = mask & !1;
                for a in 0..self.n() {
                    for b in a + 1..self.n() {
                        let c = cd.get(a, b);
                        let (da, db) = (1 + a, 1 + b);
                        if c.is_zero() || rest & (1 << da) != 0 || rest & (1 << db) != 0 {
                            continue;
                        }
                        let out = rest | (1 << da) | (1 << db);
                        let k = (out & ((1 << da) - 1)).count_ones();
                        let l = (out & ((1 << db) - 1)).count_ones();
                        let sign = if (k + l) % 2 == 0 { 1 } else { -1 };
                        let oi = dst.sets.index(out).unwrap();
                        for g in 0..wd {
                            t.push((dst.index(oi, g), src.index(si, g), c.scale_ratio(sign, 1)));
                        }
                    }
                }
            }
        }
        SparseMatrix::from_triplets(dst.dim(), src.dim(), t)
    }

    /// `∂*: Λ^i g_−^* ⊗ W → Λ^{i−1}`; the zero map out of degree 0.
    pub fn codiff_full(&self, i: usize) -> SparseMatrix<Q> {
        let src = self.space_unchecked(Flavor::Full, i);
        if i == 0 {
            return SparseMatrix::zeros(0, src.dim());
        }
        let dst = self.space_unchecked(Flavor::Full, i - 1);
        let wd = self.rep.dim();
        let m = i as i64;
        let z = self.alg.idx_z();
        let mut t = Vec::new();
        for (si, mask) in src.sets.iter() {
            let el = bits(mask);
            for (k0, &j) in el.iter().enumerate() {
                let k = k0 + 1;
                let out = mask & !(1 << j);
                let oi = dst.sets.index(out).unwrap();
                let sign = if k % 2 == 0 { m } else { -m };
                // Ẑ^0 = 2z, Ẑ^{1+a} = Z^a
                let (act, f) = if j == 0 { (self.rep.matrix(z), 2) } else { (self.rep.matrix(self.alg.idx_zb(j - 1)), 1) };
                for g in 0..wd {
                    for (b, v) in act.row(g) {
                        t.push((dst.index(oi, g), src.index(si, *b), v.scale_ratio(sign * f, 1)));
                    }
                }
            }
            for (k0, &jk) in el.iter().enumerate() {
                for (l0, &jl) in el.iter().enumerate().skip(k0 + 1) {
                    if jk == 0 {
                        continue;
                    }
                    let br = self.alg.bracket_basis(self.alg.idx_zb(jk - 1), self.alg.idx_zb(jl - 1));
                    let Some((_, c)) = br.iter().find(|(idx, _)| *idx == z) else { continue };
                    let rest = mask & !(1 << jk) & !(1 << jl);
                    if rest & 1 != 0 {
                        continue;
                    }
                    let out = rest | 1;
                    let oi = dst.sets.index(out).unwrap();
                    let sign = if (k0 + l0) % 2 == 0 { m } else { -m };
                    let coef = c.scale_ratio(sign, 2);
                    for g in 0..wd {
                        t.push((dst.index(oi, g), src.index(si, g), coef.clone()));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(dst.dim(), src.dim(), t)
    }

    /// The `P`-module action of an algebra element of grade `≥ 0` on full `i`-forms:
    /// `(Y·φ)(A…) = dτ(Y)φ(A…) − Σ_k φ(…, [Y, A_k] mod p, …)`.
    pub fn form_action_full(&self, i: usize, y: &[Q]) -> SparseMatrix<Q> {
        let sp = self.space_unchecked(Flavor::Full, i);
        let wd = self.rep.dim();
        let dirs = self.n() + 1;
        let val = self.rep.matrix_of(y);
        // [Y, A_d] restricted to g_−, per direction d
        let ad: Vec<Vec<(usize, Q)>> = (0..dirs)
            .map(|d| {
                let mut e = vec![Q::zero(); self.alg.dim()];
                e[d] = Q::one();
                let b = self.alg.bracket(y, &e);
                (0..dirs).filter(|&c| !b[c].is_zero()).map(|c| (c, b[c].clone())).collect()
            })
            .collect();
        let mut t = Vec::new();
        for (si, mask) in sp.sets.iter() {
            for g in 0..wd {
                for (b, v) in val.row(g) {
                    t.push((sp.index(si, g), sp.index(si, *b), v.clone()));
                }
            }
            let el = bits(mask);
            for (k, &j) in el.iter().enumerate() {
                for (c, coef) in &ad[j] {
                    let mut seq = el.clone();
                    seq[k] = *c;
                    let s = sort_sign(&seq);
                    if s == 0 {
                        continue;
                    }
                    let m2 = (mask & !(1 << j)) | (1 << c);
                    let ci = sp.sets.index(m2).unwrap();
                    for g in 0..wd {
                        t.push((sp.index(si, g), sp.index(ci, g), coef.scale_ratio(-s, 1)));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(sp.dim(), sp.dim(), t)
    }

    /// `ι`: raw `L` coordinates into full forms (degree `i`, or `i + 1` for `LV2`).
    pub fn iota(&self, flavor: Flavor, i: usize) -> SparseMatrix<Q> {
        let src = self.space_unchecked(flavor, i);
        let fd = if flavor == Flavor::LV2 { i + 1 } else { i };
        let dst = self.space_unchecked(Flavor::Full, fd);
        let t = (0..src.dim()).map(|k| {
            let (mask, p) = src.decode(k);
            let oi = dst.sets.index(src.full_mask(mask)).unwrap();
            (dst.index(oi, src.value(p)), k, Q::one())
        });
        SparseMatrix::from_triplets(dst.dim(), src.dim(), t)
    }

    /// `r`: the projection of full forms onto raw `L` coordinates.
    pub fn proj(&self, flavor: Flavor, i: usize) -> SparseMatrix<Q> {
        self.iota(flavor, i).transpose()
    }

    /// `r₀ = id − P_trace ⊗ P_{V'}` on raw coordinates.
    pub fn r0(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        let sp = self.space_unchecked(flavor, i);
        if sp.dim() == 0 {
            return Ok(SparseMatrix::zeros(0, 0));
        }
        let j = self.alg.j();
        let p = trace_projector(j, j, i).ok_or_else(|| AcafError::Structural("Lefschetz splitting failed".into()))?;
        let vd = sp.value_dim();
        let mut t = Vec::new();
        for k in 0..sp.dim() {
            t.push((k, k, Q::one()));
            let (si, pos) = (k / vd, k % vd);
            if !self.v_comp[pos] {
                continue;
            }
            for s2 in 0..sp.sets.len() {
                let c = p.get(s2, si);
                if !c.is_zero() {
                    t.push((sp.index(s2, pos), k, -c.clone()));
                }
            }
        }
        Ok(SparseMatrix::from_triplets(sp.dim(), sp.dim(), t))
    }

    fn full_degree(flavor: Flavor, i: usize) -> usize {
        if flavor == Flavor::LV2 {
            i + 1
        } else {
            i
        }
    }

    /// `∂₀ = r ∂ ι` without the `r₀` projections.
    pub fn partial0(&self, flavor: Flavor, i: usize) -> SparseMatrix<Q> {
        let fd = Self::full_degree(flavor, i);
        self.proj(flavor, i + 1).mul(&self.partial_full(fd)).mul(&self.iota(flavor, i))
    }

    /// `∂*₀ = r ∂* ι` without the `r₀` projections.
    pub fn codiff0(&self, flavor: Flavor, i: usize) -> SparseMatrix<Q> {
        let src = self.space_unchecked(flavor, i);
        if i == 0 {
            return SparseMatrix::zeros(0, src.dim());
        }
        let fd = Self::full_degree(flavor, i);
        self.proj(flavor, i - 1).mul(&self.codiff_full(fd)).mul(&self.iota(flavor, i))
    }

    /// `∂ = r₀ r ∂ ι ι₀` on `L^i`.
    pub fn partial_l(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        Ok(self.r0(flavor, i + 1)?.mul(&self.partial0(flavor, i)).mul(&self.r0(flavor, i)?))
    }

    /// `∂* = r₀ r ∂* ι ι₀` on `L^i`.
    pub fn codiff_l(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        if i == 0 {
            return Ok(SparseMatrix::zeros(0, self.space_unchecked(flavor, 0).dim()));
        }
        Ok(self.r0(flavor, i - 1)?.mul(&self.codiff0(flavor, i)).mul(&self.r0(flavor, i)?))
    }

    /// `∂` for the flavour (full forms need no projections).
    pub fn differential(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        match flavor {
            Flavor::Full => Ok(self.partial_full(i)),
            _ => self.partial_l(flavor, i),
        }
    }

    /// `∂*` for the flavour.
    pub fn codifferential(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        match flavor {
            Flavor::Full => Ok(self.codiff_full(i)),
            _ => self.codiff_l(flavor, i),
        }
    }

    /// Projector onto the subspace of the flavour (`r₀`, or the identity for full forms).
    pub fn membership(&self, flavor: Flavor, i: usize) -> Result<SparseMatrix<Q>> {
        match flavor {
            Flavor::Full => Ok(SparseMatrix::identity(self.space_unchecked(flavor, i).dim())),
            _ => self.r0(flavor, i),
        }
    }

    /// Dimension of `L^i` (or of the full space).
    pub fn l_dim(&self, flavor: Flavor, i: usize) -> Result<usize> {
        Ok(self.membership(flavor, i)?.rank())
    }
}

/// Sign `(−1)^{pos}` for inserting direction `d` into `mask`, `pos` the number of smaller elements.
pub(crate) fn insert_sign(mask: u32, d: usize) -> i64 {
    if (mask & ((1u32 << d) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests;
