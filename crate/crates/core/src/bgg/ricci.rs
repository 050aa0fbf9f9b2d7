//! Algebraic operators of the Ricci-type compressable operators `D_i = d^W + dτ(Θ) + 2J∧`.
//!
//! Weight-shifted forms are realised as full forms with an `x` argument in front: `dτ(Θ)` maps
//! forms without `x` to `x ∧ dτ(Θ)φ` and `J∧` maps `x ∧ ψ` to `J ∧ ψ`.

use super::{insert_sign, Engine, Flavor};
use crate::error::Result;
use crate::forms::IndexSets;
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{Ring, Q};

/// `Θ̂ ∈ sp(n+2)` for a symmetric `Θ_ab`, with `Y_c = (1/(n+1))∇^eΘ_ce` and the `z` coefficient `w`
/// supplied by the caller. The `p₀` part acts on `l_{−1}` by `Θ_c^d = J^{de}Θ_ce`.
pub fn ricci_element(engine: &Engine, theta: &Matrix<Q>, y: &[Q], w: &Q) -> Result<Vec<Q>> {
    let alg = engine.algebra();
    let n = engine.n();
    let j = alg.j();
    let g = Matrix::from_fn(n, n, |d, c| (0..n).fold(Q::zero(), |acc, e| acc + j.get(d, e) * theta.get(c, e)));
    let mut v = alg.csp_embed(&g)?;
    for (c, yc) in y.iter().enumerate() {
        v[alg.idx_zb(c)] = yc.clone();
    }
    v[alg.idx_z()] = w.clone();
    Ok(v)
}

/// `Θ̂` for a parallel `Θ`: `Y = 0` and `w = (1/n)Θ_efΘ^ef`.
pub fn ricci_element_parallel(engine: &Engine, theta: &Matrix<Q>) -> Result<Vec<Q>> {
    let n = engine.n();
    let j = engine.algebra().j();
    let mut sq = Q::zero();
    for e in 0..n {
        for f in 0..n {
            for a in 0..n {
                for b in 0..n {
                    sq += theta.get(e, f) * j.get(e, a) * j.get(f, b) * theta.get(a, b);
                }
            }
        }
    }
    let w = sq / Q::from_ratio(n as i64, 1);
    ricci_element(engine, theta, &vec![Q::zero(); n], &w)
}

/// `φ ↦ x ∧ dτ(Y)φ` on full `i`-forms without `x` argument (zero on `x`-forms).
pub fn theta_action(engine: &Engine, i: usize, y: &[Q]) -> SparseMatrix<Q> {
    let src = engine.space_unchecked(Flavor::Full, i);
    let dst = engine.space_unchecked(Flavor::Full, i + 1);
    let act = engine.rep().matrix_of(y);
    let wd = src.value_dim();
    let mut t = Vec::new();
    for (si, mask) in src.sets().iter().filter(|(_, m)| m & 1 == 0) {
        let oi = dst.sets().index(mask | 1).expect("subset");
        for g in 0..wd {
            for (b, v) in act.row(g) {
                t.push((dst.index(oi, g), src.index(si, *b), v.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(dst.dim(), src.dim(), t)
}

/// `∂₂ = x ∧ dτ(x)` from forms without `x` argument to `x`-forms.
pub fn partial2_matrix(engine: &Engine, i: usize) -> SparseMatrix<Q> {
    let mut x = vec![Q::zero(); engine.algebra().dim()];
    x[engine.algebra().idx_x()] = Q::one();
    theta_action(engine, i, &x)
}

/// `Σ_{a<b} c_ab e^{X_a} ∧ e^{X_b} ∧ (·)` on full `i`-forms, applied after the map `inner` from
/// degree `i` to degree `i`.
fn wedge_two(engine: &Engine, i: usize, c: &Matrix<Q>, inner: &SparseMatrix<Q>) -> SparseMatrix<Q> {
    let src = engine.space_unchecked(Flavor::Full, i);
    let dst = engine.space_unchecked(Flavor::Full, i + 2);
    let wd = src.value_dim();
    let mut t = Vec::new();
    for (_, pm) in IndexSets::new(engine.n(), 2).iter() {
        let ab = crate::forms::bits(pm);
        let cab = c.get(ab[0], ab[1]).clone();
        if cab.is_zero() {
            continue;
        }
        let (da, db) = (1 + ab[0], 1 + ab[1]);
        for (si, mask) in src.sets().iter() {
            if mask & (1 << da) != 0 || mask & (1 << db) != 0 {
                continue;
            }
            let s = insert_sign(mask, db) * insert_sign(mask | (1 << db), da);
            let oi = dst.sets().index(mask | (1 << da) | (1 << db)).expect("subset");
            for g in 0..wd {
                t.push((dst.index(oi, g), src.index(si, g), cab.scale_ratio(s, 1)));
            }
        }
    }
    SparseMatrix::from_triplets(dst.dim(), src.dim(), t).mul(inner)
}

/// `J∧`: `x ∧ ψ ↦ J ∧ ψ` from full `(i)`-forms to `(i+1)`-forms (zero on forms without `x`).
pub fn j_wedge(engine: &Engine, i: usize) -> SparseMatrix<Q> {
    if i == 0 {
        let dst = engine.space_unchecked(Flavor::Full, 1);
        return SparseMatrix::zeros(dst.dim(), engine.space_unchecked(Flavor::Full, 0).dim());
    }
    // strip x (first position, sign +), then wedge with J
    let src = engine.space_unchecked(Flavor::Full, i);
    let low = engine.space_unchecked(Flavor::Full, i - 1);
    let wd = src.value_dim();
    let mut t = Vec::new();
    for (si, mask) in src.sets().iter().filter(|(_, m)| m & 1 == 1) {
        let li = low.sets().index(mask & !1).expect("subset");
        for g in 0..wd {
            t.push((low.index(li, g), src.index(si, g), Q::one()));
        }
    }
    let strip = SparseMatrix::from_triplets(low.dim(), src.dim(), t);
    wedge_two(engine, i - 1, engine.algebra().j(), &strip)
}

/// `Alt₂(dτ(−2JΘ)) + 2J∧dτ(Θ) + dτ(Θ)2J∧` on full `i`-forms.
pub fn ricci_identity_residual(engine: &Engine, i: usize, theta: &[Q]) -> SparseMatrix<Q> {
    let src = engine.space_unchecked(Flavor::Full, i);
    let act = engine.rep().matrix_of(theta);
    let wd = src.value_dim();
    let mut t = Vec::new();
    for si in 0..src.sets().len() {
        for g in 0..wd {
            for (b, v) in act.row(g) {
                t.push((src.index(si, g), src.index(si, *b), v.clone()));
            }
        }
    }
    let value_action = SparseMatrix::from_triplets(src.dim(), src.dim(), t);
    let minus_2j = engine.algebra().j().scale(&Q::from_ratio(-2, 1));
    let alt = wedge_two(engine, i, &minus_2j, &value_action);
    let two = Q::from_ratio(2, 1);
    let a = j_wedge(engine, i + 1).mul(&theta_action(engine, i, theta)).scale(&two);
    let b = theta_action(engine, i + 1, theta).mul(&j_wedge(engine, i)).scale(&two);
    alt.add(&a).add(&b)
}
