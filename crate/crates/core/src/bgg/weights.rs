//! Highest weights of `Sp(n)`-modules of harmonic forms and the Weyl dimension formula.

use super::{Engine, Flavor, Hodge};
use crate::error::{AcafError, Result};
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{Ring, Q};
use num::ToPrimitive;
use std::collections::BTreeMap;

/// An irreducible component: highest weight in the `ε` basis, Dynkin label and multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    pub weight: Vec<i64>,
    pub label: Vec<i64>,
    /// Homogeneity of the highest weight vectors.
    pub homogeneity: i32,
    pub multiplicity: usize,
    /// Dimension from the Weyl formula.
    pub dim: u64,
}

impl HighestWeight {
    /// Dynkin label as a digit string, e.g. `"110"`.
    pub fn label_string(&self) -> String {
        self.label.iter().map(|x| x.to_string()).collect()
    }
}

/// Dynkin label of a `C_h` weight given in the `ε` basis.
pub fn dynkin_label(weight: &[i64]) -> Vec<i64> {
    let h = weight.len();
    (0..h).map(|k| if k + 1 < h { weight[k] - weight[k + 1] } else { weight[k] }).collect()
}

/// Weyl dimension formula for `C_h` with `ρ = (h, …, 1)`.
pub fn weyl_dimension(weight: &[i64]) -> u64 {
    let h = weight.len();
    let rho: Vec<i64> = (0..h).map(|i| (h - i) as i64).collect();
    let lr: Vec<i64> = weight.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = Q::one();
    let mut den = Q::one();
    let mut mul = |x: i64, y: i64| {
        num = &num * Q::from_integer(x.into());
        den = &den * Q::from_integer(y.into());
    };
    for i in 0..h {
        for j in i + 1..h {
            mul(lr[i] - lr[j], rho[i] - rho[j]);
            mul(lr[i] + lr[j], rho[i] + rho[j]);
        }
        mul(lr[i], rho[i]);
    }
    (num / den).to_integer().to_u64().unwrap_or(0)
}

/// `g`-matrices of the Cartan and positive root vectors of `sp(n)` for the standard `J`.
fn root_data(n: usize) -> (Vec<Matrix<Q>>, Vec<Matrix<Q>>) {
    let h = n / 2;
    let unit = |pairs: &[(usize, usize, i64)]| {
        let mut m = Matrix::zeros(n, n);
        for &(r, c, s) in pairs {
            let v = m.get(r, c) + Q::from_ratio(s, 1);
            m.set(r, c, v);
        }
        m
    };
    let cartan = (0..h).map(|i| unit(&[(i, i, 1), (i + h, i + h, -1)])).collect();
    let mut pos = Vec::new();
    for i in 0..h {
        for j in i + 1..h {
            pos.push(unit(&[(i, j, 1), (j + h, i + h, -1)]));
        }
        for j in i..h {
            pos.push(unit(&[(i, j + h, 1), (j, i + h, 1)]));
        }
    }
    (cartan, pos)
}

/// The `p₀`-action of a `csp(n)` matrix on raw coordinates of degree `i`.
fn raw_action(engine: &Engine, flavor: Flavor, i: usize, g: &Matrix<Q>) -> Result<SparseMatrix<Q>> {
    let y = engine.algebra().csp_embed(g)?;
    let fd = if flavor == Flavor::LV2 { i + 1 } else { i };
    let full = engine.form_action_full(fd, &y);
    Ok(engine.proj(flavor, i).mul(&full).mul(&engine.iota(flavor, i)))
}

/// Highest weights of the harmonic forms of `hodge`, with multiplicities.
pub fn highest_weights(engine: &Engine, hodge: &Hodge) -> Result<Vec<HighestWeight>> {
    let (flavor, i) = (hodge.flavor, hodge.degree);
    let n = engine.n();
    let space = engine.space(flavor, i)?;
    let dim = space.dim();
    if hodge.harmonic.is_empty() {
        return Ok(Vec::new());
    }
    let (cartan, pos) = root_data(n);
    let hs = cartan.iter().map(|g| raw_action(engine, flavor, i, g)).collect::<Result<Vec<_>>>()?;
    let weights: Vec<Vec<i64>> = (0..dim)
        .map(|k| {
            hs.iter()
                .map(|m| {
                    if m.row(k).iter().any(|(c, v)| *c != k && !v.is_zero()) {
                        return Err(AcafError::Structural("raw basis vectors are not weight vectors".into()));
                    }
                    m.get(k, k).to_integer().to_i64().ok_or_else(|| AcafError::Structural("weight out of range".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let bh = SparseMatrix::from_columns(dim, &hodge.harmonic);
    let mut result = find(engine, flavor, i, &pos, &bh, &weights, &space, false)?;
    if result.iter().any(|w| w.label.iter().any(|&x| x < 0)) {
        result = find(engine, flavor, i, &pos, &bh, &weights, &space, true)?;
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn find(
    engine: &Engine,
    flavor: Flavor,
    i: usize,
    pos: &[Matrix<Q>],
    bh: &SparseMatrix<Q>,
    weights: &[Vec<i64>],
    space: &super::FormSpace,
    negative: bool,
) -> Result<Vec<HighestWeight>> {
    let dim = space.dim();
    let mut stacked: Option<SparseMatrix<Q>> = None;
    for g in pos {
        let g = if negative { g.transpose() } else { g.clone() };
        let m = raw_action(engine, flavor, i, &g)?.mul(bh);
        stacked = Some(match stacked {
            None => m,
            Some(s) => s.vstack(&m),
        });
    }
    let coeffs = stacked.map(|s| s.nullspace()).unwrap_or_default();
    let vecs: Vec<Vec<Q>> = coeffs.iter().map(|c| bh.mul_vec(c)).collect();
    let mut groups: BTreeMap<(Vec<i64>, i32), Vec<usize>> = BTreeMap::new();
    for k in 0..dim {
        groups.entry((weights[k].clone(), engine.homogeneity(space, k))).or_default().push(k);
    }
    let mut out = Vec::new();
    for ((w, hom), idx) in groups {
        let parts: Vec<Vec<Q>> = vecs.iter().map(|v| idx.iter().map(|&k| v[k].clone()).collect()).collect();
        if parts.is_empty() {
            continue;
        }
        let r = Matrix::from_columns(idx.len(), &parts).rank();
        if r > 0 {
            let label = dynkin_label(&w);
            out.push(HighestWeight { dim: weyl_dimension(&w), weight: w, label, homogeneity: hom, multiplicity: r });
        }
    }
    Ok(out)
}
