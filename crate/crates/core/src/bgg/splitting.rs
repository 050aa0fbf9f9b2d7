//! Splitting operators `L_i`, BGG-like operators `B_i = π ∘ D ∘ L_i` and the compressability test.

use super::section::{DerivativeData, PolyVec};
use super::{Flavor, Hodge};
use crate::error::{AcafError, Result};
use crate::poly::Poly;
use crate::scalar::{Ring, Q};

/// Result of the splitting iteration on one section.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub flavor: Flavor,
    pub degree: usize,
    /// `□`-eigenvalues met in the lowest-homogeneity part of `∂* D φ` at each correction step.
    pub steps: Vec<Vec<Q>>,
    /// `L_i(φ)` in raw coordinates.
    pub section: PolyVec,
}

fn is_zero(v: &[Poly<Q>]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// Iterates `φ ← φ − □^{-1} ∂* D φ` until `∂* D φ = 0`.
///
/// `hodge` must be the Hodge data of degree `degree`; `phi` is a section of `L^degree` in raw
/// coordinates (normally harmonic).
pub fn splitting_operator(data: &DerivativeData, hodge: &Hodge, phi: &[Poly<Q>]) -> Result<Splitting> {
    let (flavor, i) = (hodge.flavor, hodge.degree);
    let engine = data.engine();
    if i >= engine.max_degree(flavor) {
        return Err(AcafError::Input("the top degree has no splitting operator".into()));
    }
    let space = engine.space(flavor, i)?;
    let codiff = engine.codifferential(flavor, i + 1)?;
    let mut cur = phi.to_vec();
    let mut steps = Vec::new();
    // each step raises the homogeneity of the error, which is bounded by the form degree range
    let limit = 4 * engine.n() + 8;
    for _ in 0..limit {
        let psi = codiff.apply(&data.d_l(flavor, i, &cur)?);
        if is_zero(&psi) {
            return Ok(Splitting { flavor, degree: i, steps, section: cur });
        }
        let low = (0..psi.len()).filter(|&k| !psi[k].is_zero()).map(|k| engine.homogeneity(&space, k)).min().unwrap_or(0);
        let lowest: PolyVec =
            psi.iter().enumerate().map(|(k, p)| if engine.homogeneity(&space, k) == low { p.clone() } else { Poly::zero() }).collect();
        let seen = hodge
            .eigen_projections()
            .iter()
            .filter(|(_, pr)| !is_zero(&pr.apply(&lowest)))
            .map(|(l, _)| l.clone())
            .collect();
        steps.push(seen);
        let corr = hodge.box_inverse().apply(&psi);
        if is_zero(&corr) {
            return Err(AcafError::Structural("∂* D φ has no component in Im ∂*".into()));
        }
        for (c, x) in cur.iter_mut().zip(corr) {
            *c = c.sub(&x);
        }
    }
    Err(AcafError::Structural("splitting iteration did not terminate".into()))
}

/// `B_i(φ) = π(D(L_i φ))` with `π` the harmonic projection of degree `i + 1`.
pub fn bgg_operator(data: &DerivativeData, split: &Splitting, next: &Hodge) -> Result<PolyVec> {
    if next.flavor != split.flavor || next.degree != split.degree + 1 {
        return Err(AcafError::Input("harmonic projection of the wrong degree".into()));
    }
    let d = data.d_l(split.flavor, split.degree, &split.section)?;
    Ok(next.harmonic_projection().apply(&d))
}

/// Outcome of testing whether an operator on `L^i` is compressable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressCheck {
    /// The operator maps degree `i` into degree `i + 1`.
    pub raises_degree: bool,
    /// On constant sections, the operator minus `∂` strictly raises homogeneity.
    pub graded_part_is_partial: bool,
}

impl CompressCheck {
    pub fn holds(&self) -> bool {
        self.raises_degree && self.graded_part_is_partial
    }
}

/// Applies `op` to the constant sections `r₀ e_j` of `L^i` and compares with `∂`.
pub fn check_compressable(
    data: &DerivativeData,
    flavor: Flavor,
    i: usize,
    op: impl Fn(&[Poly<Q>]) -> Result<PolyVec>,
) -> Result<CompressCheck> {
    let engine = data.engine();
    let src = engine.space(flavor, i)?;
    let dst_dim = engine.space_unchecked(flavor, i + 1).dim();
    let r0 = engine.membership(flavor, i)?;
    let partial = engine.differential(flavor, i)?;
    let dst = engine.space_unchecked(flavor, i + 1);
    let mut graded = true;
    for j in 0..src.dim() {
        let col = r0.column(j);
        if col.iter().all(|c| c.is_zero()) {
            continue;
        }
        let e: PolyVec = col.iter().map(|c| Poly::constant(c.clone())).collect();
        let out = op(&e)?;
        if out.len() != dst_dim {
            return Ok(CompressCheck { raises_degree: false, graded_part_is_partial: false });
        }
        let d0 = partial.apply(&e);
        let h = engine.homogeneity(&src, j);
        for (k, (x, y)) in out.iter().zip(&d0).enumerate() {
            if !x.sub(y).is_zero() && engine.homogeneity(&dst, k) <= h {
                graded = false;
            }
        }
    }
    Ok(CompressCheck { raises_degree: true, graded_part_is_partial: graded })
}
