use super::*;
use crate::connection::{build_nabla0, Connection, RhoTensor};
use crate::frame::Frame;
use crate::generate::{random_torsion_free, rng_from_seed};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::scalar::{q, qi};
use crate::tensor::{Lower, Tensor, Upper};
use proptest::prelude::*;

fn random_section(rng: &mut rand_chacha::ChaCha8Rng, dim: usize, deg: u32) -> PolyVec {
    (0..dim).map(|_| Poly::random(rng, 6, deg, 3, 0.4)).collect()
}

fn harmonic_section(h: &Hodge, seed: u64, deg: u32) -> PolyVec {
    let mut rng = rng_from_seed(seed);
    let mut phi = vec![Poly::zero(); h.harmonic[0].len()];
    for v in &h.harmonic {
        let p = Poly::random(&mut rng, 6, deg, 3, 0.3);
        for (o, c) in phi.iter_mut().zip(v) {
            *o = o.add(&p.scale(c));
        }
    }
    phi
}

#[test]
fn squares_vanish_for_the_standard_representation() {
    let e = Engine::standard(6).unwrap();
    for f in [Flavor::Full, Flavor::LV, Flavor::LV2] {
        let max = e.max_degree(f);
        for i in 0..max {
            let d = e.differential(f, i).unwrap();
            let s = e.codifferential(f, i + 1).unwrap();
            if i + 1 < max {
                assert!(e.differential(f, i + 1).unwrap().mul(&d).is_zero(), "∂² {f:?} {i}");
            }
            if i >= 1 {
                assert!(e.codifferential(f, i).unwrap().mul(&s).is_zero(), "∂*² {f:?} {i}");
            }
        }
    }
}

#[test]
fn squares_vanish_for_the_adjoint_representation() {
    let e = Engine::adjoint(6).unwrap();
    for f in [Flavor::LV, Flavor::LV2] {
        for i in 0..2 {
            let d = e.differential(f, i).unwrap();
            assert!(e.differential(f, i + 1).unwrap().mul(&d).is_zero());
            let s = e.codifferential(f, i + 2).unwrap();
            assert!(e.codifferential(f, i + 1).unwrap().mul(&s).is_zero());
        }
    }
}

#[test]
fn value_subspace_must_be_invariant() {
    let alg = crate::lie::GradedAlgebra::build(6).unwrap();
    let rep = crate::lie::Rep::new(&alg, crate::lie::RepKind::Standard);
    // the bottom slot alone is not p-invariant
    assert!(Engine::with_subspace(alg, rep, vec![7]).is_err());
}

#[test]
fn r0_is_a_projector_with_primitive_image() {
    let e = Engine::standard(6).unwrap();
    for i in 0..=6 {
        let r = e.r0(Flavor::LV, i).unwrap();
        assert_eq!(r.mul(&r), r);
    }
    // L^2(T): r and s slots unrestricted, t slot primitive (15 − 1 = 14)
    assert_eq!(e.l_dim(Flavor::LV, 2).unwrap(), 15 * 7 + 14);
}

#[test]
fn homogeneity_counts_arguments_and_grade() {
    let e = Engine::standard(6).unwrap();
    let sp = e.space(Flavor::Full, 1).unwrap();
    // x ⊗ r: 2 + 1; X_0 ⊗ t: 1 − 1
    assert_eq!(e.homogeneity(&sp, sp.index(0, 0)), 3);
    assert_eq!(e.homogeneity(&sp, sp.index(1, 7)), 0);
}

#[test]
fn harmonic_dimensions_of_the_standard_tractor_forms() {
    // Sp(6) modules 000, 200, 110+100, 101+010+200, …: 1, 21, 64+6, 70+14+21, …
    let e = Engine::standard(6).unwrap();
    let dims: Vec<usize> = (0..=6).map(|k| Hodge::new(&e, Flavor::LV, k).unwrap().harmonic.len()).collect();
    assert_eq!(dims, vec![1, 21, 70, 105, 70, 21, 1]);
}

#[test]
fn laplacian_eigenvalues_match_the_slot_composites() {
    // top slot: (−1)^{k+1}(k+1)(n−k)(−1)^k; middle slot on antisymmetric s: (−1)^{k+1}(k+1)·(k+1)(−1)^k
    let n = 6i64;
    let e = Engine::standard(6).unwrap();
    for k in 0..6i64 {
        let h = Hodge::new(&e, Flavor::LV, k as usize).unwrap();
        let top = h.blocks.iter().find(|b| b.homogeneity == k as i32 + 1).unwrap();
        assert_eq!(top.eigenvalue, qi(-(k + 1) * (n - k)));
        assert_eq!(top.dim, crate::forms::IndexSets::new(6, k as usize).len());
        let mid: Vec<_> = h.blocks.iter().filter(|b| b.homogeneity == k as i32).collect();
        if (k as usize) < 3 {
            assert_eq!(mid.len(), 1);
            assert_eq!(mid[0].eigenvalue, qi(-(k + 1) * (k + 1)));
        } else {
            assert!(mid.is_empty());
        }
    }
}

#[test]
fn box_inverse_inverts_the_laplacian_on_the_image() {
    let e = Engine::standard(6).unwrap();
    let h = Hodge::new(&e, Flavor::LV, 1).unwrap();
    let star = e.codifferential(Flavor::LV, 2).unwrap();
    let lap = star.mul(&e.differential(Flavor::LV, 1).unwrap());
    for v in star.column_space().iter().take(10) {
        assert_eq!(h.box_inverse().mul_vec(&lap.mul_vec(v)), *v);
    }
    let pi = h.harmonic_projection();
    assert_eq!(pi.mul(pi), *pi);
    for v in &h.harmonic {
        assert_eq!(pi.mul_vec(v), *v);
    }
}

#[test]
fn flat_twisted_differential_squares_to_zero() {
    let e = Engine::standard(6).unwrap();
    let data = DerivativeData::new(&e, Geometry::flat(6)).unwrap();
    let mut rng = rng_from_seed(1);
    for f in [Flavor::Full, Flavor::LV] {
        let dim = e.space(f, 1).unwrap().dim();
        let phi = random_section(&mut rng, dim, 3);
        let phi = if f == Flavor::LV { e.r0(f, 1).unwrap().apply(&phi) } else { phi };
        let dd = data.d_l(f, 2, &data.d_l(f, 1, &phi).unwrap()).unwrap();
        assert!(dd.iter().all(|p| p.is_zero()), "{f:?}");
    }
}

#[test]
fn curvature_identity_without_rho() {
    let e = Engine::standard(6).unwrap();
    let mut rng = rng_from_seed(3);
    let nb = build_nabla0(&random_torsion_free(&mut rng, 6, 1)).unwrap();
    let data = DerivativeData::new(&e, Geometry::new(nb.nabla0, RhoTensor::zero(6))).unwrap();
    for i in 0..2 {
        let phi = random_section(&mut rng, e.space(Flavor::Full, i).unwrap().dim(), 1);
        let r = curvature_residual(&data, i, &phi).unwrap();
        assert!(r.iter().all(|p| p.is_zero()), "degree {i}");
    }
}

#[test]
fn rtilde_of_a_flat_chart_vanishes() {
    let e = Engine::standard(6).unwrap();
    let rt = rtilde(&e, &Geometry::flat(6)).unwrap();
    assert!(rt.iter().flatten().all(|p| p.is_zero()));
}

#[test]
fn twisted_differential_is_compressable_and_codifferential_is_not() {
    let e = Engine::standard(6).unwrap();
    let mut rng = rng_from_seed(4);
    let nb = build_nabla0(&random_torsion_free(&mut rng, 6, 1)).unwrap();
    let data = DerivativeData::new(&e, Geometry::new(nb.nabla0, RhoTensor::zero(6))).unwrap();
    for k in 0..2 {
        let c = check_compressable(&data, Flavor::LV, k, |p| data.d_l(Flavor::LV, k, p)).unwrap();
        assert!(c.holds());
    }
    let star = e.codifferential(Flavor::LV, 1).unwrap();
    let c = check_compressable(&data, Flavor::LV, 1, |p| Ok(star.apply(p))).unwrap();
    assert!(!c.holds());
}

/// `Γ_ac^d = x_3 δ_{a0} δ_c^d`: a csp connection whose trace is not closed, so `∇_i∇^i t ≠ 0`.
fn trace_connection() -> Connection<Q> {
    let gam = Tensor::from_fn(6, &[Lower, Lower, Upper], 0, |i| if i[0] == 0 && i[1] == i[2] { Poly::var(3) } else { Poly::zero() });
    Connection::new(Frame::coordinate(6), gam).unwrap()
}

#[test]
fn splitting_meets_the_tractor_eigenvalues() {
    let e = Engine::standard(6).unwrap();
    let data = DerivativeData::new(&e, Geometry::new(trace_connection(), RhoTensor::zero(6))).unwrap();
    let h0 = Hodge::new(&e, Flavor::LV, 0).unwrap();
    let s0 = splitting_operator(&data, &h0, &harmonic_section(&h0, 0, 2)).unwrap();
    assert_eq!(s0.steps, vec![vec![qi(-1)], vec![qi(-6)]]);
    let h1 = Hodge::new(&e, Flavor::LV, 1).unwrap();
    let s1 = splitting_operator(&data, &h1, &harmonic_section(&h1, 1, 2)).unwrap();
    assert_eq!(s1.steps, vec![vec![qi(-10)]]);
    // the lift is ∂*-closed and its D-image has no Im ∂* part
    let star = e.codifferential(Flavor::LV, 1).unwrap();
    let d = data.d_l(Flavor::LV, 1, &s1.section).unwrap();
    assert!(e.codifferential(Flavor::LV, 2).unwrap().apply(&d).iter().all(|p| p.is_zero()));
    assert!(star.apply(&s1.section).iter().all(|p| p.is_zero()));
}

#[test]
fn flat_bgg_sequence_is_a_complex() {
    let e = Engine::standard(6).unwrap();
    let data = DerivativeData::new(&e, Geometry::flat(6)).unwrap();
    let h: Vec<Hodge> = (0..3).map(|k| Hodge::new(&e, Flavor::LV, k).unwrap()).collect();
    let t = harmonic_section(&h[0], 7, 4);
    let b0 = bgg_operator(&data, &splitting_operator(&data, &h[0], &t).unwrap(), &h[1]).unwrap();
    assert!(b0.iter().any(|p| !p.is_zero()));
    let b1 = bgg_operator(&data, &splitting_operator(&data, &h[1], &b0).unwrap(), &h[2]).unwrap();
    assert!(b1.iter().all(|p| p.is_zero()));
}

#[test]
fn highest_weights_of_the_first_columns() {
    let e = Engine::standard(6).unwrap();
    let labels = |k: usize| {
        let h = Hodge::new(&e, Flavor::LV, k).unwrap();
        let mut v: Vec<(String, u64)> = highest_weights(&e, &h).unwrap().iter().map(|w| (w.label_string(), w.dim)).collect();
        v.sort();
        v
    };
    assert_eq!(labels(0), vec![("000".to_string(), 1)]);
    assert_eq!(labels(1), vec![("200".to_string(), 21)]);
    assert_eq!(labels(2), vec![("100".to_string(), 6), ("110".to_string(), 64)]);
}

#[test]
fn weyl_dimensions_of_small_modules() {
    // fundamental modules of Sp(6): 6, 14, 14; adjoint 21
    assert_eq!(weyl_dimension(&[1, 0, 0]), 6);
    assert_eq!(weyl_dimension(&[1, 1, 0]), 14);
    assert_eq!(weyl_dimension(&[1, 1, 1]), 14);
    assert_eq!(weyl_dimension(&[2, 0, 0]), 21);
    assert_eq!(weyl_dimension(&[2, 1, 0]), 64);
    assert_eq!(dynkin_label(&[2, 1, 0]), vec![1, 1, 0]);
}

#[test]
fn eigen_decomposition_rejects_irrational_spectra() {
    let m = Matrix::from_rows(&[vec![qi(0), qi(2)], vec![qi(1), qi(0)]]);
    assert!(rational_eigen(&m).is_err());
    let m = Matrix::from_rows(&[vec![qi(1), qi(1)], vec![qi(0), qi(1)]]);
    assert!(rational_eigen(&m).is_err());
    let m = Matrix::from_rows(&[vec![q(1, 2), qi(0)], vec![qi(3), qi(-2)]]);
    let ev: Vec<Q> = rational_eigen(&m).unwrap().into_iter().map(|(l, _)| l).collect();
    assert_eq!(ev, vec![qi(-2), q(1, 2)]);
}

fn symmetric(entries: &[i64]) -> Matrix<Q> {
    let mut k = 0;
    let mut m = Matrix::zeros(6, 6);
    for a in 0..6 {
        for b in a..6 {
            m.set(a, b, qi(entries[k]));
            m.set(b, a, qi(entries[k]));
            k += 1;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ricci_type_cancellation(entries in prop::collection::vec(-4i64..=4, 21), deg in 0usize..3) {
        let e = Engine::standard(6).unwrap();
        let theta = ricci_element_parallel(&e, &symmetric(&entries)).unwrap();
        prop_assert!(ricci_identity_residual(&e, deg, &theta).is_zero());
    }
}

#[test]
fn partial2_inserts_the_grading_direction() {
    let e = Engine::standard(6).unwrap();
    let p2 = partial2_matrix(&e, 0);
    // dτ(x) lowers the grade by two: from the r slot to the t slot
    let sp = e.space(Flavor::Full, 1).unwrap();
    assert!(!p2.get(sp.index(0, 7), 0).is_zero());
    assert_eq!(p2.nnz(), 1);
}
