use super::*;
use crate::bgg::{DerivativeData, Geometry};
use crate::connection::RhoTensor;
use crate::generate::{random_cf, rng_from_seed};
use crate::tensor::Lower;
use rand_chacha::ChaCha8Rng;

const N: usize = 6;

fn random_l(engine: &Engine, k: usize, rng: &mut ChaCha8Rng, deg: u32) -> Vec<Poly<Q>> {
    let dim = engine.space(Flavor::LV, k).unwrap().dim();
    let raw: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(rng, N, deg, 3, 0.15)).collect();
    engine.r0(Flavor::LV, k).unwrap().apply(&raw)
}

fn cf_data(seed: u64) -> (Connection<Q>, DerivativeData) {
    let engine = Engine::standard(N).unwrap();
    let conn = random_cf(&mut rng_from_seed(seed), N, 1);
    let data = DerivativeData::new(&engine, Geometry::new(conn.clone(), RhoTensor::zero(N))).unwrap();
    (conn, data)
}

#[test]
fn raw_coordinates_round_trip() {
    let e = Engine::standard(N).unwrap();
    let mut rng = rng_from_seed(1);
    for k in 0..=3 {
        let raw = random_l(&e, k, &mut rng, 1);
        let f = TractorForm::from_raw(&e, k, &raw).unwrap();
        assert_eq!(f.to_raw(&e).unwrap(), raw);
        assert_eq!(f.t, trace_free(f.t.clone()), "L^k has trace-free t");
    }
}

#[test]
fn codifferential_matches_the_engine_on_all_forms() {
    let e = Engine::standard(N).unwrap();
    let mut rng = rng_from_seed(2);
    for k in 1..=3 {
        let dim = e.space(Flavor::LV, k).unwrap().dim();
        let raw: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, N, 0, 4, 0.6)).collect();
        let f = TractorForm::from_raw(&e, k, &raw).unwrap();
        let engine_out = e.codiff0(Flavor::LV, k).apply(&raw);
        assert_eq!(codiff0(&f).unwrap().to_raw(&e).unwrap(), engine_out, "k = {k}");
    }
}

#[test]
fn composed_codifferential_has_coefficient_k_times_k_minus_one() {
    let e = Engine::standard(N).unwrap();
    let mut rng = rng_from_seed(3);
    for k in 2..=4 {
        let dim = e.space(Flavor::LV, k).unwrap().dim();
        let raw: Vec<Poly<Q>> = (0..dim).map(|_| Poly::random(&mut rng, N, 0, 4, 0.6)).collect();
        let f = TractorForm::from_raw(&e, k, &raw).unwrap();
        let twice = codiff0(&codiff0(&f).unwrap()).unwrap();
        let printed = codiff0_squared_printed(&f).unwrap();
        let kk = k as i64;
        let expected = printed.r.scale_ratio(kk - 1, kk + 1);
        assert_eq!(twice.r, expected, "k = {k}");
        assert!(twice.s.is_zero() && twice.t.is_zero());
    }
}

#[test]
fn tractor_differential_matches_the_engine() {
    let (conn, data) = cf_data(4);
    let e = data.engine();
    let mut rng = rng_from_seed(5);
    for k in 0..=2 {
        let raw = random_l(e, k, &mut rng, 2);
        let f = TractorForm::from_raw(e, k, &raw).unwrap();
        let ours = d_t(&conn, &f).unwrap().to_raw(e).unwrap();
        assert_eq!(ours, data.d_l(Flavor::LV, k, &raw).unwrap(), "k = {k}");
    }
    let raw = random_l(e, 0, &mut rng, 2);
    let f = TractorForm::from_raw(e, 0, &raw).unwrap();
    assert_eq!(nabla_t(&conn, &f).unwrap(), d_t(&conn, &f).unwrap());
}

#[test]
fn printed_composite_matches_the_engine() {
    let (conn, data) = cf_data(6);
    let e = data.engine();
    let mut rng = rng_from_seed(7);
    for k in 0..=2 {
        let raw = random_l(e, k, &mut rng, 2);
        let f = TractorForm::from_raw(e, k, &raw).unwrap();
        let ours = codiff_d_printed(&conn, &f).unwrap().to_raw(e).unwrap();
        let theirs = e.codiff_l(Flavor::LV, k + 1).unwrap().apply(&data.d_l(Flavor::LV, k, &raw).unwrap());
        assert_eq!(ours, theirs, "k = {k}");
    }
}

#[test]
fn square_of_the_differential_is_minus_the_printed_curvature() {
    let (conn, _) = cf_data(8);
    let e = Engine::standard(N).unwrap();
    let mut rng = rng_from_seed(9);
    for k in 0..=1 {
        let raw = random_l(&e, k, &mut rng, 1);
        let f = TractorForm::from_raw(&e, k, &raw).unwrap();
        let sq = d_t(&conn, &d_t(&conn, &f).unwrap()).unwrap();
        let printed = dt_squared_printed(&conn, &f);
        assert!(sq.r.is_zero() && sq.t.is_zero());
        assert_eq!(sq.s, printed.s.neg(), "k = {k}");
    }
}

fn flat_data() -> DerivativeData {
    let engine = Engine::standard(N).unwrap();
    DerivativeData::new(&engine, Geometry::flat(N)).unwrap()
}

fn embed(e: &Engine, k: usize, s: PolyTensor<Q>) -> Vec<Poly<Q>> {
    let mut f = TractorForm::zero(N, k);
    f.s = s.with_weight(-1);
    f.to_raw(e).unwrap()
}

#[test]
fn first_splitting_and_bgg_operator_on_the_flat_chart() {
    use crate::bgg::{bgg_operator, splitting_operator, Hodge};
    let data = flat_data();
    let e = data.engine();
    let conn = Connection::flat(N);
    let (h0, h1) = (Hodge::new(e, Flavor::LV, 0).unwrap(), Hodge::new(e, Flavor::LV, 1).unwrap());
    let mut rng = rng_from_seed(10);
    let t = Tensor::from_fn(N, &[], -1, |_| Poly::random(&mut rng, N, 4, 3, 0.1));
    let mut f = TractorForm::zero(N, 0);
    f.t = t.clone();
    let split = splitting_operator(&data, &h0, &f.to_raw(e).unwrap()).unwrap();
    assert_eq!(split.section, l0_printed(&conn, &t).unwrap().to_raw(e).unwrap());
    let b0 = bgg_operator(&data, &split, &h1).unwrap();
    assert_eq!(b0, embed(e, 1, b0_printed(&conn, &t).unwrap()));
}

#[test]
fn second_splitting_and_bgg_operator_on_the_flat_chart() {
    use crate::bgg::{bgg_operator, splitting_operator, Hodge};
    let data = flat_data();
    let e = data.engine();
    let conn = Connection::flat(N);
    let (h1, h2) = (Hodge::new(e, Flavor::LV, 1).unwrap(), Hodge::new(e, Flavor::LV, 2).unwrap());
    let mut rng = rng_from_seed(11);
    let s = Tensor::from_fn(N, &[Lower, Lower], -1, |_| Poly::random(&mut rng, N, 2, 3, 0.05))
        .symmetrize_project(&[0, 1], Projection::Sym)
        .unwrap();
    let split = splitting_operator(&data, &h1, &embed(e, 1, s.clone())).unwrap();
    assert_eq!(split.section, l1_printed(&conn, &s).unwrap().to_raw(e).unwrap());
    let b1 = bgg_operator(&data, &split, &h2).unwrap();
    assert_eq!(b1, embed(e, 2, b1_printed(&conn, &s).unwrap()));
}

#[test]
fn double_entry_with_torsion() {
    use crate::connection::build_nabla0;
    use crate::generate::random_torsion_free;
    let engine = Engine::standard(N).unwrap();
    let d = random_torsion_free(&mut rng_from_seed(12), N, 1);
    let conn = build_nabla0(&d).unwrap().nabla0;
    let data = DerivativeData::new(&engine, Geometry::new(conn.clone(), RhoTensor::zero(N))).unwrap();
    let mut rng = rng_from_seed(13);
    for k in 0..=1 {
        let raw = random_l(&engine, k, &mut rng, 1);
        let f = TractorForm::from_raw(&engine, k, &raw).unwrap();
        assert_eq!(d_t(&conn, &f).unwrap().to_raw(&engine).unwrap(), data.d_l(Flavor::LV, k, &raw).unwrap(), "k = {k}");
    }
}
