use ccch_core::scattering::*;
use ccch_core::soliton::{profile_refined, SolitonData};
use ccch_core::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn sech_datum(amp: f64, v: f64, l: f64, n: usize) -> InitialDatum<f64> {
    precompute_geometry(&sech_profile(amp, v, l, n), l).unwrap()
}

/// K = int (sqrt(1 + |m|^2) - 1) dx with m = A e^{ivx} sech x (v^2 + 2 sech^2 x + 2 i v tanh x),
/// by composite Simpson on a fine grid.
fn oracle_k(amp: f64, v: f64, l: f64) -> f64 {
    let n = 200_000;
    let h = 2.0 * l / n as f64;
    let f = |x: f64| {
        let s = 1.0 / x.cosh();
        let m = C::new(v * v + 2.0 * s * s, 2.0 * v * x.tanh()) * (amp * s);
        (1.0 + m.norm_sqr()).sqrt() - 1.0
    };
    let mut acc = f(-l) + f(l);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(-l + j as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn k_total_matches_closed_form_m() {
    for (amp, v) in [(0.2, 0.5), (0.7, -1.2)] {
        let d = sech_datum(amp, v, 30.0, 4096);
        let k = oracle_k(amp, v, 30.0);
        assert!((d.k_total - k).abs() < 1e-10 * (1.0 + k), "{} vs {k}", d.k_total);
    }
}

#[test]
fn a_at_i_is_exp_of_minus_half_k() {
    let d = sech_datum(0.6, -1.0, 30.0, 4096);
    let want = (-0.5 * oracle_k(0.6, -1.0, 30.0)).exp();
    assert!((d.a(C::i()).unwrap() - want).norm() < 1e-9);
    // the mean-value property of a about i uses only off-centre sweeps
    let mean = (0..32)
        .map(|k| d.a(C::i() + C::from_polar(0.1, std::f64::consts::TAU * k as f64 / 32.0)).unwrap())
        .sum::<C>()
        / 32.0;
    assert!((mean - want).norm() < 1e-9 * want);
}

#[test]
fn zero_datum_is_reflectionless() {
    let d = precompute_geometry(&vec![C::new(0.0, 0.0); 512], 20.0).unwrap();
    for z in [0.3, 1.0, -2.5] {
        let p = scatter_point(&d, C::new(z, 0.0)).unwrap();
        assert!((p.a - 1.0).norm() < 1e-12);
        assert!(p.b.norm() < 1e-12 && p.r.norm() < 1e-12);
    }
}

#[test]
fn rejects_bad_input() {
    let u = sech_profile(1.0, 0.0, 5.0, 512);
    assert!(matches!(precompute_geometry(&u, 5.0), Err(Error::DecayViolation { .. })));
    assert!(matches!(precompute_geometry(&sech_profile(1.0, 0.0, 30.0, 255), 30.0), Err(Error::InvalidInput(_))));
    let d = sech_datum(0.2, 0.5, 30.0, 1024);
    assert!(matches!(scatter_point(&d, C::new(0.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn fourth_order_convergence() {
    let z = C::new(2.0, 0.0);
    let reference = scatter_point(&sech_datum(0.5, 0.7, 30.0, 16384), z).unwrap().r;
    let err = |n: usize| (scatter_point(&sech_datum(0.5, 0.7, 30.0, n), z).unwrap().r - reference).norm();
    let (e1, e2) = (err(512), err(1024));
    let order = (e1 / e2).log2();
    assert!(order > 3.5 && order < 4.6, "observed order {order}");
}

#[test]
fn scattering_matrix_is_x_independent() {
    let d = sech_datum(0.5, 0.7, 30.0, 2048);
    let z = C::new(0.8, 0.0);
    let (x, mm, mp) = jost_matrices(&d, z).unwrap();
    let s0 = scattering_matrix_at(x[0], z, &mm[0], &mp[0]).unwrap();
    for j in [100, 512, 900] {
        let s = scattering_matrix_at(x[j], z, &mm[j], &mp[j]).unwrap();
        assert!((s - s0).max_abs() < 1e-10, "node {j}");
    }
    let p = scatter_point(&d, z).unwrap();
    assert!((s0[(0, 0)] - p.s11).norm() < 1e-10);
    assert!((s0[(1, 0)] - p.s21).norm() < 1e-10);
}

#[test]
fn table_identities_and_interpolation() {
    let d = sech_datum(0.4, 0.5, 30.0, 4096);
    let table = scattering_coeffs(&d, 1200, default_sigma_max(&d)).unwrap();
    assert!(table.unitarity_defect() < 1e-10);
    assert!(table.symmetry_defect() < 1e-10);
    use ccch_core::deformation::Reflection;
    for z in [0.37, -1.9, 3.3] {
        let direct = scatter_point(&d, C::new(z, 0.0)).unwrap().r;
        assert!((table.r(z) - direct).norm() < 1e-5 * (1.0 + direct.norm()), "z = {z}");
    }
}

#[test]
fn small_datum_has_no_discrete_spectrum() {
    let d = sech_datum(0.2, 0.5, 30.0, 2048);
    let spec = find_discrete_spectrum(&d, SearchBox { re_min: -3.0, re_max: 3.0, im_min: 0.02, im_max: 3.0 }).unwrap();
    assert!(spec.is_empty());
}

#[test]
fn soliton_round_trip_recovers_poles_and_norming_constants() {
    let rho = C::from_polar(1.0, 0.15 * std::f64::consts::PI);
    let data = SolitonData::paired(rho, C::new(1.0, 0.0)).unwrap();
    let (l, n) = (50.0, 4096);
    let x: Vec<f64> = (0..n).map(|j| -l + 2.0 * l * j as f64 / n as f64).collect();
    let u = profile_refined(&data, 0.0, (-75.0, 75.0), 1000, &x).unwrap();
    let d = precompute_geometry(&u, l).unwrap();
    let spec = find_discrete_spectrum(&d, SearchBox { re_min: -3.0, re_max: 3.0, im_min: 0.02, im_max: 3.0 }).unwrap();
    assert_eq!(spec.len(), 2);
    assert!(spec.pairing_defect() < 1e-8);
    for (p, c) in [(rho, C::new(1.0, 0.0)), (-rho.inv(), -C::new(1.0, 0.0) / (rho * rho))] {
        let k = (0..2).min_by(|&a, &b| (spec.poles[a] - p).norm().partial_cmp(&(spec.poles[b] - p).norm()).unwrap()).unwrap();
        assert!((spec.poles[k] - p).norm() < 1e-7, "pole {} vs {p}", spec.poles[k]);
        assert!((spec.norming[k] - c).norm() < 1e-5, "norming {} vs {c}", spec.norming[k]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn unitarity_and_symmetry(amp in 0.05f64..0.9, v in -1.5f64..1.5, s in -3.0f64..3.0, neg in any::<bool>()) {
        let d = sech_datum(amp, v, 30.0, 2048);
        let z = if neg { -s.exp() } else { s.exp() };
        let p = scatter_point(&d, C::new(z, 0.0)).unwrap();
        let q = scatter_point(&d, C::new(-1.0 / z, 0.0)).unwrap();
        prop_assert!((p.a.norm_sqr() + p.b.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((p.r + q.r).norm() < 1e-9);
    }

    #[test]
    fn a_is_symmetric_under_minus_inverse(amp in 0.05f64..0.9, v in -1.5f64..1.5, re in -2.0f64..2.0, im in 0.1f64..2.0) {
        let d = sech_datum(amp, v, 30.0, 2048);
        let z = C::new(re, im);
        let a1 = d.a(z).unwrap();
        let a2 = d.a(-z.inv()).unwrap();
        prop_assert!((a1 - a2).norm() < 1e-8 * (1.0 + a1.norm()));
    }
}
