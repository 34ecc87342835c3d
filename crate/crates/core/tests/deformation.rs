use ccch_core::deformation::*;
use ccch_core::phase::{im_theta, sigma_intervals, stationary_points};
use ccch_core::scattering::{default_sigma_max, precompute_geometry, scattering_coeffs, sech_profile, DiscreteSpectrum};
use ccch_core::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

const SIGMA_MAX: f64 = 5.0;

/// r(s) = 0.5 e^{-sigma^2} e^{i sigma} on s > 0, sigma = ln s, extended by r(-1/s) = -r(s).
fn profile(s: f64) -> C {
    let f = |sig: f64| C::from_polar(0.5 * (-sig * sig).exp(), sig);
    if s > 0.0 {
        f(s.ln())
    } else {
        -f(-(-s).ln())
    }
}

fn reflection() -> FnReflection<f64, fn(f64) -> C> {
    FnReflection { f: profile as fn(f64) -> C, sigma_max: SIGMA_MAX }
}

/// int_Sigma nu(s)/(s - z) ds by composite Simpson in sigma = ln|s| on every interval,
/// clipped to the support.
fn oracle_cauchy(refl: &dyn Reflection<f64>, xi: f64, z: C) -> C {
    let portrait = stationary_points(xi).unwrap();
    let (lo, hi) = refl.support();
    let mut total = C::new(0.0, 0.0);
    for (a, b) in sigma_intervals(&portrait) {
        for sign in [1.0, -1.0] {
            // the part of (a, b) with sign(s) = sign, as a sigma range
            let (pa, pb) = if sign > 0.0 { (a.max(lo), b.min(hi)) } else { ((-b).max(lo), (-a).min(hi)) };
            if pb <= pa {
                continue;
            }
            let (sa, sb) = (pa.ln(), pb.ln());
            let n = 20_000;
            let h = (sb - sa) / n as f64;
            let mut acc = C::new(0.0, 0.0);
            for j in 0..=n {
                let sig = sa + j as f64 * h;
                let s = sign * sig.exp();
                let w = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * nu(refl, s) * sig.exp() / (C::new(s, 0.0) - z);
            }
            total += acc * h / 3.0;
        }
    }
    total
}

#[test]
fn blaschke_only_value_at_i() {
    let refl = NoReflection;
    let portrait = stationary_points(-0.5).unwrap();
    let sf = ScalarFactor::new(&refl, &portrait, vec![C::new(0.0, 2.0)]).unwrap();
    assert!((sf.t_at_i - C::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn zero_at_pole_and_pole_at_conjugate() {
    let refl = reflection();
    let portrait = stationary_points(-0.5).unwrap();
    let p = C::new(0.6, 0.9);
    let sf = ScalarFactor::new(&refl, &portrait, vec![p, -p.inv()]).unwrap();
    assert!(sf.t(p).unwrap().norm() < 1e-14);
    assert!(matches!(sf.t(p.conj()), Err(Error::PoleEvaluation(_))));
}

#[test]
fn delta_at_i_matches_simpson_oracle() {
    let refl = reflection();
    for xi in [-2.0, -0.5, 0.05, 1.0] {
        let portrait = stationary_points(xi).unwrap();
        let sf = ScalarFactor::new(&refl, &portrait, vec![]).unwrap();
        let want = (-C::i() * oracle_cauchy(&refl, xi, C::i())).exp();
        assert!((sf.t_at_i - want).norm() < 1e-11, "xi = {xi}: {} vs {want}", sf.t_at_i);
        let z = C::new(0.4, 0.3);
        let want = (-C::i() * oracle_cauchy(&refl, xi, z)).exp();
        assert!((sf.delta(z).unwrap() - want).norm() < 1e-10, "xi = {xi}");
    }
}

#[test]
fn reference_datum_t_at_i() {
    let datum = precompute_geometry(&sech_profile(0.2, 0.5, 30.0, 4096), 30.0).unwrap();
    let table = scattering_coeffs(&datum, 1400, default_sigma_max(&datum)).unwrap();
    let portrait = stationary_points(-0.5).unwrap();
    let sf = ScalarFactor::new(&table, &portrait, vec![]).unwrap();
    let want = (-C::i() * oracle_cauchy(&table, -0.5, C::i())).exp();
    assert!((sf.t_at_i - want).norm() < 1e-10);
    assert!((sf.t_at_i - C::new(0.947713972702, -0.057046337294)).norm() < 1e-9);
}

#[test]
fn sigma0_vanishes() {
    let refl = reflection();
    for xi in [-2.0, -0.5, 0.05] {
        assert!(sigma0(&refl, &stationary_points(xi).unwrap()).unwrap().norm() < 1e-12);
    }
}

#[test]
fn endpoints_are_one() {
    let refl = reflection();
    for xi in [-2.0, -0.5, 0.05] {
        let p = C::new(0.3, 1.7);
        let sf = ScalarFactor::new(&refl, &stationary_points(xi).unwrap(), vec![p, -p.inv()]).unwrap();
        assert!((sf.t(C::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-9);
        assert!((sf.t(C::new(0.0, 1e9)).unwrap() - 1.0).norm() < 1e-8);
    }
}

#[test]
fn boundary_ratio_is_one_plus_r_squared() {
    let refl = reflection();
    for xi in [-2.0, -0.5, 0.05] {
        let sf = ScalarFactor::new(&refl, &stationary_points(xi).unwrap(), vec![]).unwrap();
        for piece in &sf.pieces {
            for frac in [0.1, 0.5, 0.9] {
                let x = piece.a + (piece.b - piece.a) * frac;
                let want = 1.0 + refl.r(x).norm_sqr();
                assert!((sf.boundary_ratio(x).unwrap() - want).norm() < 1e-9, "xi = {xi}, x = {x}");
            }
        }
    }
}

#[test]
fn on_axis_requires_side() {
    let refl = reflection();
    let sf = ScalarFactor::new(&refl, &stationary_points(-2.0).unwrap(), vec![]).unwrap();
    assert!(matches!(sf.t(C::new(0.7, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn local_power_approximates_t_near_stationary_points() {
    let refl = reflection();
    for xi in [-0.5, 0.05] {
        let portrait = stationary_points(xi).unwrap();
        let sf = ScalarFactor::new(&refl, &portrait, vec![]).unwrap();
        for (k, &xk) in portrait.points.iter().enumerate() {
            let eta = portrait.eta_signs[k];
            let err = |eps: f64| {
                let z = C::new(xk, 0.0) + C::from_polar(eps, 1.0);
                (sf.t(z).unwrap() - sf.local_power(k, eta, xk, z)).norm()
            };
            let (e2, e5) = (err(1e-2), err(1e-5));
            assert!(e5 < 1e-3 && e5 < 0.05 * e2.max(1e-12) + 1e-9, "xi = {xi}, k = {k}: {e2:e} {e5:e}");
            assert!((sf.t_j[k].norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn partition_rules() {
    let p = C::new(0.6, 0.9);
    let spec = DiscreteSpectrum { poles: vec![p, -p.inv()], norming: vec![C::new(1.0, 0.0); 2] };
    let all = partition_spectrum(&spec, -0.5, f64::INFINITY).unwrap();
    assert_eq!(all.lambda, vec![0, 1]);
    assert!(all.rho0.is_infinite());
    let v = im_theta(p, -0.5).unwrap();
    assert!(matches!(partition_spectrum(&spec, -0.5, v.abs()), Err(Error::ThresholdCollision { .. })));
    let none = partition_spectrum(&spec, -0.5, 1e-6).unwrap();
    assert!(none.lambda.is_empty());
    assert_eq!(none.nabla.len() + none.delta.len(), 2);
    assert!(matches!(partition_spectrum(&spec, -0.5, 0.0), Err(Error::InvalidInput(_))));
}

#[test]
fn no_reflection_gives_pure_blaschke() {
    let refl = NoReflection;
    let p = C::new(-0.4, 1.3);
    let sf = ScalarFactor::new(&refl, &stationary_points(-0.5).unwrap(), vec![p]).unwrap();
    let z = C::new(0.3, 0.7);
    assert!((sf.t(z).unwrap() - (z - p) / (z - p.conj())).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t_symmetries(ln_mod in -1.5f64..1.5, arg in 0.05f64..3.09, lower in any::<bool>(), which in 0usize..3) {
        let refl = reflection();
        let xi = [-2.0, -0.5, 0.05][which];
        let p = C::new(0.6, 0.9);
        let sf = ScalarFactor::new(&refl, &stationary_points(xi).unwrap(), vec![p, -p.inv()]).unwrap();
        let z = C::from_polar(ln_mod.exp(), if lower { -arg } else { arg });
        for q in [p, -p.inv()] {
            prop_assume!((z - q).norm() > 0.05 && (z - q.conj()).norm() > 0.05);
        }
        let tz = sf.t(z).unwrap();
        prop_assert!((tz - sf.t(-z.inv()).unwrap()).norm() < 1e-9 * (1.0 + tz.norm()));
        prop_assert!((tz * sf.t(z.conj()).unwrap().conj() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn nu_is_nonpositive(s in -50.0f64..50.0) {
        prop_assume!(s != 0.0);
        prop_assert!(nu(&reflection(), s) <= 0.0);
    }
}
