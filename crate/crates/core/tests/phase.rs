use approx::assert_relative_eq;
use ccch_core::phase::*;
use ccch_core::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

/// Real stationary points from the biquadratic xi q^4 - 4 q^2 + 32 = 0 in q = z + 1/z.
fn oracle_points(xi: f64) -> Vec<f64> {
    let disc = 1.0 - 8.0 * xi;
    if disc < 0.0 {
        return vec![];
    }
    let mut out = vec![];
    for sgn in [1.0, -1.0] {
        let q2 = (2.0 + sgn * 2.0 * disc.sqrt()) / xi;
        if !(q2 > 4.0) {
            continue;
        }
        for q in [q2.sqrt(), -q2.sqrt()] {
            let root = (q * q - 4.0).sqrt();
            out.push((q + root) / 2.0);
            out.push((q - root) / 2.0);
        }
    }
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

#[test]
fn counts_match_region_table() {
    for (xi, n) in [(-2.0, 0), (-0.5, 4), (0.05, 8), (1.0, 0)] {
        assert_eq!(stationary_points(xi).unwrap().points.len(), n, "xi = {xi}");
    }
}

#[test]
fn frozen_points_at_minus_half() {
    // from the biquadratic oracle: q^2 = 4 sqrt(5) - 4
    let p = stationary_points(-0.5).unwrap();
    assert_relative_eq!(p.points[0], 1.5976542123, epsilon = 1e-9);
    assert_relative_eq!(p.points[1], 0.6259176687, epsilon = 1e-9);
}

#[test]
fn critical_values_are_rejected() {
    for xi in [-1.0, 0.0, 0.125, 0.125 + 1e-10] {
        assert!(matches!(region_of(xi), Err(Error::BoundaryXi { .. })), "xi = {xi}");
    }
}

#[test]
fn singular_points_are_rejected() {
    for z in [C::new(0.0, 0.0), C::i(), -C::i()] {
        assert!(matches!(theta(z, 0.3), Err(Error::Domain(_))));
    }
}

#[test]
fn eta_signs_alternate() {
    let p = stationary_points(-0.5).unwrap();
    assert_eq!(p.eta_signs, vec![-1, 1, -1, 1]);
    let p = stationary_points(0.05).unwrap();
    assert_eq!(p.eta_signs, vec![1, -1, 1, -1, 1, -1, 1, -1]);
}

#[test]
fn sigma_is_whole_line_left_and_empty_right() {
    let left = sigma_intervals(&stationary_points(-2.0f64).unwrap());
    assert_eq!(left.len(), 1);
    assert!(left[0].0.is_infinite() && left[0].1.is_infinite());
    assert!(sigma_intervals(&stationary_points(1.0f64).unwrap()).is_empty());
}

#[test]
fn sigma_is_where_im_theta_is_positive_above() {
    // Im theta > 0 just above Sigma, < 0 just above its complement
    for xi in [-2.0, -0.5, 0.05] {
        let p = stationary_points(xi).unwrap();
        let iv = sigma_intervals(&p);
        for k in 0..400 {
            let x = -4.0 + 8.0 * (k as f64 + 0.5) / 400.0;
            if x.abs() < 1e-3 || p.points.iter().any(|q| (q - x).abs() < 1e-3) {
                continue;
            }
            let inside = iv.iter().any(|&(a, b)| x > a && x < b);
            let v = im_theta(C::new(x, 1e-6), xi).unwrap();
            assert_eq!(v > 0.0, inside, "xi = {xi}, x = {x}, Im theta = {v}");
        }
    }
}

proptest! {
    #[test]
    fn points_match_oracle(xi in prop_oneof![-0.999f64..-0.001, 0.001f64..0.1249]) {
        let p = stationary_points(xi).unwrap();
        let o = oracle_points(xi);
        prop_assert_eq!(p.points.len(), o.len());
        for (a, b) in p.points.iter().zip(&o) {
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn reciprocal_and_negation_chains(xi in prop_oneof![-0.999f64..-0.001, 0.001f64..0.1249]) {
        let p = stationary_points(xi).unwrap();
        let n = p.points.len();
        let h = n / 2;
        for k in 0..n {
            prop_assert!((p.points[k] + p.points[n - 1 - k]).abs() < 1e-10);
        }
        for j in 0..h {
            prop_assert!((p.points[j] * p.points[h - 1 - j] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn im_theta_matches_complex_theta(re in -3.0f64..3.0, im in 0.05f64..3.0, xi in -2.0f64..2.0) {
        let z = C::new(re, im);
        prop_assume!((z - C::i()).norm() > 0.05);
        let a = im_theta(z, xi).unwrap();
        let b = theta(z, xi).unwrap().im;
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn derivatives_match_finite_differences(re in -3.0f64..3.0, im in 0.1f64..3.0, xi in -2.0f64..2.0) {
        let z = C::new(re, im);
        prop_assume!((z - C::i()).norm() > 0.3 && z.norm() > 0.3);
        let h = 1e-4;
        let d1 = (theta(z + h, xi).unwrap() - theta(z - h, xi).unwrap()) / (2.0 * h);
        let d2 = (theta_prime(z + h, xi).unwrap() - theta_prime(z - h, xi).unwrap()) / (2.0 * h);
        let p = theta_prime(z, xi).unwrap();
        let s = theta_second_complex(z, xi).unwrap();
        prop_assert!((d1 - p).norm() <= 1e-6 * (1.0 + p.norm()));
        prop_assert!((d2 - s).norm() <= 1e-6 * (1.0 + s.norm()));
    }

    #[test]
    fn phase_exponent_is_2it_theta(re in -3.0f64..3.0, im in 0.1f64..3.0, y in -50.0f64..50.0, t in 0.5f64..50.0) {
        let z = C::new(re, im);
        prop_assume!((z - C::i()).norm() > 0.05);
        let a = phase_exponent(z, y, t).unwrap();
        let b = C::new(0.0, 2.0 * t) * theta(z, y / t).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
    }
}

#[test]
fn f32_instantiation() {
    let p = stationary_points(-0.5f32).unwrap();
    assert_eq!(p.points.len(), 4);
    assert!((p.points[0] - 1.597_654_2).abs() < 1e-4);
}
