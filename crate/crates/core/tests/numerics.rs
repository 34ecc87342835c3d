use ccch_core::interp::{CubicSpline, Pchip};
use ccch_core::linalg::{lu_solve, Mat2};
use ccch_core::quad::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    for n in [5, 20] {
        let (x, w) = gauss_legendre(n);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for p in 0..2 * n {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
            let want = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-13, "n = {n}, p = {p}");
        }
    }
}

#[test]
fn adaptive_handles_endpoint_singularity_and_oscillation() {
    let r = adaptive(&|x: f64| C::new(x.sqrt(), 0.0), 0.0, 1.0, 1e-13, 1e-13).unwrap();
    assert!((r.re - 2.0 / 3.0).abs() < 1e-12);
    let r = adaptive(&|x: f64| C::from_polar(1.0, 40.0 * x), 0.0, 3.0, 1e-13, 1e-13).unwrap();
    let want = (C::from_polar(1.0, 120.0) - 1.0) / C::new(0.0, 40.0);
    assert!((r - want).norm() < 1e-12);
    assert_eq!(adaptive(&|_x: f64| C::new(1.0, 0.0), 2.0, 2.0, 1e-10, 1e-10).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn circle_integral_picks_up_residues() {
    let c = C::new(0.3, -0.2);
    let r = circle_integral(|z| (z * z).exp() / (z - c), C::new(0.0, 0.0), 1.0, 64);
    let want = C::new(0.0, std::f64::consts::TAU) * (c * c).exp();
    assert!((r - want).norm() < 1e-12);
}

#[test]
fn spline_reproduces_lines_and_converges() {
    let x: Vec<f64> = (0..11).map(|j| j as f64 * 0.3).collect();
    let s = CubicSpline::new(x.clone(), x.iter().map(|v| 2.0 * v - 1.0).collect()).unwrap();
    for t in [0.05, 1.234, 2.99] {
        assert!((s.eval(t) - (2.0 * t - 1.0)).abs() < 1e-13);
    }
    let err = |n: usize| {
        let x: Vec<f64> = (0..=n).map(|j| j as f64 * 4.0 / n as f64).collect();
        let s = CubicSpline::new(x.clone(), x.iter().map(|v| v.sin()).collect()).unwrap();
        (0..100).map(|k| 1.0 + 2.0 * k as f64 / 100.0).map(|t| (s.eval(t) - t.sin()).abs()).fold(0.0, f64::max)
    };
    let order = (err(40) / err(80)).log2();
    assert!(order > 3.5, "interior order {order}");
    assert!(CubicSpline::new(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
}

#[test]
fn pchip_preserves_monotone_data() {
    let x: Vec<f64> = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
    let y: Vec<f64> = vec![0.0, 0.1, 0.1, 2.0, 2.1, 5.0];
    let p = Pchip::new(x.clone(), y.clone()).unwrap();
    for (a, b) in x.iter().zip(&y) {
        assert!((p.eval(*a) - b).abs() < 1e-15);
    }
    let mut prev = p.eval(0.0);
    for k in 1..=500 {
        let v = p.eval(5.0 * k as f64 / 500.0);
        assert!(v >= prev - 1e-15);
        prev = v;
    }
    // flat segment stays flat
    assert!((p.eval(1.5) - 0.1).abs() < 1e-15);
}

#[test]
fn lu_solve_solves_and_rejects_singular() {
    let a: Vec<f64> = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
    let b = vec![3.0, 2.0, 4.0];
    let (x, piv): (Vec<f64>, f64) = lu_solve(a, b, 3).unwrap();
    for (v, w) in x.iter().zip([1.0, 1.0, 1.0]) {
        assert!((v - w).abs() < 1e-14);
    }
    assert!(piv > 0.1);
    assert!(lu_solve(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0], 2).is_err());
    assert!(lu_solve(vec![1.0; 3], vec![1.0; 2], 2).is_err());
}

fn series_exp(m: &Mat2<f64>) -> Mat2<f64> {
    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for k in 1..60 {
        term = (term * *m).scale(C::new(1.0 / k as f64, 0.0));
        sum = sum + term;
    }
    sum
}

proptest! {
    #[test]
    fn exp_traceless_matches_series(v in prop::array::uniform6(-1.5f64..1.5), tiny in any::<bool>()) {
        let s = if tiny { 1e-6 } else { 1.0 };
        let a = C::new(v[0], v[1]) * s;
        let m = Mat2::new(a, C::new(v[2], v[3]) * s, C::new(v[4], v[5]) * s, -a);
        let shift = C::new(0.2, -0.4);
        let want = series_exp(&m).scale(shift.exp());
        let got = m.exp_traceless(shift);
        prop_assert!((got - want).max_abs() < 1e-13 * (1.0 + want.max_abs()));
    }
}
