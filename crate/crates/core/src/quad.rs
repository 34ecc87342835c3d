//! Gauss-Legendre rules, adaptive interval quadrature and circle trapezoid sums.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

fn panel<T: Scalar, F: Fn(T) -> Cx<T>>(f: &F, a: T, b: T) -> Cx<T> {
    let (x, w) = gl20();
    let half = (b - a) * T::c(0.5);
    let mid = (b + a) * T::c(0.5);
    let mut s = Complex::new(T::zero(), T::zero());
    for (xi, wi) in x.iter().zip(w) {
        s += f(mid + half * T::c(*xi)) * T::c(*wi);
    }
    s * half
}

/// Adaptive 20-point Gauss-Legendre quadrature of a complex-valued integrand on [a, b].
///
/// A panel is accepted when it agrees with the sum of its two halves to the larger of
/// `abs_tol` (halved per level) and `rel_tol` times the magnitude of the whole integral.
pub fn adaptive<T: Scalar, F: Fn(T) -> Cx<T>>(f: &F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<Cx<T>> {
    if a == b {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let whole = panel(f, a, b);
    let mut budget = 20_000usize;
    let coarse = panel(f, a, (a + b) * T::c(0.5)) + panel(f, (a + b) * T::c(0.5), b);
    let floor = rel_tol * whole.norm().max(coarse.norm());
    let r = recurse(f, a, b, whole, abs_tol, floor, 0, &mut budget)?;
    if !(r.re.is_finite() && r.im.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite integral on [{a}, {b}]")));
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Scalar, F: Fn(T) -> Cx<T>>(
    f: &F,
    a: T,
    b: T,
    whole: Cx<T>,
    abs_tol: T,
    floor: T,
    depth: usize,
    budget: &mut usize,
) -> Result<Cx<T>> {
    let m = (a + b) * T::c(0.5);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let both = left + right;
    let err = (both - whole).norm();
    if err <= abs_tol.max(floor) || depth >= 48 {
        return Ok(both);
    }
    if *budget == 0 {
        return Err(Error::Quadrature("panel budget exhausted".into()));
    }
    *budget -= 1;
    let half_tol = abs_tol * T::c(0.5);
    Ok(recurse(f, a, m, left, half_tol, floor, depth + 1, budget)?
        + recurse(f, m, b, right, half_tol, floor, depth + 1, budget)?)
}

/// Trapezoid sum of `f(z) dz` over the counter-clockwise circle |z - c| = rho with `n` nodes.
pub fn circle_integral<T: Scalar, F: Fn(Cx<T>) -> Cx<T>>(f: F, c: Cx<T>, rho: T, n: usize) -> Cx<T> {
    let mut s = Complex::new(T::zero(), T::zero());
    let two_pi = T::c(2.0) * T::PI();
    for k in 0..n {
        let th = two_pi * T::n(k) / T::n(n);
        let e = Complex::new(th.cos(), th.sin());
        let z = c + e * rho;
        s += f(z) * e * Complex::new(T::zero(), rho);
    }
    s * (two_pi / T::n(n))
}

/// Composite Simpson weights on `n + 1` equispaced nodes (`n` even) with spacing `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n.is_multiple_of(2) && n >= 2);
    (0..=n)
        .map(|i| {
            let c = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect()
}
