//! Phase function, stationary points and the space-time region classification.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use serde::Serialize;

/// Critical values of `xi` separating the four regions.
pub const CRITICAL_XI: [f64; 3] = [-1.0, 0.0, 0.125];
/// Distance from a critical value below which `xi` is rejected.
pub const BOUNDARY_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// xi < -1, no stationary points.
    LeftNoPoint,
    /// -1 < xi <= 0, four stationary points.
    FourPoints,
    /// 0 < xi < 1/8, eight stationary points.
    EightPoints,
    /// xi > 1/8, no stationary points.
    RightNoPoint,
}

impl Region {
    pub fn point_count(self) -> usize {
        match self {
            Region::LeftNoPoint | Region::RightNoPoint => 0,
            Region::FourPoints => 4,
            Region::EightPoints => 8,
        }
    }

    pub fn has_points(self) -> bool {
        self.point_count() > 0
    }
}

/// Stationary-point data of theta(.; xi).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePortrait<T: Scalar> {
    pub xi: T,
    pub region: Region,
    /// Real stationary points, sorted descending.
    pub points: Vec<T>,
    /// Second derivative of theta at each point.
    pub theta_second: Vec<T>,
    /// eta(xi, xi_k) in {+1, -1}.
    pub eta_signs: Vec<i8>,
}

fn check_z<T: Scalar>(z: Cx<T>) -> Result<()> {
    let tol = T::c(SINGULAR_TOL);
    let i = Complex::new(T::zero(), T::one());
    if z.norm() <= tol || (z - i).norm() <= tol || (z + i).norm() <= tol {
        return Err(Error::Domain(format!("theta is singular at z = {z}")));
    }
    Ok(())
}

/// theta(z; xi) = -(1/4)(z - 1/z)[xi + 4/(z + 1/z)^2].
pub fn theta<T: Scalar>(z: Cx<T>, xi: T) -> Result<Cx<T>> {
    check_z(z)?;
    let inv = z.inv();
    let p = z - inv;
    let q = z + inv;
    let four = T::c(4.0);
    Ok(-(p * (Complex::new(xi, T::zero()) + (q * q).inv() * four)) / four)
}

/// Im theta(z; xi) from the explicit real/imaginary decomposition.
pub fn im_theta<T: Scalar>(z: Cx<T>, xi: T) -> Result<T> {
    check_z(z)?;
    let (a, b) = (z.re, z.im);
    let r2 = a * a + b * b;
    let one = T::one();
    // p = z - 1/z, q = z + 1/z written through a, b and |z|^2.
    let (pr, pi) = (a * (one - one / r2), b * (one + one / r2));
    let (qr, qi) = (a * (one + one / r2), b * (one - one / r2));
    // q^2 and |q|^4
    let (q2r, q2i) = (qr * qr - qi * qi, T::c(2.0) * qr * qi);
    let q4 = (qr * qr + qi * qi) * (qr * qr + qi * qi);
    // Im(p / q^2) = Im(p * conj(q^2)) / |q|^4
    let im_p_over_q2 = (pi * q2r - pr * q2i) / q4;
    Ok(-(xi * pi + T::c(4.0) * im_p_over_q2) / T::c(4.0))
}

fn g_of_q<T: Scalar>(q: Cx<T>, xi: T) -> Cx<T> {
    let q2 = q * q;
    let q3 = q2 * q;
    q * xi - q.inv() * T::c(4.0) + q3.inv() * T::c(32.0)
}

/// d theta / dz = -(1/(4z)) [xi q - 4/q + 32/q^3], q = z + 1/z.
pub fn theta_prime<T: Scalar>(z: Cx<T>, xi: T) -> Result<Cx<T>> {
    check_z(z)?;
    let q = z + z.inv();
    Ok(-g_of_q(q, xi) / (z * T::c(4.0)))
}

/// Closed-form second derivative of theta.
pub fn theta_second_complex<T: Scalar>(z: Cx<T>, xi: T) -> Result<Cx<T>> {
    check_z(z)?;
    let inv = z.inv();
    let p = z - inv;
    let q = z + inv;
    let q2 = q * q;
    let g = g_of_q(q, xi);
    let gp = Complex::new(xi, T::zero()) + q2.inv() * T::c(4.0) - (q2 * q2).inv() * T::c(96.0);
    Ok((g - p * gp) / (z * z * T::c(4.0)))
}

/// theta''(xi_k) on the real axis.
pub fn theta_second<T: Scalar>(xk: T, xi: T) -> Result<T> {
    Ok(theta_second_complex(Complex::new(xk, T::zero()), xi)?.re)
}

fn theta_prime_real<T: Scalar>(s: T, xi: T) -> T {
    let q = s + T::one() / s;
    -(xi * q - T::c(4.0) / q + T::c(32.0) / (q * q * q)) / (T::c(4.0) * s)
}

/// The exponent 2 i t theta(z; y/t), written in (y, t) so that t = 0 is allowed.
pub fn phase_exponent<T: Scalar>(z: Cx<T>, y: T, t: T) -> Result<Cx<T>> {
    check_z(z)?;
    let inv = z.inv();
    let p = z - inv;
    let q = z + inv;
    let i_half = Complex::new(T::zero(), T::c(0.5));
    Ok(-(i_half * p * (Complex::new(y, T::zero()) + (q * q).inv() * (t * T::c(4.0)))))
}

/// Region of xi; errors within [`BOUNDARY_TOL`] of a critical value.
pub fn region_of<T: Scalar>(xi: T) -> Result<Region> {
    let x = xi.f64();
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("xi = {x} is not finite")));
    }
    for c in CRITICAL_XI {
        if (x - c).abs() < BOUNDARY_TOL {
            return Err(Error::BoundaryXi { xi: x, critical: c, tol: BOUNDARY_TOL });
        }
    }
    Ok(if x < -1.0 {
        Region::LeftNoPoint
    } else if x <= 0.0 {
        Region::FourPoints
    } else if x < 0.125 {
        Region::EightPoints
    } else {
        Region::RightNoPoint
    })
}

/// eta(xi, xi_j) for the 1-based index j.
pub fn eta_sign(region: Region, j: usize) -> i8 {
    let odd = j % 2 == 1;
    match region {
        Region::EightPoints => {
            if odd {
                1
            } else {
                -1
            }
        }
        Region::FourPoints => {
            if odd {
                -1
            } else {
                1
            }
        }
        _ => 0,
    }
}

fn scan_positive_roots<T: Scalar>(xi: T, nodes: usize) -> Vec<T> {
    let (lo, hi) = (-3.0f64 * std::f64::consts::LN_10, 3.0f64 * std::f64::consts::LN_10);
    let grid: Vec<T> = (0..nodes)
        .map(|k| T::c((lo + (hi - lo) * k as f64 / (nodes - 1) as f64).exp()))
        .collect();
    let mut roots = Vec::new();
    let mut f_prev = theta_prime_real(grid[0], xi);
    for k in 1..nodes {
        let f_cur = theta_prime_real(grid[k], xi);
        if f_prev == T::zero() {
            roots.push(grid[k - 1]);
        } else if f_prev * f_cur < T::zero() {
            roots.push(bisect(|s| theta_prime_real(s, xi), grid[k - 1], grid[k]));
        }
        f_prev = f_cur;
    }
    roots
}

fn bisect<T: Scalar, F: Fn(T) -> T>(f: F, mut a: T, mut b: T) -> T {
    let mut fa = f(a);
    let tol = T::c(1e-12).max(T::epsilon() * T::c(4.0));
    for _ in 0..200 {
        let m = (a + b) * T::c(0.5);
        if (b - a) <= tol * m.abs().max(T::one()) {
            return m;
        }
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if fa * fm < T::zero() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    (a + b) * T::c(0.5)
}

/// Stationary points of theta(.; xi) on the real line with their local data.
///
/// Sign changes of theta' are scanned on a log-spaced grid over |z| in [1e-3, 1e3],
/// refined by bisection, and the z -> 1/z and z -> -z closures are enforced by averaging.
pub fn stationary_points<T: Scalar>(xi: T) -> Result<PhasePortrait<T>> {
    let region = region_of(xi)?;
    let expected = region.point_count() / 2;
    let mut positive = Vec::new();
    if expected > 0 {
        for nodes in [10_000usize, 100_000, 1_000_000] {
            positive = scan_positive_roots(xi, nodes);
            if positive.len() == expected {
                break;
            }
        }
        if positive.len() != expected {
            return Err(Error::NonConvergence(format!(
                "found {} positive stationary points for xi = {xi}, expected {expected}",
                positive.len()
            )));
        }
    }
    positive.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = positive.len();
    let averaged: Vec<T> = (0..n)
        .map(|i| (positive[i] + T::one() / positive[n - 1 - i]) * T::c(0.5))
        .collect();
    let mut points = averaged.clone();
    points.extend(averaged.iter().rev().map(|&p| -p));
    let theta_second = points
        .iter()
        .map(|&p| theta_second(p, xi))
        .collect::<Result<Vec<_>>>()?;
    let eta_signs = (1..=points.len()).map(|j| eta_sign(region, j)).collect();
    Ok(PhasePortrait { xi, region, points, theta_second, eta_signs })
}

/// The interval system Sigma(xi); infinite ends are returned as +-infinity.
pub fn sigma_intervals<T: Scalar>(portrait: &PhasePortrait<T>) -> Vec<(T, T)> {
    let p = &portrait.points;
    let inf = T::infinity();
    match portrait.region {
        Region::LeftNoPoint => vec![(-inf, inf)],
        Region::RightNoPoint => vec![],
        Region::FourPoints => vec![(-inf, p[3]), (p[2], p[1]), (p[0], inf)],
        Region::EightPoints => vec![(p[7], p[6]), (p[5], p[4]), (p[3], p[2]), (p[1], p[0])],
    }
}
