//! Parabolic cylinder functions D_a(z) for complex order and argument.
//!
//! Maclaurin series through Kummer's function near the origin, the large-|z| asymptotic
//! expansion (with the connection term off the right sector) far out, and Taylor
//! integration of the Weber equation in between.

use super::gamma::rgamma;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;

/// Largest |z| accepted.
pub const ENVELOPE: f64 = 50.0;
const R_SERIES: f64 = 5.5;
const R_ASYMPTOTIC: f64 = 9.0;
/// Start radius for outward integration where D_a grows along the ray.
const R_INNER: f64 = 3.0;

fn kummer<T: Scalar>(a: Cx<T>, b: T, x: Cx<T>) -> Cx<T> {
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut peak = T::one();
    for n in 0..2000 {
        let nn = T::n(n);
        term = term * (a + nn) / (b + nn) * x / (nn + T::one());
        sum += term;
        peak = peak.max(term.norm());
        if term.norm() <= T::epsilon() * T::c(1e-2) * peak.max(sum.norm()) && n > 4 {
            break;
        }
    }
    sum
}

fn series<T: Scalar>(a: Cx<T>, z: Cx<T>) -> Cx<T> {
    let one = Complex::new(T::one(), T::zero());
    let half = T::c(0.5);
    let x = z * z * half;
    let m1 = kummer(-a * half, half, x) * rgamma((one - a) * half);
    let m2 = kummer((one - a) * half, T::c(1.5), x) * rgamma(-a * half) * z * T::c(2.0).sqrt();
    let pre = (a * half * T::c(2.0).ln()).exp() * T::PI().sqrt() * (-z * z / T::c(4.0)).exp();
    pre * (m1 - m2)
}

fn asymptotic<T: Scalar>(a: Cx<T>, z: Cx<T>) -> Cx<T> {
    let one = Complex::new(T::one(), T::zero());
    let w = (z * z * T::c(2.0)).inv();
    let sum_with = |c: Cx<T>, alternating: bool| {
        let mut term = one;
        let mut sum = one;
        let mut prev = T::infinity();
        for s in 0..200 {
            let s2 = T::n(2 * s);
            let f = (c + s2) * (c + s2 + T::one()) / T::n(s + 1) * w;
            let next = if alternating { -term * f } else { term * f };
            if next.norm() >= prev || next.norm() <= T::epsilon() * T::c(1e-2) * sum.norm() {
                break;
            }
            prev = next.norm();
            term = next;
            sum += term;
        }
        sum
    };
    let lead = (-z * z / T::c(4.0)).exp() * (a * z.ln()).exp() * sum_with(-a, true);
    let arg = z.arg();
    if arg.abs() <= T::FRAC_PI_2() {
        return lead;
    }
    let sgn = if arg > T::zero() { T::one() } else { -T::one() };
    let conn = -rgamma(-a)
        * (T::c(2.0) * T::PI()).sqrt()
        * (Complex::new(T::zero(), sgn * T::PI()) * a).exp()
        * (z * z / T::c(4.0)).exp()
        * ((-a - one) * z.ln()).exp()
        * sum_with(one + a, false);
    lead + conn
}

/// (D_a, D_a') by direct evaluation, using D_a' = -z/2 D_a + a D_{a-1}.
fn direct<T: Scalar>(a: Cx<T>, z: Cx<T>, f: fn(Cx<T>, Cx<T>) -> Cx<T>) -> (Cx<T>, Cx<T>) {
    let d = f(a, z);
    let dm = f(a - T::one(), z);
    (d, -z * d * T::c(0.5) + a * dm)
}

/// Integrates w'' = (z^2/4 - a - 1/2) w from z0 to z1 with Taylor steps.
fn weber_path<T: Scalar>(a: Cx<T>, z0: Cx<T>, w0: (Cx<T>, Cx<T>), z1: Cx<T>) -> (Cx<T>, Cx<T>) {
    let len = (z1 - z0).norm();
    let steps = (len / T::c(0.25)).ceil().to_usize().unwrap_or(1).max(1);
    let h = (z1 - z0) / T::n(steps);
    let (mut y, mut yp) = w0;
    let mut z = z0;
    let order = 40;
    let mut c = vec![Complex::new(T::zero(), T::zero()); order + 2];
    for _ in 0..steps {
        let q0 = z * z / T::c(4.0) - a - T::c(0.5);
        let q1 = z * T::c(0.5);
        let q2 = Complex::new(T::c(0.25), T::zero());
        c[0] = y;
        c[1] = yp;
        for n in 0..order {
            let mut rhs = q0 * c[n];
            if n >= 1 {
                rhs += q1 * c[n - 1];
            }
            if n >= 2 {
                rhs += q2 * c[n - 2];
            }
            c[n + 2] = rhs / T::n((n + 2) * (n + 1));
        }
        let mut ny = Complex::new(T::zero(), T::zero());
        let mut nyp = ny;
        let mut hp = Complex::new(T::one(), T::zero());
        for n in 0..order + 2 {
            ny += c[n] * hp;
            if n + 1 < order + 2 {
                nyp += c[n + 1] * hp * T::n(n + 1);
            }
            hp *= h;
        }
        y = ny;
        yp = nyp;
        z += h;
    }
    (y, yp)
}

/// D_a(z) together with its z-derivative.
pub fn parabolic_cylinder_d_with_derivative<T: Scalar>(a: Cx<T>, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    let r = z.norm();
    if !(r <= T::c(ENVELOPE)) {
        return Err(Error::EnvelopeExceeded(format!("|z| = {r} > {ENVELOPE}")));
    }
    if r <= T::c(R_SERIES) {
        return Ok(direct(a, z, series));
    }
    if r >= T::c(R_ASYMPTOTIC) {
        return Ok(direct(a, z, asymptotic));
    }
    let dir = z / r;
    let arg = z.arg().abs();
    if arg <= T::FRAC_PI_4() {
        // D_a decays outward here: integrate inward from the asymptotic circle
        let z0 = dir * T::c(R_ASYMPTOTIC);
        Ok(weber_path(a, z0, direct(a, z0, asymptotic), z))
    } else if arg < T::c(0.75) * T::PI() {
        let z0 = dir * T::c(R_INNER);
        Ok(weber_path(a, z0, direct(a, z0, series), z))
    } else {
        let z0 = dir * T::c(R_SERIES);
        Ok(weber_path(a, z0, direct(a, z0, series), z))
    }
}

/// D_a(z) for |z| <= 50.
pub fn parabolic_cylinder_d<T: Scalar>(a: Cx<T>, z: Cx<T>) -> Result<Cx<T>> {
    Ok(parabolic_cylinder_d_with_derivative(a, z)?.0)
}
