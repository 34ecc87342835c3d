//! Parabolic-cylinder local models at the stationary points.

use super::gamma::rgamma;
use super::pcf::parabolic_cylinder_d;
use crate::error::Result;
use crate::linalg::Mat2;
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use serde::Serialize;

/// Local data at one stationary point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalPoint<T: Scalar> {
    pub xi_k: T,
    pub eta: i8,
    pub nu: T,
    pub r_at_k: Cx<T>,
    /// r_{xi_k}: r(xi_k) T_k^2 e^{-2 i t theta(xi_k)} (2 t |theta''|)^{i eta nu}.
    pub r_scaled: Cx<T>,
    /// Closed forms of the displayed beta_12 and beta_21 = -nu / beta_12.
    pub beta12: Cx<T>,
    pub beta21: Cx<T>,
    /// Residue matrix of the local solution in z, of order t^{-1/2}.
    pub h: Mat2<T>,
    pub theta2: T,
    pub theta: T,
}

/// All stationary points at one (xi, t).
#[derive(Debug, Clone, Serialize)]
pub struct LocalModelData<T: Scalar> {
    pub t: T,
    pub points: Vec<LocalPoint<T>>,
}

/// Psi_1 entry p(r0) = sqrt(2 pi) e^{-i pi/4} e^{-pi nu/2} / (r0 Gamma(-i nu)) of the model
/// with jump [[1 + |r0|^2, conj r0], [r0, 1]] on the real line.
pub fn model_coefficient<T: Scalar>(r0: Cx<T>) -> Cx<T> {
    if r0.norm() == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let nu = -r0.norm_sqr().ln_1p() / (T::c(2.0) * T::PI());
    let pre = (T::c(2.0) * T::PI()).sqrt() * (-T::PI() * nu * T::c(0.5)).exp();
    let ph = Complex::from_polar(T::one(), -T::FRAC_PI_4());
    ph * pre * rgamma(Complex::new(T::zero(), -nu)) / r0
}

/// Displayed beta_12 for the given eta.
pub fn displayed_beta12<T: Scalar>(eta: i8, nu: T, r_scaled: Cx<T>) -> Cx<T> {
    if r_scaled.norm() == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let pre = (T::c(2.0) * T::PI()).sqrt() * (T::PI() * nu * T::c(0.5)).exp();
    let (ph, g) = if eta > 0 {
        (T::FRAC_PI_4(), rgamma(Complex::new(T::zero(), nu)))
    } else {
        (-T::FRAC_PI_4(), rgamma(Complex::new(T::zero(), -nu)))
    };
    Complex::from_polar(pre, ph) * g / r_scaled
}

/// Builds the local data for one stationary point.
#[allow(clippy::too_many_arguments)]
pub fn local_point<T: Scalar>(xi_k: T, eta: i8, theta: T, theta2: T, r_at_k: Cx<T>, t_k: Cx<T>, t: T) -> LocalPoint<T> {
    let nu = -r_at_k.norm_sqr().ln_1p() / (T::c(2.0) * T::PI());
    let e = T::c(eta as f64);
    let a2 = theta2.abs();
    let ph = -T::c(2.0) * t * theta + e * nu * (T::c(2.0) * t * a2).ln();
    let r0 = r_at_k * t_k * t_k * Complex::from_polar(T::one(), ph);
    let psi1 = if eta > 0 {
        let p = model_coefficient(r0);
        Mat2::new(Complex::new(T::zero(), T::zero()), p, -p.conj(), Complex::new(T::zero(), T::zero()))
    } else {
        let q = model_coefficient(-r0.conj());
        Mat2::new(Complex::new(T::zero(), T::zero()), q.conj(), -q, Complex::new(T::zero(), T::zero()))
    };
    let h = psi1.scale(Complex::new(T::one() / (T::c(2.0) * a2).sqrt(), T::zero()));
    let beta12 = displayed_beta12(eta, nu, r0);
    let beta21 = if beta12.norm() == T::zero() { Complex::new(T::zero(), T::zero()) } else { -beta12.inv() * nu };
    LocalPoint { xi_k, eta, nu, r_at_k, r_scaled: r0, beta12, beta21, h, theta2, theta }
}

/// The displayed residue matrix (1/(2 i sqrt(eta theta''))) [[0, -i beta12], [i beta21, 0]],
/// with theta'' the coefficient of (z - xi_k)^2 in theta.
pub fn displayed_h<T: Scalar>(p: &LocalPoint<T>) -> Mat2<T> {
    let half_second = p.theta2 * T::c(0.5);
    let root = Complex::new(T::c(p.eta as f64) * half_second, T::zero()).sqrt();
    let pre = (Complex::new(T::zero(), T::c(2.0)) * root).inv();
    let i = Complex::new(T::zero(), T::one());
    let z = Complex::new(T::zero(), T::zero());
    Mat2::new(z, -i * p.beta12, i * p.beta21, z).scale(pre)
}

/// Psi(zeta) of the eta = +1 model from parabolic cylinder functions; `upper` selects the
/// formula for Im zeta > 0.
pub fn psi<T: Scalar>(zeta: Cx<T>, r0: Cx<T>, upper: bool) -> Result<Mat2<T>> {
    let nu = -r0.norm_sqr().ln_1p() / (T::c(2.0) * T::PI());
    let p = model_coefficient(r0);
    let iv = Complex::new(T::zero(), nu);
    let one = Complex::new(T::one(), T::zero());
    let e = |q: f64| Complex::from_polar(T::one(), T::c(q) * T::PI());
    let pi = T::PI();
    let (w1, w2, n1, n2) = if upper {
        (e(-0.75) * zeta, e(-0.25) * zeta, (-T::c(0.75) * pi * nu).exp(), (T::c(0.25) * pi * nu).exp())
    } else {
        (e(0.25) * zeta, e(0.75) * zeta, (T::c(0.25) * pi * nu).exp(), (-T::c(0.75) * pi * nu).exp())
    };
    let (r1, r2) = if upper { (e(-0.75), e(-0.25)) } else { (e(0.25), e(0.75)) };
    let p11 = parabolic_cylinder_d(iv, w1)? * n1;
    let p21 = parabolic_cylinder_d(iv - one, w1)? * (p.inv() * nu) * n1 * r1;
    let p22 = parabolic_cylinder_d(-iv, w2)? * n2;
    let p12 = parabolic_cylinder_d(-iv - one, w2)? * (Complex::new(T::zero(), T::one()) * p / nu) * n2 * r2 * (-iv);
    Ok(Mat2::new(p11, p12, p21, p22))
}

/// max |Psi_-^{-1} Psi_+ - V| at real zeta for the eta = +1 model.
pub fn psi_jump_residual<T: Scalar>(zeta: T, r0: Cx<T>) -> Result<T> {
    let z = Complex::new(zeta, T::zero());
    let plus = psi(z, r0, true)?;
    let minus = psi(z, r0, false)?;
    let v = Mat2::new(Complex::new(T::one() + r0.norm_sqr(), T::zero()), r0.conj(), r0, Complex::new(T::one(), T::zero()));
    Ok((minus.inverse()? * plus - v).max_abs())
}
