//! Leading-order long-time asymptotics: local models at the stationary points, the
//! error coefficients E0 and E1, the corrections k11 and k12, and the explicit
//! leading-order solution.

pub mod dual;
pub mod gamma;
pub mod local;
pub mod pcf;

use crate::deformation::{build_reduced_factor, partition_spectrum, Partition, Reflection, ScalarFactor};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::phase::{region_of, stationary_points, theta, PhasePortrait, Region};
use crate::scalar::{Cx, Scalar};
use crate::scattering::DiscreteSpectrum;
use crate::soliton::{eval_m, k_plus, recover_u, solve_soliton_system, SolitonData, SolitonState};
use dual::{Dual, DualMat};
use local::{local_point, LocalModelData};
use num_complex::Complex;
use serde::Serialize;

pub use gamma::{complex_gamma, rgamma};
pub use pcf::parabolic_cylinder_d;

/// Determinant below which M(xi_k) is treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// E0 = sum_k A_k/(i - xi_k), E1 = -sum_k A_k/(i - xi_k)^2 with A_k = M(xi_k) H_k M(xi_k)^{-1}.
pub fn error_coefficients<T: Scalar, F: Fn(T) -> Result<Mat2<T>>>(
    local: &LocalModelData<T>,
    m_at: F,
) -> Result<(Mat2<T>, Mat2<T>)> {
    let i = Complex::new(T::zero(), T::one());
    let mut e0 = Mat2::zero();
    let mut e1 = Mat2::zero();
    for p in &local.points {
        let m = m_at(p.xi_k)?;
        let det = m.det();
        if det.norm() < T::c(SINGULAR_DET) {
            return Err(Error::SingularM { det: det.norm().f64() });
        }
        let a = m * p.h * m.inverse()?;
        let d = (i - p.xi_k).inv();
        e0 = e0 + a.scale(d);
        e1 = e1 - a.scale(d * d);
    }
    Ok((e0, e1))
}

/// k11 assembled term by term from (M(i), M'(i), E0, E1, Sigma_0).
pub fn k11_display<T: Scalar>(m: &Mat2<T>, m1: &Mat2<T>, e0: &Mat2<T>, e1: &Mat2<T>, s0: Cx<T>) -> Cx<T> {
    let em = *e0 * *m;
    let a = em.scale(-s0) + *e0 * *m1 + *e1 * *m;
    let b = em.scale(s0) + *e0 * *m1 + *e1 * *m;
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let (d01, d10) = (m1[(0, 1)], m1[(1, 0)]);
    let mut k = -(d01 - s0 * m01) * (m00 * em[(0, 0)].conj() - m00.conj() * em[(0, 0)]) / (m11 * m00 * m00);
    k -= (d10 + s0 * m10).conj() * (m11.conj() * em[(1, 1)] - m11 * em[(1, 1)].conj()) / (m00 * m11 * m11).conj();
    k -= m00.conj() / m00 * (a[(0, 1)] / m11);
    k += m00.conj() / m00 * (-m01 * s0 + d01) * em[(1, 1)] / (m11 * m11);
    k -= m11 / m11.conj() * (b[(1, 0)] / m00).conj();
    k += m11 / m11.conj() * ((m10 * s0 + d10) * em[(0, 0)] / (m00 * m00)).conj();
    k
}

/// k12 = E0_22 - conj(E0_11) + E0_21 M_12/M_22 - conj(E0_12 M_21/M_11).
pub fn k12<T: Scalar>(m: &Mat2<T>, e0: &Mat2<T>) -> Cx<T> {
    e0[(1, 1)] - e0[(0, 0)].conj() + e0[(1, 0)] * m[(0, 1)] / m[(1, 1)] - (e0[(0, 1)] * m[(1, 0)] / m[(0, 0)]).conj()
}

fn recover_u_dual<T: Scalar>(m: &DualMat<T>, m1: &DualMat<T>) -> Dual<T> {
    let (m11, m22) = (m.at(0, 0), m.at(1, 1));
    -(m1.at(0, 1) / m22 * m11.conj() / m11 + (m1.at(1, 0) / m11).conj() * m22 / m22.conj())
}

/// First-order coefficient in eps of the reconstruction applied to
/// ((I + eps E0) M T^{-sigma3}, (eps E1 M + (I + eps E0)(M' + M Sigma_0 sigma3)) T^{-sigma3}),
/// divided by the phase T/conj(T).
pub fn k11_linearized<T: Scalar>(m: &Mat2<T>, m1: &Mat2<T>, e0: &Mat2<T>, e1: &Mat2<T>, s0: Cx<T>, t_i: Cx<T>) -> Cx<T> {
    let tm = Mat2::diag(t_i.inv(), t_i);
    let value = *m * tm;
    let dvalue = *e0 * *m * tm;
    let base1 = *m1 + *m * Mat2::sigma3().scale(s0);
    let deriv = base1 * tm;
    let dderiv = (*e1 * *m + *e0 * base1) * tm;
    let u = recover_u_dual(&DualMat::from_parts(&value, &dvalue), &DualMat::from_parts(&deriv, &dderiv));
    u.d * t_i.conj() / t_i
}

/// Inputs shared by every (y, t) evaluation.
pub struct AsymptoticContext<'a, T: Scalar> {
    pub reflection: &'a dyn Reflection<T>,
    pub spectrum: DiscreteSpectrum<T>,
    /// Threshold for the lambda set; infinite keeps every pole.
    pub delta0: T,
}

/// All intermediate quantities at one (y, t).
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticTerm<T: Scalar> {
    pub y: T,
    pub t: T,
    pub xi: T,
    pub region: Region,
    pub t_at_i: Cx<T>,
    pub sigma0: Cx<T>,
    /// T_j at the stationary points, in the order of the phase portrait.
    pub t_j: Vec<Cx<T>>,
    pub nu_j: Vec<T>,
    pub e0: Mat2<T>,
    pub e1: Mat2<T>,
    pub k11: Cx<T>,
    pub k12: Cx<T>,
    pub u_r: Cx<T>,
    pub k_plus: Cx<T>,
    pub local: LocalModelData<T>,
    pub partition: Partition<T>,
}

/// Leading-order solution at one (y, t).
#[derive(Debug, Clone, Serialize)]
pub struct LeadingOrder<T: Scalar> {
    pub x: T,
    pub u: Cx<T>,
    /// Exponent of the error term in t.
    pub order: T,
    pub term: AsymptoticTerm<T>,
}

impl<'a, T: Scalar> AsymptoticContext<'a, T> {
    /// Soliton data over lambda with constants c T(rho)^2.
    pub fn soliton_data(&self, partition: &Partition<T>, sf: &ScalarFactor<'_, T>) -> Result<SolitonData<T>> {
        let mut poles = vec![];
        let mut consts = vec![];
        for &n in &partition.lambda {
            let p = self.spectrum.poles[n];
            let tp = sf.t(p)?;
            poles.push(p);
            consts.push(self.spectrum.norming[n] * tp * tp);
        }
        SolitonData::new(poles, consts)
    }

    pub fn assemble(&self, y: T, t: T) -> Result<AsymptoticTerm<T>> {
        if !(t > T::zero()) {
            return Err(Error::InvalidInput("t must be positive".into()));
        }
        let xi = y / t;
        region_of(xi)?;
        let portrait: PhasePortrait<T> = stationary_points(xi)?;
        let partition = partition_spectrum(&self.spectrum, xi, self.delta0)?;
        let sf = build_reduced_factor(self.reflection, &self.spectrum, &partition, &portrait)?;
        let data = self.soliton_data(&partition, &sf)?;
        let state: SolitonState<T> = solve_soliton_system(&data, y, t)?;
        let (m, m1) = (state.m_at_i, state.m1_at_i);
        let u_r = recover_u(&m, &m1);
        let kp = k_plus(&m);
        let mut points = Vec::with_capacity(portrait.points.len());
        for (k, &xk) in portrait.points.iter().enumerate() {
            let th = theta(Complex::new(xk, T::zero()), xi)?.re;
            points.push(local_point(
                xk,
                portrait.eta_signs[k],
                th,
                portrait.theta_second[k],
                self.reflection.r(xk),
                sf.t_j[k],
                t,
            ));
        }
        let local = LocalModelData { t, points };
        let (e0, e1) = error_coefficients(&local, |s| eval_m(&state, Complex::new(s, T::zero())))?;
        let (k11, k12v) = if portrait.region.has_points() {
            (k11_display(&m, &m1, &e0, &e1, sf.sigma0), k12(&m, &e0))
        } else {
            (Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()))
        };
        Ok(AsymptoticTerm {
            y,
            t,
            xi,
            region: portrait.region,
            t_at_i: sf.t_at_i,
            sigma0: sf.sigma0,
            t_j: sf.t_j.clone(),
            nu_j: sf.nu_j.clone(),
            e0,
            e1,
            k11,
            k12: k12v,
            u_r,
            k_plus: kp,
            local,
            partition,
        })
    }

    /// u and x at (y, t) from the leading-order formulas.
    pub fn u_leading(&self, y: T, t: T) -> Result<LeadingOrder<T>> {
        let term = self.assemble(y, t)?;
        let ti = term.t_at_i;
        let phase = ti / ti.conj();
        let s = T::one() / t.sqrt();
        let (u, shift, order) = if term.region.has_points() {
            (
                phase * (term.u_r + term.k11 * s),
                T::c(2.0) * ti.norm().ln() + term.k_plus.re + term.k12.re * s,
                T::c(-0.75),
            )
        } else {
            (phase * term.u_r, T::c(2.0) * ti.norm().ln() + term.k_plus.re, T::c(-0.5))
        };
        Ok(LeadingOrder { x: y - shift, u, order, term })
    }

    /// Leading-order u at a given x: solves x_lead(y) = x by the secant method from `y_guess`.
    pub fn u_leading_at_x(&self, x: T, t: T, y_guess: T) -> Result<LeadingOrder<T>> {
        let mut y0 = y_guess;
        let mut f0 = self.u_leading(y0, t)?.x - x;
        let mut y1 = y0 - f0;
        for _ in 0..40 {
            let l1 = self.u_leading(y1, t)?;
            let f1 = l1.x - x;
            if f1.abs() <= T::c(1e-12) * (T::one() + x.abs()) || f1 == f0 {
                return Ok(l1);
            }
            let y2 = y1 - f1 * (y1 - y0) / (f1 - f0);
            y0 = y1;
            f0 = f1;
            y1 = y2;
        }
        Err(Error::NonConvergence(format!("x_lead(y) = {x} did not converge")))
    }
}
