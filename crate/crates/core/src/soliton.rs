//! Reflectionless solutions: the soliton linear system, the matrix M(z), its Taylor data
//! at z = i and the reconstruction of u together with the x <-> y map.

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::linalg::{lu_solve, Mat2};
use crate::phase::phase_exponent;
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

/// Minimum distance between a pole and z = i.
pub const POLE_I_TOL: f64 = 0.05;

/// Poles in the upper half plane with their modified norming constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonData<T: Scalar> {
    pub poles: Vec<Cx<T>>,
    pub norming_mod: Vec<Cx<T>>,
}

impl<T: Scalar> SolitonData<T> {
    pub fn new(poles: Vec<Cx<T>>, norming_mod: Vec<Cx<T>>) -> Result<Self> {
        if poles.len() != norming_mod.len() {
            return Err(Error::InvalidInput("poles and norming constants differ in length".into()));
        }
        for (k, p) in poles.iter().enumerate() {
            if !(p.im > T::zero()) {
                return Err(Error::InvalidInput(format!("pole {p} is not in the upper half plane")));
            }
            if poles[..k].iter().any(|q| (q - p).norm() < T::c(1e-10)) {
                return Err(Error::InvalidInput(format!("pole {p} is repeated")));
            }
        }
        Ok(Self { poles, norming_mod })
    }

    pub fn empty() -> Self {
        Self { poles: vec![], norming_mod: vec![] }
    }

    /// The symmetric pair (rho, -1/rho) with constants (c, -c/rho^2).
    pub fn paired(rho: Cx<T>, c: Cx<T>) -> Result<Self> {
        let partner = -rho.inv();
        Self::new(vec![rho, partner], vec![c, -c / (rho * rho)])
    }

    /// Appends another pair.
    pub fn with_pair(mut self, rho: Cx<T>, c: Cx<T>) -> Result<Self> {
        let other = Self::paired(rho, c)?;
        self.poles.extend(other.poles);
        self.norming_mod.extend(other.norming_mod);
        Self::new(self.poles, self.norming_mod)
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }
}

/// Solved reflectionless state at (y, t).
#[derive(Debug, Clone, Serialize)]
pub struct SolitonState<T: Scalar> {
    pub y: T,
    pub t: T,
    pub poles: Vec<Cx<T>>,
    pub beta: Vec<Cx<T>>,
    pub tau: Vec<Cx<T>>,
    pub m_at_i: Mat2<T>,
    pub m1_at_i: Mat2<T>,
    /// Largest residual of the linear system, scaled by 1 + |lhs|.
    pub residual: T,
}

fn system_residual<T: Scalar>(
    poles: &[Cx<T>],
    weights: &[Cx<T>],
    beta: &[Cx<T>],
    tau: &[Cx<T>],
) -> (Vec<Cx<T>>, Vec<T>) {
    let n = poles.len();
    let mut out = Vec::with_capacity(2 * n);
    let mut scale = Vec::with_capacity(2 * n);
    let one = Complex::new(T::one(), T::zero());
    for k in 0..n {
        let mut s1 = Complex::new(T::zero(), T::zero());
        for h in 0..n {
            s1 -= tau[h].conj() / (poles[k] - poles[h].conj());
        }
        let lhs = weights[k] * beta[k];
        out.push(lhs - s1);
        scale.push(T::one() + lhs.norm());
    }
    for k in 0..n {
        let mut s2 = one;
        for h in 0..n {
            s2 += beta[h].conj() / (poles[k] - poles[h].conj());
        }
        let lhs = weights[k] * tau[k];
        out.push(lhs - s2);
        scale.push(T::one() + lhs.norm());
    }
    (out, scale)
}

/// Solves for (beta_k, tau_k) at (y, t) with e^{2 i t theta(rho_k)} in (y, t) form.
///
/// The system is linear over the reals in (Re, Im) of all unknowns and is assembled
/// column by column from the residual map.
pub fn solve_soliton_system<T: Scalar>(data: &SolitonData<T>, y: T, t: T) -> Result<SolitonState<T>> {
    if t < T::zero() {
        return Err(Error::InvalidInput("t must be nonnegative".into()));
    }
    let n = data.len();
    let zero = Complex::new(T::zero(), T::zero());
    if n == 0 {
        return Ok(SolitonState {
            y,
            t,
            poles: vec![],
            beta: vec![],
            tau: vec![],
            m_at_i: Mat2::identity(),
            m1_at_i: Mat2::zero(),
            residual: T::zero(),
        });
    }
    let weights: Vec<Cx<T>> = data
        .poles
        .iter()
        .zip(&data.norming_mod)
        .map(|(&p, &c)| Ok(phase_exponent(p, y, t)?.exp() / c))
        .collect::<Result<_>>()?;
    let unknowns = 2 * n;
    let split = |v: &[Cx<T>]| (v[..n].to_vec(), v[n..].to_vec());
    let (c0, _) = system_residual(&data.poles, &weights, &vec![zero; n], &vec![zero; n]);
    let dim = 2 * unknowns;
    let mut a = vec![T::zero(); dim * dim];
    for j in 0..unknowns {
        for part in 0..2 {
            let mut e = vec![zero; unknowns];
            e[j] = if part == 0 { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::one()) };
            let (b, ta) = split(&e);
            let (r, _) = system_residual(&data.poles, &weights, &b, &ta);
            let col = 2 * j + part;
            for row in 0..unknowns {
                let d = r[row] - c0[row];
                a[row * dim + col] = d.re;
                a[(row + unknowns) * dim + col] = d.im;
            }
        }
    }
    let mut rhs = vec![T::zero(); dim];
    for row in 0..unknowns {
        rhs[row] = -c0[row].re;
        rhs[row + unknowns] = -c0[row].im;
    }
    let (sol, _) = lu_solve(a, rhs, dim)?;
    let v: Vec<Cx<T>> = (0..unknowns).map(|j| Complex::new(sol[2 * j], sol[2 * j + 1])).collect();
    let (beta, tau) = split(&v);
    let (res, scale) = system_residual(&data.poles, &weights, &beta, &tau);
    let residual = res.iter().zip(&scale).fold(T::zero(), |m, (r, s)| m.max(r.norm() / *s));
    let mut state = SolitonState {
        y,
        t,
        poles: data.poles.clone(),
        beta,
        tau,
        m_at_i: Mat2::identity(),
        m1_at_i: Mat2::zero(),
        residual,
    };
    let (m, m1) = taylor_at_i(&state)?;
    state.m_at_i = m;
    state.m1_at_i = m1;
    Ok(state)
}

/// M(z) = I + sum_k [[beta_k/(z - rho_k), -conj(tau_k)/(z - conj rho_k)], [tau_k/(z - rho_k), conj(beta_k)/(z - conj rho_k)]].
pub fn eval_m<T: Scalar>(state: &SolitonState<T>, z: Cx<T>) -> Result<Mat2<T>> {
    let mut m = Mat2::identity();
    for (k, &p) in state.poles.iter().enumerate() {
        let (d, dc) = (z - p, z - p.conj());
        if d.norm() < T::c(1e-14) || dc.norm() < T::c(1e-14) {
            return Err(Error::PoleEvaluation(format!("M evaluated at pole {p}")));
        }
        let (b, ta) = (state.beta[k], state.tau[k]);
        m = m + Mat2::new(b / d, -ta.conj() / dc, ta / d, b.conj() / dc);
    }
    Ok(m)
}

/// dM/dz from the partial-fraction form.
pub fn eval_m_prime<T: Scalar>(state: &SolitonState<T>, z: Cx<T>) -> Result<Mat2<T>> {
    let mut m = Mat2::zero();
    for (k, &p) in state.poles.iter().enumerate() {
        let (d, dc) = (z - p, z - p.conj());
        if d.norm() < T::c(1e-14) || dc.norm() < T::c(1e-14) {
            return Err(Error::PoleEvaluation(format!("M' evaluated at pole {p}")));
        }
        let (d2, dc2) = (d * d, dc * dc);
        let (b, ta) = (state.beta[k], state.tau[k]);
        m = m - Mat2::new(b / d2, -ta.conj() / dc2, ta / d2, b.conj() / dc2);
    }
    Ok(m)
}

/// (M(i), M'(i)).
pub fn taylor_at_i<T: Scalar>(state: &SolitonState<T>) -> Result<(Mat2<T>, Mat2<T>)> {
    let i = Complex::new(T::zero(), T::one());
    for p in &state.poles {
        if (p - i).norm() <= T::c(POLE_I_TOL) {
            return Err(Error::PoleTooCloseToI { pole: p.to_string(), tol: POLE_I_TOL });
        }
    }
    Ok((eval_m(state, i)?, eval_m_prime(state, i)?))
}

/// u from M(i) and M'(i): -[M'_12/M_22 conj(M_11)/M_11 + conj(M'_21/M_11) M_22/conj(M_22)].
pub fn recover_u<T: Scalar>(m: &Mat2<T>, m1: &Mat2<T>) -> Cx<T> {
    let (m11, m22) = (m[(0, 0)], m[(1, 1)]);
    -(m1[(0, 1)] / m22 * m11.conj() / m11 + (m1[(1, 0)] / m11).conj() * m22 / m22.conj())
}

/// k_+ = ln(M_22(i)/conj(M_11(i))).
pub fn k_plus<T: Scalar>(m: &Mat2<T>) -> Cx<T> {
    (m[(1, 1)] / m[(0, 0)].conj()).ln()
}

/// Reconstructed point of a reflectionless solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Reconstruction<T: Scalar> {
    pub x: T,
    pub u: Cx<T>,
    pub k_plus: Cx<T>,
}

/// u and x = y - Re ln(M_22(i)/conj(M_11(i))).
pub fn reconstruct<T: Scalar>(state: &SolitonState<T>) -> Reconstruction<T> {
    let kp = k_plus(&state.m_at_i);
    Reconstruction { x: state.y - kp.re, u: recover_u(&state.m_at_i, &state.m1_at_i), k_plus: kp }
}

/// Samples u at time t on `x_grid` by solving on a uniform y-grid and interpolating
/// Re u and Im u monotonically in x.
pub fn profile_on_grid<T: Scalar>(
    data: &SolitonData<T>,
    t: T,
    y_range: (T, T),
    n_y: usize,
    x_grid: &[T],
) -> Result<Vec<Cx<T>>> {
    if n_y < 4 {
        return Err(Error::InvalidInput("need at least 4 y samples".into()));
    }
    let ys: Vec<T> = (0..n_y)
        .map(|j| y_range.0 + (y_range.1 - y_range.0) * T::n(j) / T::n(n_y - 1))
        .collect();
    let pts: Vec<Reconstruction<T>> = ys
        .par_iter()
        .map(|&y| Ok(reconstruct(&solve_soliton_system(data, y, t)?)))
        .collect::<Result<_>>()?;
    let xs: Vec<T> = pts.iter().map(|p| p.x).collect();
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonConvergence("x(y) is not strictly increasing".into()));
    }
    let re = Pchip::new(xs.clone(), pts.iter().map(|p| p.u.re).collect())?;
    let im = Pchip::new(xs.clone(), pts.iter().map(|p| p.u.im).collect())?;
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    Ok(x_grid
        .iter()
        .map(|&x| {
            if x < lo || x > hi {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(re.eval(x), im.eval(x))
            }
        })
        .collect())
}

/// As [`profile_on_grid`], then refines each sample by solving x(y*) = x_j with the secant
/// method, so the result is exact up to the root-finding tolerance.
pub fn profile_refined<T: Scalar>(
    data: &SolitonData<T>,
    t: T,
    y_range: (T, T),
    n_y: usize,
    x_grid: &[T],
) -> Result<Vec<Cx<T>>> {
    if n_y < 4 {
        return Err(Error::InvalidInput("need at least 4 y samples".into()));
    }
    let ys: Vec<T> = (0..n_y)
        .map(|j| y_range.0 + (y_range.1 - y_range.0) * T::n(j) / T::n(n_y - 1))
        .collect();
    let xs: Vec<T> = ys
        .par_iter()
        .map(|&y| Ok(reconstruct(&solve_soliton_system(data, y, t)?).x))
        .collect::<Result<_>>()?;
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonConvergence("x(y) is not strictly increasing".into()));
    }
    let y_of_x = Pchip::new(xs.clone(), ys)?;
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    x_grid
        .par_iter()
        .map(|&x| {
            if x < lo || x > hi {
                return Ok(Complex::new(T::zero(), T::zero()));
            }
            let f = |y: T| -> Result<(T, Reconstruction<T>)> {
                let r = reconstruct(&solve_soliton_system(data, y, t)?);
                Ok((r.x - x, r))
            };
            let mut y0 = y_of_x.eval(x);
            let (mut f0, mut best) = f(y0)?;
            let mut y1 = y0 + T::c(1e-6);
            for _ in 0..30 {
                let (f1, r1) = f(y1)?;
                best = r1;
                if f1.abs() <= T::c(1e-13) * (T::one() + x.abs()) || f1 == f0 {
                    break;
                }
                let y2 = y1 - f1 * (y1 - y0) / (f1 - f0);
                y0 = y1;
                f0 = f1;
                y1 = y2;
            }
            Ok(best.u)
        })
        .collect()
}
