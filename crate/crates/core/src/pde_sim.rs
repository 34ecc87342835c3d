//! Periodic pseudospectral solver for
//! m_t = u_x + (1/2)[m(|u|^2 - |u_x|^2)]_x - (1/2) m (u conj(u_x) - u_x conj(u)), m = u - u_xx,
//! with 2/3-rule dealiasing and classical RK4 in time.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use crate::scattering::geometry;
use crate::spectral::Fourier;
use num_complex::Complex;
use serde::Serialize;

/// Stability bound on dt / dx.
pub const CFL: f64 = 0.25;
/// Blow-up threshold relative to the initial sup norm.
pub const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
pub struct FieldSnapshot<T: Scalar> {
    pub x_grid: Vec<T>,
    pub u: Vec<Cx<T>>,
    pub m: Vec<Cx<T>>,
    pub t: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory<T: Scalar> {
    pub snapshots: Vec<FieldSnapshot<T>>,
    /// g at each stored snapshot.
    pub g: Vec<Cx<T>>,
    pub dt: T,
    pub steps: usize,
    /// Largest ratio |u(+-L)| / max|u| seen at the stored snapshots.
    pub boundary_ratio: T,
}

impl<T: Scalar> Trajectory<T> {
    /// max |g(t) - g(0)| over stored snapshots.
    pub fn g_drift(&self) -> T {
        let g0 = self.g[0];
        self.g.iter().fold(T::zero(), |m, g| m.max((g - g0).norm()))
    }

    pub fn last(&self) -> &FieldSnapshot<T> {
        self.snapshots.last().expect("trajectory holds the initial snapshot")
    }
}

pub struct Simulator<T: Scalar> {
    pub fourier: Fourier<T>,
    mask: Vec<T>,
}

impl<T: Scalar> Simulator<T> {
    pub fn new(l: T, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 16 {
            return Err(Error::InvalidInput(format!("N = {n} must be a power of two >= 16")));
        }
        if !(l > T::zero()) {
            return Err(Error::InvalidInput("L must be positive".into()));
        }
        let fourier = Fourier::new(n, l);
        let kmax = fourier.k.iter().fold(T::zero(), |m, k| m.max(k.abs()));
        let cut = T::c(2.0 / 3.0) * kmax;
        let mask = fourier.k.iter().map(|k| if k.abs() < cut { T::one() } else { T::zero() }).collect();
        Ok(Self { fourier, mask })
    }

    pub fn dx(&self) -> T {
        T::c(2.0) * self.fourier.l / T::n(self.fourier.n)
    }

    pub fn x_grid(&self) -> Vec<T> {
        self.fourier.grid()
    }

    /// u = (1 - d_xx)^{-1} m.
    pub fn invert_helmholtz(&self, m: &[Cx<T>]) -> Vec<Cx<T>> {
        self.fourier.apply(m, |k| Complex::new(T::one() / (T::one() + k * k), T::zero()))
    }

    /// m = u - u_xx.
    pub fn helmholtz(&self, u: &[Cx<T>]) -> Vec<Cx<T>> {
        self.fourier.apply(u, |k| Complex::new(T::one() + k * k, T::zero()))
    }

    pub fn snapshot_from_u(&self, u: Vec<Cx<T>>, t: T) -> FieldSnapshot<T> {
        let m = self.helmholtz(&u);
        FieldSnapshot { x_grid: self.x_grid(), u, m, t }
    }

    /// dm/dt.
    pub fn rhs(&self, m: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = m.len();
        let f = &self.fourier;
        let mut mh = m.to_vec();
        f.forward(&mut mh);
        let mut uh = vec![Complex::new(T::zero(), T::zero()); n];
        let mut uxh = uh.clone();
        for j in 0..n {
            let k = f.k[j];
            uh[j] = mh[j] / (T::one() + k * k);
            uxh[j] = uh[j] * Complex::new(T::zero(), k);
        }
        let mut u = uh.clone();
        let mut ux = uxh.clone();
        f.inverse(&mut u);
        f.inverse(&mut ux);
        let mut q: Vec<Cx<T>> = (0..n).map(|j| m[j] * (u[j].norm_sqr() - ux[j].norm_sqr())).collect();
        let mut w: Vec<Cx<T>> = (0..n).map(|j| m[j] * (u[j] * ux[j].conj() - ux[j] * u[j].conj())).collect();
        f.forward(&mut q);
        f.forward(&mut w);
        let half = T::c(0.5);
        let mut out: Vec<Cx<T>> = (0..n)
            .map(|j| {
                let ik = Complex::new(T::zero(), f.k[j]);
                uxh[j] + (ik * q[j] * half - w[j] * half) * self.mask[j]
            })
            .collect();
        f.inverse(&mut out);
        out
    }

    fn rk4_step(&self, m: &mut [Cx<T>], dt: T) {
        let n = m.len();
        let half = dt * T::c(0.5);
        let k1 = self.rhs(m);
        let s: Vec<_> = (0..n).map(|j| m[j] + k1[j] * half).collect();
        let k2 = self.rhs(&s);
        let s: Vec<_> = (0..n).map(|j| m[j] + k2[j] * half).collect();
        let k3 = self.rhs(&s);
        let s: Vec<_> = (0..n).map(|j| m[j] + k3[j] * dt).collect();
        let k4 = self.rhs(&s);
        let sixth = dt / T::c(6.0);
        for j in 0..n {
            m[j] += (k1[j] + (k2[j] + k3[j]) * T::c(2.0) + k4[j]) * sixth;
        }
    }

    /// Largest |u(+-L)| / max|u|.
    pub fn boundary_ratio(u: &[Cx<T>]) -> T {
        let peak = u.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        if peak == T::zero() {
            return T::zero();
        }
        u[0].norm().max(u[u.len() - 1].norm()) / peak
    }

    /// Integrates from `start` and stores a snapshot at each of `times` (ascending, after start.t).
    ///
    /// Each interval between stored times is split into equal steps no longer than `dt`.
    pub fn evolve(&self, start: &FieldSnapshot<T>, dt: T, times: &[T]) -> Result<Trajectory<T>> {
        if !(dt > T::zero()) || dt > T::c(CFL) * self.dx() * T::c(1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!("dt = {dt} must lie in (0, {CFL} dx]")));
        }
        if start.m.len() != self.fourier.n {
            return Err(Error::InvalidInput("snapshot size does not match the grid".into()));
        }
        let limit = T::c(BLOWUP_FACTOR) * start.u.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        let mut m = start.m.clone();
        let mut t = start.t;
        let mut snaps = vec![start.clone()];
        let mut g = vec![geometry(&self.fourier, &start.u).g];
        let mut steps = 0;
        let mut bratio = Self::boundary_ratio(&start.u);
        for &target in times {
            if target < t {
                return Err(Error::InvalidInput("output times must be ascending".into()));
            }
            let n_steps = ((target - t) / dt).ceil().to_usize().unwrap_or(0);
            if n_steps > 0 {
                let h = (target - t) / T::n(n_steps);
                for s in 0..n_steps {
                    self.rk4_step(&mut m, h);
                    steps += 1;
                    if s % 16 == 15 || s + 1 == n_steps {
                        let peak = m.iter().fold(T::zero(), |a, v| a.max(v.norm()));
                        if !peak.is_finite() {
                            return Err(Error::BlowupDetected { max: f64::INFINITY, limit: limit.f64(), t: target.f64() });
                        }
                    }
                }
            }
            t = target;
            let u = self.invert_helmholtz(&m);
            let peak = u.iter().fold(T::zero(), |a, v| a.max(v.norm()));
            if limit > T::zero() && peak > limit {
                return Err(Error::BlowupDetected { max: peak.f64(), limit: limit.f64(), t: t.f64() });
            }
            bratio = bratio.max(Self::boundary_ratio(&u));
            g.push(geometry(&self.fourier, &u).g);
            snaps.push(FieldSnapshot { x_grid: start.x_grid.clone(), u, m: m.clone(), t });
        }
        Ok(Trajectory { snapshots: snaps, g, dt, steps, boundary_ratio: bratio })
    }
}

/// max |(1 - d_xx) u - m|.
pub fn helmholtz_residual<T: Scalar>(sim: &Simulator<T>, snap: &FieldSnapshot<T>) -> T {
    let m = sim.helmholtz(&snap.u);
    m.iter().zip(&snap.m).fold(T::zero(), |a, (p, q)| a.max((p - q).norm()))
}

/// Relative discrete L2 distance ||a - b|| / ||b||.
pub fn relative_l2<T: Scalar>(a: &[Cx<T>], b: &[Cx<T>]) -> T {
    let num = a.iter().zip(b).fold(T::zero(), |s, (p, q)| s + (p - q).norm_sqr());
    let den = b.iter().fold(T::zero(), |s, q| s + q.norm_sqr());
    if den == T::zero() {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}
