//! Direct scattering: geometry of the initial datum, Jost solutions, scattering
//! coefficients, the reflection coefficient and the discrete spectrum.

use crate::deformation::Reflection;
use crate::error::{Error, Result};
use crate::interp::CubicSpline;
use crate::linalg::Mat2;
use crate::scalar::{Cx, Scalar};
use crate::spectral::Fourier;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

/// Initial datum on the periodic grid together with its derived geometry.
#[derive(Debug, Clone)]
pub struct InitialDatum<T: Scalar> {
    pub l: T,
    pub n: usize,
    pub x_grid: Vec<T>,
    pub u0: Vec<Cx<T>>,
    pub m0: Vec<Cx<T>>,
    pub d: Vec<T>,
    /// h(x) = x - int_x^inf (d - 1) ds.
    pub h: Vec<T>,
    /// y(x) at t = 0 (coincides with h).
    pub y: Vec<T>,
    /// Running integral g_-(x) = int_{-inf}^x G ds.
    pub g_minus: Vec<Cx<T>>,
    /// g_+(x) = int_x^inf G ds.
    pub g_plus: Vec<Cx<T>>,
    /// g = int G ds, with G = (m_x conj(m) - m conj(m_x)) / (4 d (d + 1)).
    pub g: Cx<T>,
    /// K = int (d - 1) dx.
    pub k_total: T,
}

/// Geometric quantities of a field `u` on the periodic grid.
#[derive(Debug, Clone)]
pub struct Geometry<T: Scalar> {
    pub m: Vec<Cx<T>>,
    pub d: Vec<T>,
    pub g_density: Vec<Cx<T>>,
    pub k_total: T,
    pub g: Cx<T>,
}

/// Computes m = u - u_xx, d, the g-density and the totals K and g (composite Simpson,
/// using periodicity for the closing node).
pub fn geometry<T: Scalar>(fourier: &Fourier<T>, u: &[Cx<T>]) -> Geometry<T> {
    let n = u.len();
    let mut uh = u.to_vec();
    fourier.forward(&mut uh);
    let mut mh = uh.clone();
    let mut mxh = uh;
    for j in 0..n {
        let k = fourier.k[j];
        let f = T::one() + k * k;
        mh[j] *= f;
        mxh[j] = mxh[j] * Complex::new(T::zero(), k) * f;
    }
    fourier.inverse(&mut mh);
    fourier.inverse(&mut mxh);
    let d: Vec<T> = mh.iter().map(|m| (m.norm_sqr() + T::one()).sqrt()).collect();
    let g_density: Vec<Cx<T>> = (0..n)
        .map(|j| {
            let num = mxh[j] * mh[j].conj() - mh[j] * mxh[j].conj();
            num / (T::c(4.0) * d[j] * (d[j] + T::one()))
        })
        .collect();
    let dx = T::c(2.0) * fourier.l / T::n(n);
    let k_total = periodic_simpson(&d.iter().map(|&v| Complex::new(v - T::one(), T::zero())).collect::<Vec<_>>(), dx).re;
    let g = periodic_simpson(&g_density, dx);
    Geometry { m: mh, d, g_density, k_total, g }
}

fn periodic_simpson<T: Scalar>(f: &[Cx<T>], dx: T) -> Cx<T> {
    let n = f.len();
    let mut s = Complex::new(T::zero(), T::zero());
    for i in 0..=n {
        let v = f[i % n];
        let c = if i == 0 || i == n {
            T::one()
        } else if i % 2 == 1 {
            T::c(4.0)
        } else {
            T::c(2.0)
        };
        s += v * c;
    }
    s * dx / T::c(3.0)
}

/// Cumulative integral from the left end, third-order accurate per cell.
fn cumulative<T: Scalar>(f: &[Cx<T>], dx: T) -> Vec<Cx<T>> {
    let n = f.len();
    let mut out = vec![Complex::new(T::zero(), T::zero()); n];
    let twelve = T::c(12.0);
    for i in 0..n - 1 {
        let cell = if i + 2 < n {
            (f[i] * T::c(5.0) + f[i + 1] * T::c(8.0) - f[i + 2]) * dx / twelve
        } else {
            (f[i + 1] * T::c(5.0) + f[i] * T::c(8.0) - f[i - 1]) * dx / twelve
        };
        out[i + 1] = out[i] + cell;
    }
    out
}

/// Builds an [`InitialDatum`] from samples on x_j = -L + 2Lj/N.
pub fn precompute_geometry<T: Scalar>(u0: &[Cx<T>], l: T) -> Result<InitialDatum<T>> {
    let n = u0.len();
    if n < 256 || n % 2 == 1 {
        return Err(Error::InvalidInput(format!("N = {n} must be even and >= 256")));
    }
    if l <= T::zero() {
        return Err(Error::InvalidInput("L must be positive".into()));
    }
    let peak = u0.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    let edge = u0[0].norm().max(u0[n - 1].norm());
    if peak > T::zero() && edge > T::c(1e-8) * peak {
        return Err(Error::DecayViolation { edge: edge.f64(), bound: (T::c(1e-8) * peak).f64() });
    }
    let fourier = Fourier::new(n, l);
    let x_grid = fourier.grid();
    let geo = geometry(&fourier, u0);
    let dx = T::c(2.0) * l / T::n(n);
    let dm1: Vec<Cx<T>> = geo.d.iter().map(|&v| Complex::new(v - T::one(), T::zero())).collect();
    let cum_d = cumulative(&dm1, dx);
    let total_d = cum_d[n - 1] + (dm1[n - 1] + dm1[0]) * (dx * T::c(0.5));
    let cum_g = cumulative(&geo.g_density, dx);
    let total_g = cum_g[n - 1] + (geo.g_density[n - 1] + geo.g_density[0]) * (dx * T::c(0.5));
    let h: Vec<T> = (0..n).map(|j| x_grid[j] - (total_d - cum_d[j]).re).collect();
    let g_plus = (0..n).map(|j| total_g - cum_g[j]).collect();
    Ok(InitialDatum {
        l,
        n,
        x_grid,
        u0: u0.to_vec(),
        m0: geo.m,
        y: h.clone(),
        h,
        d: geo.d,
        g_minus: cum_g,
        g_plus,
        g: geo.g,
        k_total: geo.k_total,
    })
}

/// y(x) = x - int_x^L (d - 1) ds for a field on the periodic grid, without decay checks.
pub fn y_of_x<T: Scalar>(u: &[Cx<T>], l: T) -> Vec<T> {
    let n = u.len();
    let fourier = Fourier::new(n, l);
    let x = fourier.grid();
    let geo = geometry(&fourier, u);
    let dx = T::c(2.0) * l / T::n(n);
    let dm1: Vec<Cx<T>> = geo.d.iter().map(|&v| Complex::new(v - T::one(), T::zero())).collect();
    let cum = cumulative(&dm1, dx);
    let total = cum[n - 1] + (dm1[n - 1] + dm1[0]) * (dx * T::c(0.5));
    (0..n).map(|j| x[j] - (total - cum[j]).re).collect()
}

/// Samples the family u0 = A sech(x) e^{i v x}.
pub fn sech_profile<T: Scalar>(amplitude: T, phase_velocity: T, l: T, n: usize) -> Vec<Cx<T>> {
    (0..n)
        .map(|j| {
            let x = -l + T::c(2.0) * l * T::n(j) / T::n(n);
            Complex::from_polar(amplitude / x.cosh(), phase_velocity * x)
        })
        .collect()
}

#[inline]
fn kappa<T: Scalar>(z: Cx<T>) -> Cx<T> {
    (z - z.inv()) * T::c(0.25)
}

/// x-part of the Lax pair: U = (1/2)[[-alpha, lambda m], [-lambda conj(m), alpha]].
fn lax_u<T: Scalar>(z: Cx<T>, m: Cx<T>) -> Mat2<T> {
    let inv = z.inv();
    let alpha = Complex::new(T::zero(), T::c(0.5)) * (z - inv);
    let lambda = (z + inv) * T::c(0.5);
    let h = T::c(0.5);
    Mat2::new(-alpha * h, lambda * m * h, -lambda * m.conj() * h, alpha * h)
}

/// Fourth-order Magnus exponent for a step of signed length `h` from node values a0 to a1.
fn magnus<T: Scalar>(a0: Mat2<T>, am: Mat2<T>, a1: Mat2<T>, h: T) -> Mat2<T> {
    let four = Complex::new(T::c(4.0), T::zero());
    let simpson = (a0 + am.scale(four) + a1).scale(Complex::new(h / T::c(6.0), T::zero()));
    let comm = a1 * a0 - a0 * a1;
    simpson + comm.scale(Complex::new(h * h / T::c(12.0), T::zero()))
}

fn check_spectral_z<T: Scalar>(z: Cx<T>) -> Result<()> {
    if z.norm() <= T::c(1e-12) {
        return Err(Error::Domain(format!("spectral parameter z = {z} is singular")));
    }
    Ok(())
}

impl<T: Scalar> InitialDatum<T> {
    fn dx(&self) -> T {
        T::c(2.0) * self.l / T::n(self.n)
    }

    /// m on the closed grid of N + 1 nodes (periodic wrap at x = L).
    fn m_closed(&self, j: usize) -> Cx<T> {
        self.m0[j % self.n]
    }

    fn x_closed(&self, j: usize) -> T {
        -self.l + T::c(2.0) * self.l * T::n(j) / T::n(self.n)
    }

    /// S11 from a right-to-left sweep (analytic in the upper half plane).
    pub fn s11(&self, z: Cx<T>) -> Result<Cx<T>> {
        check_spectral_z(z)?;
        let ka = kappa(z);
        let h = self.dx() * T::c(2.0);
        let shift = Complex::new(T::zero(), T::one()) * ka * h;
        let mut v = [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())];
        let mut i = self.n;
        while i >= 2 {
            let om = magnus(
                lax_u(z, self.m_closed(i)),
                lax_u(z, self.m_closed(i - 1)),
                lax_u(z, self.m_closed(i - 2)),
                -h,
            );
            v = om.exp_traceless(shift).apply(v);
            i -= 2;
        }
        let s = v[1];
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonConvergence(format!("Jost sweep overflow at z = {z}")));
        }
        Ok(s)
    }

    /// a(z) = e^{i kappa K} S11(z).
    pub fn a(&self, z: Cx<T>) -> Result<Cx<T>> {
        let ph = Complex::new(T::zero(), T::one()) * kappa(z) * self.k_total;
        Ok(ph.exp() * self.s11(z)?)
    }
}

/// Columns mu_{-,1} and mu_{+,2} of the normalized Jost solutions on the even nodes.
#[derive(Debug, Clone)]
pub struct JostColumns<T: Scalar> {
    pub x: Vec<T>,
    pub mu_minus_col1: Vec<[Cx<T>; 2]>,
    pub mu_plus_col2: Vec<[Cx<T>; 2]>,
}

/// Integrates psi_x = U psi with the fourth-order Magnus scheme (step 2 dx) and
/// returns mu_{-,1} (normalized at -L) and mu_{+,2} (normalized at +L).
pub fn jost_columns<T: Scalar>(datum: &InitialDatum<T>, z: Cx<T>) -> Result<JostColumns<T>> {
    check_spectral_z(z)?;
    let ka = kappa(z);
    let h = datum.dx() * T::c(2.0);
    let ii = Complex::new(T::zero(), T::one());
    let shift = ii * ka * h;
    let steps = datum.n / 2;
    let mut x = Vec::with_capacity(steps + 1);
    let mut w = Vec::with_capacity(steps + 1);
    let mut cur = [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())];
    x.push(datum.x_closed(0));
    w.push(cur);
    let mut i = 0;
    while i + 2 <= datum.n {
        let om = magnus(
            lax_u(z, datum.m_closed(i)),
            lax_u(z, datum.m_closed(i + 1)),
            lax_u(z, datum.m_closed(i + 2)),
            h,
        );
        cur = om.exp_traceless(shift).apply(cur);
        i += 2;
        x.push(datum.x_closed(i));
        w.push(cur);
    }
    let mut v = vec![[Complex::new(T::zero(), T::zero()); 2]; x.len()];
    let mut cur = [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())];
    let mut idx = x.len() - 1;
    v[idx] = cur;
    let mut i = datum.n;
    while i >= 2 {
        let om = magnus(
            lax_u(z, datum.m_closed(i)),
            lax_u(z, datum.m_closed(i - 1)),
            lax_u(z, datum.m_closed(i - 2)),
            -h,
        );
        cur = om.exp_traceless(shift).apply(cur);
        i -= 2;
        idx -= 1;
        v[idx] = cur;
    }
    Ok(JostColumns { x, mu_minus_col1: w, mu_plus_col2: v })
}

/// Full normalized Jost matrices mu_-(x) and mu_+(x) on the even nodes.
pub fn jost_matrices<T: Scalar>(datum: &InitialDatum<T>, z: Cx<T>) -> Result<(Vec<T>, Vec<Mat2<T>>, Vec<Mat2<T>>)> {
    check_spectral_z(z)?;
    let ka = kappa(z);
    let h = datum.dx() * T::c(2.0);
    let ii = Complex::new(T::zero(), T::one());
    let right = Mat2::diag((ii * ka * h).exp(), (-ii * ka * h).exp());
    let left = Mat2::diag((-ii * ka * h).exp(), (ii * ka * h).exp());
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = vec![datum.x_closed(0)];
    let mut mm = vec![Mat2::identity()];
    let mut i = 0;
    while i + 2 <= datum.n {
        let om = magnus(
            lax_u(z, datum.m_closed(i)),
            lax_u(z, datum.m_closed(i + 1)),
            lax_u(z, datum.m_closed(i + 2)),
            h,
        );
        let next = om.exp_traceless(zero) * *mm.last().unwrap() * right;
        mm.push(next);
        i += 2;
        x.push(datum.x_closed(i));
    }
    let mut mp = vec![Mat2::identity(); x.len()];
    let mut i = datum.n;
    let mut idx = x.len() - 1;
    while i >= 2 {
        let om = magnus(
            lax_u(z, datum.m_closed(i)),
            lax_u(z, datum.m_closed(i - 1)),
            lax_u(z, datum.m_closed(i - 2)),
            -h,
        );
        mp[idx - 1] = om.exp_traceless(zero) * mp[idx] * left;
        i -= 2;
        idx -= 1;
    }
    Ok((x, mm, mp))
}

/// Scattering matrix S = Phi_+^{-1} Phi_- evaluated from the Jost matrices at node `j`.
pub fn scattering_matrix_at<T: Scalar>(x: T, z: Cx<T>, mu_minus: &Mat2<T>, mu_plus: &Mat2<T>) -> Result<Mat2<T>> {
    let ii = Complex::new(T::zero(), T::one());
    let e = ii * kappa(z) * x;
    let conj_l = Mat2::diag(e.exp(), (-e).exp());
    let conj_r = Mat2::diag((-e).exp(), e.exp());
    Ok(conj_l * mu_plus.inverse()? * *mu_minus * conj_r)
}

/// Scattering data at a single z.
#[derive(Debug, Clone, Copy)]
pub struct ScatterPoint<T: Scalar> {
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub r: Cx<T>,
    pub s11: Cx<T>,
    pub s21: Cx<T>,
}

pub fn scatter_point<T: Scalar>(datum: &InitialDatum<T>, z: Cx<T>) -> Result<ScatterPoint<T>> {
    let cols = jost_columns(datum, z)?;
    let ii = Complex::new(T::zero(), T::one());
    let ka = kappa(z);
    let last = cols.x.len() - 1;
    let s11 = cols.mu_plus_col2[0][1];
    let s21 = cols.mu_minus_col1[last][1] * (-ii * ka * cols.x[last] * T::c(2.0)).exp();
    let ph = (ii * ka * datum.k_total).exp();
    Ok(ScatterPoint { a: ph * s11, b: ph * s21, r: s21 / s11, s11, s21 })
}

/// Sampled scattering coefficients on a real grid symmetric under z -> -1/z.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralTable<T: Scalar> {
    /// Ascending real grid.
    pub z_grid: Vec<T>,
    pub a: Vec<Cx<T>>,
    pub b: Vec<Cx<T>>,
    pub r: Vec<Cx<T>>,
    pub sigma_max: T,
    #[serde(skip)]
    interp: Option<TableInterp<T>>,
}

#[derive(Debug, Clone)]
struct TableInterp<T: Scalar> {
    // index 0: positive branch, 1: negative branch, both over sigma = ln|z|
    log1p: [CubicSpline<T>; 2],
    r_re: [CubicSpline<T>; 2],
    r_im: [CubicSpline<T>; 2],
}

/// log|z| nodes: `n_half` points uniformly spaced and symmetric in [-sigma_max, sigma_max],
/// never containing 0.
pub fn sigma_nodes<T: Scalar>(n_half: usize, sigma_max: T) -> Vec<T> {
    let n = n_half;
    (0..n)
        .map(|k| sigma_max * T::c((2 * k + 1) as f64 - n as f64) / T::n(n - 1).max(T::one()))
        .map(|s| if s == T::zero() { s + T::c(1e-9) } else { s })
        .collect()
}

/// Ascending z-grid: -e^{sigma} (sigma descending) followed by e^{sigma} (sigma ascending).
pub fn spectral_grid<T: Scalar>(n_half: usize, sigma_max: T) -> Vec<T> {
    let s = sigma_nodes(n_half, sigma_max);
    let mut z: Vec<T> = s.iter().rev().map(|v| -v.exp()).collect();
    z.extend(s.iter().map(|v| v.exp()));
    z
}

impl<T: Scalar> SpectralTable<T> {
    pub fn from_samples(z_grid: Vec<T>, a: Vec<Cx<T>>, b: Vec<Cx<T>>, r: Vec<Cx<T>>, sigma_max: T) -> Result<Self> {
        let n = z_grid.len();
        if n % 2 == 1 || a.len() != n || b.len() != n || r.len() != n || n < 8 {
            return Err(Error::InvalidInput("spectral table arrays are inconsistent".into()));
        }
        let half = n / 2;
        let branch = |pos: bool| -> Result<(CubicSpline<T>, CubicSpline<T>, CubicSpline<T>)> {
            let idx: Vec<usize> = if pos { (half..n).collect() } else { (0..half).rev().collect() };
            let sig: Vec<T> = idx.iter().map(|&i| z_grid[i].abs().ln()).collect();
            let lp: Vec<T> = idx.iter().map(|&i| r[i].norm_sqr().ln_1p()).collect();
            let re: Vec<T> = idx.iter().map(|&i| r[i].re).collect();
            let im: Vec<T> = idx.iter().map(|&i| r[i].im).collect();
            Ok((
                CubicSpline::new(sig.clone(), lp)?,
                CubicSpline::new(sig.clone(), re)?,
                CubicSpline::new(sig, im)?,
            ))
        };
        let (p0, p1, p2) = branch(true)?;
        let (n0, n1, n2) = branch(false)?;
        Ok(Self {
            z_grid,
            a,
            b,
            r,
            sigma_max,
            interp: Some(TableInterp { log1p: [p0, n0], r_re: [p1, n1], r_im: [p2, n2] }),
        })
    }

    /// Max |r(z) + r(-1/z)| over paired grid points.
    pub fn symmetry_defect(&self) -> T {
        let n = self.z_grid.len();
        let half = n / 2;
        let mut worst = T::zero();
        for k in 0..half {
            // z = e^{sigma_k} at half + k pairs with -1/z = -e^{-sigma_k} at k
            worst = worst.max((self.r[half + k] + self.r[k]).norm());
        }
        worst
    }

    /// Max ||a|^2 + |b|^2 - 1| over the grid.
    pub fn unitarity_defect(&self) -> T {
        self.a
            .iter()
            .zip(&self.b)
            .fold(T::zero(), |m, (a, b)| m.max((a.norm_sqr() + b.norm_sqr() - T::one()).abs()))
    }

    fn branch_sigma(&self, s: T) -> Option<(usize, T)> {
        if s == T::zero() {
            return None;
        }
        let sig = s.abs().ln();
        if sig.abs() > self.sigma_max {
            return None;
        }
        Some((if s > T::zero() { 0 } else { 1 }, sig))
    }
}

impl<T: Scalar> Reflection<T> for SpectralTable<T> {
    fn r(&self, s: T) -> Cx<T> {
        let ip = self.interp.as_ref().expect("table interpolants");
        match self.branch_sigma(s) {
            None => Complex::new(T::zero(), T::zero()),
            Some((b, sig)) => Complex::new(ip.r_re[b].eval(sig), ip.r_im[b].eval(sig)),
        }
    }

    fn log1p_r2(&self, s: T) -> T {
        let ip = self.interp.as_ref().expect("table interpolants");
        match self.branch_sigma(s) {
            None => T::zero(),
            Some((b, sig)) => ip.log1p[b].eval(sig).max(T::zero()),
        }
    }

    fn support(&self) -> (T, T) {
        ((-self.sigma_max).exp(), self.sigma_max.exp())
    }
}

/// Largest ln|z| resolved by the Jost sweep: 1.5 below the grid resonance 2 kappa (2 dx) = 2 pi,
/// and at most 7.
pub fn default_sigma_max<T: Scalar>(datum: &InitialDatum<T>) -> T {
    let z_res = T::c(2.0) * T::PI() / datum.dx();
    (z_res.ln() - T::c(1.5)).min(T::c(7.0))
}

/// Scattering coefficients on the symmetric grid of [`spectral_grid`], evaluated in parallel.
pub fn scattering_coeffs<T: Scalar>(datum: &InitialDatum<T>, n_half: usize, sigma_max: T) -> Result<SpectralTable<T>> {
    let z_grid = spectral_grid(n_half, sigma_max);
    let pts: Vec<ScatterPoint<T>> = z_grid
        .par_iter()
        .map(|&z| scatter_point(datum, Complex::new(z, T::zero())))
        .collect::<Result<Vec<_>>>()?;
    SpectralTable::from_samples(
        z_grid,
        pts.iter().map(|p| p.a).collect(),
        pts.iter().map(|p| p.b).collect(),
        pts.iter().map(|p| p.r).collect(),
        sigma_max,
    )
}

/// Search rectangle in the upper half plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchBox<T: Scalar> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

/// Zeros of a(z) in the upper half plane with their norming constants.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DiscreteSpectrum<T: Scalar> {
    pub poles: Vec<Cx<T>>,
    pub norming: Vec<Cx<T>>,
}

impl<T: Scalar> DiscreteSpectrum<T> {
    pub fn empty() -> Self {
        Self { poles: vec![], norming: vec![] }
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// Largest distance from -1/p to the nearest pole, over all poles p.
    pub fn pairing_defect(&self) -> T {
        self.poles
            .iter()
            .map(|p| {
                let q = -p.inv();
                self.poles.iter().fold(T::infinity(), |m, o| m.min((o - q).norm()))
            })
            .fold(T::zero(), |m, v| m.max(v))
    }
}

const CELL_SIZE: f64 = 0.05;
const EXCLUSION: f64 = 0.05;

fn winding<T: Scalar, F: Fn(Cx<T>) -> Result<Cx<T>>>(f: &F, corners: [Cx<T>; 4]) -> Result<i64> {
    let mut total = T::zero();
    for e in 0..4 {
        let (p, q) = (corners[e], corners[(e + 1) % 4]);
        total += edge_arg(f, p, q, f(p)?, f(q)?, 0)?;
    }
    Ok((total / (T::c(2.0) * T::PI())).round().to_i64().unwrap_or(0))
}

fn edge_arg<T: Scalar, F: Fn(Cx<T>) -> Result<Cx<T>>>(
    f: &F,
    p: Cx<T>,
    q: Cx<T>,
    fp: Cx<T>,
    fq: Cx<T>,
    depth: usize,
) -> Result<T> {
    let d = (fq / fp).arg();
    let m = (p + q) * T::c(0.5);
    let fm = f(m)?;
    if fm.norm() < T::c(1e-12) {
        return Err(Error::NonConvergence("zero of a(z) on a search-cell edge".into()));
    }
    let (d1, d2) = ((fm / fp).arg(), (fq / fm).arg());
    let small = T::c(0.3);
    let consistent = d.abs() < small && d1.abs() < small && d2.abs() < small && (d1 + d2 - d).abs() < T::c(1e-6);
    if (consistent && depth >= 3) || depth > 40 {
        return Ok(d1 + d2);
    }
    Ok(edge_arg(f, p, m, fp, fm, depth + 1)? + edge_arg(f, m, q, fm, fq, depth + 1)?)
}

fn newton_zero<T: Scalar, F: Fn(Cx<T>) -> Result<Cx<T>>>(f: &F, mut z: Cx<T>) -> Result<Cx<T>> {
    let h = T::c(1e-5);
    for _ in 0..60 {
        let fz = f(z)?;
        let dp = (f(z + h)? - f(z - h)?) / (h * T::c(2.0));
        let step = fz / dp;
        z -= step;
        if step.norm() < T::c(1e-14) * z.norm().max(T::one()) {
            break;
        }
    }
    Ok(z)
}

/// Argument-principle search for zeros of a(z) in `search_box`, refined by Newton.
///
/// Cells with nonzero winding are quartered down to side 0.05. Norming constants use
/// S11' from a radius-0.01 Cauchy circle (64 nodes) and S21 from the ratio of
/// Phi_{-,1} and Phi_{+,2} at the node where both are largest.
pub fn find_discrete_spectrum<T: Scalar>(datum: &InitialDatum<T>, search_box: SearchBox<T>) -> Result<DiscreteSpectrum<T>> {
    if search_box.im_min <= T::zero() || search_box.re_max <= search_box.re_min || search_box.im_max <= search_box.im_min {
        return Err(Error::InvalidInput("search box must be a nondegenerate rectangle in the upper half plane".into()));
    }
    let f = |z: Cx<T>| datum.s11(z);
    let mut stack = vec![search_box];
    let mut found: Vec<Cx<T>> = Vec::new();
    let cell = T::c(CELL_SIZE);
    while let Some(b) = stack.pop() {
        let corners = [
            Complex::new(b.re_min, b.im_min),
            Complex::new(b.re_max, b.im_min),
            Complex::new(b.re_max, b.im_max),
            Complex::new(b.re_min, b.im_max),
        ];
        let w = winding(&f, corners)?;
        if w == 0 {
            continue;
        }
        let (wr, wi) = (b.re_max - b.re_min, b.im_max - b.im_min);
        if wr.max(wi) > cell {
            // split off-centre so that symmetric data never puts a zero on an edge
            let fr = T::c(0.5 + 0.0137);
            let rm = b.re_min + wr * fr;
            let im = b.im_min + wi * fr;
            stack.push(SearchBox { re_min: b.re_min, re_max: rm, im_min: b.im_min, im_max: im });
            stack.push(SearchBox { re_min: rm, re_max: b.re_max, im_min: b.im_min, im_max: im });
            stack.push(SearchBox { re_min: b.re_min, re_max: rm, im_min: im, im_max: b.im_max });
            stack.push(SearchBox { re_min: rm, re_max: b.re_max, im_min: im, im_max: b.im_max });
            continue;
        }
        let centre = Complex::new((b.re_min + b.re_max) * T::c(0.5), (b.im_min + b.im_max) * T::c(0.5));
        let z = newton_zero(&f, centre)?;
        if found.iter().all(|p| (p - z).norm() > T::c(1e-6)) {
            found.push(z);
        }
    }
    let ii = Complex::new(T::zero(), T::one());
    let mut spec = DiscreteSpectrum::empty();
    for z in found {
        if z.im <= T::zero() || (z - ii).norm() < T::c(EXCLUSION) || z.norm() < T::c(EXCLUSION) {
            continue;
        }
        if datum.a(z)?.norm() > T::c(1e-8) {
            return Err(Error::NonConvergence(format!("Newton refinement left |a| > 1e-8 at {z}")));
        }
        let c = norming_constant(datum, z)?;
        spec.poles.push(z);
        spec.norming.push(c);
    }
    let order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..spec.poles.len()).collect();
        idx.sort_by(|&i, &j| {
            spec.poles[i]
                .re
                .partial_cmp(&spec.poles[j].re)
                .unwrap()
                .then(spec.poles[i].im.partial_cmp(&spec.poles[j].im).unwrap())
        });
        idx
    };
    Ok(DiscreteSpectrum {
        poles: order.iter().map(|&i| spec.poles[i]).collect(),
        norming: order.iter().map(|&i| spec.norming[i]).collect(),
    })
}

/// f'(c) from the trapezoid rule on the circle |z - c| = rad.
pub fn cauchy_derivative<T: Scalar, F: Fn(Cx<T>) -> Result<Cx<T>>>(f: F, c: Cx<T>, rad: T, nodes: usize) -> Result<Cx<T>> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..nodes {
        let th = T::c(2.0) * T::PI() * T::n(k) / T::n(nodes);
        let e = Complex::new(th.cos(), th.sin());
        acc += f(c + e * rad)? * e.conj();
    }
    Ok(acc / (rad * T::n(nodes)))
}

/// c = S21(rho) / S11'(rho) at a zero rho of a.
pub fn norming_constant<T: Scalar>(datum: &InitialDatum<T>, rho: Cx<T>) -> Result<Cx<T>> {
    let deriv = cauchy_derivative(|z| datum.s11(z), rho, T::c(0.01), 64)?;
    let cols = jost_columns(datum, rho)?;
    let ii = Complex::new(T::zero(), T::one());
    let ka = kappa(rho);
    let mut best = (T::zero(), Complex::new(T::zero(), T::zero()));
    for (j, &x) in cols.x.iter().enumerate() {
        let e = (ii * ka * x).exp();
        let phi_m = [cols.mu_minus_col1[j][0] / e, cols.mu_minus_col1[j][1] / e];
        let phi_p = [cols.mu_plus_col2[j][0] * e, cols.mu_plus_col2[j][1] * e];
        let comp = if phi_p[0].norm() > phi_p[1].norm() { 0 } else { 1 };
        let score = phi_p[comp].norm().min(phi_m[comp].norm());
        if score > best.0 {
            best = (score, phi_m[comp] / phi_p[comp]);
        }
    }
    if best.0 == T::zero() {
        return Err(Error::NonConvergence("Jost solutions vanish at the zero".into()));
    }
    Ok(best.1 / deriv)
}
