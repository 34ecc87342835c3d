//! Scalar factors of the deformation: nu, delta, T, Sigma_0, the stationary-point
//! phases beta_j and moduli T_j, and the partition of the discrete spectrum.

use crate::error::{Error, Result};
use crate::phase::{im_theta, sigma_intervals, PhasePortrait, Region};
use crate::quad::adaptive;
use crate::scalar::{Cx, Scalar};
use crate::scattering::DiscreteSpectrum;
use num_complex::Complex;
use serde::Serialize;

/// Real-line reflection data consumed by the scalar factor.
pub trait Reflection<T: Scalar>: Send + Sync {
    /// r(s) for real s.
    fn r(&self, s: T) -> Cx<T>;

    /// ln(1 + |r(s)|^2).
    fn log1p_r2(&self, s: T) -> T {
        self.r(s).norm_sqr().ln_1p()
    }

    /// Range of |s| outside which r is treated as zero.
    fn support(&self) -> (T, T);
}

/// nu(s) = -ln(1 + |r(s)|^2) / (2 pi).
pub fn nu<T: Scalar, R: Reflection<T> + ?Sized>(refl: &R, s: T) -> T {
    -refl.log1p_r2(s) / (T::c(2.0) * T::PI())
}

/// r identically zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoReflection;

impl<T: Scalar> Reflection<T> for NoReflection {
    fn r(&self, _s: T) -> Cx<T> {
        Complex::new(T::zero(), T::zero())
    }

    fn log1p_r2(&self, _s: T) -> T {
        T::zero()
    }

    fn support(&self) -> (T, T) {
        (T::one(), T::one())
    }
}

/// Reflection coefficient given by a closure, supported on e^{-sigma_max} <= |s| <= e^{sigma_max}.
pub struct FnReflection<T: Scalar, F: Fn(T) -> Cx<T> + Send + Sync> {
    pub f: F,
    pub sigma_max: T,
}

impl<T: Scalar, F: Fn(T) -> Cx<T> + Send + Sync> Reflection<T> for FnReflection<T, F> {
    fn r(&self, s: T) -> Cx<T> {
        let a = s.abs();
        let (lo, hi) = self.support();
        if a < lo || a > hi {
            return Complex::new(T::zero(), T::zero());
        }
        (self.f)(s)
    }

    fn support(&self) -> (T, T) {
        ((-self.sigma_max).exp(), self.sigma_max.exp())
    }
}

/// Partition of the discrete spectrum by the sign and size of Im theta at each pole.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition<T: Scalar> {
    pub nabla: Vec<usize>,
    pub delta: Vec<usize>,
    pub lambda: Vec<usize>,
    /// min |Im theta| over poles outside lambda; infinite when there are none.
    pub rho0: T,
    pub n_lambda: usize,
    pub delta0: T,
}

/// Splits the poles into nabla, delta and lambda for the given xi and threshold.
pub fn partition_spectrum<T: Scalar>(spectrum: &DiscreteSpectrum<T>, xi: T, delta0: T) -> Result<Partition<T>> {
    if !(delta0 > T::zero()) {
        return Err(Error::InvalidInput("delta0 must be positive".into()));
    }
    let (mut nabla, mut delta, mut lambda) = (vec![], vec![], vec![]);
    let mut rho0 = T::infinity();
    for (n, &p) in spectrum.poles.iter().enumerate() {
        let v = im_theta(p, xi)?;
        if delta0.is_finite() && (v.abs() - delta0).abs() <= T::c(1e-12) {
            return Err(Error::ThresholdCollision { index: n, value: v.f64(), delta0: delta0.f64() });
        }
        if v < T::zero() {
            nabla.push(n);
        } else if v > T::zero() {
            delta.push(n);
        }
        if v.abs() <= delta0 {
            lambda.push(n);
        } else {
            rho0 = rho0.min(v.abs());
        }
    }
    let n_lambda = lambda.len();
    Ok(Partition { nabla, delta, lambda, rho0, n_lambda, delta0 })
}

/// A sub-interval of Sigma(xi) of one sign, truncated to the reflection support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece<T: Scalar> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> Piece<T> {
    fn contains(&self, x: T) -> bool {
        x > self.a && x < self.b
    }

    fn sign(&self) -> T {
        if self.b > T::zero() {
            T::one()
        } else {
            -T::one()
        }
    }

    fn sigma_range(&self) -> (T, T) {
        (self.a.abs().ln(), self.b.abs().ln())
    }
}

/// Splits intervals at zero and clips them to lo <= |s| <= hi.
pub fn pieces_of<T: Scalar>(intervals: &[(T, T)], lo: T, hi: T) -> Vec<Piece<T>> {
    let mut out = Vec::new();
    if !(hi > lo) {
        return out;
    }
    for &(a, b) in intervals {
        let (pa, pb) = (a.max(lo), b.min(hi));
        if pb > pa {
            out.push(Piece { a: pa, b: pb });
        }
        let (na, nb) = (a.max(-hi), b.min(-lo));
        if nb > na {
            out.push(Piece { a: na, b: nb });
        }
    }
    out.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    out
}

/// Side from which a boundary value on Sigma(xi) is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Distance from Sigma(xi) below which delta uses one-sided limits.
pub const NEAR_AXIS: f64 = 1e-4;
const QUAD_ABS: f64 = 1e-14;
const QUAD_REL: f64 = 1e-12;

/// The interpolating scalar factor T(z) and its derived data for one value of xi.
pub struct ScalarFactor<'a, T: Scalar> {
    refl: &'a dyn Reflection<T>,
    pub xi: T,
    pub region: Region,
    pub sigma_xi: Vec<(T, T)>,
    pub pieces: Vec<Piece<T>>,
    /// Poles whose Blaschke factors (z - p)/(z - conj p) enter T.
    pub blaschke: Vec<Cx<T>>,
    pub t_at_i: Cx<T>,
    pub sigma0: Cx<T>,
    pub nu_j: Vec<T>,
    pub beta_j: Vec<T>,
    pub t_j: Vec<Cx<T>>,
}

impl<'a, T: Scalar> std::fmt::Debug for ScalarFactor<'a, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFactor")
            .field("xi", &self.xi)
            .field("region", &self.region)
            .field("pieces", &self.pieces)
            .field("blaschke", &self.blaschke)
            .field("t_at_i", &self.t_at_i)
            .field("sigma0", &self.sigma0)
            .field("beta_j", &self.beta_j)
            .finish()
    }
}

/// Builds T with Blaschke factors over the delta set of `partition`.
pub fn build_scalar_factor<'a, T: Scalar>(
    refl: &'a dyn Reflection<T>,
    spectrum: &DiscreteSpectrum<T>,
    partition: &Partition<T>,
    portrait: &PhasePortrait<T>,
) -> Result<ScalarFactor<'a, T>> {
    let poles = partition.delta.iter().map(|&n| spectrum.poles[n]).collect();
    ScalarFactor::new(refl, portrait, poles)
}

/// Builds the factor used by the asymptotic formulas: Blaschke factors over delta minus lambda.
pub fn build_reduced_factor<'a, T: Scalar>(
    refl: &'a dyn Reflection<T>,
    spectrum: &DiscreteSpectrum<T>,
    partition: &Partition<T>,
    portrait: &PhasePortrait<T>,
) -> Result<ScalarFactor<'a, T>> {
    let poles = partition
        .delta
        .iter()
        .filter(|n| !partition.lambda.contains(n))
        .map(|&n| spectrum.poles[n])
        .collect();
    ScalarFactor::new(refl, portrait, poles)
}

impl<'a, T: Scalar> ScalarFactor<'a, T> {
    pub fn new(refl: &'a dyn Reflection<T>, portrait: &PhasePortrait<T>, blaschke: Vec<Cx<T>>) -> Result<Self> {
        let sigma_xi = sigma_intervals(portrait);
        let (lo, hi) = refl.support();
        let pieces = pieces_of(&sigma_xi, lo, hi);
        let mut sf = ScalarFactor {
            refl,
            xi: portrait.xi,
            region: portrait.region,
            sigma_xi,
            pieces,
            blaschke,
            t_at_i: Complex::new(T::one(), T::zero()),
            sigma0: Complex::new(T::zero(), T::zero()),
            nu_j: vec![],
            beta_j: vec![],
            t_j: vec![],
        };
        let i = Complex::new(T::zero(), T::one());
        sf.t_at_i = sf.t(i)?;
        sf.sigma0 = sf.compute_sigma0()?;
        if portrait.region.has_points() {
            let (tj, bj) = t_j_and_beta_j(&sf, portrait)?;
            sf.nu_j = portrait.points.iter().map(|&p| sf.nu(p)).collect();
            sf.t_j = tj;
            sf.beta_j = bj;
        }
        Ok(sf)
    }

    pub fn reflection(&self) -> &'a dyn Reflection<T> {
        self.refl
    }

    pub fn nu(&self, s: T) -> T {
        nu(self.refl, s)
    }

    fn sample(&self, piece: &Piece<T>, sigma: T) -> T {
        piece.sign() * sigma.exp()
    }

    /// integral over `piece` of (nu(s) - nu(anchor)) * kernel(s) ds.
    fn piece_integral<K: Fn(T) -> Cx<T>>(&self, piece: &Piece<T>, anchor_nu: T, kernel: K) -> Result<Cx<T>> {
        let (sa, sb) = piece.sigma_range();
        let f = |sig: T| {
            let s = self.sample(piece, sig);
            kernel(s) * ((self.nu(s) - anchor_nu) * s)
        };
        // sigma decreases along negative pieces; the reversed limits carry the orientation
        adaptive(&f, sa, sb, T::c(QUAD_ABS), T::c(QUAD_REL))
    }

    /// Cauchy integral I(z) = int_Sigma nu(s)/(s - z) ds, with a side for z on Sigma.
    ///
    /// Each piece contributes the subtracted integral of (nu(s) - nu(x_p))/(s - z) plus
    /// nu(x_p) ln((z - b)/(z - a)), x_p being Re z clamped to the piece. Within
    /// [`NEAR_AXIS`] of the piece the subtracted integral takes its boundary value at Re z
    /// and the logarithm carries the jump.
    pub fn cauchy(&self, z: Cx<T>, side: Option<Side>) -> Result<Cx<T>> {
        let mut total = Complex::new(T::zero(), T::zero());
        let near = z.im.abs() < T::c(NEAR_AXIS);
        for piece in &self.pieces {
            let on = near && piece.contains(z.re);
            let xp = z.re.max(piece.a).min(piece.b);
            let nup = self.nu(xp);
            let zq = if on { Complex::new(z.re, T::zero()) } else { z };
            total += self.piece_integral(piece, nup, |s| (Complex::new(s, T::zero()) - zq).inv())?;
            if nup != T::zero() {
                let lg = if on && z.im == T::zero() {
                    let ang = match side {
                        Some(Side::Plus) => T::PI(),
                        Some(Side::Minus) => -T::PI(),
                        None => {
                            return Err(Error::Domain(format!("z = {z} lies on Sigma(xi); a side is required")));
                        }
                    };
                    Complex::new(((z.re - piece.b) / (z.re - piece.a)).abs().ln(), ang)
                } else {
                    ((z - piece.b) / (z - piece.a)).ln()
                };
                total += lg * nup;
            }
        }
        Ok(total)
    }

    /// delta(z) = exp(-i I(z)).
    pub fn delta(&self, z: Cx<T>) -> Result<Cx<T>> {
        self.delta_side(z, None)
    }

    pub fn delta_side(&self, z: Cx<T>, side: Option<Side>) -> Result<Cx<T>> {
        let i = Complex::new(T::zero(), T::one());
        Ok((-i * self.cauchy(z, side)?).exp())
    }

    /// Product of (z - p)/(z - conj p) over the Blaschke poles.
    pub fn blaschke_product(&self, z: Cx<T>) -> Result<Cx<T>> {
        let mut b = Complex::new(T::one(), T::zero());
        for &p in &self.blaschke {
            let den = z - p.conj();
            if den.norm() == T::zero() {
                return Err(Error::PoleEvaluation(format!("T has a pole at {z}")));
            }
            b = b * (z - p) / den;
        }
        Ok(b)
    }

    pub fn t(&self, z: Cx<T>) -> Result<Cx<T>> {
        self.t_side(z, None)
    }

    pub fn t_side(&self, z: Cx<T>, side: Option<Side>) -> Result<Cx<T>> {
        Ok(self.blaschke_product(z)? * self.delta_side(z, side)?)
    }

    /// Ratio T_-(x)/T_+(x) for x on Sigma(xi).
    pub fn boundary_ratio(&self, x: T) -> Result<Cx<T>> {
        let z = Complex::new(x, T::zero());
        Ok(self.t_side(z, Some(Side::Minus))? / self.t_side(z, Some(Side::Plus))?)
    }

    /// Sigma_0 = i int_Sigma nu(s)/(s - i)^2 ds.
    fn compute_sigma0(&self) -> Result<Cx<T>> {
        let i = Complex::new(T::zero(), T::one());
        let mut total = Complex::new(T::zero(), T::zero());
        for piece in &self.pieces {
            total += self.piece_integral(piece, T::zero(), |s| {
                    let d = Complex::new(s, T::zero()) - i;
                    (d * d).inv()
                })?;
        }
        Ok(i * total)
    }

    /// Local model of T near stationary point k: T_k (eta (z - xi_k))^{-i eta nu_k}.
    pub fn local_power(&self, k: usize, eta: i8, xk: T, z: Cx<T>) -> Cx<T> {
        let e = T::c(eta as f64);
        let w = (z - xk) * e;
        let ex = Complex::new(T::zero(), -e * self.nu_j[k]);
        self.t_j[k] * crate::scalar::cpow(w, ex)
    }
}

/// Sigma_0 for the given data.
pub fn sigma0<T: Scalar>(refl: &dyn Reflection<T>, portrait: &PhasePortrait<T>) -> Result<Cx<T>> {
    Ok(ScalarFactor::new(refl, portrait, vec![])?.sigma0)
}

/// T_j and beta_j(xi_j) at every stationary point of `portrait`.
///
/// On the piece abutting xi_j the endpoint logarithm is cancelled against the local
/// power before quadrature, leaving a bounded integrand.
pub fn t_j_and_beta_j<T: Scalar>(sf: &ScalarFactor<'_, T>, portrait: &PhasePortrait<T>) -> Result<(Vec<Cx<T>>, Vec<T>)> {
    let mut tj = Vec::with_capacity(portrait.points.len());
    let mut bj = Vec::with_capacity(portrait.points.len());
    let tol = T::c(1e-9);
    for (k, &xk) in portrait.points.iter().enumerate() {
        let eta = portrait.eta_signs[k];
        let nk = sf.nu(xk);
        let mut beta = T::zero();
        let mut abut = false;
        for piece in &sf.pieces {
            let is_abut = if eta > 0 { (piece.b - xk).abs() <= tol } else { (piece.a - xk).abs() <= tol };
            let anchor = if is_abut { nk } else { T::zero() };
            let v = sf.piece_integral(piece, anchor, |s| Complex::new(s - xk, T::zero()).inv())?;
            beta -= v.re;
            if is_abut {
                abut = true;
                beta = if eta > 0 { beta + nk * (xk - piece.a).ln() } else { beta - nk * (piece.b - xk).ln() };
            }
        }
        if !abut && nk != T::zero() {
            return Err(Error::InvalidInput(format!(
                "stationary point {xk} is not an endpoint of a reflection-supported piece of Sigma(xi)"
            )));
        }
        let b = sf.blaschke_product(Complex::new(xk, T::zero()))?;
        tj.push(b * Complex::new(beta.cos(), beta.sin()));
        bj.push(beta);
    }
    Ok((tj, bj))
}
