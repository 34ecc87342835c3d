//! The acceptance suite: criteria 1 to 8, each reported with measured values, bounds and
//! runtime. Random sweeps are driven by a seeded ChaCha generator so reports are
//! reproducible.

use crate::asymptotics::local::{local_point, psi_jump_residual, LocalModelData};
use crate::asymptotics::{error_coefficients, k11_display, k11_linearized, AsymptoticContext};
use crate::deformation::{FnReflection, Reflection, ScalarFactor};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::pde_sim::{relative_l2, Simulator, Trajectory};
use crate::phase::{region_of, stationary_points, theta, theta_prime, Region, BOUNDARY_TOL};
use crate::scattering::{
    default_sigma_max, find_discrete_spectrum, precompute_geometry, scattering_coeffs, sech_profile, y_of_x,
    InitialDatum, SearchBox, SpectralTable,
};
use crate::soliton::{eval_m, profile_refined, solve_soliton_system, SolitonData};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// One measured quantity with its bound. `passed` means `measured <= bound`, except for
/// checks marked `at_least`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub at_least: bool,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, bound, at_least: false, passed: measured <= bound }
    }

    pub fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, bound, at_least: true, passed: measured >= bound }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub passed: bool,
    pub note: String,
}

impl CriterionReport {
    fn finish(id: u8, name: &str, mut checks: Vec<Check>, start: Instant, budget: f64, note: String) -> Self {
        let seconds = start.elapsed().as_secs_f64();
        checks.push(Check::at_most("runtime [s]", seconds, budget));
        let passed = checks.iter().all(|c| c.passed);
        Self { id, name: name.into(), checks, seconds, budget_seconds: budget, passed, note }
    }

    fn failed(id: u8, name: &str, err: &Error, start: Instant, budget: f64) -> Self {
        Self {
            id,
            name: name.into(),
            checks: vec![],
            seconds: start.elapsed().as_secs_f64(),
            budget_seconds: budget,
            passed: false,
            note: format!("error: {err}"),
        }
    }

    /// One line: id, verdict, and the worst check relative to its bound.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let detail = self
            .checks
            .iter()
            .map(|c| {
                let op = if c.at_least { ">=" } else { "<=" };
                format!("{} = {:.3e} {} {:.1e}", c.name, c.measured, op, c.bound)
            })
            .collect::<Vec<_>>()
            .join("; ");
        let note = if self.note.is_empty() { String::new() } else { format!(" [{}]", self.note) };
        format!("criterion {} {}: {} ({}){}", self.id, verdict, self.name, detail, note)
    }
}

/// Parameters of the long-time comparison (criterion 7).
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRun {
    pub amplitude: f64,
    pub phase_velocity: f64,
    pub xi: f64,
    pub half_width: f64,
    pub times: Vec<f64>,
    pub l: f64,
    pub n: usize,
    pub scatter_l: f64,
    pub scatter_n: usize,
    pub n_half: usize,
}

impl Default for AsymptoticRun {
    fn default() -> Self {
        Self {
            amplitude: 0.2,
            phase_velocity: 0.5,
            xi: -0.5,
            half_width: 0.01,
            times: vec![40.0, 80.0, 160.0],
            l: 256.0,
            n: 8192,
            scatter_l: 30.0,
            scatter_n: 4096,
            n_half: 1400,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticComparison {
    pub times: Vec<f64>,
    pub sup_errors: Vec<f64>,
    pub samples: Vec<usize>,
    pub slope: f64,
    pub poles_found: usize,
    pub g_drift: f64,
    pub duration: f64,
}

/// Settings for a full suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub asymptotic: AsymptoticRun,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 20240531, asymptotic: AsymptoticRun::default() }
    }
}

/// Drift of g per 10 time units over a trajectory.
pub fn drift_rate(traj: &Trajectory<f64>) -> f64 {
    let t0 = traj.snapshots[0].t;
    let duration = traj.last().t - t0;
    traj.g_drift() * 10.0 / duration.max(10.0)
}

/// Least-squares slope of log(err) against log(t).
pub fn loglog_slope(t: &[f64], err: &[f64]) -> f64 {
    let n = t.len() as f64;
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn uniform_avoiding(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let v = rng.gen_range(lo..hi);
        if crate::phase::CRITICAL_XI.iter().all(|c| (v - c).abs() > 1e3 * BOUNDARY_TOL) {
            return v;
        }
    }
}

/// Criterion 1: stationary-point counts and the reciprocal/negation chains.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let name = "stationary-point structure";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let regions = [
        (Region::LeftNoPoint, -4.0, -1.0, 0usize),
        (Region::FourPoints, -1.0, 0.0, 4),
        (Region::EightPoints, 0.0, 0.125, 8),
        (Region::RightNoPoint, 0.125, 4.0, 0),
    ];
    let mut miscount = 0usize;
    let mut chain = 0.0f64;
    let mut stationarity = 0.0f64;
    for &(region, lo, hi, count) in &regions {
        for _ in 0..50 {
            let xi = uniform_avoiding(&mut rng, lo, hi);
            let p = match stationary_points(xi) {
                Ok(p) => p,
                Err(e) => return CriterionReport::failed(1, name, &e, start, 5.0),
            };
            if p.region != region || p.points.len() != count {
                miscount += 1;
                continue;
            }
            let n = p.points.len();
            for k in 0..n {
                chain = chain.max((p.points[k] + p.points[n - 1 - k]).abs());
                let d = theta_prime(C::new(p.points[k], 0.0), xi).map(|v| v.norm()).unwrap_or(f64::INFINITY);
                stationarity = stationarity.max(d);
            }
            let h = n / 2;
            for j in 0..h {
                chain = chain.max((p.points[j] * p.points[h - 1 - j] - 1.0).abs());
            }
        }
    }
    let checks = vec![
        Check::at_most("miscounted xi", miscount as f64, 0.0),
        Check::at_most("chain defect", chain, 1e-10),
        Check::at_most("max |theta'(xi_k)|", stationarity, 1e-10),
    ];
    CriterionReport::finish(1, name, checks, start, 5.0, String::new())
}

/// Criterion 2: scattering identities for three sech-family data.
pub fn criterion_2() -> CriterionReport {
    let start = Instant::now();
    let name = "scattering identities";
    let run = || -> Result<Vec<Check>> {
        let data = [(0.2, 0.5), (0.6, -1.0), (1.0, 0.3)];
        let (l, n, n_half) = (30.0, 4096, 400);
        let mut unit = 0.0f64;
        let mut sym = 0.0f64;
        let mut a_i = 0.0f64;
        let mut a_circle = 0.0f64;
        for &(amp, v) in &data {
            let datum = precompute_geometry(&sech_profile(amp, v, l, n), l)?;
            let table = scattering_coeffs(&datum, n_half, default_sigma_max(&datum))?;
            unit = unit.max(table.unitarity_defect());
            sym = sym.max(table.symmetry_defect());
            let exact = (-0.5 * datum.k_total).exp();
            let at_i = datum.a(C::i())?;
            a_i = a_i.max((at_i - exact).norm() / exact);
            let samples: Vec<C> = (0..32)
                .into_par_iter()
                .map(|k| {
                    let z = C::i() + C::from_polar(0.1, 2.0 * std::f64::consts::PI * k as f64 / 32.0);
                    datum.a(z)
                })
                .collect::<Result<_>>()?;
            let mean = samples.iter().sum::<C>() / 32.0;
            a_circle = a_circle.max((mean - exact).norm() / exact);
        }
        Ok(vec![
            Check::at_most("max ||a|^2 + |b|^2 - 1|", unit, 1e-6),
            Check::at_most("max |r(z) + r(-1/z)|", sym, 1e-6),
            Check::at_most("a(i) rel. error", a_i, 1e-6),
            Check::at_most("circle mean of a about i, rel. error", a_circle, 1e-6),
        ])
    };
    match run() {
        Ok(c) => CriterionReport::finish(2, name, c, start, 120.0, String::new()),
        Err(e) => CriterionReport::failed(2, name, &e, start, 120.0),
    }
}

/// Reference radiation datum 0.2 sech(x) e^{0.5 i x} on [-30, 30) with N = 4096.
pub fn reference_table() -> Result<(InitialDatum<f64>, SpectralTable<f64>)> {
    let (l, n) = (30.0, 4096);
    let datum = precompute_geometry(&sech_profile(0.2, 0.5, l, n), l)?;
    let table = scattering_coeffs(&datum, 1400, default_sigma_max(&datum))?;
    Ok((datum, table))
}

/// Criterion 3: the T-function suite.
pub fn criterion_3(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let name = "T-function suite";
    let run = || -> Result<(Vec<Check>, String)> {
        let (_, table) = reference_table()?;
        let refl: &dyn Reflection<f64> = &table;
        let rho = C::new(0.6, 0.9);
        let blaschke = vec![rho, -rho.inv()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
        let xis = [-2.0, -0.5, 0.05, 1.0];
        let mut ends = 0.0f64;
        let mut sym = 0.0f64;
        let mut refl_sym = 0.0f64;
        let mut ratio = 0.0f64;
        let mut exponent = f64::INFINITY;
        let mut sigma0 = 0.0f64;
        for (q, &xi) in xis.iter().enumerate() {
            let portrait = stationary_points(xi)?;
            let sf = ScalarFactor::new(refl, &portrait, blaschke.clone())?;
            sigma0 = sigma0.max(sf.sigma0.norm());
            ends = ends.max((sf.t(C::new(0.0, 0.0))? - 1.0).norm());
            ends = ends.max((sf.t(C::new(0.0, 1e9))? - 1.0).norm());
            let mut taken = 0;
            while taken < 25 {
                let modulus = rng.gen_range(-1.5f64..1.5).exp();
                let mut arg = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
                if rng.gen_bool(0.5) {
                    arg = -arg;
                }
                let z = C::from_polar(modulus, arg);
                let near = |p: C| (z - p).norm() < 0.05 || (z - p.conj()).norm() < 0.05;
                if blaschke.iter().any(|&p| near(p)) {
                    continue;
                }
                taken += 1;
                let tz = sf.t(z)?;
                let scale = 1.0 + tz.norm();
                sym = sym.max((tz - sf.t(-z.inv())?).norm() / scale);
                refl_sym = refl_sym.max((tz * sf.t(z.conj())?.conj() - 1.0).norm());
            }
            if !sf.pieces.is_empty() {
                for k in 0..5 {
                    let piece = sf.pieces[(k + q) % sf.pieces.len()];
                    let (sa, sb) = (piece.a.abs().ln(), piece.b.abs().ln());
                    let s = rng.gen_range(sa.min(sb) + 1e-3..sa.max(sb) - 1e-3);
                    let x = s.exp() * piece.a.signum();
                    let want = 1.0 + table.r(x).norm_sqr();
                    ratio = ratio.max((sf.boundary_ratio(x)? - want).norm());
                }
            }
            let dir = C::from_polar(1.0, 0.2 * std::f64::consts::PI);
            let errs: Vec<f64> = [1e-2, 1e-3]
                .iter()
                .map(|&eps| {
                    let w = dir * eps;
                    let z = C::i() + w;
                    Ok((sf.t(z)? - sf.t_at_i * (1.0 - sf.sigma0 * w)).norm())
                })
                .collect::<Result<_>>()?;
            exponent = exponent.min((errs[0] / errs[1]).log10());
        }
        Ok((
            vec![
                Check::at_most("|T(0) - 1|, |T(inf) - 1|", ends, 1e-6),
                Check::at_most("max |T(z) - T(-1/z)|", sym, 1e-6),
                Check::at_most("max |T(z) conj T(conj z) - 1|", refl_sym, 1e-6),
                Check::at_most("boundary ratio defect", ratio, 1e-6),
                Check::at_least("expansion exponent at i", exponent, 1.9),
            ],
            format!("|Sigma_0| <= {sigma0:.1e}"),
        ))
    };
    match run() {
        Ok((c, note)) => CriterionReport::finish(3, name, c, start, 60.0, note),
        Err(e) => CriterionReport::failed(3, name, &e, start, 60.0),
    }
}

/// One-soliton data used by criteria 4 and 8.
pub fn reference_soliton() -> Result<SolitonData<f64>> {
    SolitonData::paired(C::from_polar(1.0, 0.15 * std::f64::consts::PI), C::new(1.0, 0.0))
}

/// Criterion 4: soliton system residuals and PDE agreement. Also returns the trajectory
/// for the conservation check.
pub fn criterion_4() -> (CriterionReport, Option<Trajectory<f64>>) {
    let start = Instant::now();
    let name = "soliton oracle";
    let run = || -> Result<(Vec<Check>, Trajectory<f64>)> {
        let one = reference_soliton()?;
        let two = reference_soliton()?.with_pair(C::from_polar(1.3, 0.35 * std::f64::consts::PI), C::new(0.5, 0.2))?;
        let mut residual = 0.0f64;
        for data in [&one, &two] {
            for t in [0.0, 2.5, 5.0] {
                for j in 0..41 {
                    let y = -20.0 + j as f64;
                    residual = residual.max(solve_soliton_system(data, y, t)?.residual);
                }
            }
        }
        let sim = Simulator::new(40.0, 1024)?;
        let x = sim.x_grid();
        let y_range = (-70.0, 70.0);
        let u0 = profile_refined(&one, 0.0, y_range, 800, &x)?;
        let u5 = profile_refined(&one, 5.0, y_range, 800, &x)?;
        let traj = sim.evolve(&sim.snapshot_from_u(u0, 0.0), 0.01, &[1.0, 2.0, 3.0, 4.0, 5.0])?;
        let err = relative_l2(&traj.last().u, &u5);
        Ok((
            vec![
                Check::at_most("soliton system residual", residual, 1e-10),
                Check::at_most("relative L2 vs simulator at t = 5", err, 1e-3),
            ],
            traj,
        ))
    };
    match run() {
        Ok((c, traj)) => (CriterionReport::finish(4, name, c, start, 300.0, String::new()), Some(traj)),
        Err(e) => (CriterionReport::failed(4, name, &e, start, 300.0), None),
    }
}

/// Smooth reflection profile with r(-1/s) = -r(s), built from a few Gaussian bumps in ln|s|.
fn random_profile(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> C + Send + Sync + Clone {
    let bumps: Vec<(f64, f64, C)> = (0..3)
        .map(|_| {
            let centre = rng.gen_range(-1.5..1.5);
            let width = rng.gen_range(0.3..1.2);
            let c = C::from_polar(rng.gen_range(0.05..0.8), rng.gen_range(0.0..std::f64::consts::TAU));
            (centre, width, c)
        })
        .collect();
    let freq = rng.gen_range(-2.0..2.0);
    move |s: f64| {
        let f = |sigma: f64| -> C {
            bumps.iter().map(|&(m, w, c)| c * (-(sigma - m).powi(2) / (w * w)).exp()).sum::<C>()
                * C::from_polar(1.0, freq * sigma)
        };
        if s > 0.0 {
            f(s.ln())
        } else {
            -f(-(-s).ln())
        }
    }
}

/// Criterion 5: closed-form beta identities, residue formulas and the model jump.
pub fn criterion_5(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let name = "local-model identities";
    let run = || -> Result<Vec<Check>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
        let mut prod = 0.0f64;
        let mut modulus = 0.0f64;
        let mut contour = 0.0f64;
        let solitons = reference_soliton()?;
        for q in 0..100 {
            let profile = random_profile(&mut rng);
            let refl = FnReflection { f: profile, sigma_max: 6.0 };
            let xi = if q % 2 == 0 { rng.gen_range(-0.95..-0.05) } else { rng.gen_range(0.01..0.115) };
            let t = rng.gen_range(5.0..200.0);
            let portrait = stationary_points(xi)?;
            let sf = ScalarFactor::new(&refl, &portrait, vec![])?;
            let mut points = Vec::new();
            for (k, &xk) in portrait.points.iter().enumerate() {
                let th = theta(C::new(xk, 0.0), xi)?.re;
                let p = local_point(xk, portrait.eta_signs[k], th, portrait.theta_second[k], refl.r(xk), sf.t_j[k], t);
                prod = prod.max((p.beta12 * p.beta21 + p.nu).norm());
                modulus = modulus.max((p.beta12.norm_sqr() + p.nu / (1.0 + p.r_at_k.norm_sqr())).abs());
                points.push(p);
            }
            if q < 10 {
                let state = solve_soliton_system(&solitons, xi * t, t)?;
                let local = LocalModelData { t, points };
                let (e0, e1) = error_coefficients(&local, |s| eval_m(&state, C::new(s, 0.0)))?;
                let (c0, c1) = contour_coefficients(&local, |s| eval_m(&state, s))?;
                let scale = 1.0 + e0.max_abs().max(e1.max_abs());
                contour = contour.max((c0 - e0).max_abs() / scale).max((c1 - e1).max_abs() / scale);
            }
        }
        let mut jump = 0.0f64;
        for k in 0..20 {
            let zeta = -8.0 + 16.0 * k as f64 / 19.0;
            let r0 = C::from_polar(rng.gen_range(0.1..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
            jump = jump.max(psi_jump_residual(zeta, r0)?);
        }
        Ok(vec![
            Check::at_most("|beta12 beta21 + nu|", prod, 1e-10),
            Check::at_most("||beta12|^2 + nu/(1+|r|^2)|", modulus, 1e-10),
            Check::at_most("E0/E1 vs contour quadrature", contour, 1e-8),
            Check::at_most("Psi jump residual", jump, 1e-6),
        ])
    };
    match run() {
        Ok(c) => CriterionReport::finish(5, name, c, start, 120.0, String::new()),
        Err(e) => CriterionReport::failed(5, name, &e, start, 120.0),
    }
}

/// E0 and E1 by 256-node trapezoid quadrature on radius-0.1 circles about each xi_k,
/// traversed clockwise.
pub fn contour_coefficients<F: Fn(C) -> Result<Mat2<f64>>>(
    local: &LocalModelData<f64>,
    m_at: F,
) -> Result<(Mat2<f64>, Mat2<f64>)> {
    let nodes = 256;
    let rho = 0.1;
    let mut e0 = Mat2::zero();
    let mut e1 = Mat2::zero();
    for p in &local.points {
        let centre = C::new(p.xi_k, 0.0);
        for k in 0..nodes {
            let e = C::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64);
            let z = centre + e * rho;
            let m = m_at(z)?;
            let a = m * p.h * m.inverse()?;
            // dz / (2 pi i) = rho e dtheta / (2 pi), negated for the clockwise orientation
            let w = -(e * rho) / (nodes as f64) / (z - centre);
            let d = z - C::i();
            e0 = e0 + a.scale(w / d);
            e1 = e1 + a.scale(w / (d * d));
        }
    }
    Ok((e0, e1))
}

fn random_c(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Value-type symmetry: real diagonal, imaginary off-diagonal.
fn forced_value(rng: &mut ChaCha8Rng) -> Mat2<f64> {
    Mat2::new(
        C::new(rng.gen_range(0.5..1.5), 0.0),
        C::new(0.0, rng.gen_range(-1.0..1.0)),
        C::new(0.0, rng.gen_range(-1.0..1.0)),
        C::new(rng.gen_range(0.5..1.5), 0.0),
    )
}

/// Derivative-type symmetry: imaginary diagonal, real off-diagonal.
fn forced_derivative(rng: &mut ChaCha8Rng) -> Mat2<f64> {
    Mat2::new(
        C::new(0.0, rng.gen_range(-1.0..1.0)),
        C::new(rng.gen_range(-1.0..1.0), 0.0),
        C::new(rng.gen_range(-1.0..1.0), 0.0),
        C::new(0.0, rng.gen_range(-1.0..1.0)),
    )
}

/// Criterion 6: k11 from the displayed formula against the linearized reconstruction
/// under forced-real inputs, plus the same comparison for generic complex inputs.
pub fn criterion_6(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let mut real = 0.0f64;
    let mut complex = 0.0f64;
    for _ in 0..200 {
        let m = forced_value(&mut rng);
        let m1 = forced_derivative(&mut rng);
        let e0 = forced_value(&mut rng);
        let e1 = forced_derivative(&mut rng);
        let s0 = C::new(0.0, rng.gen_range(-1.0..1.0));
        let ti = C::new(rng.gen_range(0.3..2.0), 0.0);
        let a = k11_display(&m, &m1, &e0, &e1, s0);
        let b = k11_linearized(&m, &m1, &e0, &e1, s0, ti);
        real = real.max((a - b).norm() / (1.0 + b.norm()));

        let mut gen = || Mat2::new(random_c(&mut rng), random_c(&mut rng), random_c(&mut rng), random_c(&mut rng));
        let (mut m, m1, e0, e1) = (gen(), gen(), gen(), gen());
        m[(0, 0)] += 2.0;
        m[(1, 1)] += 2.0;
        let s0 = random_c(&mut rng);
        let ti = random_c(&mut rng) + 1.5;
        let a = k11_display(&m, &m1, &e0, &e1, s0);
        let b = k11_linearized(&m, &m1, &e0, &e1, s0, ti);
        complex = complex.max((a - b).norm() / (1.0 + b.norm()));
    }
    let checks = vec![Check::at_most("forced-real |k11 - f11|", real, 1e-10)];
    CriterionReport::finish(
        6,
        "k11 degeneration",
        checks,
        start,
        60.0,
        format!("generic complex inputs: {complex:.1e}"),
    )
}

/// Simulates the radiation datum and compares with the leading-order solution near
/// y/t = xi at each requested time.
pub fn asymptotic_comparison(run: &AsymptoticRun) -> Result<(AsymptoticComparison, Trajectory<f64>)> {
    region_of(run.xi)?;
    let datum = precompute_geometry(&sech_profile(run.amplitude, run.phase_velocity, run.scatter_l, run.scatter_n), run.scatter_l)?;
    let table = scattering_coeffs(&datum, run.n_half, default_sigma_max(&datum))?;
    let spectrum = find_discrete_spectrum(&datum, SearchBox { re_min: -3.0, re_max: 3.0, im_min: 0.02, im_max: 3.0 })?;
    let sim = Simulator::new(run.l, run.n)?;
    let u0 = sech_profile(run.amplitude, run.phase_velocity, run.l, run.n);
    let dt = 0.25 * sim.dx();
    let traj = sim.evolve(&sim.snapshot_from_u(u0, 0.0), dt, &run.times)?;
    let ctx = AsymptoticContext { reflection: &table, spectrum: spectrum.clone(), delta0: f64::INFINITY };
    let x = sim.x_grid();
    let mut sup_errors = Vec::with_capacity(run.times.len());
    let mut samples = Vec::with_capacity(run.times.len());
    for snap in &traj.snapshots[1..] {
        let t = snap.t;
        let y = y_of_x(&snap.u, run.l);
        let idx: Vec<usize> = (0..run.n).filter(|&j| (y[j] / t - run.xi).abs() <= run.half_width).collect();
        if idx.is_empty() {
            return Err(Error::InvalidInput(format!("no grid point with y/t near {} at t = {t}", run.xi)));
        }
        let errs: Vec<f64> = idx
            .par_iter()
            .map(|&j| {
                let lead = ctx.u_leading_at_x(x[j], t, y[j])?;
                Ok((snap.u[j] - lead.u).norm())
            })
            .collect::<Result<_>>()?;
        sup_errors.push(errs.iter().cloned().fold(0.0, f64::max));
        samples.push(idx.len());
    }
    let slope = loglog_slope(&run.times, &sup_errors);
    let g_drift = traj.g_drift();
    let duration = traj.last().t;
    Ok((
        AsymptoticComparison {
            times: run.times.clone(),
            sup_errors,
            samples,
            slope,
            poles_found: spectrum.len(),
            g_drift,
            duration,
        },
        traj,
    ))
}

/// Criterion 7: fitted decay of the sup error against the leading-order solution.
pub fn criterion_7(run: &AsymptoticRun) -> (CriterionReport, Option<Trajectory<f64>>) {
    let start = Instant::now();
    let name = "asymptotic order";
    match asymptotic_comparison(run) {
        Ok((cmp, traj)) => {
            let checks = vec![
                Check::at_most("discrete spectrum found", cmp.poles_found as f64, 0.0),
                Check::at_most("log-log slope", cmp.slope, -0.6),
            ];
            let errs = cmp
                .times
                .iter()
                .zip(&cmp.sup_errors)
                .map(|(t, e)| format!("t={t}: {e:.3e}"))
                .collect::<Vec<_>>()
                .join(", ");
            (CriterionReport::finish(7, name, checks, start, 1800.0, errs), Some(traj))
        }
        Err(e) => (CriterionReport::failed(7, name, &e, start, 1800.0), None),
    }
}

/// Criterion 8: g drift per 10 time units on each simulator run of the suite.
pub fn criterion_8(runs: &[(&str, &Trajectory<f64>)]) -> CriterionReport {
    let start = Instant::now();
    let checks = runs
        .iter()
        .map(|(label, traj)| Check::at_most(&format!("g drift per 10 t ({label})"), drift_rate(traj), 1e-6))
        .collect::<Vec<_>>();
    let note = if runs.is_empty() { "no simulator runs completed".to_string() } else { String::new() };
    let mut report = CriterionReport::finish(8, "conservation of g", checks, start, 5.0, note);
    if runs.is_empty() {
        report.passed = false;
    }
    report
}

/// Runs criteria 1 to 8 in order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    let mut out = vec![criterion_1(cfg.seed), criterion_2(), criterion_3(cfg.seed)];
    let (c4, traj4) = criterion_4();
    out.push(c4);
    out.push(criterion_5(cfg.seed));
    out.push(criterion_6(cfg.seed));
    let (c7, traj7) = criterion_7(&cfg.asymptotic);
    out.push(c7);
    let mut runs = vec![];
    if let Some(t) = traj4.as_ref() {
        runs.push(("one soliton", t));
    }
    if let Some(t) = traj7.as_ref() {
        runs.push(("radiation", t));
    }
    out.push(criterion_8(&runs));
    out
}
