//! Numerical toolkit for the complex cubic Camassa-Holm equation: direct scattering,
//! stationary-phase analysis, reflectionless solitons, scalar deformation factors,
//! parabolic-cylinder local models, explicit long-time asymptotics and a
//! pseudospectral simulator used as an independent check.

pub mod asymptotics;
pub mod deformation;
pub mod error;
pub mod interp;
pub mod linalg;
pub mod pde_sim;
pub mod phase;
pub mod quad;
pub mod scalar;
pub mod scattering;
pub mod soliton;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::{Cx, Scalar};

/// Concrete double-precision aliases.
pub type Complex64 = num_complex::Complex64;
pub type Mat2f = linalg::Mat2<f64>;
pub type InitialDatumF64 = scattering::InitialDatum<f64>;
pub type SpectralTableF64 = scattering::SpectralTable<f64>;
pub type DiscreteSpectrumF64 = scattering::DiscreteSpectrum<f64>;
pub type PhasePortraitF64 = phase::PhasePortrait<f64>;
pub type SolitonDataF64 = soliton::SolitonData<f64>;
pub type SolitonStateF64 = soliton::SolitonState<f64>;
pub type SimulatorF64 = pde_sim::Simulator<f64>;
pub type TrajectoryF64 = pde_sim::Trajectory<f64>;
pub type LocalPointF64 = asymptotics::local::LocalPoint<f64>;
