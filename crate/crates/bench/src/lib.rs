//! Shared fixtures for the pipeline benchmarks.

use rwa_dynamics::{QuadratureConfig, SpectralDensity, TimeGrid};

/// The standard benchmark setting: resonant Lorentz density at moderate
/// coupling with the default quadrature controls.
pub fn standard_density() -> SpectralDensity {
    SpectralDensity::lorentz(0.5, 1.0, 5.0).expect("valid parameters")
}

pub fn standard_quadrature() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// A grid of `samples` points at the production step of 10⁻³.
pub fn grid(samples: usize) -> TimeGrid {
    TimeGrid::new(1e-3, samples).expect("valid grid")
}
