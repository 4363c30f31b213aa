//! Finite-temperature memory-kernel dynamics of rotating-wave
//! system-reservoir models.
//!
//! The library computes exact reduced dynamics for two models in which a
//! single system mode (a two-level emitter or a harmonic oscillator)
//! exchanges excitations with a structured reservoir under the rotating-wave
//! approximation:
//!
//! 1. [`bath`]: reservoir correlation kernels `K(t)` are built from a
//!    windowed Lorentz spectral density by refinement-checked oscillatory
//!    quadrature, at zero temperature and with Boltzmann or Bose thermal
//!    weights.
//! 2. [`solver`]: the zero-temperature mode amplitude `x(t)` solves a
//!    Volterra integro-differential equation with the unweighted kernel as
//!    memory; a rotating-frame product-integration scheme integrates it to
//!    second order.
//! 3. [`observables`]: finite-temperature observables combine `|x(t)|²`
//!    with a thermally injected double integral of `x` against the weighted
//!    kernel — excited-state population for the emitter, first and second
//!    moments for the oscillator.
//! 4. [`oracle`]: an independent brute-force path discretizes the reservoir
//!    into finitely many modes and propagates the one-excitation
//!    Schrödinger equation directly, for cross-validation.
//!
//! All trajectories live on a shared uniform [`TimeGrid`], and all fallible
//! operations return the crate-level [`Error`].

mod bath;
mod error;
mod grid;
mod observables;
mod oracle;
mod quad;
mod solver;

pub use bath::{
    exponential_kernel, kernel_full_thermal, kernel_restricted_thermal, kernel_zero_t,
    partition_restricted, resolved_window, Dispersion, KernelKind, KernelSamples,
    QuadratureConfig, SpectralDensity, SpectralKind,
};
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use observables::{
    excited_population, one_photon_amplitude, oscillator_moments, thermal_injection,
    FriedrichsInitial, ObservableSeries, OscillatorInitial,
};
pub use oracle::{
    discretize_bath, oracle_amplitude, oracle_oscillator_moments, oracle_population,
    propagate_one_excitation, stable_substeps, DiscreteBath, OneExcitationAmplitudes,
};
pub use solver::{
    analytic_exponential_amplitude, solve_amplitude, solve_driven_amplitude, DriveFunction,
    SolverConfig, Trajectory,
};
