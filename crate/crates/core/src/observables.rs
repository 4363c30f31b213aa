//! Physical observables assembled from the solved amplitude and a thermal
//! kernel.
//!
//! Both models share one structure: the coherent part of an observable is
//! carried by the zero-temperature amplitude `x(t)`, and the thermally
//! injected part is the double time integral
//! `F(t) = 2 Re ∫₀ᵗ dτ x*(τ) ∫₀^τ ds K(τ-s) x(s)`,
//! where `K` is the Boltzmann-weighted kernel for the two-level model and
//! the Bose-weighted kernel for the oscillator. Conjugating the later time
//! keeps the resonant phases aligned: for `x = e^{-iΩt}` and
//! `K = κ e^{-iΩt}` the integral grows as `κ t²`, and `F` is a positive
//! quadratic form in general.

use num_complex::Complex64;

use crate::bath::{KernelKind, KernelSamples};
use crate::error::{Error, Result};
use crate::solver::Trajectory;

/// Initial state of the two-level model: excited-state weight `p` for the
/// system and a reservoir Gibbs weight with normalization `z` restricted to
/// the vacuum and one-particle sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedrichsInitial {
    excited_weight: f64,
    partition: f64,
    beta: f64,
}

impl FriedrichsInitial {
    pub fn new(excited_weight: f64, partition: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&excited_weight) {
            return Err(Error::Domain(format!(
                "excited-state weight must lie in [0, 1], got {excited_weight}"
            )));
        }
        if !partition.is_finite() || partition < 1.0 {
            return Err(Error::Domain(format!(
                "partition constant must be at least 1, got {partition}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Domain(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        Ok(Self {
            excited_weight,
            partition,
            beta,
        })
    }

    pub fn excited_weight(&self) -> f64 {
        self.excited_weight
    }

    pub fn partition(&self) -> f64 {
        self.partition
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Initial first and second moments of the oscillator mode: `⟨a⟩`, `⟨a†a⟩`
/// and `⟨a²⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorInitial {
    mean: Complex64,
    occupation: f64,
    square: Complex64,
}

impl OscillatorInitial {
    pub fn new(mean: Complex64, occupation: f64, square: Complex64) -> Result<Self> {
        if !occupation.is_finite() || occupation < 0.0 {
            return Err(Error::Domain(format!(
                "occupation must be nonnegative, got {occupation}"
            )));
        }
        // Cauchy-Schwarz on the state: |⟨a⟩|² ≤ ⟨a†a⟩.
        if mean.norm_sqr() > occupation + 1e-12 {
            return Err(Error::Domain(format!(
                "|mean|^2 = {} exceeds the occupation {occupation}",
                mean.norm_sqr()
            )));
        }
        Ok(Self {
            mean,
            occupation,
            square,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            mean: Complex64::new(0.0, 0.0),
            occupation: 0.0,
            square: Complex64::new(0.0, 0.0),
        }
    }

    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    pub fn occupation(&self) -> f64 {
        self.occupation
    }

    pub fn square(&self) -> Complex64 {
        self.square
    }
}

/// Observable trajectories of either model on the solver grid. The moment
/// channels are only populated for the oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub dt: f64,
    /// Two-level model: excited-state population. Oscillator: `⟨a†a⟩(t)`.
    pub population: Vec<f64>,
    /// Oscillator `⟨a⟩(t)`.
    pub mean_amplitude: Option<Vec<Complex64>>,
    /// Oscillator `⟨a²⟩(t)`.
    pub mean_square: Option<Vec<Complex64>>,
}

fn check_grids(x: &Trajectory, kernel: &KernelSamples) -> Result<()> {
    let rel = (kernel.dt() - x.dt()).abs() / x.dt().max(kernel.dt());
    if rel > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "kernel step {} does not match the trajectory step {}",
            kernel.dt(),
            x.dt()
        )));
    }
    if kernel.len() < x.len() {
        return Err(Error::GridMismatch(format!(
            "kernel provides {} samples but the trajectory has {}",
            kernel.len(),
            x.len()
        )));
    }
    Ok(())
}

/// Thermally injected population
/// `F(t) = 2 Re ∫₀ᵗ dτ x*(τ) ∫₀^τ ds K(τ-s) x(s)`,
/// evaluated with trapezoid weights on both integrals. `F(0) = 0` and, for a
/// kernel with a positive spectral representation, `F(t) ≥ 0` up to
/// quadrature error.
pub fn thermal_injection(x: &Trajectory, kernel: &KernelSamples) -> Result<Vec<f64>> {
    check_grids(x, kernel)?;
    let dt = x.dt();
    let n = x.len();
    let xv = x.values();
    let kv = kernel.values();

    let mut result = Vec::with_capacity(n);
    result.push(0.0);
    let mut running = 0.0;
    let mut integrand_prev = 0.0;
    for m in 1..n {
        // Inner convolution u(τ_m) = ∫₀^{τ_m} K(τ_m - s) x(s) ds.
        let mut inner = 0.5 * (kv[m] * xv[0] + kv[0] * xv[m]);
        for j in 1..m {
            inner += kv[m - j] * xv[j];
        }
        let u = dt * inner;
        let integrand = 2.0 * (xv[m].conj() * u).re;
        running += 0.5 * dt * (integrand_prev + integrand);
        integrand_prev = integrand;
        result.push(running);
    }
    Ok(result)
}

/// Excited-state population of the two-level model:
/// `ρ₁₁(t) = (p |x(t)|² + (1 - p) F(t)) / z` with the Boltzmann-weighted
/// kernel driving the injection.
pub fn excited_population(
    x: &Trajectory,
    kernel: &KernelSamples,
    initial: &FriedrichsInitial,
) -> Result<ObservableSeries> {
    match kernel.kind() {
        KernelKind::RestrictedThermal { beta } => {
            if (beta - initial.beta()).abs() > 1e-12 * initial.beta() {
                return Err(Error::Domain(format!(
                    "kernel temperature {beta} does not match the initial state {}",
                    initial.beta()
                )));
            }
        }
        other => {
            return Err(Error::KernelKindMismatch {
                expected: KernelKind::RestrictedThermal { beta: 0.0 }.label(),
                found: other.label(),
            })
        }
    }
    let injected = thermal_injection(x, kernel)?;
    let p = initial.excited_weight();
    let z = initial.partition();
    let population = x
        .values()
        .iter()
        .zip(injected.iter())
        .map(|(xv, f)| (p * xv.norm_sqr() + (1.0 - p) * f) / z)
        .collect();
    Ok(ObservableSeries {
        dt: x.dt(),
        population,
        mean_amplitude: None,
        mean_square: None,
    })
}

/// Moments of the oscillator mode:
/// `⟨a⟩(t) = x(t) ⟨a⟩₀`, `⟨a²⟩(t) = x(t)² ⟨a²⟩₀`,
/// `⟨a†a⟩(t) = |x(t)|² ⟨a†a⟩₀ + F(t)` with the Bose-weighted kernel driving
/// the injection.
pub fn oscillator_moments(
    x: &Trajectory,
    kernel: &KernelSamples,
    initial: &OscillatorInitial,
) -> Result<ObservableSeries> {
    if !matches!(kernel.kind(), KernelKind::FullThermal { .. }) {
        return Err(Error::KernelKindMismatch {
            expected: KernelKind::FullThermal { beta: 0.0 }.label(),
            found: kernel.kind().label(),
        });
    }
    let injected = thermal_injection(x, kernel)?;
    let n0 = initial.occupation();
    let population = x
        .values()
        .iter()
        .zip(injected.iter())
        .map(|(xv, f)| xv.norm_sqr() * n0 + f)
        .collect();
    let mean = x.values().iter().map(|xv| xv * initial.mean()).collect();
    let square = x
        .values()
        .iter()
        .map(|xv| xv * xv * initial.square())
        .collect();
    Ok(ObservableSeries {
        dt: x.dt(),
        population,
        mean_amplitude: Some(mean),
        mean_square: Some(square),
    })
}

/// Amplitude transferred into a single reservoir mode of frequency `ω` and
/// coupling `g`: `X(t) = -i g* ∫₀ᵗ x(t - s) e^{-iωs} ds` by the trapezoid
/// rule. Together with `x` this resolves where the excitation sits.
pub fn one_photon_amplitude(x: &Trajectory, coupling: Complex64, frequency: f64) -> Trajectory {
    let dt = x.dt();
    let n = x.len();
    let xv = x.values();
    let mut values = Vec::with_capacity(n);
    values.push(Complex64::new(0.0, 0.0));
    for m in 1..n {
        let mut acc = 0.5
            * (xv[m]
                + xv[0] * Complex64::from_polar(1.0, -frequency * (m as f64 * dt)));
        for j in 1..m {
            acc += xv[m - j] * Complex64::from_polar(1.0, -frequency * (j as f64 * dt));
        }
        values.push(Complex64::new(0.0, -1.0) * coupling.conj() * dt * acc);
    }
    Trajectory::from_values(dt, values).expect("grid validated by the input trajectory")
}
