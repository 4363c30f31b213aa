//! Brute-force verification path: replace the continuum by finitely many
//! modes and propagate the one-excitation Schrödinger equation directly.
//!
//! The one-excitation Hamiltonian is the arrowhead matrix
//! `H = Ω |e⟩⟨e| + Σ_j ω_j |j⟩⟨j| + Σ_j g_j (|e⟩⟨j| + |j⟩⟨e|)`.
//! Propagating the single initial vector `|e⟩` yields the whole first column
//! of `e^{-iHt}`, and `e^{-iHt}` is symmetric for real `H`, so the same run
//! also provides the amplitudes `⟨e| e^{-iHt} |j⟩` needed for thermally
//! weighted initial states. Everything downstream (populations, moments)
//! reduces to sums over that column, which are accumulated in a streaming
//! fashion so memory stays `O(modes)` regardless of the grid length.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bath::SpectralDensity;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::observables::{FriedrichsInitial, ObservableSeries, OscillatorInitial};
use crate::solver::Trajectory;

/// Dimensionless stability bound on `dt · ω_fast` for one internal step of
/// the classical fourth-order integrator.
const STEP_BOUND: f64 = 0.1;

/// A finite set of reservoir modes with real couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath {
    frequencies: Vec<f64>,
    couplings: Vec<f64>,
}

impl DiscreteBath {
    pub fn new(frequencies: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::Domain("a discrete bath needs at least one mode".into()));
        }
        if frequencies.len() != couplings.len() {
            return Err(Error::Domain(format!(
                "{} frequencies but {} couplings",
                frequencies.len(),
                couplings.len()
            )));
        }
        for pair in frequencies.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Domain(
                    "mode frequencies must be strictly increasing".into(),
                ));
            }
        }
        if frequencies.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Domain("mode frequencies must be positive".into()));
        }
        if couplings.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::Domain("mode couplings must be nonnegative".into()));
        }
        Ok(Self {
            frequencies,
            couplings,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Total squared coupling `Σ g_j²`; the discrete stand-in for the
    /// spectral mass, i.e. the kernel at t = 0.
    pub fn coupling_mass(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }

    /// Earliest time at which the discreteness of the bath folds back into
    /// the dynamics: `2π / min spacing`. Comparisons against the continuum
    /// are only meaningful well before it.
    pub fn recurrence_time(&self) -> f64 {
        let min_spacing = self
            .frequencies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        2.0 * PI / min_spacing
    }

    /// Exact discrete correlation kernel `K(t) = Σ_j g_j² e^{-iω_j t}`.
    pub fn kernel_samples(&self, grid: TimeGrid) -> Vec<Complex64> {
        grid.times()
            .map(|t| {
                self.frequencies
                    .iter()
                    .zip(self.couplings.iter())
                    .map(|(&w, &g)| Complex64::from_polar(g * g, -w * t))
                    .sum()
            })
            .collect()
    }
}

/// Midpoint discretization of a continuum density over `[lo, hi]` into
/// `modes` equal bins: `ω_j` at bin centers, `g_j = √(J(ω_j) Δω / 2π)`.
pub fn discretize_bath(
    density: &SpectralDensity,
    modes: usize,
    window: (f64, f64),
) -> Result<DiscreteBath> {
    let (lo, hi) = window;
    if modes == 0 {
        return Err(Error::Domain("discretization needs at least one mode".into()));
    }
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(Error::Domain(format!(
            "discretization window is empty: [{lo}, {hi}]"
        )));
    }
    if lo < 0.0 {
        return Err(Error::Domain(format!(
            "discretization window must stay at nonnegative frequencies, got {lo}"
        )));
    }
    let step = (hi - lo) / modes as f64;
    let mut frequencies = Vec::with_capacity(modes);
    let mut couplings = Vec::with_capacity(modes);
    for j in 0..modes {
        let omega = lo + (j as f64 + 0.5) * step;
        frequencies.push(omega);
        couplings.push((density.evaluate(omega)? * step / (2.0 * PI)).sqrt());
    }
    DiscreteBath::new(frequencies, couplings)
}

/// Internal substeps needed to keep one grid step within the stability
/// bound.
pub fn stable_substeps(bath: &DiscreteBath, omega: f64, dt: f64) -> usize {
    let omega_fast = bath
        .frequencies
        .iter()
        .fold(omega.abs(), |acc, w| acc.max(w.abs()));
    ((dt * omega_fast / STEP_BOUND).ceil() as usize).max(1)
}

/// First column of `e^{-iHt}` sampled on the grid: the system amplitude and
/// every mode amplitude. Memory is `O(modes · samples)`; intended for small
/// mode counts. Large-bath observables use the streaming paths instead.
#[derive(Debug, Clone, PartialEq)]
pub struct OneExcitationAmplitudes {
    pub dt: f64,
    /// `⟨e| e^{-iHt} |e⟩`.
    pub system: Vec<Complex64>,
    /// `modes[j][n] = ⟨j| e^{-iHt_n} |e⟩`.
    pub modes: Vec<Vec<Complex64>>,
}

/// Propagate `|e⟩` under the arrowhead Hamiltonian and record all
/// amplitudes. The grid step must itself satisfy the stability bound; for
/// observable-level comparisons with internal substepping, use
/// [`oracle_population`] or [`oracle_oscillator_moments`].
pub fn propagate_one_excitation(
    bath: &DiscreteBath,
    omega: f64,
    grid: TimeGrid,
) -> Result<OneExcitationAmplitudes> {
    let omega_fast = bath
        .frequencies
        .iter()
        .fold(omega.abs(), |acc, w| acc.max(w.abs()));
    let product = grid.dt() * omega_fast;
    if product > STEP_BOUND {
        return Err(Error::StepTooLarge(product));
    }
    let mut system = Vec::with_capacity(grid.samples());
    let mut modes = vec![Vec::with_capacity(grid.samples()); bath.len()];
    propagate(bath, omega, grid, 1, |psi| {
        system.push(psi[0]);
        for (j, row) in modes.iter_mut().enumerate() {
            row.push(psi[j + 1]);
        }
    });
    Ok(OneExcitationAmplitudes {
        dt: grid.dt(),
        system,
        modes,
    })
}

/// Excited-state population of the discrete-bath two-level model with the
/// restricted Gibbs initial reservoir state:
/// `ρ₁₁(t) = (p |⟨e|ψ(t)⟩|² + (1-p) Σ_j e^{-βω_j} |⟨e| e^{-iHt} |j⟩|²) / z`.
pub fn oracle_population(
    bath: &DiscreteBath,
    omega: f64,
    initial: &FriedrichsInitial,
    grid: TimeGrid,
) -> Result<Vec<f64>> {
    let substeps = stable_substeps(bath, omega, grid.dt());
    let beta = initial.beta();
    let p = initial.excited_weight();
    let z = initial.partition();
    let weights: Vec<f64> = bath
        .frequencies
        .iter()
        .map(|&w| (-beta * w).exp())
        .collect();
    let mut population = Vec::with_capacity(grid.samples());
    propagate(bath, omega, grid, substeps, |psi| {
        let coherent = psi[0].norm_sqr();
        let injected: f64 = weights
            .iter()
            .zip(psi[1..].iter())
            .map(|(w, amp)| w * amp.norm_sqr())
            .sum();
        population.push((p * coherent + (1.0 - p) * injected) / z);
    });
    Ok(population)
}

/// Moments of the discrete-bath oscillator model with the reservoir in a
/// Bose-occupied thermal state, `n_j = 1 / (e^{βω_j} - 1)`:
/// `⟨a†a⟩(t) = |ψ₀(t)|² n₀ + Σ_j n_j |⟨e| e^{-iHt} |j⟩|²`, and the first and
/// second moments carried by `ψ₀(t)` exactly as in the continuum model.
pub fn oracle_oscillator_moments(
    bath: &DiscreteBath,
    omega: f64,
    beta: f64,
    initial: &OscillatorInitial,
    grid: TimeGrid,
) -> Result<ObservableSeries> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    let substeps = stable_substeps(bath, omega, grid.dt());
    let occupations: Vec<f64> = bath
        .frequencies
        .iter()
        .map(|&w| 1.0 / (beta * w).exp_m1())
        .collect();
    let n0 = initial.occupation();
    let mut population = Vec::with_capacity(grid.samples());
    let mut mean = Vec::with_capacity(grid.samples());
    let mut square = Vec::with_capacity(grid.samples());
    propagate(bath, omega, grid, substeps, |psi| {
        let injected: f64 = occupations
            .iter()
            .zip(psi[1..].iter())
            .map(|(n, amp)| n * amp.norm_sqr())
            .sum();
        population.push(psi[0].norm_sqr() * n0 + injected);
        mean.push(psi[0] * initial.mean());
        square.push(psi[0] * psi[0] * initial.square());
    });
    Ok(ObservableSeries {
        dt: grid.dt(),
        population,
        mean_amplitude: Some(mean),
        mean_square: Some(square),
    })
}

/// System amplitude alone, with internal substepping; the discrete-bath
/// counterpart of the continuum amplitude solve.
pub fn oracle_amplitude(bath: &DiscreteBath, omega: f64, grid: TimeGrid) -> Trajectory {
    let substeps = stable_substeps(bath, omega, grid.dt());
    let mut system = Vec::with_capacity(grid.samples());
    propagate(bath, omega, grid, substeps, |psi| system.push(psi[0]));
    Trajectory::from_values(grid.dt(), system).expect("grid is valid by construction")
}

/// `out = -i H psi` for the arrowhead Hamiltonian.
fn apply_h(
    omega: f64,
    frequencies: &[f64],
    couplings: &[f64],
    psi: &[Complex64],
    out: &mut [Complex64],
) {
    let mut head = omega * psi[0];
    for (&g, &amp) in couplings.iter().zip(&psi[1..]) {
        head += g * amp;
    }
    out[0] = Complex64::new(head.im, -head.re);
    for (j, ((&g, &w), &amp)) in couplings.iter().zip(frequencies).zip(&psi[1..]).enumerate() {
        let v = w * amp + g * psi[0];
        out[j + 1] = Complex64::new(v.im, -v.re);
    }
}

/// Classical fourth-order propagation of `|e⟩`, invoking `visit` with the
/// state at every grid sample.
fn propagate<F>(bath: &DiscreteBath, omega: f64, grid: TimeGrid, substeps: usize, mut visit: F)
where
    F: FnMut(&[Complex64]),
{
    let dim = bath.len() + 1;
    let h = grid.dt() / substeps as f64;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[0] = Complex64::new(1.0, 0.0);
    let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    visit(&psi);
    for _ in 1..grid.samples() {
        for _ in 0..substeps {
            apply_h(omega, &bath.frequencies, &bath.couplings, &psi, &mut k1);
            for i in 0..dim {
                tmp[i] = psi[i] + 0.5 * h * k1[i];
            }
            apply_h(omega, &bath.frequencies, &bath.couplings, &tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = psi[i] + 0.5 * h * k2[i];
            }
            apply_h(omega, &bath.frequencies, &bath.couplings, &tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = psi[i] + h * k3[i];
            }
            apply_h(omega, &bath.frequencies, &bath.couplings, &tmp, &mut k4);
            for i in 0..dim {
                psi[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            }
        }
        visit(&psi);
    }
}
