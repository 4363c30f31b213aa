//! Reservoir correlation kernels and the restricted partition constant.
//!
//! A Lorentz spectral density restricted to a positive frequency window is
//! turned into time-domain correlation kernels
//! `K(t) = ∫ J(ω) w(ω) e^{-iωt} dω / 2π` by panel-based Gauss-Legendre
//! quadrature with an a-posteriori refinement estimate. Three weights are
//! supported: `w = 1` (zero temperature), the Boltzmann factor `e^{-βω}`,
//! and the Bose factor `1 / (e^{βω} - 1)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::quad::{graded_panels, oscillatory_samples, split_panels, GaussLegendre};

/// Supported spectral density families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    Lorentz,
}

/// Frequency-resolved coupling strength of the reservoir.
///
/// The Lorentz profile is `J(ω) = γ g² / ((γ/2)² + (ω - Ω_c)²)` inside the
/// window and zero outside. The physical density lives on `ω ≥ 0`; a
/// symmetric full-line variant exists purely as a verification mode whose
/// kernel has the closed form produced by [`exponential_kernel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    kind: SpectralKind,
    coupling: f64,
    width: f64,
    center: f64,
    omega_min: f64,
    omega_max: f64,
    full_line: bool,
}

impl SpectralDensity {
    /// Lorentz density on the default window `[0, ∞)`; the open end is
    /// resolved to a finite cutoff by the tail tolerance at kernel build
    /// time. `coupling = 0` is allowed as the degenerate uncoupled case.
    pub fn lorentz(coupling: f64, width: f64, center: f64) -> Result<Self> {
        if !coupling.is_finite() || coupling < 0.0 {
            return Err(Error::Domain(format!(
                "coupling must be finite and nonnegative, got {coupling}"
            )));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::Domain(format!("width must be positive, got {width}")));
        }
        if !center.is_finite() || center <= 0.0 {
            return Err(Error::Domain(format!("center must be positive, got {center}")));
        }
        Ok(Self {
            kind: SpectralKind::Lorentz,
            coupling,
            width,
            center,
            omega_min: 0.0,
            omega_max: f64::INFINITY,
            full_line: false,
        })
    }

    /// Restrict the support to `[omega_min, omega_max]`; `omega_max` may be
    /// `+∞` to keep the cutoff tolerance-resolved.
    pub fn with_window(mut self, omega_min: f64, omega_max: f64) -> Result<Self> {
        if self.full_line {
            return Err(Error::Domain(
                "the window of a full-line density is fixed at construction".into(),
            ));
        }
        if !omega_min.is_finite() || omega_min < 0.0 {
            return Err(Error::Domain(format!(
                "omega_min must be finite and nonnegative, got {omega_min}"
            )));
        }
        if omega_max <= omega_min {
            return Err(Error::Domain(format!(
                "window is empty: [{omega_min}, {omega_max}]"
            )));
        }
        self.omega_min = omega_min;
        self.omega_max = omega_max;
        Ok(self)
    }

    /// Comparison-mode density on the symmetric window
    /// `[Ω_c - half_width, Ω_c + half_width]`, allowed to reach negative
    /// frequencies. Only the unweighted and Boltzmann-weighted kernels are
    /// defined for it.
    pub fn lorentz_full_line(coupling: f64, width: f64, center: f64, half_width: f64) -> Result<Self> {
        let mut density = Self::lorentz(coupling, width, center)?;
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::Domain(format!(
                "half_width must be positive and finite, got {half_width}"
            )));
        }
        density.omega_min = center - half_width;
        density.omega_max = center + half_width;
        density.full_line = true;
        Ok(density)
    }

    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Declared support `(omega_min, omega_max)`; `omega_max` may be `+∞`.
    pub fn window(&self) -> (f64, f64) {
        (self.omega_min, self.omega_max)
    }

    pub fn is_full_line(&self) -> bool {
        self.full_line
    }

    /// `J(ω)`: the profile inside the window, zero outside. Negative
    /// frequencies are a domain error except in full-line mode.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        if !self.full_line && omega < 0.0 {
            return Err(Error::Domain(format!(
                "spectral density is defined on omega >= 0, got {omega}"
            )));
        }
        if omega < self.omega_min || omega > self.omega_max {
            return Ok(0.0);
        }
        Ok(self.profile(omega))
    }

    fn profile(&self, omega: f64) -> f64 {
        let half = 0.5 * self.width;
        let detune = omega - self.center;
        self.width * self.coupling * self.coupling / (half * half + detune * detune)
    }
}

/// Linear dispersion `ω_k = c |k|` of the reservoir modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    slope: f64,
}

impl Dispersion {
    pub fn linear(slope: f64) -> Result<Self> {
        if !slope.is_finite() || slope <= 0.0 {
            return Err(Error::Domain(format!(
                "dispersion slope must be positive, got {slope}"
            )));
        }
        Ok(Self { slope })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }
}

/// Normalization constant of the reservoir Gibbs weight restricted to the
/// zero- and one-particle sectors: `Z = exp(π² / (3 β c))` for linear
/// dispersion with slope `c`. Always exceeds one.
pub fn partition_restricted(dispersion: Dispersion, beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    Ok((PI * PI / (3.0 * beta * dispersion.slope())).exp())
}

/// Controls for the oscillatory kernel quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Minimum quadrature points per oscillation period of `e^{-iωt}` at the
    /// largest grid time.
    pub points_per_period: u32,
    /// Gauss-Legendre nodes per panel.
    pub nodes_per_panel: u32,
    /// Target absolute sample error, relative to the kernel value at t = 0.
    pub tolerance: f64,
    /// Admissible spectral mass beyond the resolved cutoff, relative to g².
    pub tail_tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            points_per_period: 8,
            nodes_per_panel: 12,
            tolerance: 1e-6,
            tail_tolerance: 5e-4,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_period == 0 {
            return Err(Error::Domain("points_per_period must be positive".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(Error::Domain("nodes_per_panel must be at least 2".into()));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::Domain(format!(
                "quadrature tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !self.tail_tolerance.is_finite() || self.tail_tolerance <= 0.0 || self.tail_tolerance >= 1.0 {
            return Err(Error::Domain(format!(
                "tail tolerance must lie in (0, 1), got {}",
                self.tail_tolerance
            )));
        }
        Ok(())
    }
}

/// Thermal weight attached to a sampled kernel, used to keep the kernels for
/// the two observable formulas from being swapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    ZeroTemperature,
    /// Boltzmann weight `e^{-βω}`.
    RestrictedThermal { beta: f64 },
    /// Bose weight `1 / (e^{βω} - 1)`.
    FullThermal { beta: f64 },
}

impl KernelKind {
    pub(crate) fn label(&self) -> &'static str {
        match self {
            KernelKind::ZeroTemperature => "zero-temperature",
            KernelKind::RestrictedThermal { .. } => "restricted-thermal",
            KernelKind::FullThermal { .. } => "full-thermal",
        }
    }
}

/// A complex correlation kernel sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples {
    dt: f64,
    kind: KernelKind,
    values: Vec<Complex64>,
    error_estimate: f64,
}

impl KernelSamples {
    /// Wrap externally produced samples (analytic kernels, rescaling tests).
    /// No spectral invariants are checked beyond the grid itself.
    pub fn from_values(dt: f64, kind: KernelKind, values: Vec<Complex64>) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::Domain("kernel needs at least one sample".into()));
        }
        Ok(Self {
            dt,
            kind,
            values,
            error_estimate: 0.0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    /// Maximum change observed in the final panel-halving step; an upper
    /// estimate of the absolute sample error.
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }
}

/// Closed-form kernel of the full-line Lorentz density,
/// `K(t) = g² e^{-γ t / 2} e^{-i Ω_c t}`; the verification reference for the
/// quadrature path and the analytic solver tests.
pub fn exponential_kernel(coupling: f64, width: f64, center: f64, grid: TimeGrid) -> KernelSamples {
    let g2 = coupling * coupling;
    let values = grid
        .times()
        .map(|t| Complex64::from_polar(g2 * (-0.5 * width * t).exp(), -center * t))
        .collect();
    KernelSamples {
        dt: grid.dt(),
        kind: KernelKind::ZeroTemperature,
        values,
        error_estimate: 0.0,
    }
}

/// Resolve the open end of the window to a finite cutoff.
///
/// For the Lorentz tail the spectral mass beyond `ω_max` is bounded by
/// `g² γ / (2π (ω_max - Ω_c))`, so the cutoff `Ω_c + γ / (2π tail_tolerance)`
/// meets the tail budget. An explicitly finite `ω_max` is checked against the
/// same bound.
pub fn resolved_window(density: &SpectralDensity, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    quad.validate()?;
    let (lo, hi) = density.window();
    if density.is_full_line() {
        return Ok((lo, hi));
    }
    if hi.is_infinite() {
        return Ok((lo, density.center() + density.width() / (2.0 * PI * quad.tail_tolerance)));
    }
    if density.coupling() > 0.0 {
        if hi <= density.center() {
            return Err(Error::Domain(format!(
                "window must extend beyond the density peak: omega_max = {hi} <= center = {}",
                density.center()
            )));
        }
        let tail = density.width() / (2.0 * PI * (hi - density.center()));
        if tail > quad.tail_tolerance {
            return Err(Error::Domain(format!(
                "window truncation misses the tail budget: relative tail {tail:.3e} > {:.3e}",
                quad.tail_tolerance
            )));
        }
    }
    Ok((lo, hi))
}

enum Weight {
    One,
    Boltzmann { beta: f64 },
    Bose { beta: f64 },
}

impl Weight {
    fn eval(&self, omega: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::Boltzmann { beta } => (-beta * omega).exp(),
            Weight::Bose { beta } => 1.0 / (beta * omega).exp_m1(),
        }
    }

    /// Scale on which the weight varies near the lower window edge; panels
    /// are graded up from it.
    fn left_scale(&self, omega_min: f64) -> Option<f64> {
        match self {
            Weight::One => None,
            Weight::Boltzmann { beta } => Some(1.0 / beta),
            Weight::Bose { beta } => Some((1.0 / beta).min(omega_min)),
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    Ok(())
}

/// Unweighted kernel `G(t) = ∫ J(ω) e^{-iωt} dω / 2π` over the window.
pub fn kernel_zero_t(
    density: &SpectralDensity,
    grid: TimeGrid,
    quad: &QuadratureConfig,
) -> Result<KernelSamples> {
    build_kernel(density, Weight::One, KernelKind::ZeroTemperature, grid, quad)
}

/// Boltzmann-weighted kernel `∫ J(ω) e^{-βω} e^{-iωt} dω / 2π`; equals the
/// unweighted kernel continued to the complex time `t - iβ`.
pub fn kernel_restricted_thermal(
    density: &SpectralDensity,
    beta: f64,
    grid: TimeGrid,
    quad: &QuadratureConfig,
) -> Result<KernelSamples> {
    check_beta(beta)?;
    build_kernel(
        density,
        Weight::Boltzmann { beta },
        KernelKind::RestrictedThermal { beta },
        grid,
        quad,
    )
}

/// Bose-weighted kernel `∫ J(ω) (e^{βω} - 1)^{-1} e^{-iωt} dω / 2π`; equal to
/// the sum of the Boltzmann-weighted kernels at `β, 2β, 3β, ...`. The window
/// must stay away from ω = 0, where the weight diverges.
pub fn kernel_full_thermal(
    density: &SpectralDensity,
    beta: f64,
    grid: TimeGrid,
    quad: &QuadratureConfig,
) -> Result<KernelSamples> {
    check_beta(beta)?;
    if density.is_full_line() {
        return Err(Error::Domain(
            "the Bose weight is not defined on the full-line comparison window".into(),
        ));
    }
    if density.coupling() > 0.0 && density.window().0 <= 0.0 {
        return Err(Error::InfraredDivergence);
    }
    build_kernel(
        density,
        Weight::Bose { beta },
        KernelKind::FullThermal { beta },
        grid,
        quad,
    )
}

const MAX_REFINEMENTS: usize = 8;

fn build_kernel(
    density: &SpectralDensity,
    weight: Weight,
    kind: KernelKind,
    grid: TimeGrid,
    quad: &QuadratureConfig,
) -> Result<KernelSamples> {
    quad.validate()?;
    if density.coupling() == 0.0 {
        return Ok(KernelSamples {
            dt: grid.dt(),
            kind,
            values: vec![Complex64::new(0.0, 0.0); grid.samples()],
            error_estimate: 0.0,
        });
    }
    let (lo, hi) = resolved_window(density, quad)?;
    let (mut panels, rule) = base_panels(density, &weight, lo, hi, grid, quad);
    let density = |omega: f64| density.profile(omega) * weight.eval(omega) / (2.0 * PI);

    let mut coarse = oscillatory_samples(&panels, &rule, density, grid.dt(), grid.samples());
    let mut achieved = f64::INFINITY;
    let mut required = 0.0;
    for _ in 0..MAX_REFINEMENTS {
        let fine_panels = split_panels(&panels);
        let fine = oscillatory_samples(&fine_panels, &rule, density, grid.dt(), grid.samples());
        achieved = coarse
            .iter()
            .zip(fine.iter())
            .map(|(c, f)| (c - f).norm())
            .fold(0.0, f64::max);
        // The t = 0 sample is the positive total spectral mass and sets the
        // scale the tolerance refers to.
        required = quad.tolerance * fine[0].re.abs();
        if achieved <= required {
            return Ok(KernelSamples {
                dt: grid.dt(),
                kind,
                values: fine,
                error_estimate: achieved,
            });
        }
        panels = fine_panels;
        coarse = fine;
    }
    Err(Error::QuadratureFailure { achieved, required })
}

fn base_panels(
    density: &SpectralDensity,
    weight: &Weight,
    lo: f64,
    hi: f64,
    grid: TimeGrid,
    quad: &QuadratureConfig,
) -> (Vec<(f64, f64)>, GaussLegendre) {
    // Cap the panel width so the density peak stays resolved and so that the
    // node spacing keeps the requested number of points per oscillation
    // period at the largest grid time. At t_max = 0 there is no oscillation
    // and the envelope cap alone applies.
    let envelope = 0.5 * density.width();
    let t_max = grid.t_max();
    let oscillation = if t_max > 0.0 {
        (2.0 * PI / t_max) * quad.nodes_per_panel as f64 / quad.points_per_period as f64
    } else {
        f64::INFINITY
    };
    let h_max = envelope.min(oscillation);
    let panels = graded_panels(lo, hi, weight.left_scale(lo.max(0.0)), h_max);
    (panels, GaussLegendre::new(quad.nodes_per_panel as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(dt: f64, samples: usize) -> TimeGrid {
        TimeGrid::new(dt, samples).unwrap()
    }

    /// Exact spectral mass of the windowed Lorentz profile divided by 2π:
    /// the value of the unweighted kernel at t = 0.
    fn lorentz_mass(density: &SpectralDensity, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * density.width();
        let g2 = density.coupling() * density.coupling();
        g2 / PI * (((hi - density.center()) / half).atan() - ((lo - density.center()) / half).atan())
    }

    #[test]
    fn density_peak_and_window() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        assert!((density.evaluate(5.0).unwrap() - 4.0).abs() < 1e-12);
        // Half maximum at one half-width detuning.
        assert!((density.evaluate(5.5).unwrap() - 2.0).abs() < 1e-12);
        assert!(density.evaluate(-1.0).is_err());

        let windowed = density.with_window(1.0, 9.0).unwrap();
        assert_eq!(windowed.evaluate(0.5).unwrap(), 0.0);
        assert_eq!(windowed.evaluate(9.5).unwrap(), 0.0);
        assert!(windowed.evaluate(5.0).unwrap() > 0.0);
    }

    #[test]
    fn density_scales_with_coupling_squared() {
        let a = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let b = SpectralDensity::lorentz(2.0, 1.0, 5.0).unwrap();
        assert!((b.evaluate(3.0).unwrap() / a.evaluate(3.0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_density_parameters_are_rejected() {
        assert!(SpectralDensity::lorentz(-1.0, 1.0, 5.0).is_err());
        assert!(SpectralDensity::lorentz(1.0, 0.0, 5.0).is_err());
        assert!(SpectralDensity::lorentz(1.0, 1.0, -5.0).is_err());
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        assert!(density.with_window(3.0, 2.0).is_err());
        assert!(density.with_window(-1.0, 2.0).is_err());
    }

    #[test]
    fn zero_t_kernel_reproduces_the_windowed_mass_at_t_zero() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig {
            tail_tolerance: 1e-5,
            ..QuadratureConfig::default()
        };
        let kernel = kernel_zero_t(&density, grid(1e-3, 1), &quad).unwrap();
        let (lo, hi) = resolved_window(&density, &quad).unwrap();
        let mass = lorentz_mass(&density, lo, hi);
        assert!((kernel.value(0).re - mass).abs() < 1e-9);
        assert!(kernel.value(0).im.abs() < 1e-14);
        // Near-half-line value: 1/2 + arctan(2 Ω_c / γ) / π ≈ 0.9683.
        let half_line = 0.5 + (10f64).atan() / PI;
        assert!((kernel.value(0).re - half_line).abs() < 2e-5);
        assert!((half_line - 0.9683).abs() < 1e-4);
    }

    #[test]
    fn zero_t_kernel_is_bounded_by_its_initial_value() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let kernel = kernel_zero_t(&density, grid(0.05, 201), &quad).unwrap();
        let g0 = kernel.value(0).re;
        for v in kernel.values() {
            assert!(v.norm() <= g0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn full_line_kernel_matches_the_exponential_form() {
        let g = grid(0.4, 11);
        let density = SpectralDensity::lorentz_full_line(1.0, 1.0, 5.0, 400.0).unwrap();
        let quad = QuadratureConfig::default();
        let kernel = kernel_zero_t(&density, g, &quad).unwrap();
        let reference = exponential_kernel(1.0, 1.0, 5.0, g);
        // At t = 0 the missing symmetric tails decay only like 1/half_width.
        assert!((kernel.value(0) - reference.value(0)).norm() < 1e-3);
        for n in 1..g.samples() {
            assert!(
                (kernel.value(n) - reference.value(n)).norm() < 1e-5,
                "sample {n} deviates"
            );
        }
    }

    #[test]
    fn restricted_kernel_is_positive_and_smaller_at_t_zero() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let g = grid(0.1, 3);
        let zero_t = kernel_zero_t(&density, g, &quad).unwrap();
        let thermal = kernel_restricted_thermal(&density, 0.5, g, &quad).unwrap();
        assert!(thermal.value(0).re > 0.0);
        assert!(thermal.value(0).re < zero_t.value(0).re);
        assert!(thermal.value(0).im.abs() < 1e-14);
    }

    #[test]
    fn restricted_kernel_vanishes_in_the_zero_temperature_limit() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let kernel = kernel_restricted_thermal(&density, 1e4, grid(0.1, 21), &quad).unwrap();
        let scale = lorentz_mass(&density, 0.0, f64::INFINITY);
        for v in kernel.values() {
            assert!(v.norm() < 1e-4 * scale);
        }
    }

    #[test]
    fn restricted_kernel_matches_the_continued_exponential_form() {
        // Identity check against the analytic continuation of the full-line
        // kernel to complex time t - iβ. The Boltzmann weight grows toward
        // the left window edge, so the window is kept narrow around the peak
        // (half-width 4/γ ≈ 2/β) and the peak is placed far enough up in
        // frequency that the truncated integral is well conditioned.
        let (coupling, width, center, beta, half_width) = (1.0, 1.0, 22.0, 0.5, 4.0);
        let density = SpectralDensity::lorentz_full_line(coupling, width, center, half_width).unwrap();
        let quad = QuadratureConfig::default();
        let g = grid(0.2, 10);
        let kernel = kernel_restricted_thermal(&density, beta, g, &quad).unwrap();
        let g0 = lorentz_mass(&density, center - half_width, center + half_width);
        let bound = 10.0 * quad.tolerance * g0;
        for (n, t) in g.times().enumerate() {
            let magnitude = (-0.5 * width * t).exp() * (-beta * center).exp();
            let phase = 0.5 * width * beta - center * t;
            let continued = Complex64::from_polar(magnitude, phase);
            assert!(
                (kernel.value(n) - continued).norm() <= bound,
                "sample {n}: {} vs {continued}",
                kernel.value(n)
            );
        }
        // The reference values themselves dominate the bound early on, so
        // the comparison is not vacuous.
        assert!((-beta * center).exp() * coupling * coupling > bound);
    }

    #[test]
    fn bose_kernel_requires_a_positive_lower_edge() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let err = kernel_full_thermal(&density, 0.5, grid(0.1, 4), &quad).unwrap_err();
        assert_eq!(err, Error::InfraredDivergence);

        let windowed = density.with_window(0.5, f64::INFINITY).unwrap();
        assert!(kernel_full_thermal(&windowed, 0.5, grid(0.1, 4), &quad).is_ok());
    }

    #[test]
    fn uncoupled_kernels_are_identically_zero() {
        let density = SpectralDensity::lorentz(0.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let g = grid(0.1, 16);
        for kernel in [
            kernel_zero_t(&density, g, &quad).unwrap(),
            kernel_restricted_thermal(&density, 0.5, g, &quad).unwrap(),
            kernel_full_thermal(&density, 0.5, g, &quad).unwrap(),
        ] {
            assert!(kernel.values().iter().all(|v| v.norm() == 0.0));
            assert_eq!(kernel.error_estimate(), 0.0);
        }
    }

    #[test]
    fn bose_kernel_vanishes_in_the_zero_temperature_limit() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0)
            .unwrap()
            .with_window(0.5, f64::INFINITY)
            .unwrap();
        let quad = QuadratureConfig::default();
        let kernel = kernel_full_thermal(&density, 2e3, grid(0.1, 11), &quad).unwrap();
        let scale = lorentz_mass(&density, 0.0, f64::INFINITY);
        for v in kernel.values() {
            assert!(v.norm() < 1e-4 * scale);
        }
    }

    #[test]
    fn further_panel_halving_stays_within_the_reported_estimate() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig::default();
        let g = grid(0.05, 101);
        let (lo, hi) = resolved_window(&density, &quad).unwrap();
        let weight = Weight::Boltzmann { beta: 0.5 };
        let (panels, rule) = base_panels(&density, &weight, lo, hi, g, &quad);
        let density = |omega: f64| density.profile(omega) * weight.eval(omega) / (2.0 * PI);

        let level0 = oscillatory_samples(&panels, &rule, density, g.dt(), g.samples());
        let panels1 = split_panels(&panels);
        let level1 = oscillatory_samples(&panels1, &rule, density, g.dt(), g.samples());
        let panels2 = split_panels(&panels1);
        let level2 = oscillatory_samples(&panels2, &rule, density, g.dt(), g.samples());

        let estimate: f64 = level0
            .iter()
            .zip(level1.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let next_change: f64 = level1
            .iter()
            .zip(level2.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(next_change <= estimate + 1e-18);
    }

    #[test]
    fn unreachable_tolerance_reports_a_quadrature_failure() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
        let quad = QuadratureConfig {
            tolerance: 1e-30,
            tail_tolerance: 0.05,
            ..QuadratureConfig::default()
        };
        match kernel_zero_t(&density, grid(0.1, 6), &quad) {
            Err(Error::QuadratureFailure { achieved, required }) => {
                assert!(achieved > required);
            }
            other => panic!("expected a quadrature failure, got {other:?}"),
        }
    }

    #[test]
    fn explicit_cutoff_is_checked_against_the_tail_budget() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0)
            .unwrap()
            .with_window(0.0, 20.0)
            .unwrap();
        let quad = QuadratureConfig::default();
        // 1 / (2π · 15) ≈ 1.06e-2 is far above the default tail budget.
        assert!(resolved_window(&density, &quad).is_err());
        let loose = QuadratureConfig {
            tail_tolerance: 0.02,
            ..quad
        };
        let (lo, hi) = resolved_window(&density, &loose).unwrap();
        assert_eq!((lo, hi), (0.0, 20.0));
    }

    #[test]
    fn partition_constant_matches_the_closed_form() {
        let disp = Dispersion::linear(100.0).unwrap();
        let z = partition_restricted(disp, 0.5).unwrap();
        assert!((z - (PI * PI / 150.0).exp()).abs() < 1e-14);
        assert!((z - 1.0680).abs() < 1e-4);
        assert!(z > 1.0);
    }

    #[test]
    fn partition_constant_agrees_with_direct_quadrature_of_the_mode_integral() {
        // Z = exp(-∫ dk ln(1 - e^{-β c |k|})). Substituting k = e^y maps the
        // integrable logarithmic singularity at k = 0 onto a doubly decaying
        // integrand, where the trapezoid rule converges fast.
        let (beta, c) = (0.7, 40.0);
        let f = |k: f64| (1.0 - (-beta * c * k).exp()).ln();
        let (y_lo, y_hi, n) = (-40.0, (60.0 / (beta * c)).ln(), 40_000);
        let h = (y_hi - y_lo) / n as f64;
        let mut integral = 0.0;
        for i in 0..=n {
            let y = y_lo + i as f64 * h;
            let k = y.exp();
            let term = k * f(k);
            integral += if i == 0 || i == n { 0.5 * term } else { term };
        }
        integral *= 2.0 * h; // both signs of k
        let z_oracle = (-integral).exp();
        let z = partition_restricted(Dispersion::linear(c).unwrap(), beta).unwrap();
        assert!(
            (z - z_oracle).abs() < 1e-8 * z_oracle,
            "closed form {z} vs quadrature {z_oracle}"
        );
    }

    #[test]
    fn partition_constant_depends_only_on_beta_times_slope() {
        let a = partition_restricted(Dispersion::linear(100.0).unwrap(), 0.5).unwrap();
        let b = partition_restricted(Dispersion::linear(50.0).unwrap(), 1.0).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(partition_restricted(Dispersion::linear(100.0).unwrap(), 0.0).is_err());
        assert!(Dispersion::linear(-3.0).is_err());
    }

    #[test]
    fn kernel_kind_records_the_weight() {
        let density = SpectralDensity::lorentz(1.0, 1.0, 5.0)
            .unwrap()
            .with_window(0.5, f64::INFINITY)
            .unwrap();
        let quad = QuadratureConfig::default();
        let g = grid(0.1, 2);
        assert_eq!(
            kernel_zero_t(&density, g, &quad).unwrap().kind(),
            KernelKind::ZeroTemperature
        );
        assert_eq!(
            kernel_restricted_thermal(&density, 0.5, g, &quad).unwrap().kind(),
            KernelKind::RestrictedThermal { beta: 0.5 }
        );
        assert_eq!(
            kernel_full_thermal(&density, 0.5, g, &quad).unwrap().kind(),
            KernelKind::FullThermal { beta: 0.5 }
        );
    }

    #[test]
    fn from_values_validates_the_grid() {
        assert!(KernelSamples::from_values(0.0, KernelKind::ZeroTemperature, vec![]).is_err());
        assert!(
            KernelSamples::from_values(0.1, KernelKind::ZeroTemperature, vec![]).is_err()
        );
        let k = KernelSamples::from_values(
            0.1,
            KernelKind::ZeroTemperature,
            vec![Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(k.len(), 1);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn kernel_magnitude_never_exceeds_the_initial_value(
                coupling in 0.1f64..3.0,
                width in 0.2f64..2.0,
                center in 1.0f64..8.0,
                beta in 0.2f64..2.0,
            ) {
                let density = SpectralDensity::lorentz(coupling, width, center)
                    .unwrap()
                    .with_window(0.1 * width, f64::INFINITY)
                    .unwrap();
                let quad = QuadratureConfig {
                    tail_tolerance: 2e-3,
                    ..QuadratureConfig::default()
                };
                let g = TimeGrid::new(0.1, 64).unwrap();
                for kernel in [
                    kernel_zero_t(&density, g, &quad).unwrap(),
                    kernel_restricted_thermal(&density, beta, g, &quad).unwrap(),
                    kernel_full_thermal(&density, beta, g, &quad).unwrap(),
                ] {
                    let g0 = kernel.value(0).re;
                    prop_assert!(g0 > 0.0);
                    prop_assert!(kernel.value(0).im.abs() <= 1e-12 * g0);
                    for v in kernel.values() {
                        prop_assert!(v.norm() <= g0 * (1.0 + 1e-10));
                    }
                }
            }
        }
    }
}
