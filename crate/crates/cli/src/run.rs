//! Scenario execution: drive the pipeline for one config and write the
//! result CSV plus a manifest of every resolved parameter.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rwa_dynamics::{
    discretize_bath, excited_population, kernel_full_thermal, kernel_restricted_thermal,
    kernel_zero_t, oracle_population, oscillator_moments, partition_restricted, resolved_window,
    solve_amplitude, Dispersion, FriedrichsInitial, KernelSamples, OscillatorInitial,
    QuadratureConfig, SolverConfig, SpectralDensity, TimeGrid,
};

use crate::config::{ConfigError, Model, ScenarioConfig};

/// Failure classes of a run, mapped onto distinct exit codes by the binary.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numeric(#[from] rwa_dynamics::Error),
}

impl RunError {
    /// 2 for config/input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

/// What a completed run produced, for callers and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub rows: usize,
    /// Largest pointwise deviation between the two population paths;
    /// comparison runs only.
    pub max_abs_diff: Option<f64>,
}

fn fmt_float(v: f64) -> String {
    format!("{v:.12e}")
}

/// Execute one scenario and write its output files.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunSummary, RunError> {
    let grid = TimeGrid::from_duration(cfg.t_max_abs(), cfg.dt_abs())?;
    let quad = QuadratureConfig {
        points_per_period: cfg.points_per_period,
        nodes_per_panel: cfg.nodes_per_panel,
        tolerance: cfg.quad_tolerance,
        tail_tolerance: cfg.tail_tolerance,
    };
    let density = SpectralDensity::lorentz(cfg.coupling_abs(), cfg.gamma, cfg.omega_abs())?
        .with_window(
            cfg.omega_min_abs(),
            cfg.omega_max_abs().unwrap_or(f64::INFINITY),
        )?;
    let solver = SolverConfig {
        dt: grid.dt(),
        corrector_iterations: cfg.corrector_iterations,
        refine: cfg.refine,
    };

    let memory = kernel_zero_t(&density, grid, &quad)?;
    let amplitude = solve_amplitude(cfg.omega_abs(), &memory, grid.samples(), &solver)?;

    let mut manifest = ManifestBuilder::new(cfg, &grid, &density, &quad)?;
    manifest.push_float("quadrature.memory_kernel_error", memory.error_estimate());
    if let Some(estimate) = amplitude.error_estimate() {
        manifest.push_float("solver.error_estimate", estimate);
    }

    let (header, columns, thermal, max_abs_diff): (
        &str,
        Vec<Vec<f64>>,
        KernelSamples,
        Option<f64>,
    ) = match cfg.model {
        Model::Friedrichs => {
            let thermal = kernel_restricted_thermal(&density, cfg.beta_abs(), grid, &quad)?;
            let z = partition_restricted(Dispersion::linear(cfg.dispersion_abs())?, cfg.beta_abs())?;
            manifest.push_float("resolved.partition", z);
            let initial = FriedrichsInitial::new(cfg.excited_weight, z, cfg.beta_abs())?;
            let series = excited_population(&amplitude, &thermal, &initial)?;
            ("t,rho11", vec![series.population], thermal, None)
        }
        Model::Oscillator => {
            let thermal = kernel_full_thermal(&density, cfg.beta_abs(), grid, &quad)?;
            let initial = OscillatorInitial::new(
                cfg.initial_mean,
                cfg.initial_occupation,
                cfg.initial_square,
            )?;
            let series = oscillator_moments(&amplitude, &thermal, &initial)?;
            let mean = series.mean_amplitude.unwrap();
            let square = series.mean_square.unwrap();
            let split = |v: &[Complex64], pick: fn(&Complex64) -> f64| -> Vec<f64> {
                v.iter().map(pick).collect()
            };
            (
                "t,a_dag_a,re_a,im_a,re_a2,im_a2",
                vec![
                    series.population,
                    split(&mean, |c| c.re),
                    split(&mean, |c| c.im),
                    split(&square, |c| c.re),
                    split(&square, |c| c.im),
                ],
                thermal,
                None,
            )
        }
        Model::OracleCompare => {
            let thermal = kernel_restricted_thermal(&density, cfg.beta_abs(), grid, &quad)?;
            let z = partition_restricted(Dispersion::linear(cfg.dispersion_abs())?, cfg.beta_abs())?;
            manifest.push_float("resolved.partition", z);
            let initial = FriedrichsInitial::new(cfg.excited_weight, z, cfg.beta_abs())?;
            let series = excited_population(&amplitude, &thermal, &initial)?;

            let window = resolved_window(&density, &quad)?;
            let bath = discretize_bath(&density, cfg.oracle_modes, window)?;
            manifest.push_int("oracle.modes", cfg.oracle_modes as u64);
            manifest.push_float("oracle.recurrence_time", bath.recurrence_time());
            let oracle = oracle_population(&bath, cfg.omega_abs(), &initial, grid)?;

            let diff: Vec<f64> = series
                .population
                .iter()
                .zip(oracle.iter())
                .map(|(a, b)| (a - b).abs())
                .collect();
            let max_diff = diff.iter().fold(0.0f64, |acc, d| acc.max(*d));
            manifest.push_float("result.max_abs_diff", max_diff);
            (
                "t,rho11_volterra,rho11_oracle,abs_diff",
                vec![series.population, oracle, diff],
                thermal,
                Some(max_diff),
            )
        }
    };
    manifest.push_float("quadrature.thermal_kernel_error", thermal.error_estimate());

    let mut csv = String::with_capacity(grid.samples() * (header.len() + 8));
    csv.push_str(header);
    csv.push('\n');
    for (n, t) in grid.times().enumerate() {
        let _ = write!(csv, "{}", fmt_float(t));
        for column in &columns {
            let _ = write!(csv, ",{}", fmt_float(column[n]));
        }
        csv.push('\n');
    }
    fs::write(&cfg.out, csv)?;

    if cfg.dump_kernels {
        let mut dump = String::new();
        dump.push_str("t,re_memory,im_memory,re_thermal,im_thermal\n");
        for (n, t) in grid.times().enumerate() {
            let (m, th) = (memory.value(n), thermal.value(n));
            let _ = writeln!(
                dump,
                "{},{},{},{},{}",
                fmt_float(t),
                fmt_float(m.re),
                fmt_float(m.im),
                fmt_float(th.re),
                fmt_float(th.im)
            );
        }
        fs::write(cfg.out.with_extension("kernels.csv"), dump)?;
    }

    manifest.push_int("result.rows", grid.samples() as u64);
    let manifest_path = cfg.out.with_extension("manifest");
    fs::write(&manifest_path, manifest.finish())?;

    Ok(RunSummary {
        csv_path: cfg.out.clone(),
        manifest_path,
        rows: grid.samples(),
        max_abs_diff,
    })
}

/// Collects `key = value` manifest lines: the config as given (γ units),
/// then the resolved absolute parameters, then run diagnostics in the order
/// the pipeline produces them.
struct ManifestBuilder {
    lines: Vec<String>,
}

impl ManifestBuilder {
    fn new(
        cfg: &ScenarioConfig,
        grid: &TimeGrid,
        density: &SpectralDensity,
        quad: &QuadratureConfig,
    ) -> Result<Self, RunError> {
        let mut b = Self { lines: Vec::new() };
        b.push_str("model", cfg.model.as_str());
        b.push_str("out", &cfg.out.display().to_string());

        b.push_float("input.gamma", cfg.gamma);
        b.push_float("input.omega", cfg.omega);
        b.push_float("input.g", cfg.coupling);
        b.push_float("input.beta", cfg.beta);
        b.push_float("input.p", cfg.excited_weight);
        b.push_float("input.dispersion_c", cfg.dispersion_c);
        b.push_float("input.omega_min", cfg.resolved_omega_min());
        match cfg.omega_max {
            Some(w) => b.push_float("input.omega_max", w),
            None => b.push_str("input.omega_max", "auto"),
        }
        b.push_float("input.t_max", cfg.t_max);
        b.push_float("input.dt", cfg.dt);
        b.push_float("input.initial_mean_re", cfg.initial_mean.re);
        b.push_float("input.initial_mean_im", cfg.initial_mean.im);
        b.push_float("input.initial_occupation", cfg.initial_occupation);
        b.push_float("input.initial_square_re", cfg.initial_square.re);
        b.push_float("input.initial_square_im", cfg.initial_square.im);
        b.push_str("input.dump_kernels", if cfg.dump_kernels { "true" } else { "false" });

        let (lo, hi) = resolved_window(density, quad).map_err(RunError::Numeric)?;
        b.push_float("resolved.omega", cfg.omega_abs());
        b.push_float("resolved.g", cfg.coupling_abs());
        b.push_float("resolved.beta", cfg.beta_abs());
        b.push_float("resolved.dispersion_c", cfg.dispersion_abs());
        b.push_float("resolved.omega_min", lo);
        b.push_float("resolved.omega_max", hi);
        b.push_float("resolved.t_max", grid.t_max());
        b.push_int("resolved.samples", grid.samples() as u64);

        b.push_int("quadrature.points_per_period", cfg.points_per_period as u64);
        b.push_int("quadrature.nodes_per_panel", cfg.nodes_per_panel as u64);
        b.push_float("quadrature.tolerance", quad.tolerance);
        b.push_float("quadrature.tail_tolerance", quad.tail_tolerance);

        b.push_float("solver.step", grid.dt());
        b.push_int("solver.corrector_iterations", cfg.corrector_iterations as u64);
        b.push_str("solver.refine", if cfg.refine { "true" } else { "false" });
        Ok(b)
    }

    fn push_str(&mut self, key: &str, value: &str) {
        self.lines.push(format!("{key} = {value}"));
    }

    fn push_float(&mut self, key: &str, value: f64) {
        self.lines.push(format!("{key} = {}", fmt_float(value)));
    }

    fn push_int(&mut self, key: &str, value: u64) {
        self.lines.push(format!("{key} = {value}"));
    }

    fn finish(self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }
}
