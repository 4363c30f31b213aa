//! Scenario configuration: a flat `key = value` text format with `#`
//! comments, one scenario per file.
//!
//! All rate-like inputs are dimensionless multiples of the density width γ
//! (and times are multiples of 1/γ), so a config written for γ = 1 can be
//! rescaled by setting the `gamma` key alone. The `*_abs` accessors resolve
//! the absolute values the pipeline consumes.

use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

/// Which pipeline the scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Two-level excited-state population.
    Friedrichs,
    /// Oscillator first and second moments.
    Oscillator,
    /// Two-level population computed both ways, side by side.
    OracleCompare,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Friedrichs => "friedrichs",
            Model::Oscillator => "oscillator",
            Model::OracleCompare => "oracle-compare",
        }
    }

    fn parse(value: &str) -> Option<Model> {
        match value {
            "friedrichs" => Some(Model::Friedrichs),
            "oscillator" => Some(Model::Oscillator),
            "oracle-compare" => Some(Model::OracleCompare),
            _ => None,
        }
    }
}

/// A fully resolved scenario. Field values are in γ units as described in
/// the module docs; `out` is the result CSV path.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: Model,
    pub out: PathBuf,
    /// Absolute value of the density width; the unit of every other rate.
    pub gamma: f64,
    /// System frequency and density center, Ω/γ.
    pub omega: f64,
    /// Coupling amplitude g/γ.
    pub coupling: f64,
    /// Inverse temperature times γ.
    pub beta: f64,
    /// Initial excited-state weight p of the two-level model.
    pub excited_weight: f64,
    /// Linear dispersion slope in units of γ.
    pub dispersion_c: f64,
    /// Lower window edge in units of γ; defaults to 0 (two-level) or 0.5
    /// (oscillator, which needs a positive edge under the Bose weight).
    pub omega_min: Option<f64>,
    /// Upper window edge in units of γ; defaults to the tail-tolerance
    /// cutoff.
    pub omega_max: Option<f64>,
    /// Duration in units of 1/γ.
    pub t_max: f64,
    /// Step in units of 1/γ; t_max/dt must be an integer.
    pub dt: f64,
    pub points_per_period: u32,
    pub nodes_per_panel: u32,
    pub quad_tolerance: f64,
    pub tail_tolerance: f64,
    pub corrector_iterations: usize,
    pub refine: bool,
    /// Mode count of the discrete-bath comparison path.
    pub oracle_modes: usize,
    /// Initial ⟨a⟩ of the oscillator model.
    pub initial_mean: Complex64,
    /// Initial ⟨a†a⟩ of the oscillator model.
    pub initial_occupation: f64,
    /// Initial ⟨a²⟩ of the oscillator model.
    pub initial_square: Complex64,
    /// Also write the sampled kernels next to the results.
    pub dump_kernels: bool,
}

impl ScenarioConfig {
    fn defaults(model: Model, out: PathBuf) -> Self {
        Self {
            model,
            out,
            gamma: 1.0,
            omega: 5.0,
            coupling: 0.5,
            beta: 0.5,
            excited_weight: 0.3,
            dispersion_c: 100.0,
            omega_min: None,
            omega_max: None,
            t_max: 10.0,
            dt: 1e-3,
            points_per_period: 8,
            nodes_per_panel: 12,
            quad_tolerance: 1e-6,
            tail_tolerance: 5e-4,
            corrector_iterations: 2,
            refine: false,
            oracle_modes: 2000,
            initial_mean: Complex64::new(0.0, 0.0),
            initial_occupation: 0.0,
            initial_square: Complex64::new(0.0, 0.0),
            dump_kernels: false,
        }
    }

    /// Lower window edge in γ units after applying the model default.
    pub fn resolved_omega_min(&self) -> f64 {
        self.omega_min.unwrap_or(match self.model {
            Model::Oscillator => 0.5,
            _ => 0.0,
        })
    }

    pub fn omega_abs(&self) -> f64 {
        self.omega * self.gamma
    }

    pub fn coupling_abs(&self) -> f64 {
        self.coupling * self.gamma
    }

    pub fn beta_abs(&self) -> f64 {
        self.beta / self.gamma
    }

    pub fn dispersion_abs(&self) -> f64 {
        self.dispersion_c * self.gamma
    }

    pub fn omega_min_abs(&self) -> f64 {
        self.resolved_omega_min() * self.gamma
    }

    pub fn omega_max_abs(&self) -> Option<f64> {
        self.omega_max.map(|w| w * self.gamma)
    }

    pub fn t_max_abs(&self) -> f64 {
        self.t_max / self.gamma
    }

    pub fn dt_abs(&self) -> f64 {
        self.dt / self.gamma
    }
}

/// Config-file problem with the offending line when one is known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "model",
    "out",
    "gamma",
    "omega",
    "g",
    "beta",
    "p",
    "dispersion_c",
    "omega_min",
    "omega_max",
    "t_max",
    "dt",
    "points_per_period",
    "nodes_per_panel",
    "quad_tolerance",
    "tail_tolerance",
    "corrector_iterations",
    "refine",
    "oracle_modes",
    "initial_mean_re",
    "initial_mean_im",
    "initial_occupation",
    "initial_square_re",
    "initial_square_im",
    "dump_kernels",
];

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let parsed: f64 = value
        .parse()
        .map_err(|_| ConfigError::at(line, format!("invalid number for '{key}': '{value}'")))?;
    if !parsed.is_finite() {
        return Err(ConfigError::at(line, format!("'{key}' must be finite")));
    }
    Ok(parsed)
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::at(line, format!("invalid integer for '{key}': '{value}'")))
}

fn parse_u32(line: usize, key: &str, value: &str) -> Result<u32, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::at(line, format!("invalid integer for '{key}': '{value}'")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::at(
            line,
            format!("invalid boolean for '{key}': '{value}' (use true or false)"),
        )),
    }
}

/// Parse and validate one scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    let mut first_line: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::at(line, "expected 'key = value'"));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::at(line, "missing key before '='"));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line, format!("empty value for '{key}'")));
        }
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::at(line, format!("unknown key '{key}'")));
        }
        if let Some(first) = first_line.get(&key) {
            return Err(ConfigError::at(
                line,
                format!("duplicate key '{key}' (first set on line {first})"),
            ));
        }
        first_line.insert(key.clone(), line);
        entries.push((line, key, value));
    }

    let model_entry = entries.iter().find(|(_, k, _)| k == "model");
    let Some((model_line, _, model_value)) = model_entry else {
        return Err(ConfigError::general("missing required key 'model'"));
    };
    let Some(model) = Model::parse(model_value) else {
        return Err(ConfigError::at(
            *model_line,
            format!("unknown model '{model_value}' (expected friedrichs, oscillator, or oracle-compare)"),
        ));
    };
    let Some((_, _, out_value)) = entries.iter().find(|(_, k, _)| k == "out") else {
        return Err(ConfigError::general("missing required key 'out'"));
    };

    let mut cfg = ScenarioConfig::defaults(model, PathBuf::from(out_value));
    for (line, key, value) in &entries {
        let (line, value) = (*line, value.as_str());
        match key.as_str() {
            "model" | "out" => {}
            "gamma" => cfg.gamma = parse_f64(line, key, value)?,
            "omega" => cfg.omega = parse_f64(line, key, value)?,
            "g" => cfg.coupling = parse_f64(line, key, value)?,
            "beta" => cfg.beta = parse_f64(line, key, value)?,
            "p" => cfg.excited_weight = parse_f64(line, key, value)?,
            "dispersion_c" => cfg.dispersion_c = parse_f64(line, key, value)?,
            "omega_min" => cfg.omega_min = Some(parse_f64(line, key, value)?),
            "omega_max" => cfg.omega_max = Some(parse_f64(line, key, value)?),
            "t_max" => cfg.t_max = parse_f64(line, key, value)?,
            "dt" => cfg.dt = parse_f64(line, key, value)?,
            "points_per_period" => cfg.points_per_period = parse_u32(line, key, value)?,
            "nodes_per_panel" => cfg.nodes_per_panel = parse_u32(line, key, value)?,
            "quad_tolerance" => cfg.quad_tolerance = parse_f64(line, key, value)?,
            "tail_tolerance" => cfg.tail_tolerance = parse_f64(line, key, value)?,
            "corrector_iterations" => cfg.corrector_iterations = parse_usize(line, key, value)?,
            "refine" => cfg.refine = parse_bool(line, key, value)?,
            "oracle_modes" => cfg.oracle_modes = parse_usize(line, key, value)?,
            "initial_mean_re" => cfg.initial_mean.re = parse_f64(line, key, value)?,
            "initial_mean_im" => cfg.initial_mean.im = parse_f64(line, key, value)?,
            "initial_occupation" => cfg.initial_occupation = parse_f64(line, key, value)?,
            "initial_square_re" => cfg.initial_square.re = parse_f64(line, key, value)?,
            "initial_square_im" => cfg.initial_square.im = parse_f64(line, key, value)?,
            "dump_kernels" => cfg.dump_kernels = parse_bool(line, key, value)?,
            other => unreachable!("key '{other}' passed the known-key filter"),
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &ScenarioConfig) -> Result<(), ConfigError> {
    let positive = [
        ("gamma", cfg.gamma),
        ("omega", cfg.omega),
        ("beta", cfg.beta),
        ("dispersion_c", cfg.dispersion_c),
        ("t_max", cfg.t_max),
        ("dt", cfg.dt),
        ("quad_tolerance", cfg.quad_tolerance),
    ];
    for (key, value) in positive {
        if value <= 0.0 {
            return Err(ConfigError::general(format!(
                "'{key}' must be positive, got {value}"
            )));
        }
    }
    if cfg.coupling < 0.0 {
        return Err(ConfigError::general(format!(
            "'g' must be nonnegative, got {}",
            cfg.coupling
        )));
    }
    if !(0.0..=1.0).contains(&cfg.excited_weight) {
        return Err(ConfigError::general(format!(
            "'p' must lie in [0, 1], got {}",
            cfg.excited_weight
        )));
    }
    let steps = cfg.t_max / cfg.dt;
    if steps.round() < 1.0 || (steps - steps.round()).abs() > 1e-9 * steps.round() {
        return Err(ConfigError::general(format!(
            "t_max/dt must be a whole number of steps, got {steps}"
        )));
    }
    if let Some(omega_min) = cfg.omega_min {
        if omega_min < 0.0 {
            return Err(ConfigError::general(format!(
                "'omega_min' must be nonnegative, got {omega_min}"
            )));
        }
    }
    if let Some(omega_max) = cfg.omega_max {
        if omega_max <= cfg.resolved_omega_min() {
            return Err(ConfigError::general(format!(
                "'omega_max' ({omega_max}) must exceed the lower window edge ({})",
                cfg.resolved_omega_min()
            )));
        }
    }
    if cfg.model == Model::Oscillator && cfg.resolved_omega_min() <= 0.0 && cfg.coupling > 0.0 {
        return Err(ConfigError::general(
            "the oscillator model needs omega_min > 0 (the Bose weight diverges at zero frequency)",
        ));
    }
    if cfg.points_per_period == 0 {
        return Err(ConfigError::general("'points_per_period' must be positive"));
    }
    if cfg.nodes_per_panel < 2 {
        return Err(ConfigError::general("'nodes_per_panel' must be at least 2"));
    }
    if !(0.0..1.0).contains(&cfg.tail_tolerance) || cfg.tail_tolerance == 0.0 {
        return Err(ConfigError::general(format!(
            "'tail_tolerance' must lie in (0, 1), got {}",
            cfg.tail_tolerance
        )));
    }
    if cfg.oracle_modes == 0 {
        return Err(ConfigError::general("'oracle_modes' must be at least 1"));
    }
    if cfg.initial_occupation < 0.0 {
        return Err(ConfigError::general(format!(
            "'initial_occupation' must be nonnegative, got {}",
            cfg.initial_occupation
        )));
    }
    if cfg.initial_mean.norm_sqr() > cfg.initial_occupation + 1e-12 {
        return Err(ConfigError::general(
            "initial |⟨a⟩|² exceeds the initial occupation ⟨a†a⟩",
        ));
    }
    Ok(())
}

/// Built-in two-level population scenario: Ω = 5γ, βγ = 0.5, p = 0.3,
/// dispersion slope 100γ, γt ∈ [0, 10] at γ dt = 10⁻³.
pub fn figure1_preset(g_over_gamma: f64, out: PathBuf) -> Result<ScenarioConfig, ConfigError> {
    if !g_over_gamma.is_finite() || g_over_gamma <= 0.0 {
        return Err(ConfigError::general(format!(
            "the preset coupling must be positive, got {g_over_gamma}"
        )));
    }
    let mut cfg = ScenarioConfig::defaults(Model::Friedrichs, out);
    cfg.coupling = g_over_gamma;
    Ok(cfg)
}
