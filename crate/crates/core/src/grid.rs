use crate::error::{Error, Result};

/// Uniform time grid `t_n = n * dt` for `n = 0 .. samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    samples: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, samples: usize) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        if samples == 0 {
            return Err(Error::Domain("a grid needs at least one sample".into()));
        }
        Ok(Self { dt, samples })
    }

    /// Grid covering `[0, t_max]`; `t_max` must be an integer number of steps
    /// (within a small relative slack, to absorb decimal input).
    pub fn from_duration(t_max: f64, dt: f64) -> Result<Self> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        let steps = t_max / dt;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-9 * steps.max(1.0) || rounded < 1.0 {
            return Err(Error::Domain(format!(
                "t_max = {t_max} is not an integer number of steps of dt = {dt}"
            )));
        }
        Ok(Self {
            dt,
            samples: rounded as usize + 1,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn t_max(&self) -> f64 {
        self.dt * (self.samples - 1) as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(|n| self.time(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duration_grid_counts_the_endpoint() {
        let g = TimeGrid::from_duration(10.0, 1e-3).unwrap();
        assert_eq!(g.samples(), 10001);
        assert!((g.t_max() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn non_integral_duration_is_rejected() {
        assert!(TimeGrid::from_duration(1.0, 0.3).is_err());
        assert!(TimeGrid::from_duration(-1.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 4).is_err());
        assert!(TimeGrid::new(0.1, 0).is_err());
    }
}
