//! Uniform time grids and sampled series.

use crate::error::{Error, Result};

/// Relative slack allowed when checking that a step divides an interval.
const DIVISIBILITY_TOL: f64 = 1e-9;

/// Uniform grid `t_start, t_start + dt, …, t_end` with `steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
    steps: usize,
}

impl IntegrationGrid {
    /// Strict constructor: `(t_end − t_start)/dt` must be a positive integer
    /// within rounding.
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        let span = Self::check_span(t_start, t_end, dt)?;
        let ratio = span / dt;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > DIVISIBILITY_TOL * ratio.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "step {dt} does not divide the interval [{t_start}, {t_end}]"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            dt: span / steps,
            steps: steps as usize,
        })
    }

    /// Uses the smallest number of equal steps not longer than `max_dt`.
    pub fn with_max_step(t_start: f64, t_end: f64, max_dt: f64) -> Result<Self> {
        let span = Self::check_span(t_start, t_end, max_dt)?;
        let ratio = span / max_dt;
        let steps = if (ratio - ratio.round()).abs() <= DIVISIBILITY_TOL * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        }
        .max(1.0);
        Ok(Self {
            t_start,
            t_end,
            dt: span / steps,
            steps: steps as usize,
        })
    }

    fn check_span(t_start: f64, t_end: f64, dt: f64) -> Result<f64> {
        if !(t_start.is_finite() && t_end.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidGrid("non-finite grid bounds".into()));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive, got {dt}")));
        }
        let span = t_end - t_start;
        if span <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "empty interval [{t_start}, {t_end}]"
            )));
        }
        Ok(span)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of sample points, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }
}

/// Samples on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    t0: f64,
    dt: f64,
    samples: Vec<T>,
}

impl<T> TimeSeries<T> {
    pub fn new(t0: f64, dt: f64, samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidGrid("time series needs at least one sample".into()));
        }
        if !(t0.is_finite() && dt.is_finite()) || (samples.len() > 1 && dt <= 0.0) {
            return Err(Error::InvalidGrid(format!("bad series spacing t0={t0}, dt={dt}")));
        }
        Ok(Self { t0, dt, samples })
    }

    /// Evaluates `f` at every point of `grid`.
    pub fn sample(grid: &IntegrationGrid, f: impl FnMut(f64) -> T) -> Self {
        Self {
            t0: grid.t_start(),
            dt: grid.dt(),
            samples: grid.times().map(f).collect(),
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn get(&self, k: usize) -> Option<&T> {
        self.samples.get(k)
    }

    pub fn last(&self) -> &T {
        self.samples.last().expect("series is non-empty")
    }

    /// `(t, sample)` pairs in time order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> + '_ {
        self.samples.iter().enumerate().map(|(k, s)| (self.time(k), s))
    }

    /// Index of the sample at time `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        if self.samples.len() == 1 {
            return ((t - self.t0).abs() <= 1e-12 * self.t0.abs().max(1.0)).then_some(0);
        }
        let x = (t - self.t0) / self.dt;
        let k = x.round();
        if k < 0.0 || k as usize >= self.samples.len() || (x - k).abs() > 1e-6 {
            return None;
        }
        Some(k as usize)
    }

    pub fn map<U>(&self, mut f: impl FnMut(f64, &T) -> U) -> TimeSeries<U> {
        TimeSeries {
            t0: self.t0,
            dt: self.dt,
            samples: self.iter().map(|(t, s)| f(t, s)).collect(),
        }
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(f64, &T) -> Result<U>) -> Result<TimeSeries<U>> {
        Ok(TimeSeries {
            t0: self.t0,
            dt: self.dt,
            samples: self.iter().map(|(t, s)| f(t, s)).collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_grid_requires_divisibility() {
        let g = IntegrationGrid::new(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g.steps(), 4);
        assert_eq!(g.len(), 5);
        assert_eq!(g.time(4), 1.0);
        // 0.1 is inexact in binary but divides within rounding
        assert_eq!(IntegrationGrid::new(0.0, 1.0, 0.1).unwrap().steps(), 10);
        assert!(IntegrationGrid::new(0.0, 1.0, 0.3).is_err());
        assert!(IntegrationGrid::new(1.0, 1.0, 0.1).is_err());
        assert!(IntegrationGrid::new(0.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn max_step_grid_rounds_up() {
        let g = IntegrationGrid::with_max_step(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.steps(), 4);
        assert!((g.dt() - 0.25).abs() < 1e-15);
        let span = 4.0 * std::f64::consts::PI;
        let g = IntegrationGrid::with_max_step(0.0, span, 1e-3).unwrap();
        assert!(g.dt() <= 1e-3);
        assert_eq!(g.time(g.steps()), span);
    }

    #[test]
    fn series_lookup() {
        let s = TimeSeries::new(1.0, 0.5, vec![10, 20, 30]).unwrap();
        assert_eq!(s.index_of(2.0), Some(2));
        assert_eq!(s.index_of(1.25), None);
        assert_eq!(s.index_of(3.0), None);
        assert!(TimeSeries::<i32>::new(0.0, 1.0, vec![]).is_err());
        let doubled = s.map(|_, v| v * 2);
        assert_eq!(doubled.samples(), &[20, 40, 60]);
    }
}
