//! One-parameter sweeps over a template config.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::config::{Scenario, ScenarioConfig};
use super::output::{format_float, write_csv};
use super::scenario::evaluate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Gamma,
    Omega,
    Dt,
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Self::Gamma),
            "omega" => Ok(Self::Omega),
            "dt" => Ok(Self::Dt),
            other => Err(Error::ConfigInvalid(format!(
                "unknown sweep parameter {other:?}; expected gamma, omega or dt"
            ))),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gamma => "gamma",
            Self::Omega => "omega",
            Self::Dt => "dt",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub min_det: f64,
    pub max_quasi_hermiticity: f64,
    /// NaN where the scenario has no closed form to compare with.
    pub metric_deviation: f64,
    pub h_deviation: f64,
    pub propagator_deviation: f64,
    pub max_deviation: f64,
    pub passed: bool,
}

pub const SWEEP_COLUMNS: [&str; 8] = [
    "value",
    "min_det",
    "max_quasi_hermiticity",
    "metric_deviation",
    "h_deviation",
    "propagator_deviation",
    "max_deviation",
    "passed",
];

/// Evaluates one row per value, in input order. A `yang-lee-closed` template
/// is run as `yang-lee-numeric`, since the deviation columns compare the two.
/// Time windows left open in the template are re-derived for every value.
pub fn sweep(
    template: &ScenarioConfig,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::ConfigInvalid("sweep needs at least one value".into()));
    }
    let mut base = template.clone();
    if base.scenario == Scenario::YangLeeClosed {
        base.scenario = Scenario::YangLeeNumeric;
    }
    let configs = values
        .iter()
        .map(|&v| {
            let mut cfg = base.clone();
            match parameter {
                SweepParameter::Gamma => cfg.gamma = v,
                SweepParameter::Omega => cfg.omega = v,
                SweepParameter::Dt => cfg.dt = v,
            }
            cfg.resolve()
        })
        .collect::<Result<Vec<_>>>()?;
    configs
        .par_iter()
        .zip(values)
        .map(|(cfg, &value)| {
            let run = evaluate(cfg)?;
            let s = run.summary;
            let nan = f64::NAN;
            Ok(SweepRow {
                value,
                min_det: s.min_det,
                max_quasi_hermiticity: s.max_quasi_hermiticity,
                metric_deviation: s.metric_deviation.unwrap_or(nan),
                h_deviation: s.h_deviation.unwrap_or(nan),
                propagator_deviation: s.propagator_deviation.unwrap_or(nan),
                max_deviation: s.max_deviation().unwrap_or(nan),
                passed: run.report.passed(),
            })
        })
        .collect()
}

pub fn write_table<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let header: Vec<String> = SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect();
    let body: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            vec![
                r.value,
                r.min_det,
                r.max_quasi_hermiticity,
                r.metric_deviation,
                r.h_deviation,
                r.propagator_deviation,
                r.max_deviation,
                if r.passed { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    write_csv(out, &header, &body)
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::ConfigInvalid(format!("sweep value {s:?} is not a number")))
        })
        .collect()
}

impl fmt::Display for SweepRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} min_det {} max_dev {}",
            format_float(self.value),
            format_float(self.min_det),
            format_float(self.max_deviation)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template(dt: f64) -> ScenarioConfig {
        ScenarioConfig::from_toml(&format!("scenario = \"yang-lee-numeric\"\ndt = {dt}")).unwrap()
    }

    #[test]
    fn empty_values_are_rejected() {
        assert!(matches!(
            sweep(&template(0.01), SweepParameter::Gamma, &[]),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(parse_values(" , ").unwrap().is_empty());
        assert!(parse_values("0.1,x").is_err());
        assert!("beta".parse::<SweepParameter>().is_err());
    }

    #[test]
    fn gamma_sweep_min_det_follows_closed_form() {
        let gammas: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let rows = sweep(&template(0.01), SweepParameter::Gamma, &gammas).unwrap();
        for (row, g) in rows.iter().zip(&gammas) {
            assert_eq!(row.value, *g);
            let w2 = 1.0 - g * g;
            let expected = w2 * w2 / (g * g);
            assert!((row.min_det - expected).abs() < 1e-8 * expected.max(1.0), "{row}");
        }
    }
}
