//! Scenario configuration: a TOML file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::IntegrationGrid;
use crate::metric::{Su2Hamiltonian, ZetaConstants};
use crate::yang_lee::YangLeeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Every quantity from the Yang–Lee closed forms.
    YangLeeClosed,
    /// Yang–Lee with integrated metric, differenced Dyson map and numeric propagator.
    YangLeeNumeric,
    /// Any SU(2) Hamiltonian with `λ₀ = 0` and `κ⃗·λ⃗ = 0`, numeric throughout.
    Su2Generic,
}

impl Scenario {
    pub fn is_yang_lee(self) -> bool {
        !matches!(self, Scenario::Su2Generic)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::YangLeeClosed => "yang-lee-closed",
            Scenario::YangLeeNumeric => "yang-lee-numeric",
            Scenario::Su2Generic => "su2-generic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Metric,
    Dyson,
    HermitianH,
    States,
    Propagator,
    Energies,
    Invariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `H = ½(κ₀ + iλ₀)𝕀 + ½(κ⃗ + iλ⃗)·σ⃗`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    #[serde(default)]
    pub kappa0: f64,
    #[serde(default)]
    pub lambda0: f64,
    pub kappa: [f64; 3],
    pub lambda: [f64; 3],
}

impl HamiltonianSpec {
    pub fn su2(&self) -> Su2Hamiltonian {
        Su2Hamiltonian::new(self.kappa0, self.lambda0, self.kappa, self.lambda)
    }
}

/// Residual bounds for the verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form identities evaluated analytically.
    pub analytic: f64,
    /// Quantities that go through finite-difference `η̇` or `u̇`.
    pub finite_difference: f64,
    /// Integrated metric against its closed form.
    pub metric: f64,
    /// Drift of `det ρ`.
    pub determinant: f64,
    /// Numeric propagator against its closed form.
    pub propagator: f64,
    /// `‖u†u − 𝕀‖` for Hermitian-picture propagators.
    pub unitarity: f64,
    /// `ρ`-inner products of the non-Hermitian eigenstates.
    pub inner_product: f64,
    /// Energy expectation against its closed form.
    pub energy: f64,
    /// `min det ρ` below this raises a warning.
    pub min_det_warning: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic: 1e-9,
            finite_difference: 1e-6,
            metric: 1e-8,
            determinant: 1e-10,
            propagator: 1e-7,
            unitarity: 1e-9,
            inner_product: 1e-9,
            energy: 1e-9,
            min_det_warning: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// `(c₁, c₂, c₃, c₄)` of the ζ-family metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_constants: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    /// Defaults to `t₀ = −π/(2Ω)` for Yang–Lee and `0` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    /// Defaults to two Rabi periods after `t_start`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Largest step; the window is split into equal steps no longer than this.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_path: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_gamma() -> f64 {
    0.5
}

fn default_omega() -> f64 {
    1.0
}

fn default_dt() -> f64 {
    1e-3
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub gamma: Option<f64>,
    pub dt: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(g) = o.gamma {
            self.gamma = g;
        }
        if let Some(dt) = o.dt {
            self.dt = dt;
        }
        if let Some(out) = &o.out {
            self.out_path = Some(out.clone());
        }
    }

    /// Checks consistency and fills in the time window.
    pub fn resolve(mut self) -> Result<Self> {
        let invalid = |m: String| Err(Error::ConfigInvalid(m));
        let mut seen = Vec::with_capacity(self.outputs.len());
        for o in &self.outputs {
            if seen.contains(o) {
                return invalid(format!("output {o:?} listed twice"));
            }
            seen.push(*o);
        }
        if !self.omega.is_finite() {
            return invalid(format!("omega must be finite, got {}", self.omega));
        }
        let rabi = match self.scenario {
            Scenario::YangLeeClosed | Scenario::YangLeeNumeric => {
                if self.hamiltonian.is_some() {
                    return invalid("[hamiltonian] only applies to su2-generic".into());
                }
                if self.scenario == Scenario::YangLeeClosed && self.zeta_constants.is_some() {
                    return invalid("zeta_constants do not apply to yang-lee-closed".into());
                }
                self.yang_lee()?.rabi_frequency()
            }
            Scenario::Su2Generic => {
                let spec = self
                    .hamiltonian
                    .ok_or_else(|| Error::ConfigInvalid("su2-generic needs a [hamiltonian] section".into()))?;
                if self.zeta_constants.is_none() {
                    return invalid("su2-generic needs zeta_constants".into());
                }
                let h = spec.su2();
                if h.lambda0 != 0.0 {
                    return invalid("lambda0 must be 0 for a time-dependent metric".into());
                }
                if h.kappa_dot_lambda().abs() > crate::metric::ORTHOGONALITY_TOL {
                    return invalid("kappa and lambda must be orthogonal".into());
                }
                h.rabi_frequency().ok_or_else(|| {
                    Error::ConfigInvalid("|kappa| must exceed |lambda|".into())
                })?
            }
        };
        let t_start = match self.t_start {
            Some(t) => t,
            None if self.scenario.is_yang_lee() => self.yang_lee()?.reference_time(),
            None => 0.0,
        };
        let t_end = self
            .t_end
            .unwrap_or(t_start + 4.0 * std::f64::consts::PI / rabi);
        IntegrationGrid::with_max_step(t_start, t_end, self.dt)
            .map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        self.t_start = Some(t_start);
        self.t_end = Some(t_end);
        Ok(self)
    }

    pub fn yang_lee(&self) -> Result<YangLeeParams> {
        YangLeeParams::new(self.gamma, self.omega).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    /// The Hamiltonian whose metric is built: `H₁` for Yang–Lee, else `[hamiltonian]`.
    pub fn su2(&self) -> Result<Su2Hamiltonian> {
        match self.hamiltonian {
            Some(spec) if !self.scenario.is_yang_lee() => Ok(spec.su2()),
            _ => Ok(self.yang_lee()?.su2()),
        }
    }

    /// Explicit constants, or the Yang–Lee ones.
    pub fn zeta(&self) -> Result<ZetaConstants> {
        match self.zeta_constants {
            Some([c1, c2, c3, c4]) => Ok(ZetaConstants::new(c1, c2, c3, c4)),
            None => Ok(self.yang_lee()?.metric_constants()),
        }
    }

    /// Grid of a resolved config.
    pub fn grid(&self) -> Result<IntegrationGrid> {
        match (self.t_start, self.t_end) {
            (Some(a), Some(b)) => IntegrationGrid::with_max_step(a, b, self.dt),
            _ => Err(Error::ConfigInvalid("time window not resolved".into())),
        }
    }
}
