//! Scenario pipelines: sample every quantity on the grid and check invariants.

use crate::dyson::{
    dyson_from_metric, dyson_sample, hermitian_counterpart, physical_hamiltonian,
    quasi_hermiticity_residual, DysonSample,
};
use crate::error::{Error, Result};
use crate::grid::IntegrationGrid;
use crate::metric::{integrate_metric, metric_rhs, zeta_metric, Su2Hamiltonian, ZetaConstants};
use crate::ode::{self, differentiate, StepControl};
use crate::propagator::{propagator_series, unitarity_residual};
use crate::su2::{eigensystem, hermiticity_residual, Complex2x2, StateVector2, C64, I};
use crate::yang_lee::{
    energy_expectation, eta_closed, phi_pm, psi_pm, rabi_h, rho_closed, rho_closed_derivative,
    u_closed, Branch, YangLeeParams,
};

use super::config::{Scenario, ScenarioConfig};
use super::report::{Check, VerificationReport};

/// Everything computed at one grid time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub rho: Complex2x2,
    pub dyson: DysonSample,
    /// Hermitian Hamiltonian `h(t)`.
    pub h: Complex2x2,
    /// `u(t, t_start)`.
    pub u: Complex2x2,
    /// Hermitian-picture states `[φ₊, φ₋]`.
    pub states: [StateVector2; 2],
    pub energies: [f64; 2],
    /// `‖H̃†ρ − ρH̃‖` for the energy observable `H̃`.
    pub quasi_hermiticity: f64,
}

/// Headline numbers of a run, used by sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min_det: f64,
    pub max_quasi_hermiticity: f64,
    /// Closed-versus-numeric deviations; `None` where the scenario has no oracle.
    pub metric_deviation: Option<f64>,
    pub h_deviation: Option<f64>,
    pub propagator_deviation: Option<f64>,
}

impl Summary {
    pub fn max_deviation(&self) -> Option<f64> {
        [self.metric_deviation, self.h_deviation, self.propagator_deviation]
            .into_iter()
            .flatten()
            .reduce(worst)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub samples: Vec<Sample>,
    pub report: VerificationReport,
    pub summary: Summary,
}

/// Larger of two residuals, with NaN winning so that it cannot hide.
fn worst(a: f64, b: f64) -> f64 {
    if b.is_nan() || b > a {
        b
    } else {
        a
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, worst)
}

/// Runs a resolved config.
pub fn evaluate(cfg: &ScenarioConfig) -> Result<ScenarioRun> {
    let grid = cfg.grid()?;
    let mut report = VerificationReport::new(cfg.scenario.to_string());
    let (samples, summary) = match cfg.scenario {
        Scenario::YangLeeClosed => closed(cfg, &grid, &mut report)?,
        Scenario::YangLeeNumeric | Scenario::Su2Generic => numeric(cfg, &grid, &mut report)?,
    };
    report.min_det = Some(summary.min_det);
    if summary.min_det > 0.0 && summary.min_det < cfg.tolerances.min_det_warning {
        report.warn(format!(
            "min det rho = {:.3e} is close to losing positivity",
            summary.min_det
        ));
    }
    Ok(ScenarioRun {
        config: cfg.clone(),
        samples,
        report,
        summary,
    })
}

fn yang_lee_checks(
    p: &YangLeeParams,
    samples: &[Sample],
    psi: impl Fn(usize, Branch) -> StateVector2,
    inner_tol: f64,
    energy_tol: f64,
    report: &mut VerificationReport,
) {
    let g = C64::new(0.0, p.gamma());
    let inner = max_of(samples.iter().enumerate().flat_map(|(k, s)| {
        let plus = psi(k, Branch::Plus);
        let minus = psi(k, Branch::Minus);
        let ip = |a: &StateVector2, b: &StateVector2| a.dot(&(s.rho * *b));
        [
            (ip(&plus, &plus) - 1.0).norm(),
            (ip(&minus, &minus) - 1.0).norm(),
            (ip(&minus, &plus) - g).norm(),
            (ip(&plus, &minus) + g).norm(),
        ]
    }));
    report.push(Check::bounded("inner_products", inner, inner_tol));
    let energy = max_of(samples.iter().flat_map(|s| {
        [Branch::Plus, Branch::Minus]
            .map(|b| (energy_expectation(s.t, b, p) - s.energies[(b == Branch::Minus) as usize]).abs())
    }));
    report.push(Check::bounded("energy", energy, energy_tol));
}

fn expectation(h: &Complex2x2, phi: &StateVector2) -> f64 {
    phi.dot(&(*h * *phi)).re
}

/// `u(t, t_s) = u(t, t₀)u(t_s, t₀)†`.
fn u_closed_from(t: f64, t_start: f64, p: &YangLeeParams) -> Complex2x2 {
    u_closed(t, p) * u_closed(t_start, p).adjoint()
}

fn closed(
    cfg: &ScenarioConfig,
    grid: &IntegrationGrid,
    report: &mut VerificationReport,
) -> Result<(Vec<Sample>, Summary)> {
    let tol = &cfg.tolerances;
    let p = cfg.yang_lee()?;
    let su2 = p.su2();
    let h1 = p.hamiltonian();
    let det_expected = p.rabi_frequency().powi(4) / p.gamma().powi(2);

    let mut flow = 0.0f64;
    let mut det_dev = 0.0f64;
    let mut relation = 0.0f64;
    let mut min_det = (f64::INFINITY, grid.t_start());
    let mut samples = Vec::with_capacity(grid.len());
    for t in grid.times() {
        let rho = rho_closed(t, &p);
        let dyson = eta_closed(t, &p);
        let h = rabi_h(t, &p);
        let states = [phi_pm(t, Branch::Plus, &p), phi_pm(t, Branch::Minus, &p)];
        let htilde = physical_hamiltonian(&h1, &dyson)?;
        flow = worst(flow, rho_closed_derivative(t, &p).max_abs_diff(&metric_rhs(&su2, &rho)));
        let det = rho.det().re;
        det_dev = worst(det_dev, (det - det_expected).abs());
        if det < min_det.0 {
            min_det = (det, t);
        }
        relation = worst(relation, hermitian_counterpart(&h1, &dyson)?.max_abs_diff(&h));
        samples.push(Sample {
            t,
            rho,
            dyson,
            h,
            u: u_closed_from(t, grid.t_start(), &p),
            states,
            energies: [energy_expectation(t, Branch::Plus, &p), energy_expectation(t, Branch::Minus, &p)],
            quasi_hermiticity: quasi_hermiticity_residual(&htilde, &rho),
        });
    }
    report.min_det_t = Some(min_det.1);
    report.push(Check::positive("positivity", min_det.0));
    report.push(Check::bounded("metric_flow", flow, tol.analytic));
    report.push(Check::bounded("determinant", det_dev, tol.determinant));
    report.push(Check::bounded("dyson_relation", relation, tol.analytic));
    let quasi = max_of(samples.iter().map(|s| s.quasi_hermiticity));
    report.push(Check::bounded("quasi_hermiticity", quasi, tol.analytic));

    // Closed forms are checked against each other, so energies are recomputed here.
    let mut recomputed = samples.clone();
    for s in &mut recomputed {
        s.energies = s.states.map(|phi| expectation(&s.h, &phi));
    }
    yang_lee_checks(
        &p,
        &recomputed,
        |k, b| psi_pm(samples[k].t, b, &p),
        tol.inner_product,
        tol.energy,
        report,
    );
    report.push(Check::bounded(
        "unitarity",
        max_of(samples.iter().map(|s| unitarity_residual(&s.u))),
        tol.unitarity,
    ));
    let us: Vec<_> = samples.iter().map(|s| s.u).collect();
    let u_dot = differentiate(&us, grid.dt());
    let schrodinger = max_of(
        samples
            .iter()
            .zip(&u_dot)
            .map(|(s, d)| (*d * I - s.h * s.u).frobenius_norm()),
    );
    report.push(Check::bounded("propagator_equation", schrodinger, tol.finite_difference));

    let summary = Summary {
        min_det: min_det.0,
        max_quasi_hermiticity: quasi,
        metric_deviation: None,
        h_deviation: None,
        propagator_deviation: None,
    };
    Ok((samples, summary))
}

/// `h(t)` from the closed-form metric with exact `η̇`.
fn reference_h(t: f64, su2: &Su2Hamiltonian, c: &ZetaConstants) -> Result<Complex2x2> {
    let rho = zeta_metric(t, su2, c)?.matrix();
    let s = dyson_sample(t, &rho, &metric_rhs(su2, &rho))?;
    hermitian_counterpart(&su2.matrix(), &s)
}

fn initial_states(
    cfg: &ScenarioConfig,
    oracle: Option<&YangLeeParams>,
    hm: &Complex2x2,
    rho0: &Complex2x2,
    t_start: f64,
) -> Result<[StateVector2; 2]> {
    if let Some(p) = oracle {
        return Ok([psi_pm(t_start, Branch::Plus, p), psi_pm(t_start, Branch::Minus, p)]);
    }
    if cfg.scenario.is_yang_lee() {
        // Non-default constants: same eigenstates, renormalised in the chosen metric.
        let p = cfg.yang_lee()?;
        let states = [psi_pm(t_start, Branch::Plus, &p), psi_pm(t_start, Branch::Minus, &p)];
        return Ok(states.map(|s| s * (1.0 / s.dot(&(*rho0 * s)).re.sqrt())));
    }
    let eig = eigensystem(hm)?;
    Ok([eig.vectors[1], eig.vectors[0]].map(|v| v * (1.0 / v.dot(&(*rho0 * v)).re.sqrt())))
}

fn numeric(
    cfg: &ScenarioConfig,
    grid: &IntegrationGrid,
    report: &mut VerificationReport,
) -> Result<(Vec<Sample>, Summary)> {
    let tol = &cfg.tolerances;
    let su2 = cfg.su2()?;
    let hm = su2.matrix();
    let c = cfg.zeta()?;
    let oracle = if cfg.scenario.is_yang_lee() {
        let p = cfg.yang_lee()?;
        (c == p.metric_constants()).then_some(p)
    } else {
        None
    };

    let rho0 = zeta_metric(grid.t_start(), &su2, &c)?.matrix();
    let flow = match integrate_metric(&su2, &rho0, grid) {
        Ok(f) => f,
        Err(e @ (Error::NotPositiveDefinite { .. } | Error::NotHermitian { .. })) => {
            report.warn(format!("initial metric rejected: {e}"));
            report.push(Check::failed("positivity"));
            return Ok((Vec::new(), failed_summary(rho0.det().re)));
        }
        Err(e) => return Err(e),
    };
    report.min_det_t = Some(flow.min_margin_t);
    let positive = if flow.breakdown.is_some() {
        flow.min_margin.min(0.0)
    } else {
        flow.min_margin
    };
    report.push(Check::positive("positivity", positive));
    if let Some(t) = flow.breakdown {
        report.warn(format!("metric lost positivity at t = {t}; later stages skipped"));
        return Ok((Vec::new(), failed_summary(flow.min_margin)));
    }

    let metric_dev = max_of(flow.series.iter().map(|(t, rho)| {
        zeta_metric(t, &su2, &c).map_or(f64::NAN, |m| rho.max_abs_diff(&m.matrix()))
    }));
    report.push(Check::bounded("metric_oracle", metric_dev, tol.metric));
    let det0 = rho0.det().re;
    let det_dev = max_of(flow.series.samples().iter().map(|r| (r.det().re - det0).abs()));
    report.push(Check::bounded("determinant", det_dev, tol.determinant));

    let dyson = dyson_from_metric(&flow.series)?;
    let h_of = |t: f64| reference_h(t, &su2, &c).unwrap_or_else(|_| Complex2x2::identity() * f64::NAN);
    let props = propagator_series(&h_of, grid)?;

    let psi0 = initial_states(cfg, oracle.as_ref(), &hm, &rho0, grid.t_start())?;
    let evolve = |psi: StateVector2| {
        ode::integrate(
            |_t, y: &StateVector2| (hm * *y) * -I,
            psi,
            grid.t_start(),
            grid.dt(),
            grid.steps(),
            StepControl::default(),
        )
    };
    let psi = [evolve(psi0[0])?, evolve(psi0[1])?];

    let mut h_dev = 0.0f64;
    let mut h_herm = 0.0f64;
    let mut samples = Vec::with_capacity(grid.len());
    for (k, (&rho, d)) in flow.series.samples().iter().zip(dyson.samples()).enumerate() {
        let t = grid.time(k);
        let h = hermitian_counterpart(&hm, d)?;
        h_dev = worst(h_dev, h.max_abs_diff(&h_of(t)));
        h_herm = worst(h_herm, hermiticity_residual(&h));
        let htilde = physical_hamiltonian(&hm, d)?;
        let states = [d.eta * psi[0][k], d.eta * psi[1][k]];
        samples.push(Sample {
            t,
            rho,
            dyson: *d,
            h,
            u: props.samples()[k],
            states,
            energies: states.map(|phi| expectation(&h, &phi)),
            quasi_hermiticity: quasi_hermiticity_residual(&htilde, &rho),
        });
    }
    report.push(Check::bounded("dyson_relation", h_dev, tol.finite_difference));
    report.push(Check::bounded("h_hermiticity", h_herm, tol.finite_difference));
    let quasi = max_of(samples.iter().map(|s| s.quasi_hermiticity));
    report.push(Check::bounded("quasi_hermiticity", quasi, tol.finite_difference));
    let norm = max_of(
        samples
            .iter()
            .flat_map(|s| s.states.map(|phi| (phi.dot(&phi).re - 1.0).abs())),
    );
    report.push(Check::bounded("state_norm", norm, tol.metric));
    report.push(Check::bounded(
        "unitarity",
        max_of(samples.iter().map(|s| unitarity_residual(&s.u))),
        tol.unitarity,
    ));

    let mut propagator_dev = None;
    if let Some(p) = &oracle {
        let dev = max_of(
            samples
                .iter()
                .map(|s| s.u.max_abs_diff(&u_closed_from(s.t, grid.t_start(), p))),
        );
        report.push(Check::bounded("propagator_oracle", dev, tol.propagator));
        propagator_dev = Some(dev);
        yang_lee_checks(
            p,
            &samples,
            |k, b| psi[(b == Branch::Minus) as usize][k],
            tol.metric,
            tol.finite_difference,
            report,
        );
    }

    let summary = Summary {
        min_det: flow.min_margin,
        max_quasi_hermiticity: quasi,
        metric_deviation: Some(metric_dev),
        h_deviation: Some(h_dev),
        propagator_deviation: propagator_dev,
    };
    Ok((samples, summary))
}

fn failed_summary(min_det: f64) -> Summary {
    Summary {
        min_det,
        max_quasi_hermiticity: f64::NAN,
        metric_deviation: None,
        h_deviation: None,
        propagator_deviation: None,
    }
}
