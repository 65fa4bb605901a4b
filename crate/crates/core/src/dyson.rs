//! Time-dependent Dyson maps and the Hamiltonians they induce.
//!
//! Given a metric series `ρ(t)`, the Dyson map is taken Hermitian, `η = √ρ`.
//! Any `η′ = Uη` with unitary `U` yields the same metric; only the Hermitian
//! branch is produced here.

use crate::error::{Error, Result};
use crate::grid::TimeSeries;
use crate::ode::differentiate;
use crate::su2::{self, hermitian_sqrt, pauli_compose, pauli_decompose, Complex2x2, PauliCoefficients, I};

/// `|det η|` below which a Dyson map is treated as singular.
pub const MIN_DYSON_DET: f64 = 1e-12;

/// Dyson map and its time derivative at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DysonSample {
    pub t: f64,
    pub eta: Complex2x2,
    pub eta_dot: Complex2x2,
}

impl DysonSample {
    pub fn inverse(&self) -> Result<Complex2x2> {
        self.eta
            .inverse_checked(MIN_DYSON_DET)
            .ok_or_else(|| Error::SingularDysonMap {
                det: self.eta.det().norm(),
            })
    }

    /// The metric this map induces, `η†η`.
    pub fn metric(&self) -> Complex2x2 {
        self.eta.adjoint() * self.eta
    }
}

/// Hermitian square roots of a metric series, with `η̇` from fourth-order
/// finite differences over the sample grid.
pub fn dyson_from_metric(rho_series: &TimeSeries<Complex2x2>) -> Result<TimeSeries<DysonSample>> {
    let etas = rho_series.try_map(|t, rho| {
        hermitian_sqrt(rho).map_err(|e| match e {
            Error::NotPositiveDefinite { .. } => Error::NotPositiveDefinite { t: Some(t) },
            other => other,
        })
    })?;
    let derivs = differentiate(etas.samples(), etas.dt());
    let samples = etas
        .iter()
        .zip(derivs)
        .map(|((t, eta), eta_dot)| DysonSample {
            t,
            eta: *eta,
            eta_dot,
        })
        .collect();
    TimeSeries::new(etas.t0(), etas.dt(), samples)
}

/// `η = √ρ` and the exact `η̇` solving `ηη̇ + η̇η = ρ̇`.
///
/// Writing `η = a𝕀 + v⃗·σ⃗` and `ρ = α𝕀 + β⃗·σ⃗` gives
/// `ȧ = (aα̇ − v⃗·β⃗̇)/(2 det η)` and `v⃗̇ = (β⃗̇ − 2ȧv⃗)/(2a)`.
pub fn dyson_sample(t: f64, rho: &Complex2x2, rho_dot: &Complex2x2) -> Result<DysonSample> {
    let eta = hermitian_sqrt(rho).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::NotPositiveDefinite { t: Some(t) },
        other => other,
    })?;
    let e = pauli_decompose(&eta);
    let d = pauli_decompose(rho_dot);
    let a = e.a0.re;
    let v = e.real_vector();
    let beta_dot = d.real_vector();
    let det = a * a - v.iter().map(|x| x * x).sum::<f64>();
    if !(det > MIN_DYSON_DET) {
        return Err(Error::SingularDysonMap { det: det.abs() });
    }
    let v_bd: f64 = v.iter().zip(&beta_dot).map(|(x, y)| x * y).sum();
    let a_dot = (a * d.a0.re - v_bd) / (2.0 * det);
    let v_dot = [0, 1, 2].map(|j| (beta_dot[j] - 2.0 * a_dot * v[j]) / (2.0 * a));
    Ok(DysonSample {
        t,
        eta,
        eta_dot: pauli_compose(&PauliCoefficients::real(a_dot, v_dot)),
    })
}

/// `h = ηHη⁻¹ + i(∂ₜη)η⁻¹`.
pub fn hermitian_counterpart(h: &Complex2x2, s: &DysonSample) -> Result<Complex2x2> {
    let inv = s.inverse()?;
    Ok(s.eta * *h * inv + s.eta_dot * inv * I)
}

/// `H̃ = H + iη⁻¹∂ₜη`, equivalently `η⁻¹hη`.
pub fn physical_hamiltonian(h: &Complex2x2, s: &DysonSample) -> Result<Complex2x2> {
    let inv = s.inverse()?;
    Ok(*h + inv * s.eta_dot * I)
}

/// `‖H̃†ρ − ρH̃‖_F`; zero iff `H̃` is quasi-Hermitian with respect to `ρ`.
pub fn quasi_hermiticity_residual(htilde: &Complex2x2, rho: &Complex2x2) -> f64 {
    (htilde.adjoint() * *rho - *rho * *htilde).frobenius_norm()
}

/// `η̇` Hermiticity residual, a cheap sanity check on a differentiated series.
pub fn max_eta_dot_asymmetry(series: &TimeSeries<DysonSample>) -> f64 {
    series
        .samples()
        .iter()
        .map(|s| su2::hermiticity_residual(&s.eta_dot))
        .fold(0.0, f64::max)
}
