//! Metric operators for static non-Hermitian SU(2) Hamiltonians.
//!
//! The metric is parametrised as `ρ = α𝕀 + β⃗·σ⃗` with real `α, β⃗`. For a static
//! `H` the time-dependent quasi-Hermiticity relation `H†ρ − ρH = i∂ₜρ`
//! becomes the linear flow
//!
//! ```text
//! ∂ₜα = −λ₀α − β⃗·λ⃗
//! ∂ₜβ⃗ = κ⃗×β⃗ − λ₀β⃗ − αλ⃗
//! ```
//!
//! which this module solves in closed form (static and ζ-family solutions)
//! and numerically (RK4 on the matrix form).

use crate::error::{Error, Result};
use crate::grid::{IntegrationGrid, TimeSeries};
use crate::ode::{self, StepControl};
use crate::su2::{self, pauli_compose, pauli_decompose, Complex2x2, PauliCoefficients, C64, I};

/// Absolute tolerance for the `λ₀ = 0` and `κ⃗·λ⃗ = 0` requirements.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// `H = ½(κ₀+iλ₀)𝕀 + ½Σⱼ(κⱼ+iλⱼ)σⱼ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2Hamiltonian {
    pub kappa0: f64,
    pub lambda0: f64,
    pub kappa: [f64; 3],
    pub lambda: [f64; 3],
}

impl Su2Hamiltonian {
    pub fn new(kappa0: f64, lambda0: f64, kappa: [f64; 3], lambda: [f64; 3]) -> Self {
        Self {
            kappa0,
            lambda0,
            kappa,
            lambda,
        }
    }

    pub fn from_matrix(m: &Complex2x2) -> Self {
        let p = pauli_decompose(m);
        Self {
            kappa0: 2.0 * p.a0.re,
            lambda0: 2.0 * p.a0.im,
            kappa: p.real_vector().map(|x| 2.0 * x),
            lambda: p.imag_vector().map(|x| 2.0 * x),
        }
    }

    pub fn matrix(&self) -> Complex2x2 {
        let half = |k: f64, l: f64| C64::new(0.5 * k, 0.5 * l);
        pauli_compose(&PauliCoefficients::new(
            half(self.kappa0, self.lambda0),
            half(self.kappa[0], self.lambda[0]),
            half(self.kappa[1], self.lambda[1]),
            half(self.kappa[2], self.lambda[2]),
        ))
    }

    pub fn kappa_norm_sq(&self) -> f64 {
        dot(&self.kappa, &self.kappa)
    }

    pub fn lambda_norm_sq(&self) -> f64 {
        dot(&self.lambda, &self.lambda)
    }

    pub fn kappa_dot_lambda(&self) -> f64 {
        dot(&self.kappa, &self.lambda)
    }

    pub fn is_hermitian(&self) -> bool {
        self.lambda0 == 0.0 && self.lambda.iter().all(|&l| l == 0.0)
    }

    /// `√(|κ⃗|² − |λ⃗|²)` when real and positive.
    pub fn rabi_frequency(&self) -> Option<f64> {
        let d = self.kappa_norm_sq() - self.lambda_norm_sq();
        (d > 0.0).then(|| d.sqrt())
    }
}

/// Metric coefficients `(α, β⃗)` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricState {
    pub alpha: f64,
    pub beta: [f64; 3],
    pub t: f64,
}

impl MetricState {
    pub fn matrix(&self) -> Complex2x2 {
        pauli_compose(&PauliCoefficients::real(self.alpha, self.beta))
    }

    /// Reads `(α, β⃗)` off a matrix, discarding anti-Hermitian parts.
    pub fn from_matrix(t: f64, m: &Complex2x2) -> Self {
        let p = pauli_decompose(m);
        Self {
            alpha: p.a0.re,
            beta: p.real_vector(),
            t,
        }
    }

    pub fn margin(&self) -> f64 {
        positivity_margin(self)
    }
}

/// Integration constants of the ζ-family solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZetaConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl ZetaConstants {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

/// `ζ₁, ζ₂, ζ₃, α` of the ansatz `β⃗ = ζ₁κ⃗ + ζ₂λ⃗ + ζ₃κ⃗×λ⃗`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaFunctions {
    pub zeta1: f64,
    pub zeta2: f64,
    pub zeta3: f64,
    pub alpha: f64,
}

/// `det ρ = α² − β⃗·β⃗`.
pub fn positivity_margin(s: &MetricState) -> f64 {
    s.alpha * s.alpha - dot(&s.beta, &s.beta)
}

/// Time-independent metric `β⃗ = (α/|κ⃗|²)·λ⃗×κ⃗ + ν·κ⃗`.
///
/// The stationary relation `κ⃗×β⃗ = αλ⃗` only closes when `κ⃗·λ⃗ = 0`, so that is
/// required along with `λ₀ = 0`.
pub fn static_metric(h: &Su2Hamiltonian, alpha: f64, nu: f64) -> Result<MetricState> {
    require_solvable(h)?;
    let k2 = h.kappa_norm_sq();
    if !(k2 > 0.0) {
        return Err(Error::UnsupportedHamiltonian("κ⃗ = 0".into()));
    }
    let lxk = cross(&h.lambda, &h.kappa);
    let beta = [0, 1, 2].map(|j| alpha / k2 * lxk[j] + nu * h.kappa[j]);
    let state = MetricState {
        alpha,
        beta,
        t: 0.0,
    };
    let margin = positivity_margin(&state);
    if !(margin > 0.0) || alpha <= 0.0 {
        return Err(Error::PositivityViolation { margin });
    }
    Ok(state)
}

pub fn zeta_functions(t: f64, h: &Su2Hamiltonian, c: &ZetaConstants) -> Result<ZetaFunctions> {
    require_solvable(h)?;
    let phi = h.rabi_frequency().ok_or_else(|| {
        Error::UnsupportedHamiltonian("|κ⃗| must exceed |λ⃗| for a real frequency".into())
    })?;
    let k2 = h.kappa_norm_sq();
    let (s, co) = (phi * t).sin_cos();
    Ok(ZetaFunctions {
        zeta1: c.c4,
        zeta2: c.c1 * s + c.c2 * co,
        zeta3: -c.c1 / phi * co + c.c2 / phi * s + c.c3,
        alpha: (c.c1 / phi * k2 - c.c1 * phi) * co + (c.c2 * phi - c.c2 / phi * k2) * s
            - c.c3 * k2,
    })
}

/// Closed-form time-dependent metric of the ζ family.
pub fn zeta_metric(t: f64, h: &Su2Hamiltonian, c: &ZetaConstants) -> Result<MetricState> {
    let z = zeta_functions(t, h, c)?;
    let kxl = cross(&h.kappa, &h.lambda);
    let beta = [0, 1, 2].map(|j| z.zeta1 * h.kappa[j] + z.zeta2 * h.lambda[j] + z.zeta3 * kxl[j]);
    Ok(MetricState {
        alpha: z.alpha,
        beta,
        t,
    })
}

/// `∂ₜρ = −i(H†ρ − ρH)`.
pub fn metric_rhs(h: &Su2Hamiltonian, rho: &Complex2x2) -> Complex2x2 {
    metric_rhs_matrix(&h.matrix(), rho)
}

pub(crate) fn metric_rhs_matrix(h: &Complex2x2, rho: &Complex2x2) -> Complex2x2 {
    (h.adjoint() * *rho - *rho * *h) * -I
}

/// Numerically integrated metric with positivity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricFlow {
    pub series: TimeSeries<Complex2x2>,
    /// Smallest `det ρ` over the samples and the time it occurs.
    pub min_margin: f64,
    pub min_margin_t: f64,
    /// First sample time with `det ρ ≤ 0`, if any.
    pub breakdown: Option<f64>,
}

impl MetricFlow {
    pub fn require_positive(&self) -> Result<&TimeSeries<Complex2x2>> {
        match self.breakdown {
            Some(t) => Err(Error::PositivityLost { t }),
            None => Ok(&self.series),
        }
    }

    pub fn margins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series.iter().map(|(t, rho)| (t, rho.det().re))
    }
}

pub fn integrate_metric(
    h: &Su2Hamiltonian,
    rho0: &Complex2x2,
    grid: &IntegrationGrid,
) -> Result<MetricFlow> {
    integrate_metric_with(h, rho0, grid, StepControl::default())
}

pub fn integrate_metric_with(
    h: &Su2Hamiltonian,
    rho0: &Complex2x2,
    grid: &IntegrationGrid,
    control: StepControl,
) -> Result<MetricFlow> {
    let residual = su2::hermiticity_residual(rho0);
    if residual > su2::HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    if !(rho0.det().re > 0.0 && rho0.trace().re > 0.0) {
        return Err(Error::NotPositiveDefinite {
            t: Some(grid.t_start()),
        });
    }
    let hm = h.matrix();
    let samples = ode::integrate(
        |_t, rho: &Complex2x2| metric_rhs_matrix(&hm, rho),
        *rho0,
        grid.t_start(),
        grid.dt(),
        grid.steps(),
        control,
    )?;
    let series = TimeSeries::new(grid.t_start(), grid.dt(), samples)?;
    Ok(scan_positivity(series))
}

/// Wraps a metric series with its positivity diagnostics.
pub fn scan_positivity(series: TimeSeries<Complex2x2>) -> MetricFlow {
    let mut min_margin = f64::INFINITY;
    let mut min_margin_t = series.t0();
    let mut breakdown = None;
    for (t, rho) in series.iter() {
        let det = rho.det().re;
        if det < min_margin {
            min_margin = det;
            min_margin_t = t;
        }
        if (det <= 0.0 || rho.trace().re <= 0.0) && breakdown.is_none() {
            breakdown = Some(t);
        }
    }
    MetricFlow {
        series,
        min_margin,
        min_margin_t,
        breakdown,
    }
}

fn require_solvable(h: &Su2Hamiltonian) -> Result<()> {
    if h.lambda0.abs() > ORTHOGONALITY_TOL {
        return Err(Error::UnsupportedHamiltonian(format!(
            "closed forms need λ₀ = 0, got {}",
            h.lambda0
        )));
    }
    let kl = h.kappa_dot_lambda();
    if kl.abs() > ORTHOGONALITY_TOL {
        return Err(Error::UnsupportedHamiltonian(format!(
            "closed forms need κ⃗·λ⃗ = 0, got {kl}"
        )));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
