//! The one-site lattice Yang–Lee model and its exact time-dependent solution.
//!
//! `H₁ = −½[ω𝕀 + σz + iγσx]` is static and non-Hermitian. Paired with the
//! time-dependent metric
//!
//! ```text
//! ρ(t) = [1/γ + γ sin(Ωt)]𝕀 + Ω cos(Ωt) σx − [1 + sin(Ωt)] σy,   Ω = √(1 − γ²)
//! ```
//!
//! its Dyson map `η = √ρ` produces the Hermitian driven two-level Hamiltonian
//! `h(t) = −½[ω𝕀 + 2Ω²/(2 + γ² sin(Ωt) − γ²) σz]`. Everything here is closed
//! form and serves as the reference for the numeric paths.
//!
//! `Ω` is the Rabi frequency `E₊ − E₋`; the code calls it `rabi_frequency` to
//! keep it apart from the Hermitian-picture wavefunctions `φ±(t) = η(t)Ψ±(t)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use nalgebra::DMatrix;

use crate::dyson::DysonSample;
use crate::error::{Error, Result};
use crate::metric::{Su2Hamiltonian, ZetaConstants};
use crate::su2::{pauli_compose, Complex2x2, PauliCoefficients, StateVector2, C64, I};

/// Largest chain length built densely (`2^12 = 4096` states).
pub const MAX_CHAIN_SITES: usize = 12;

/// Model parameters with `0 < γ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YangLeeParams {
    gamma: f64,
    omega: f64,
    rabi: f64,
}

impl YangLeeParams {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1), got {gamma}"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega must be finite, got {omega}")));
        }
        Ok(Self {
            gamma,
            omega,
            rabi: (1.0 - gamma * gamma).sqrt(),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `Ω = √(1 − γ²) = E₊ − E₋`.
    pub fn rabi_frequency(&self) -> f64 {
        self.rabi
    }

    /// `√(1 + γ)`.
    pub fn root_plus(&self) -> f64 {
        (1.0 + self.gamma).sqrt()
    }

    /// `√(1 − γ)`.
    pub fn root_minus(&self) -> f64 {
        (1.0 - self.gamma).sqrt()
    }

    /// `t₀ = −π/(2Ω)`, where `sin(Ωt₀) = −1` and the metric is a multiple of 𝕀.
    pub fn reference_time(&self) -> f64 {
        -PI / (2.0 * self.rabi)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.rabi
    }

    /// `H₁ = −½[ω𝕀 + σz + iγσx]`.
    pub fn hamiltonian(&self) -> Complex2x2 {
        self.su2().matrix()
    }

    /// `κ₀ = −ω`, `κ⃗ = (0, 0, −1)`, `λ⃗ = (−γ, 0, 0)`.
    pub fn su2(&self) -> Su2Hamiltonian {
        Su2Hamiltonian::new(-self.omega, 0.0, [0.0, 0.0, -1.0], [-self.gamma, 0.0, 0.0])
    }

    /// Integration constants `(0, −Ω/γ, −1/γ, 0)` that yield [`rho_closed`].
    pub fn metric_constants(&self) -> ZetaConstants {
        ZetaConstants::new(0.0, -self.rabi / self.gamma, -1.0 / self.gamma, 0.0)
    }

    fn drive_denominator(&self, t: f64) -> f64 {
        let g2 = self.gamma * self.gamma;
        2.0 + g2 * (t * self.rabi).sin() - g2
    }
}

/// Which of the two energy eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// `H_N = −½Σⱼ(σⱼᶻ + λσⱼˣσⱼ₊₁ˣ + iκσⱼˣ)` with periodic boundary `σ_{N+1} = σ₁`.
///
/// For `N = 1` the coupling term is `λσ₁ˣσ₁ˣ = λ𝕀`.
pub fn chain_hamiltonian(sites: usize, lambda: C64, kappa: C64) -> Result<DMatrix<C64>> {
    if sites == 0 {
        return Err(Error::InvalidParameter("chain needs at least one site".into()));
    }
    if sites > MAX_CHAIN_SITES {
        return Err(Error::DimensionTooLarge {
            sites,
            max: MAX_CHAIN_SITES,
        });
    }
    let dim = 1usize << sites;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let sx = DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
    let sz = DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
    let id2 = DMatrix::<C64>::identity(2, 2);
    let site_op = |op: &DMatrix<C64>, j: usize| {
        (0..sites).fold(DMatrix::<C64>::identity(1, 1), |acc, k| {
            acc.kronecker(if k == j { op } else { &id2 })
        })
    };
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..sites {
        let x_j = site_op(&sx, j);
        let x_next = site_op(&sx, (j + 1) % sites);
        h += site_op(&sz, j) + (&x_j * &x_next) * lambda + &x_j * (I * kappa);
    }
    Ok(h * C64::new(-0.5, 0.0))
}

/// `(E₊, E₋) = (½(−ω + Ω), ½(−ω − Ω))`.
pub fn eigenvalues_h1(p: &YangLeeParams) -> (f64, f64) {
    let w = p.omega;
    let r = p.rabi;
    (0.5 * (-w + r), 0.5 * (-w - r))
}

fn energy(p: &YangLeeParams, branch: Branch) -> f64 {
    let (plus, minus) = eigenvalues_h1(p);
    match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
    }
}

/// Normalised eigenstate solution of `iΨ̇ = H₁Ψ`:
/// `Ψ± = √γ/(√2 Ω √(1±Ω)) (γ, i(1±Ω))ᵀ e^{−iE±t}`.
pub fn psi_pm(t: f64, branch: Branch, p: &YangLeeParams) -> StateVector2 {
    let s = branch.sign();
    let g = p.gamma;
    let one_pm = 1.0 + s * p.rabi;
    let norm = g.sqrt() / (SQRT_2 * p.rabi * one_pm.sqrt());
    let phase = C64::from_polar(norm, -energy(p, branch) * t);
    StateVector2::new(C64::new(g, 0.0) * phase, C64::new(0.0, one_pm) * phase)
}

/// `ρ(t) = [1/γ + γ sin(Ωt)]𝕀 + Ω cos(Ωt)σx − [1 + sin(Ωt)]σy`.
pub fn rho_closed(t: f64, p: &YangLeeParams) -> Complex2x2 {
    let (s, c) = (p.rabi * t).sin_cos();
    pauli_compose(&PauliCoefficients::real(
        1.0 / p.gamma + p.gamma * s,
        [p.rabi * c, -(1.0 + s), 0.0],
    ))
}

/// Analytic `∂ₜρ`.
pub fn rho_closed_derivative(t: f64, p: &YangLeeParams) -> Complex2x2 {
    let w = p.rabi;
    let (s, c) = (w * t).sin_cos();
    pauli_compose(&PauliCoefficients::real(
        p.gamma * w * c,
        [-w * w * s, -w * c, 0.0],
    ))
}

/// Closed-form Hermitian Dyson map `η(t) = √ρ(t)` and its analytic derivative.
///
/// With `p₀ = 1 + sin(Ωt) + iΩcos(Ωt)` and `p± = √(1/γ + γ sin(Ωt) ± |p₀|)`,
/// `η = ½(p₊+p₋)𝕀 + (p₊−p₋)/(2|p₀|)·(Im p₀ σx − Re p₀ σy)`. The second
/// coefficient is evaluated as `1/(p₊+p₋)`, which is the same quantity but
/// stays finite at `t₀` where `p₀ = 0`.
pub fn eta_closed(t: f64, p: &YangLeeParams) -> DysonSample {
    let g = p.gamma;
    let w = p.rabi;
    let (s, c) = (w * t).sin_cos();

    let alpha = 1.0 / g + g * s;
    let alpha_dot = g * w * c;
    let b = [w * c, -(1.0 + s)];
    let b_dot = [-w * w * s, -w * c];
    let r = b[0].hypot(b[1]);

    let p_plus = (alpha + r).sqrt();
    let p_minus = (alpha - r).sqrt();
    let sum = p_plus + p_minus;
    let prod = p_plus * p_minus;

    let a = 0.5 * sum;
    let b_bdot = b[0] * b_dot[0] + b[1] * b_dot[1];
    let a_dot = alpha_dot * sum / (4.0 * prod) - b_bdot / (2.0 * prod * sum);
    let sum_dot = 2.0 * a_dot;

    let v = [b[0] / sum, b[1] / sum];
    let v_dot = [0, 1].map(|j| b_dot[j] / sum - b[j] * sum_dot / (sum * sum));

    DysonSample {
        t,
        eta: pauli_compose(&PauliCoefficients::real(a, [v[0], v[1], 0.0])),
        eta_dot: pauli_compose(&PauliCoefficients::real(a_dot, [v_dot[0], v_dot[1], 0.0])),
    }
}

/// `h(t) = −½[ω𝕀 + 2Ω²/(2 + γ² sin(Ωt) − γ²) σz]`.
pub fn rabi_h(t: f64, p: &YangLeeParams) -> Complex2x2 {
    let z = 2.0 * p.rabi * p.rabi / p.drive_denominator(t);
    Complex2x2::diagonal(
        C64::new(-0.5 * (p.omega + z), 0.0),
        C64::new(-0.5 * (p.omega - z), 0.0),
    )
}

/// Phase of the first diagonal entry of `u(t, t₀)`, continuous in `t`.
///
/// `θ(t) = π/4 + (ω/2)(t − t₀) + arctan[(a + b·tan(Ωt/2)) / (b + a·tan(Ωt/2))]`
/// with `a = (1 − Ω)²` and `b = γ²`. The arctan is continued across the poles
/// of the tangent by writing it as `Ωt/2 + arg(1 + r sin(Ωt) + i r cos(Ωt))`,
/// `r = a/b = (1 − Ω)/(1 + Ω) < 1`; the argument's real part never vanishes,
/// so the principal value is already continuous. `θ(t₀) = 0` and
/// `θ̇ = ω/2 + Ω²/(2 + γ² sin(Ωt) − γ²)`.
pub fn theta(t: f64, p: &YangLeeParams) -> f64 {
    let w = p.rabi;
    let r = (1.0 - w) / (1.0 + w);
    let (s, c) = (w * t).sin_cos();
    FRAC_PI_4 + 0.5 * p.omega * (t - p.reference_time()) + 0.5 * w * t + (r * c).atan2(1.0 + r * s)
}

/// Closed-form propagator `u(t, t₀) = diag(e^{iθ}, e^{i(πω/(2Ω) + ωt) − iθ})`.
pub fn u_closed(t: f64, p: &YangLeeParams) -> Complex2x2 {
    let th = theta(t, p);
    let second = FRAC_PI_2 * p.omega / p.rabi + t * p.omega - th;
    Complex2x2::diagonal(C64::from_polar(1.0, th), C64::from_polar(1.0, second))
}

/// `φ±(t) = η(t)Ψ±(t)`, solutions of `iφ̇ = h(t)φ`.
pub fn phi_pm(t: f64, branch: Branch, p: &YangLeeParams) -> StateVector2 {
    eta_closed(t, p).eta * psi_pm(t, branch, p)
}

/// Canonical basis at `t₀` rebuilt from `φ±(t₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisStates {
    /// `c₊φ₋(t₀) + c₋φ₊(t₀)`, expected `(1, 0)ᵀ`.
    pub phi1: StateVector2,
    /// `c₋φ₋(t₀) − c₊φ₊(t₀)`, expected `(0, 1)ᵀ`.
    pub phi2: StateVector2,
    pub c_plus: C64,
    pub c_minus: C64,
}

/// `c± = e^{iπ/4(ω/Ω ± 1)} (√(1±Ω) − γ√(1∓Ω)) / (√2 Ω²)`.
pub fn basis_coefficients(p: &YangLeeParams) -> (C64, C64) {
    let w = p.rabi;
    let pref = 1.0 / (SQRT_2 * w * w);
    let up = (1.0 + w).sqrt();
    let down = (1.0 - w).sqrt();
    let c = |sign: f64, mag: f64| C64::from_polar(pref * mag, FRAC_PI_4 * (p.omega / w + sign));
    (c(1.0, up - p.gamma * down), c(-1.0, down - p.gamma * up))
}

pub fn basis_states(p: &YangLeeParams) -> BasisStates {
    let t0 = p.reference_time();
    let (c_plus, c_minus) = basis_coefficients(p);
    let plus = phi_pm(t0, Branch::Plus, p);
    let minus = phi_pm(t0, Branch::Minus, p);
    BasisStates {
        phi1: minus * c_plus + plus * c_minus,
        phi2: minus * c_minus - plus * c_plus,
        c_plus,
        c_minus,
    }
}

/// `E±(t) = ±Ω³/(2 + γ² sin(Ωt) − γ²) − ω/2`.
pub fn energy_expectation(t: f64, branch: Branch, p: &YangLeeParams) -> f64 {
    branch.sign() * p.rabi.powi(3) / p.drive_denominator(t) - 0.5 * p.omega
}
