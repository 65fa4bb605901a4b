//! Exact solutions of time-dependent Hermitian two-level systems built from
//! static non-Hermitian Hamiltonians.
//!
//! The pipeline has two steps. First solve the static non-Hermitian
//! Schrödinger equation `iΨ̇ = HΨ`. Then solve the time-dependent
//! quasi-Hermiticity relation `H†ρ − ρH = i∂ₜρ` for a metric `ρ(t)`, take the
//! Dyson map `η = √ρ`, and read off the Hermitian Hamiltonian
//! `h = ηHη⁻¹ + iη̇η⁻¹` together with its solutions `φ = ηΨ`.
//!
//! - [`su2`]: 2×2 complex algebra, Pauli basis, eigensystems, square roots.
//! - [`metric`]: static and time-dependent metrics for SU(2) Hamiltonians.
//! - [`dyson`]: Dyson maps, the Hermitian counterpart `h(t)` and the energy
//!   observable `H̃(t)`.
//! - [`yang_lee`]: the one-site Yang–Lee model with every quantity in closed form.
//! - [`propagator`]: numeric time-ordered propagators and the metric inner product.
//! - [`cli`]: configuration-driven runs, sweeps and verification reports.
//!
//! `ħ = 1` throughout.

// `!(x > bound)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dyson;
pub mod error;
pub mod grid;
pub mod metric;
pub mod ode;
pub mod propagator;
pub mod su2;
pub mod yang_lee;

pub use error::{Error, Result};
pub use grid::{IntegrationGrid, TimeSeries};
pub use su2::{Complex2x2, PauliCoefficients, StateVector2, C64};
