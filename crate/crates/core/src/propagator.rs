//! Numeric time-ordered propagation and the metric inner product.
//!
//! States are integrated with fixed-step RK4; the propagator `u(t, t′)` is
//! assembled column by column from the evolved canonical basis, which keeps
//! the time ordering implicit. Unitarity is measured, never re-imposed.

use log::warn;

use crate::dyson::{DysonSample, MIN_DYSON_DET};
use crate::error::{Error, Result};
use crate::grid::{IntegrationGrid, TimeSeries};
use crate::ode::{self, StepControl};
use crate::su2::{self, Complex2x2, StateVector2, C64, HERMITICITY_TOL};

const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

/// A Hamiltonian that can be evaluated at any time, including RK substages.
pub trait HamiltonianSource {
    fn at(&self, t: f64) -> Complex2x2;
}

impl<F: Fn(f64) -> Complex2x2> HamiltonianSource for F {
    fn at(&self, t: f64) -> Complex2x2 {
        self(t)
    }
}

/// A time-independent Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Static(pub Complex2x2);

impl HamiltonianSource for Static {
    fn at(&self, _t: f64) -> Complex2x2 {
        self.0
    }
}

/// Solves `iψ̇ = h(t)ψ` on `grid`.
pub fn evolve_state(
    h: &impl HamiltonianSource,
    psi0: StateVector2,
    grid: &IntegrationGrid,
) -> Result<TimeSeries<StateVector2>> {
    evolve_state_with(h, psi0, grid, StepControl::default())
}

pub fn evolve_state_with(
    h: &impl HamiltonianSource,
    psi0: StateVector2,
    grid: &IntegrationGrid,
    control: StepControl,
) -> Result<TimeSeries<StateVector2>> {
    warn_if_not_hermitian(h, grid.t_start());
    let samples = evolve(h, psi0, grid.t_start(), grid.dt(), grid.steps(), control)?;
    TimeSeries::new(grid.t_start(), grid.dt(), samples)
}

fn evolve(
    h: &impl HamiltonianSource,
    psi0: StateVector2,
    t_start: f64,
    dt: f64,
    steps: usize,
    control: StepControl,
) -> Result<Vec<StateVector2>> {
    if !psi0.is_finite() {
        return Err(Error::InvalidParameter("initial state is not finite".into()));
    }
    ode::integrate(
        |t, psi: &StateVector2| (h.at(t) * *psi) * MINUS_I,
        psi0,
        t_start,
        dt,
        steps,
        control,
    )
}

fn warn_if_not_hermitian(h: &impl HamiltonianSource, t: f64) {
    let r = su2::hermiticity_residual(&h.at(t));
    if r > HERMITICITY_TOL {
        warn!("Hamiltonian is not Hermitian at t = {t} (residual {r:.3e}); norm will drift");
    }
}

/// `u(t_to, t_from)` with a step of at most `dt`, which must divide the
/// interval. `t_to < t_from` propagates backwards.
pub fn time_ordered_u(
    h: &impl HamiltonianSource,
    t_from: f64,
    t_to: f64,
    dt: f64,
) -> Result<Complex2x2> {
    time_ordered_u_with(h, t_from, t_to, dt, StepControl::default())
}

pub fn time_ordered_u_with(
    h: &impl HamiltonianSource,
    t_from: f64,
    t_to: f64,
    dt: f64,
    control: StepControl,
) -> Result<Complex2x2> {
    if t_from == t_to {
        return Ok(Complex2x2::identity());
    }
    let (lo, hi) = if t_to > t_from { (t_from, t_to) } else { (t_to, t_from) };
    let grid = IntegrationGrid::new(lo, hi, dt)?;
    let step = if t_to > t_from { grid.dt() } else { -grid.dt() };
    let column = |k| -> Result<StateVector2> {
        let states = evolve(h, StateVector2::basis(k), t_from, step, grid.steps(), control)?;
        Ok(*states.last().expect("at least the initial state"))
    };
    Ok(Complex2x2::from_columns(column(0)?, column(1)?))
}

/// `u(t_k, t_start)` at every grid point, from one pass per basis column.
pub fn propagator_series(
    h: &impl HamiltonianSource,
    grid: &IntegrationGrid,
) -> Result<TimeSeries<Complex2x2>> {
    propagator_series_with(h, grid, StepControl::default())
}

pub fn propagator_series_with(
    h: &impl HamiltonianSource,
    grid: &IntegrationGrid,
    control: StepControl,
) -> Result<TimeSeries<Complex2x2>> {
    warn_if_not_hermitian(h, grid.t_start());
    let first = evolve(h, StateVector2::basis(0), grid.t_start(), grid.dt(), grid.steps(), control)?;
    let second = evolve(h, StateVector2::basis(1), grid.t_start(), grid.dt(), grid.steps(), control)?;
    let samples = first
        .into_iter()
        .zip(second)
        .map(|(a, b)| Complex2x2::from_columns(a, b))
        .collect();
    TimeSeries::new(grid.t_start(), grid.dt(), samples)
}

/// `U(t, t′) = η⁻¹(t)·u(t, t′)·η(t′)`.
pub fn nonhermitian_u(
    eta_to: &Complex2x2,
    u: &Complex2x2,
    eta_from: &Complex2x2,
) -> Result<Complex2x2> {
    if eta_from.det().norm() < MIN_DYSON_DET {
        return Err(Error::SingularDysonMap {
            det: eta_from.det().norm(),
        });
    }
    let inv = eta_to
        .inverse_checked(MIN_DYSON_DET)
        .ok_or_else(|| Error::SingularDysonMap {
            det: eta_to.det().norm(),
        })?;
    Ok(inv * *u * *eta_from)
}

/// [`nonhermitian_u`] with both Dyson maps looked up in a sampled series.
pub fn nonhermitian_u_from_series(
    eta_series: &TimeSeries<DysonSample>,
    u: &Complex2x2,
    t_from: f64,
    t_to: f64,
) -> Result<Complex2x2> {
    let lookup = |t: f64| {
        eta_series
            .index_of(t)
            .map(|k| eta_series.samples()[k].eta)
            .ok_or_else(|| Error::InvalidGrid(format!("t = {t} is not on the Dyson-map grid")))
    };
    nonhermitian_u(&lookup(t_to)?, u, &lookup(t_from)?)
}

/// `⟨a|ρb⟩`.
pub fn rho_inner(a: &StateVector2, b: &StateVector2, rho: &Complex2x2) -> Result<C64> {
    let residual = su2::hermiticity_residual(rho);
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    if !(rho.det().re > 0.0 && rho.trace().re > 0.0) {
        return Err(Error::NotPositiveDefinite { t: None });
    }
    Ok(a.dot(&(*rho * *b)))
}

/// `‖M†M − 𝕀‖_F`.
pub fn unitarity_residual(m: &Complex2x2) -> f64 {
    (m.adjoint() * *m - Complex2x2::identity()).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn driven(t: f64) -> Complex2x2 {
        Complex2x2::sigma_z() * (-0.5 - 0.2 * t.cos()) + Complex2x2::sigma_x() * (0.3 * (2.0 * t).sin())
    }

    #[test]
    fn stationary_state_picks_up_phase() {
        let h = Static(Complex2x2::sigma_z() * -0.5);
        let grid = IntegrationGrid::new(0.0, 5.0, 1e-3).unwrap();
        let states = evolve_state(&h, StateVector2::basis(0), &grid).unwrap();
        for (t, psi) in states.iter() {
            let exact = C64::from_polar(1.0, 0.5 * t);
            assert!((psi.0[0] - exact).norm() < 1e-12);
            assert_eq!(psi.0[1], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn norm_is_conserved_over_many_steps() {
        let grid = IntegrationGrid::new(0.0, 10.0, 1e-3).unwrap();
        let psi0 = StateVector2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let states = evolve_state(&driven, psi0, &grid).unwrap();
        assert_eq!(states.len(), 10_001);
        let drift = states
            .samples()
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(drift <= 1e-8, "drift {drift}");
    }

    #[test]
    fn identity_at_coincident_times() {
        assert_eq!(time_ordered_u(&driven, 1.3, 1.3, 1e-3).unwrap(), Complex2x2::identity());
    }

    #[test]
    fn composition_law() {
        let dt = 1e-3;
        let a = time_ordered_u(&driven, 0.0, 1.0, dt).unwrap();
        let b = time_ordered_u(&driven, 1.0, 2.5, dt).unwrap();
        let ab = time_ordered_u(&driven, 0.0, 2.5, dt).unwrap();
        assert!((b * a).max_abs_diff(&ab) <= 1e-8);
        let back = time_ordered_u(&driven, 2.5, 0.0, dt).unwrap();
        assert!((back * ab).max_abs_diff(&Complex2x2::identity()) <= 1e-8);
        assert!(unitarity_residual(&ab) <= 1e-9);
    }

    #[test]
    fn step_must_divide_interval() {
        assert!(matches!(
            time_ordered_u(&driven, 0.0, 1.0, 0.3),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn huge_step_is_rejected() {
        let h = Static(Complex2x2::sigma_z() * 40.0);
        assert!(matches!(
            time_ordered_u(&h, 0.0, 1.0, 0.5),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn series_matches_pointwise_propagator() {
        let grid = IntegrationGrid::new(0.0, 2.0, 1e-2).unwrap();
        let us = propagator_series(&driven, &grid).unwrap();
        let direct = time_ordered_u(&driven, 0.0, 2.0, 1e-2).unwrap();
        assert!(us.last().max_abs_diff(&direct) < 1e-14);
        assert_eq!(us.samples()[0], Complex2x2::identity());
    }

    #[test]
    fn trivial_dyson_map_leaves_propagator() {
        let u = time_ordered_u(&driven, 0.0, 1.0, 1e-2).unwrap();
        let id = Complex2x2::identity();
        assert_eq!(nonhermitian_u(&id, &u, &id).unwrap(), u);
        let singular = Complex2x2::sigma_x() + id;
        assert!(matches!(
            nonhermitian_u(&singular, &u, &id),
            Err(Error::SingularDysonMap { .. })
        ));
    }

    #[test]
    fn series_lookup_requires_grid_times() {
        let s = DysonSample {
            t: 0.0,
            eta: Complex2x2::identity() * 2.0,
            eta_dot: Complex2x2::zero(),
        };
        let series = TimeSeries::new(0.0, 0.5, vec![s, s, s]).unwrap();
        let u = Complex2x2::sigma_x();
        let big_u = nonhermitian_u_from_series(&series, &u, 0.0, 1.0).unwrap();
        assert!(big_u.max_abs_diff(&u) < 1e-15);
        assert!(nonhermitian_u_from_series(&series, &u, 0.0, 0.7).is_err());
    }

    #[test]
    fn rho_inner_with_identity_is_standard() {
        let a = StateVector2::new(C64::new(0.1, 0.2), C64::new(-0.3, 0.4));
        let b = StateVector2::new(C64::new(1.0, -1.0), C64::new(0.5, 0.0));
        assert_eq!(rho_inner(&a, &b, &Complex2x2::identity()).unwrap(), a.dot(&b));
        assert!(matches!(
            rho_inner(&a, &b, &Complex2x2::sigma_z()),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    fn any_state() -> impl Strategy<Value = StateVector2> {
        proptest::array::uniform4(-3.0..3.0f64)
            .prop_map(|[a, b, c, d]| StateVector2::new(C64::new(a, b), C64::new(c, d)))
    }

    proptest! {
        #[test]
        fn rho_inner_is_conjugate_symmetric(a in any_state(), b in any_state(),
                                            alpha in 1.5..4.0f64, bx in -1.0..1.0f64, by in -1.0..1.0f64, bz in -0.5..0.5f64) {
            let rho = Complex2x2::identity() * alpha
                + Complex2x2::sigma_x() * bx
                + Complex2x2::sigma_y() * by
                + Complex2x2::sigma_z() * bz;
            let ab = rho_inner(&a, &b, &rho).unwrap();
            let ba = rho_inner(&b, &a, &rho).unwrap();
            prop_assert!((ab - ba.conj()).norm() <= 1e-12);
            let aa = rho_inner(&a, &a, &rho).unwrap();
            prop_assert!(aa.im.abs() <= 1e-12);
            prop_assert!(aa.re >= 0.0);
        }
    }
}
