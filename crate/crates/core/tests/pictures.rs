//! The two pictures agree for arbitrary solvable SU(2) Hamiltonians, not just
//! the Yang–Lee point.

use proptest::prelude::*;

use dyson_core::dyson::{dyson_sample, hermitian_counterpart, physical_hamiltonian, quasi_hermiticity_residual};
use dyson_core::metric::{metric_rhs, zeta_metric, Su2Hamiltonian, ZetaConstants};
use dyson_core::ode::{integrate, StepControl};
use dyson_core::propagator::{evolve_state, nonhermitian_u, propagator_series, unitarity_residual};
use dyson_core::su2::{hermiticity_residual, I};
use dyson_core::{Complex2x2, IntegrationGrid, StateVector2, C64};

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `κ⃗` as drawn, `λ⃗` made orthogonal to it and shorter by `shrink`.
fn solvable(kappa0: f64, kappa: [f64; 3], raw: [f64; 3], shrink: f64) -> Option<Su2Hamiltonian> {
    let k2 = dot(&kappa, &kappa);
    if k2 < 0.1 {
        return None;
    }
    let proj = dot(&raw, &kappa) / k2;
    let perp = [0, 1, 2].map(|j| raw[j] - proj * kappa[j]);
    let n = dot(&perp, &perp).sqrt();
    if n < 1e-3 {
        return None;
    }
    let scale = shrink * k2.sqrt() / n;
    Some(Su2Hamiltonian::new(kappa0, 0.0, kappa, perp.map(|x| x * scale)))
}

fn hermitian_h(t: f64, h: &Su2Hamiltonian, c: &ZetaConstants) -> Complex2x2 {
    let rho = zeta_metric(t, h, c).unwrap().matrix();
    let s = dyson_sample(t, &rho, &metric_rhs(h, &rho)).unwrap();
    hermitian_counterpart(&h.matrix(), &s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dyson_map_intertwines_the_two_pictures(
        kappa0 in -2.0f64..2.0,
        kappa in prop::array::uniform3(-1.5f64..1.5),
        raw in prop::array::uniform3(-1.0f64..1.0),
        shrink in 0.05f64..0.9,
        c in prop::array::uniform4(-2.0f64..2.0),
    ) {
        let h = solvable(kappa0, kappa, raw, shrink);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let c = ZetaConstants::new(c[0], c[1], c[2], c[3]);
        let rho0 = zeta_metric(0.0, &h, &c).unwrap();
        prop_assume!(rho0.margin() > 1e-2 && rho0.alpha > 0.0);

        let grid = IntegrationGrid::new(0.0, 3.0, 1e-2).unwrap();
        let hm = h.matrix();
        let psi0 = StateVector2::new(C64::new(0.6, 0.1), C64::new(-0.2, 0.7));
        let psi = integrate(|_t, y: &StateVector2| (hm * *y) * -I, psi0, 0.0, grid.dt(), grid.steps(), StepControl::default()).unwrap();

        let eta_at = |t: f64| {
            let rho = zeta_metric(t, &h, &c).unwrap().matrix();
            dyson_sample(t, &rho, &metric_rhs(&h, &rho)).unwrap()
        };
        let hh = |t: f64| hermitian_h(t, &h, &c);
        let phi = evolve_state(&hh, eta_at(0.0).eta * psi0, &grid).unwrap();
        let scale = (eta_at(0.0).eta * psi0).norm();
        for (k, t) in grid.times().enumerate() {
            let s = eta_at(t);
            prop_assert!(hermiticity_residual(&hh(t)) < 1e-9 * hh(t).frobenius_norm().max(1.0));
            let rho = zeta_metric(t, &h, &c).unwrap().matrix();
            let htilde = physical_hamiltonian(&hm, &s).unwrap();
            prop_assert!(quasi_hermiticity_residual(&htilde, &rho) < 1e-9 * rho.frobenius_norm().max(1.0) * htilde.frobenius_norm().max(1.0));
            let mapped = s.eta * psi[k];
            prop_assert!((mapped - phi.samples()[k]).norm() < 1e-6 * scale, "t = {}", t);
        }
    }
}

#[test]
fn metric_norm_is_conserved_while_flat_norm_is_not() {
    let h = Su2Hamiltonian::new(0.3, 0.0, [0.0, 0.0, -1.0], [-0.6, 0.0, 0.0]);
    let c = ZetaConstants::new(0.1, -0.8, -1.7, 0.2);
    let grid = IntegrationGrid::new(0.0, 8.0, 4e-3).unwrap();
    let u = propagator_series(&|t: f64| hermitian_h(t, &h, &c), &grid).unwrap();
    let rho_at = |t: f64| zeta_metric(t, &h, &c).unwrap().matrix();
    let eta0 = dyson_sample(0.0, &rho_at(0.0), &metric_rhs(&h, &rho_at(0.0))).unwrap().eta;
    let v = StateVector2::new(C64::new(0.2, 0.5), C64::new(0.8, -0.1));
    let norm0 = v.dot(&(rho_at(0.0) * v)).re;
    let mut flat_max = 0.0f64;
    for (t, uh) in u.iter() {
        assert!(unitarity_residual(uh) < 1e-9);
        let rho = rho_at(t);
        let eta = dyson_sample(t, &rho, &metric_rhs(&h, &rho)).unwrap().eta;
        let big = nonhermitian_u(&eta, uh, &eta0).unwrap();
        let w = big * v;
        assert!((w.dot(&(rho * w)).re - norm0).abs() < 1e-8);
        flat_max = flat_max.max(unitarity_residual(&big));
    }
    assert!(flat_max > 1e-2);
}
