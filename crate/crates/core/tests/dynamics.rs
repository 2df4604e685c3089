use std::f64::consts::PI;

use cliffmech_core::dynamics::{HamiltonField, Integrator};
use cliffmech_core::forms::symplectic_form_of_structure;
use cliffmech_core::{
    energy_drift, integrate, parse, quadratic_flow_oracle, GradientMode, HamiltonianSystem, IntegratorConfig, Method,
    PhasePoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn identity(dim: usize) -> Vec<f64> {
    let mut q = vec![0.0; dim * dim];
    for a in 0..dim {
        q[a * dim + a] = 1.0;
    }
    q
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pendulum_like() -> HamiltonianSystem {
    let e = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2) + 0.25*(x0^4 + x4^4) - cos(x2)", 8).unwrap();
    HamiltonianSystem::from_expr(e, 8, GradientMode::Symbolic).unwrap()
}

#[test]
fn observed_orders_on_quadratic_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut q = vec![0.0; 64];
    for a in 0..8 {
        for b in a..8 {
            let v: f64 = rng.gen_range(-0.3..0.3) + if a == b { 1.5 } else { 0.0 };
            q[a * 8 + b] = v;
            q[b * 8 + a] = v;
        }
    }
    let sys = HamiltonianSystem::quadratic(q.clone(), 8).unwrap();
    let x0: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for k in [2, 5] {
        let omega = symplectic_form_of_structure(k, 1).unwrap();
        let exact = quadratic_flow_oracle(&q, &omega, &x0, 1.0).unwrap();
        for (method, min_order) in [(Method::Rk4, 3.9), (Method::ImplicitMidpoint, 1.9)] {
            let errors: Vec<f64> = [0.1, 0.05, 0.025]
                .iter()
                .map(|&dt: &f64| {
                    let steps = (1.0 / dt).round() as usize;
                    let traj = integrate(
                        &sys,
                        &omega,
                        &PhasePoint::at_zero(x0.clone()),
                        &IntegratorConfig::new(method, dt, steps),
                    )
                    .unwrap();
                    max_err(&traj.last().coords, &exact)
                })
                .collect();
            for w in errors.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!(order >= min_order, "J{k} {method}: order {order} from {errors:?}");
            }
        }
    }
}

#[test]
fn rk4_matches_oracle_on_rotation() {
    let sys = HamiltonianSystem::quadratic(identity(16), 16).unwrap();
    let omega = symplectic_form_of_structure(3, 2).unwrap();
    let x0: Vec<f64> = (0..16).map(|a| ((a * 7 % 5) as f64) - 2.0).collect();
    let traj =
        integrate(&sys, &omega, &PhasePoint::at_zero(x0.clone()), &IntegratorConfig::new(Method::Rk4, 1e-3, 1000))
            .unwrap();
    let exact = quadratic_flow_oracle(&identity(16), &omega, &x0, 1.0).unwrap();
    assert!(max_err(&traj.last().coords, &exact) <= 1e-9);
}

#[test]
fn quarter_period_returns_rotated_point() {
    let omega = symplectic_form_of_structure(6, 1).unwrap();
    let mut x0 = vec![0.0; 8];
    x0[0] = 1.0;
    let x = quadratic_flow_oracle(&identity(8), &omega, &x0, 2.0 * PI).unwrap();
    assert!(max_err(&x, &x0) < 1e-10);
}

#[test]
fn midpoint_is_time_reversible() {
    let sys = pendulum_like();
    let omega = symplectic_form_of_structure(4, 1).unwrap();
    let cfg = IntegratorConfig::new(Method::ImplicitMidpoint, 0.05, 40);
    let integrator = Integrator::new(&sys, &omega, &cfg).unwrap();
    let x0 = vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.0, 0.2, 0.7];
    let forward = integrator.advance(&x0, cfg.dt, cfg.steps).unwrap();
    let back = integrator.advance(&forward, -cfg.dt, cfg.steps).unwrap();
    assert!(max_err(&back, &x0) < 1e-10, "{}", max_err(&back, &x0));
}

#[test]
fn energy_conservation_comparison() {
    let sys = pendulum_like();
    let omega = symplectic_form_of_structure(1, 1).unwrap();
    let x0 = PhasePoint::at_zero(vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.0, 0.2, 0.7]);
    let mid = integrate(&sys, &omega, &x0, &IntegratorConfig::new(Method::ImplicitMidpoint, 0.05, 2000)).unwrap();
    let rk4 = integrate(&sys, &omega, &x0, &IntegratorConfig::new(Method::Rk4, 0.05, 2000)).unwrap();
    let (dm, dr) = (energy_drift(&mid), energy_drift(&rk4));
    assert!(dm.max_abs < 1e-2, "{dm:?}");
    assert!(dr.max_abs < 1e-4, "{dr:?}");
    assert!(dm.slope.abs() < 1e-4);
}

#[test]
fn closed_form_matches_linear_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for k in 1..=6 {
            let field = HamiltonField::new(&symplectic_form_of_structure(k, n).unwrap()).unwrap();
            assert!(field.has_closed_form());
            for _ in 0..20 {
                let g: Vec<f64> = (0..8 * n).map(|_| rng.gen_range(-10.0..10.0)).collect();
                assert!(max_err(&field.solve(&g), &field.closed_form(&g)) <= 1e-12);
                field.solve_checked(&g).unwrap();
            }
        }
    }
}

#[test]
fn finite_difference_mode_tracks_symbolic() {
    let e = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2) + 0.25*x0^4", 8).unwrap();
    let sym = HamiltonianSystem::from_expr(e.clone(), 8, GradientMode::Symbolic).unwrap();
    let fd = HamiltonianSystem::from_expr(e, 8, GradientMode::FiniteDifference).unwrap();
    let omega = symplectic_form_of_structure(2, 1).unwrap();
    let x0 = PhasePoint::at_zero(vec![0.5, 0.1, -0.3, 0.2, 0.0, 0.4, -0.1, 0.3]);
    let cfg = IntegratorConfig::new(Method::Rk4, 0.01, 100);
    let a = integrate(&sym, &omega, &x0, &cfg).unwrap();
    let b = integrate(&fd, &omega, &x0, &cfg).unwrap();
    assert!(max_err(&a.last().coords, &b.last().coords) < 1e-7);
}
