use serde::Serialize;

use super::{HamiltonianSystem, Integrator, IntegratorConfig, Trajectory};
use crate::error::{DynamicsError, StructureError};
use crate::forms::ConstantTwoForm;

/// Column perturbation for the finite-difference Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDrift {
    /// `max_t |H(x_t) − H(x_0)|`.
    pub max_abs: f64,
    /// Least-squares slope of `H(x_t) − H(x_0)` against `t`.
    pub slope: f64,
}

pub fn energy_drift(traj: &Trajectory) -> EnergyDrift {
    let h = traj.energies();
    let h0 = h.first().copied().unwrap_or(0.0);
    let max_abs = h.iter().map(|v| (v - h0).abs()).fold(0.0, f64::max);
    let m = h.len() as f64;
    if h.len() < 2 {
        return EnergyDrift { max_abs, slope: 0.0 };
    }
    let times: Vec<f64> = traj.points().iter().map(|p| p.time).collect();
    let t_mean = times.iter().sum::<f64>() / m;
    let d_mean = h.iter().map(|v| v - h0).sum::<f64>() / m;
    let (num, den) = times.iter().zip(h).fold((0.0, 0.0), |(num, den), (t, v)| {
        let dt = t - t_mean;
        (num + dt * (v - h0 - d_mean), den + dt * dt)
    });
    EnergyDrift { max_abs, slope: if den > 0.0 { num / den } else { 0.0 } }
}

/// `max |Mᵀ Ω M − Ω|` where `M` is the Jacobian, by central differences, of
/// the map taking `cfg.steps` steps of `cfg.method` from `x0`.
pub fn symplecticity_residual(
    sys: &HamiltonianSystem,
    omega: &ConstantTwoForm,
    x0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<f64, DynamicsError> {
    cfg.validate()?;
    let dim = omega.dim();
    if x0.len() != dim {
        return Err(StructureError::Dimension { expected: dim, actual: x0.len() }.into());
    }
    let integrator = Integrator::new(sys, omega, cfg)?;
    let mut jac = vec![0.0; dim * dim];
    let mut probe = x0.to_vec();
    for c in 0..dim {
        probe[c] = x0[c] + JACOBIAN_STEP;
        let up = integrator.advance(&probe, cfg.dt, cfg.steps)?;
        probe[c] = x0[c] - JACOBIAN_STEP;
        let down = integrator.advance(&probe, cfg.dt, cfg.steps)?;
        probe[c] = x0[c];
        for r in 0..dim {
            jac[r * dim + c] = (up[r] - down[r]) / (2.0 * JACOBIAN_STEP);
        }
    }
    let w = omega.to_f64();
    let mut residual = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            let mut v = 0.0;
            for r in 0..dim {
                let mra = jac[r * dim + a];
                if mra == 0.0 {
                    continue;
                }
                for s in 0..dim {
                    v += mra * w[r * dim + s] * jac[s * dim + b];
                }
            }
            residual = residual.max((v - w[a * dim + b]).abs());
        }
    }
    Ok(residual)
}

/// Summary written next to a simulated trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub method: String,
    pub dt: f64,
    pub steps: usize,
    pub max_energy_drift: f64,
    pub drift_slope: f64,
    pub symplecticity_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, GradientMode, Method, PhasePoint};
    use crate::expr::parse;
    use crate::forms::symplectic_form_of_structure;

    fn quadratic() -> HamiltonianSystem {
        let e = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)", 8).unwrap();
        HamiltonianSystem::from_expr(e, 8, GradientMode::Symbolic).unwrap()
    }

    fn start() -> Vec<f64> {
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    }

    #[test]
    fn single_point_has_no_drift() {
        let omega = symplectic_form_of_structure(1, 1).unwrap();
        let traj =
            integrate(&quadratic(), &omega, &PhasePoint::at_zero(start()), &IntegratorConfig::new(Method::Rk4, 0.1, 0))
                .unwrap();
        assert_eq!(energy_drift(&traj), EnergyDrift { max_abs: 0.0, slope: 0.0 });
    }

    #[test]
    fn midpoint_conserves_quadratic_energy() {
        let omega = symplectic_form_of_structure(1, 1).unwrap();
        let cfg = IntegratorConfig::new(Method::ImplicitMidpoint, 1e-3, 1000);
        let traj = integrate(&quadratic(), &omega, &PhasePoint::at_zero(start()), &cfg).unwrap();
        assert!(energy_drift(&traj).max_abs <= 1e-10);
    }

    #[test]
    fn identity_map_residual() {
        let omega = symplectic_form_of_structure(2, 1).unwrap();
        let cfg = IntegratorConfig::new(Method::ImplicitMidpoint, 1e-2, 0);
        let r = symplecticity_residual(&quadratic(), &omega, &start(), &cfg).unwrap();
        assert!(r <= 1e-9, "{r}");
    }

    #[test]
    fn midpoint_quadratic_residual() {
        let omega = symplectic_form_of_structure(2, 1).unwrap();
        let cfg = IntegratorConfig::new(Method::ImplicitMidpoint, 1e-2, 1);
        let r = symplecticity_residual(&quadratic(), &omega, &start(), &cfg).unwrap();
        assert!(r <= 1e-6, "{r}");
    }
}
