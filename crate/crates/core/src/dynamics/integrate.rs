use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{HamiltonField, HamiltonianSystem, PhasePoint};
use crate::error::{DynamicsError, StructureError};
use crate::forms::ConstantTwoForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    #[serde(alias = "midpoint")]
    ImplicitMidpoint,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ImplicitMidpoint => "implicit_midpoint",
        }
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "midpoint" | "implicit_midpoint" | "implicit-midpoint" => Ok(Method::ImplicitMidpoint),
            other => Err(format!("unknown method '{other}' (expected rk4 or midpoint)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub steps: usize,
    /// Max-norm update at which the midpoint iteration stops, relative to `max(1, |x|∞)`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { method: Method::ImplicitMidpoint, dt: 1e-3, steps: 1000, tolerance: 1e-12, max_iterations: 50 }
    }
}

impl IntegratorConfig {
    pub fn new(method: Method, dt: f64, steps: usize) -> Self {
        Self { method, dt, steps, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::Config(format!("dt must be positive and finite, got {}", self.dt)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(DynamicsError::Config("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(DynamicsError::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// One-step maps for `ẋ = X(x)`.
#[derive(Debug, Clone)]
pub struct Integrator<'a> {
    sys: &'a HamiltonianSystem,
    field: HamiltonField,
    method: Method,
    tolerance: f64,
    max_iterations: usize,
}

fn axpy(x: &[f64], h: f64, v: &[f64]) -> Vec<f64> {
    x.iter().zip(v).map(|(a, b)| a + h * b).collect()
}

impl<'a> Integrator<'a> {
    pub fn new(
        sys: &'a HamiltonianSystem,
        omega: &ConstantTwoForm,
        cfg: &IntegratorConfig,
    ) -> Result<Self, DynamicsError> {
        if sys.dim() != omega.dim() {
            return Err(StructureError::Dimension { expected: omega.dim(), actual: sys.dim() }.into());
        }
        Ok(Self {
            sys,
            field: HamiltonField::new(omega)?,
            method: cfg.method,
            tolerance: cfg.tolerance,
            max_iterations: cfg.max_iterations,
        })
    }

    pub fn vector_field(&self, x: &[f64], step: usize) -> Result<Vec<f64>, DynamicsError> {
        let grad = self.sys.gradient(x).map_err(|source| DynamicsError::Evaluation { step, source })?;
        Ok(self.field.apply(&grad))
    }

    /// Advances `x` by `dt` (which may be negative). `step` labels errors.
    pub fn step(&self, x: &[f64], dt: f64, step: usize) -> Result<Vec<f64>, DynamicsError> {
        let next = match self.method {
            Method::Rk4 => {
                let k1 = self.vector_field(x, step)?;
                let k2 = self.vector_field(&axpy(x, dt / 2.0, &k1), step)?;
                let k3 = self.vector_field(&axpy(x, dt / 2.0, &k2), step)?;
                let k4 = self.vector_field(&axpy(x, dt, &k3), step)?;
                (0..x.len()).map(|a| x[a] + dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])).collect()
            }
            Method::ImplicitMidpoint => self.midpoint(x, dt, step)?,
        };
        if next.iter().all(|v: &f64| v.is_finite()) {
            Ok(next)
        } else {
            Err(DynamicsError::Divergence { step })
        }
    }

    fn midpoint(&self, x: &[f64], dt: f64, step: usize) -> Result<Vec<f64>, DynamicsError> {
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = self.tolerance * scale;
        let mut next = axpy(x, dt, &self.vector_field(x, step)?);
        for _ in 0..self.max_iterations {
            let mid: Vec<f64> = x.iter().zip(&next).map(|(a, b)| 0.5 * (a + b)).collect();
            if !mid.iter().all(|v| v.is_finite()) {
                return Err(DynamicsError::Divergence { step });
            }
            let update = axpy(x, dt, &self.vector_field(&mid, step)?);
            let change = update.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            next = update;
            if change <= tol {
                return Ok(next);
            }
        }
        Err(DynamicsError::NoConvergence { step, iterations: self.max_iterations })
    }

    /// Applies `steps` steps of size `dt`.
    pub fn advance(&self, x: &[f64], dt: f64, steps: usize) -> Result<Vec<f64>, DynamicsError> {
        let mut x = x.to_vec();
        for s in 1..=steps {
            x = self.step(&x, dt, s)?;
        }
        Ok(x)
    }
}

/// Uniformly sampled integral curve with the energy at every sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    method: Method,
    dt: f64,
    points: Vec<PhasePoint>,
    energies: Vec<f64>,
}

impl Trajectory {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("trajectory holds at least the initial point")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `t,x0,…,x{d−1},H` with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let dim = self.points.first().map_or(0, |p| p.coords.len());
        let mut header = String::from("t");
        for a in 0..dim {
            header.push_str(&format!(",x{a}"));
        }
        header.push_str(",H");
        writeln!(w, "{header}")?;
        for (p, h) in self.points.iter().zip(&self.energies) {
            let mut row = format!("{:.16e}", p.time);
            for v in &p.coords {
                row.push_str(&format!(",{v:.16e}"));
            }
            row.push_str(&format!(",{h:.16e}"));
            writeln!(w, "{row}")?;
        }
        Ok(())
    }
}

/// Integrates `ẋ = X(x)` from `x0` with a fixed step.
pub fn integrate(
    sys: &HamiltonianSystem,
    omega: &ConstantTwoForm,
    x0: &PhasePoint,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    if x0.coords.len() != omega.dim() {
        return Err(StructureError::Dimension { expected: omega.dim(), actual: x0.coords.len() }.into());
    }
    if !x0.coords.iter().all(|v| v.is_finite()) {
        return Err(DynamicsError::Divergence { step: 0 });
    }
    let integrator = Integrator::new(sys, omega, cfg)?;
    let energy = |x: &[f64], step| sys.energy(x).map_err(|source| DynamicsError::Evaluation { step, source });
    let mut points = Vec::with_capacity(cfg.steps + 1);
    let mut energies = Vec::with_capacity(cfg.steps + 1);
    energies.push(energy(&x0.coords, 0)?);
    points.push(x0.clone());
    let mut x = x0.coords.clone();
    for s in 1..=cfg.steps {
        x = integrator.step(&x, cfg.dt, s)?;
        energies.push(energy(&x, s)?);
        points.push(PhasePoint::new(x0.time + s as f64 * cfg.dt, x.clone()));
    }
    Ok(Trajectory { method: cfg.method, dt: cfg.dt, points, energies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GradientMode;
    use crate::expr::parse;
    use crate::forms::symplectic_form_of_structure;

    fn rotation_setup() -> (HamiltonianSystem, ConstantTwoForm, PhasePoint) {
        let e = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)", 8).unwrap();
        let sys = HamiltonianSystem::from_expr(e, 8, GradientMode::Symbolic).unwrap();
        let mut x0 = vec![0.0; 8];
        x0[0] = 1.0;
        (sys, symplectic_form_of_structure(1, 1).unwrap(), PhasePoint::at_zero(x0))
    }

    #[test]
    fn rk4_rotation_closed_form() {
        let (sys, omega, x0) = rotation_setup();
        let traj = integrate(&sys, &omega, &x0, &IntegratorConfig::new(Method::Rk4, 1e-3, 1000)).unwrap();
        let end = traj.last();
        assert!((end.time - 1.0).abs() < 1e-12);
        let mut want = vec![0.0; 8];
        want[0] = 1f64.cos();
        want[1] = 1f64.sin();
        for (a, b) in end.coords.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_steps_keeps_initial_point() {
        let (sys, omega, x0) = rotation_setup();
        let traj = integrate(&sys, &omega, &x0, &IntegratorConfig::new(Method::ImplicitMidpoint, 1e-2, 0)).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.points()[0], x0);
        assert_eq!(traj.energies(), &[0.5]);
    }

    #[test]
    fn invalid_config() {
        let (sys, omega, x0) = rotation_setup();
        for dt in [0.0, -1e-3, f64::NAN] {
            let cfg = IntegratorConfig::new(Method::Rk4, dt, 3);
            assert!(matches!(integrate(&sys, &omega, &x0, &cfg), Err(DynamicsError::Config(_))));
        }
    }

    #[test]
    fn midpoint_non_convergence_reports_step() {
        let (sys, omega, x0) = rotation_setup();
        let cfg = IntegratorConfig { max_iterations: 2, ..IntegratorConfig::new(Method::ImplicitMidpoint, 0.5, 5) };
        assert_eq!(
            integrate(&sys, &omega, &x0, &cfg).unwrap_err(),
            DynamicsError::NoConvergence { step: 1, iterations: 2 }
        );
    }

    #[test]
    fn divergence_reports_step() {
        let e = parse("1e300*x1", 8).unwrap();
        let sys = HamiltonianSystem::from_expr(e, 8, GradientMode::Symbolic).unwrap();
        let omega = symplectic_form_of_structure(1, 1).unwrap();
        let cfg = IntegratorConfig::new(Method::Rk4, 1e10, 3);
        let x0 = PhasePoint::at_zero(vec![0.0; 8]);
        assert_eq!(integrate(&sys, &omega, &x0, &cfg).unwrap_err(), DynamicsError::Divergence { step: 1 });
    }

    #[test]
    fn evaluation_error_reports_step() {
        let e = parse("1/x0", 8).unwrap();
        let sys = HamiltonianSystem::from_expr(e, 8, GradientMode::Symbolic).unwrap();
        let omega = symplectic_form_of_structure(1, 1).unwrap();
        let x0 = PhasePoint::at_zero(vec![0.0; 8]);
        let err = integrate(&sys, &omega, &x0, &IntegratorConfig::default()).unwrap_err();
        assert!(matches!(err, DynamicsError::Evaluation { step: 0, .. }));
    }

    #[test]
    fn csv_layout() {
        let (sys, omega, x0) = rotation_setup();
        let traj = integrate(&sys, &omega, &x0, &IntegratorConfig::new(Method::Rk4, 0.5, 2)).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,x0,x1,x2,x3,x4,x5,x6,x7,H");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
        let row: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[0], 1.0);
        assert_eq!(row[1], traj.last().coords[0]);
    }

    #[test]
    fn method_names() {
        assert_eq!("midpoint".parse::<Method>().unwrap(), Method::ImplicitMidpoint);
        assert_eq!("rk4".parse::<Method>().unwrap(), Method::Rk4);
        assert!("euler".parse::<Method>().is_err());
        let m: Method = serde_json::from_str("\"midpoint\"").unwrap();
        assert_eq!(m, Method::ImplicitMidpoint);
    }
}
