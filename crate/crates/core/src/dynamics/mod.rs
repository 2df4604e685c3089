//! Hamilton vector fields from `i_X Φ = dH`, equation sets, fixed-step
//! integration and conservation diagnostics.
//!
//! Everything here is floating point; exact forms are converted once, when a
//! [`HamiltonField`] is built.

mod diagnostics;
mod equations;
mod integrate;
mod oracle;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, EvalError, StructureError};
use crate::expr::{gradient, Expr};
use crate::forms::{check_nondegenerate, ConstantTwoForm};

pub use diagnostics::{energy_drift, symplecticity_residual, Diagnostics, EnergyDrift};
pub use equations::{symbolic_equations, EquationRecord, EquationSet};
pub use integrate::{integrate, Integrator, IntegratorConfig, Method, Trajectory};
pub use oracle::{expm, quadratic_flow_oracle};

/// Tolerance for agreement between the linear solve and `Ω·∇H`.
pub const FIELD_AGREEMENT_TOL: f64 = 1e-12;

/// Where the gradient of a [`HamiltonianSystem`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    Symbolic,
    FiniteDifference,
}

type EnergyFn = dyn Fn(&[f64]) -> Result<f64, EvalError> + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Result<Vec<f64>, EvalError> + Send + Sync;

/// An energy function together with its gradient.
#[derive(Clone)]
pub struct HamiltonianSystem {
    dim: usize,
    energy: Arc<EnergyFn>,
    gradient: Arc<GradientFn>,
    provenance: GradientMode,
}

impl std::fmt::Debug for HamiltonianSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianSystem")
            .field("dim", &self.dim)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

/// Central differences with step `1e-6 * max(1, |x_a|)`.
pub fn finite_difference_gradient<F>(f: F, x: &[f64]) -> Result<Vec<f64>, EvalError>
where
    F: Fn(&[f64]) -> Result<f64, EvalError>,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|a| {
            let h = 1e-6 * x[a].abs().max(1.0);
            probe[a] = x[a] + h;
            let up = f(&probe)?;
            probe[a] = x[a] - h;
            let down = f(&probe)?;
            probe[a] = x[a];
            Ok((up - down) / (2.0 * h))
        })
        .collect()
}

impl HamiltonianSystem {
    pub fn new<E, G>(dim: usize, energy: E, gradient: G, provenance: GradientMode) -> Self
    where
        E: Fn(&[f64]) -> Result<f64, EvalError> + Send + Sync + 'static,
        G: Fn(&[f64]) -> Result<Vec<f64>, EvalError> + Send + Sync + 'static,
    {
        Self { dim, energy: Arc::new(energy), gradient: Arc::new(gradient), provenance }
    }

    /// Wraps a parsed expression, differentiating it symbolically or by finite differences.
    pub fn from_expr(expr: Expr, dim: usize, mode: GradientMode) -> Result<Self, DynamicsError> {
        if let Some(a) = expr.max_var().filter(|&a| a >= dim) {
            return Err(DynamicsError::Precondition(format!("x{a} exceeds dimension {dim}")));
        }
        let expr = Arc::new(expr);
        let energy = {
            let expr = Arc::clone(&expr);
            move |x: &[f64]| expr.evaluate(x)
        };
        Ok(match mode {
            GradientMode::Symbolic => {
                let grad = gradient(&expr, dim);
                Self::new(dim, energy, move |x: &[f64]| grad.iter().map(|g| g.evaluate(x)).collect(), mode)
            }
            GradientMode::FiniteDifference => {
                let e = Arc::clone(&expr);
                Self::new(dim, energy, move |x: &[f64]| finite_difference_gradient(|p| e.evaluate(p), x), mode)
            }
        })
    }

    /// `H(x) = ½ xᵀ Q x` for a symmetric row-major `Q`.
    pub fn quadratic(q: Vec<f64>, dim: usize) -> Result<Self, DynamicsError> {
        check_symmetric(&q, dim)?;
        let q = DMatrix::from_row_slice(dim, dim, &q);
        let qe = q.clone();
        Ok(Self::new(
            dim,
            move |x: &[f64]| {
                let v = DVector::from_column_slice(x);
                Ok(0.5 * v.dot(&(&qe * &v)))
            },
            move |x: &[f64]| Ok((&q * DVector::from_column_slice(x)).as_slice().to_vec()),
            GradientMode::Symbolic,
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> GradientMode {
        self.provenance
    }

    pub fn energy(&self, x: &[f64]) -> Result<f64, EvalError> {
        (self.energy)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        (self.gradient)(x)
    }
}

pub(crate) fn check_symmetric(q: &[f64], dim: usize) -> Result<(), DynamicsError> {
    if q.len() != dim * dim {
        return Err(StructureError::Dimension { expected: dim * dim, actual: q.len() }.into());
    }
    for r in 0..dim {
        for c in 0..r {
            if q[r * dim + c] != q[c * dim + r] {
                return Err(DynamicsError::Precondition(format!("Q is not symmetric at ({r}, {c})")));
            }
        }
    }
    Ok(())
}

/// A point of phase space at a given time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub time: f64,
    pub coords: Vec<f64>,
}

impl PhasePoint {
    pub fn new(time: f64, coords: Vec<f64>) -> Self {
        Self { time, coords }
    }

    pub fn at_zero(coords: Vec<f64>) -> Self {
        Self { time: 0.0, coords }
    }
}

/// Solves `Σ_a X[a] Ω[a][b] = ∂H/∂x_b` for a fixed nondegenerate `Ω`.
///
/// When `Ω² = −I` (checked exactly), the solution is also `X = Ω·∇H`, which
/// [`HamiltonField::apply`] uses directly.
#[derive(Debug, Clone)]
pub struct HamiltonField {
    omega: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    complex: bool,
}

impl HamiltonField {
    pub fn new(omega: &ConstantTwoForm) -> Result<Self, DynamicsError> {
        if !check_nondegenerate(omega) {
            return Err(DynamicsError::Singular);
        }
        let dim = omega.dim();
        let m = DMatrix::from_row_slice(dim, dim, &omega.to_f64());
        let lu = m.transpose().lu();
        Ok(Self { omega: m, lu, complex: omega.squares_to_minus_identity() })
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    /// True when `Ω² = −I` holds exactly.
    pub fn has_closed_form(&self) -> bool {
        self.complex
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    /// Unique solution by LU.
    pub fn solve(&self, grad: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(grad);
        self.lu.solve(&rhs).expect("nondegenerate form has an invertible LU").as_slice().to_vec()
    }

    /// `Ω·∇H`, valid only when [`has_closed_form`](Self::has_closed_form) holds.
    pub fn closed_form(&self, grad: &[f64]) -> Vec<f64> {
        (&self.omega * DVector::from_column_slice(grad)).as_slice().to_vec()
    }

    pub fn apply(&self, grad: &[f64]) -> Vec<f64> {
        if self.complex {
            self.closed_form(grad)
        } else {
            self.solve(grad)
        }
    }

    /// Linear solve, cross-checked against the closed form when it applies.
    pub fn solve_checked(&self, grad: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        if grad.len() != self.dim() {
            return Err(StructureError::Dimension { expected: self.dim(), actual: grad.len() }.into());
        }
        let x = self.solve(grad);
        if self.complex {
            let diff = x.iter().zip(self.closed_form(grad)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if diff > FIELD_AGREEMENT_TOL {
                return Err(DynamicsError::FieldMismatch(diff));
            }
        }
        Ok(x)
    }
}

/// The Hamilton vector field of `sys` with respect to `Ω` at `x`.
pub fn hamilton_vector_field(
    omega: &ConstantTwoForm,
    sys: &HamiltonianSystem,
    x: &[f64],
) -> Result<Vec<f64>, DynamicsError> {
    if sys.dim() != omega.dim() || x.len() != omega.dim() {
        return Err(StructureError::Dimension { expected: omega.dim(), actual: x.len().min(sys.dim()) }.into());
    }
    let field = HamiltonField::new(omega)?;
    let grad = sys.gradient(x).map_err(|source| DynamicsError::Evaluation { step: 0, source })?;
    field.solve_checked(&grad)
}
