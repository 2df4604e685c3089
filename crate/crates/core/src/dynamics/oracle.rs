use nalgebra::{DMatrix, DVector};

use super::check_symmetric;
use crate::error::{DynamicsError, StructureError};
use crate::forms::ConstantTwoForm;

/// Matrix exponential by scaling and squaring around a Taylor core.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most ½, the series
/// is summed until terms drop below machine precision, and the result is
/// squared `s` times.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let dim = a.nrows();
    let norm = (0..dim).map(|c| a.column(c).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    let scaled = a / 2f64.powi(squarings);
    let mut result = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    for k in 1..=40 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() <= f64::EPSILON * result.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Exact flow of `H = ½ xᵀ Q x` under `Ω` with `Ω² = −I`: `exp(t Ω Q) x0`.
pub fn quadratic_flow_oracle(
    q: &[f64],
    omega: &ConstantTwoForm,
    x0: &[f64],
    t: f64,
) -> Result<Vec<f64>, DynamicsError> {
    let dim = omega.dim();
    check_symmetric(q, dim)?;
    if x0.len() != dim {
        return Err(StructureError::Dimension { expected: dim, actual: x0.len() }.into());
    }
    if !omega.squares_to_minus_identity() {
        return Err(DynamicsError::Precondition("quadratic flow oracle needs Ω² = −I".into()));
    }
    let generator = DMatrix::from_row_slice(dim, dim, &omega.to_f64()) * DMatrix::from_row_slice(dim, dim, q);
    let flow = expm(&(generator * t));
    Ok((flow * DVector::from_column_slice(x0)).as_slice().to_vec())
}
