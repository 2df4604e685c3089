//! Exact rational linear algebra on small dense matrices (row-major).

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i64>;

/// Row-echelon elimination; returns the pivots found, in order.
fn eliminate(mut m: Vec<Rational>, dim: usize) -> Vec<Rational> {
    let mut pivots = Vec::with_capacity(dim);
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..dim).find(|&r| !m[r * dim + col].is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..dim {
                m.swap(p * dim + c, row * dim + c);
            }
        }
        let pivot = m[row * dim + col];
        pivots.push(pivot);
        for r in row + 1..dim {
            let f = m[r * dim + col] / pivot;
            if f.is_zero() {
                continue;
            }
            for c in col..dim {
                let v = m[row * dim + c];
                m[r * dim + c] -= f * v;
            }
        }
        row += 1;
    }
    pivots
}

pub fn is_invertible(m: &[Rational], dim: usize) -> bool {
    debug_assert_eq!(m.len(), dim * dim);
    eliminate(m.to_vec(), dim).len() == dim
}

/// Symmetric positive-definiteness by elimination without row exchanges
/// (every leading pivot must be positive).
pub fn is_positive_definite(m: &[Rational], dim: usize) -> bool {
    let mut m = m.to_vec();
    for k in 0..dim {
        let pivot = m[k * dim + k];
        if pivot <= Rational::zero() {
            return false;
        }
        for r in k + 1..dim {
            let f = m[r * dim + k] / pivot;
            for c in k..dim {
                let v = m[k * dim + c];
                m[r * dim + c] -= f * v;
            }
        }
    }
    true
}

pub fn is_symmetric(m: &[Rational], dim: usize) -> bool {
    (0..dim).all(|r| (0..r).all(|c| m[r * dim + c] == m[c * dim + r]))
}

pub fn identity(dim: usize) -> Vec<Rational> {
    let mut m = vec![Rational::zero(); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = Rational::one();
    }
    m
}

pub fn mul(a: &[Rational], b: &[Rational], dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let x = a[r * dim + k];
            if x.is_zero() {
                continue;
            }
            for c in 0..dim {
                out[r * dim + c] += x * b[k * dim + c];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn singular_and_regular() {
        assert!(!is_invertible(&[r(1), r(2), r(2), r(4)], 2));
        assert!(is_invertible(&[r(0), r(1), r(-1), r(0)], 2));
        assert!(!is_invertible(&[r(0); 9], 3));
        assert!(is_invertible(&identity(5), 5));
    }

    #[test]
    fn positive_definite() {
        assert!(is_positive_definite(&[r(2), r(1), r(1), r(2)], 2));
        assert!(!is_positive_definite(&[r(1), r(2), r(2), r(1)], 2));
        assert!(!is_positive_definite(&[r(0), r(1), r(1), r(0)], 2));
    }
}
