//! Affine 1-forms, constant 2-forms, and the operations linking them:
//! dual-structure substitution, exterior derivative and interior product.
//!
//! A 2-form is stored as an antisymmetric matrix `Ω` with
//! `Φ = ½ Σ_{a,b} Ω[a][b] dx_a ∧ dx_b`, so a single term `dx_a ∧ dx_b`
//! contributes `+1` at `(a, b)` and `−1` at `(b, a)`. Constant-coefficient
//! 2-forms are closed, so `dΦ = 0` holds structurally.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::StructureError;
use crate::exact;
use crate::structure::{build_structure, Counterexample, SignedPermutationTensor, Variant, VerificationRecord};
use crate::BLOCKS;

pub use crate::exact::Rational;

fn check_n(n: usize) -> Result<usize, StructureError> {
    if n == 0 {
        Err(StructureError::BlockSize)
    } else {
        Ok(BLOCKS * n)
    }
}

/// `Σ_{a,b} C[a][b] x_a dx_b + Σ_b c0[b] dx_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOneForm {
    n: usize,
    linear: Vec<Rational>,
    constant: Vec<Rational>,
}

impl LinearOneForm {
    pub fn zero(n: usize) -> Result<Self, StructureError> {
        let dim = check_n(n)?;
        Ok(Self { n, linear: vec![Rational::zero(); dim * dim], constant: vec![Rational::zero(); dim] })
    }

    pub fn new(n: usize, linear: Vec<Rational>, constant: Vec<Rational>) -> Result<Self, StructureError> {
        let dim = check_n(n)?;
        if linear.len() != dim * dim {
            return Err(StructureError::Dimension { expected: dim * dim, actual: linear.len() });
        }
        if constant.len() != dim {
            return Err(StructureError::Dimension { expected: dim, actual: constant.len() });
        }
        Ok(Self { n, linear, constant })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        BLOCKS * self.n
    }

    /// Coefficient of `x_a dx_b`.
    pub fn linear(&self, a: usize, b: usize) -> Rational {
        self.linear[a * self.dim() + b]
    }

    /// Coefficient of the bare `dx_b`.
    pub fn constant(&self, b: usize) -> Rational {
        self.constant[b]
    }

    pub fn set_linear(&mut self, a: usize, b: usize, v: Rational) {
        let dim = self.dim();
        self.linear[a * dim + b] = v;
    }

    /// Nonzero `x_a dx_b` terms as `(a, b, coefficient)`, ordered by `a` then `b`.
    pub fn linear_terms(&self) -> Vec<(usize, usize, Rational)> {
        let dim = self.dim();
        (0..dim)
            .flat_map(|a| (0..dim).map(move |b| (a, b)))
            .filter_map(|(a, b)| {
                let v = self.linear(a, b);
                (!v.is_zero()).then_some((a, b, v))
            })
            .collect()
    }

    /// Value of the form at point `x`, as a covector.
    pub fn at(&self, x: &[f64]) -> Result<CovectorValue, StructureError> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(StructureError::Dimension { expected: dim, actual: x.len() });
        }
        let components = (0..dim)
            .map(|b| {
                let lin: f64 = (0..dim).map(|a| to_f64(self.linear(a, b)) * x[a]).sum();
                lin + to_f64(self.constant[b])
            })
            .collect();
        Ok(CovectorValue { n: self.n, components })
    }
}

/// Antisymmetric constant 2-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTwoForm {
    n: usize,
    omega: Vec<Rational>,
}

impl ConstantTwoForm {
    /// Row-major `8n × 8n` coefficients; rejects anything not exactly antisymmetric.
    pub fn new(n: usize, omega: Vec<Rational>) -> Result<Self, StructureError> {
        let dim = check_n(n)?;
        if omega.len() != dim * dim {
            return Err(StructureError::Dimension { expected: dim * dim, actual: omega.len() });
        }
        for r in 0..dim {
            for c in r..dim {
                if omega[r * dim + c] != -omega[c * dim + r] {
                    return Err(StructureError::NotAntisymmetric { row: r, col: c });
                }
            }
        }
        Ok(Self { n, omega })
    }

    pub fn zero(n: usize) -> Result<Self, StructureError> {
        let dim = check_n(n)?;
        Ok(Self { n, omega: vec![Rational::zero(); dim * dim] })
    }

    /// Sum of `coefficient · dx_a ∧ dx_b` terms.
    pub fn from_wedges(n: usize, terms: &[(usize, usize, Rational)]) -> Result<Self, StructureError> {
        let dim = check_n(n)?;
        let mut omega = vec![Rational::zero(); dim * dim];
        for &(a, b, v) in terms {
            if a >= dim || b >= dim {
                return Err(StructureError::Dimension { expected: dim, actual: a.max(b) });
            }
            omega[a * dim + b] += v;
            omega[b * dim + a] -= v;
        }
        Ok(Self { n, omega })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        BLOCKS * self.n
    }

    pub fn get(&self, a: usize, b: usize) -> Rational {
        self.omega[a * self.dim() + b]
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.omega
    }

    /// `Ω` as nested integer rows when every entry is an integer.
    pub fn integer_matrix(&self) -> Option<Vec<Vec<i64>>> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let v = self.get(r, c);
                        v.is_integer().then(|| v.to_integer())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.omega.iter().map(|&v| to_f64(v)).collect()
    }

    pub fn negate(&self) -> Self {
        Self { n: self.n, omega: self.omega.iter().map(|&v| -v).collect() }
    }

    pub fn transpose(&self) -> Self {
        let dim = self.dim();
        let omega = (0..dim * dim).map(|i| self.omega[(i % dim) * dim + i / dim]).collect();
        Self { n: self.n, omega }
    }

    /// Exact check of `Ω² = −I`.
    pub fn squares_to_minus_identity(&self) -> bool {
        let dim = self.dim();
        let sq = exact::mul(&self.omega, &self.omega, dim);
        (0..dim).all(|r| (0..dim).all(|c| sq[r * dim + c] == if r == c { -Rational::one() } else { Rational::zero() }))
    }

    /// Upper-triangle terms oriented so each coefficient is positive:
    /// `(p, q, v)` meaning `v · dx_p ∧ dx_q`, sorted by `p`.
    pub fn wedge_terms(&self) -> Vec<(usize, usize, Rational)> {
        let dim = self.dim();
        let mut terms: Vec<_> = (0..dim)
            .flat_map(|r| (r + 1..dim).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = self.get(r, c);
                if v.is_zero() {
                    None
                } else if v > Rational::zero() {
                    Some((r, c, v))
                } else {
                    Some((c, r, -v))
                }
            })
            .collect();
        terms.sort_by_key(|&(p, q, _)| (p, q));
        terms
    }
}

fn to_f64(v: Rational) -> f64 {
    v.to_f64().expect("rational converts to f64")
}

/// Value of a constant 1-form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovectorValue {
    pub n: usize,
    pub components: Vec<f64>,
}

/// `ω = ½ Σ_a x_a dx_a`.
pub fn canonical_one_form(n: usize) -> Result<LinearOneForm, StructureError> {
    let mut f = LinearOneForm::zero(n)?;
    let half = Rational::new(1, 2);
    for a in 0..f.dim() {
        f.set_linear(a, a, half);
    }
    Ok(f)
}

/// Replaces each `dx_b` by `J*(dx_b) = sign[b] dx_{target[b]}`; coefficient functions are untouched.
pub fn apply_dual_structure(jd: &SignedPermutationTensor, f: &LinearOneForm) -> Result<LinearOneForm, StructureError> {
    if jd.variant() != Variant::Dual {
        return Err(StructureError::Variant { expected: Variant::Dual, actual: jd.variant() });
    }
    if jd.dim() != f.dim() {
        return Err(StructureError::Dimension { expected: f.dim(), actual: jd.dim() });
    }
    let dim = f.dim();
    let mut out = LinearOneForm::zero(f.n)?;
    for b in 0..dim {
        let (tb, s) = jd.image(b);
        out.constant[tb] += s.apply(f.constant[b]);
        for a in 0..dim {
            out.linear[a * dim + tb] += s.apply(f.linear[a * dim + b]);
        }
    }
    Ok(out)
}

/// `d(Σ C[a][b] x_a dx_b) = Σ C[a][b] dx_a ∧ dx_b`, i.e. `Ω[a][b] = C[a][b] − C[b][a]`.
pub fn exterior_derivative(f: &LinearOneForm) -> ConstantTwoForm {
    let dim = f.dim();
    let omega = (0..dim * dim)
        .map(|i| {
            let (a, b) = (i / dim, i % dim);
            f.linear(a, b) - f.linear(b, a)
        })
        .collect();
    ConstantTwoForm { n: f.n, omega }
}

/// `Φ_{J_k*} = −d(J_k*(ω))`.
pub fn symplectic_form_of_structure(k: usize, n: usize) -> Result<ConstantTwoForm, StructureError> {
    let jd = build_structure(k, n, Variant::Dual)?;
    let liouville = apply_dual_structure(&jd, &canonical_one_form(n)?)?;
    Ok(exterior_derivative(&liouville).negate())
}

/// `λ_{J_k*} = J_k*(ω)`.
pub fn liouville_form(k: usize, n: usize) -> Result<LinearOneForm, StructureError> {
    let jd = build_structure(k, n, Variant::Dual)?;
    apply_dual_structure(&jd, &canonical_one_form(n)?)
}

/// `(i_X Φ)_b = Σ_a X[a] Ω[a][b]`.
pub fn interior_product(omega: &ConstantTwoForm, x: &[f64]) -> Result<CovectorValue, StructureError> {
    let dim = omega.dim();
    if x.len() != dim {
        return Err(StructureError::Dimension { expected: dim, actual: x.len() });
    }
    let w = omega.to_f64();
    let components = (0..dim).map(|b| (0..dim).map(|a| x[a] * w[a * dim + b]).sum()).collect();
    Ok(CovectorValue { n: omega.n, components })
}

/// Compares the matrix of `Φ_{J_k*}` with the matrix of `J_k` entry by entry.
pub fn structure_form_identity(k: usize, n: usize) -> Result<VerificationRecord, StructureError> {
    let omega = symplectic_form_of_structure(k, n)?;
    Ok(compare_with_structure(k, &omega, &build_structure(k, n, Variant::Primal)?))
}

pub(crate) fn compare_with_structure(
    k: usize,
    omega: &ConstantTwoForm,
    j: &SignedPermutationTensor,
) -> VerificationRecord {
    let m = j.matrix();
    let dim = j.dim();
    let mut counterexamples = Vec::new();
    for (r, row) in m.iter().enumerate().take(dim) {
        for (c, &want) in row.iter().enumerate() {
            let got = omega.get(r, c);
            if got != Rational::from_integer(want) {
                counterexamples.push(Counterexample {
                    input: vec![r, c],
                    expected: want.to_string(),
                    actual: got.to_string(),
                });
            }
        }
    }
    VerificationRecord::new(format!("matrix(Phi_J{k}*) = matrix(J{k})"), counterexamples)
}

pub fn check_nondegenerate(omega: &ConstantTwoForm) -> bool {
    exact::is_invertible(&omega.omega, omega.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn nonzero_upper(f: &ConstantTwoForm) -> Vec<(usize, usize, i64)> {
        let dim = f.dim();
        let mut out = vec![];
        for a in 0..dim {
            for b in a + 1..dim {
                let v = f.get(a, b);
                if !v.is_zero() {
                    out.push((a, b, v.to_integer()));
                }
            }
        }
        out
    }

    #[test]
    fn canonical_form() {
        let w = canonical_one_form(1).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(w.linear(a, b), if a == b { Rational::new(1, 2) } else { r(0) });
            }
        }
        let w2 = canonical_one_form(2).unwrap();
        assert_eq!(w2.linear_terms().len(), 16);
        assert!(w2.linear_terms().iter().all(|&(a, b, v)| a == b && v == Rational::new(1, 2)));
        assert_eq!(w.at(&[0.0; 8]).unwrap().components, vec![0.0; 8]);
        assert_eq!(canonical_one_form(0), Err(StructureError::BlockSize));
    }

    #[test]
    fn liouville_examples() {
        let l4 = liouville_form(4, 1).unwrap();
        assert_eq!(l4.linear(0, 4), Rational::new(1, 2));
        assert_eq!(l4.linear(4, 0), Rational::new(-1, 2));
        let l5 = liouville_form(5, 1).unwrap();
        assert_eq!(l5.linear(2, 7), Rational::new(-1, 2));
    }

    #[test]
    fn dual_substitution_requires_dual() {
        let w = canonical_one_form(1).unwrap();
        let j = build_structure(1, 1, Variant::Primal).unwrap();
        assert!(matches!(apply_dual_structure(&j, &w), Err(StructureError::Variant { .. })));
        let id = SignedPermutationTensor::identity(1, Variant::Dual).unwrap();
        let mut f = LinearOneForm::zero(1).unwrap();
        f.set_linear(3, 6, r(5));
        f.constant[2] = Rational::new(1, 3);
        assert_eq!(apply_dual_structure(&id, &f).unwrap(), f);
    }

    #[test]
    fn constant_part_is_substituted() {
        let jd = build_structure(1, 1, Variant::Dual).unwrap();
        let mut f = LinearOneForm::zero(1).unwrap();
        f.constant[1] = r(3);
        let g = apply_dual_structure(&jd, &f).unwrap();
        // J1*(dx1) = -dx0
        assert_eq!(g.constant(0), r(-3));
        assert!(exterior_derivative(&g).coefficients().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn exterior_derivative_examples() {
        let mut f = LinearOneForm::zero(1).unwrap();
        f.set_linear(0, 4, r(1));
        let d = exterior_derivative(&f);
        assert_eq!(nonzero_upper(&d), vec![(0, 4, 1)]);
        assert_eq!(d.get(4, 0), r(-1));

        let mut g = LinearOneForm::zero(1).unwrap();
        g.set_linear(0, 0, r(1));
        assert_eq!(exterior_derivative(&g), ConstantTwoForm::zero(1).unwrap());
    }

    #[test]
    fn printed_two_forms() {
        let f4 = symplectic_form_of_structure(4, 1).unwrap();
        assert_eq!(nonzero_upper(&f4), vec![(0, 4, -1), (1, 2, 1), (3, 7, 1), (5, 6, -1)]);
        assert_eq!(f4.get(4, 0), r(1));
        assert_eq!(f4.get(6, 5), r(1));
        let wedges: Vec<_> = f4.wedge_terms().iter().map(|&(p, q, _)| (p, q)).collect();
        assert_eq!(wedges, vec![(1, 2), (3, 7), (4, 0), (6, 5)]);

        let f5 = symplectic_form_of_structure(5, 1).unwrap();
        let wedges: Vec<_> = f5.wedge_terms().iter().map(|&(p, q, v)| (p, q, v)).collect();
        assert_eq!(wedges, vec![(1, 3, r(1)), (2, 7, r(1)), (5, 0, r(1)), (6, 4, r(1))]);

        let f6 = symplectic_form_of_structure(6, 1).unwrap();
        let wedges: Vec<_> = f6.wedge_terms().iter().map(|&(p, q, v)| (p, q, v)).collect();
        assert_eq!(wedges, vec![(1, 7, r(1)), (2, 3, r(1)), (5, 4, r(1)), (6, 0, r(1))]);

        assert_eq!(symplectic_form_of_structure(7, 1), Err(StructureError::StructureIndex(7)));
    }

    #[test]
    fn interior_product_examples() {
        let f4 = symplectic_form_of_structure(4, 1).unwrap();
        let mut e1 = vec![0.0; 8];
        e1[1] = 1.0;
        let mut want = vec![0.0; 8];
        want[2] = 1.0;
        assert_eq!(interior_product(&f4, &e1).unwrap().components, want);

        let mut e0 = vec![0.0; 8];
        e0[0] = 1.0;
        let mut want = vec![0.0; 8];
        want[4] = -1.0;
        assert_eq!(interior_product(&f4, &e0).unwrap().components, want);

        assert_eq!(interior_product(&f4, &[0.0; 8]).unwrap().components, vec![0.0; 8]);
        assert!(interior_product(&f4, &[0.0; 3]).is_err());
    }

    #[test]
    fn form_identity_examples() {
        assert!(structure_form_identity(1, 1).unwrap().passed);
        assert!(structure_form_identity(4, 1).unwrap().passed);
        let f4 = symplectic_form_of_structure(4, 1).unwrap().transpose();
        let rec = compare_with_structure(4, &f4, &build_structure(4, 1, Variant::Primal).unwrap());
        assert!(!rec.passed);
        assert_eq!(rec.counterexamples.len(), 8);
    }

    #[test]
    fn nondegeneracy() {
        assert!(check_nondegenerate(&symplectic_form_of_structure(5, 1).unwrap()));
        assert!(!check_nondegenerate(&ConstantTwoForm::zero(1).unwrap()));
        assert!(check_nondegenerate(&symplectic_form_of_structure(6, 3).unwrap()));
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let mut m = vec![r(0); 64];
        m[1] = r(1);
        assert_eq!(ConstantTwoForm::new(1, m.clone()), Err(StructureError::NotAntisymmetric { row: 0, col: 1 }));
        m[8] = r(-1);
        assert!(ConstantTwoForm::new(1, m).is_ok());
    }
}
