//! Exact structure tensors, constant-coefficient exterior calculus, a small
//! expression engine, and Hamiltonian dynamics on flat `8n`-dimensional
//! almost Clifford manifolds.
//!
//! Coordinates use the block layout `a = b*n + i`: block `b` in `0..8`
//! holds the coordinates `x_{bn+i}` for `i` in `0..n`.
//!
//! The pipeline is:
//!
//! 1. [`structure`] builds the six structure tensors `J_1..J_6` (and their
//!    duals) as signed permutations and checks their algebraic identities.
//! 2. [`forms`] applies a dual structure to the canonical 1-form
//!    `ω = ½ Σ x_a dx_a`, takes `Φ = −dλ`, and contracts vectors into it.
//! 3. [`expr`] parses Hamiltonians such as `0.5*(x0^2 + x1^2)` and
//!    differentiates them symbolically.
//! 4. [`dynamics`] solves `i_X Φ = dH` for the Hamilton vector field and
//!    integrates it with RK4 or the implicit midpoint rule.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod expr;
pub mod forms;
pub mod report;
pub mod structure;

pub use dynamics::{
    energy_drift, hamilton_vector_field, integrate, quadratic_flow_oracle, symbolic_equations, symplecticity_residual,
    EnergyDrift, EquationRecord, EquationSet, GradientMode, HamiltonField, HamiltonianSystem, IntegratorConfig, Method,
    PhasePoint, Trajectory,
};
pub use error::{DynamicsError, Error, EvalError, ParseError, StructureError};
pub use expr::{parse, Expr};
pub use forms::{
    apply_dual_structure, canonical_one_form, check_nondegenerate, exterior_derivative, interior_product,
    structure_form_identity, symplectic_form_of_structure, ConstantTwoForm, CovectorValue, LinearOneForm, Rational,
};
pub use structure::{
    anticommutator_table, build_structure, check_orthogonality, check_square_minus_identity, compose,
    dual_matches_primal, fundamental_two_form, Metric, Sign, SignedPermutationTensor, StructureFamily, Variant,
    VerificationRecord,
};

/// Number of coordinate blocks; the manifold dimension is `BLOCKS * n`.
pub const BLOCKS: usize = 8;

/// Number of structure tensors in the family.
pub const STRUCTURES: usize = 6;
