//! Shared workloads for the benchmarks.

use cliffmech_core::{
    parse, symplectic_form_of_structure, ConstantTwoForm, GradientMode, HamiltonianSystem, PhasePoint, BLOCKS,
};

/// `½ Σ x_a² + ¼ Σ x_a⁴` over all `8n` coordinates.
pub fn anharmonic_source(n: usize) -> String {
    let dim = BLOCKS * n;
    let quad: Vec<_> = (0..dim).map(|a| format!("x{a}^2")).collect();
    let quart: Vec<_> = (0..dim).map(|a| format!("x{a}^4")).collect();
    format!("0.5*({}) + 0.25*({})", quad.join("+"), quart.join("+"))
}

pub struct Workload {
    pub system: HamiltonianSystem,
    pub omega: ConstantTwoForm,
    pub start: PhasePoint,
}

/// An anharmonic system under `Φ_{J_k*}` with a fixed, nonsymmetric start point.
pub fn workload(k: usize, n: usize, mode: GradientMode) -> Workload {
    let dim = BLOCKS * n;
    let expr = parse(&anharmonic_source(n), dim).expect("generated source parses");
    Workload {
        system: HamiltonianSystem::from_expr(expr, dim, mode).expect("system builds"),
        omega: symplectic_form_of_structure(k, n).expect("k and n are valid"),
        start: PhasePoint::at_zero((0..dim).map(|a| ((a * 37 % 11) as f64 - 5.0) / 10.0).collect()),
    }
}
