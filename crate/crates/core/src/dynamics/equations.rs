use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, StructureError};
use crate::forms::{symplectic_form_of_structure, Rational};
use crate::structure::Sign;
use crate::{BLOCKS, STRUCTURES};

const REFERENCE_EQUATIONS: &str = include_str!("../../fixtures/hamilton_equations.json");

/// `dx_{lhs·n+i}/dt = sign · ∂H/∂x_{rhs·n+i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, Sign, usize)", into = "(usize, Sign, usize)")]
pub struct EquationRecord {
    pub lhs: usize,
    pub sign: Sign,
    pub rhs: usize,
}

impl From<(usize, Sign, usize)> for EquationRecord {
    fn from((lhs, sign, rhs): (usize, Sign, usize)) -> Self {
        Self { lhs, sign, rhs }
    }
}

impl From<EquationRecord> for (usize, Sign, usize) {
    fn from(r: EquationRecord) -> Self {
        (r.lhs, r.sign, r.rhs)
    }
}

/// Hamilton equations for one structure, written per block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSet {
    pub k: usize,
    pub equations: Vec<EquationRecord>,
}

impl EquationSet {
    /// The shipped, hand-transcribed equation sets.
    pub fn reference_sets() -> &'static [EquationSet] {
        static SETS: OnceLock<Vec<EquationSet>> = OnceLock::new();
        SETS.get_or_init(|| serde_json::from_str(REFERENCE_EQUATIONS).expect("shipped equation sets parse"))
    }

    pub fn reference(k: usize) -> Option<&'static EquationSet> {
        Self::reference_sets().iter().find(|s| s.k == k)
    }

    /// Every block appears once on the left, and `lhs → rhs` is a bijection on blocks.
    pub fn is_block_bijection(&self) -> bool {
        let mut lhs = [false; BLOCKS];
        let mut rhs = [false; BLOCKS];
        self.equations.len() == BLOCKS
            && self.equations.iter().all(|r| {
                r.lhs < BLOCKS
                    && r.rhs < BLOCKS
                    && !std::mem::replace(&mut lhs[r.lhs], true)
                    && !std::mem::replace(&mut rhs[r.rhs], true)
            })
    }

    pub fn record(&self, lhs: usize) -> Option<&EquationRecord> {
        self.equations.iter().find(|r| r.lhs == lhs)
    }
}

/// Reads the equation set of `J_k` off the rows of `Φ_{J_k*}` at `n = 1`.
pub fn symbolic_equations(k: usize) -> Result<EquationSet, DynamicsError> {
    if !(1..=STRUCTURES).contains(&k) {
        return Err(StructureError::StructureIndex(k).into());
    }
    let omega = symplectic_form_of_structure(k, 1)?;
    let equations = (0..BLOCKS)
        .map(|b| {
            let nonzero: Vec<_> = (0..BLOCKS).filter(|&c| !omega.get(b, c).is_zero()).collect();
            match nonzero[..] {
                [c] if omega.get(b, c) == Rational::one() => Ok(EquationRecord { lhs: b, sign: Sign::Plus, rhs: c }),
                [c] if omega.get(b, c) == -Rational::one() => Ok(EquationRecord { lhs: b, sign: Sign::Minus, rhs: c }),
                _ => {
                    Err(DynamicsError::Precondition(format!("row {b} of the form for J{k} is not a single unit entry")))
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EquationSet { k, equations })
}
