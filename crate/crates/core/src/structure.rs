//! The six structure tensors `J_1..J_6` and their duals, held as exact
//! signed permutations of the `8n` coordinate (or covector) basis.
//!
//! The block tables live in `fixtures/structure_tables.json`; every tensor is
//! built by replicating a table's block map across the `n` coordinates of each
//! block. Nothing in this module touches floating point.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::StructureError;
use crate::exact::{self, Rational};
use crate::forms::ConstantTwoForm;
use crate::{BLOCKS, STRUCTURES};

const REFERENCE_TABLES: &str = include_str!("../fixtures/structure_tables.json");

/// Whether a tensor acts on tangent vectors or on covectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Primal,
    Dual,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Primal => "primal",
            Variant::Dual => "dual",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply<T: std::ops::Neg<Output = T>>(self, v: T) -> T {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl TryFrom<i64> for Sign {
    type Error = String;
    fn try_from(v: i64) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.value()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `sign * J_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub sign: Sign,
    pub k: usize,
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}J{}", self.sign, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Unlabeled,
    Structure(usize),
    /// A product; records `±J_k` when the product equals one exactly.
    Composite(Option<Identification>),
}

/// A linear map sending each basis element `e_a` to `sign[a] * e_{target[a]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedPermutationTensor {
    n: usize,
    variant: Variant,
    target: Vec<usize>,
    sign: Vec<Sign>,
    label: Label,
}

impl SignedPermutationTensor {
    pub fn new(
        n: usize,
        variant: Variant,
        target: Vec<usize>,
        sign: Vec<Sign>,
        label: Label,
    ) -> Result<Self, StructureError> {
        if n == 0 {
            return Err(StructureError::BlockSize);
        }
        let dim = BLOCKS * n;
        for len in [target.len(), sign.len()] {
            if len != dim {
                return Err(StructureError::Dimension { expected: dim, actual: len });
            }
        }
        let mut seen = vec![false; dim];
        for &t in &target {
            if t >= dim || seen[t] {
                return Err(StructureError::NotBijection(dim));
            }
            seen[t] = true;
        }
        if let Label::Structure(k) = label {
            if !(1..=STRUCTURES).contains(&k) {
                return Err(StructureError::StructureIndex(k));
            }
            for a in 0..dim {
                let (b, i) = (a / n, a % n);
                let (base_target, base_sign) = (target[b * n], sign[b * n]);
                if target[a] != base_target + i || sign[a] != base_sign || base_target % n != 0 {
                    return Err(StructureError::NotBlockHomogeneous { k, index: a });
                }
            }
        }
        Ok(Self { n, variant, target, sign, label })
    }

    /// Builds from raw integer signs, rejecting anything other than `±1`.
    pub fn from_raw(
        n: usize,
        variant: Variant,
        target: Vec<usize>,
        signs: &[i64],
        label: Label,
    ) -> Result<Self, StructureError> {
        let sign = signs
            .iter()
            .enumerate()
            .map(|(index, &value)| Sign::try_from(value).map_err(|_| StructureError::InvalidSign { index, value }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, variant, target, sign, label)
    }

    pub fn identity(n: usize, variant: Variant) -> Result<Self, StructureError> {
        let dim = BLOCKS * n;
        Self::new(n, variant, (0..dim).collect(), vec![Sign::Plus; dim], Label::Unlabeled)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn targets(&self) -> &[usize] {
        &self.target
    }

    pub fn signs(&self) -> &[Sign] {
        &self.sign
    }

    /// Image of basis element `a` as `(index, sign)`.
    pub fn image(&self, a: usize) -> (usize, Sign) {
        (self.target[a], self.sign[a])
    }

    /// True when both tensors act identically (labels are ignored).
    pub fn same_action(&self, other: &Self) -> bool {
        self.n == other.n && self.variant == other.variant && self.target == other.target && self.sign == other.sign
    }

    pub fn apply<T>(&self, v: &[T]) -> Result<Vec<T>, StructureError>
    where
        T: Copy + Zero + std::ops::Neg<Output = T>,
    {
        if v.len() != self.dim() {
            return Err(StructureError::Dimension { expected: self.dim(), actual: v.len() });
        }
        let mut out = vec![T::zero(); v.len()];
        for (a, &x) in v.iter().enumerate() {
            out[self.target[a]] = self.sign[a].apply(x);
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        Self { sign: self.sign.iter().map(|&s| -s).collect(), label: Label::Composite(None), ..self.clone() }
    }

    /// Dense matrix with `M[target[a]][a] = sign[a]`, so that `M e_a` is the image of `e_a`.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let dim = self.dim();
        let mut m = vec![vec![0; dim]; dim];
        for a in 0..dim {
            m[self.target[a]][a] = self.sign[a].value();
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(a, &t)| a == t) && self.sign.iter().all(|&s| s == Sign::Plus)
    }

    pub fn is_minus_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(a, &t)| a == t) && self.sign.iter().all(|&s| s == Sign::Minus)
    }

    /// Block map `(target block, sign)` read off the first coordinate of each block.
    pub fn block_map(&self) -> Vec<(usize, Sign)> {
        (0..BLOCKS).map(|b| (self.target[b * self.n] / self.n, self.sign[b * self.n])).collect()
    }
}

/// One structure table: the image of each of the eight blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTable {
    pub k: usize,
    pub variant: Variant,
    pub entries: Vec<(usize, Sign)>,
}

/// The twelve block tables (six primal, six dual).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTables {
    tables: Vec<BlockTable>,
}

impl StructureTables {
    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        let tables: Vec<BlockTable> = serde_json::from_str(text).map_err(|e| StructureError::Table(e.to_string()))?;
        for t in &tables {
            if !(1..=STRUCTURES).contains(&t.k) {
                return Err(StructureError::StructureIndex(t.k));
            }
            if t.entries.len() != BLOCKS || t.entries.iter().any(|&(b, _)| b >= BLOCKS) {
                return Err(StructureError::Table(format!("J{} ({}) needs 8 block entries", t.k, t.variant)));
            }
        }
        for variant in [Variant::Primal, Variant::Dual] {
            for k in 1..=STRUCTURES {
                let count = tables.iter().filter(|t| t.k == k && t.variant == variant).count();
                if count != 1 {
                    return Err(StructureError::Table(format!(
                        "expected exactly one table for J{k} ({variant}), found {count}"
                    )));
                }
            }
        }
        Ok(Self { tables })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.tables).expect("tables serialize")
    }

    /// The shipped tables.
    pub fn reference() -> &'static StructureTables {
        static TABLES: OnceLock<StructureTables> = OnceLock::new();
        TABLES.get_or_init(|| StructureTables::from_json(REFERENCE_TABLES).expect("shipped structure tables are valid"))
    }

    pub fn table(&self, k: usize, variant: Variant) -> Result<&BlockTable, StructureError> {
        if !(1..=STRUCTURES).contains(&k) {
            return Err(StructureError::StructureIndex(k));
        }
        self.tables.iter().find(|t| t.k == k && t.variant == variant).ok_or(StructureError::MissingTable { k, variant })
    }

    /// Returns a copy with one block entry replaced.
    pub fn with_entry(
        &self,
        k: usize,
        variant: Variant,
        block: usize,
        entry: (usize, Sign),
    ) -> Result<Self, StructureError> {
        let mut out = self.clone();
        let t = out
            .tables
            .iter_mut()
            .find(|t| t.k == k && t.variant == variant)
            .ok_or(StructureError::MissingTable { k, variant })?;
        *t.entries.get_mut(block).ok_or(StructureError::Dimension { expected: BLOCKS, actual: block })? = entry;
        Ok(out)
    }

    pub fn build(&self, k: usize, n: usize, variant: Variant) -> Result<SignedPermutationTensor, StructureError> {
        if n == 0 {
            return Err(StructureError::BlockSize);
        }
        let table = self.table(k, variant)?;
        let dim = BLOCKS * n;
        let mut target = Vec::with_capacity(dim);
        let mut sign = Vec::with_capacity(dim);
        for &(tb, s) in &table.entries {
            for i in 0..n {
                target.push(tb * n + i);
                sign.push(s);
            }
        }
        SignedPermutationTensor::new(n, variant, target, sign, Label::Structure(k))
    }
}

/// Builds `J_k` (primal) or `J_k*` (dual) for block size `n` from the shipped tables.
pub fn build_structure(k: usize, n: usize, variant: Variant) -> Result<SignedPermutationTensor, StructureError> {
    StructureTables::reference().build(k, n, variant)
}

/// The six primal structures sharing one block size.
#[derive(Debug, Clone)]
pub struct StructureFamily {
    n: usize,
    members: Vec<SignedPermutationTensor>,
}

impl StructureFamily {
    pub fn new(n: usize) -> Result<Self, StructureError> {
        let members =
            (1..=STRUCTURES).map(|k| build_structure(k, n, Variant::Primal)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SignedPermutationTensor] {
        &self.members
    }

    /// `J_k`, `k` in `1..=6`.
    pub fn member(&self, k: usize) -> Result<&SignedPermutationTensor, StructureError> {
        k.checked_sub(1).and_then(|i| self.members.get(i)).ok_or(StructureError::StructureIndex(k))
    }

    pub fn dual(&self, k: usize) -> Result<SignedPermutationTensor, StructureError> {
        build_structure(k, self.n, Variant::Dual)
    }
}

fn identify(t: &SignedPermutationTensor) -> Option<Identification> {
    let tables = StructureTables::reference();
    (1..=STRUCTURES).find_map(|k| {
        let j = tables.build(k, t.n, t.variant).ok()?;
        if j.target != t.target {
            return None;
        }
        if j.sign == t.sign {
            Some(Identification { sign: Sign::Plus, k })
        } else if j.sign.iter().zip(&t.sign).all(|(a, b)| *a == -*b) {
            Some(Identification { sign: Sign::Minus, k })
        } else {
            None
        }
    })
}

/// `A ∘ B`: apply `B`, then `A`.
pub fn compose(
    a: &SignedPermutationTensor,
    b: &SignedPermutationTensor,
) -> Result<SignedPermutationTensor, StructureError> {
    if a.dim() != b.dim() {
        return Err(StructureError::Dimension { expected: a.dim(), actual: b.dim() });
    }
    if a.variant != b.variant {
        return Err(StructureError::Variant { expected: a.variant, actual: b.variant });
    }
    let (target, sign): (Vec<_>, Vec<_>) = (0..b.dim())
        .map(|i| {
            let (mid, s1) = b.image(i);
            let (end, s2) = a.image(mid);
            (end, s1 * s2)
        })
        .unzip();
    let mut out = SignedPermutationTensor::new(a.n, a.variant, target, sign, Label::Composite(None))?;
    out.label = Label::Composite(identify(&out));
    Ok(out)
}

/// A single failing input of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Basis index (or index pair) the check was evaluated on.
    pub input: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationRecord {
    pub fn new(check: impl Into<String>, counterexamples: Vec<Counterexample>) -> Self {
        Self { check: check.into(), passed: counterexamples.is_empty(), counterexamples }
    }
}

fn basis(sign: Sign, index: usize) -> String {
    format!("{sign}e{index}")
}

fn tensor_name(j: &SignedPermutationTensor) -> String {
    let star = if j.variant == Variant::Dual { "*" } else { "" };
    match j.label {
        Label::Structure(k) => format!("J{k}{star}"),
        Label::Composite(Some(id)) => format!("({id}{star})"),
        Label::Composite(None) => format!("composite{star}"),
        Label::Unlabeled => format!("tensor{star}"),
    }
}

/// Checks `J² = −I` on every basis element.
pub fn check_square_minus_identity(j: &SignedPermutationTensor) -> VerificationRecord {
    let counterexamples = (0..j.dim())
        .filter_map(|a| {
            let (mid, s1) = j.image(a);
            let (end, s2) = j.image(mid);
            let actual = (end, s1 * s2);
            (actual != (a, Sign::Minus)).then(|| Counterexample {
                input: vec![a],
                expected: basis(Sign::Minus, a),
                actual: basis(actual.1, actual.0),
            })
        })
        .collect();
    VerificationRecord::new(format!("{}^2 = -I", tensor_name(j)), counterexamples)
}

/// A Riemannian metric on the `8n`-dimensional coordinate space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    dim: usize,
    coeffs: Vec<Rational>,
}

impl Metric {
    pub fn identity(dim: usize) -> Self {
        Self { dim, coeffs: exact::identity(dim) }
    }

    /// Row-major `dim × dim` coefficients; must be symmetric positive-definite.
    pub fn new(dim: usize, coeffs: Vec<Rational>) -> Result<Self, StructureError> {
        if coeffs.len() != dim * dim {
            return Err(StructureError::Dimension { expected: dim * dim, actual: coeffs.len() });
        }
        if !exact::is_symmetric(&coeffs, dim) || !exact::is_positive_definite(&coeffs, dim) {
            return Err(StructureError::InvalidMetric);
        }
        Ok(Self { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> Rational {
        self.coeffs[a * self.dim + b]
    }
}

/// Checks `g(J e_a, J e_b) = g(e_a, e_b)` for all basis pairs.
pub fn check_orthogonality(j: &SignedPermutationTensor, g: &Metric) -> Result<VerificationRecord, StructureError> {
    if g.dim != j.dim() {
        return Err(StructureError::Dimension { expected: j.dim(), actual: g.dim });
    }
    let mut counterexamples = Vec::new();
    for a in 0..j.dim() {
        let (ta, sa) = j.image(a);
        for b in 0..j.dim() {
            let (tb, sb) = j.image(b);
            let actual = (sa * sb).apply(g.get(ta, tb));
            let expected = g.get(a, b);
            if actual != expected {
                counterexamples.push(Counterexample {
                    input: vec![a, b],
                    expected: expected.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
    }
    Ok(VerificationRecord::new(format!("{} orthogonal", tensor_name(j)), counterexamples))
}

/// Compares the dual table of `J_k` with its primal table, index by index.
pub fn dual_matches_primal_in(
    tables: &StructureTables,
    k: usize,
    n: usize,
) -> Result<VerificationRecord, StructureError> {
    let primal = tables.build(k, n, Variant::Primal)?;
    let dual = tables.build(k, n, Variant::Dual)?;
    let counterexamples = (0..primal.dim())
        .filter(|&a| primal.image(a) != dual.image(a))
        .map(|a| {
            let (pt, ps) = primal.image(a);
            let (dt, ds) = dual.image(a);
            Counterexample { input: vec![a], expected: basis(ps, pt), actual: basis(ds, dt) }
        })
        .collect();
    Ok(VerificationRecord::new(format!("J{k}* table = J{k} table"), counterexamples))
}

pub fn dual_matches_primal(k: usize, n: usize) -> Result<VerificationRecord, StructureError> {
    dual_matches_primal_in(StructureTables::reference(), k, n)
}

/// `Φ(X, Y) = g(J X, Y)` as a constant 2-form: `Ω[a][b] = g(J e_a, e_b)`.
pub fn fundamental_two_form(j: &SignedPermutationTensor, g: &Metric) -> Result<ConstantTwoForm, StructureError> {
    if j.variant != Variant::Primal {
        return Err(StructureError::Variant { expected: Variant::Primal, actual: j.variant });
    }
    if g.dim != j.dim() {
        return Err(StructureError::Dimension { expected: j.dim(), actual: g.dim });
    }
    let dim = j.dim();
    let mut omega = vec![Rational::zero(); dim * dim];
    for a in 0..dim {
        let (ta, sa) = j.image(a);
        for b in 0..dim {
            omega[a * dim + b] = sa.apply(g.get(ta, b));
        }
    }
    ConstantTwoForm::new(j.n(), omega)
}

/// What a product of two structures turned out to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Structure { sign: Sign, k: usize },
    Identity { sign: Sign },
    Unidentified,
}

impl Classification {
    fn of(t: &SignedPermutationTensor) -> Self {
        if t.is_identity() {
            Classification::Identity { sign: Sign::Plus }
        } else if t.is_minus_identity() {
            Classification::Identity { sign: Sign::Minus }
        } else {
            match t.label {
                Label::Composite(Some(id)) => Classification::Structure { sign: id.sign, k: id.k },
                _ => match identify(t) {
                    Some(id) => Classification::Structure { sign: id.sign, k: id.k },
                    None => Classification::Unidentified,
                },
            }
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Structure { sign, k } => write!(f, "{sign}J{k}"),
            Classification::Identity { sign } => write!(f, "{sign}I"),
            Classification::Unidentified => f.write_str("none"),
        }
    }
}

/// `J_i J_j + J_j J_i` for one unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnticommutatorEntry {
    pub i: usize,
    pub j: usize,
    /// Nonzero entries `[row, col, value]` of the integer matrix of the anticommutator.
    pub nonzero: Vec<[i64; 3]>,
    /// Whether the anticommutator equals `−2 δ_ij I`.
    pub clifford_relation_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub product: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnticommutatorReport {
    pub n: usize,
    pub anticommutators: Vec<AnticommutatorEntry>,
    /// `J_i J_j` for all 36 ordered pairs.
    pub products: Vec<ProductEntry>,
}

impl AnticommutatorReport {
    pub fn entry(&self, i: usize, j: usize) -> Option<&AnticommutatorEntry> {
        let (i, j) = (i.min(j), i.max(j));
        self.anticommutators.iter().find(|e| e.i == i && e.j == j)
    }

    pub fn product(&self, i: usize, j: usize) -> Option<Classification> {
        self.products.iter().find(|p| p.i == i && p.j == j).map(|p| p.product)
    }
}

/// Computes every pairwise anticommutator and product of the family. Reports only.
pub fn anticommutator_table(family: &StructureFamily) -> AnticommutatorReport {
    let members = family.members();
    let dim = BLOCKS * family.n();
    let mut products = Vec::with_capacity(STRUCTURES * STRUCTURES);
    let mut composites = vec![];
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            let ab = compose(a, b).expect("family members share n and variant");
            products.push(ProductEntry { i: i + 1, j: j + 1, product: Classification::of(&ab) });
            composites.push(ab);
        }
    }
    let mut anticommutators = Vec::new();
    for i in 0..STRUCTURES {
        for j in i..STRUCTURES {
            let ij = composites[i * STRUCTURES + j].matrix();
            let ji = composites[j * STRUCTURES + i].matrix();
            let mut nonzero = Vec::new();
            let mut holds = true;
            for r in 0..dim {
                for c in 0..dim {
                    let v = ij[r][c] + ji[r][c];
                    let want = if i == j && r == c { -2 } else { 0 };
                    holds &= v == want;
                    if v != 0 {
                        nonzero.push([r as i64, c as i64, v]);
                    }
                }
            }
            anticommutators.push(AnticommutatorEntry { i: i + 1, j: j + 1, nonzero, clifford_relation_holds: holds });
        }
    }
    AnticommutatorReport { n: family.n(), anticommutators, products }
}
