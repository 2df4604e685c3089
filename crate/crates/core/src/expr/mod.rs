//! Hamiltonian expressions over positional variables `x0 … x{8n−1}`.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := number | 'x' digits | func '(' expr ')' | '(' expr ')'
//! func    := 'sin' | 'cos' | 'exp' | 'sqrt'
//! ```
//!
//! Exponents are integer literals, so `-x0^2` is `-(x0^2)`.

mod diff;
mod parser;

use std::fmt;

use crate::error::{EvalError, EvalErrorKind};

pub use diff::{differentiate, gradient};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree. Constants are finite and non-negative; a negative value
/// is represented as `Neg(Const)`, which is exactly what the parser produces
/// for `-2`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    /// A constant in canonical form (see the type docs).
    pub fn constant(v: f64) -> Expr {
        if v < 0.0 {
            Expr::Unary(UnaryOp::Neg, Box::new(Expr::Const(-v)))
        } else {
            // also turns -0.0 into 0.0
            Expr::Const(v + 0.0)
        }
    }

    pub fn var(a: usize) -> Expr {
        Expr::Var(a)
    }

    /// Numeric value if this node is a (possibly negated) constant.
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Unary(UnaryOp::Neg, inner) => match **inner {
                Expr::Const(c) => Some(-c),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_const(&self, v: f64) -> bool {
        self.as_const() == Some(v)
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(a) => Some(*a),
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Binary(_, l, r) => match (l.max_var(), r.max_var()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, e) | Expr::Pow(e, _) => 1 + e.node_count(),
            Expr::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, EvalError> {
        let fail = |kind| EvalError { kind, subtree: self.to_string() };
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(a) => *x.get(*a).ok_or_else(|| fail(EvalErrorKind::VariableOutOfRange))?,
            Expr::Unary(op, e) => {
                let u = e.evaluate(x)?;
                match op {
                    UnaryOp::Neg => -u,
                    UnaryOp::Sin => u.sin(),
                    UnaryOp::Cos => u.cos(),
                    UnaryOp::Exp => u.exp(),
                    UnaryOp::Sqrt if u < 0.0 => return Err(fail(EvalErrorKind::Domain)),
                    UnaryOp::Sqrt => u.sqrt(),
                }
            }
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.evaluate(x)?, r.evaluate(x)?);
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div if b == 0.0 => return Err(fail(EvalErrorKind::DivisionByZero)),
                    BinaryOp::Div => a / b,
                }
            }
            Expr::Pow(e, k) => {
                let u = e.evaluate(x)?;
                if u == 0.0 && *k < 0 {
                    return Err(fail(EvalErrorKind::DivisionByZero));
                }
                u.powi(*k)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail(EvalErrorKind::NonFinite))
        }
    }

    /// Smallest distance to a singularity at `x`: the minimum of `|denominator|`
    /// over divisions and negative powers, and of the argument of every `sqrt`.
    /// `None` when the expression has no such nodes or cannot be evaluated.
    pub fn singularity_distance(&self, x: &[f64]) -> Option<f64> {
        let own = match self {
            Expr::Binary(BinaryOp::Div, _, r) => Some(r.evaluate(x).ok()?.abs()),
            Expr::Pow(e, k) if *k < 0 => Some(e.evaluate(x).ok()?.abs()),
            Expr::Unary(UnaryOp::Sqrt, e) => Some(e.evaluate(x).ok()?),
            _ => None,
        };
        let children = match self {
            Expr::Const(_) | Expr::Var(_) => None,
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.singularity_distance(x),
            Expr::Binary(_, l, r) => match (l.singularity_distance(x), r.singularity_distance(x)) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        };
        match (own, children) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn fmt_node(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(a) => write!(f, "x{a}"),
            Expr::Unary(UnaryOp::Neg, e) => {
                if !top {
                    f.write_str("(")?;
                }
                f.write_str("-")?;
                e.fmt_node(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Expr::Unary(op, e) => {
                write!(f, "{}(", op.name())?;
                e.fmt_node(f, true)?;
                f.write_str(")")
            }
            Expr::Binary(op, l, r) => {
                if !top {
                    f.write_str("(")?;
                }
                l.fmt_node(f, false)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_node(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Expr::Pow(e, k) => {
                if matches!(**e, Expr::Pow(..)) {
                    f.write_str("(")?;
                    e.fmt_node(f, true)?;
                    f.write_str(")")?;
                } else {
                    e.fmt_node(f, false)?;
                }
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_node(f, true)
    }
}

fn fold(v: f64) -> Option<Expr> {
    v.is_finite().then(|| Expr::constant(v))
}

// Smart constructors: constant folding plus the 0/1 identities.

pub fn neg(e: Expr) -> Expr {
    if let Some(c) = e.as_const() {
        return Expr::constant(-c);
    }
    match e {
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        e => Expr::Unary(UnaryOp::Neg, Box::new(e)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| Expr::Binary(BinaryOp::Add, a.into(), b.into())),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Binary(BinaryOp::Add, a.into(), b.into()),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| Expr::Binary(BinaryOp::Sub, a.into(), b.into())),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Binary(BinaryOp::Sub, a.into(), b.into()),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| Expr::Binary(BinaryOp::Mul, a.into(), b.into())),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        (None, Some(_)) => mul(b, a),
        (Some(x), None) => match b {
            // c1 * (c2 * e) folds to (c1 c2) * e
            Expr::Binary(BinaryOp::Mul, ref inner_c, ref inner_e) if inner_c.as_const().is_some() => {
                match fold(x * inner_c.as_const().unwrap_or(1.0)) {
                    Some(c) => mul(c, (**inner_e).clone()),
                    None => Expr::Binary(BinaryOp::Mul, a.into(), b.into()),
                }
            }
            b => Expr::Binary(BinaryOp::Mul, a.into(), b.into()),
        },
        (None, None) => Expr::Binary(BinaryOp::Mul, a.into(), b.into()),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if y != 0.0 => {
            fold(x / y).unwrap_or_else(|| Expr::Binary(BinaryOp::Div, a.into(), b.into()))
        }
        (Some(0.0), _) => Expr::Const(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Binary(BinaryOp::Div, a.into(), b.into()),
    }
}

pub fn pow(e: Expr, k: i32) -> Expr {
    match k {
        0 => Expr::Const(1.0),
        1 => e,
        _ => match e.as_const() {
            Some(c) if !(c == 0.0 && k < 0) => fold(c.powi(k)).unwrap_or_else(|| Expr::Pow(e.into(), k)),
            _ => Expr::Pow(e.into(), k),
        },
    }
}

pub fn unary(op: UnaryOp, e: Expr) -> Expr {
    if op == UnaryOp::Neg {
        return neg(e);
    }
    if let Some(c) = e.as_const() {
        let v = match op {
            UnaryOp::Sin => Some(c.sin()),
            UnaryOp::Cos => Some(c.cos()),
            UnaryOp::Exp => Some(c.exp()),
            UnaryOp::Sqrt => (c >= 0.0).then(|| c.sqrt()),
            UnaryOp::Neg => unreachable!(),
        };
        if let Some(folded) = v.and_then(fold) {
            return folded;
        }
    }
    Expr::Unary(op, Box::new(e))
}
