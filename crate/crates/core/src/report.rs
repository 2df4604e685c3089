//! Human-readable renderings of derivations and of the product table.
//!
//! Coordinates are written per block, the way hand derivations write them:
//! block `b` becomes `x_{i}`, `x_{n+i}`, `x_{2n+i}`, …, `x_{7n+i}`, with an
//! implicit sum over `i = 1..n`.

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::{symbolic_equations, EquationSet};
use crate::error::{DynamicsError, StructureError};
use crate::forms::{liouville_form, symplectic_form_of_structure};
use crate::structure::{AnticommutatorReport, Sign};
use crate::{BLOCKS, STRUCTURES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Latex,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(Self::Markdown),
            "latex" | "tex" => Ok(Self::Latex),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown report format '{other}'")),
        }
    }
}

/// `x_{i}`, `x_{n+i}`, `x_{2n+i}`, …
pub fn block_coordinate(b: usize) -> String {
    match b {
        0 => "x_{i}".into(),
        1 => "x_{n+i}".into(),
        _ => format!("x_{{{b}n+i}}"),
    }
}

/// Block-level data of one derivation. Every coefficient of `λ` is `±½`,
/// every coefficient of `Φ` is `+1` in the stored orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub k: usize,
    pub n: usize,
    /// `(a, b, sign)`: `sign · ½ x_a dx_b`.
    pub liouville: Vec<(usize, usize, Sign)>,
    /// `(p, q)`: `dx_p ∧ dx_q`.
    pub two_form: Vec<(usize, usize)>,
    pub equations: EquationSet,
}

impl Derivation {
    pub fn compute(k: usize, n: usize) -> Result<Self, DynamicsError> {
        if n == 0 {
            return Err(StructureError::BlockSize.into());
        }
        let half = crate::forms::Rational::new(1, 2);
        let liouville = liouville_form(k, 1)?
            .linear_terms()
            .into_iter()
            .map(|(a, b, v)| {
                let sign = if v == half {
                    Sign::Plus
                } else if v == -half {
                    Sign::Minus
                } else {
                    return Err(DynamicsError::Precondition(format!("unexpected coefficient {v} in λ")));
                };
                Ok((a, b, sign))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let phi = symplectic_form_of_structure(k, 1)?;
        let mut two_form = Vec::with_capacity(BLOCKS / 2);
        for (p, q, v) in phi.wedge_terms() {
            if v != crate::forms::Rational::from_integer(1) {
                return Err(DynamicsError::Precondition(format!("unexpected coefficient {v} in Φ")));
            }
            two_form.push((p, q));
        }
        Ok(Self { k, n, liouville, two_form, equations: symbolic_equations(k)? })
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Markdown => self.markdown(),
            ReportFormat::Latex => self.latex(),
            ReportFormat::Json => serde_json::to_string_pretty(self).expect("derivation serializes") + "\n",
        }
    }

    fn signed_sum<T>(items: &[T], term: impl Fn(&T) -> (Sign, String)) -> String {
        let mut out = String::new();
        for (idx, item) in items.iter().enumerate() {
            let (sign, body) = term(item);
            match (idx, sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => out.push('-'),
                (_, Sign::Plus) => out.push_str(" + "),
                (_, Sign::Minus) => out.push_str(" - "),
            }
            out.push_str(&body);
        }
        out
    }

    fn markdown(&self) -> String {
        let k = self.k;
        let omega = Self::signed_sum(&(0..BLOCKS).collect::<Vec<_>>(), |&b| {
            let x = block_coordinate(b);
            (Sign::Plus, format!("{x} d{x}"))
        });
        let lambda = Self::signed_sum(&self.liouville, |&(a, b, s)| {
            (s, format!("{} d{}", block_coordinate(a), block_coordinate(b)))
        });
        let phi = Self::signed_sum(&self.two_form, |&(p, q)| {
            (Sign::Plus, format!("d{} ∧ d{}", block_coordinate(p), block_coordinate(q)))
        });
        let mut out = String::new();
        let _ = writeln!(out, "# Hamilton mechanics for J{k}* (n = {})\n", self.n);
        let _ = writeln!(out, "Block notation, summed over i = 1..{}.\n", self.n);
        let _ = writeln!(out, "## 1-form\n\nω = ½({omega})\n");
        let _ = writeln!(out, "## Liouville form\n\nλ = J{k}*(ω) = ½({lambda})\n");
        let _ = writeln!(out, "## Symplectic form\n\nΦ = -dλ = {phi}\n");
        let _ = writeln!(out, "dΦ = 0: every coefficient of Φ is constant.\n");
        let _ = writeln!(out, "## Hamilton equations\n");
        for r in &self.equations.equations {
            let sign = if r.sign == Sign::Minus { "-" } else { "" };
            let _ = writeln!(out, "- d{}/dt = {sign}∂H/∂{}", block_coordinate(r.lhs), block_coordinate(r.rhs));
        }
        out
    }

    fn latex(&self) -> String {
        let k = self.k;
        let omega = Self::signed_sum(&(0..BLOCKS).collect::<Vec<_>>(), |&b| {
            let x = block_coordinate(b);
            (Sign::Plus, format!("{x}\\,d{x}"))
        });
        let lambda = Self::signed_sum(&self.liouville, |&(a, b, s)| {
            (s, format!("{}\\,d{}", block_coordinate(a), block_coordinate(b)))
        });
        let phi = Self::signed_sum(&self.two_form, |&(p, q)| {
            (Sign::Plus, format!("d{} \\wedge d{}", block_coordinate(p), block_coordinate(q)))
        });
        let mut out = String::new();
        let _ = writeln!(out, "% J_{k}^*, n = {}, summed over i = 1..{}", self.n, self.n);
        let _ = writeln!(out, "\\begin{{align*}}");
        let _ = writeln!(out, "\\omega &= \\frac{{1}}{{2}}({omega}) \\\\");
        let _ = writeln!(out, "\\lambda_{{J_{k}^*}} &= J_{k}^*(\\omega) = \\frac{{1}}{{2}}({lambda}) \\\\");
        let _ = writeln!(out, "\\Phi_{{J_{k}^*}} &= -d\\lambda_{{J_{k}^*}} = {phi} \\\\");
        let _ = writeln!(out, "d\\Phi_{{J_{k}^*}} &= 0");
        let _ = writeln!(out, "\\end{{align*}}");
        let _ = writeln!(out, "\\begin{{align*}}");
        let last = self.equations.equations.len().saturating_sub(1);
        for (idx, r) in self.equations.equations.iter().enumerate() {
            let sign = if r.sign == Sign::Minus { "-" } else { "" };
            let end = if idx == last { "" } else { " \\\\" };
            let _ = writeln!(
                out,
                "\\frac{{d{}}}{{dt}} &= {sign}\\frac{{\\partial H}}{{\\partial {}}}{end}",
                block_coordinate(r.lhs),
                block_coordinate(r.rhs)
            );
        }
        let _ = writeln!(out, "\\end{{align*}}");
        out
    }
}

/// Cell text for the anticommutator of `J_i` and `J_j`, e.g. `-2I: holds`.
pub fn relation_cell(report: &AnticommutatorReport, i: usize, j: usize) -> Option<String> {
    let e = report.entry(i, j)?;
    let target = if i == j { "-2I" } else { "0" };
    Some(format!("{target}: {}", if e.clifford_relation_holds { "holds" } else { "fails" }))
}

/// Markdown with two 6×6 grids: the anticommutator relation and the product `J_i J_j`.
pub fn render_table_markdown(report: &AnticommutatorReport) -> String {
    let mut out = String::new();
    let header: String = (1..=STRUCTURES).map(|j| format!(" J{j} |")).collect();
    let rule: String = (0..STRUCTURES).map(|_| "---|").collect();
    let _ = writeln!(out, "# Structure products (n = {})\n", report.n);
    let _ = writeln!(out, "## J_i J_j + J_j J_i\n");
    let _ = writeln!(out, "| |{header}\n|---|{rule}");
    for i in 1..=STRUCTURES {
        let cells: String =
            (1..=STRUCTURES).map(|j| format!(" {} |", relation_cell(report, i, j).unwrap_or_default())).collect();
        let _ = writeln!(out, "| J{i} |{cells}");
    }
    let _ = writeln!(out, "\n## J_i J_j\n");
    let _ = writeln!(out, "| |{header}\n|---|{rule}");
    for i in 1..=STRUCTURES {
        let cells: String = (1..=STRUCTURES)
            .map(|j| format!(" {} |", report.product(i, j).map(|c| c.to_string()).unwrap_or_default()))
            .collect();
        let _ = writeln!(out, "| J{i} |{cells}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{anticommutator_table, StructureFamily};

    #[test]
    fn block_names() {
        let names: Vec<_> = (0..BLOCKS).map(block_coordinate).collect();
        assert_eq!(names[..3], ["x_{i}", "x_{n+i}", "x_{2n+i}"]);
        assert_eq!(names[7], "x_{7n+i}");
    }

    #[test]
    fn j4_derivation_markdown() {
        let text = Derivation::compute(4, 1).unwrap().render(ReportFormat::Markdown);
        assert!(text.contains(
            "λ = J4*(ω) = ½(x_{i} dx_{4n+i} - x_{n+i} dx_{2n+i} + x_{2n+i} dx_{n+i} - x_{3n+i} dx_{7n+i} \
             - x_{4n+i} dx_{i} + x_{5n+i} dx_{6n+i} - x_{6n+i} dx_{5n+i} + x_{7n+i} dx_{3n+i})"
        ));
        assert!(text.contains(
            "Φ = -dλ = dx_{n+i} ∧ dx_{2n+i} + dx_{3n+i} ∧ dx_{7n+i} + dx_{4n+i} ∧ dx_{i} + dx_{6n+i} ∧ dx_{5n+i}"
        ));
        assert!(text.contains("- dx_{i}/dt = -∂H/∂x_{4n+i}\n"));
        assert!(text.contains("- dx_{7n+i}/dt = -∂H/∂x_{3n+i}\n"));
    }

    #[test]
    fn j4_derivation_latex() {
        let text = Derivation::compute(4, 2).unwrap().render(ReportFormat::Latex);
        assert!(text.contains("\\frac{dx_{i}}{dt} &= -\\frac{\\partial H}{\\partial x_{4n+i}} \\\\"));
        assert!(text.contains("\\frac{dx_{4n+i}}{dt} &= \\frac{\\partial H}{\\partial x_{i}} \\\\"));
        assert_eq!(text.matches("\\frac{d").count(), 8);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Derivation::compute(9, 1).is_err());
        assert!(Derivation::compute(1, 0).is_err());
        assert!("pdf".parse::<ReportFormat>().is_err());
        assert_eq!("latex".parse::<ReportFormat>(), Ok(ReportFormat::Latex));
    }

    #[test]
    fn table_diagonal_holds() {
        let report = anticommutator_table(&StructureFamily::new(1).unwrap());
        let md = render_table_markdown(&report);
        for i in 1..=STRUCTURES {
            assert_eq!(relation_cell(&report, i, i).unwrap(), "-2I: holds");
        }
        assert_eq!(md.matches("-2I: holds").count(), STRUCTURES);
    }
}
