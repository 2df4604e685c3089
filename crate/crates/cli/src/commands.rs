use std::io::Write;
use std::path::{Path, PathBuf};

use cliffmech_core::dynamics::Diagnostics;
use cliffmech_core::report::{render_table_markdown, Derivation, ReportFormat};
use cliffmech_core::structure::{check_orthogonality, AnticommutatorReport, Counterexample, Metric};
use cliffmech_core::{
    anticommutator_table, build_structure, check_nondegenerate, check_square_minus_identity, dual_matches_primal,
    energy_drift, integrate, parse, structure_form_identity, symplectic_form_of_structure, symplecticity_residual,
    GradientMode, HamiltonianSystem, PhasePoint, StructureError, StructureFamily, Trajectory, Variant,
    VerificationRecord, BLOCKS, STRUCTURES,
};
use serde::Serialize;

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;

pub fn dispatch(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        Some(Command::Verify) => verify(cfg),
        Some(Command::Derive) => derive(cfg),
        Some(Command::Simulate) => simulate(cfg),
        Some(Command::Table) => table(cfg),
        None => Err(CliError::Usage("no command given (verify, derive, simulate or table)".into())),
    }
}

fn emit(path: Option<&Path>, content: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn usage(e: StructureError) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Serialize)]
pub struct HardCheck {
    pub kind: &'static str,
    #[serde(flatten)]
    pub record: VerificationRecord,
}

#[derive(Debug, Serialize)]
pub struct StructureChecks {
    pub k: usize,
    pub checks: Vec<HardCheck>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub passed: bool,
    pub hard_checks: usize,
    pub failed: usize,
    pub structures: Vec<StructureChecks>,
    /// Informational only; never affects the exit code.
    pub anticommutators: AnticommutatorReport,
}

fn merged(check: String, records: impl IntoIterator<Item = VerificationRecord>) -> VerificationRecord {
    VerificationRecord::new(check, records.into_iter().flat_map(|r| r.counterexamples).collect())
}

fn structure_checks(k: usize, n: usize) -> Result<StructureChecks, StructureError> {
    let primal = build_structure(k, n, Variant::Primal)?;
    let dual = build_structure(k, n, Variant::Dual)?;
    let g = Metric::identity(primal.dim());
    let phi = symplectic_form_of_structure(k, n)?;
    let nondegenerate = if check_nondegenerate(&phi) {
        vec![]
    } else {
        vec![Counterexample { input: vec![], expected: "invertible".into(), actual: "singular".into() }]
    };
    Ok(StructureChecks {
        k,
        checks: vec![
            HardCheck {
                kind: "square",
                record: merged(
                    format!("J{k}^2 = -I, J{k}*^2 = -I"),
                    [check_square_minus_identity(&primal), check_square_minus_identity(&dual)],
                ),
            },
            HardCheck {
                kind: "orthogonality",
                record: merged(
                    format!("J{k}, J{k}* orthogonal"),
                    [check_orthogonality(&primal, &g)?, check_orthogonality(&dual, &g)?],
                ),
            },
            HardCheck { kind: "dual_match", record: dual_matches_primal(k, n)? },
            HardCheck { kind: "form_identity", record: structure_form_identity(k, n)? },
            HardCheck {
                kind: "nondegeneracy",
                record: VerificationRecord::new(format!("Phi_J{k}* nondegenerate"), nondegenerate),
            },
        ],
    })
}

pub fn verify_report(n: usize) -> Result<VerifyReport, StructureError> {
    let structures = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=STRUCTURES).map(|k| s.spawn(move || structure_checks(k, n))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread")).collect::<Result<Vec<_>, _>>()
    })?;
    let hard_checks = structures.iter().map(|s| s.checks.len()).sum();
    let failed = structures.iter().flat_map(|s| &s.checks).filter(|c| !c.record.passed).count();
    Ok(VerifyReport {
        n,
        passed: failed == 0,
        hard_checks,
        failed,
        structures,
        anticommutators: anticommutator_table(&StructureFamily::new(n)?),
    })
}

fn verify_markdown(report: &VerifyReport) -> String {
    let mut out = format!("# Verification (n = {})\n\n| k | kind | check | result |\n|---|---|---|---|\n", report.n);
    for s in &report.structures {
        for c in &s.checks {
            let result = if c.record.passed {
                "pass".to_string()
            } else {
                format!("FAIL ({} counterexamples)", c.record.counterexamples.len())
            };
            out.push_str(&format!("| {} | {} | {} | {result} |\n", s.k, c.kind, c.record.check));
        }
    }
    out.push_str(&format!(
        "\n{} of {} hard checks passed.\n\n",
        report.hard_checks - report.failed,
        report.hard_checks
    ));
    out.push_str(&render_table_markdown(&report.anticommutators));
    out
}

fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.n()?;
    let format = cfg.format_or(Format::Json, &[Format::Json, Format::Markdown])?;
    let report = verify_report(n).map_err(usage)?;
    let text = match format {
        Format::Markdown => verify_markdown(&report),
        _ => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    emit(cfg.output.as_deref(), text.as_bytes())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification { failed: report.failed, total: report.hard_checks })
    }
}

fn derive(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.n()?;
    let k = cfg.structure()?;
    let format = match cfg.format_or(Format::Markdown, &[Format::Markdown, Format::Latex, Format::Json])? {
        Format::Latex => ReportFormat::Latex,
        Format::Json => ReportFormat::Json,
        _ => ReportFormat::Markdown,
    };
    let derivation = Derivation::compute(k, n)?;
    emit(cfg.output.as_deref(), derivation.render(format).as_bytes())
}

fn table(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.n()?;
    let format = cfg.format_or(Format::Markdown, &[Format::Markdown, Format::Json])?;
    let report = anticommutator_table(&StructureFamily::new(n).map_err(usage)?);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        _ => render_table_markdown(&report),
    };
    emit(cfg.output.as_deref(), text.as_bytes())
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    diagnostics: &'a Diagnostics,
}

fn trajectory_json(traj: &Trajectory, diagnostics: &Diagnostics) -> String {
    let dim = traj.last().coords.len();
    let columns = std::iter::once("t".to_string())
        .chain((0..dim).map(|a| format!("x{a}")))
        .chain(std::iter::once("H".to_string()))
        .collect();
    let rows = traj
        .points()
        .iter()
        .zip(traj.energies())
        .map(|(p, h)| std::iter::once(p.time).chain(p.coords.iter().copied()).chain(std::iter::once(*h)).collect())
        .collect();
    serde_json::to_string_pretty(&TrajectoryJson { columns, rows, diagnostics }).expect("trajectory serializes") + "\n"
}

/// `run.csv` → `run.diagnostics.json`.
pub fn diagnostics_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "trajectory".into());
    output.with_file_name(format!("{stem}.diagnostics.json"))
}

pub fn simulate_run(cfg: &RunConfig) -> Result<(Trajectory, Diagnostics), CliError> {
    let n = cfg.n()?;
    let k = cfg.structure()?;
    let dim = BLOCKS * n;
    let ham = cfg.ham.as_deref().ok_or_else(|| CliError::Usage("--ham is required".into()))?;
    let x0 = cfg.x0.clone().ok_or_else(|| CliError::Usage("--x0 is required".into()))?;
    if x0.len() != dim {
        return Err(CliError::Usage(format!("--x0 has {} entries, expected 8n = {dim}", x0.len())));
    }
    let integrator = cfg.integrator();
    integrator.validate()?;
    let expr = parse(ham, dim)?;
    let sys = HamiltonianSystem::from_expr(expr, dim, cfg.gradient.unwrap_or(GradientMode::Symbolic))?;
    let omega = symplectic_form_of_structure(k, n).map_err(usage)?;
    let traj = integrate(&sys, &omega, &PhasePoint::at_zero(x0.clone()), &integrator)?;
    let drift = energy_drift(&traj);
    let one_step = cliffmech_core::IntegratorConfig { steps: 1, ..integrator };
    let residual = symplecticity_residual(&sys, &omega, &x0, &one_step)?;
    let diagnostics = Diagnostics {
        method: integrator.method.name().to_string(),
        dt: integrator.dt,
        steps: integrator.steps,
        max_energy_drift: drift.max_abs,
        drift_slope: drift.slope,
        symplecticity_residual: residual,
    };
    Ok((traj, diagnostics))
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let (traj, diagnostics) = simulate_run(cfg)?;
    let diag_json = serde_json::to_string_pretty(&diagnostics).expect("diagnostics serialize") + "\n";
    match format {
        Format::Json => emit(cfg.output.as_deref(), trajectory_json(&traj, &diagnostics).as_bytes())?,
        _ => {
            let mut csv = Vec::new();
            traj.write_csv(&mut csv).expect("writing to memory");
            emit(cfg.output.as_deref(), &csv)?;
        }
    }
    match (&cfg.diagnostics, &cfg.output) {
        (Some(path), _) => emit(Some(path), diag_json.as_bytes()),
        (None, Some(out)) => emit(Some(&diagnostics_path(out)), diag_json.as_bytes()),
        (None, None) => {
            eprint!("{diag_json}");
            Ok(())
        }
    }
}
