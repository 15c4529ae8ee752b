//! Command-line front end: spec files, suite runner and reports.

mod report;
mod specfile;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::hverify::{
    check_f_manifold, check_frobenius, check_h1, check_hm, lenard_frame, multiplication_from_chain,
    AxiomEntry, CheckReport, VerifyError, Witness,
};
use crate::wdvv::{
    default_chart, h2_spec_from_prepotential, initial_slice, pqr_from_prepotential,
    series_solve_pqr, taylor_in_first, wdvv_residual, Prepotential, WdvvError,
};

pub use report::SuiteReport;
pub use specfile::{load_spec, parse_spec, SpecError, SpecErrorKind, SpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    H1,
    Hm,
    F,
    Frobenius,
    Wdvv,
    Pipeline,
    Series,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::H1 => "h1",
            Suite::Hm => "hm",
            Suite::F => "f",
            Suite::Frobenius => "frobenius",
            Suite::Wdvv => "wdvv",
            Suite::Pipeline => "pipeline",
            Suite::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub suite: Suite,
    pub format: Format,
    pub m: Option<usize>,
    pub order: Option<usize>,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            suite,
            format: Format::Text,
            m: None,
            order: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {err}", path.display())]
    Spec { path: PathBuf, err: SpecError },
    #[error("suite `{suite}` is not applicable: {reason}")]
    Inapplicable { suite: &'static str, reason: String },
    #[error(transparent)]
    Wdvv(#[from] WdvvError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

fn inapplicable(suite: Suite, reason: impl Into<String>) -> CliError {
    CliError::Inapplicable {
        suite: suite.name(),
        reason: reason.into(),
    }
}

fn prepotential_of(spec: &SpecFile, suite: Suite) -> Result<Prepotential, CliError> {
    let f = spec
        .potential
        .clone()
        .ok_or_else(|| inapplicable(suite, "the spec has no potential F"))?;
    Ok(Prepotential::new(&spec.chart, f)?)
}

fn manifold_of(spec: &SpecFile, suite: Suite) -> Result<&crate::hverify::ManifoldSpec, CliError> {
    spec.manifold
        .as_ref()
        .ok_or_else(|| inapplicable(suite, "the spec has no X, theta and K1"))
}

/// Runs one suite. Errors here map to exit code 2.
pub fn run_suite(spec: &SpecFile, cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let mut out = SuiteReport::new(cfg.suite);
    match cfg.suite {
        Suite::H1 => out.checks.push(check_h1(manifold_of(spec, cfg.suite)?)),
        Suite::Hm => {
            let ms = manifold_of(spec, cfg.suite)?;
            let m = cfg
                .m
                .ok_or_else(|| inapplicable(cfg.suite, "--m is required"))?;
            out.checks.push(check_hm(ms, m)?);
        }
        Suite::F | Suite::Frobenius => {
            let ms = manifold_of(spec, cfg.suite)?;
            let g = if cfg.suite == Suite::Frobenius {
                Some(
                    ms.metric()
                        .ok_or_else(|| inapplicable(cfg.suite, "the spec has no metric g"))?,
                )
            } else {
                None
            };
            let frame = lenard_frame(ms);
            out.data("frame determinant", frame.determinant.to_string());
            let mult = multiplication_from_chain(&frame, &ms.ks()[0])?;
            out.data(
                "chain product symmetry defect",
                mult.symmetry_defect
                    .as_ref()
                    .map_or("none".to_string(), |w| {
                        format!("{:?}: {}", w.indices, w.expr)
                    }),
            );
            match g {
                Some(g) => out.checks.push(check_frobenius(g, &mult.c, ms.x())?),
                None => out.checks.push(check_f_manifold(&mult.c, ms.x())?),
            }
        }
        Suite::Wdvv => {
            let f = prepotential_of(spec, cfg.suite)?;
            let w = wdvv_residual(&f);
            out.data("residual", w.to_string());
            out.checks
                .push(scalar_check("WDVV", "F_AAA + F_AAB F_BBB - F_ABB^2 = 0", w));
        }
        Suite::Pipeline => {
            let f = prepotential_of(spec, cfg.suite)?;
            let t = pqr_from_prepotential(&f);
            out.data("P", t.p.to_string());
            out.data("Q", t.q.to_string());
            out.data("R", t.r.to_string());
            out.data("WDVV residual", wdvv_residual(&f).to_string());
            out.checks
                .push(check_hm(&h2_spec_from_prepotential(&f)?, 2)?);
        }
        Suite::Series => {
            let f = prepotential_of(spec, cfg.suite)?;
            let order = cfg
                .order
                .ok_or_else(|| inapplicable(cfg.suite, "--order is required"))?;
            let closed = pqr_from_prepotential(&f);
            let sol = series_solve_pqr(&spec.chart, initial_slice(&closed)?, order)?;
            let mut check = CheckReport::new("series");
            for (name, r) in ["P", "Q", "R"].into_iter().zip(sol.residuals()) {
                let coeffs = taylor_in_first(&r, order.saturating_sub(1))?;
                for (k, c) in coeffs.into_iter().enumerate() {
                    check.axioms.push(entry(
                        format!("{name} equation, A^{k} coefficient = 0"),
                        vec![k],
                        c,
                    ));
                }
            }
            let targets = [&closed.p, &closed.q, &closed.r];
            for ((name, series), target) in ["P", "Q", "R"]
                .into_iter()
                .zip(&sol.coefficients)
                .zip(targets)
            {
                for (k, c) in series.iter().enumerate() {
                    out.data(&format!("{}_{k}", name.to_lowercase()), c.to_string());
                }
                let expected = taylor_in_first(target, order)?;
                let agree = expected == *series;
                out.data(&format!("{name} matches closed form"), agree.to_string());
            }
            out.checks.push(check);
        }
    }
    Ok(out)
}

fn entry(label: String, indices: Vec<usize>, residual: crate::expr::RationalExpr) -> AxiomEntry {
    AxiomEntry {
        label,
        witness: (!residual.is_zero()).then_some(Witness {
            indices,
            expr: residual,
        }),
    }
}

fn scalar_check(structure: &str, label: &str, residual: crate::expr::RationalExpr) -> CheckReport {
    let mut r = CheckReport::new(structure);
    r.axioms
        .push(entry(label.to_string(), Vec::new(), residual));
    r
}

#[derive(Debug, Parser)]
#[command(
    name = "lenard",
    version,
    about = "Exact checks for Lenard-type recursion structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an axiom suite on a spec file.
    Check {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        suite: CheckSuite,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// WDVV residual of a potential.
    Wdvv {
        #[arg(long)]
        potential: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Potential to H2 data, then the H2 axioms.
    Pipeline {
        #[arg(long)]
        potential: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Series continuation in A of the triple from the A = 0 slice.
    Series {
        #[arg(long)]
        potential: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckSuite {
    H1,
    Hm,
    F,
    Frobenius,
}

impl From<CheckSuite> for Suite {
    fn from(s: CheckSuite) -> Self {
        match s {
            CheckSuite::H1 => Suite::H1,
            CheckSuite::Hm => Suite::Hm,
            CheckSuite::F => Suite::F,
            CheckSuite::Frobenius => Suite::Frobenius,
        }
    }
}

/// A potential argument is a spec file when such a file exists, otherwise an expression
/// in `A, B, C`.
pub fn potential_spec(arg: &str) -> Result<SpecFile, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return load(path);
    }
    let chart = default_chart();
    let f = chart.parse(arg).map_err(|e| CliError::Spec {
        path: PathBuf::from("<potential>"),
        err: SpecError {
            line: 1,
            column: match &e {
                crate::expr::ExprError::Syntax { pos, .. }
                | crate::expr::ExprError::UnknownIdentifier { pos, .. }
                | crate::expr::ExprError::ExponentOverflow { pos } => pos + 1,
                _ => 1,
            },
            kind: SpecErrorKind::Expr(e),
        },
    })?;
    Ok(SpecFile {
        path: None,
        chart,
        manifold: None,
        potential: Some(f),
    })
}

fn load(path: &Path) -> Result<SpecFile, CliError> {
    load_spec(path).map_err(|err| CliError::Spec {
        path: path.to_path_buf(),
        err,
    })
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let (spec, cfg) = match prepare(cli.command) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    // the exit-code contract covers internal faults too
    let outcome = std::panic::catch_unwind(|| run_suite(&spec, &cfg));
    let Ok(outcome) = outcome else {
        let _ = writeln!(
            err,
            "error: internal failure while running suite `{}`",
            cfg.suite.name()
        );
        return 2;
    };
    match outcome {
        Ok(report) => {
            let text = match cfg.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let _ = write!(out, "{text}");
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn prepare(cmd: Command) -> Result<(SpecFile, RunConfig), CliError> {
    Ok(match cmd {
        Command::Check {
            spec,
            suite,
            m,
            report,
        } => {
            let mut cfg = RunConfig::new(suite.into());
            cfg.m = m;
            cfg.format = report;
            (load(&spec)?, cfg)
        }
        Command::Wdvv { potential, report } => {
            let mut cfg = RunConfig::new(Suite::Wdvv);
            cfg.format = report;
            (potential_spec(&potential)?, cfg)
        }
        Command::Pipeline { potential, report } => {
            let mut cfg = RunConfig::new(Suite::Pipeline);
            cfg.format = report;
            (potential_spec(&potential)?, cfg)
        }
        Command::Series {
            potential,
            order,
            report,
        } => {
            let mut cfg = RunConfig::new(Suite::Series);
            cfg.format = report;
            cfg.order = Some(order);
            (potential_spec(&potential)?, cfg)
        }
    })
}
