//! Command layer: bound evaluation, bound comparison, figure-data sweeps,
//! seeded fuzz verification, and state validation.
//!
//! Inputs are JSON descriptors (inline or by path), outputs are CSV or
//! JSON with fixed formatting so reruns of the same configuration are
//! byte-identical. Exit codes: 0 success, 1 I/O or parse failure,
//! 2 validation failure, 3 verification failure.

use crate::bounds::{self, gram_det_bound, BoundName, BoundReport, QutritClosedForm};
use crate::descriptor::{parse_observables, DescriptorError, StateDescriptor};
use crate::fuzz::{self, FuzzSummary};
use crate::observables::{gellmann_set, moment_table, MomentTable, Observable};
use crate::states::{self, bloch_of_qubit, BlochVector, DensityMatrix, DENSITY_TOL};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

const SCALE_3_POW_8: f64 = 6561.0;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Io(_) | HarnessError::Parse(_) => EXIT_PARSE,
            HarnessError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

impl From<DescriptorError> for HarnessError {
    fn from(err: DescriptorError) -> Self {
        if err.is_parse_error() {
            HarnessError::Parse(err.to_string())
        } else {
            HarnessError::Validation(err.to_string())
        }
    }
}

impl From<bounds::BoundError> for HarnessError {
    fn from(err: bounds::BoundError) -> Self {
        HarnessError::Validation(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate selected bounds for a state and observable list
    Bound(BoundConfig),
    /// Compare the qubit triple bounds on one Bloch state
    Compare(CompareConfig),
    /// Write figure-data CSV sweeps
    Sweep(SweepConfig),
    /// Seeded randomized verification of the bound inequalities
    Fuzz(FuzzCmdConfig),
    /// Validate a state descriptor and report diagnostics
    Validate(ValidateConfig),
}

#[derive(Debug, Clone, Args)]
pub struct BoundConfig {
    /// State descriptor: inline JSON or a path to a JSON file
    #[arg(long)]
    pub state: String,
    /// Observable descriptor(s): inline JSON or a path
    #[arg(long)]
    pub obs: String,
    /// Bound name, repeatable (theorem1, theorem2_det, ...)
    #[arg(long = "bound", required = true, value_parser = parse_bound_name)]
    pub bounds: Vec<BoundName>,
    /// Validation tolerance
    #[arg(long, default_value_t = DENSITY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct CompareConfig {
    /// Qubit state descriptor: inline JSON or a path
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = DENSITY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SweepConfig {
    #[arg(long, value_enum)]
    pub figure: Figure,
    /// Grid intervals per axis (rows run over the inclusive endpoints)
    #[arg(long, default_value_t = 360)]
    pub steps: usize,
    /// Squared radial parameter of the qutrit family (fig2/fig3)
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub a2: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FuzzCmdConfig {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// State dimensions, drawn per trial (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    /// Observables per trial
    #[arg(long = "n-obs", default_value_t = 3)]
    pub n_obs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Nonnegativity / PSD tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateConfig {
    /// State descriptor: inline JSON or a path
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = DENSITY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_bound_name(s: &str) -> Result<BoundName, String> {
    s.parse()
}

fn check_tol(tol: f64) -> Result<(), HarnessError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(HarnessError::Validation(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Inline JSON is detected by its first character; anything else is a path.
fn read_source(source: &str) -> Result<String, HarnessError> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(source.to_string())
    } else {
        Ok(std::fs::read_to_string(source)?)
    }
}

/// Fixed-width scientific notation, 13 significant digits, no negative zero.
fn fmt_f64(x: f64) -> String {
    format!("{:.12e}", x + 0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRecord {
    pub name: String,
    pub product: f64,
    pub bound: f64,
    pub gap: f64,
    pub tight: bool,
}

impl From<&BoundReport> for BoundRecord {
    fn from(r: &BoundReport) -> Self {
        BoundRecord {
            name: r.name.as_str().to_string(),
            product: r.product,
            bound: r.value,
            gap: r.gap,
            tight: r.tight,
        }
    }
}

fn render_records(records: &[BoundRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("name,product,bound,gap,tight\n");
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.name,
                    fmt_f64(r.product),
                    fmt_f64(r.bound),
                    fmt_f64(r.gap),
                    r.tight
                );
            }
            out
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
    }
}

fn evaluate_bound(
    name: BoundName,
    table: &MomentTable,
    rho: &DensityMatrix,
    descriptor: &StateDescriptor,
) -> Result<f64, HarnessError> {
    let require = |expected: usize| -> Result<(), HarnessError> {
        if table.n() != expected {
            return Err(HarnessError::Validation(format!(
                "{name} requires exactly {expected} observables, got {}",
                table.n()
            )));
        }
        Ok(())
    };
    let qubit_r = || -> Result<[f64; 3], HarnessError> {
        let bloch = bloch_of_qubit(rho)
            .map_err(|e| HarnessError::Validation(format!("{name} needs a qubit state: {e}")))?;
        Ok(bloch.as_qubit().expect("qubit Bloch vector has length 3"))
    };
    let value = match name {
        BoundName::Theorem1 => bounds::theorem1_bound(table)?,
        BoundName::Theorem1CommutatorForm => bounds::theorem1_bound_commutator_form(table)?,
        BoundName::Theorem2Cycles => bounds::theorem2_bound_cycles(table)?,
        BoundName::Theorem2Det => bounds::gram_det_bound(table)?,
        BoundName::HeisenbergPair => {
            require(2)?;
            bounds::heisenberg_pair_bound(table, 0, 1)?
        }
        BoundName::SchrodingerPair => {
            require(2)?;
            bounds::schrodinger_pair_bound(table, 0, 1)?
        }
        BoundName::SchrodingerTriple => bounds::schrodinger_triple_bound(table)?,
        BoundName::PauliTripleTight => bounds::pauli_triple_tight_bound(qubit_r()?),
        BoundName::PauliClosedForm => bounds::pauli_closed_form(qubit_r()?).1,
        BoundName::GellmannClosedForm => match descriptor {
            StateDescriptor::BlochQutritParam { a, alpha, beta } => {
                let form: QutritClosedForm = bounds::gellmann_closed_form(*a, *alpha, *beta)
                    .map_err(|e| HarnessError::Validation(e.to_string()))?;
                form.bound_printed
            }
            _ => {
                return Err(HarnessError::Validation(
                    "gellmann_closed_form requires a bloch_qutrit_param state descriptor"
                        .to_string(),
                ))
            }
        },
        BoundName::SumAmgm => bounds::sum_amgm_bound(table)?,
    };
    Ok(value)
}

/// Evaluate each requested bound against one shared moment table.
pub fn cmd_bound(cfg: &BoundConfig) -> Result<String, HarnessError> {
    check_tol(cfg.tol)?;
    let state_json = read_source(&cfg.state)?;
    let descriptor = StateDescriptor::parse(&state_json)?;
    let rho = descriptor.density(cfg.tol)?;
    let obs_json = read_source(&cfg.obs)?;
    let observables: Vec<Observable> = parse_observables(&obs_json)?;
    let table =
        moment_table(&rho, &observables).map_err(|e| HarnessError::Validation(e.to_string()))?;
    let product = table.variance_product();

    let mut records = Vec::with_capacity(cfg.bounds.len());
    for &name in &cfg.bounds {
        let value = evaluate_bound(name, &table, &rho, &descriptor)?;
        records.push(BoundRecord::from(&BoundReport::new(name, product, value)));
    }
    Ok(render_records(&records, cfg.format))
}

/// Compare the three qubit triple bounds on one Bloch state.
pub fn cmd_compare(cfg: &CompareConfig) -> Result<String, HarnessError> {
    check_tol(cfg.tol)?;
    let state_json = read_source(&cfg.state)?;
    let descriptor = StateDescriptor::parse(&state_json)?;
    let rho = descriptor.density(cfg.tol)?;
    let bloch = bloch_of_qubit(&rho)
        .map_err(|e| HarnessError::Validation(format!("compare needs a qubit state: {e}")))?;
    let reports = bounds::compare_pauli_bounds(bloch.as_qubit().expect("length 3"))
        .map_err(|e| HarnessError::Validation(e.to_string()))?;
    let records: Vec<BoundRecord> = reports.iter().map(BoundRecord::from).collect();
    Ok(render_records(&records, cfg.format))
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<String, HarnessError> {
    if cfg.steps < 2 {
        return Err(HarnessError::Validation(format!(
            "steps must be at least 2, got {}",
            cfg.steps
        )));
    }
    if !(0.0..=1.0).contains(&cfg.a2) {
        return Err(HarnessError::Validation(format!(
            "a2 must lie in [0, 1], got {}",
            cfg.a2
        )));
    }
    match cfg.figure {
        Figure::Fig1 => Ok(sweep_fig1(cfg.steps)),
        Figure::Fig2 => Ok(sweep_fig2(cfg.steps, cfg.a2)),
        Figure::Fig3 => Ok(sweep_fig3(cfg.steps, cfg.a2)),
    }
}

/// theta sweep of the Bloch family (1/3, 2/3 cos t, 2/3 sin t): the
/// variance product against the three comparable bounds.
pub fn sweep_fig1(steps: usize) -> String {
    let mut out = String::from("theta,product,L7,L10,L11\n");
    for i in 0..=steps {
        let theta = std::f64::consts::TAU * (i as f64 / steps as f64);
        let r = [1.0 / 3.0, 2.0 / 3.0 * theta.cos(), 2.0 / 3.0 * theta.sin()];
        let reports = bounds::compare_pauli_bounds(r).expect("family stays inside the Bloch ball");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(theta),
            fmt_f64(reports[0].product),
            fmt_f64(reports[0].value),
            fmt_f64(reports[1].value),
            fmt_f64(reports[2].value)
        );
    }
    out
}

/// One row of a qutrit-family sweep: 3^8-scaled variance product and
/// determinant bound, or a flagged invalid row.
fn qutrit_row(a: f64, alpha: f64, beta: f64, gm: &[Observable]) -> (bool, String, String) {
    let bloch = match BlochVector::qutrit_param(a, alpha, beta) {
        Ok(b) => b,
        Err(_) => return (false, String::new(), String::new()),
    };
    let rho = match states::qutrit_from_bloch(&bloch) {
        Ok(r) => r,
        Err(_) => return (false, String::new(), String::new()),
    };
    let table = moment_table(&rho, gm).expect("Gell-Mann moments are well formed");
    let product = table.variance_product();
    let bound = gram_det_bound(&table).expect("bookkeeping is real");
    (
        true,
        fmt_f64(SCALE_3_POW_8 * product),
        fmt_f64(SCALE_3_POW_8 * bound),
    )
}

/// (alpha, beta) grid of the qutrit family at fixed a^2; invalid states
/// are flagged rather than skipped so the grid stays rectangular.
pub fn sweep_fig2(steps: usize, a2: f64) -> String {
    let a = a2.sqrt();
    let gm = gellmann_set();
    let mut out = String::from("alpha,beta,valid,delta_scaled,bound_scaled\n");
    for i in 0..=steps {
        let alpha = std::f64::consts::TAU * (i as f64 / steps as f64);
        for j in 0..=steps {
            let beta = std::f64::consts::TAU * (j as f64 / steps as f64);
            let (valid, product, bound) = qutrit_row(a, alpha, beta, &gm);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(alpha),
                fmt_f64(beta),
                valid,
                product,
                bound
            );
        }
    }
    out
}

/// alpha sweep of the qutrit family at fixed a^2 with beta = pi/4
/// (sin 2 beta = 1).
pub fn sweep_fig3(steps: usize, a2: f64) -> String {
    let a = a2.sqrt();
    let beta = std::f64::consts::FRAC_PI_4;
    let gm = gellmann_set();
    let mut out = String::from("alpha,valid,product_scaled,bound_scaled\n");
    for i in 0..=steps {
        let alpha = std::f64::consts::TAU * (i as f64 / steps as f64);
        let (valid, product, bound) = qutrit_row(a, alpha, beta, &gm);
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(alpha), valid, product, bound);
    }
    out
}

pub struct FuzzOutcome {
    pub summary: FuzzSummary,
    pub rendered: String,
}

pub fn cmd_fuzz(cfg: &FuzzCmdConfig) -> Result<FuzzOutcome, HarnessError> {
    if cfg.trials < 1 {
        return Err(HarnessError::Validation("trials must be >= 1".to_string()));
    }
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2) {
        return Err(HarnessError::Validation(
            "dims must be a non-empty list of integers >= 2".to_string(),
        ));
    }
    if cfg.n_obs < 1 {
        return Err(HarnessError::Validation("n-obs must be >= 1".to_string()));
    }
    check_tol(cfg.tol)?;
    let summary = fuzz::run_fuzz(&fuzz::FuzzConfig {
        trials: cfg.trials,
        dims: cfg.dims.clone(),
        n_obs: cfg.n_obs,
        seed: cfg.seed,
        tolerance: cfg.tol,
    });
    let rendered = summary.to_json();
    Ok(FuzzOutcome { summary, rendered })
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub kind: String,
    pub dim: usize,
    pub hermiticity_residue: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_within_ball: Option<bool>,
    /// Qutrit only: does the norm necessary condition agree with the
    /// eigenvalue sufficient condition?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_and_eigen_agree: Option<bool>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

pub struct ValidateOutcome {
    pub report: ValidationReport,
    pub rendered: String,
}

pub fn cmd_validate(cfg: &ValidateConfig) -> Result<ValidateOutcome, HarnessError> {
    check_tol(cfg.tol)?;
    let state_json = read_source(&cfg.state)?;
    let descriptor = StateDescriptor::parse(&state_json)?;
    let raw = descriptor.raw_matrix()?;

    let residue = raw.hermiticity_residue();
    let trace = raw.trace();
    let eigenvalues = if residue <= 1e-8 {
        Some(
            raw.hermitian_eigenvalues(1e-8)
                .expect("residue checked above"),
        )
    } else {
        None
    };
    let min_eigenvalue = eigenvalues.as_ref().map(|ev| ev[0]);

    let (valid, violation) = match states::from_matrix(raw.clone(), cfg.tol) {
        Ok(_) => (true, None),
        Err(e) => (false, Some(e.to_string())),
    };

    let bloch = descriptor.bloch_components();
    let bloch_norm = bloch
        .as_ref()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt());
    let norm_within_ball = bloch_norm.map(|n| n <= 1.0 + states::BLOCH_NORM_TOL);
    let norm_and_eigen_agree = match (&descriptor, norm_within_ball, min_eigenvalue) {
        (
            StateDescriptor::BlochQutrit { .. } | StateDescriptor::BlochQutritParam { .. },
            Some(norm_ok),
            Some(min_eig),
        ) => Some(norm_ok == (min_eig >= -cfg.tol)),
        _ => None,
    };

    let report = ValidationReport {
        kind: descriptor.kind().to_string(),
        dim: raw.dim(),
        hermiticity_residue: residue,
        trace_re: trace.re,
        trace_im: trace.im,
        eigenvalues,
        min_eigenvalue,
        bloch_norm,
        norm_within_ball,
        norm_and_eigen_agree,
        valid,
        violation,
    };
    let mut rendered = serde_json::to_string_pretty(&report).expect("report serializes");
    rendered.push('\n');
    Ok(ValidateOutcome { report, rendered })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Dispatch a parsed command, emit its output, and return the exit code.
pub fn run(command: &Command) -> u8 {
    let result: Result<u8, HarnessError> = match command {
        Command::Bound(cfg) => cmd_bound(cfg).and_then(|s| {
            emit(&cfg.out, &s)?;
            Ok(EXIT_OK)
        }),
        Command::Compare(cfg) => cmd_compare(cfg).and_then(|s| {
            emit(&cfg.out, &s)?;
            Ok(EXIT_OK)
        }),
        Command::Sweep(cfg) => cmd_sweep(cfg).and_then(|s| {
            emit(&cfg.out, &s)?;
            Ok(EXIT_OK)
        }),
        Command::Fuzz(cfg) => cmd_fuzz(cfg).and_then(|outcome| {
            emit(&cfg.out, &outcome.rendered)?;
            Ok(if outcome.summary.pass {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            })
        }),
        Command::Validate(cfg) => cmd_validate(cfg).and_then(|outcome| {
            emit(&cfg.out, &outcome.rendered)?;
            Ok(if outcome.report.valid {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            })
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
