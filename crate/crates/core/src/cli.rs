//! Command-line driver: generation, normalization, solving with either
//! engine, verification of stored solutions and round-count benchmarks.
//!
//! Reports contain no timings, so a fixed configuration always produces the
//! same bytes.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::congest::{run_distributed_with_budget, DistributedOutput, RoundStats};
use crate::congest::DEFAULT_BIT_BUDGET;
use crate::engine::{self, Params, PhaseTrace, RunOutput};
use crate::instances::{
    gen_random_general, gen_random_rs, gen_set_cover, gen_vertex_cover_lp, parse_edge_list, parse_instance,
    parse_set_system, serialize_instance, GeneralInstance, Instance, InstanceStats, NormalizedInstance,
    PrimalDualSolution,
};
use crate::normalize::{denormalize, normalize, OriginalSolution, PrimalValue};
use crate::verify::{self, audit_trace, Certificate, GeneralCheck, ORACLE_SIZE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const ORACLE_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Input { .. } => EXIT_IO,
            CliError::Internal(_) => EXIT_INVALID,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn input_err(path: impl Into<String>, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.into(), message: e.to_string() }
}

#[derive(Debug, Parser)]
#[command(name = "congest-cover", version, about = "(1+eps)-approximate covering/packing LPs, centralized or simulated CONGEST")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and certify the result.
    Solve(SolveArgs),
    /// Reduce a general instance to normal form.
    Normalize(NormalizeArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Check stored x / y vectors against an instance.
    Verify(VerifyArgs),
    /// Tabulate rounds against eps and instance parameters.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Centralized,
    Congest,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Instance file.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// random-rs:n,m,k,amax | random-general:n,m,k | vc:GRAPHFILE | setcover:SPECFILE
    #[arg(long = "gen")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_BIT_BUDGET)]
    pub bit_budget: u32,
    /// Cross-check against the exact optimum when the instance is tiny.
    #[arg(long)]
    pub oracle: bool,
    /// Directory for x.txt, y.txt and report.json.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Sidecar map file; defaults to OUT.map.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long = "gen")]
    pub generator: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// One value per line; `inf` marks a saturated column of a general instance.
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    /// When given, the objective ratio must equal 1 + eps.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = verify::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// One sweep point per occurrence.
    #[arg(long = "gen", required = true)]
    pub generators: Vec<String>,
    /// Comma-separated eps values.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub epsilons: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_BIT_BUDGET)]
    pub bit_budget: u32,
}

/// Where an instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Gen(GenSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    RandomRs { n: usize, m: usize, k: usize, a_max: f64 },
    RandomGeneral { n: usize, m: usize, k: usize },
    VertexCover(PathBuf),
    SetCover(PathBuf),
}

impl GenSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("generator spec '{spec}' lacks ':'")))?;
        let numbers = |count: usize| -> Result<Vec<&str>, CliError> {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() == count {
                Ok(parts)
            } else {
                Err(CliError::Usage(format!("'{kind}' expects {count} comma-separated values, got '{rest}'")))
            }
        };
        let int = |s: &str| s.parse::<usize>().map_err(|_| CliError::Usage(format!("bad integer '{s}' in '{spec}'")));
        match kind {
            "random-rs" => {
                let p = numbers(4)?;
                let a_max = p[3].parse().map_err(|_| CliError::Usage(format!("bad amax '{}'", p[3])))?;
                Ok(GenSpec::RandomRs { n: int(p[0])?, m: int(p[1])?, k: int(p[2])?, a_max })
            }
            "random-general" => {
                let p = numbers(3)?;
                Ok(GenSpec::RandomGeneral { n: int(p[0])?, m: int(p[1])?, k: int(p[2])? })
            }
            "vc" => Ok(GenSpec::VertexCover(PathBuf::from(rest))),
            "setcover" => Ok(GenSpec::SetCover(PathBuf::from(rest))),
            _ => Err(CliError::Usage(format!("unknown generator '{kind}'"))),
        }
    }

    pub fn build(&self, seed: u64) -> Result<Instance, CliError> {
        let label = format!("{self:?}");
        match self {
            GenSpec::RandomRs { n, m, k, a_max } => gen_random_rs(*n, *m, *k, *a_max, seed)
                .map(Instance::Normalized)
                .map_err(|e| CliError::Usage(e.to_string())),
            GenSpec::RandomGeneral { n, m, k } => gen_random_general(*n, *m, *k, seed)
                .map(Instance::General)
                .map_err(|e| CliError::Usage(e.to_string())),
            GenSpec::VertexCover(path) => {
                let edges = parse_edge_list(&read(path)?).map_err(|e| input_err(path.display().to_string(), e))?;
                gen_vertex_cover_lp(&edges).map(Instance::Normalized).map_err(|e| input_err(label, e))
            }
            GenSpec::SetCover(path) => {
                let (count, sets) =
                    parse_set_system(&read(path)?).map_err(|e| input_err(path.display().to_string(), e))?;
                gen_set_cover(count, &sets).map(Instance::Normalized).map_err(|e| input_err(label, e))
            }
        }
    }
}

/// Validated settings of one solve run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub epsilon: f64,
    pub mode: Mode,
    pub seed: u64,
    pub format: Format,
    pub bit_budget: u32,
    pub oracle: bool,
    pub out_dir: Option<PathBuf>,
    pub warnings: Vec<String>,
}

/// Values above 1 are clamped with a warning; anything not in `(0, inf)` is a
/// usage error.
pub fn check_epsilon(epsilon: f64, warnings: &mut Vec<String>) -> Result<f64, CliError> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(CliError::Usage(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if epsilon > 1.0 {
        warnings.push(format!("epsilon {epsilon} clamped to 1"));
        return Ok(1.0);
    }
    Ok(epsilon)
}

fn source_of(args: &SourceArgs) -> Result<Source, CliError> {
    match (&args.instance, &args.generator) {
        (Some(p), None) => Ok(Source::File(p.clone())),
        (None, Some(g)) => Ok(Source::Gen(GenSpec::parse(g)?)),
        _ => Err(CliError::Usage("exactly one of --instance and --gen is required".into())),
    }
}

impl RunConfig {
    pub fn from_args(args: &SolveArgs) -> Result<Self, CliError> {
        let mut warnings = Vec::new();
        let epsilon = check_epsilon(args.epsilon, &mut warnings)?;
        if args.bit_budget == 0 {
            return Err(CliError::Usage("bit budget must be positive".into()));
        }
        Ok(RunConfig {
            source: source_of(&args.source)?,
            epsilon,
            mode: args.mode,
            seed: args.seed,
            format: args.format,
            bit_budget: args.bit_budget,
            oracle: args.oracle,
            out_dir: args.out_dir.clone(),
            warnings,
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

pub fn load_instance(source: &Source, seed: u64) -> Result<Instance, CliError> {
    match source {
        Source::File(path) => parse_instance(&read(path)?).map_err(|e| input_err(path.display().to_string(), e)),
        Source::Gen(spec) => spec.build(seed),
    }
}

fn source_label(source: &Source) -> String {
    match source {
        Source::File(p) => p.display().to_string(),
        Source::Gen(g) => format!("{g:?}"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineSummary {
    pub phases: u64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub audit_passed: bool,
    pub audit_failures: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub exact_opt: f64,
    pub primal_within: bool,
    pub dual_within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralSummary {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub ratio_preserved: bool,
    pub saturated_columns: usize,
    pub check: GeneralCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub source: String,
    pub kind: &'static str,
    pub mode: Mode,
    pub seed: u64,
    pub stats: InstanceStats,
    pub params: Params,
    pub centralized: Option<EngineSummary>,
    pub congest: Option<EngineSummary>,
    pub round_stats: Option<RoundStats>,
    /// x and y bit-identical between the engines (mode `both` only).
    pub engines_agree: Option<bool>,
    pub certificate: Certificate,
    pub oracle: Option<OracleSummary>,
    pub general: Option<GeneralSummary>,
    pub warnings: Vec<String>,
    pub valid: bool,
}

/// The solution vectors of a solve run, in the variables of the input.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionVectors {
    Normalized(PrimalDualSolution),
    General { original: OriginalSolution, normalized: PrimalDualSolution },
}

fn summarize(trace: &PhaseTrace, params: &Params, inst: &NormalizedInstance, sol: &PrimalDualSolution) -> EngineSummary {
    let audit = audit_trace(trace, params, inst);
    EngineSummary {
        phases: trace.phases(),
        primal_objective: sol.primal_objective,
        dual_objective: sol.dual_objective,
        audit_passed: audit.passed,
        audit_failures: audit.failures().map(|c| c.name).collect(),
    }
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.to_bits() == v.to_bits())
}

/// Runs a solve and returns the report together with the solution vectors.
pub fn cmd_solve(config: &RunConfig) -> Result<(SolveReport, SolutionVectors), CliError> {
    let instance = load_instance(&config.source, config.seed)?;
    let (normalized, general) = match instance {
        Instance::Normalized(n) => (n, None),
        Instance::General(g) => {
            let (n, map) = normalize(&g).map_err(|e| input_err(source_label(&config.source), e))?;
            (n, Some((g, map)))
        }
    };

    let central: Option<RunOutput> = match config.mode {
        Mode::Centralized | Mode::Both => {
            Some(engine::run(&normalized, config.epsilon).map_err(|e| CliError::Internal(e.to_string()))?)
        }
        Mode::Congest => None,
    };
    let distributed: Option<DistributedOutput> = match config.mode {
        Mode::Congest | Mode::Both => Some(
            run_distributed_with_budget(&normalized, config.epsilon, config.bit_budget)
                .map_err(|e| CliError::Internal(e.to_string()))?,
        ),
        Mode::Centralized => None,
    };

    let (solution, params, final_state) = match (&central, &distributed) {
        (Some(c), _) => (c.solution.clone(), c.params, c.trace.final_state.clone()),
        (None, Some(d)) => (d.solution.clone(), d.params, d.trace.final_state.clone()),
        (None, None) => unreachable!("every mode runs at least one engine"),
    };
    let engines_agree = match (&central, &distributed) {
        (Some(c), Some(d)) => {
            Some(same_bits(&c.solution.x, &d.solution.x) && same_bits(&c.solution.y, &d.solution.y))
        }
        _ => None,
    };

    let certificate = verify::certify_run(&normalized, &solution, &final_state, &params)
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let oracle = if config.oracle && normalized.n_rows() + normalized.n_cols() <= ORACLE_SIZE_CAP {
        let opt = verify::exact_opt(&normalized).map_err(|e| CliError::Internal(e.to_string()))?;
        Some(oracle_summary(opt, &solution, config.epsilon))
    } else {
        None
    };
    let mut warnings = config.warnings.clone();
    if normalized.n_rows() > 0 && normalized.stats().gamma_p <= 1.0 {
        warnings.push("gamma_p = 1: exponent target floored to 1, no approximation guarantee".into());
    }
    if config.oracle && oracle.is_none() {
        warnings.push(format!("oracle skipped: more than {ORACLE_SIZE_CAP} rows plus columns"));
    }

    let (general_summary, vectors) = match general {
        None => (None, SolutionVectors::Normalized(solution.clone())),
        Some((g, map)) => {
            let original = denormalize(&solution, &map).map_err(|e| CliError::Internal(e.to_string()))?;
            let summary = general_summary(&g, &original, &solution)?;
            (Some(summary), SolutionVectors::General { original, normalized: solution.clone() })
        }
    };

    let centralized = central.as_ref().map(|c| summarize(&c.trace, &c.params, &normalized, &c.solution));
    let congest = distributed.as_ref().map(|d| summarize(&d.trace, &d.params, &normalized, &d.solution));
    let valid = certificate.valid
        && engines_agree.unwrap_or(true)
        && centralized.as_ref().is_none_or(|s| s.audit_passed)
        && congest.as_ref().is_none_or(|s| s.audit_passed)
        && oracle.as_ref().is_none_or(|o| o.primal_within && o.dual_within)
        && general_summary.as_ref().is_none_or(|g| g.check.primal.feasible && g.check.dual.feasible && g.ratio_preserved);

    let report = SolveReport {
        source: source_label(&config.source),
        kind: if general_summary.is_some() { "general" } else { "normalized" },
        mode: config.mode,
        seed: config.seed,
        stats: *normalized.stats(),
        params,
        centralized,
        congest,
        round_stats: distributed.as_ref().map(|d| d.stats),
        engines_agree,
        certificate,
        oracle,
        general: general_summary,
        warnings,
        valid,
    };
    Ok((report, vectors))
}

fn oracle_summary(opt: f64, sol: &PrimalDualSolution, epsilon: f64) -> OracleSummary {
    OracleSummary {
        exact_opt: opt,
        primal_within: sol.primal_objective <= (1.0 + epsilon) * opt + ORACLE_SLACK,
        dual_within: sol.dual_objective >= opt / (1.0 + epsilon) - ORACLE_SLACK,
    }
}

fn general_summary(
    g: &GeneralInstance,
    original: &OriginalSolution,
    normalized: &PrimalDualSolution,
) -> Result<GeneralSummary, CliError> {
    let check = verify::check_general(g, original, verify::DEFAULT_TOLERANCE)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(GeneralSummary {
        primal_objective: original.primal_objective,
        dual_objective: original.dual_objective,
        ratio_preserved: ratio_preserved(original, normalized),
        saturated_columns: original.x.iter().filter(|v| **v == PrimalValue::Saturated).count(),
        check,
    })
}

/// Original and normalized objective ratios agree to relative 1e-9; both
/// objectives of a side must vanish together.
pub fn ratio_preserved(original: &OriginalSolution, normalized: &PrimalDualSolution) -> bool {
    if normalized.dual_objective == 0.0 || original.dual_objective == 0.0 {
        return normalized.dual_objective == original.dual_objective
            && (normalized.primal_objective == 0.0) == (original.primal_objective == 0.0);
    }
    let a = original.primal_objective / original.dual_objective;
    let b = normalized.primal_objective / normalized.dual_objective;
    (a - b).abs() <= 1e-9 * b
}

fn vector_text<T>(values: &[T], show: impl Fn(&T) -> String) -> String {
    values.iter().map(|v| show(v) + "\n").collect()
}

fn write_solution(dir: &Path, vectors: &SolutionVectors, report: &SolveReport) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let float = |v: &f64| format!("{v:?}");
    match vectors {
        SolutionVectors::Normalized(sol) => {
            write_file(&dir.join("x.txt"), &vector_text(&sol.x, float))?;
            write_file(&dir.join("y.txt"), &vector_text(&sol.y, float))?;
        }
        SolutionVectors::General { original, normalized } => {
            let primal = |v: &PrimalValue| match v {
                PrimalValue::Finite(x) => format!("{x:?}"),
                PrimalValue::Saturated => "inf".to_string(),
            };
            write_file(&dir.join("x.txt"), &vector_text(&original.x, primal))?;
            write_file(&dir.join("y.txt"), &vector_text(&original.y, float))?;
            write_file(&dir.join("normalized_x.txt"), &vector_text(&normalized.x, float))?;
            write_file(&dir.join("normalized_y.txt"), &vector_text(&normalized.y, float))?;
        }
    }
    let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
    write_file(&dir.join("report.json"), &(json + "\n"))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub instance: String,
    pub kind: &'static str,
    pub certificate: Option<Certificate>,
    pub general: Option<GeneralCheck>,
    pub oracle: Option<OracleSummary>,
    pub valid: bool,
}

fn parse_vector(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(read(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn parse_floats(path: &Path, fields: &[String]) -> Result<Vec<f64>, CliError> {
    fields
        .iter()
        .map(|f| f.parse::<f64>().map_err(|_| input_err(path.display().to_string(), format!("malformed value '{f}'"))))
        .collect()
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let mut warnings = Vec::new();
    let epsilon = args.epsilon.map(|e| check_epsilon(e, &mut warnings)).transpose()?;
    let instance = load_instance(&Source::File(args.instance.clone()), 0)?;
    let x_fields = parse_vector(&args.x)?;
    let y = parse_floats(&args.y, &parse_vector(&args.y)?)?;
    let label = args.instance.display().to_string();
    let dims = |e: crate::error::VerifyError| input_err(label.clone(), e);

    match instance {
        Instance::Normalized(inst) => {
            let x = parse_floats(&args.x, &x_fields)?;
            let sol = PrimalDualSolution::new(x, y);
            let mut cert = verify::certify(&inst, &sol, epsilon.unwrap_or(0.0)).map_err(dims)?;
            let primal = verify::check_primal(&inst, &sol.x, args.tolerance).map_err(dims)?;
            let dual = verify::check_dual(&inst, &sol.y, args.tolerance).map_err(dims)?;
            cert.primal = primal;
            cert.dual = dual;
            cert.valid = primal.feasible && dual.feasible && (epsilon.is_none() || cert.ratio_matches);
            let oracle = if args.oracle && inst.n_rows() + inst.n_cols() <= ORACLE_SIZE_CAP {
                let opt = verify::exact_opt(&inst).map_err(|e| CliError::Internal(e.to_string()))?;
                Some(oracle_summary(opt, &sol, epsilon.unwrap_or(0.0)))
            } else {
                None
            };
            let valid = cert.valid && oracle.as_ref().is_none_or(|o| o.primal_within && o.dual_within);
            Ok(VerifyReport { instance: label, kind: "normalized", certificate: Some(cert), general: None, oracle, valid })
        }
        Instance::General(g) => {
            let x = x_fields
                .iter()
                .map(|f| match f.as_str() {
                    "inf" | "+inf" => Ok(PrimalValue::Saturated),
                    _ => f
                        .parse::<f64>()
                        .map(PrimalValue::Finite)
                        .map_err(|_| input_err(args.x.display().to_string(), format!("malformed value '{f}'"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let primal_objective =
                x.iter().zip(g.c()).filter_map(|(v, &c)| v.finite().map(|v| c * v)).sum();
            let dual_objective = y.iter().zip(g.b()).map(|(y, b)| y * b).sum();
            let sol = OriginalSolution { x, y, primal_objective, dual_objective };
            let check = verify::check_general(&g, &sol, args.tolerance).map_err(dims)?;
            let valid = check.primal.feasible && check.dual.feasible;
            Ok(VerifyReport { instance: label, kind: "general", certificate: None, general: Some(check), oracle: None, valid })
        }
    }
}

/// One row of a benchmark table.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub generator: String,
    pub seed: u64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub nnz: usize,
    pub gamma_p: f64,
    pub gamma_d: f64,
    pub a_max: f64,
    pub epsilon: f64,
    pub c_const: f64,
    pub alpha: f64,
    pub f: f64,
    pub phase_limit: u64,
    pub phases: u64,
    pub rounds: u64,
    pub round_bound: u64,
    /// `rounds / round_bound`.
    pub bound_ratio: f64,
    pub messages: u64,
    pub max_message_bits: u32,
}

/// Rows are ordered generator-major, then by eps, as given on the command line.
pub fn cmd_bench(args: &BenchArgs) -> Result<(Vec<BenchRow>, Vec<String>), CliError> {
    let mut warnings = Vec::new();
    let epsilons = args
        .epsilons
        .iter()
        .map(|&e| check_epsilon(e, &mut warnings))
        .collect::<Result<Vec<_>, _>>()?;
    if args.bit_budget == 0 {
        return Err(CliError::Usage("bit budget must be positive".into()));
    }
    let specs = args.generators.iter().map(|g| GenSpec::parse(g)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for (spec, label) in specs.iter().zip(&args.generators) {
        let inst = match spec.build(args.seed)? {
            Instance::Normalized(n) => n,
            Instance::General(g) => normalize(&g).map_err(|e| input_err(label.clone(), e))?.0,
        };
        for &epsilon in &epsilons {
            let out = run_distributed_with_budget(&inst, epsilon, args.bit_budget)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let s = out.stats;
            rows.push(BenchRow {
                index: rows.len(),
                generator: label.clone(),
                seed: args.seed,
                n_rows: inst.n_rows(),
                n_cols: inst.n_cols(),
                nnz: inst.stats().nnz,
                gamma_p: s.gamma_p,
                gamma_d: s.gamma_d,
                a_max: s.a_max,
                epsilon,
                c_const: s.c_const,
                alpha: s.alpha,
                f: s.f,
                phase_limit: s.phase_limit,
                phases: s.phases,
                rounds: s.rounds,
                round_bound: s.round_bound,
                bound_ratio: s.rounds as f64 / s.round_bound.max(1) as f64,
                messages: s.messages,
                max_message_bits: s.max_message_bits,
            });
        }
    }
    Ok((rows, warnings))
}

/// Flattens a JSON value into dotted `(key, scalar)` pairs.
fn flatten(value: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, &key(k), out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(";")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, &key(&i.to_string()), out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(value))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders one or more records of the same shape.
pub fn render<T: Serialize>(records: &[T], format: Format) -> Result<String, CliError> {
    let values = records
        .iter()
        .map(serde_json::to_value)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let flat: Vec<Vec<(String, String)>> = values
        .iter()
        .map(|v| {
            let mut out = Vec::new();
            flatten(v, "", &mut out);
            out
        })
        .collect();
    let mut text = String::new();
    match format {
        Format::Json => {
            let body = if values.len() == 1 {
                serde_json::to_string_pretty(&values[0])
            } else {
                serde_json::to_string_pretty(&values)
            };
            text = body.map_err(|e| CliError::Internal(e.to_string()))? + "\n";
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Internal(e.to_string());
            if let Some(first) = flat.first() {
                w.write_record(first.iter().map(|(k, _)| k)).map_err(csv_err)?;
            }
            for row in &flat {
                w.write_record(row.iter().map(|(_, v)| v)).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
            text = String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))?;
        }
        Format::Text => {
            for (i, row) in flat.iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                let width = row.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in row {
                    writeln!(text, "{k:<width$}  {v}").unwrap();
                }
            }
        }
    }
    Ok(text)
}

fn dispatch(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let out = |stdout: &mut dyn Write, s: &str| stdout.write_all(s.as_bytes()).map_err(io_err(Path::new("<stdout>")));
    match command {
        Command::Solve(args) => {
            let config = RunConfig::from_args(args)?;
            for w in &config.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let (report, vectors) = cmd_solve(&config)?;
            if let Some(dir) = &config.out_dir {
                write_solution(dir, &vectors, &report)?;
            }
            out(stdout, &render(std::slice::from_ref(&report), config.format)?)?;
            Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Normalize(args) => {
            let general = match load_instance(&Source::File(args.instance.clone()), 0)? {
                Instance::General(g) => g,
                Instance::Normalized(_) => {
                    return Err(input_err(args.instance.display().to_string(), "already in normal form"))
                }
            };
            let (normalized, map) =
                normalize(&general).map_err(|e| input_err(args.instance.display().to_string(), e))?;
            write_file(&args.out, &serialize_instance(&Instance::Normalized(normalized)))?;
            let map_path = args.map.clone().unwrap_or_else(|| {
                let mut p = args.out.clone().into_os_string();
                p.push(".map");
                PathBuf::from(p)
            });
            write_file(&map_path, &map.to_text())?;
            Ok(EXIT_OK)
        }
        Command::Generate(args) => {
            let text = serialize_instance(&GenSpec::parse(&args.generator)?.build(args.seed)?);
            match &args.out {
                Some(path) => write_file(path, &text)?,
                None => out(stdout, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let report = cmd_verify(args)?;
            out(stdout, &render(std::slice::from_ref(&report), args.format)?)?;
            Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Bench(args) => {
            let (rows, warnings) = cmd_bench(args)?;
            for w in &warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            out(stdout, &render(&rows, args.format)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
