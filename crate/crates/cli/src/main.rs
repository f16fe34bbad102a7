//! `negmon` command-line front end.
//!
//! JSON goes to stdout; `--verbose` adds human-readable tables on stderr.
//! Exit status: 0 when every check passes, 1 when a violation is found, 2 on
//! malformed input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use negmon::channels::{choi, is_ppt_map, Instrument};
use negmon::io::{EnsembleJson, InstrumentJson, StateJson};
use negmon::monotones::summarize;
use negmon::states::DensityMatrix;
use negmon::verifier::{
    check_marker_inequality, convexity_witness, ensure_ppt_instrument, run_campaign, run_checks, uniform_grid,
    werner_scan, CampaignConfig, ChainReport, InstrumentFamily, CONCAVITY_TOL,
};
use negmon::{DEFAULT_SEED, INSTR_TOL, MAP_TOL, STATE_TOL};

const SEED_ENV: &str = "NEGMON_SEED";

#[derive(Parser)]
#[command(
    name = "negmon",
    version,
    about = "Negativity and log-negativity monotonicity checks"
)]
struct Cli {
    /// Print human-readable tables to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negativity, log-negativity and PPT verdict of a state.
    Compute {
        state: PathBuf,
        /// Report log-negativity in nats instead of bits.
        #[arg(long)]
        natural_log: bool,
        /// Tolerance on the smallest partial-transpose eigenvalue for the PPT verdict.
        #[arg(long, default_value_t = STATE_TOL)]
        ppt_tol: f64,
    },
    /// Monotonicity checks on a seeded random campaign, or on one given state and instrument.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Local dimensions as `AxB`.
        #[arg(long, default_value = "2x2", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long, default_value_t = InstrumentFamily::Locc1)]
        family: InstrumentFamily,
        /// Campaign seed; decimal or 0x-prefixed hex. NEGMON_SEED takes precedence.
        #[arg(long, value_parser = parse_seed)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 4)]
        max_outcomes: usize,
        #[arg(long, default_value_t = 2)]
        max_kraus: usize,
        /// Check this state instead of running a campaign (needs --instrument).
        #[arg(long, requires = "instrument")]
        state: Option<PathBuf>,
        #[arg(long, requires = "state")]
        instrument: Option<PathBuf>,
        /// Also write the JSON summary to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Werner-family table with closed-form and concavity checks.
    WernerScan {
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Write the table as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Convexity gap of LN and negativity for a mixture of two states.
    Witness {
        #[arg(long)]
        state1: PathBuf,
        #[arg(long)]
        state2: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
    /// Complete-positivity and PPT classification of each instrument branch.
    ChoiCheck {
        instrument: PathBuf,
        #[arg(long, default_value_t = MAP_TOL)]
        tol: f64,
    },
    /// Marker-state inequality for an ensemble.
    MarkerCheck { ensemble: PathBuf },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let parse = |t: &str| match t.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("invalid local dimension {t:?}")),
        Ok(d) => Ok(d),
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn resolve_seed(flag: Option<u64>) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => parse_seed(&v).map_err(|e| anyhow!("{SEED_ENV}: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(flag.unwrap_or(DEFAULT_SEED)),
        Err(e) => bail!("{SEED_ENV}: {e}"),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_state(path: &Path) -> anyhow::Result<DensityMatrix> {
    let raw: StateJson = parse_json(path)?;
    raw.to_state().with_context(|| format!("{}", path.display()))
}

fn load_instrument_json(path: &Path) -> anyhow::Result<InstrumentJson> {
    parse_json(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Pass,
    Violation,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Violation
        }
    }
}

fn report_table(reports: &[ChainReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{} [{}]", r.name, if r.passed() { "pass" } else { "FAIL" });
        for s in &r.steps {
            let mark = if s.holds { " " } else { "!" };
            let _ = writeln!(
                out,
                " {mark} {:<60} lhs {:>12.6e} rhs {:>12.6e} slack {:>10.3e}",
                s.label, s.lhs, s.rhs, s.slack
            );
        }
    }
    out
}

#[derive(Serialize)]
struct ComputeOutput {
    negativity: f64,
    log_negativity: f64,
    log_base: &'static str,
    ppt: bool,
    trace_norm_pt: f64,
    min_pt_eigenvalue: f64,
}

fn compute(path: &Path, natural_log: bool, ppt_tol: f64, verbose: bool) -> anyhow::Result<Status> {
    let rho = load_state(path)?;
    let s = summarize(&rho, ppt_tol)?;
    let (log_negativity, log_base) = if natural_log {
        (s.log_negativity * std::f64::consts::LN_2, "e")
    } else {
        (s.log_negativity, "2")
    };
    if verbose {
        eprintln!(
            "dims {:?}, transposing party {}",
            rho.dims().dims(),
            rho.transpose_party()
        );
        eprintln!("  ||rho^G||_1        {:.12}", s.trace_norm_pt);
        eprintln!("  negativity         {:.12}", s.negativity);
        eprintln!("  log-negativity     {log_negativity:.12} (base {log_base})");
        eprintln!("  min eig of rho^G   {:.3e}", s.min_pt_eigenvalue);
    }
    emit(&ComputeOutput {
        negativity: s.negativity,
        log_negativity,
        log_base,
        ppt: s.ppt,
        trace_norm_pt: s.trace_norm_pt,
        min_pt_eigenvalue: s.min_pt_eigenvalue,
    });
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct SingleVerifyOutput {
    passed: bool,
    reports: Vec<ChainReport>,
}

fn verify_single(state: &Path, instrument: &Path, verbose: bool) -> anyhow::Result<(String, bool)> {
    let rho = load_state(state)?;
    let instr = load_instrument_json(instrument)?
        .to_instrument()
        .with_context(|| format!("{}", instrument.display()))?;
    ensure_ppt_instrument(&instr).with_context(|| format!("{}", instrument.display()))?;
    let reports = run_checks(&instr, &rho)?.to_vec();
    if verbose {
        eprint!("{}", report_table(&reports));
    }
    let passed = reports.iter().all(ChainReport::passed);
    Ok((to_json(&SingleVerifyOutput { passed, reports }), passed))
}

fn verify_campaign(config: &CampaignConfig, verbose: bool) -> anyhow::Result<(String, bool)> {
    let summary = run_campaign(config)?;
    if verbose {
        eprintln!(
            "{} trials ({} checked, {} casualties), {} violations, verdict {:?}",
            summary.n_trials, summary.n_checked, summary.n_casualties, summary.n_violations, summary.verdict
        );
        eprintln!(
            "{:<18} {:>10} {:>14} {:>14}",
            "check", "violations", "worst slack", "max id error"
        );
        for (name, s) in &summary.checks {
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
            eprintln!(
                "{:<18} {:>10} {:>14} {:>14}",
                name,
                s.violations,
                fmt(s.worst_slack),
                fmt(s.max_identity_error)
            );
        }
    }
    Ok((to_json(&summary), summary.passed()))
}

fn werner(points: usize, csv_path: Option<&Path>, verbose: bool) -> anyhow::Result<Status> {
    let scan = werner_scan(&uniform_grid(points))?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(["p", "tracenorm", "negativity", "log_negativity"])?;
        for r in &scan.rows {
            w.write_record([r.p, r.trace_norm, r.negativity, r.log_negativity].map(|x| x.to_string()))?;
        }
        w.flush().with_context(|| format!("writing {}", path.display()))?;
    }
    if verbose {
        eprintln!("{:>8} {:>14} {:>14} {:>14}", "p", "||rho^G||_1", "N", "LN");
        for r in &scan.rows {
            eprintln!(
                "{:>8.4} {:>14.10} {:>14.10} {:>14.10}",
                r.p, r.trace_norm, r.negativity, r.log_negativity
            );
        }
        eprintln!(
            "closed-form error {:.3e}, max LN second difference {} (limit {CONCAVITY_TOL:e})",
            scan.max_closed_form_error,
            scan.max_second_difference
                .map_or("-".to_string(), |x| format!("{x:.3e}"))
        );
    }
    emit(&scan);
    Ok(Status::from_pass(scan.passed()))
}

fn witness(state1: &Path, state2: &Path, lambda: f64, verbose: bool) -> anyhow::Result<Status> {
    let rho1 = load_state(state1)?;
    let rho2 = load_state(state2)?;
    let w = convexity_witness(&rho1, &rho2, lambda)?;
    if verbose {
        eprintln!("lambda {}", w.lambda);
        eprintln!(
            "  LN: mixture {:.10}, average {:.10}, delta {:+.10}",
            w.ln_mixture, w.ln_average, w.delta_ln
        );
        eprintln!(
            "  N:  mixture {:.10}, average {:.10}, delta {:+.10}",
            w.negativity_mixture, w.negativity_average, w.delta_negativity
        );
        if w.ln_convexity_violated {
            eprintln!("  LN is not convex on this pair");
        }
    }
    emit(&w);
    // Negativity is convex, so a positive gap there is a genuine failure; a
    // positive LN gap is the expected finding and not one.
    Ok(Status::from_pass(w.delta_negativity <= CONCAVITY_TOL))
}

#[derive(Serialize)]
struct BranchVerdict {
    cp: bool,
    ppt: bool,
    min_choi_eigenvalue: f64,
}

#[derive(Serialize)]
struct ChoiCheckOutput {
    branches: Vec<BranchVerdict>,
    trace_preserving: bool,
    trace_preservation_error: f64,
}

fn choi_check(path: &Path, tol: f64, verbose: bool) -> anyhow::Result<Status> {
    let raw = load_instrument_json(path)?;
    let branches = raw.to_branches().with_context(|| format!("{}", path.display()))?;
    let mut verdicts = Vec::with_capacity(branches.len());
    for (i, b) in branches.iter().enumerate() {
        let c = choi(b);
        let ppt = is_ppt_map(b, tol).with_context(|| format!("{}: branches[{i}]", path.display()))?;
        verdicts.push(BranchVerdict {
            cp: c.is_cp(tol)?,
            ppt,
            min_choi_eigenvalue: c.min_eigenvalue()?,
        });
    }
    // Instrument::new rejects non-trace-preserving inputs, so measure the error
    // directly on the branch list.
    let trace_preservation_error = match Instrument::new(branches.clone()) {
        Ok(instr) => instr.trace_preservation_error(),
        Err(_) => {
            let d = branches[0].in_dims().total();
            let total = branches
                .iter()
                .fold(negmon::ComplexMatrix::zeros(d, d), |acc, b| &acc + &b.completeness());
            total.max_abs_diff(&negmon::ComplexMatrix::identity(d))
        }
    };
    let trace_preserving = trace_preservation_error <= INSTR_TOL;
    if verbose {
        eprintln!("{:>6} {:>6} {:>6} {:>16}", "branch", "cp", "ppt", "min eig(Choi)");
        for (i, v) in verdicts.iter().enumerate() {
            eprintln!("{i:>6} {:>6} {:>6} {:>16.3e}", v.cp, v.ppt, v.min_choi_eigenvalue);
        }
        eprintln!("trace preserving: {trace_preserving} (error {trace_preservation_error:.3e})");
    }
    let pass = trace_preserving && verdicts.iter().all(|v| v.cp && v.ppt);
    emit(&ChoiCheckOutput {
        branches: verdicts,
        trace_preserving,
        trace_preservation_error,
    });
    Ok(Status::from_pass(pass))
}

fn marker_check(path: &Path, verbose: bool) -> anyhow::Result<Status> {
    let raw: EnsembleJson = parse_json(path)?;
    let ensemble = raw.to_ensemble().with_context(|| format!("{}", path.display()))?;
    let report = check_marker_inequality(&ensemble)?;
    if verbose {
        eprint!("{}", report_table(std::slice::from_ref(&report)));
    }
    emit(&report);
    Ok(Status::from_pass(report.passed()))
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Compute {
            state,
            natural_log,
            ppt_tol,
        } => compute(&state, natural_log, ppt_tol, verbose),
        Command::Verify {
            trials,
            dims: (d_a, d_b),
            family,
            seed,
            max_rank,
            max_outcomes,
            max_kraus,
            state,
            instrument,
            json,
        } => {
            let (text, passed) = match (state, instrument) {
                (Some(s), Some(i)) => verify_single(&s, &i, verbose)?,
                _ => {
                    let config = CampaignConfig {
                        trials,
                        d_a,
                        d_b,
                        family,
                        seed: resolve_seed(seed)?,
                        max_rank,
                        max_outcomes,
                        max_kraus,
                    };
                    verify_campaign(&config, verbose)?
                }
            };
            if let Some(path) = json {
                fs::write(&path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{text}");
            Ok(Status::from_pass(passed))
        }
        Command::WernerScan { points, csv } => werner(points, csv.as_deref(), verbose),
        Command::Witness { state1, state2, lambda } => witness(&state1, &state2, lambda, verbose),
        Command::ChoiCheck { instrument, tol } => choi_check(&instrument, tol, verbose),
        Command::MarkerCheck { ensemble } => marker_check(&ensemble, verbose),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
