//! Seeded verification campaigns over random (state, instrument) pairs.
//!
//! Trial `t` draws everything from stream `t` of the campaign seed, so
//! results do not depend on how trials are scheduled across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{random_local_instrument, random_one_round_locc, Instrument};
use crate::error::{Error, Result};
use crate::io::{InstrumentJson, StateJson};
use crate::linalg::DimSpec;
use crate::sampling::rng_for_stream;
use crate::states::{random_density, DensityMatrix};
use crate::DEFAULT_SEED;

use super::chains::{
    check_gamma_positive_chains, check_ln_monotonicity, check_monotone_chain, check_negativity_monotonicity,
};
use super::report::ChainReport;

/// Names of the per-trial checks, in execution order.
pub const CHECKS: [&str; 4] = ["positive_chain", "trace_norm_chain", "log_negativity", "negativity"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrumentFamily {
    /// Random POVM on A followed by an outcome-dependent unitary on B.
    Locc1,
    /// Instrument acting on A only.
    Local,
}

impl FromStr for InstrumentFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "locc1" => Ok(Self::Locc1),
            "local" => Ok(Self::Local),
            other => Err(Error::Parse(format!(
                "family: unknown instrument family {other:?} (expected locc1 or local)"
            ))),
        }
    }
}

impl fmt::Display for InstrumentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Locc1 => "locc1",
            Self::Local => "local",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub trials: usize,
    pub d_a: usize,
    pub d_b: usize,
    pub family: InstrumentFamily,
    pub seed: u64,
    /// State rank is drawn uniformly from `1..=max_rank` (capped at the
    /// total dimension).
    pub max_rank: usize,
    /// Outcome count is drawn uniformly from `1..=max_outcomes`.
    pub max_outcomes: usize,
    /// Kraus operators per branch for the `local` family, drawn from
    /// `1..=max_kraus`.
    pub max_kraus: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            d_a: 2,
            d_b: 2,
            family: InstrumentFamily::Locc1,
            seed: DEFAULT_SEED,
            max_rank: 4,
            max_outcomes: 4,
            max_kraus: 2,
        }
    }
}

impl CampaignConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("d_a", self.d_a),
            ("d_b", self.d_b),
            ("max_rank", self.max_rank),
            ("max_outcomes", self.max_outcomes),
            ("max_kraus", self.max_kraus),
        ] {
            if v == 0 {
                return Err(Error::OutOfRange {
                    name,
                    value: 0.0,
                    min: 1.0,
                    max: f64::INFINITY,
                });
            }
        }
        Ok(())
    }
}

/// Inputs of one trial; enough to replay it.
#[derive(Debug, Clone)]
pub struct TrialInputs {
    pub index: usize,
    pub rank: usize,
    pub outcomes: usize,
    pub state_seed: u64,
    pub instrument_seed: u64,
    pub state: DensityMatrix,
    pub instrument: Instrument,
}

pub fn draw_trial(config: &CampaignConfig, index: usize) -> Result<TrialInputs> {
    let mut rng = rng_for_stream(config.seed, index as u64);
    let dim = config.d_a * config.d_b;
    let rank = rng.random_range(1..=config.max_rank.min(dim));
    let outcomes = rng.random_range(1..=config.max_outcomes);
    let kraus = rng.random_range(1..=config.max_kraus);
    let state_seed: u64 = rng.random();
    let instrument_seed: u64 = rng.random();
    let state = random_density(&DimSpec::bipartite(config.d_a, config.d_b), rank, state_seed)?;
    let instrument = match config.family {
        InstrumentFamily::Locc1 => random_one_round_locc(config.d_a, config.d_b, outcomes, instrument_seed)?,
        InstrumentFamily::Local => random_local_instrument(config.d_a, config.d_b, outcomes, kraus, instrument_seed)?,
    };
    Ok(TrialInputs {
        index,
        rank,
        outcomes,
        state_seed,
        instrument_seed,
        state,
        instrument,
    })
}

/// Runs the four chain checks on one (instrument, state) pair.
pub fn run_checks(instr: &Instrument, rho: &DensityMatrix) -> Result<[ChainReport; 4]> {
    Ok([
        check_gamma_positive_chains(instr, rho)?,
        check_monotone_chain(instr, rho)?,
        check_ln_monotonicity(instr, rho)?,
        check_negativity_monotonicity(instr, rho)?,
    ])
}

#[derive(Debug, Clone)]
pub enum TrialOutcome {
    Checked {
        inputs: Box<TrialInputs>,
        reports: Box<[ChainReport; 4]>,
    },
    /// A numerical failure (invalid intermediate state, eigensolver
    /// breakdown) rather than an inequality violation.
    Casualty { index: usize, error: String },
}

pub fn run_trial(config: &CampaignConfig, index: usize) -> TrialOutcome {
    let inputs = match draw_trial(config, index) {
        Ok(i) => i,
        Err(e) => {
            return TrialOutcome::Casualty {
                index,
                error: e.to_string(),
            }
        }
    };
    match run_checks(&inputs.instrument, &inputs.state) {
        Ok(reports) => TrialOutcome::Checked {
            inputs: Box::new(inputs),
            reports: Box::new(reports.map(|r| r.with_seed(config.seed))),
        },
        Err(error) => TrialOutcome::Casualty {
            index,
            error: error.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckStats {
    pub violations: usize,
    /// Smallest inequality slack seen, with the trial it came from.
    pub worst_slack: Option<f64>,
    pub worst_trial: Option<usize>,
    pub max_identity_error: Option<f64>,
}

/// A failing trial with its full inputs for replay.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub state_seed: u64,
    pub instrument_seed: u64,
    pub state: StateJson,
    pub instrument: InstrumentJson,
    pub reports: Vec<ChainReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Casualty {
    pub trial: usize,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignVerdict {
    Pass,
    VacuousPass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub config: CampaignConfig,
    pub n_trials: usize,
    pub n_checked: usize,
    pub n_violations: usize,
    pub n_casualties: usize,
    pub worst_slack: Option<f64>,
    pub checks: BTreeMap<String, CheckStats>,
    pub verdict: CampaignVerdict,
    pub violations: Vec<ViolationRecord>,
    pub casualties: Vec<Casualty>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.verdict != CampaignVerdict::Fail
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Executes `config.trials` independent trials and aggregates them. Trial
/// errors are recorded as casualties; they never abort the campaign.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignSummary> {
    config.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();

    let mut checks: BTreeMap<String, CheckStats> = CHECKS
        .iter()
        .map(|&name| {
            (
                name.to_string(),
                CheckStats {
                    violations: 0,
                    worst_slack: None,
                    worst_trial: None,
                    max_identity_error: None,
                },
            )
        })
        .collect();
    let mut violations = Vec::new();
    let mut casualties = Vec::new();
    let mut worst_slack = None;
    let mut n_checked = 0;

    for outcome in outcomes {
        match outcome {
            TrialOutcome::Casualty { index, error } => casualties.push(Casualty { trial: index, error }),
            TrialOutcome::Checked { inputs, reports } => {
                n_checked += 1;
                for (name, report) in CHECKS.iter().zip(reports.iter()) {
                    let stats = checks.get_mut(*name).expect("known check");
                    if !report.passed() {
                        stats.violations += 1;
                    }
                    if let Some(s) = report.worst_slack() {
                        if stats.worst_slack.is_none_or(|w| s < w) {
                            stats.worst_slack = Some(s);
                            stats.worst_trial = Some(inputs.index);
                        }
                    }
                    if let Some(e) = report.worst_identity_error() {
                        stats.max_identity_error = Some(stats.max_identity_error.map_or(e, |m| m.max(e)));
                    }
                    worst_slack = min_opt(worst_slack, report.worst_slack());
                }
                if reports.iter().any(|r| !r.passed()) {
                    violations.push(ViolationRecord {
                        trial: inputs.index,
                        state_seed: inputs.state_seed,
                        instrument_seed: inputs.instrument_seed,
                        state: (&inputs.state).into(),
                        instrument: (&inputs.instrument).into(),
                        reports: reports.to_vec(),
                    });
                }
            }
        }
    }

    let verdict = if !violations.is_empty() {
        CampaignVerdict::Fail
    } else if n_checked == 0 {
        CampaignVerdict::VacuousPass
    } else {
        CampaignVerdict::Pass
    };
    Ok(CampaignSummary {
        config: config.clone(),
        n_trials: config.trials,
        n_checked,
        n_violations: violations.len(),
        n_casualties: casualties.len(),
        worst_slack,
        checks,
        verdict,
        violations,
        casualties,
    })
}
