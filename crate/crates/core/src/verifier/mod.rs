//! Numerical certification of the monotonicity argument: each chain is
//! evaluated line by line into a [`ChainReport`], and campaigns aggregate the
//! reports over seeded random inputs.

mod campaign;
mod chains;
mod convexity;
mod report;

pub use campaign::{
    draw_trial, run_campaign, run_checks, run_trial, CampaignConfig, CampaignSummary, CampaignVerdict, Casualty,
    CheckStats, InstrumentFamily, TrialInputs, TrialOutcome, ViolationRecord, CHECKS,
};
pub use chains::{
    check_gamma_positive_chains, check_ln_monotonicity, check_marker_inequality, check_monotone_chain,
    check_negativity_monotonicity, check_positive_chain, ensure_ppt_instrument, BLOCK_IDENTITY_TOL,
};
pub use convexity::{
    convexity_witness, uniform_grid, werner_scan, werner_trace_norm_closed_form, ConvexityWitness, WernerRow,
    WernerScan, CLOSED_FORM_TOL, CONCAVITY_TOL,
};
pub use report::{matrix_hash, ChainReport, ChainStep, Fingerprint, Relation, Verdict};
