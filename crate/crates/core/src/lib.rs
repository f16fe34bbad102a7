//! Negativity and logarithmic negativity of bipartite quantum states, and a
//! numerical harness that checks, inequality by inequality, that both are
//! non-increasing on average under PPT instruments.
//!
//! Layout:
//!
//! * [`linalg`]: dense complex matrices, Jacobi Hermitian eigensolver,
//!   partial transpose and partial trace.
//! * [`states`]: density matrices, ensembles, Werner states, random states,
//!   marker-extended states.
//! * [`monotones`]: negativity, log-negativity, positive/negative parts,
//!   PPT test.
//! * [`channels`]: Kraus maps, instruments, Choi matrices, CP/PPT
//!   classification, random LOCC samplers.
//! * [`verifier`]: chain reports for each step of the monotonicity argument,
//!   convexity witnesses, Werner scans and seeded campaigns.
//! * [`io`]: the JSON interchange formats.
//!
//! Index convention: row-major, subsystem 0 is the most significant factor.
//! Logarithms are base 2.

pub mod channels;
pub mod error;
pub mod io;
pub mod linalg;
pub mod monotones;
pub mod sampling;
pub mod states;
pub mod verifier;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DimSpec, C64};

/// Relative Hermiticity tolerance for the eigensolver.
pub const EIGEN_TOL: f64 = 1e-12;
/// Tolerance for density-matrix validation (Hermiticity, trace, positivity).
pub const STATE_TOL: f64 = 1e-9;
/// Tolerance on `sum K^dag K = I` for instruments and on branch weights.
pub const INSTR_TOL: f64 = 1e-9;
/// Branches with probability below this are dropped from an ensemble.
pub const BRANCH_EPS: f64 = 1e-12;
/// Largest total weight that may be dropped with zero-probability branches.
pub const MAX_DISCARDED_WEIGHT: f64 = 1e-9;
/// Eigenvalue floor for Choi-matrix positivity (CP and PPT tests).
pub const MAP_TOL: f64 = 1e-9;
/// Allowed negative slack on an inequality step.
pub const SLACK_TOL: f64 = 1e-8;
/// Allowed deviation on a step that holds as an identity.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Default seed for every sampler and campaign.
pub const DEFAULT_SEED: u64 = 0xCAFE;
