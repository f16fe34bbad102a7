//! Line-by-line evaluation of the monotonicity argument.
//!
//! Every line of each chain is computed independently wherever a second
//! route exists, so an identity step compares two different numerical
//! paths rather than one value against itself.

use crate::channels::{apply_instrument, ChoiMatrix, Instrument, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{check_hermitian, partial_transpose, trace_norm_hermitian, ComplexMatrix};
use crate::monotones::{log_negativity, negativity, partial_transpose_of, pos_neg_parts, trace_norm_pt};
use crate::states::{marker_extension, DensityMatrix, Ensemble};
use crate::{EIGEN_TOL, IDENTITY_TOL, MAP_TOL, SLACK_TOL};

use super::report::ChainReport;

/// Tolerance on the marker-state block identity.
pub const BLOCK_IDENTITY_TOL: f64 = 1e-10;

fn tr(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    trace_norm_hermitian(&m.hermitian_part(), EIGEN_TOL)
}

/// Positive-part chain for a CP map `psi` and Hermitian `h`:
///
/// ```text
/// tr|Psi(h)| = tr Psi(h)_+ + tr Psi(h)_-
///            = tr Psi(h)_+ + tr Psi(-h)_+
///           <= tr Psi(h_+) + tr Psi((-h)_+)
///            = tr Psi(h_+) + tr Psi(h_-)
///            = tr Psi(|h|)
/// ```
///
/// The inequality is recorded separately for each term.
pub fn check_positive_chain(psi: &KrausMap, h: &ComplexMatrix) -> Result<ChainReport> {
    check_hermitian(h, EIGEN_TOL)?;
    let mut report = ChainReport::new("positive_chain").with_inputs([h]);

    let image = psi.apply(h)?.hermitian_part();
    let image_neg = psi.apply(&-h)?.hermitian_part();
    let out_parts = pos_neg_parts(&image, EIGEN_TOL)?;
    let out_neg_parts = pos_neg_parts(&image_neg, EIGEN_TOL)?;
    let h_parts = pos_neg_parts(h, EIGEN_TOL)?;
    let neg_h_parts = pos_neg_parts(&-h, EIGEN_TOL)?;

    let abs_image = trace_norm(&image)?;
    let image_pos = out_parts.positive_trace();
    let image_neg_part = out_parts.negative_trace();
    let neg_image_pos = out_neg_parts.positive_trace();
    let map_of_pos = tr(&psi.apply(&h_parts.positive)?);
    let map_of_neg_h_pos = tr(&psi.apply(&neg_h_parts.positive)?);
    let map_of_neg = tr(&psi.apply(&h_parts.negative)?);
    let map_of_abs = tr(&psi.apply(&h_parts.abs())?);

    report.identity(
        "tr|Psi(h)| = tr Psi(h)_+ + tr Psi(h)_-",
        abs_image,
        image_pos + image_neg_part,
        IDENTITY_TOL,
    );
    report.identity(
        "tr Psi(h)_- = tr Psi(-h)_+",
        image_neg_part,
        neg_image_pos,
        IDENTITY_TOL,
    );
    report.le("tr Psi(h)_+ <= tr Psi(h_+)", image_pos, map_of_pos, SLACK_TOL);
    report.le(
        "tr Psi(-h)_+ <= tr Psi((-h)_+)",
        neg_image_pos,
        map_of_neg_h_pos,
        SLACK_TOL,
    );
    report.identity(
        "tr Psi((-h)_+) = tr Psi(h_-)",
        map_of_neg_h_pos,
        map_of_neg,
        IDENTITY_TOL,
    );
    report.identity(
        "tr Psi(h_+) + tr Psi(h_-) = tr Psi(|h|)",
        map_of_pos + map_of_neg,
        map_of_abs,
        IDENTITY_TOL,
    );
    report.le("tr|Psi(h)| <= tr Psi(|h|)", abs_image, map_of_abs, SLACK_TOL);
    Ok(report)
}

/// Fails with [`Error::NotPptInstrument`] on the first branch whose
/// `Psi^Gamma` is not completely positive.
pub fn ensure_ppt_instrument(instr: &Instrument) -> Result<()> {
    for (branch, psi) in instr.branches().iter().enumerate() {
        let min_eigenvalue = psi.ppt_margin()?;
        if min_eigenvalue < -MAP_TOL {
            return Err(Error::NotPptInstrument { branch, min_eigenvalue });
        }
    }
    Ok(())
}

fn check_input_dims(instr: &Instrument, rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != instr.in_dims() {
        return Err(Error::DimMismatch(format!(
            "state dims {:?} do not match instrument input dims {:?}",
            rho.dims().dims(),
            instr.in_dims().dims()
        )));
    }
    Ok(())
}

/// Trace-norm chain for an instrument of PPT branches:
///
/// ```text
/// sum_i p_i ||rho_i^G||_1 = sum_i tr|(Psi_i(rho))^G|
///                         = sum_i tr|Psi_i^G(rho^G)|
///                        <= sum_i tr Psi_i^G(|rho^G|)
///                         = sum_i tr (Psi_i(|rho^G|^G))^G
///                         = tr |rho^G|^G
///                         = ||rho^G||_1
/// ```
///
/// `Psi_i^G` is applied through the partially transposed Choi matrix, an
/// independent route from the Kraus form used for `Psi_i`.
pub fn check_monotone_chain(instr: &Instrument, rho: &DensityMatrix) -> Result<ChainReport> {
    check_input_dims(instr, rho)?;
    ensure_ppt_instrument(instr)?;
    let mut report = ChainReport::new("trace_norm_chain").with_inputs([rho.matrix()]);

    let out_dims = instr.out_dims();
    let party = instr.branches()[0].transpose_party();
    let rho_pt = partial_transpose_of(rho);
    let abs_pt = pos_neg_parts(&rho_pt, EIGEN_TOL)?.abs();
    let abs_pt_pt = partial_transpose(&abs_pt, rho.dims(), rho.transpose_party())?;

    let ensemble = apply_instrument(instr, rho)?;
    let weighted_norms = ensemble
        .members()
        .iter()
        .map(|(p, s)| Ok(p * trace_norm_pt(s)?))
        .sum::<Result<f64>>()?;

    let mut direct = 0.0;
    let mut via_gamma = 0.0;
    let mut gamma_of_abs = 0.0;
    let mut kraus_of_abs = 0.0;
    for psi in instr.branches() {
        let out = psi.apply(rho.matrix())?;
        direct += trace_norm(&partial_transpose(&out, out_dims, party)?)?;

        let gamma: ChoiMatrix = psi.choi().gamma_conjugate(party)?;
        via_gamma += trace_norm(&gamma.apply(&rho_pt)?)?;
        gamma_of_abs += tr(&gamma.apply(&abs_pt)?);

        let image = psi.apply(&abs_pt_pt)?;
        kraus_of_abs += tr(&partial_transpose(&image, out_dims, party)?);
    }
    let trace_abs = tr(&abs_pt);
    let norm_pt = trace_norm_pt(rho)?;

    report.identity(
        "sum_i p_i ||rho_i^G||_1 = sum_i tr|(Psi_i(rho))^G|",
        weighted_norms,
        direct,
        IDENTITY_TOL,
    );
    report.identity(
        "sum_i tr|(Psi_i(rho))^G| = sum_i tr|Psi_i^G(rho^G)|",
        direct,
        via_gamma,
        IDENTITY_TOL,
    );
    report.le(
        "sum_i tr|Psi_i^G(rho^G)| <= sum_i tr Psi_i^G(|rho^G|)",
        via_gamma,
        gamma_of_abs,
        SLACK_TOL,
    );
    report.identity(
        "sum_i tr Psi_i^G(|rho^G|) = sum_i tr (Psi_i(|rho^G|^G))^G",
        gamma_of_abs,
        kraus_of_abs,
        IDENTITY_TOL,
    );
    report.identity(
        "sum_i tr (Psi_i(|rho^G|^G))^G = tr |rho^G|^G",
        kraus_of_abs,
        trace_abs,
        IDENTITY_TOL,
    );
    report.identity("tr |rho^G|^G = ||rho^G||_1", trace_abs, norm_pt, IDENTITY_TOL);
    report.le(
        "sum_i p_i ||rho_i^G||_1 <= ||rho^G||_1",
        weighted_norms,
        norm_pt,
        SLACK_TOL,
    );
    Ok(report)
}

/// `sum_i p_i LN(rho_i) <= log2 sum_i p_i ||rho_i^G||_1 <= LN(rho)`.
pub fn check_ln_monotonicity(instr: &Instrument, rho: &DensityMatrix) -> Result<ChainReport> {
    check_input_dims(instr, rho)?;
    ensure_ppt_instrument(instr)?;
    let mut report = ChainReport::new("log_negativity").with_inputs([rho.matrix()]);
    let ensemble = apply_instrument(instr, rho)?;

    let mut average_ln = 0.0;
    let mut average_norm = 0.0;
    for (p, s) in ensemble.members() {
        average_ln += p * log_negativity(s)?;
        average_norm += p * trace_norm_pt(s)?;
    }
    let log_of_average = average_norm.log2();
    let ln = log_negativity(rho)?;

    report.le(
        "sum_i p_i LN(rho_i) <= log2 sum_i p_i ||rho_i^G||_1",
        average_ln,
        log_of_average,
        SLACK_TOL,
    );
    report.le("log2 sum_i p_i ||rho_i^G||_1 <= LN(rho)", log_of_average, ln, SLACK_TOL);
    report.le("sum_i p_i LN(rho_i) <= LN(rho)", average_ln, ln, SLACK_TOL);
    Ok(report)
}

/// `sum_i p_i N(rho_i) <= N(rho)`.
pub fn check_negativity_monotonicity(instr: &Instrument, rho: &DensityMatrix) -> Result<ChainReport> {
    check_input_dims(instr, rho)?;
    ensure_ppt_instrument(instr)?;
    let mut report = ChainReport::new("negativity").with_inputs([rho.matrix()]);
    let ensemble = apply_instrument(instr, rho)?;
    let average = ensemble
        .members()
        .iter()
        .map(|(p, s)| Ok(p * negativity(s)?))
        .sum::<Result<f64>>()?;
    report.le("sum_i p_i N(rho_i) <= N(rho)", average, negativity(rho)?, SLACK_TOL);
    Ok(report)
}

/// Flagging each member with an orthogonal marker cannot lower LN below
/// either the average or the mixture:
///
/// ```text
/// ||marker^G||_1 = sum_i p_i ||rho_i^G||_1
/// LN(marker) >= sum_i p_i LN(rho_i)
/// LN(marker) >= LN(sum_i p_i rho_i)
/// ```
pub fn check_marker_inequality(e: &Ensemble) -> Result<ChainReport> {
    if e.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let marked = marker_extension(e)?;
    let mixture = e.mixture()?;
    let mut report = ChainReport::new("marker").with_inputs(e.members().iter().map(|(_, s)| s.matrix()));

    let marker_norm = trace_norm_pt(&marked)?;
    let mut block_sum = 0.0;
    let mut average_ln = 0.0;
    for (p, s) in e.members() {
        block_sum += p * trace_norm_pt(s)?;
        average_ln += p * log_negativity(s)?;
    }
    let ln_marker = log_negativity(&marked)?;
    let ln_mixture = log_negativity(&mixture)?;

    report.identity(
        "||marker^G||_1 = sum_i p_i ||rho_i^G||_1",
        marker_norm,
        block_sum,
        BLOCK_IDENTITY_TOL,
    );
    report.le("sum_i p_i LN(rho_i) <= LN(marker)", average_ln, ln_marker, SLACK_TOL);
    report.le("LN(sum_i p_i rho_i) <= LN(marker)", ln_mixture, ln_marker, SLACK_TOL);
    Ok(report)
}

/// Positive-part chain for every `Psi_i^G` of the instrument at `h = rho^G`:
/// the inequality step inside the trace-norm chain.
pub fn check_gamma_positive_chains(instr: &Instrument, rho: &DensityMatrix) -> Result<ChainReport> {
    check_input_dims(instr, rho)?;
    let rho_pt = partial_transpose_of(rho);
    let mut report = ChainReport::new("positive_chain").with_inputs([rho.matrix()]);
    for (i, psi) in instr.branches().iter().enumerate() {
        let Some(gamma) = psi.gamma_conjugate(MAP_TOL)? else {
            return Err(Error::NotPptInstrument {
                branch: i,
                min_eigenvalue: psi.ppt_margin()?,
            });
        };
        report.absorb(&format!("[{i}] "), check_positive_chain(&gamma, &rho_pt)?);
    }
    report.fingerprint.hashes.truncate(1);
    Ok(report)
}
