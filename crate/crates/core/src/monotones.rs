//! Negativity, logarithmic negativity, and the spectral positive/negative
//! split they are built on.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{hermitian_eigen, partial_transpose, trace_norm_hermitian, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::{EIGEN_TOL, STATE_TOL};

/// `h = positive - negative` with both parts PSD and mutually orthogonal.
#[derive(Debug, Clone)]
pub struct PosNegParts {
    pub positive: ComplexMatrix,
    pub negative: ComplexMatrix,
}

impl PosNegParts {
    /// `|h| = h_+ + h_-`.
    pub fn abs(&self) -> ComplexMatrix {
        &self.positive + &self.negative
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.positive - &self.negative
    }

    pub fn positive_trace(&self) -> f64 {
        self.positive.trace().re
    }

    pub fn negative_trace(&self) -> f64 {
        self.negative.trace().re
    }
}

/// Spectral split of a Hermitian matrix. Eigenvalues within `[-tol, tol]`
/// go to neither part.
pub fn pos_neg_parts(h: &ComplexMatrix, tol: f64) -> Result<PosNegParts> {
    let e = hermitian_eigen(h, tol)?;
    let positive = e.reconstruct_with(|l| if l > tol { l } else { 0.0 });
    let negative = e.reconstruct_with(|l| if l < -tol { -l } else { 0.0 });
    Ok(PosNegParts { positive, negative })
}

/// `rho^{Gamma_A}` with A the state's designated transpose party.
pub fn partial_transpose_of(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose(rho.matrix(), rho.dims(), rho.transpose_party()).expect("validated state has consistent dims")
}

/// `||rho^Gamma||_1`.
pub fn trace_norm_pt(rho: &DensityMatrix) -> Result<f64> {
    trace_norm_hermitian(&partial_transpose_of(rho), EIGEN_TOL)
}

fn clamp_noise(raw: f64) -> f64 {
    if raw < 0.0 && raw > -STATE_TOL {
        0.0
    } else {
        raw
    }
}

/// `(||rho^Gamma||_1 - 1) / 2` without zero clamping.
pub fn negativity_raw(rho: &DensityMatrix) -> Result<f64> {
    Ok((trace_norm_pt(rho)? - 1.0) / 2.0)
}

/// `(||rho^Gamma||_1 - 1) / 2`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_raw(rho).map(clamp_noise)
}

/// `log2 ||rho^Gamma||_1` without zero clamping.
pub fn log_negativity_raw(rho: &DensityMatrix) -> Result<f64> {
    Ok(trace_norm_pt(rho)?.log2())
}

/// `log2 ||rho^Gamma||_1`.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    log_negativity_raw(rho).map(clamp_noise)
}

pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    Ok(hermitian_eigen(&partial_transpose_of(rho), EIGEN_TOL)?.min())
}

/// Peres-Horodecki test: `rho^Gamma >= -tol`.
pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho)? >= -tol)
}

/// Everything `negmon compute` reports, from one eigendecomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementSummary {
    pub negativity: f64,
    pub log_negativity: f64,
    pub ppt: bool,
    pub trace_norm_pt: f64,
    pub min_pt_eigenvalue: f64,
}

pub fn summarize(rho: &DensityMatrix, ppt_tol: f64) -> Result<EntanglementSummary> {
    let e = hermitian_eigen(&partial_transpose_of(rho), EIGEN_TOL)?;
    let t: f64 = e.eigenvalues.iter().map(|l| l.abs()).sum();
    Ok(EntanglementSummary {
        negativity: clamp_noise((t - 1.0) / 2.0),
        log_negativity: clamp_noise(t.log2()),
        ppt: e.min() >= -ppt_tol,
        trace_norm_pt: t,
        min_pt_eigenvalue: e.min(),
    })
}
