use serde::Serialize;

use crate::error::{Error, Result};
use crate::monotones::{log_negativity, negativity, trace_norm_pt};
use crate::states::{werner, DensityMatrix};
use crate::SLACK_TOL;

/// Tolerance of the Werner closed form `||rho^G||_1 = max(1, (1 + 3p)/2)`.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Largest second difference of LN allowed on the entangled Werner segment.
pub const CONCAVITY_TOL: f64 = 1e-9;

/// Gap between a functional on a mixture and the mixture of its values.
/// Positive `delta` for a functional breaks convexity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub lambda: f64,
    pub ln_mixture: f64,
    pub ln_average: f64,
    pub delta_ln: f64,
    pub negativity_mixture: f64,
    pub negativity_average: f64,
    pub delta_negativity: f64,
    /// `delta_ln > SLACK_TOL`.
    pub ln_convexity_violated: bool,
}

pub fn convexity_witness(rho1: &DensityMatrix, rho2: &DensityMatrix, lambda: f64) -> Result<ConvexityWitness> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            min: 0.0,
            max: 1.0,
        });
    }
    if rho1.dims() != rho2.dims() || rho1.transpose_party() != rho2.transpose_party() {
        return Err(Error::DimMismatch(format!(
            "states have dims {:?} and {:?}",
            rho1.dims().dims(),
            rho2.dims().dims()
        )));
    }
    let mixed = &rho1.matrix().scale(lambda) + &rho2.matrix().scale(1.0 - lambda);
    let mixture = DensityMatrix::new(mixed, rho1.dims().clone(), rho1.transpose_party())?;

    let ln_mixture = log_negativity(&mixture)?;
    let ln_average = lambda * log_negativity(rho1)? + (1.0 - lambda) * log_negativity(rho2)?;
    let negativity_mixture = negativity(&mixture)?;
    let negativity_average = lambda * negativity(rho1)? + (1.0 - lambda) * negativity(rho2)?;
    let delta_ln = ln_mixture - ln_average;
    Ok(ConvexityWitness {
        lambda,
        ln_mixture,
        ln_average,
        delta_ln,
        negativity_mixture,
        negativity_average,
        delta_negativity: negativity_mixture - negativity_average,
        ln_convexity_violated: delta_ln > SLACK_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerRow {
    pub p: f64,
    pub trace_norm: f64,
    pub negativity: f64,
    pub log_negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerScan {
    pub rows: Vec<WernerRow>,
    /// Largest `| ||rho^G||_1 - max(1, (1+3p)/2) |` over the grid.
    pub max_closed_form_error: f64,
    /// Largest LN second difference over consecutive grid points with
    /// `p >= 1/3`; `None` when fewer than three such points exist.
    pub max_second_difference: Option<f64>,
    pub closed_form_ok: bool,
    pub concave_ok: bool,
}

impl WernerScan {
    pub fn passed(&self) -> bool {
        self.closed_form_ok && self.concave_ok
    }
}

pub fn werner_trace_norm_closed_form(p: f64) -> f64 {
    f64::max(1.0, (1.0 + 3.0 * p) / 2.0)
}

/// Uniform grid of `points` values on `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// Tabulates the Werner family and checks the closed form and the concavity
/// of LN on the entangled segment.
///
/// For three neighbours `p0 < p1 < p2` the second difference is
/// `2 * (interp - f(p1))` with `interp` the chord value at `p1`; on a uniform
/// grid this is `f(p0) - 2 f(p1) + f(p2)`.
pub fn werner_scan(grid: &[f64]) -> Result<WernerScan> {
    let rows = grid
        .iter()
        .map(|&p| {
            let rho = werner(p)?;
            Ok(WernerRow {
                p,
                trace_norm: trace_norm_pt(&rho)?,
                negativity: negativity(&rho)?,
                log_negativity: log_negativity(&rho)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_closed_form_error = rows
        .iter()
        .map(|r| (r.trace_norm - werner_trace_norm_closed_form(r.p)).abs())
        .fold(0.0, f64::max);

    let mut entangled: Vec<&WernerRow> = rows.iter().filter(|r| r.p >= 1.0 / 3.0 - 1e-12).collect();
    entangled.sort_by(|a, b| a.p.total_cmp(&b.p));
    entangled.dedup_by(|a, b| a.p == b.p);
    let max_second_difference = entangled
        .windows(3)
        .map(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let t = (b.p - a.p) / (c.p - a.p);
            let chord = a.log_negativity + t * (c.log_negativity - a.log_negativity);
            2.0 * (chord - b.log_negativity)
        })
        .reduce(f64::max);

    Ok(WernerScan {
        closed_form_ok: max_closed_form_error <= CLOSED_FORM_TOL,
        concave_ok: max_second_difference.is_none_or(|d| d <= CONCAVITY_TOL),
        rows,
        max_closed_form_error,
        max_second_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DimSpec;
    use crate::states::random_density;

    #[test]
    fn identical_states_have_no_gap() {
        let rho = random_density(&DimSpec::bipartite(2, 2), 3, 5).unwrap();
        let w = convexity_witness(&rho, &rho, 0.3).unwrap();
        assert!(w.delta_ln.abs() < 1e-12);
        assert!(w.delta_negativity.abs() < 1e-12);
        assert!(!w.ln_convexity_violated);
    }

    #[test]
    fn werner_mixture_breaks_ln_convexity() {
        let w = convexity_witness(&werner(1.0 / 3.0).unwrap(), &werner(1.0).unwrap(), 0.5).unwrap();
        let expected = 1.5f64.log2() - 0.5;
        assert!((w.delta_ln - expected).abs() < 1e-12);
        assert!(w.delta_ln > 0.08);
        assert!(w.ln_convexity_violated);
        assert!(w.delta_negativity.abs() < 1e-12);
    }

    #[test]
    fn witness_input_errors() {
        let a = werner(0.5).unwrap();
        let b = random_density(&DimSpec::bipartite(2, 3), 2, 1).unwrap();
        assert!(matches!(convexity_witness(&a, &b, 0.5), Err(Error::DimMismatch(_))));
        assert!(convexity_witness(&a, &a, 1.5).is_err());
    }

    #[test]
    fn scan_rows_at_endpoints() {
        let scan = werner_scan(&[0.0, 1.0]).unwrap();
        let first = scan.rows[0];
        assert!((first.trace_norm - 1.0).abs() < 1e-12);
        assert_eq!(first.negativity, 0.0);
        assert_eq!(first.log_negativity, 0.0);
        let last = scan.rows[1];
        assert!((last.trace_norm - 2.0).abs() < 1e-12);
        assert!((last.negativity - 0.5).abs() < 1e-12);
        assert!((last.log_negativity - 1.0).abs() < 1e-12);
        assert_eq!(scan.max_second_difference, None);
        assert!(scan.passed());
    }

    #[test]
    fn uniform_grid_scan_passes() {
        let scan = werner_scan(&uniform_grid(101)).unwrap();
        assert_eq!(scan.rows.len(), 101);
        assert!(
            scan.passed(),
            "{:?} {:?}",
            scan.max_closed_form_error,
            scan.max_second_difference
        );
        assert!(scan.max_second_difference.unwrap() < 0.0);
    }

    #[test]
    fn scan_rejects_out_of_range() {
        assert!(matches!(werner_scan(&[0.5, 1.2]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn ln_lies_strictly_above_its_chords() {
        let scan = werner_scan(&[0.4, 0.7, 1.0]).unwrap();
        let d = scan.max_second_difference.unwrap();
        assert!(d < -1e-3, "{d}");
    }
}
