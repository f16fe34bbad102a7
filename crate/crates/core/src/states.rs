//! Density matrices on composite spaces and the families used by the
//! verification harness.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, partial_trace, ComplexMatrix, DimSpec, C64, ONE, ZERO};
use crate::sampling::{ginibre, rng_from_seed};
use crate::{EIGEN_TOL, STATE_TOL};

/// A validated state: Hermitian, unit trace and positive semidefinite, each
/// within the tolerance it was built with.
///
/// `transpose_party` names the subsystem playing the role of party A; the
/// partial transpose in every monotone acts on it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: DimSpec,
    transpose_party: usize,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: DimSpec, transpose_party: usize) -> Result<Self> {
        Self::with_tolerance(matrix, dims, transpose_party, STATE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, dims: DimSpec, transpose_party: usize, tol: f64) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidState(format!(
                "a bipartite state needs at least two subsystems, got dims {:?}",
                dims.dims()
            )));
        }
        dims.check_square(&matrix)?;
        if transpose_party >= dims.len() {
            return Err(Error::InvalidState(format!(
                "transpose_party {transpose_party} out of range for {} subsystems",
                dims.len()
            )));
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {deviation:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > tol {
            return Err(Error::InvalidState(format!(
                "trace is {} + {}i, expected 1",
                trace.re, trace.im
            )));
        }
        let min_eig = hermitian_eigen(&matrix, EIGEN_TOL.max(tol))
            .map_err(|e| Error::InvalidState(e.to_string()))?
            .min();
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self {
            matrix,
            dims,
            transpose_party,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn transpose_party(&self) -> usize {
        self.transpose_party
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Same state with party A moved to another subsystem.
    pub fn with_transpose_party(mut self, party: usize) -> Result<Self> {
        self.dims.check_index(party)?;
        self.transpose_party = party;
        Ok(self)
    }

    /// `rho (x) sigma` with the subsystems of `self` first. Party A of the
    /// result is party A of `self`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.matrix.tensor(&other.matrix),
            self.dims.concat(&other.dims),
            self.transpose_party,
        )
    }

    /// `U rho U^dag`, validated again.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.matrix.conjugate_by(u), self.dims.clone(), self.transpose_party)
    }
}

/// Weighted collection of states on a common space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::EmptyEnsemble);
        };
        for (i, (w, s)) in members.iter().enumerate() {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidEnsemble(format!("weight {i} is {w}")));
            }
            if s.dims() != first.dims() || s.transpose_party() != first.transpose_party() {
                return Err(Error::DimMismatch(format!(
                    "member {i} has dims {:?} (party {}) but member 0 has {:?} (party {})",
                    s.dims().dims(),
                    s.transpose_party(),
                    first.dims().dims(),
                    first.transpose_party()
                )));
            }
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.members.iter().map(|(w, _)| *w)
    }

    /// `sum_i p_i rho_i`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        let (_, first) = &self.members[0];
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in &self.members {
            acc = &acc + &s.matrix().scale(*w);
        }
        DensityMatrix::new(acc, first.dims().clone(), first.transpose_party())
    }
}

/// `|psi><psi|` for a normalized amplitude vector.
pub fn pure_state(amplitudes: &[C64], dims: DimSpec) -> Result<DensityMatrix> {
    if amplitudes.len() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "{} amplitudes for dims {:?}",
            amplitudes.len(),
            dims.dims()
        )));
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::NotNormalized { norm });
    }
    DensityMatrix::new(ComplexMatrix::projector(amplitudes), dims, 0)
}

/// Projector onto `sum_i |ii> / sqrt(d)` on `d x d`.
pub fn max_entangled(d: usize) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    pure_state(&v, DimSpec::bipartite(d, d)).expect("normalized by construction")
}

/// Singlet `(|01> - |10>) / sqrt(2)`.
pub fn singlet() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO];
    pure_state(&v, DimSpec::bipartite(2, 2)).expect("normalized by construction")
}

/// Two-qubit Werner state `p |Psi-><Psi-| + (1 - p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            min: 0.0,
            max: 1.0,
        });
    }
    let noise = ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    let m = &singlet().into_matrix().scale(p) + &noise;
    DensityMatrix::new(m, DimSpec::bipartite(2, 2), 0)
}

/// `G G^dag / tr(G G^dag)` with `G` a `dim x rank` Ginibre matrix drawn from
/// `seed`. Full rank gives the Hilbert-Schmidt measure.
pub fn random_density(dims: &DimSpec, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = dims.total();
    if rank == 0 || rank > dim {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            min: 1.0,
            max: dim as f64,
        });
    }
    let g = ginibre(dim, rank, &mut rng_from_seed(seed));
    let gg = g.matmul(&g.dagger());
    let t = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / t), dims.clone(), 0)
}

/// Block state `sum_i p_i rho_i (x) |i><i|_M`.
///
/// The marker is appended as the last (least significant) subsystem, on the
/// side that is not transposed, so the partial transpose stays block
/// diagonal. Dims become `[..member dims, k]`.
pub fn marker_extension(e: &Ensemble) -> Result<DensityMatrix> {
    if e.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let k = e.len();
    let (_, first) = &e.members()[0];
    let dims = first.dims().concat(&DimSpec::new(vec![k])?);
    let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
    for (i, (w, s)) in e.members().iter().enumerate() {
        let mut marker = ComplexMatrix::zeros(k, k);
        marker[(i, i)] = C64::new(*w, 0.0);
        acc = &acc + &s.matrix().tensor(&marker);
    }
    DensityMatrix::new(acc, dims, first.transpose_party())
}

/// Traces the marker back out.
pub fn forget_marker(marked: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = marked.dims();
    let last = dims.len() - 1;
    let reduced = partial_trace(marked.matrix(), dims, last)?;
    let rest = dims
        .without(last)
        .ok_or_else(|| Error::DimMismatch("no marker".into()))?;
    DensityMatrix::new(reduced, rest, marked.transpose_party())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_transpose;
    use crate::linalg::trace_norm_hermitian;

    #[test]
    fn pure_state_examples() {
        let mut v = vec![ZERO; 4];
        v[0] = ONE;
        let s = pure_state(&v, DimSpec::bipartite(2, 2)).unwrap();
        assert_eq!(s.matrix(), &ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]));

        let sing = singlet();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.5, -0.5, 0.0],
            &[0.0, -0.5, 0.5, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(sing.matrix().approx_eq(&expected, 1e-15));
        assert!((sing.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let v = vec![ONE; 4];
        assert!(matches!(
            pure_state(&v, DimSpec::bipartite(2, 2)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn max_entangled_d1_is_scalar_one() {
        let s = max_entangled(1);
        assert_eq!(s.matrix(), &ComplexMatrix::identity(1));
        assert_eq!(s.dims().dims(), &[1, 1]);
    }

    #[test]
    fn max_entangled_partial_transpose_norm() {
        for d in 2..=3 {
            let s = max_entangled(d);
            let pt = partial_transpose(s.matrix(), s.dims(), 0).unwrap();
            let t = trace_norm_hermitian(&pt, EIGEN_TOL).unwrap();
            assert!((t - d as f64).abs() < 1e-12, "d={d}: {t}");
        }
    }

    #[test]
    fn werner_endpoints_and_range() {
        let w0 = werner(0.0).unwrap();
        assert!(w0.matrix().approx_eq(&ComplexMatrix::identity(4).scale(0.25), 0.0));
        let w1 = werner(1.0).unwrap();
        assert!(w1.matrix().approx_eq(singlet().matrix(), 1e-16));
        assert!(matches!(werner(1.5), Err(Error::OutOfRange { .. })));
        assert!(werner(-0.1).is_err());
        assert!(werner(f64::NAN).is_err());
    }

    #[test]
    fn random_density_contract() {
        let dims = DimSpec::bipartite(2, 3);
        for rank in 1..=6 {
            let a = random_density(&dims, rank, 99).unwrap();
            let b = random_density(&dims, rank, 99).unwrap();
            assert_eq!(a, b);
            let spec = hermitian_eigen(a.matrix(), EIGEN_TOL).unwrap();
            let nonzero = spec.eigenvalues.iter().filter(|l| **l > 1e-12).count();
            assert_eq!(nonzero, rank);
        }
        let one = random_density(&DimSpec::bipartite(1, 1), 1, 3).unwrap();
        assert!(one.matrix().approx_eq(&ComplexMatrix::identity(1), 1e-15));
        assert!(random_density(&dims, 7, 0).is_err());
        assert!(random_density(&dims, 0, 0).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let dims = DimSpec::bipartite(2, 2);
        let not_unit = ComplexMatrix::identity(4);
        assert!(DensityMatrix::new(not_unit, dims.clone(), 0).is_err());
        let negative = ComplexMatrix::from_real_diag(&[1.5, -0.5, 0.0, 0.0]);
        assert!(DensityMatrix::new(negative, dims.clone(), 0).is_err());
        let mut skew = ComplexMatrix::identity(4).scale(0.25);
        skew[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(skew, dims.clone(), 0).is_err());
        let ok = ComplexMatrix::identity(4).scale(0.25);
        assert!(DensityMatrix::new(ok.clone(), dims.clone(), 2).is_err());
        assert!(DensityMatrix::new(ok, DimSpec::new(vec![4]).unwrap(), 0).is_err());
    }

    #[test]
    fn ensemble_validation() {
        let a = werner(0.2).unwrap();
        let b = werner(0.9).unwrap();
        assert!(Ensemble::new(vec![]).is_err());
        assert!(Ensemble::new(vec![(0.5, a.clone()), (0.4, b.clone())]).is_err());
        assert!(Ensemble::new(vec![(1.2, a.clone()), (-0.2, b.clone())]).is_err());
        let other = max_entangled(3);
        assert!(matches!(
            Ensemble::new(vec![(0.5, a.clone()), (0.5, other)]),
            Err(Error::DimMismatch(_))
        ));
        let e = Ensemble::new(vec![(0.5, a), (0.5, b)]).unwrap();
        let mix = e.mixture().unwrap();
        assert!(mix.matrix().approx_eq(werner(0.55).unwrap().matrix(), 1e-15));
    }

    #[test]
    fn marker_extension_single_member() {
        let rho = werner(0.7).unwrap();
        let e = Ensemble::new(vec![(1.0, rho.clone())]).unwrap();
        let marked = marker_extension(&e).unwrap();
        assert_eq!(marked.dims().dims(), &[2, 2, 1]);
        assert!(marked.matrix().approx_eq(rho.matrix(), 0.0));
    }

    #[test]
    fn marker_extension_traces_back_to_mixture() {
        let dims = DimSpec::bipartite(2, 2);
        let members = vec![
            (0.2, random_density(&dims, 4, 1).unwrap()),
            (0.5, random_density(&dims, 2, 2).unwrap()),
            (0.3, random_density(&dims, 1, 3).unwrap()),
        ];
        let e = Ensemble::new(members).unwrap();
        let marked = marker_extension(&e).unwrap();
        assert_eq!(marked.dims().dims(), &[2, 2, 3]);
        let back = forget_marker(&marked).unwrap();
        assert!(back.matrix().max_abs_diff(e.mixture().unwrap().matrix()) <= 1e-12);
    }
}
