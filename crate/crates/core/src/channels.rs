//! Quantum instruments in Kraus form, Choi matrices, and the complete
//! positivity / PPT classification of maps.
//!
//! A map `Psi` is PPT when `Psi^Gamma(X) = (Psi(X^Gamma))^Gamma` is completely
//! positive. The test runs on the Choi matrix, where conjugating by the
//! partial transpose becomes a partial transpose of the Choi matrix on the
//! output and input copies of party A.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, partial_transpose_many, ComplexMatrix, DimSpec, C64, ZERO};
use crate::sampling::{haar_isometry, haar_unitary, rng_from_seed};
use crate::states::{DensityMatrix, Ensemble};
use crate::{BRANCH_EPS, EIGEN_TOL, INSTR_TOL, MAX_DISCARDED_WEIGHT};

/// One completely positive branch `X -> sum_k K X K^dag`.
///
/// Every operator is `out_dims.total() x in_dims.total()`. `transpose_party`
/// designates party A on both the input and output side.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    operators: Vec<ComplexMatrix>,
    in_dims: DimSpec,
    out_dims: DimSpec,
    transpose_party: usize,
}

impl KrausMap {
    /// A trace non-increasing branch: shapes consistent and
    /// `sum K^dag K <= I` within [`INSTR_TOL`].
    pub fn new(
        operators: Vec<ComplexMatrix>,
        in_dims: DimSpec,
        out_dims: DimSpec,
        transpose_party: usize,
    ) -> Result<Self> {
        let map = Self::completely_positive(operators, in_dims, out_dims, transpose_party)?;
        let top = hermitian_eigen(&map.completeness(), EIGEN_TOL)?.max();
        if top > 1.0 + INSTR_TOL {
            return Err(Error::InvalidMap(format!(
                "sum K^dag K has eigenvalue {top} > 1; the branch increases trace"
            )));
        }
        Ok(map)
    }

    /// A completely positive map with no bound on `sum K^dag K`.
    pub fn completely_positive(
        operators: Vec<ComplexMatrix>,
        in_dims: DimSpec,
        out_dims: DimSpec,
        transpose_party: usize,
    ) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidMap("no Kraus operators".into()));
        }
        let shape = (out_dims.total(), in_dims.total());
        for (i, k) in operators.iter().enumerate() {
            if k.shape() != shape {
                return Err(Error::DimMismatch(format!(
                    "Kraus operator {i} is {}x{}, dims require {}x{}",
                    k.rows(),
                    k.cols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        if transpose_party >= in_dims.len().max(out_dims.len()) {
            return Err(Error::DimMismatch(format!(
                "transpose_party {transpose_party} out of range"
            )));
        }
        Ok(Self {
            operators,
            in_dims,
            out_dims,
            transpose_party,
        })
    }

    pub fn identity(dims: DimSpec) -> Self {
        let n = dims.total();
        Self::new(vec![ComplexMatrix::identity(n)], dims.clone(), dims, 0).expect("identity is a valid branch")
    }

    /// `X -> tr(X) * state`, on inputs with `in_dims`.
    pub fn replacement(in_dims: DimSpec, state: &DensityMatrix) -> Result<Self> {
        let e = hermitian_eigen(state.matrix(), EIGEN_TOL)?;
        let d_in = in_dims.total();
        let mut ops = Vec::new();
        for (m, &l) in e.eigenvalues.iter().enumerate() {
            if l <= EIGEN_TOL {
                continue;
            }
            let amp = l.sqrt();
            let v = e.eigenvectors.column(m);
            for j in 0..d_in {
                ops.push(ComplexMatrix::from_fn(state.dim(), d_in, |r, c| {
                    if c == j {
                        v[r] * amp
                    } else {
                        ZERO
                    }
                }));
            }
        }
        Self::new(ops, in_dims, state.dims().clone(), state.transpose_party())
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn in_dims(&self) -> &DimSpec {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &DimSpec {
        &self.out_dims
    }

    pub fn transpose_party(&self) -> usize {
        self.transpose_party
    }

    /// `sum_k K^dag K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let n = self.in_dims.total();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &k.dagger().matmul(k))
    }

    /// `sum_k K x K^dag` for any operator `x` on the input space.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.in_dims.check_square(x)?;
        let n = self.out_dims.total();
        Ok(self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &x.conjugate_by(k)))
    }

    /// Choi matrix on `out (x) in`.
    pub fn choi(&self) -> ChoiMatrix {
        let d_in = self.in_dims.total();
        let d_out = self.out_dims.total();
        let n = d_in * d_out;
        let mut c = ComplexMatrix::zeros(n, n);
        for k in &self.operators {
            let v: Vec<C64> = k.entries().to_vec();
            for r in 0..n {
                if v[r] == ZERO {
                    continue;
                }
                for s in 0..n {
                    c[(r, s)] += v[r] * v[s].conj();
                }
            }
        }
        ChoiMatrix {
            matrix: c,
            in_dims: self.in_dims.clone(),
            out_dims: self.out_dims.clone(),
        }
    }

    /// Kraus form of `Psi^Gamma`, or `None` if `Psi` is not PPT.
    pub fn gamma_conjugate(&self, tol: f64) -> Result<Option<KrausMap>> {
        let c = self.choi().gamma_conjugate(self.transpose_party)?;
        if !c.is_cp(tol)? {
            return Ok(None);
        }
        c.to_kraus(tol, self.transpose_party).map(Some)
    }

    /// Smallest eigenvalue of the Choi matrix of `Psi^Gamma`.
    pub fn ppt_margin(&self) -> Result<f64> {
        let c = self.choi().gamma_conjugate(self.transpose_party)?;
        c.min_eigenvalue()
    }
}

/// `Psi(rho)`, unnormalized; its trace is the branch probability.
pub fn apply_map(psi: &KrausMap, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dims() != psi.in_dims() {
        return Err(Error::DimMismatch(format!(
            "state dims {:?} do not match map input dims {:?}",
            rho.dims().dims(),
            psi.in_dims().dims()
        )));
    }
    psi.apply(rho.matrix())
}

/// Choi matrix `sum_ij Psi(|i><j|) (x) |i><j|` on `out (x) in`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    in_dims: DimSpec,
    out_dims: DimSpec,
}

impl ChoiMatrix {
    /// Choi matrix of an arbitrary linear map given by its action.
    pub fn from_linear_map(in_dims: DimSpec, out_dims: DimSpec, map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let d_in = in_dims.total();
        let d_out = out_dims.total();
        let n = d_in * d_out;
        let mut c = ComplexMatrix::zeros(n, n);
        for i in 0..d_in {
            for j in 0..d_in {
                let mut e = ComplexMatrix::zeros(d_in, d_in);
                e[(i, j)] = C64::new(1.0, 0.0);
                let image = map(&e);
                assert_eq!(image.shape(), (d_out, d_out), "map output has wrong shape");
                for a in 0..d_out {
                    for b in 0..d_out {
                        c[(a * d_in + i, b * d_in + j)] = image[(a, b)];
                    }
                }
            }
        }
        Self {
            matrix: c,
            in_dims,
            out_dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn in_dims(&self) -> &DimSpec {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &DimSpec {
        &self.out_dims
    }

    /// Dims of the Choi matrix itself: output subsystems, then input.
    pub fn dims(&self) -> DimSpec {
        self.out_dims.concat(&self.in_dims)
    }

    /// `Psi(x) = tr_in[C (I (x) x^T)]`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.in_dims.check_square(x)?;
        let d_in = self.in_dims.total();
        let d_out = self.out_dims.total();
        Ok(ComplexMatrix::from_fn(d_out, d_out, |a, b| {
            let mut s = ZERO;
            for i in 0..d_in {
                for j in 0..d_in {
                    s += x[(i, j)] * self.matrix[(a * d_in + i, b * d_in + j)];
                }
            }
            s
        }))
    }

    /// Choi matrix of `Gamma o Psi o Gamma` with party `party` transposed on
    /// both sides.
    pub fn gamma_conjugate(&self, party: usize) -> Result<ChoiMatrix> {
        if self.in_dims.len() < 2 || self.out_dims.len() < 2 {
            return Err(Error::DimMismatch(format!(
                "PPT classification needs bipartite input and output, got {:?} -> {:?}",
                self.in_dims.dims(),
                self.out_dims.dims()
            )));
        }
        if party >= self.in_dims.len() || party >= self.out_dims.len() {
            return Err(Error::DimMismatch(format!(
                "party {party} is not a subsystem of {:?} -> {:?}",
                self.in_dims.dims(),
                self.out_dims.dims()
            )));
        }
        let which = [party, self.out_dims.len() + party];
        let matrix = partial_transpose_many(&self.matrix, &self.dims(), &which)?;
        Ok(Self {
            matrix,
            in_dims: self.in_dims.clone(),
            out_dims: self.out_dims.clone(),
        })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.matrix, EIGEN_TOL)?.min())
    }

    /// Complete positivity: Choi matrix PSD within `tol`. Non-Hermitian Choi
    /// matrices (maps that are not Hermiticity preserving) are not CP.
    pub fn is_cp(&self, tol: f64) -> Result<bool> {
        match hermitian_eigen(&self.matrix, EIGEN_TOL) {
            Ok(e) => Ok(e.min() >= -tol),
            Err(Error::NotHermitian { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Kraus operators `sqrt(lambda) unvec(v)` from the spectral
    /// decomposition. Fails if the matrix is not PSD within `tol`.
    pub fn to_kraus(&self, tol: f64, transpose_party: usize) -> Result<KrausMap> {
        let e = hermitian_eigen(&self.matrix, EIGEN_TOL)?;
        if e.min() < -tol {
            return Err(Error::InvalidMap(format!(
                "Choi matrix has eigenvalue {:e}; not completely positive",
                e.min()
            )));
        }
        let d_in = self.in_dims.total();
        let d_out = self.out_dims.total();
        let mut ops: Vec<ComplexMatrix> = e
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tol)
            .map(|(m, &l)| {
                let amp = l.sqrt();
                ComplexMatrix::from_fn(d_out, d_in, |a, i| e.eigenvectors[(a * d_in + i, m)] * amp)
            })
            .collect();
        if ops.is_empty() {
            ops.push(ComplexMatrix::zeros(d_out, d_in));
        }
        KrausMap::completely_positive(ops, self.in_dims.clone(), self.out_dims.clone(), transpose_party)
    }
}

pub fn choi(psi: &KrausMap) -> ChoiMatrix {
    psi.choi()
}

pub fn is_cp(c: &ChoiMatrix, tol: f64) -> bool {
    c.is_cp(tol).unwrap_or(false)
}

/// True iff `Psi^Gamma` is completely positive.
pub fn is_ppt_map(psi: &KrausMap, tol: f64) -> Result<bool> {
    Ok(psi.ppt_margin()? >= -tol)
}

/// Finite set of branches whose sum is trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    branches: Vec<KrausMap>,
}

impl Instrument {
    pub fn new(branches: Vec<KrausMap>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::InvalidMap("instrument has no branches".into()));
        };
        for (i, b) in branches.iter().enumerate() {
            if b.in_dims() != first.in_dims()
                || b.out_dims() != first.out_dims()
                || b.transpose_party() != first.transpose_party()
            {
                return Err(Error::DimMismatch(format!(
                    "branch {i} has dims {:?} -> {:?}, branch 0 has {:?} -> {:?}",
                    b.in_dims().dims(),
                    b.out_dims().dims(),
                    first.in_dims().dims(),
                    first.out_dims().dims()
                )));
            }
        }
        let instrument = Self { branches };
        let deviation = instrument.trace_preservation_error();
        if deviation > INSTR_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(instrument)
    }

    pub fn identity(dims: DimSpec) -> Self {
        Self::new(vec![KrausMap::identity(dims)]).expect("identity is trace preserving")
    }

    pub fn branches(&self) -> &[KrausMap] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn in_dims(&self) -> &DimSpec {
        self.branches[0].in_dims()
    }

    pub fn out_dims(&self) -> &DimSpec {
        self.branches[0].out_dims()
    }

    /// `max |sum_i sum_k K^dag K - I|` entrywise.
    pub fn trace_preservation_error(&self) -> f64 {
        let n = self.in_dims().total();
        let total = self
            .branches
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, b| &acc + &b.completeness());
        total.max_abs_diff(&ComplexMatrix::identity(n))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_preservation_error() <= tol
    }
}

/// Branch outcomes with their probabilities and normalized post-measurement
/// states. Branches with probability below [`BRANCH_EPS`] are dropped.
pub fn apply_instrument(instr: &Instrument, rho: &DensityMatrix) -> Result<Ensemble> {
    let mut members = Vec::with_capacity(instr.len());
    let mut total = 0.0;
    let mut discarded = 0.0;
    for branch in instr.branches() {
        let out = apply_map(branch, rho)?;
        let p = out.trace().re;
        total += p;
        if p < BRANCH_EPS {
            discarded += p.abs();
            continue;
        }
        let state = DensityMatrix::new(
            out.hermitian_part().scale(1.0 / p),
            branch.out_dims().clone(),
            branch.transpose_party(),
        )?;
        members.push((p, state));
    }
    if discarded > MAX_DISCARDED_WEIGHT {
        return Err(Error::WeightLoss {
            discarded,
            limit: MAX_DISCARDED_WEIGHT,
        });
    }
    if (total - 1.0).abs() > INSTR_TOL {
        return Err(Error::ProbabilityDrift { total });
    }
    Ensemble::new(members)
}

/// Splits a `(rows * blocks) x cols` isometry into its row blocks.
fn row_blocks(v: &ComplexMatrix, block_rows: usize) -> Vec<ComplexMatrix> {
    let blocks = v.rows() / block_rows;
    (0..blocks)
        .map(|b| ComplexMatrix::from_fn(block_rows, v.cols(), |r, c| v[(b * block_rows + r, c)]))
        .collect()
}

/// Local instrument on A: a Haar isometry `C^{d_A} -> C^{d_A * n * m}` cut
/// into `n * m` blocks `A_ik`; branch `i` has Kraus operators `A_ik (x) I_B`.
pub fn random_local_instrument(
    d_a: usize,
    d_b: usize,
    n_branches: usize,
    kraus_per_branch: usize,
    seed: u64,
) -> Result<Instrument> {
    check_positive(&[d_a, d_b, n_branches, kraus_per_branch])?;
    let mut rng = rng_from_seed(seed);
    let v = haar_isometry(d_a * n_branches * kraus_per_branch, d_a, &mut rng);
    let blocks = row_blocks(&v, d_a);
    let id_b = ComplexMatrix::identity(d_b);
    let dims = DimSpec::bipartite(d_a, d_b);
    let branches = blocks
        .chunks(kraus_per_branch)
        .map(|chunk| {
            let ops = chunk.iter().map(|a| a.tensor(&id_b)).collect();
            KrausMap::completely_positive(ops, dims.clone(), dims.clone(), 0)
        })
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(branches)
}

/// One round of LOCC: a random POVM on A (isometry blocks `M_i`), then a Haar
/// unitary `V_i` on B conditioned on the outcome. Branch `i` is `M_i (x) V_i`.
pub fn random_one_round_locc(d_a: usize, d_b: usize, n_outcomes: usize, seed: u64) -> Result<Instrument> {
    check_positive(&[d_a, d_b, n_outcomes])?;
    let mut rng = rng_from_seed(seed);
    let v = haar_isometry(d_a * n_outcomes, d_a, &mut rng);
    let dims = DimSpec::bipartite(d_a, d_b);
    let branches = row_blocks(&v, d_a)
        .into_iter()
        .map(|m| {
            let u = haar_unitary(d_b, &mut rng);
            KrausMap::completely_positive(vec![m.tensor(&u)], dims.clone(), dims.clone(), 0)
        })
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(branches)
}

/// Random trace non-increasing CP map: `n_kraus` blocks of a Haar isometry,
/// scaled by `sqrt(s)` with `s` uniform in `(0, 1]`.
pub fn random_cp_map(in_dims: DimSpec, out_dims: DimSpec, n_kraus: usize, seed: u64) -> Result<KrausMap> {
    check_positive(&[n_kraus])?;
    let d_in = in_dims.total();
    let d_out = out_dims.total();
    if d_out * n_kraus < d_in {
        return Err(Error::InvalidMap(format!(
            "{n_kraus} Kraus operators of shape {d_out}x{d_in} cannot form an isometry"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let v = haar_isometry(d_out * n_kraus, d_in, &mut rng);
    let s: f64 = 1.0 - rng.random::<f64>();
    let ops = row_blocks(&v, d_out).into_iter().map(|k| k.scale(s.sqrt())).collect();
    KrausMap::new(ops, in_dims, out_dims, 0)
}

fn check_positive(values: &[usize]) -> Result<()> {
    if let Some(&v) = values.iter().find(|&&v| v == 0) {
        return Err(Error::OutOfRange {
            name: "instrument parameter",
            value: v as f64,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}
