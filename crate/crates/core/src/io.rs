//! JSON interchange formats.
//!
//! * matrix: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`, row-major;
//! * state: the matrix object plus `"dims": [..]` and `"transpose_party": i`
//!   (defaults to 0);
//! * instrument: `{"in_dims": [..], "out_dims": [..], "branches":
//!   [{"kraus": [matrix, ...]}, ...]}` with optional `"transpose_party"`;
//! * ensemble: `{"members": [{"weight": p, "state": state}, ...]}`.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so a
//! write/read cycle preserves every bit.

use serde::{Deserialize, Serialize};

use crate::channels::{Instrument, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DimSpec, C64};
use crate::states::{DensityMatrix, Ensemble};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub transpose_party: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchJson {
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstrumentJson {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    #[serde(default)]
    pub transpose_party: usize,
    pub branches: Vec<BranchJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberJson {
    pub weight: f64,
    pub state: StateJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub members: Vec<MemberJson>,
}

fn context(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Parse(format!("{field}: {e}"))
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let entries = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(self.rows, self.cols, entries).map_err(context("entries"))
    }
}

impl From<&DensityMatrix> for StateJson {
    fn from(s: &DensityMatrix) -> Self {
        Self {
            matrix: s.matrix().into(),
            dims: s.dims().dims().to_vec(),
            transpose_party: s.transpose_party(),
        }
    }
}

impl StateJson {
    pub fn to_state(&self) -> Result<DensityMatrix> {
        let matrix = self.matrix.to_matrix()?;
        let dims = DimSpec::new(self.dims.clone()).map_err(context("dims"))?;
        DensityMatrix::new(matrix, dims, self.transpose_party).map_err(|e| match e {
            Error::DimMismatch(_) => context("dims")(e),
            other => context("matrix")(other),
        })
    }
}

impl From<&Instrument> for InstrumentJson {
    fn from(instr: &Instrument) -> Self {
        Self {
            in_dims: instr.in_dims().dims().to_vec(),
            out_dims: instr.out_dims().dims().to_vec(),
            transpose_party: instr.branches()[0].transpose_party(),
            branches: instr
                .branches()
                .iter()
                .map(|b| BranchJson {
                    kraus: b.operators().iter().map(MatrixJson::from).collect(),
                })
                .collect(),
        }
    }
}

impl InstrumentJson {
    /// Branches as Kraus maps, without the trace-preservation check.
    pub fn to_branches(&self) -> Result<Vec<KrausMap>> {
        let in_dims = DimSpec::new(self.in_dims.clone()).map_err(context("in_dims"))?;
        let out_dims = DimSpec::new(self.out_dims.clone()).map_err(context("out_dims"))?;
        self.branches
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let field = format!("branches[{i}].kraus");
                let ops = b
                    .kraus
                    .iter()
                    .map(|m| m.to_matrix())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Parse(format!("{field}: {e}")))?;
                KrausMap::new(ops, in_dims.clone(), out_dims.clone(), self.transpose_party)
                    .map_err(|e| Error::Parse(format!("{field}: {e}")))
            })
            .collect()
    }

    pub fn to_instrument(&self) -> Result<Instrument> {
        Instrument::new(self.to_branches()?)
    }
}

impl From<&Ensemble> for EnsembleJson {
    fn from(e: &Ensemble) -> Self {
        Self {
            members: e
                .members()
                .iter()
                .map(|(w, s)| MemberJson {
                    weight: *w,
                    state: s.into(),
                })
                .collect(),
        }
    }
}

impl EnsembleJson {
    pub fn to_ensemble(&self) -> Result<Ensemble> {
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.state
                    .to_state()
                    .map(|s| (m.weight, s))
                    .map_err(|e| Error::Parse(format!("members[{i}].state: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(members).map_err(context("members"))
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    render(&MatrixJson::from(m))
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    parse::<StateJson>(text)?.to_state()
}

pub fn state_to_json(s: &DensityMatrix) -> String {
    render(&StateJson::from(s))
}

pub fn instrument_from_json(text: &str) -> Result<Instrument> {
    parse::<InstrumentJson>(text)?.to_instrument()
}

pub fn instrument_to_json(instr: &Instrument) -> String {
    render(&InstrumentJson::from(instr))
}

pub fn ensemble_from_json(text: &str) -> Result<Ensemble> {
    parse::<EnsembleJson>(text)?.to_ensemble()
}

pub fn ensemble_to_json(e: &Ensemble) -> String {
    render(&EnsembleJson::from(e))
}
