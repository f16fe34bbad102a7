//! Dense complex linear algebra: the matrix type, Hermitian
//! eigendecomposition, and the partial operations on composite spaces.

mod eigen;
mod matrix;
mod partial;

pub use eigen::{check_hermitian, hermitian_eigen, HermitianEigen, MAX_SWEEPS};
pub use matrix::{ComplexMatrix, DimSpec, C64, ONE, ZERO};
pub use partial::{partial_trace, partial_transpose, partial_transpose_many, trace_norm_hermitian};
