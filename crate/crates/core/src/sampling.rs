//! Seeded random matrices: complex Ginibre matrices, Haar isometries and
//! unitaries, Gaussian Hermitian matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64};

pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`; trials keyed this way are
/// reproducible regardless of evaluation order.
pub fn rng_for_stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Complex normal with `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let entries = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, entries).expect("finite Gaussian samples")
}

/// Haar-distributed isometry `rows x cols` (`rows >= cols`): Gram-Schmidt on
/// a Ginibre matrix, which is its QR factor with positive `diag(R)`.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols, got {rows}x{cols}");
    loop {
        let g = ginibre(rows, cols, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    haar_isometry(d, d, rng)
}

/// `(G + G^dag) / 2` for Ginibre `G`.
pub fn gaussian_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. `None` when the
/// columns are numerically dependent.
fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let (rows, cols) = m.shape();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v = m.column(c);
        for _ in 0..2 {
            for q in &basis {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        basis.push(v);
    }
    let mut q = ComplexMatrix::zeros(rows, cols);
    for (c, v) in basis.iter().enumerate() {
        for (r, &z) in v.iter().enumerate() {
            q[(r, c)] = z;
        }
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometry_columns_are_orthonormal() {
        let mut rng = rng_from_seed(7);
        for &(r, c) in &[(2, 2), (8, 2), (12, 3), (9, 9)] {
            let v = haar_isometry(r, c, &mut rng);
            let gram = v.dagger().matmul(&v);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(c)) < 1e-13);
        }
    }

    #[test]
    fn seeded_streams_are_deterministic_and_distinct() {
        let a = ginibre(3, 3, &mut rng_for_stream(5, 1));
        let b = ginibre(3, 3, &mut rng_for_stream(5, 1));
        let c = ginibre(3, 3, &mut rng_for_stream(5, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_hermitian_is_exactly_hermitian() {
        let h = gaussian_hermitian(5, &mut rng_from_seed(1));
        assert_eq!(h.hermiticity_deviation(), 0.0);
    }
}
