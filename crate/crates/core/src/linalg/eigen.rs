//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! the real symmetric Schur rotation, so the pivot is annihilated exactly.
//! Sizes in this crate stay below 100, where Jacobi's cubic sweeps are cheap
//! and its accuracy on small eigenvalues is hard to beat.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Sweep budget before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian matrix, eigenvalues ascending, eigenvectors as
/// orthonormal columns in matching order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `V f(diag(lambda)) V^dag`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * w;
                if vr == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Checks Hermiticity of `m` against `tol * max(1, ||m||_max)`.
pub fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let bound = tol * m.max_norm().max(1.0);
    let deviation = m.hermiticity_deviation();
    if deviation > bound {
        return Err(Error::NotHermitian { deviation, tol: bound });
    }
    Ok(())
}

/// Diagonalizes a Hermitian matrix.
///
/// `tol` is the relative Hermiticity tolerance (scaled by `max(1, ||m||_max)`).
/// Only the upper triangle (plus the real part of the diagonal) of the
/// Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    check_hermitian(m, tol)?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    if n == 1 || scale == 0.0 {
        return Ok(sorted(a, v));
    }
    // Converged once the off-diagonal mass is at the rounding floor.
    let threshold = f64::EPSILON * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotated |= rotate(&mut a, &mut v, p, q, threshold / n as f64);
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(sorted(a, v))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with a unitary rotation `U` acting on the (p, q)
/// plane: `a <- U^dag a U`, `v <- v U`. Returns false when the pivot is
/// already negligible.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, skip: f64) -> bool {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= skip {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // With D = diag(1, e^{-i phi}) the pivot block becomes real symmetric.
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = D * [[c, s], [-s, c]]
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
    true
}

fn sorted(a: ComplexMatrix, v: ComplexMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EIGEN_TOL;

    fn check_invariants(m: &ComplexMatrix, e: &HermitianEigen) {
        let scale = m.max_norm().max(1.0);
        assert!(e.reconstruct().max_abs_diff(m) <= EIGEN_TOL * scale);
        let gram = e.eigenvectors.dagger().matmul(&e.eigenvectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(m.rows())) <= EIGEN_TOL);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        let e = hermitian_eigen(&m, EIGEN_TOL).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        check_invariants(&m, &e);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigen(&x, EIGEN_TOL).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        check_invariants(&x, &e);
    }

    #[test]
    fn complex_pauli_y() {
        let y = ComplexMatrix::new(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
        let e = hermitian_eigen(&y, EIGEN_TOL).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        check_invariants(&y, &e);
    }

    #[test]
    fn dense_complex_hermitian() {
        let m = ComplexMatrix::from_fn(6, 6, |r, c| {
            let (lo, hi) = (r.min(c) as f64, r.max(c) as f64);
            let im = if r < c {
                0.3 * (lo - hi)
            } else if r > c {
                -0.3 * (lo - hi)
            } else {
                0.0
            };
            C64::new((lo + 1.0) / (hi + 2.0), im)
        });
        let e = hermitian_eigen(&m, EIGEN_TOL).unwrap();
        check_invariants(&m, &e);
        let trace: f64 = e.eigenvalues.iter().sum();
        assert!((trace - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_zero_inputs() {
        let z = ComplexMatrix::zeros(4, 4);
        let e = hermitian_eigen(&z, EIGEN_TOL).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 4]);
        let id = ComplexMatrix::identity(5);
        let e = hermitian_eigen(&id, EIGEN_TOL).unwrap();
        check_invariants(&id, &e);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigen(&m, EIGEN_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }
}
