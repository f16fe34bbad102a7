//! Reference computations that share no code path with the library's
//! eigensolver or partial transpose.
#![allow(dead_code)]

use nalgebra::DMatrix;
use negmon::{ComplexMatrix, C64};

/// Eigenvalues of a Hermitian matrix via the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]` and nalgebra's symmetric eigensolver. Every
/// eigenvalue of the embedding appears twice.
pub fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let real = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut doubled: Vec<f64> = real.symmetric_eigen().eigenvalues.iter().copied().collect();
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    eigenvalues(m).iter().map(|l| l.abs()).sum()
}

/// Partial transpose on the first factor of `d_a x d_b`, written with
/// explicit four-index bookkeeping.
pub fn partial_transpose_first(m: &ComplexMatrix, d_a: usize, d_b: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_a * d_b, d_a * d_b);
    for i in 0..d_a {
        for j in 0..d_b {
            for k in 0..d_a {
                for l in 0..d_b {
                    out[(i * d_b + j, k * d_b + l)] = m[(k * d_b + j, i * d_b + l)];
                }
            }
        }
    }
    out
}

/// Coefficients `c_0..c_n` of `det(x I - m) = sum_k c_k x^k` by the
/// Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = m * M_{k-1} + c_{n-k+1} I
        let mut next = m.matmul(&acc);
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        acc = next;
        coeffs[n - k] = -(m.matmul(&acc).trace()) / k as f64;
    }
    coeffs
}

/// Coefficients of `prod_k (x - r_k)`, lowest degree first.
pub fn polynomial_from_roots(roots: &[f64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Werner state written out entry by entry.
pub fn werner_matrix(p: f64) -> ComplexMatrix {
    let d = (1.0 - p) / 4.0;
    let s = p / 2.0;
    ComplexMatrix::from_real_rows(&[
        &[d, 0.0, 0.0, 0.0],
        &[0.0, d + s, -s, 0.0],
        &[0.0, -s, d + s, 0.0],
        &[0.0, 0.0, 0.0, d],
    ])
}

pub fn bell_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.5, 0.0, 0.0, 0.5],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.5, 0.0, 0.0, 0.5],
    ])
}

/// `sum_ij |ii><jj| / d` on `d x d`.
pub fn max_entangled_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            C64::new(1.0 / d as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}
