use super::eigen::hermitian_eigen;
use super::matrix::{ComplexMatrix, DimSpec};
use crate::error::Result;

/// `tr|m| = sum_k |lambda_k|` for Hermitian `m`.
pub fn trace_norm_hermitian(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    let e = hermitian_eigen(m, tol)?;
    Ok(e.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Transposes the indices of subsystem `which` only.
///
/// A pure entry permutation: applying it twice returns the input bitwise.
pub fn partial_transpose(m: &ComplexMatrix, dims: &DimSpec, which: usize) -> Result<ComplexMatrix> {
    partial_transpose_many(m, dims, &[which])
}

/// Transposes every subsystem listed in `which`.
pub fn partial_transpose_many(m: &ComplexMatrix, dims: &DimSpec, which: &[usize]) -> Result<ComplexMatrix> {
    dims.check_square(m)?;
    for &w in which {
        dims.check_index(w)?;
    }
    let n = m.rows();
    let strides: Vec<(usize, usize)> = which.iter().map(|&w| (dims.stride(w), dims.dims()[w])).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (mut r2, mut c2) = (r, c);
            for &(stride, d) in &strides {
                let dr = (r2 / stride) % d;
                let dc = (c2 / stride) % d;
                r2 = r2 - dr * stride + dc * stride;
                c2 = c2 - dc * stride + dr * stride;
            }
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Traces out subsystem `which`, returning the operator on the rest.
pub fn partial_trace(m: &ComplexMatrix, dims: &DimSpec, which: usize) -> Result<ComplexMatrix> {
    dims.check_square(m)?;
    dims.check_index(which)?;
    let d = dims.dims()[which];
    let stride = dims.stride(which);
    let outer = m.rows() / (d * stride);
    let side = outer * stride;
    // Reduced index (hi, lo) expands to hi * d * stride + k * stride + lo.
    let expand = |i: usize, k: usize| (i / stride) * d * stride + k * stride + i % stride;
    Ok(ComplexMatrix::from_fn(side, side, |r, c| {
        (0..d).map(|k| m[(expand(r, k), expand(c, k))]).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::C64;
    use crate::EIGEN_TOL;

    fn bell() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ];
        ComplexMatrix::projector(&v)
    }

    fn generic(n: usize, seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |r, c| {
            C64::new((seed + r as f64 * 1.3).sin(), (c as f64 * 0.7 - seed).cos())
        })
    }

    #[test]
    fn trace_norm_examples() {
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!((trace_norm_hermitian(&z, EIGEN_TOL).unwrap() - 2.0).abs() < 1e-15);
        let rho = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]);
        assert!((trace_norm_hermitian(&rho, EIGEN_TOL).unwrap() - 1.0).abs() < 1e-14);
        let dims = DimSpec::bipartite(2, 2);
        let pt = partial_transpose(&bell(), &dims, 0).unwrap();
        assert!((trace_norm_hermitian(&pt, EIGEN_TOL).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_is_exact_involution() {
        let dims = DimSpec::new(vec![2, 3, 2]).unwrap();
        let m = generic(12, 0.4);
        for which in 0..3 {
            let twice = partial_transpose(&partial_transpose(&m, &dims, which).unwrap(), &dims, which).unwrap();
            assert_eq!(twice, m);
        }
    }

    #[test]
    fn partial_transpose_product_rule() {
        let a = generic(2, 1.0);
        let b = generic(3, 2.0);
        let dims = DimSpec::bipartite(2, 3);
        let pt = partial_transpose(&a.tensor(&b), &dims, 0).unwrap();
        assert_eq!(pt, a.transpose().tensor(&b));
        let pt_b = partial_transpose(&a.tensor(&b), &dims, 1).unwrap();
        assert_eq!(pt_b, a.tensor(&b.transpose()));
        let full = partial_transpose_many(&a.tensor(&b), &dims, &[0, 1]).unwrap();
        assert_eq!(full, a.tensor(&b).transpose());
    }

    #[test]
    fn bell_partial_transpose_has_negative_eigenvalue() {
        let dims = DimSpec::bipartite(2, 2);
        let pt = partial_transpose(&bell(), &dims, 0).unwrap();
        let e = hermitian_eigen(&pt, EIGEN_TOL).unwrap();
        assert!((e.min() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let a = generic(2, 0.1);
        let b = generic(3, 0.9);
        let dims = DimSpec::bipartite(2, 3);
        let ab = a.tensor(&b);
        let over_b = partial_trace(&ab, &dims, 1).unwrap();
        assert!(over_b.approx_eq(&a.scale_c(b.trace()), 1e-12));
        let over_a = partial_trace(&ab, &dims, 0).unwrap();
        assert!(over_a.approx_eq(&b.scale_c(a.trace()), 1e-12));

        let marginal = partial_trace(&bell(), &DimSpec::bipartite(2, 2), 1).unwrap();
        assert!(marginal.approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-15));

        let three = DimSpec::new(vec![2, 3, 2]).unwrap();
        let m = generic(12, 0.3);
        for which in 0..3 {
            let t = partial_trace(&m, &three, which).unwrap().trace();
            assert!((t - m.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn middle_subsystem_trace() {
        let a = generic(2, 0.2);
        let b = ComplexMatrix::from_real_diag(&[0.5, 0.25, 0.25]);
        let c = generic(2, 1.7);
        let dims = DimSpec::new(vec![2, 3, 2]).unwrap();
        let reduced = partial_trace(&a.tensor(&b).tensor(&c), &dims, 1).unwrap();
        assert!(reduced.approx_eq(&a.tensor(&c), 1e-12));
    }

    #[test]
    fn dimension_errors() {
        let dims = DimSpec::bipartite(2, 2);
        assert!(partial_transpose(&ComplexMatrix::identity(3), &dims, 0).is_err());
        assert!(partial_trace(&ComplexMatrix::identity(4), &dims, 2).is_err());
    }
}
