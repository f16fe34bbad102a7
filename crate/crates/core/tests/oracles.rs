//! Library results against independent reference computations.

mod common;

use negmon::channels::{apply_instrument, choi, is_cp, Instrument, KrausMap};
use negmon::linalg::{hermitian_eigen, partial_transpose};
use negmon::monotones::{log_negativity, negativity, pos_neg_parts, trace_norm_pt};
use negmon::sampling::{gaussian_hermitian, rng_from_seed};
use negmon::states::{marker_extension, max_entangled, random_density, werner, Ensemble};
use negmon::verifier::werner_trace_norm_closed_form;
use negmon::{ComplexMatrix, DimSpec, C64, EIGEN_TOL};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn bell_partial_transpose_characteristic_polynomial() {
    let pt = common::partial_transpose_first(&common::bell_matrix(), 2, 2);
    let coeffs = common::characteristic_polynomial(&pt);
    let expected = common::polynomial_from_roots(&[-0.5, 0.5, 0.5, 0.5]);
    for (got, want) in coeffs.iter().zip(&expected) {
        assert!((got - want).norm() < 1e-14, "{coeffs:?} vs {expected:?}");
    }
    let lib = hermitian_eigen(
        &partial_transpose(&common::bell_matrix(), &DimSpec::bipartite(2, 2), 0).unwrap(),
        EIGEN_TOL,
    )
    .unwrap();
    for (got, want) in lib.eigenvalues.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        close(*got, want, 1e-12);
    }
}

#[test]
fn partial_transpose_matches_index_oracle() {
    for (d_a, d_b, seed) in [(2, 2, 1), (2, 3, 2), (3, 2, 3), (3, 3, 4)] {
        let m = gaussian_hermitian(d_a * d_b, &mut rng_from_seed(seed));
        let lib = partial_transpose(&m, &DimSpec::bipartite(d_a, d_b), 0).unwrap();
        assert_eq!(lib, common::partial_transpose_first(&m, d_a, d_b));
    }
}

#[test]
fn eigenvalues_match_real_embedding_oracle() {
    for seed in 0..50u64 {
        let d = 2 + (seed as usize % 8);
        let m = gaussian_hermitian(d, &mut rng_from_seed(seed));
        let lib = hermitian_eigen(&m, EIGEN_TOL).unwrap().eigenvalues;
        let oracle = common::eigenvalues(&m);
        let scale = m.frobenius_norm();
        for (a, b) in lib.iter().zip(&oracle) {
            close(*a, *b, 1e-12 * scale);
        }
    }
}

#[test]
fn maximally_entangled_trace_norms() {
    for d in [2usize, 3] {
        let oracle = common::trace_norm(&common::partial_transpose_first(&common::max_entangled_matrix(d), d, d));
        close(oracle, d as f64, 1e-12);
        close(trace_norm_pt(&max_entangled(d)).unwrap(), d as f64, 1e-9);
        close(negativity(&max_entangled(d)).unwrap(), (d as f64 - 1.0) / 2.0, 1e-9);
    }
}

#[test]
fn werner_family_against_oracle() {
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let oracle = common::trace_norm(&common::partial_transpose_first(&common::werner_matrix(p), 2, 2));
        close(oracle, werner_trace_norm_closed_form(p), 1e-12);
        let rho = werner(p).unwrap();
        assert!(rho.matrix().approx_eq(&common::werner_matrix(p), 1e-15));
        close(trace_norm_pt(&rho).unwrap(), oracle, 1e-10);
        close(negativity(&rho).unwrap(), f64::max(0.0, (3.0 * p - 1.0) / 4.0), 1e-10);
    }
    close(
        log_negativity(&werner(2.0 / 3.0).unwrap()).unwrap(),
        1.5f64.log2(),
        1e-10,
    );
}

#[test]
fn bell_negative_part() {
    let pt = common::partial_transpose_first(&common::bell_matrix(), 2, 2);
    let parts = pos_neg_parts(&pt, EIGEN_TOL).unwrap();
    close(parts.negative_trace(), 0.5, 1e-12);
    close(parts.positive_trace(), 1.5, 1e-12);
}

#[test]
fn identity_choi_spectrum() {
    let c = choi(&KrausMap::identity(DimSpec::new(vec![2]).unwrap()));
    let oracle = common::eigenvalues(c.matrix());
    for (got, want) in oracle.iter().zip([0.0, 0.0, 0.0, 2.0]) {
        close(*got, want, 1e-12);
    }
    assert!(is_cp(&c, 1e-9));
}

#[test]
fn bell_measurement_by_hand() {
    let dims = DimSpec::bipartite(2, 2);
    let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]).tensor(&ComplexMatrix::identity(2));
    let p1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]).tensor(&ComplexMatrix::identity(2));
    let instr = Instrument::new(vec![
        KrausMap::new(vec![p0], dims.clone(), dims.clone(), 0).unwrap(),
        KrausMap::new(vec![p1], dims.clone(), dims.clone(), 0).unwrap(),
    ])
    .unwrap();
    let out = apply_instrument(&instr, &max_entangled(2)).unwrap();
    let expected = [
        ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]),
        ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.0, 1.0]),
    ];
    assert_eq!(out.len(), 2);
    for ((p, rho), want) in out.members().iter().zip(&expected) {
        close(*p, 0.5, 1e-12);
        assert!(rho.matrix().approx_eq(want, 1e-12));
        close(negativity(rho).unwrap(), 0.0, 1e-12);
    }
}

#[test]
fn marker_block_additivity_against_oracle() {
    let dims = DimSpec::bipartite(2, 2);
    for seed in 0..10u64 {
        let members = vec![
            (0.2, random_density(&dims, 2, seed).unwrap()),
            (0.5, random_density(&dims, 4, seed + 100).unwrap()),
            (0.3, random_density(&dims, 1, seed + 200).unwrap()),
        ];
        let expected: f64 = members
            .iter()
            .map(|(p, rho)| p * common::trace_norm(&common::partial_transpose_first(rho.matrix(), 2, 2)))
            .sum();
        let marked = marker_extension(&Ensemble::new(members).unwrap()).unwrap();
        // A is the first factor; B together with the marker forms the second.
        let oracle = common::trace_norm(&common::partial_transpose_first(marked.matrix(), 2, 6));
        close(oracle, expected, 1e-12);
        close(trace_norm_pt(&marked).unwrap(), expected, 1e-10);
    }
}

#[test]
fn transpose_map_choi_is_swap() {
    let c = negmon::channels::ChoiMatrix::from_linear_map(
        DimSpec::new(vec![2]).unwrap(),
        DimSpec::new(vec![2]).unwrap(),
        |x| x.transpose(),
    );
    let swap = ComplexMatrix::from_fn(4, 4, |r, col| {
        let (a, i) = (r / 2, r % 2);
        let (b, j) = (col / 2, col % 2);
        if a == j && i == b {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    assert!(c.matrix().approx_eq(&swap, 1e-15));
    close(common::eigenvalues(c.matrix())[0], -1.0, 1e-12);
    assert!(!is_cp(&c, 1e-9));
}
