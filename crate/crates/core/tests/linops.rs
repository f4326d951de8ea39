mod common;

use adasmooth::linops::{gaussian_kernel, haar_forward, haar_inverse, Blur};
use adasmooth::{Error, LinearMap};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn adjoint_residual(m: &LinearMap<f64>, x: &[f64], y: &[f64]) -> f64 {
    let lhs = dot(&m.apply(x).unwrap(), y);
    let rhs = dot(x, &m.adjoint(y).unwrap());
    (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()))
}

#[test]
fn apply_and_adjoint_examples() {
    let id = LinearMap::<f64>::identity(3);
    assert_eq!(id.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    assert_eq!(id.adjoint(&[4.0, 5.0, 6.0]).unwrap(), vec![4.0, 5.0, 6.0]);

    let m = LinearMap::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
    assert_eq!(m.apply(&[1.0, 1.0]).unwrap(), vec![1.0, 2.0, 2.0]);
    assert_eq!(m.adjoint(&[1.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0]);
}

#[test]
fn dimension_mismatch_is_reported() {
    let m = LinearMap::<f64>::zero(3, 2);
    assert!(matches!(m.apply(&[1.0]), Err(Error::DimensionMismatch { .. })));
    assert!(matches!(m.adjoint(&[1.0]), Err(Error::DimensionMismatch { .. })));
    assert!(LinearMap::compose(LinearMap::<f64>::zero(2, 4), LinearMap::zero(3, 2)).is_err());
    assert!(LinearMap::<f64>::dense(2, 2, vec![1.0; 3]).is_err());
}

#[test]
fn composition_matches_sequential_application() {
    let mut r = rng(11);
    let a = random_dense(&mut r, 8, 8);
    let w = LinearMap::haar(4, 2, 1).unwrap();
    let c = LinearMap::compose(w.clone(), a.clone()).unwrap();
    let x = uniform_vec(&mut r, 8, 1.0);
    let seq = w.apply(&a.apply(&x).unwrap()).unwrap();
    assert!(dist(&c.apply(&x).unwrap(), &seq) < 1e-14);
}

#[test]
fn random_dense_adjoint_identity() {
    let mut r = rng(12);
    let m = random_dense(&mut r, 5, 4);
    let x = uniform_vec(&mut r, 4, 1.0);
    let y = uniform_vec(&mut r, 5, 1.0);
    assert!(adjoint_residual(&m, &x, &y) < 1e-12);
}

#[test]
fn every_kind_satisfies_adjoint_consistency() {
    let mut r = rng(13);
    let blur = Blur::new(gaussian_kernel(3, 1.0), 3, 3, (1, 1), 8, 8).unwrap();
    let maps = vec![
        LinearMap::identity(64),
        random_dense(&mut r, 64, 64),
        LinearMap::Blur(blur.clone()),
        LinearMap::haar(8, 8, 3).unwrap(),
        LinearMap::compose(LinearMap::haar(8, 8, 2).unwrap(), LinearMap::Blur(blur)).unwrap(),
        LinearMap::block_row(vec![random_dense(&mut r, 64, 10), LinearMap::identity(64)]).unwrap(),
        random_dense(&mut r, 64, 30).transpose(),
    ];
    for m in &maps {
        for _ in 0..100 {
            let x = uniform_vec(&mut r, m.in_dim(), 1.0);
            let y = uniform_vec(&mut r, m.out_dim(), 1.0);
            assert!(adjoint_residual(m, &x, &y) < 1e-10, "{m:?}");
        }
    }
}

#[test]
fn operator_norm_examples() {
    assert_eq!(LinearMap::<f64>::identity(4).operator_norm(1e-12, 100).unwrap(), 1.0);
    let d = LinearMap::from_rows(&[vec![3.0f64, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!((d.operator_norm(1e-12, 1000).unwrap() - 3.0).abs() < 1e-10);
    assert_eq!(LinearMap::<f64>::zero(3, 2).operator_norm(1e-12, 10).unwrap(), 0.0);
}

#[test]
fn operator_norm_matches_svd() {
    let mut r = rng(14);
    let data = uniform_vec(&mut r, 30, 1.0);
    let m = LinearMap::dense(6, 5, data.clone()).unwrap();
    let svd = DMatrix::from_row_slice(6, 5, &data).singular_values();
    let sigma = svd.iter().cloned().fold(0.0, f64::max);
    let est = m.operator_norm(1e-14, 100_000).unwrap();
    assert!((est - sigma).abs() <= 1e-8 * sigma, "{est} vs {sigma}");
}

#[test]
fn operator_norm_reports_non_convergence() {
    let mut r = rng(15);
    let m = random_dense(&mut r, 6, 5);
    match m.operator_norm(1e-15, 2) {
        Err(Error::NoConvergence { iterations, estimate }) => {
            assert_eq!(iterations, 2);
            assert!(estimate > 0.0);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
    assert!(m.operator_norm(0.0, 10).is_err());
}

#[test]
fn operator_norm_kernel_start_vector() {
    // all-ones lies in the kernel; the fallback start must still find sigma = 2.
    let m = LinearMap::from_rows(&[vec![1.0f64, -1.0], vec![1.0, -1.0]]).unwrap();
    assert!((m.operator_norm(1e-12, 1000).unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn haar_examples() {
    let c = 0.7f64;
    let coeffs = haar_forward(&[c; 16], 4, 4, 2).unwrap();
    assert!((coeffs[0] - 4.0 * c).abs() < 1e-14);
    assert!(coeffs[1..].iter().all(|v| v.abs() < 1e-14));

    let mut r = rng(16);
    let x = uniform_vec(&mut r, 64, 1.0);
    let back = haar_inverse(&haar_forward(&x, 8, 8, 3).unwrap(), 8, 8, 3).unwrap();
    assert!(dist(&back, &x) < 1e-12);

    let x = uniform_vec(&mut r, 256, 1.0);
    let y = haar_forward(&x, 16, 16, 4).unwrap();
    assert!((norm(&y) - norm(&x)).abs() < 1e-10);

    assert!(haar_forward(&[0.0; 36], 6, 6, 2).is_err());
    assert!(LinearMap::<f64>::haar(12, 16, 4).is_err());
}

#[test]
fn blur_examples() {
    let mut r = rng(17);
    let delta = Blur::new(vec![1.0], 1, 1, (0, 0), 8, 8).unwrap();
    let x = uniform_vec(&mut r, 64, 1.0);
    assert_eq!(LinearMap::Blur(delta).apply(&x).unwrap(), x);

    let pair = LinearMap::Blur(Blur::new(vec![0.5, 0.5], 1, 2, (0, 0), 1, 4).unwrap());
    assert_eq!(pair.apply(&[1.0, 0.0, 0.0, 0.0]).unwrap(), vec![0.5, 0.5, 0.0, 0.0]);

    let g = LinearMap::Blur(Blur::new(gaussian_kernel(3, 1.0), 3, 3, (1, 1), 8, 8).unwrap());
    let y = uniform_vec(&mut r, 64, 1.0);
    assert!(adjoint_residual(&g, &x, &y) < 1e-12);

    assert!(Blur::new(vec![f64::NAN], 1, 1, (0, 0), 2, 2).is_err());
    assert!(Blur::new(vec![1.0], 1, 1, (1, 0), 2, 2).is_err());
}

#[test]
fn default_gaussian_kernel_is_normalized_with_unit_norm() {
    let k: Vec<f64> = gaussian_kernel(9, 2.0);
    assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    let b = LinearMap::Blur(Blur::<f64>::gaussian_default(16, 16).unwrap());
    assert!((b.operator_norm(1e-12, 1000).unwrap() - 1.0).abs() < 1e-10);
}

proptest! {
    #[test]
    fn operator_norm_bounds_every_probe(seed in 0u64..1000, rows in 1usize..7, cols in 1usize..7) {
        let mut r = rng(seed);
        let m = random_dense(&mut r, rows, cols);
        let sigma = m.operator_norm(1e-12, 100_000).unwrap();
        let x = uniform_vec(&mut r, cols, 1.0);
        let ratio = norm(&m.apply(&x).unwrap()) / norm(&x);
        prop_assert!(ratio <= sigma * (1.0 + 1e-6) + 1e-12);
    }

    #[test]
    fn haar_round_trip(seed in 0u64..1000, levels in 1usize..4) {
        let mut r = rng(seed);
        let side = 1 << levels;
        let (h, w) = (side * 2, side);
        let x = uniform_vec(&mut r, h * w, 5.0);
        let m = LinearMap::haar(h, w, levels).unwrap();
        let back = m.adjoint(&m.apply(&x).unwrap()).unwrap();
        prop_assert!(dist(&back, &x) < 1e-10);
    }
}
