mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xling_core::lsi::{truncated_svd, SvdOptions};

#[test]
fn thirty_random_matrices_match_dense_svd() {
    let r = support::svd_suite(7);
    assert!(r.rank_errors.is_empty(), "rank short in cases {:?}", r.rank_errors);
    assert!(r.worst_sigma < 1e-6, "singular value error {:e}", r.worst_sigma);
    assert!(r.worst_angle < 1e-4, "principal angle {:e}", r.worst_angle);
    assert!(r.angle_checks >= 20, "only {} separated spectra", r.angle_checks);
}

#[test]
fn factors_are_orthonormal_and_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dense = support::random_sparse(&mut rng, 40, 90, 0.1);
    let full = truncated_svd(&support::to_csc(&dense), 40, &SvdOptions::default()).unwrap();
    let k = full.rank();
    assert!((full.u.transpose() * &full.u - nalgebra::DMatrix::identity(k, k)).norm() < 1e-10);
    assert!((full.v.transpose() * &full.v - nalgebra::DMatrix::identity(k, k)).norm() < 1e-10);
    assert!((full.reconstruct() - &dense).norm() < 1e-9 * dense.norm());
}

#[test]
fn same_seed_same_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = support::to_csc(&support::random_sparse(&mut rng, 80, 60, 0.1));
    let first = truncated_svd(&a, 10, &SvdOptions::default()).unwrap();
    let second = truncated_svd(&a, 10, &SvdOptions::default()).unwrap();
    assert_eq!(first, second);
}
