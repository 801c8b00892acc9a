//! Truncated SVD of sparse matrices by randomized subspace iteration.
//!
//! A Gaussian range finder with oversampling and a few power iterations gives
//! the starting subspace. Iteration then continues, with a Rayleigh-Ritz step
//! each round, until every kept triplet satisfies
//! `|A v - s u| <= tolerance * s_1`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sparse::CscMatrix;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    pub oversampling: usize,
    pub power_iterations: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            oversampling: 10,
            power_iterations: 2,
            seed: 42,
            tolerance: 1e-6,
            max_iterations: 500,
        }
    }
}

/// `A ≈ U diag(S) Vᵗ` with `S` descending and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
    /// Subspace iterations run after the power iterations.
    pub iterations: usize,
    /// Largest relative residual among the kept triplets.
    pub residual: f64,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, s) in self.s.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

/// Cholesky QR of `z` with the ratio of extreme diagonal entries of `R`, or
/// `None` when the Gram matrix is not numerically positive definite.
fn cholesky_qr(z: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>, f64)> {
    let r = (z.transpose() * z).cholesky()?.l().transpose();
    let (lo, hi) = r
        .diagonal()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(*d), hi.max(*d)));
    if lo.is_nan() || lo <= hi * 1e-6 {
        return None;
    }
    let r_inv = r.clone().try_inverse()?;
    Some((z * r_inv, r, hi / lo))
}

/// `z = Q R` with orthonormal `Q`. Cholesky QR, repeated once when `z` is
/// poorly conditioned, with Householder QR as the fallback.
fn orthonormalize(z: DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    if let Some((q1, r1, spread)) = cholesky_qr(&z) {
        if spread < 1e3 {
            return (q1, r1);
        }
        if let Some((q2, r2, _)) = cholesky_qr(&q1) {
            return (q2, r2 * r1);
        }
    }
    let qr = z.qr();
    (qr.q(), qr.r())
}

fn orthonormal_basis(z: DMatrix<f64>) -> DMatrix<f64> {
    orthonormalize(z).0
}

/// `a` or its transpose, oriented so that it has at least as many rows as
/// columns.
struct Operator<'a> {
    a: &'a CscMatrix,
    transposed: bool,
}

impl Operator<'_> {
    fn cols(&self) -> usize {
        if self.transposed {
            self.a.nrows()
        } else {
            self.a.ncols()
        }
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        if self.transposed {
            self.a.tr_mul_dense(x)
        } else {
            self.a.mul_dense(x)
        }
    }

    fn apply_t(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        if self.transposed {
            self.a.mul_dense(x)
        } else {
            self.a.tr_mul_dense(x)
        }
    }
}

/// Singular values below this fraction of the largest are not checked for
/// convergence; the squared spectrum cannot resolve them.
const CHECK_CUTOFF: f64 = 1e-6;

/// Iterations between convergence checks.
const CHECK_EVERY: usize = 4;

/// Top `k` singular triplets of `a`. The returned rank is `k` capped by the
/// matrix shape and its numerical rank.
///
/// Iteration runs on the smaller dimension: with `W` an orthonormal basis
/// there, the Ritz pairs of `AᵗA` on `span(W)` are checked and `W` is replaced
/// by an orthonormal basis of `AᵗA W`. A last Rayleigh-Ritz step on the
/// larger side then yields factors with `Aᵗ U = V diag(S)` to rounding.
pub fn truncated_svd(a: &CscMatrix, k: usize, options: &SvdOptions) -> Result<TruncatedSvd> {
    if k == 0 {
        return Err(Error::Precondition("rank k must be at least 1".into()));
    }
    if a.nnz() == 0 || a.frobenius_norm() == 0.0 {
        return Err(Error::DegenerateCorpus("matrix has no nonzero weight".into()));
    }
    let op = Operator {
        a,
        transposed: a.nrows() < a.ncols(),
    };
    let cols = op.cols();
    let k = k.min(cols);
    let l = (k + options.oversampling).min(cols);

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let omega = DMatrix::from_fn(cols, l, |_, _| StandardNormal.sample(&mut rng));
    let mut q = orthonormal_basis(op.apply(&omega));
    for _ in 0..options.power_iterations {
        let w = orthonormal_basis(op.apply_t(&q));
        q = orthonormal_basis(op.apply(&w));
    }
    let mut w = orthonormal_basis(op.apply_t(&q));

    let mut iterations = 0;
    let y = loop {
        let y = op.apply(&w);
        let z = op.apply_t(&y);
        if l == cols {
            break y;
        }
        if iterations % CHECK_EVERY != 0 && iterations < options.max_iterations {
            iterations += 1;
            w = orthonormal_basis(z);
            continue;
        }
        let h = w.transpose() * &z;
        let eig = ((&h + h.transpose()) * 0.5).symmetric_eigen();
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let lambda: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
        let g = eig.eigenvectors.select_columns(&order);
        let sigma1 = lambda[0].sqrt();
        let checked = lambda
            .iter()
            .take(k)
            .take_while(|&&x| x.sqrt() > CHECK_CUTOFF * sigma1)
            .count();
        let zg = &z * g.columns(0, checked);
        let wg = &w * g.columns(0, checked);
        let residual = (0..checked)
            .map(|i| (zg.column(i) - wg.column(i) * lambda[i]).norm() / (lambda[i].sqrt() * sigma1))
            .fold(0.0, f64::max);
        if residual <= options.tolerance {
            break y;
        }
        if iterations >= options.max_iterations {
            return Err(Error::ConvergenceFailure {
                iterations,
                residual,
                tolerance: options.tolerance,
            });
        }
        iterations += 1;
        w = orthonormal_basis(z);
    };

    // Rayleigh-Ritz on span(A W): Qᵗ A = X S Wᵗ through a QR of Aᵗ Q.
    let q = orthonormal_basis(y);
    let (qz, rz) = orthonormalize(op.apply_t(&q));
    let small = rz.transpose().svd(true, true);
    let mut order: Vec<usize> = (0..small.singular_values.len()).collect();
    order.sort_by(|&i, &j| small.singular_values[j].total_cmp(&small.singular_values[i]));
    let s_all: Vec<f64> = order.iter().map(|&i| small.singular_values[i]).collect();
    let sigma1 = s_all[0];
    let kept = s_all
        .iter()
        .take(k)
        .take_while(|&&s| s > RANK_CUTOFF * sigma1)
        .count();
    let x = small.u.as_ref().expect("u requested").select_columns(&order[..kept]);
    let yt = small.v_t.as_ref().expect("v requested");
    let mut u = &q * x;
    let mut v = &qz * yt.transpose().select_columns(&order[..kept]);
    let av = op.apply(&v);
    let residual = (0..kept)
        .map(|i| (av.column(i) - u.column(i) * s_all[i]).norm() / sigma1)
        .fold(0.0, f64::max);
    normalize_signs(&mut u, &mut v);
    let (u, v) = if op.transposed { (v, u) } else { (u, v) };
    Ok(TruncatedSvd {
        u,
        s: s_all[..kept].to_vec(),
        v,
        iterations,
        residual,
    })
}

/// Flips each pair of singular vectors so the largest entry of `u` is positive.
fn normalize_signs(u: &mut DMatrix<f64>, v: &mut DMatrix<f64>) {
    for j in 0..u.ncols() {
        let col = u.column(j);
        let pivot = col.iter().copied().fold(0.0, |best: f64, x| {
            if x.abs() > best.abs() {
                x
            } else {
                best
            }
        });
        if pivot < 0.0 {
            u.column_mut(j).neg_mut();
            v.column_mut(j).neg_mut();
        }
    }
}
