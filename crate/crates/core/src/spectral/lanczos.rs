//! Thick-restart Lanczos for a few extreme eigenpairs of a symmetric operator.
//!
//! The Krylov basis is kept fully reorthogonalized (classical Gram-Schmidt,
//! applied twice). The projected matrix is formed column by column from the
//! same inner products, so after a restart the arrowhead coupling between
//! the locked Ritz vectors and the residual direction is recovered without
//! special bookkeeping. Only matrix-vector products are needed.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SymmetricOperator;

/// Which end of the spectrum to resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Largest,
    Smallest,
}

#[derive(Debug, Clone)]
pub struct LanczosParams {
    /// Maximum basis size before a restart.
    pub basis: usize,
    pub max_restarts: usize,
    /// Residual tolerance relative to the operator norm bound.
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for LanczosParams {
    fn default() -> Self {
        LanczosParams {
            basis: 80,
            max_restarts: 2000,
            rel_tol: 1e-11,
            seed: 0x5eed_1a2c,
        }
    }
}

/// Converged Ritz pairs, ordered from the requested end inward, with their
/// residual norms `||M x - theta x||`.
#[derive(Debug, Clone)]
pub struct RitzPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the components of `w` along `basis` and `deflate`, twice.
/// Returns the coefficients against `basis` from both passes combined.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>], deflate: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for d in deflate {
            let c = dot(d, w);
            axpy(-c, d, w);
        }
        for (k, b) in basis.iter().enumerate() {
            let c = dot(b, w);
            coeffs[k] += c;
            axpy(-c, b, w);
        }
    }
    coeffs
}

/// Computes `k` eigenpairs of `op` from the chosen `end`, working in the
/// orthogonal complement of the orthonormal vectors in `deflate`.
pub fn extreme_pairs(
    op: &dyn SymmetricOperator,
    k: usize,
    end: End,
    deflate: &[Vec<f64>],
    params: &LanczosParams,
) -> Result<RitzPairs> {
    let n = op.order();
    let room = n.saturating_sub(deflate.len());
    assert!(
        k >= 1 && k <= room,
        "requested {k} eigenpairs from a space of dimension {room}"
    );

    let sign = match end {
        End::Largest => 1.0,
        End::Smallest => -1.0,
    };
    let scale = op.norm_bound().max(f64::MIN_POSITIVE);
    let tol = params.rel_tol * scale;
    let max_basis = params.basis.max(2 * k + 8).min(room);
    let keep = (k + (max_basis - k) / 2).min(max_basis - 1).max(k);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut random_unit = |basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..8 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            orthogonalize(&mut v, basis, deflate);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return Some(v);
            }
        }
        None
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis + 1);
    // projected matrix (of the sign-adjusted operator), max_basis x max_basis
    let mut proj = DMatrix::<f64>::zeros(max_basis, max_basis);
    basis.push(random_unit(&basis).expect("deflation leaves a nonempty space"));

    let mut w = vec![0.0; n];
    let mut worst = f64::INFINITY;
    for restart in 0..=params.max_restarts {
        // expand the basis to max_basis vectors
        let mut j = basis.len() - 1;
        let mut tail: Option<Vec<f64>> = None;
        let residual_norm;
        loop {
            op.apply(&basis[j], &mut w);
            if sign < 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            let coeffs = orthogonalize(&mut w, &basis, deflate);
            for (r, c) in coeffs.iter().enumerate() {
                proj[(r, j)] = *c;
                proj[(j, r)] = *c;
            }
            let beta = norm(&w);
            if j + 1 == max_basis {
                residual_norm = beta;
                if beta > 0.0 {
                    tail = Some(w.iter().map(|x| x / beta).collect());
                }
                break;
            }
            let next = if beta > 1e-10 * scale {
                w.iter().map(|x| x / beta).collect()
            } else {
                // invariant subspace found; continue in a fresh direction
                match random_unit(&basis) {
                    Some(v) => v,
                    None => {
                        residual_norm = 0.0;
                        break;
                    }
                }
            };
            let beta_used = if beta > 1e-10 * scale { beta } else { 0.0 };
            proj[(j + 1, j)] = beta_used;
            proj[(j, j + 1)] = beta_used;
            basis.push(next);
            j += 1;
        }

        let m = basis.len();
        let small = proj.view((0, 0), (m, m)).into_owned();
        let eig = SymmetricEigen::new(small);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        // residual of Ritz pair t is |beta * y_t[last]|
        let res: Vec<f64> = order
            .iter()
            .map(|&t| (residual_norm * eig.eigenvectors[(m - 1, t)]).abs())
            .collect();
        worst = res[..k].iter().copied().fold(0.0, f64::max);
        let exhausted = m == max_basis && m == room;
        if worst <= tol || exhausted || residual_norm == 0.0 {
            let mut out = RitzPairs {
                values: Vec::with_capacity(k),
                vectors: Vec::with_capacity(k),
                residuals: Vec::with_capacity(k),
            };
            for &t in &order[..k] {
                let y = eig.eigenvectors.column(t);
                let mut x = vec![0.0; n];
                for (b, &c) in basis.iter().zip(y.iter()) {
                    axpy(c, b, &mut x);
                }
                let nx = norm(&x);
                x.iter_mut().for_each(|v| *v /= nx);
                let theta = sign * eig.eigenvalues[t];
                // true residual against the original operator
                let mut ax = vec![0.0; n];
                op.apply(&x, &mut ax);
                axpy(-theta, &x, &mut ax);
                out.values.push(theta);
                out.residuals.push(norm(&ax));
                out.vectors.push(x);
            }
            return Ok(out);
        }
        if restart == params.max_restarts {
            break;
        }

        // thick restart: keep the leading Ritz vectors plus the residual direction
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(max_basis + 1);
        proj.fill(0.0);
        for (slot, &t) in order[..keep].iter().enumerate() {
            let y = eig.eigenvectors.column(t);
            let mut x = vec![0.0; n];
            for (b, &c) in basis.iter().zip(y.iter()) {
                axpy(c, b, &mut x);
            }
            proj[(slot, slot)] = eig.eigenvalues[t];
            kept.push(x);
        }
        // the locked vectors drift from orthonormality slowly; clean them up
        let mut clean: Vec<Vec<f64>> = Vec::with_capacity(max_basis + 1);
        for mut x in kept {
            orthogonalize(&mut x, &clean, deflate);
            let nx = norm(&x);
            x.iter_mut().for_each(|v| *v /= nx);
            clean.push(x);
        }
        basis = clean;
        let mut next = match tail.take() {
            Some(t) => t,
            None => match random_unit(&basis) {
                Some(v) => v,
                None => break,
            },
        };
        orthogonalize(&mut next, &basis, deflate);
        let nn = norm(&next);
        next.iter_mut().for_each(|v| *v /= nn);
        basis.push(next);
    }
    Err(Error::SolverNoConvergence {
        iterations: params.max_restarts,
        residual: worst,
    })
}
