//! Thick-restart Lanczos for the smallest eigenpair of a sparse symmetric
//! operator.
//!
//! The basis is kept fully orthogonal (classical Gram-Schmidt with a second
//! pass when cancellation is detected). At each restart the smallest Ritz
//! vectors are retained together with the residual direction, which turns
//! the projected matrix into an arrowhead that the next sweep extends.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SymmetricOperator;

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub tol: f64,
    pub krylov_dim: usize,
    pub keep: usize,
    pub max_matvecs: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-8,
            krylov_dim: 64,
            keep: 24,
            max_matvecs: 200_000,
            seed: 0x5eed,
        }
    }
}

pub struct LanczosResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
    pub converged: bool,
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

/// Orthogonalizes `w` against `basis`, returning the coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    let before = norm(w);
    for pass in 0..2 {
        for (c, v) in coeffs.iter_mut().zip(basis) {
            let h = dot(v, w);
            axpy(-h, v, w);
            *c += h;
        }
        // DGKS: a second pass only when the first lost most of the norm
        if pass == 0 && norm(w) > 0.7 * before {
            break;
        }
    }
    coeffs
}

/// Smallest eigenpair of `op` (shifted internally by `shift` so the
/// iteration sees a positive semidefinite operator). `start`, when given,
/// seeds the Krylov space.
pub fn smallest_eigenpair(
    op: &SymmetricOperator,
    shift: f64,
    start: Option<&[f64]>,
    opts: &LanczosOptions,
) -> LanczosResult {
    let n = op.dim();
    let m = opts.krylov_dim.max(2).min(n);
    let keep = opts.keep.clamp(1, m.saturating_sub(1).max(1));
    let apply = |x: &[f64], y: &mut [f64]| {
        op.apply(x, y);
        axpy(-shift, x, y);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if let Some(s) = start.filter(|s| s.len() == n && norm(s) > 0.0) {
        // mostly the supplied vector, with a little noise so no direction is missing
        let scale = 1e-3 / (n as f64).sqrt() * norm(s);
        for (x, &si) in v0.iter_mut().zip(s) {
            *x = si + scale * *x;
        }
    }
    let nv = norm(&v0);
    v0.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut h = DMatrix::<f64>::zeros(m, m);
    let mut matvecs = 0;
    let mut w = vec![0.0; n];
    let mut best = (f64::INFINITY, f64::INFINITY, Vec::new());

    loop {
        // expand from the last basis vector up to m vectors
        let mut size = m;
        let mut beta;
        let mut residual_dir: Option<Vec<f64>> = None;
        let mut j = basis.len() - 1;
        loop {
            apply(&basis[j], &mut w);
            matvecs += 1;
            let coeffs = orthogonalize(&basis, &mut w);
            for (i, c) in coeffs.iter().enumerate() {
                h[(i, j)] = *c;
                h[(j, i)] = *c;
            }
            beta = norm(&w);
            let op_scale = h[(j, j)].abs().max(1.0);
            if beta <= 1e-13 * op_scale {
                // invariant subspace: the projection is exact
                size = j + 1;
                beta = 0.0;
                break;
            }
            let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
            if j + 1 == m {
                residual_dir = Some(next);
                break;
            }
            h[(j + 1, j)] = beta;
            h[(j, j + 1)] = beta;
            basis.push(next);
            j += 1;
        }

        let proj = h.view((0, 0), (size, size)).into_owned();
        let eig = SymmetricEigen::new(proj);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let i0 = order[0];
        let theta = eig.eigenvalues[i0];
        let ritz_res = beta * eig.eigenvectors[(size - 1, i0)].abs();

        if ritz_res < best.1 || ritz_res <= opts.tol {
            let mut x = vec![0.0; n];
            for (k, v) in basis.iter().enumerate().take(size) {
                axpy(eig.eigenvectors[(k, i0)], v, &mut x);
            }
            let nx = norm(&x);
            x.iter_mut().for_each(|xi| *xi /= nx);
            apply(&x, &mut w);
            axpy(-theta, &x, &mut w);
            let true_res = norm(&w);
            if true_res < best.1 {
                best = (theta, true_res, x);
            }
            if best.1 <= opts.tol {
                return LanczosResult {
                    value: best.0 + shift,
                    residual: best.1,
                    vector: best.2,
                    matvecs,
                    converged: true,
                };
            }
        }
        if matvecs >= opts.max_matvecs || residual_dir.is_none() {
            return LanczosResult {
                value: best.0 + shift,
                residual: best.1,
                vector: best.2,
                matvecs,
                converged: false,
            };
        }

        // thick restart: keep the smallest Ritz vectors plus the residual direction
        let kept: Vec<usize> = order.iter().copied().take(keep).collect();
        let mut new_basis = Vec::with_capacity(m);
        for &i in &kept {
            let mut u = vec![0.0; n];
            for (k, v) in basis.iter().enumerate().take(size) {
                axpy(eig.eigenvectors[(k, i)], v, &mut u);
            }
            new_basis.push(u);
        }
        h.fill(0.0);
        for (a, &i) in kept.iter().enumerate() {
            let coupling = beta * eig.eigenvectors[(size - 1, i)];
            h[(a, a)] = eig.eigenvalues[i];
            h[(a, kept.len())] = coupling;
            h[(kept.len(), a)] = coupling;
        }
        new_basis.push(residual_dir.unwrap());
        basis = new_basis;
    }
}
