//! Jacobi rotations for dense symmetric matrices, in round-robin order: each
//! round applies `n/2` disjoint rotations at once, so the column half of
//! `JᵀAJ` can be done row by row instead of striding down columns.

/// Eigen-decomposition of a symmetric row-major `n × n` matrix. Returns
/// eigenvalues in ascending order and the matching eigenvectors as columns
/// (row-major `n × n`, column `j` belongs to eigenvalue `j`).
pub fn symmetric_eigen(matrix: &[f64], n: usize, max_sweeps: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    // rows of `vt` are the eigenvectors, so each rotation touches two contiguous rows
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let off_norm = |a: &[f64]| {
        (0..n)
            .map(|p| a[p * n + p + 1..(p + 1) * n].iter().map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    };
    // tournament schedule; index n is a bye when n is odd
    let m = n + n % 2;
    let mut players: Vec<usize> = (0..m).collect();
    let mut rots: Vec<(usize, usize, f64, f64, f64)> = Vec::with_capacity(m / 2);
    let mut converged = false;
    for _ in 0..max_sweeps {
        if off_norm(&a) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for _ in 0..m.saturating_sub(1) {
            rots.clear();
            for i in 0..m / 2 {
                let (x, y) = (players[i], players[m - 1 - i]);
                if x >= n || y >= n {
                    continue;
                }
                let (p, q) = (x.min(y), x.max(y));
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // below rounding level of both diagonals: drop instead of rotating
                if apq.abs() <= 1e-16 * (app.abs() + aqq.abs()) || apq.abs() <= 1e-300 {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                rots.push((p, q, c, t * c, t));
            }
            let diag: Vec<(f64, f64, f64)> =
                rots.iter().map(|&(p, q, ..)| (a[p * n + p], a[q * n + q], a[p * n + q])).collect();
            // A ← A J, one row at a time
            for row in a.chunks_exact_mut(n) {
                for &(p, q, c, s, _) in &rots {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
            // A ← Jᵀ A
            for (&(p, q, c, s, t), &(app, aqq, apq)) in rots.iter().zip(&diag) {
                rotate_rows(&mut a, n, p, q, c, s);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                rotate_rows(&mut vt, n, p, q, c, s);
            }
            players[1..].rotate_right(1);
        }
    }
    if !converged && off_norm(&a) > 1e-12 * scale {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + col] = vt[src * n + k];
        }
    }
    Some((values, vectors))
}

/// `(row p, row q) ← (c·p − s·q, s·p + c·q)` for `p < q`.
fn rotate_rows(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_sorted() {
        let (vals, _) = symmetric_eigen(&[3.0, 0.0, 0.0, -1.0], 2, 10).unwrap();
        assert_eq!(vals, vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let (vals, vecs) = symmetric_eigen(&[2.0, 1.0, 1.0, 2.0], 2, 10).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        assert!((vecs[0].abs() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((vecs[0] + vecs[2]).abs() < 1e-14);
    }

    #[test]
    fn path_laplacian_spectrum() {
        // Dirichlet path of 6 vertices: 2 - 2cos(kπ/7)
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let (vals, _) = symmetric_eigen(&a, n, 50).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 7.0).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }
}
