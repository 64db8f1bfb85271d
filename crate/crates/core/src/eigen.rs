//! Dense symmetric eigensolver (cyclic Jacobi rotations).
//!
//! Matrices are row-major `n x n` slices. Eigenvectors are returned one per
//! row, in the same order as the ascending eigenvalues.

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub n: usize,
    pub values: Vec<f64>,
    /// Row `i` (length `n`) is the unit eigenvector for `values[i]`; empty
    /// when vectors were not requested.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, i: usize) -> Option<&[f64]> {
        (!self.vectors.is_empty() && i < self.n)
            .then(|| &self.vectors[i * self.n..(i + 1) * self.n])
    }
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[p * n + q] * a[p * n + q];
        }
    }
    (2.0 * s).sqrt()
}

/// Diagonalizes the symmetric matrix `matrix` (only symmetric input is
/// meaningful; the upper and lower triangles must agree).
pub fn symmetric_eigen(matrix: &[f64], n: usize, want_vectors: bool) -> Result<SymmetricEigen> {
    if matrix.len() != n * n {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} entries, expected {n} x {n}",
            matrix.len()
        )));
    }
    let mut a = matrix.to_vec();
    // vt[p * n + r] = component r of eigenvector p
    let mut vt = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    } else {
        Vec::new()
    };

    let scale = frobenius(&a);
    let target = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    let mut row_p = vec![0.0; n];
    let mut row_q = vec![0.0; n];

    loop {
        let off = off_diagonal(&a, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Below rounding of both diagonal entries: drop it.
                let g = 100.0 * apq.abs();
                if sweeps > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                row_p.copy_from_slice(&a[p * n..(p + 1) * n]);
                row_q.copy_from_slice(&a[q * n..(q + 1) * n]);
                for r in 0..n {
                    let (arp, arq) = (row_p[r], row_q[r]);
                    let new_p = c * arp - s * arq;
                    let new_q = s * arp + c * arq;
                    a[p * n + r] = new_p;
                    a[q * n + r] = new_q;
                    a[r * n + p] = new_p;
                    a[r * n + q] = new_q;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                if want_vectors {
                    let (head, tail) = vt.split_at_mut(q * n);
                    let vp = &mut head[p * n..(p + 1) * n];
                    let vq = &mut tail[..n];
                    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                        let (xp, xq) = (*x, *y);
                        *x = c * xp - s * xq;
                        *y = s * xp + c * xq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .flat_map(|&i| vt[i * n..(i + 1) * n].iter().copied())
            .collect()
    } else {
        Vec::new()
    };
    Ok(SymmetricEigen {
        n,
        values,
        vectors,
        sweeps,
    })
}

/// `||A v - mu v||_2`.
pub fn residual(matrix: &[f64], n: usize, mu: f64, v: &[f64]) -> f64 {
    (0..n)
        .map(|i| {
            let av: f64 = matrix[i * n..(i + 1) * n]
                .iter()
                .zip(v)
                .map(|(a, x)| a * x)
                .sum();
            (av - mu * v[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Spectral norm bound used to scale residual checks (the Frobenius norm).
pub fn norm_bound(matrix: &[f64]) -> f64 {
    frobenius(matrix)
}
