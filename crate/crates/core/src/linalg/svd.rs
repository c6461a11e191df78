//! Singular value decomposition of complex rectangular matrices by the
//! one-sided Jacobi method.
//!
//! Column rotations orthogonalize the matrix in place, which keeps tiny
//! singular values accurate in a relative sense. The operator-Schmidt rank
//! test leans on that: a tensor-product unitary must come out with its second
//! singular value at roundoff level, far below the rank-1 decision threshold.

use num_complex::Complex64 as C64;

use super::cmatrix::CMatrix;
use super::eigen::rotation;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Dense rectangular complex matrix, row-major. Support type for reshuffled
/// bipartite operators and their SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl RectMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    fn col_norm_sqr(&self, j: usize) -> f64 {
        (0..self.rows).map(|i| self.get(i, j).norm_sqr()).sum()
    }

    fn col_inner(&self, p: usize, q: usize) -> C64 {
        (0..self.rows)
            .map(|i| self.get(i, p).conj() * self.get(i, q))
            .sum()
    }

    /// `[col_p, col_q] <- [col_p, col_q] J` with the Jacobi rotation layout
    /// used in [`super::eigen`].
    fn rotate_cols(&mut self, p: usize, q: usize, c: f64, s: f64, phase: C64) {
        let pc = phase.conj();
        for i in 0..self.rows {
            let vp = self.get(i, p);
            let vq = self.get(i, q);
            self.set(i, p, vp * c - vq * pc * s);
            self.set(i, q, vp * s + vq * pc * c);
        }
    }
}

/// Thin SVD `a = u diag(values) v^H`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values in descending order, length `min(rows, cols)`.
    pub values: Vec<f64>,
    /// `rows x min` matrix of left singular vectors. Columns belonging to a
    /// zero singular value are zero.
    pub u: RectMatrix,
    /// `cols x min` matrix of right singular vectors.
    pub v: RectMatrix,
}

/// One-sided Jacobi SVD.
pub fn svd(a: &RectMatrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let k = m.min(n);
    let mut b = a.clone();
    let mut v = RectMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::ONE
        } else {
            C64::ZERO
        }
    });

    let scale = b.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let app = b.col_norm_sqr(p);
                    let aqq = b.col_norm_sqr(q);
                    let apq = b.col_inner(p, q);
                    if apq.norm() <= f64::EPSILON * (app * aqq).sqrt() || apq.norm() == 0.0 {
                        continue;
                    }
                    let (c, s, phase) = rotation(app, aqq, apq);
                    b.rotate_cols(p, q, c, s, phase);
                    v.rotate_cols(p, q, c, s, phase);
                    rotated = true;
                }
            }
            if !rotated {
                break;
            }
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| b.col_norm_sqr(j).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let values: Vec<f64> = order.iter().take(k).map(|&j| norms[j]).collect();
    let mut u = RectMatrix::zeros(m, k);
    for (out, &j) in order.iter().take(k).enumerate() {
        let sigma = norms[j];
        if sigma > 0.0 {
            for i in 0..m {
                u.set(i, out, b.get(i, j) / sigma);
            }
        }
    }
    let v_sorted = RectMatrix::from_fn(n, k, |i, out| v.get(i, order[out]));
    Svd {
        values,
        u,
        v: v_sorted,
    }
}

/// Reshuffle an operator on `H_A (x) H_B` into the `d_A^2 x d_B^2` matrix
/// whose SVD is the operator-Schmidt decomposition.
///
/// `r[(i*d_A + j), (k*d_B + l)] = m[(i*d_B + k), (j*d_B + l)]`.
pub fn reshuffle(m: &CMatrix, d_a: usize, d_b: usize) -> Result<RectMatrix> {
    if m.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch {
            expected: d_a * d_b,
            found: m.dim(),
        });
    }
    Ok(RectMatrix::from_fn(d_a * d_a, d_b * d_b, |row, col| {
        let (i, j) = (row / d_a, row % d_a);
        let (k, l) = (col / d_b, col % d_b);
        m[(i * d_b + k, j * d_b + l)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_complex_gaussian, seeded_rng};

    fn random_rect(rng: &mut impl rand_core::RngCore, m: usize, n: usize) -> RectMatrix {
        RectMatrix::from_fn(m, n, |_, _| random_complex_gaussian(rng))
    }

    fn reconstruction_error(a: &RectMatrix, s: &Svd) -> f64 {
        let k = s.values.len();
        let mut err = 0.0f64;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let mut acc = C64::ZERO;
                for t in 0..k {
                    acc += s.u.get(i, t) * s.values[t] * s.v.get(j, t).conj();
                }
                err = err.max((acc - a.get(i, j)).norm());
            }
        }
        err
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = seeded_rng(21);
        for &(m, n) in &[(4usize, 4usize), (4, 9), (9, 4), (6, 6), (3, 8)] {
            let a = random_rect(&mut rng, m, n);
            let s = svd(&a);
            let scale = a.frobenius_norm();
            assert!(
                reconstruction_error(&a, &s) <= 1e-12 * scale,
                "reconstruction failed for {m}x{n}"
            );
            // Descending order, orthonormal columns where sigma > 0.
            for t in 1..s.values.len() {
                assert!(s.values[t] <= s.values[t - 1] + 1e-12 * scale);
            }
            for t in 0..s.values.len() {
                for w in 0..s.values.len() {
                    let ip_u: C64 = (0..m).map(|i| s.u.get(i, t).conj() * s.u.get(i, w)).sum();
                    let ip_v: C64 = (0..n).map(|i| s.v.get(i, t).conj() * s.v.get(i, w)).sum();
                    let expect = if t == w { 1.0 } else { 0.0 };
                    if s.values[t] > 1e-12 && s.values[w] > 1e-12 {
                        assert!((ip_u - expect).norm() < 1e-12);
                    }
                    assert!((ip_v - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn svd_rank_one_outer_product() {
        // a = x y^H has exactly one nonzero singular value ||x|| ||y||.
        let mut rng = seeded_rng(5);
        let x: Vec<C64> = (0..5).map(|_| random_complex_gaussian(&mut rng)).collect();
        let y: Vec<C64> = (0..7).map(|_| random_complex_gaussian(&mut rng)).collect();
        let a = RectMatrix::from_fn(5, 7, |i, j| x[i] * y[j].conj());
        let s = svd(&a);
        let nx: f64 = x.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        let ny: f64 = y.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        assert!((s.values[0] - nx * ny).abs() < 1e-12 * nx * ny);
        assert!(s.values[1] <= 1e-14 * s.values[0]);
    }
}
