use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Default tolerance for floating-point predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Subsystem selector for operations on bipartite operators.
///
/// The first tensor factor is always subsystem A; basis kets are labelled
/// `|ab>` with the A label leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Dense square complex matrix, row-major storage.
///
/// The universal carrier for states, Hamiltonians, unitaries and operators.
/// All predicates (`is_hermitian`, `is_unitary`, `is_psd`) compare against an
/// explicit tolerance, never exact equality.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    /// Build a matrix from row-major entries; `entries.len()` must be `dim^2`.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    /// Fill a matrix from a function of the (row, col) index.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// The matrix unit `|a><b|`: 1 at `(a, b)`, 0 elsewhere.
    pub fn matrix_unit(dim: usize, a: usize, b: usize) -> Result<Self> {
        if a >= dim {
            return Err(Error::IndexOutOfRange { index: a, dim });
        }
        if b >= dim {
            return Err(Error::IndexOutOfRange { index: b, dim });
        }
        let mut m = Self::zeros(dim);
        m[(a, b)] = C64::ONE;
        Ok(m)
    }

    /// Outer product `|u><v|` of two equal-length vectors.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise deviation from `m = m^H`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Max entrywise deviation of `u u^H` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self * &self.adjoint();
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expected = if i == j { C64::ONE } else { C64::ZERO };
                dev = dev.max((product[(i, j)] - expected).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol * self.max_abs_entry().max(1.0)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Kronecker product; `self` is the first (subsystem A) factor.
    ///
    /// Entry `[(i*b.dim + k), (j*b.dim + l)] = self[i, j] * b[k, l]`.
    pub fn tensor(&self, b: &CMatrix) -> CMatrix {
        let da = self.dim;
        let db = b.dim;
        CMatrix::from_fn(da * db, |row, col| {
            let (i, k) = (row / db, row % db);
            let (j, l) = (col / db, col % db);
            self[(i, j)] * b[(k, l)]
        })
    }

    /// Trace out one subsystem of an operator on `H_A (x) H_B`.
    ///
    /// `side = B` keeps A: result `[i, j] = sum_k self[(i,k), (j,k)]`;
    /// `side = A` keeps B. The full trace is preserved.
    pub fn partial_trace(&self, d_a: usize, d_b: usize, side: Side) -> Result<CMatrix> {
        if self.dim != d_a * d_b {
            return Err(Error::DimensionMismatch {
                expected: d_a * d_b,
                found: self.dim,
            });
        }
        let out = match side {
            Side::B => CMatrix::from_fn(d_a, |i, j| {
                (0..d_b).map(|k| self[(i * d_b + k, j * d_b + k)]).sum()
            }),
            Side::A => CMatrix::from_fn(d_b, |k, l| {
                (0..d_a).map(|i| self[(i * d_b + k, i * d_b + l)]).sum()
            }),
        };
        Ok(out)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix addition dimension mismatch");
        CMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix subtraction dimension mismatch");
        CMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a_ik = self[(i, k)];
                if a_ik == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a_ik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", e.re, e.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Hilbert-Schmidt inner product `tr(a^H b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    assert_eq!(a.dim, b.dim, "HS inner product dimension mismatch");
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.conj() * y)
        .sum()
}
