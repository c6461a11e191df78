//! Dense complex linear algebra: matrices with tensor structure, partial
//! traces, Hermitian eigendecomposition, spectral exponentials, SVD, and
//! traceless operator bases.

mod basis;
mod cmatrix;
mod eigen;
mod svd;

pub use basis::{generator_basis, pauli_x, pauli_y, pauli_z, OperatorBasis};
pub use cmatrix::{hs_inner, CMatrix, Side, C64, DEFAULT_TOL};
pub use eigen::{
    eigh, expm_hermitian, is_psd, min_eigenvalue, trace_distance, HermitianEigen,
};
pub use svd::{reshuffle, svd, RectMatrix, Svd};
