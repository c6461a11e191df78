//! Traceless Hermitian operator bases: the Pauli matrices for qubits and
//! their generalized Gell-Mann extension for higher dimensions.

use num_complex::Complex64 as C64;

use super::cmatrix::CMatrix;
use crate::error::{Error, Result};

pub fn pauli_x() -> CMatrix {
    CMatrix::new(
        2,
        vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO],
    )
    .unwrap()
}

pub fn pauli_y() -> CMatrix {
    CMatrix::new(
        2,
        vec![C64::ZERO, -C64::i(), C64::i(), C64::ZERO],
    )
    .unwrap()
}

pub fn pauli_z() -> CMatrix {
    CMatrix::new(
        2,
        vec![C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE],
    )
    .unwrap()
}

/// A full set of `dim^2 - 1` traceless Hermitian generators, pairwise
/// orthogonal in the Hilbert-Schmidt inner product.
///
/// For `dim = 2` these are exactly the Pauli matrices `[sx, sy, sz]`; for
/// larger dimensions the generalized Gell-Mann construction is used with the
/// same normalization `tr(g_i g_j) = 2 delta_ij`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    normalization: f64,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `tr(g_i g_j) = normalization * delta_ij`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }
}

/// Generalized Gell-Mann generators for a `dim`-level system.
///
/// Ordering: for each index pair `a < b` the symmetric generator
/// `E_ab + E_ba` followed by the antisymmetric `-i(E_ab - E_ba)`, then the
/// `dim - 1` diagonal generators. For `dim = 2` this yields `[sx, sy, sz]`.
pub fn generator_basis(dim: usize) -> Result<OperatorBasis> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "generator basis needs dim >= 2, got {dim}"
        )));
    }
    let mut generators = Vec::with_capacity(dim * dim - 1);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut sym = CMatrix::zeros(dim);
            sym[(a, b)] = C64::ONE;
            sym[(b, a)] = C64::ONE;
            generators.push(sym);

            let mut asym = CMatrix::zeros(dim);
            asym[(a, b)] = -C64::i();
            asym[(b, a)] = C64::i();
            generators.push(asym);
        }
    }
    for l in 1..dim {
        // sqrt(2 / (l (l+1))) (E_00 + ... + E_{l-1,l-1} - l E_ll)
        let norm = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut diag = CMatrix::zeros(dim);
        for j in 0..l {
            diag[(j, j)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        generators.push(diag);
    }
    Ok(OperatorBasis {
        dim,
        generators,
        normalization: 2.0,
    })
}
