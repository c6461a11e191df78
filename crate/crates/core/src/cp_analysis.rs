//! Reduced dynamical maps induced by a joint unitary plus a state embedding,
//! their Choi matrices, the complete-positivity test, and Kraus extraction.
//!
//! A map here is always stored extensionally: its images on all matrix units
//! of the input space. That makes linearity a construction property rather
//! than something to verify, and it pins down the reduced dynamical map even
//! when the embedding leaves the physical state space (which is exactly what
//! correlated preparations do, and why their reduced maps can fail complete
//! positivity).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, is_psd, CMatrix, Side, DEFAULT_TOL};

/// Linear assignment from system states to joint states, tabulated on matrix
/// units: `images[i * d_a + j]` is the image of `E_ij`.
#[derive(Debug, Clone)]
pub struct Embedding {
    d_a: usize,
    d_b: usize,
    images: Vec<CMatrix>,
}

impl Embedding {
    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Image of the matrix unit `E_ij`.
    pub fn image(&self, i: usize, j: usize) -> &CMatrix {
        &self.images[i * self.d_a + j]
    }

    /// Linear extension to an arbitrary input matrix.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.dim() != self.d_a {
            return Err(Error::DimensionMismatch {
                expected: self.d_a,
                found: x.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.d_a * self.d_b);
        for i in 0..self.d_a {
            for j in 0..self.d_a {
                let coeff = x[(i, j)];
                if coeff != C64::ZERO {
                    out = &out + &self.image(i, j).scale(coeff);
                }
            }
        }
        Ok(out)
    }
}

/// Uncorrelated baseline: `X -> X (x) rho_B`.
pub fn product_embedding(d_a: usize, rho_b: &CMatrix) -> Result<Embedding> {
    validate_density(rho_b)?;
    let d_b = rho_b.dim();
    let mut images = Vec::with_capacity(d_a * d_a);
    for i in 0..d_a {
        for j in 0..d_a {
            images.push(CMatrix::matrix_unit(d_a, i, j)?.tensor(rho_b));
        }
    }
    Ok(Embedding { d_a, d_b, images })
}

/// Correlated preparation `X -> X (x) rho_B + tr(X) corr_op`.
///
/// Linear and trace-compatible by construction. The output may fail to be
/// positive semidefinite for some density inputs; that is recorded by
/// callers, not rejected here, since exactly this domain restriction is what
/// makes non-CP reduced dynamics possible.
pub fn correlated_embedding(corr_op: &CMatrix, rho_b: &CMatrix) -> Result<Embedding> {
    validate_density(rho_b)?;
    let d_b = rho_b.dim();
    if corr_op.dim() % d_b != 0 {
        return Err(Error::DimensionMismatch {
            expected: d_b,
            found: corr_op.dim(),
        });
    }
    let d_a = corr_op.dim() / d_b;
    let b_trace = corr_op.partial_trace(d_a, d_b, Side::B)?;
    let norm = b_trace.frobenius_norm();
    if norm > DEFAULT_TOL {
        return Err(Error::NonzeroPartialTrace { norm });
    }
    let mut images = Vec::with_capacity(d_a * d_a);
    for i in 0..d_a {
        for j in 0..d_a {
            let unit = CMatrix::matrix_unit(d_a, i, j)?;
            let mut img = unit.tensor(rho_b);
            if i == j {
                // tr(E_ii) = 1 feeds the correlation operator in.
                img = &img + corr_op;
            }
            images.push(img);
        }
    }
    Ok(Embedding { d_a, d_b, images })
}

fn validate_density(rho: &CMatrix) -> Result<()> {
    if !rho.is_hermitian(DEFAULT_TOL) {
        return Err(Error::InvalidDensityMatrix {
            reason: format!(
                "not Hermitian (deviation {:.3e})",
                rho.hermiticity_deviation()
            ),
        });
    }
    if !is_psd(rho, DEFAULT_TOL) {
        return Err(Error::InvalidDensityMatrix {
            reason: "negative eigenvalue".into(),
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
        return Err(Error::InvalidDensityMatrix {
            reason: format!("trace {tr} != 1"),
        });
    }
    Ok(())
}

/// Linear map between matrix spaces, tabulated on matrix units.
#[derive(Debug, Clone)]
pub struct LinearMap {
    d_in: usize,
    d_out: usize,
    images: Vec<CMatrix>,
}

impl LinearMap {
    pub fn from_images(d_in: usize, d_out: usize, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != d_in * d_in {
            return Err(Error::DimensionMismatch {
                expected: d_in * d_in,
                found: images.len(),
            });
        }
        for img in &images {
            if img.dim() != d_out {
                return Err(Error::DimensionMismatch {
                    expected: d_out,
                    found: img.dim(),
                });
            }
        }
        Ok(Self {
            d_in,
            d_out,
            images,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut images = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                images.push(CMatrix::matrix_unit(dim, i, j).expect("valid unit index"));
            }
        }
        Self {
            d_in: dim,
            d_out: dim,
            images,
        }
    }

    /// The transpose map, the textbook positive-but-not-CP example.
    pub fn transpose(dim: usize) -> Self {
        let mut images = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                images.push(CMatrix::matrix_unit(dim, j, i).expect("valid unit index"));
            }
        }
        Self {
            d_in: dim,
            d_out: dim,
            images,
        }
    }

    /// The unitary conjugation channel `X -> u X u^H`.
    pub fn conjugation(u: &CMatrix) -> Self {
        let dim = u.dim();
        let ua = u.adjoint();
        let mut images = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let unit = CMatrix::matrix_unit(dim, i, j).expect("valid unit index");
                images.push(&(u * &unit) * &ua);
            }
        }
        Self {
            d_in: dim,
            d_out: dim,
            images,
        }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn image(&self, i: usize, j: usize) -> &CMatrix {
        &self.images[i * self.d_in + j]
    }

    /// Apply the map to an arbitrary input by linear extension.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.dim() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: x.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let coeff = x[(i, j)];
                if coeff != C64::ZERO {
                    out = &out + &self.image(i, j).scale(coeff);
                }
            }
        }
        Ok(out)
    }

    /// Max deviation of `tr(images[E_ij])` from `delta_ij`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let expected = if i == j { C64::ONE } else { C64::ZERO };
                dev = dev.max((self.image(i, j).trace() - expected).norm());
            }
        }
        dev
    }
}

/// Reduced dynamical map `X -> tr_B[u e(X) u^H]` induced by an embedding and
/// a joint unitary.
pub fn induced_map(e: &Embedding, u: &CMatrix) -> Result<LinearMap> {
    let dim = e.d_a() * e.d_b();
    if u.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.dim(),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let ua = u.adjoint();
    let mut images = Vec::with_capacity(e.d_a() * e.d_a());
    for i in 0..e.d_a() {
        for j in 0..e.d_a() {
            let evolved = &(u * e.image(i, j)) * &ua;
            images.push(evolved.partial_trace(e.d_a(), e.d_b(), Side::B)?);
        }
    }
    LinearMap::from_images(e.d_a(), e.d_a(), images)
}

/// Choi matrix `C = sum_ij E_ij (x) m(E_ij)`, the standard complete
/// positivity witness: the map is CP iff `C` is positive semidefinite.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }
}

pub fn choi(m: &LinearMap) -> ChoiMatrix {
    let (d_in, d_out) = (m.d_in, m.d_out);
    let mut c = CMatrix::zeros(d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let img = m.image(i, j);
            for k in 0..d_out {
                for l in 0..d_out {
                    c[(i * d_out + k, j * d_out + l)] = img[(k, l)];
                }
            }
        }
    }
    ChoiMatrix {
        matrix: c,
        d_in,
        d_out,
    }
}

/// Complete-positivity verdict: `(min eigenvalue >= -tol, min eigenvalue)`.
///
/// Requires a Hermitian Choi matrix, i.e. a Hermiticity-preserving map.
pub fn is_cp(c: &ChoiMatrix, tol: f64) -> Result<(bool, f64)> {
    let eig = eigh(&c.matrix, DEFAULT_TOL)?;
    let min = eig.min_value();
    Ok((min >= -tol, min))
}

/// Kraus operators with the scaling `sum_k K_k X K_k^H` baked in.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausSet {
    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.dim() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: x.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.d_out);
        for k in &self.operators {
            out = &out + &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// `sum_k K_k^H K_k`; equals the identity iff the source map was
    /// trace-preserving.
    pub fn completeness(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_in);
        for k in &self.operators {
            out = &out + &(&k.adjoint() * k);
        }
        out
    }

    /// Rebuild the extensional map from the operators.
    pub fn to_map(&self) -> LinearMap {
        let mut images = Vec::with_capacity(self.d_in * self.d_in);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let unit = CMatrix::matrix_unit(self.d_in, i, j).expect("valid unit index");
                images.push(self.apply(&unit).expect("dims match by construction"));
            }
        }
        LinearMap::from_images(self.d_in, self.d_out, images).expect("consistent dims")
    }
}

/// Extract Kraus operators from a Choi matrix by spectral decomposition.
///
/// Each eigenvector with eigenvalue above `tol` reshapes, column-major over
/// the input index, into one operator scaled by the square root of its
/// eigenvalue. An eigenvalue below `-tol` means the map is not CP and no
/// Kraus form exists; the offending eigenvalue is carried in the error.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<KrausSet> {
    let eig = eigh(&c.matrix, DEFAULT_TOL)?;
    if eig.min_value() < -tol {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig.min_value(),
        });
    }
    let (d_in, d_out) = (c.d_in, c.d_out);
    let mut operators = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= tol {
            continue;
        }
        let root = lambda.sqrt();
        let op = CMatrix::from_fn(d_out, |out, inp| {
            eig.vectors[(inp * d_out + out, k)] * root
        });
        operators.push(op);
    }
    Ok(KrausSet {
        operators,
        d_in,
        d_out,
    })
}
