//! Product-plus-correlation decompositions of joint states, the
//! correlation-induced term of the reduced state, factorizability of joint
//! propagators, and randomized verification that factorizable dynamics kills
//! the correlation term.

use num_complex::Complex64 as C64;

use crate::dynamics::JointState;
use crate::error::{Error, Result};
use crate::linalg::{generator_basis, reshuffle, svd, CMatrix, Side, DEFAULT_TOL};
use crate::random::{random_correlated_joint, random_unitary, seeded_rng};

/// A joint state split as `rho_AB = rho_A (x) rho_B + corr_op`, with the
/// correlation operator expanded over traceless generator products.
///
/// `corr_op` is the primary representation; the real coefficient matrix
/// `gamma` is derived from it by Hilbert-Schmidt projection and satisfies
/// `corr_op = sum_ij gamma[i][j] g_i (x) g_j`.
#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    rho_a: CMatrix,
    rho_b: CMatrix,
    /// Row-major `(d_a^2 - 1) x (d_b^2 - 1)` real coefficients.
    gamma: Vec<f64>,
    corr_op: CMatrix,
    d_a: usize,
    d_b: usize,
}

impl ProductDecomposition {
    pub fn rho_a(&self) -> &CMatrix {
        &self.rho_a
    }

    pub fn rho_b(&self) -> &CMatrix {
        &self.rho_b
    }

    pub fn corr_op(&self) -> &CMatrix {
        &self.corr_op
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Coefficient of `g_i (x) g_j` in the correlation operator.
    pub fn gamma(&self, i: usize, j: usize) -> f64 {
        self.gamma[i * (self.d_b * self.d_b - 1) + j]
    }

    pub fn gamma_rows(&self) -> usize {
        self.d_a * self.d_a - 1
    }

    pub fn gamma_cols(&self) -> usize {
        self.d_b * self.d_b - 1
    }

    /// Rebuild `sum_ij gamma[i][j] g_i (x) g_j`; equals `corr_op` within
    /// roundoff and is used by tests as the reconstruction check.
    pub fn corr_from_gamma(&self) -> CMatrix {
        let basis_a = generator_basis(self.d_a).expect("d_a >= 2 checked at construction");
        let basis_b = generator_basis(self.d_b).expect("d_b >= 2 checked at construction");
        let mut out = CMatrix::zeros(self.d_a * self.d_b);
        for (i, ga) in basis_a.generators().iter().enumerate() {
            for (j, gb) in basis_b.generators().iter().enumerate() {
                let coeff = self.gamma(i, j);
                if coeff != 0.0 {
                    out = &out + &ga.tensor(gb).scale_re(coeff);
                }
            }
        }
        out
    }
}

/// Split a joint state into marginals plus a correlation operator.
///
/// The correlation operator is `rho_AB - rho_A (x) rho_B`; both of its
/// partial traces vanish, so it lies entirely in the span of traceless
/// generator products, and the projection coefficients
/// `gamma[i][j] = tr[(g_i (x) g_j) corr_op] / (n_A n_B)` reconstruct it.
pub fn decompose(state: &JointState) -> Result<ProductDecomposition> {
    let d_a = state.d_a();
    let d_b = state.d_b();
    if d_a < 2 || d_b < 2 {
        return Err(Error::InvalidArgument(format!(
            "decomposition needs both dims >= 2, got ({d_a}, {d_b})"
        )));
    }
    let rho_a = state.reduced_a();
    let rho_b = state.reduced_b();
    let corr_op = &(state.matrix().clone()) - &rho_a.tensor(&rho_b);

    let basis_a = generator_basis(d_a)?;
    let basis_b = generator_basis(d_b)?;
    let denom = basis_a.normalization() * basis_b.normalization();
    let mut gamma = Vec::with_capacity((d_a * d_a - 1) * (d_b * d_b - 1));
    for ga in basis_a.generators() {
        for gb in basis_b.generators() {
            let overlap = (&ga.tensor(gb) * &corr_op).trace();
            gamma.push(overlap.re / denom);
        }
    }
    Ok(ProductDecomposition {
        rho_a,
        rho_b,
        gamma,
        corr_op,
        d_a,
        d_b,
    })
}

/// Correlation-induced term of the reduced state after evolving by `u`:
/// `tr_B[u corr_op u^H]`. Always traceless and Hermitian.
pub fn delta_rho(u: &CMatrix, dec: &ProductDecomposition) -> Result<CMatrix> {
    let dim = dec.d_a * dec.d_b;
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
    let evolved = &(u * &dec.corr_op) * &u.adjoint();
    evolved.partial_trace(dec.d_a, dec.d_b, Side::B)
}

/// Matrix element `<a| delta_rho |b>` computed through the trace identity
/// `tr[(u^H (|b><a| (x) I) u) sum_ij gamma[i][j] g_i (x) g_j]`.
///
/// This is an independent computation path from [`delta_rho`] (coefficients
/// and generator products instead of operator conjugation and partial trace);
/// the two agree entrywise to roundoff, which tests assert at `1e-12`.
pub fn matrix_element_form(
    u: &CMatrix,
    dec: &ProductDecomposition,
    a: usize,
    b: usize,
) -> Result<C64> {
    if a >= dec.d_a {
        return Err(Error::IndexOutOfRange {
            index: a,
            dim: dec.d_a,
        });
    }
    if b >= dec.d_a {
        return Err(Error::IndexOutOfRange {
            index: b,
            dim: dec.d_a,
        });
    }
    let dim = dec.d_a * dec.d_b;
    if u.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.dim(),
        });
    }
    let projector = CMatrix::matrix_unit(dec.d_a, b, a)?;
    let lifted = projector.tensor(&CMatrix::identity(dec.d_b));
    let heisenberg = &(&u.adjoint() * &lifted) * u;

    let basis_a = generator_basis(dec.d_a)?;
    let basis_b = generator_basis(dec.d_b)?;
    let mut acc = C64::ZERO;
    for (i, ga) in basis_a.generators().iter().enumerate() {
        for (j, gb) in basis_b.generators().iter().enumerate() {
            let coeff = dec.gamma(i, j);
            if coeff != 0.0 {
                acc += (&heisenberg * &ga.tensor(gb)).trace() * coeff;
            }
        }
    }
    Ok(acc)
}

/// Operator-Schmidt analysis of a joint unitary.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub is_factorizable: bool,
    /// Operator-Schmidt singular values, descending.
    pub schmidt_singular_values: Vec<f64>,
    /// Local factors, present when the operator-Schmidt rank is 1. The
    /// largest-magnitude entry of each factor is made real positive;
    /// `u_a (x) u_b` then matches the input up to one global phase.
    pub u_a: Option<CMatrix>,
    pub u_b: Option<CMatrix>,
}

/// Decide whether `u = u_A (x) u_B` by operator-Schmidt decomposition, and
/// extract the local factors when it is.
///
/// The reshuffled matrix has the operator-Schmidt values as its singular
/// values; numerical rank 1 (second value below `tol` times the first) is
/// the factorizability criterion.
pub fn factorize_unitary(
    u: &CMatrix,
    d_a: usize,
    d_b: usize,
    tol: f64,
) -> Result<FactorizationReport> {
    if u.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch {
            expected: d_a * d_b,
            found: u.dim(),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let decomposition = svd(&reshuffle(u, d_a, d_b)?);
    let values = decomposition.values.clone();
    let rank_one = match values.get(1) {
        Some(&second) => second <= tol * values[0],
        None => true,
    };
    if !rank_one {
        return Ok(FactorizationReport {
            is_factorizable: false,
            schmidt_singular_values: values,
            u_a: None,
            u_b: None,
        });
    }

    // Leading singular vectors carry the factors: u_A from the left vector
    // scaled by sqrt(d_A), u_B from the conjugated right vector scaled by
    // sqrt(d_B). Unitarity of the input makes both exactly unitary.
    let left = decomposition.u.column(0);
    let right = decomposition.v.column(0);
    let u_a = fix_phase(CMatrix::from_fn(d_a, |i, j| {
        left[i * d_a + j] * (d_a as f64).sqrt()
    }));
    let u_b = fix_phase(CMatrix::from_fn(d_b, |k, l| {
        right[k * d_b + l].conj() * (d_b as f64).sqrt()
    }));
    Ok(FactorizationReport {
        is_factorizable: true,
        schmidt_singular_values: values,
        u_a: Some(u_a),
        u_b: Some(u_b),
    })
}

/// Rotate a matrix by a global phase so its largest-magnitude entry is real
/// positive.
fn fix_phase(m: CMatrix) -> CMatrix {
    let mut best = C64::ZERO;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if m[(i, j)].norm() > best.norm() {
                best = m[(i, j)];
            }
        }
    }
    if best.norm() == 0.0 {
        return m;
    }
    m.scale(best.conj() / best.norm())
}

/// One seeded verification trial of the factorizable-dynamics theorem.
#[derive(Debug, Clone, Copy)]
pub struct TheoremTrial {
    /// `||delta_rho||_F` under a random local pair `u_A (x) u_B`;
    /// zero up to roundoff, every time.
    pub factorized_norm: f64,
    /// `||delta_rho||_F` under a random joint (generically non-factorizable)
    /// unitary on the same state; typically far from zero.
    pub reference_norm: f64,
}

/// Draw a seeded random correlated state and compare the correlation term
/// under factorizable and non-factorizable dynamics.
pub fn theorem_trial(seed: u64, d_a: usize, d_b: usize) -> Result<TheoremTrial> {
    if d_a < 2 || d_b < 2 {
        return Err(Error::InvalidArgument(format!(
            "theorem trial needs dims >= 2, got ({d_a}, {d_b})"
        )));
    }
    let mut rng = seeded_rng(seed);
    let state = random_correlated_joint(&mut rng, d_a, d_b);
    let dec = decompose(&state)?;

    let u_a = random_unitary(&mut rng, d_a);
    let u_b = random_unitary(&mut rng, d_b);
    let factorized_norm = delta_rho(&u_a.tensor(&u_b), &dec)?.frobenius_norm();

    let u_ref = random_unitary(&mut rng, d_a * d_b);
    let reference_norm = delta_rho(&u_ref, &dec)?.frobenius_norm();

    Ok(TheoremTrial {
        factorized_norm,
        reference_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{
        cnot_hamiltonian, initial_state, propagator, AmplitudePair, StateKind,
    };
    use crate::linalg::pauli_z;
    use crate::random::random_density;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn decompose_product_state_has_no_correlation() {
        let mut rng = seeded_rng(41);
        for (da, db) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let rho_a = random_density(&mut rng, da);
            let rho_b = random_density(&mut rng, db);
            let joint = JointState::new(rho_a.tensor(&rho_b), da, db).unwrap();
            let dec = decompose(&joint).unwrap();
            assert!(dec.corr_op().max_abs_entry() < 1e-12);
            for i in 0..dec.gamma_rows() {
                for j in 0..dec.gamma_cols() {
                    assert!(dec.gamma(i, j).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn decompose_classical_balanced_state() {
        // corr_op = (|00><00| - |01><01| - |10><10| + |11><11|)/4 = sz (x) sz / 4,
        // i.e. gamma is zero except gamma[z,z] = 1/4.
        let state = initial_state(StateKind::Classical, &AmplitudePair::balanced());
        let dec = decompose(&state).unwrap();
        let expected = pauli_z().tensor(&pauli_z()).scale_re(0.25);
        assert!((dec.corr_op() - &expected).max_abs_entry() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == 2 && j == 2 { 0.25 } else { 0.0 };
                assert!((dec.gamma(i, j) - want).abs() < 1e-12);
            }
        }
        // Reconstruction from the coefficients returns corr_op.
        assert!((&dec.corr_from_gamma() - dec.corr_op()).max_abs_entry() < 1e-12);
    }

    #[test]
    fn decompose_bell_state_coefficients() {
        // |Phi+> has gamma nonzero exactly at (x,x), (y,y), (z,z) with values
        // (1/4, -1/4, 1/4).
        let state = initial_state(StateKind::Entangled, &AmplitudePair::balanced());
        let dec = decompose(&state).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = match (i, j) {
                    (0, 0) => 0.25,
                    (1, 1) => -0.25,
                    (2, 2) => 0.25,
                    _ => 0.0,
                };
                assert!(
                    (dec.gamma(i, j) - want).abs() < 1e-12,
                    "gamma[{i},{j}] = {}",
                    dec.gamma(i, j)
                );
            }
        }
        // Both partial traces of corr_op vanish.
        for side in [Side::A, Side::B] {
            let pt = dec.corr_op().partial_trace(2, 2, side).unwrap();
            assert!(pt.max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn decompose_reconstructs_random_states() {
        let mut rng = seeded_rng(43);
        for (da, db) in [(2usize, 2usize), (2, 3), (3, 3)] {
            let state = random_correlated_joint(&mut rng, da, db);
            let dec = decompose(&state).unwrap();
            let rebuilt = &dec.rho_a().tensor(dec.rho_b()) + dec.corr_op();
            assert!((&rebuilt - state.matrix()).max_abs_entry() < 1e-10);
            assert!(
                (&dec.corr_from_gamma() - dec.corr_op()).max_abs_entry() < 1e-10,
                "gamma projection lost part of the correlation operator"
            );
        }
    }

    #[test]
    fn delta_rho_identity_vanishes() {
        let state = initial_state(StateKind::Classical, &AmplitudePair::balanced());
        let dec = decompose(&state).unwrap();
        let d = delta_rho(&CMatrix::identity(4), &dec).unwrap();
        assert!(d.max_abs_entry() < 1e-14);
    }

    #[test]
    fn delta_rho_factorizable_vanishes() {
        let mut rng = seeded_rng(47);
        for _ in 0..25 {
            let state = random_correlated_joint(&mut rng, 2, 2);
            let dec = decompose(&state).unwrap();
            let u = random_unitary(&mut rng, 2).tensor(&random_unitary(&mut rng, 2));
            let d = delta_rho(&u, &dec).unwrap();
            assert!(d.frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn delta_rho_cnot_balanced_is_half_sz() {
        let state = initial_state(StateKind::Classical, &AmplitudePair::balanced());
        let dec = decompose(&state).unwrap();
        let u = propagator(&cnot_hamiltonian(), FRAC_PI_2);
        let d = delta_rho(&u, &dec).unwrap();
        let expected = pauli_z().scale_re(0.5);
        assert!((&d - &expected).max_abs_entry() < 1e-12);
        assert!((d.frobenius_norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn delta_rho_is_traceless_hermitian() {
        let mut rng = seeded_rng(53);
        for (da, db) in [(2usize, 2usize), (2, 3)] {
            let state = random_correlated_joint(&mut rng, da, db);
            let dec = decompose(&state).unwrap();
            let u = random_unitary(&mut rng, da * db);
            let d = delta_rho(&u, &dec).unwrap();
            assert!(d.trace().norm() < 1e-12);
            assert!(d.is_hermitian(1e-12));
        }
    }

    #[test]
    fn matrix_element_form_matches_delta_rho() {
        let mut rng = seeded_rng(59);
        for (da, db) in [(2usize, 2usize), (3, 2)] {
            let state = random_correlated_joint(&mut rng, da, db);
            let dec = decompose(&state).unwrap();
            let u = random_unitary(&mut rng, da * db);
            let d = delta_rho(&u, &dec).unwrap();
            for a in 0..da {
                for b in 0..da {
                    let elem = matrix_element_form(&u, &dec, a, b).unwrap();
                    assert!(
                        (elem - d[(a, b)]).norm() < 1e-12,
                        "trace identity path disagrees at ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn matrix_element_form_uncorrelated_is_zero() {
        let mut rng = seeded_rng(61);
        let rho_a = random_density(&mut rng, 2);
        let rho_b = random_density(&mut rng, 2);
        let joint = JointState::new(rho_a.tensor(&rho_b), 2, 2).unwrap();
        let dec = decompose(&joint).unwrap();
        let u = random_unitary(&mut rng, 4);
        for a in 0..2 {
            for b in 0..2 {
                assert!(matrix_element_form(&u, &dec, a, b).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_element_form_rejects_bad_indices() {
        let state = initial_state(StateKind::Classical, &AmplitudePair::balanced());
        let dec = decompose(&state).unwrap();
        let u = CMatrix::identity(4);
        assert!(matches!(
            matrix_element_form(&u, &dec, 2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn factorize_recovers_local_pairs() {
        let mut rng = seeded_rng(67);
        for (da, db) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let u_a = random_unitary(&mut rng, da);
            let u_b = random_unitary(&mut rng, db);
            let u = u_a.tensor(&u_b);
            let report = factorize_unitary(&u, da, db, 1e-8).unwrap();
            assert!(report.is_factorizable);
            let rebuilt = report
                .u_a
                .as_ref()
                .unwrap()
                .tensor(report.u_b.as_ref().unwrap());
            // Equal up to a global phase: align on the largest entry.
            let phase = align_phase(&rebuilt, &u);
            assert!((&rebuilt.scale(phase) - &u).max_abs_entry() < 1e-10);
            assert!(report.u_a.as_ref().unwrap().is_unitary(1e-10));
            assert!(report.u_b.as_ref().unwrap().is_unitary(1e-10));
        }
    }

    fn align_phase(got: &CMatrix, want: &CMatrix) -> C64 {
        let mut best = (0.0, C64::ONE);
        for i in 0..got.dim() {
            for j in 0..got.dim() {
                if got[(i, j)].norm() > best.0 {
                    best = (got[(i, j)].norm(), want[(i, j)] / got[(i, j)]);
                }
            }
        }
        best.1
    }

    #[test]
    fn factorize_flags_cnot_propagator() {
        let u = propagator(&cnot_hamiltonian(), FRAC_PI_2);
        let report = factorize_unitary(&u, 2, 2, 1e-8).unwrap();
        assert!(!report.is_factorizable);
        // Operator-Schmidt rank 2: exactly two nonzero singular values.
        assert!(report.schmidt_singular_values[1] > 1e-3);
        assert!(report.schmidt_singular_values[2] < 1e-10);
        assert!(report.u_a.is_none());
    }

    #[test]
    fn factorize_identity_is_trivially_factorizable() {
        let u = propagator(&cnot_hamiltonian(), 0.0);
        let report = factorize_unitary(&u, 2, 2, 1e-8).unwrap();
        assert!(report.is_factorizable);
    }

    #[test]
    fn factorize_rejects_non_unitary() {
        let m = CMatrix::identity(4).scale_re(3.0);
        assert!(matches!(
            factorize_unitary(&m, 2, 2, 1e-8),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn theorem_trial_factorized_norm_vanishes() {
        for seed in 0..20 {
            let trial = theorem_trial(seed, 2, 2).unwrap();
            assert!(trial.factorized_norm < 1e-10, "seed {seed}");
        }
        // Beyond qubits too.
        for (da, db) in [(2usize, 3usize), (3, 2), (3, 3)] {
            let trial = theorem_trial(7, da, db).unwrap();
            assert!(trial.factorized_norm < 1e-10);
        }
    }

    #[test]
    fn theorem_trial_rejects_small_dims() {
        assert!(theorem_trial(0, 1, 2).is_err());
    }
}
