//! Seeded random matrices and states.
//!
//! Everything is driven by an explicit ChaCha stream so that trials are
//! reproducible across runs and platforms. No entropy source is touched,
//! which also keeps the crate usable on wasm targets.

use num_complex::Complex64 as C64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dynamics::JointState;
use crate::linalg::{expm_hermitian, CMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample in `[0, 1)` from the top 53 bits of a `u64`.
fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box-Muller.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = 1.0 - uniform(rng); // (0, 1]
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Complex Gaussian with independent standard normal parts.
pub fn random_complex_gaussian(rng: &mut impl RngCore) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Ginibre matrix: independent complex Gaussian entries.
pub fn random_ginibre(rng: &mut impl RngCore, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| random_complex_gaussian(rng))
}

/// GUE-style random Hermitian matrix `(g + g^H) / 2`.
pub fn random_hermitian(rng: &mut impl RngCore, dim: usize) -> CMatrix {
    let g = random_ginibre(rng, dim);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Random unitary as `exp(-i h)` of a random Hermitian generator.
///
/// Not Haar-distributed, which nothing here needs; it is a deterministic,
/// generically non-factorizable unitary for the given stream state.
pub fn random_unitary(rng: &mut impl RngCore, dim: usize) -> CMatrix {
    let h = random_hermitian(rng, dim);
    expm_hermitian(&h, 1.0).expect("random Hermitian generator")
}

/// Full-rank random density matrix `g g^H / tr(g g^H)`.
///
/// Equivalent to tracing an ancilla of equal dimension out of a random
/// bipartite pure state, so the result is correlated with probability one
/// when read as a joint state.
pub fn random_density(rng: &mut impl RngCore, dim: usize) -> CMatrix {
    let g = random_ginibre(rng, dim);
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    m.scale_re(1.0 / t)
}

/// Random correlated joint state on `H_A (x) H_B`.
pub fn random_correlated_joint(rng: &mut impl RngCore, d_a: usize, d_b: usize) -> JointState {
    let rho = random_density(rng, d_a * d_b);
    JointState::new(rho, d_a, d_b).expect("random density is a valid joint state")
}

/// Random pure-state vector, normalized.
pub fn random_pure_state(rng: &mut impl RngCore, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| random_complex_gaussian(rng)).collect();
    let norm: f64 = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    for e in &mut v {
        *e /= norm;
    }
    v
}
