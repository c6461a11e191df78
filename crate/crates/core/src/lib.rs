//! Reduced dynamics of bipartite quantum systems.
//!
//! `redyn` evolves joint states on `H_A (x) H_B` under exact spectral
//! propagation, splits states into product-plus-correlation form, isolates
//! the correlation-induced term of the reduced state, detects factorizable
//! joint dynamics, and tests induced reduced maps for complete positivity
//! via their Choi matrices, extracting Kraus operators when they exist.
//!
//! The flagship worked example is a two-qubit controlled-NOT interaction:
//! classically correlated and entangled preparations with identical marginals
//! evolve to the same reduced state at a quarter period, their joint
//! diagonals stay equal at all times, and only joint coherences tell the
//! preparations apart. Under factorizable joint dynamics the correlation
//! term vanishes identically and every induced reduced map is completely
//! positive; under the controlled-NOT it is not.
//!
//! Conventions:
//! - the first tensor factor is subsystem A; kets are labelled `|ab>` with
//!   the A label leftmost,
//! - `hbar = 1`, time is dimensionless,
//! - propagators are `exp(-iHt)` by Hermitian eigendecomposition,
//! - predicates compare against explicit tolerances (default `1e-10`).

pub mod correlations;
pub mod cp_analysis;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Side, C64, DEFAULT_TOL};
