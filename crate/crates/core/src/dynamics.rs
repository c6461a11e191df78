//! Joint Hamiltonians, the built-in initial-state families, exact unitary
//! evolution, and reduced-state trajectories.
//!
//! Everything evolves by spectral decomposition of the Hamiltonian, so a
//! state at any time is exact to roundoff; there is no stepping error and no
//! time grid is privileged.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    eigh, expm_hermitian, pauli_x, trace_distance, CMatrix, Side, DEFAULT_TOL,
};

/// Tolerance for the amplitude normalization check `|alpha|^2 + |beta|^2 = 1`.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-9;

/// Hamiltonian on a bipartite space, with its tensor structure recorded when
/// it is a sum of local terms.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    joint: CMatrix,
    d_a: usize,
    d_b: usize,
    structure: HamiltonianStructure,
}

#[derive(Debug, Clone)]
pub enum HamiltonianStructure {
    General,
    /// `joint = h_a (x) I + I (x) h_b`; the propagator factorizes.
    Factorized { h_a: CMatrix, h_b: CMatrix },
}

impl Hamiltonian {
    pub fn new(joint: CMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if joint.dim() != d_a * d_b {
            return Err(Error::DimensionMismatch {
                expected: d_a * d_b,
                found: joint.dim(),
            });
        }
        let dev = joint.hermiticity_deviation();
        if !joint.is_hermitian(DEFAULT_TOL) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            joint,
            d_a,
            d_b,
            structure: HamiltonianStructure::General,
        })
    }

    /// Non-interacting Hamiltonian `h_a (x) I + I (x) h_b`.
    pub fn factorized(h_a: CMatrix, h_b: CMatrix) -> Result<Self> {
        for h in [&h_a, &h_b] {
            if !h.is_hermitian(DEFAULT_TOL) {
                return Err(Error::NotHermitian {
                    deviation: h.hermiticity_deviation(),
                });
            }
        }
        let d_a = h_a.dim();
        let d_b = h_b.dim();
        let joint = &h_a.tensor(&CMatrix::identity(d_b))
            + &CMatrix::identity(d_a).tensor(&h_b);
        Ok(Self {
            joint,
            d_a,
            d_b,
            structure: HamiltonianStructure::Factorized { h_a, h_b },
        })
    }

    pub fn joint(&self) -> &CMatrix {
        &self.joint
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn structure(&self) -> &HamiltonianStructure {
        &self.structure
    }
}

/// The two-qubit controlled-NOT generator
/// `H = sx (x) |1><1| + I (x) |0><0|` (control on B, target on A).
///
/// At `t = pi/2` its propagator is a controlled-NOT up to a global phase
/// of `-i`.
pub fn cnot_hamiltonian() -> Hamiltonian {
    let p0 = CMatrix::matrix_unit(2, 0, 0).unwrap();
    let p1 = CMatrix::matrix_unit(2, 1, 1).unwrap();
    let joint = &pauli_x().tensor(&p1) + &CMatrix::identity(2).tensor(&p0);
    Hamiltonian::new(joint, 2, 2).expect("C-NOT Hamiltonian is Hermitian")
}

/// Amplitudes `(alpha, beta)` with `|alpha|^2 + |beta|^2 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudePair {
    alpha: C64,
    beta: C64,
}

impl AmplitudePair {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > AMPLITUDE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { alpha, beta })
    }

    /// Real equal-weight pair `alpha = beta = 1/sqrt(2)`.
    pub fn balanced() -> Self {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha: s, beta: s }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }
}

/// Which initial-state family to prepare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Classically correlated mixture `|a|^2 |00><00| + |b|^2 |11><11|`.
    Classical,
    /// Entangled pure state `(a|00> + b|11>)(a*<00| + b*<11|)`.
    Entangled,
}

/// Density matrix on `H_A (x) H_B` with recorded subsystem dimensions.
#[derive(Debug, Clone)]
pub struct JointState {
    matrix: CMatrix,
    d_a: usize,
    d_b: usize,
}

impl JointState {
    /// Validate Hermiticity, positivity and unit trace within `DEFAULT_TOL`.
    pub fn new(matrix: CMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if matrix.dim() != d_a * d_b {
            return Err(Error::DimensionMismatch {
                expected: d_a * d_b,
                found: matrix.dim(),
            });
        }
        if !matrix.is_hermitian(DEFAULT_TOL) {
            return Err(Error::InvalidDensityMatrix {
                reason: format!(
                    "not Hermitian (deviation {:.3e})",
                    matrix.hermiticity_deviation()
                ),
            });
        }
        let min = eigh(&matrix, DEFAULT_TOL)?.min_value();
        if min < -DEFAULT_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("negative eigenvalue {min:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {tr} != 1"),
            });
        }
        Ok(Self { matrix, d_a, d_b })
    }

    /// Internal constructor for states valid by construction.
    pub(crate) fn new_unchecked(matrix: CMatrix, d_a: usize, d_b: usize) -> Self {
        Self { matrix, d_a, d_b }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Marginal of subsystem A (trace over B).
    pub fn reduced_a(&self) -> CMatrix {
        self.matrix
            .partial_trace(self.d_a, self.d_b, Side::B)
            .expect("dims recorded at construction")
    }

    /// Marginal of subsystem B (trace over A).
    pub fn reduced_b(&self) -> CMatrix {
        self.matrix
            .partial_trace(self.d_a, self.d_b, Side::A)
            .expect("dims recorded at construction")
    }

    /// Conjugate by a joint unitary: `rho -> u rho u^H`.
    pub fn evolve(&self, u: &CMatrix) -> Result<JointState> {
        if u.dim() != self.matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim(),
                found: u.dim(),
            });
        }
        let dev = u.unitarity_deviation();
        if dev > DEFAULT_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        let evolved = &(u * &self.matrix) * &u.adjoint();
        Ok(JointState::new_unchecked(evolved, self.d_a, self.d_b))
    }
}

/// Prepare one of the two built-in two-qubit initial states.
///
/// Both families share the same marginals
/// `rho_A = rho_B = |a|^2 |0><0| + |b|^2 |1><1|` for every amplitude pair.
pub fn initial_state(kind: StateKind, amps: &AmplitudePair) -> JointState {
    let a2 = amps.alpha().norm_sqr();
    let b2 = amps.beta().norm_sqr();
    let matrix = match kind {
        StateKind::Classical => {
            let mut m = CMatrix::zeros(4);
            m[(0, 0)] = C64::new(a2, 0.0);
            m[(3, 3)] = C64::new(b2, 0.0);
            m
        }
        StateKind::Entangled => {
            let psi = [amps.alpha(), C64::ZERO, C64::ZERO, amps.beta()];
            CMatrix::outer(&psi, &psi).expect("4-vector outer product")
        }
    };
    JointState::new_unchecked(matrix, 2, 2)
}

/// Propagator `exp(-i H t)`.
///
/// For factorized Hamiltonians the local exponentials are taken separately;
/// the two routes agree because the local terms commute.
pub fn propagator(h: &Hamiltonian, t: f64) -> CMatrix {
    match &h.structure {
        HamiltonianStructure::General => {
            expm_hermitian(&h.joint, t).expect("Hamiltonian validated at construction")
        }
        HamiltonianStructure::Factorized { h_a, h_b } => {
            let u_a = expm_hermitian(h_a, t).expect("local term validated");
            let u_b = expm_hermitian(h_b, t).expect("local term validated");
            u_a.tensor(&u_b)
        }
    }
}

/// Time grid plus the joint and reduced states at each grid point.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub joint_states: Vec<JointState>,
    pub reduced_states: Vec<CMatrix>,
}

/// Evolve `state0` under `h` and record the A-marginal at each time.
pub fn reduced_trajectory(
    h: &Hamiltonian,
    state0: &JointState,
    times: &[f64],
) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite time value".into()));
    }
    if state0.matrix().dim() != h.joint.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.joint.dim(),
            found: state0.matrix().dim(),
        });
    }
    let mut joint_states = Vec::with_capacity(times.len());
    let mut reduced_states = Vec::with_capacity(times.len());
    for &t in times {
        let u = propagator(h, t);
        let jt = state0.evolve(&u)?;
        reduced_states.push(jt.reduced_a());
        joint_states.push(jt);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        joint_states,
        reduced_states,
    })
}

/// Per-time gaps between the classical and entangled preparations.
#[derive(Debug, Clone, Copy)]
pub struct CaseGaps {
    pub t: f64,
    /// `1/2 ||rho_A^(1)(t) - rho_A^(2)(t)||_1`.
    pub trace_distance_reduced: f64,
    /// Max |difference| over joint computational-basis diagonal entries.
    pub max_joint_diagonal_gap: f64,
    /// Max |difference| over joint off-diagonal entries.
    pub max_joint_coherence_gap: f64,
}

/// Run both initial-state families side by side over a time grid.
pub fn compare_cases(
    h: &Hamiltonian,
    amps: &AmplitudePair,
    times: &[f64],
) -> Result<Vec<CaseGaps>> {
    let classical = reduced_trajectory(h, &initial_state(StateKind::Classical, amps), times)?;
    let entangled = reduced_trajectory(h, &initial_state(StateKind::Entangled, amps), times)?;
    let dim = h.joint.dim();
    let mut out = Vec::with_capacity(times.len());
    for (idx, &t) in times.iter().enumerate() {
        let r1 = &classical.reduced_states[idx];
        let r2 = &entangled.reduced_states[idx];
        let j1 = classical.joint_states[idx].matrix();
        let j2 = entangled.joint_states[idx].matrix();
        let mut diag_gap = 0.0f64;
        let mut coh_gap = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let gap = (j1[(i, j)] - j2[(i, j)]).norm();
                if i == j {
                    diag_gap = diag_gap.max(gap);
                } else {
                    coh_gap = coh_gap.max(gap);
                }
            }
        }
        out.push(CaseGaps {
            t,
            trace_distance_reduced: trace_distance(r1, r2)?,
            max_joint_diagonal_gap: diag_gap,
            max_joint_coherence_gap: coh_gap,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;
    use crate::random::{random_unitary, seeded_rng};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cnot_hamiltonian_matrix() {
        let h = cnot_hamiltonian();
        let m = h.joint();
        // <00|H|00> = 1 from the I (x) |0><0| term.
        assert_eq!(m[(0, 0)], C64::ONE);
        // H|11> = |01>: sx flips A when B = 1.
        assert_eq!(m[(1, 3)], C64::ONE);
        assert_eq!(m[(3, 3)], C64::ZERO);
        // Eigenvalues {(-1), 1, 1, 1}.
        let eig = eigh(m, DEFAULT_TOL).unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_states_alpha_zero_coincide() {
        let amps = AmplitudePair::new(C64::ZERO, C64::ONE).unwrap();
        let classical = initial_state(StateKind::Classical, &amps);
        let entangled = initial_state(StateKind::Entangled, &amps);
        let p11 = CMatrix::matrix_unit(4, 3, 3).unwrap();
        assert!((classical.matrix() - &p11).max_abs_entry() < 1e-15);
        assert!((entangled.matrix() - &p11).max_abs_entry() < 1e-15);
    }

    #[test]
    fn initial_state_bell_case() {
        let amps = AmplitudePair::balanced();
        let rho = initial_state(StateKind::Entangled, &amps);
        assert!((rho.matrix()[(0, 3)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rho.matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn initial_state_marginals_match() {
        let amps = AmplitudePair::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let classical = initial_state(StateKind::Classical, &amps);
        let entangled = initial_state(StateKind::Entangled, &amps);
        let expected = {
            let mut m = CMatrix::zeros(2);
            m[(0, 0)] = c(0.36, 0.0);
            m[(1, 1)] = c(0.64, 0.0);
            m
        };
        for state in [&classical, &entangled] {
            assert!((&state.reduced_a() - &expected).max_abs_entry() < 1e-12);
            assert!((&state.reduced_b() - &expected).max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn amplitude_pair_rejects_unnormalized() {
        assert!(matches!(
            AmplitudePair::new(C64::ONE, C64::ONE),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn propagator_at_zero_and_quarter_period() {
        let h = cnot_hamiltonian();
        let u0 = propagator(&h, 0.0);
        assert!((&u0 - &CMatrix::identity(4)).max_abs_entry() < 1e-13);

        // U(pi/2) = -i (sx (x) |1><1| + I (x) |0><0|): a controlled-NOT up to
        // the global phase -i. In particular U|11> = -i|01>.
        let u = propagator(&h, FRAC_PI_2);
        assert!(u.is_unitary(1e-12));
        let expected = h.joint().scale(-C64::i());
        assert!((&u - &expected).max_abs_entry() < 1e-12);
        assert!((u[(1, 3)] - -C64::i()).norm() < 1e-12);
    }

    #[test]
    fn propagator_factorized_splits() {
        let mut rng = seeded_rng(23);
        let h_a = crate::random::random_hermitian(&mut rng, 2);
        let h_b = crate::random::random_hermitian(&mut rng, 3);
        let h = Hamiltonian::factorized(h_a.clone(), h_b.clone()).unwrap();
        // Factorized route against the joint spectral route.
        let direct = expm_hermitian(h.joint(), 0.9).unwrap();
        let split = propagator(&h, 0.9);
        assert!((&direct - &split).max_abs_entry() < 1e-10);
    }

    #[test]
    fn evolve_identity_and_purity() {
        let amps = AmplitudePair::balanced();
        let state = initial_state(StateKind::Entangled, &amps);
        let same = state.evolve(&CMatrix::identity(4)).unwrap();
        assert!((same.matrix() - state.matrix()).max_abs_entry() < 1e-15);

        let mut rng = seeded_rng(31);
        let u = random_unitary(&mut rng, 4);
        let rho = crate::random::random_density(&mut rng, 4);
        let evolved = JointState::new(rho.clone(), 2, 2)
            .unwrap()
            .evolve(&u)
            .unwrap();
        let purity_before = (&rho * &rho).trace().re;
        let purity_after = (evolved.matrix() * evolved.matrix()).trace().re;
        assert!((purity_before - purity_after).abs() < 1e-12);
    }

    #[test]
    fn evolve_rejects_non_unitary() {
        let amps = AmplitudePair::balanced();
        let state = initial_state(StateKind::Classical, &amps);
        let not_u = CMatrix::identity(4).scale_re(2.0);
        assert!(matches!(
            state.evolve(&not_u),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn classical_alpha_zero_maps_to_01() {
        // |11><11| under the pi/2 propagator goes to |01><01|, whose
        // A-marginal is |0><0| = (I + sz)/2.
        let amps = AmplitudePair::new(C64::ZERO, C64::ONE).unwrap();
        let state = initial_state(StateKind::Classical, &amps);
        let u = propagator(&cnot_hamiltonian(), FRAC_PI_2);
        let evolved = state.evolve(&u).unwrap();
        let p01 = CMatrix::matrix_unit(4, 1, 1).unwrap();
        assert!((evolved.matrix() - &p01).max_abs_entry() < 1e-12);
        let p0 = CMatrix::matrix_unit(2, 0, 0).unwrap();
        assert!((&evolved.reduced_a() - &p0).max_abs_entry() < 1e-12);
    }

    #[test]
    fn reduced_state_pinned_at_quarter_period_both_cases() {
        // Both preparations give rho_A(pi/2) = (I + sz)/2 = |0><0| for every
        // amplitude pair; the correlated case does NOT follow
        // (I + (|a|^2 - |b|^2) sz)/2.
        let h = cnot_hamiltonian();
        let p0 = CMatrix::matrix_unit(2, 0, 0).unwrap();
        for (ar, ai) in [(0.3, 0.4), (FRAC_1_SQRT_2, 0.0), (0.9, 0.1)] {
            let b = (1.0 - ar * ar - ai * ai).sqrt();
            let amps = AmplitudePair::new(c(ar, ai), c(b, 0.0)).unwrap();
            for kind in [StateKind::Classical, StateKind::Entangled] {
                let traj =
                    reduced_trajectory(&h, &initial_state(kind, &amps), &[FRAC_PI_2]).unwrap();
                assert!(
                    (&traj.reduced_states[0] - &p0).max_abs_entry() < 1e-12,
                    "kind {kind:?}, alpha ({ar}, {ai})"
                );
            }
        }
        // The balanced entangled case refutes the (I + (|a|^2-|b|^2) sz)/2
        // prediction, which would be I/2 here: the actual distance is 1/2.
        let amps = AmplitudePair::balanced();
        let traj = reduced_trajectory(
            &h,
            &initial_state(StateKind::Entangled, &amps),
            &[FRAC_PI_2],
        )
        .unwrap();
        let half_i = CMatrix::identity(2).scale_re(0.5);
        let d = trace_distance(&traj.reduced_states[0], &half_i).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn trajectory_at_zero_returns_marginal() {
        let (a, b) = (c(0.48, 0.2), c(0.1, 0.85));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let amps = AmplitudePair::new(a / n, b / n).unwrap();
        let state = initial_state(StateKind::Entangled, &amps);
        let traj = reduced_trajectory(&cnot_hamiltonian(), &state, &[0.0]).unwrap();
        assert!((&traj.reduced_states[0] - &state.reduced_a()).max_abs_entry() < 1e-13);
    }

    #[test]
    fn trajectory_rejects_bad_grids() {
        let amps = AmplitudePair::balanced();
        let state = initial_state(StateKind::Classical, &amps);
        let h = cnot_hamiltonian();
        assert!(reduced_trajectory(&h, &state, &[]).is_err());
        assert!(reduced_trajectory(&h, &state, &[0.0, f64::NAN]).is_err());
    }

    #[test]
    fn trajectory_states_stay_physical() {
        let amps = AmplitudePair::balanced();
        let state = initial_state(StateKind::Entangled, &amps);
        let h = cnot_hamiltonian();
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * PI / 10.0).collect();
        let traj = reduced_trajectory(&h, &state, &times).unwrap();
        let e0 = (h.joint() * state.matrix()).trace().re;
        for (jt, red) in traj.joint_states.iter().zip(&traj.reduced_states) {
            assert!(jt.matrix().is_hermitian(DEFAULT_TOL));
            assert!(is_psd(jt.matrix(), DEFAULT_TOL));
            assert!((jt.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!((red.trace().re - 1.0).abs() < 1e-12);
            // Energy conservation along the trajectory.
            let e = (h.joint() * jt.matrix()).trace().re;
            assert!((e - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn compare_cases_diagonal_invariance_and_coherence_gap() {
        let h = cnot_hamiltonian();
        let amps = AmplitudePair::balanced();
        let times: Vec<f64> = (0..=32).map(|k| k as f64 * PI / 16.0).collect();
        let gaps = compare_cases(&h, &amps, &times).unwrap();
        for g in &gaps {
            assert!(
                g.max_joint_diagonal_gap < 1e-10,
                "diagonal gap {} at t = {}",
                g.max_joint_diagonal_gap,
                g.t
            );
        }
        // At t = pi/4 the joint coherences differ strongly.
        let quarter = gaps
            .iter()
            .min_by(|a, b| {
                (a.t - PI / 4.0).abs().total_cmp(&(b.t - PI / 4.0).abs())
            })
            .unwrap();
        assert!(quarter.max_joint_coherence_gap > 0.1);
    }

    #[test]
    fn compare_cases_degenerate_amplitudes() {
        // alpha = 0 or beta = 0 force identical joint states, so every gap
        // vanishes at all times.
        let h = cnot_hamiltonian();
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.6).collect();
        for amps in [
            AmplitudePair::new(C64::ZERO, C64::ONE).unwrap(),
            AmplitudePair::new(C64::ONE, C64::ZERO).unwrap(),
        ] {
            for g in compare_cases(&h, &amps, &times).unwrap() {
                assert!(g.trace_distance_reduced < 1e-10);
                assert!(g.max_joint_diagonal_gap < 1e-10);
                assert!(g.max_joint_coherence_gap < 1e-10);
            }
        }
    }
}
