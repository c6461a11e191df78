//! Serializable report schemas. Field order is the schema: serde_json keeps
//! struct declaration order, which makes identical runs byte-identical.

use serde::Serialize;

use redyn::{CMatrix, C64};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Dense matrix as nested rows of `{re, im}` entries.
pub type MatrixJson = Vec<Vec<ComplexJson>>;

pub fn matrix_json(m: &CMatrix) -> MatrixJson {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ReproduceReport {
    pub scenario: &'static str,
    pub alpha: ComplexJson,
    pub beta: ComplexJson,
    pub t: f64,
    pub tol: f64,
    /// `(I + sz)/2`, the prediction that exact evolution confirms for the
    /// uncorrelated preparation (and, it turns out, for both).
    pub ground_prediction: MatrixJson,
    /// `(I + (|alpha|^2 - |beta|^2) sz)/2`, the amplitude-weighted prediction
    /// that exact evolution refutes for the entangled preparation.
    pub weighted_prediction: MatrixJson,
    pub cases: Vec<ReproduceCase>,
    pub alpha_zero_consistency: AlphaZeroConsistency,
    pub checks: ReproduceChecks,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct ReproduceCase {
    pub kind: &'static str,
    pub reduced_oracle: MatrixJson,
    pub distance_to_ground_prediction: f64,
    pub distance_to_weighted_prediction: f64,
}

#[derive(Debug, Serialize)]
pub struct AlphaZeroConsistency {
    pub grid_points: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub max_reduced_trace_distance: f64,
    pub max_joint_entry_gap: f64,
}

#[derive(Debug, Serialize)]
pub struct ReproduceChecks {
    pub classical_matches_ground_prediction: bool,
    pub alpha_zero_cases_identical: bool,
}

#[derive(Debug, Serialize)]
pub struct TheoremReport {
    pub scenario: &'static str,
    pub dims: [usize; 2],
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Largest `||delta_rho||_F` seen under factorizable dynamics.
    pub max_factorized_norm: f64,
    pub reference_norms: NormSummary,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct NormSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Serialize)]
pub struct CpReport {
    pub scenario: &'static str,
    pub alpha: ComplexJson,
    pub beta: ComplexJson,
    pub seed: u64,
    pub tol: f64,
    pub grid: Vec<CpGridRow>,
    /// Random local pair at the configured seed with the classical
    /// correlation operator: must be CP with a single Kraus operator.
    pub factorizable_control: CpVerdict,
    pub checks: CpChecks,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct CpGridRow {
    pub t: f64,
    pub product: CpVerdict,
    pub correlated_classical: CpVerdict,
    pub correlated_entangled: CpVerdict,
}

#[derive(Debug, Serialize)]
pub struct CpVerdict {
    pub choi_min_eigenvalue: f64,
    pub completely_positive: bool,
    /// Present exactly when the map is CP.
    pub kraus_count: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct CpChecks {
    pub product_always_cp: bool,
    pub control_cp_single_kraus: bool,
}

/// Fixed-format float for CSV cells: 17 significant digits, enough to make
/// runs diff-able and reparse to the same bits.
pub fn csv_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact matrix block for the human-readable reports.
pub fn format_matrix(m: &CMatrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        out.push_str(indent);
        out.push('[');
        for j in 0..m.dim() {
            let e = m[(i, j)];
            out.push_str(&format!(" {:+.10}{:+.10}i", e.re, e.im));
        }
        out.push_str(" ]\n");
    }
    out
}
