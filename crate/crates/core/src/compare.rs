//! Side-by-side comparison of predicted vs fitted/measured expansion data.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub alpha: Complex64,
    pub k: u32,
    pub predicted: Complex64,
    pub fitted: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ExpansionComparison {
    pub rows: Vec<ComparisonRow>,
    /// Expected and fitted log-log remainder slopes, when a slope test ran.
    pub slope_expected: Option<f64>,
    pub slope_fitted: Option<f64>,
    pub max_residual: f64,
    pub passed: bool,
    pub notes: String,
}
