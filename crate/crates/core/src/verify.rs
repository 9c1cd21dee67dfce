//! End-to-end verification: the determinant identity
//! det_ζ(L+z) = exp(Σ_{j<p} z^j/j!·c_j)·det_p(I+zL^{-1}) on a z grid, the
//! constant-term statement for the large-z expansion of log det_p, and the
//! catalog report with CSV/JSON emission.

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::expansion::Exponent;
use crate::fredholm::{self, FredholmOptions};
use crate::models::{RemainderLaw, SpectrumModel};
use crate::numeric::Precision;
use crate::special;
use crate::zeta::{self, ZetaOptions};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Max residual of the log-identity per grid point.
    pub tol_identity: f64,
    /// Tolerance of the fitted constant / log z coefficient comparisons.
    pub tol_constant: f64,
    pub z_grid: Vec<Complex64>,
    pub fit_grid: Vec<f64>,
    pub precision: Precision,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol_identity: 1e-6,
            tol_constant: 1e-3,
            z_grid: [0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
            fit_grid: (0..6).map(|j| 25.0 * 2f64.powi(j)).collect(),
            precision: Precision::Double,
        }
    }
}

impl VerifyOptions {
    pub fn zeta_options(&self) -> ZetaOptions {
        ZetaOptions {
            tol: 1e-11,
            precision: self.precision,
        }
    }

    pub fn fredholm_options(&self) -> FredholmOptions {
        FredholmOptions {
            tol: 1e-12,
            precision: self.precision,
        }
    }
}

/// Both sides of the main determinant identity at every grid point.
#[derive(Debug, Clone, Serialize)]
pub struct DeterminantReport {
    pub model: String,
    pub p: u32,
    pub z_grid: Vec<Complex64>,
    /// log det_ζ(L+z) per grid point.
    pub lhs: Vec<Complex64>,
    /// Taylor coefficients c_0 .. c_{p-1} of log det_ζ(L+z) at 0.
    pub taylor_poly: Vec<Complex64>,
    /// Σ_j c_j z^j/j! + log det_p(I + zL^{-1}) per grid point.
    pub rhs: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub passed: bool,
    /// Filled by [`verify_model`]: the constant-term comparison.
    pub constant_term_check: Option<ConstantTermCheck>,
}

/// Verifies det_ζ(L+z) = exp(Σ_{j=0}^{p-1} z^j/j!·c_j)·det_p(I+zL^{-1})
/// in log form over the grid.
pub fn verify_main_theorem(
    model: &SpectrumModel,
    z_grid: &[Complex64],
    opts: &VerifyOptions,
) -> Result<DeterminantReport> {
    if model.dim_ker != 0 {
        return Err(Error::InvalidModel(format!(
            "main-theorem verification needs an invertible operator; {} has dim ker = {}",
            model.name, model.dim_ker
        )));
    }
    let zopts = opts.zeta_options();
    let fopts = opts.fredholm_options();
    let p = model.schatten_p;
    let mut taylor_poly = vec![zeta::log_det_zeta(model, &zopts)?.value];
    for j in 1..p {
        taylor_poly.push(zeta::taylor_log_det_zeta(model, j, &zopts)?);
    }
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut residuals = Vec::new();
    for &z in z_grid {
        let l = zeta::log_det_zeta_shifted(model, z, &zopts)?.value;
        let det = fredholm::det_fredholm(model, z, p, &fopts)?;
        let logdet = det.log_value.ok_or(Error::OnSpectrum { z })?;
        let mut poly = Complex64::ZERO;
        let mut zj = Complex64::ONE;
        for (j, c) in taylor_poly.iter().enumerate() {
            poly += c * zj / special::factorial(j as u32);
            zj *= z;
        }
        let r = poly + logdet;
        residuals.push((l - r).norm());
        lhs.push(l);
        rhs.push(r);
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(DeterminantReport {
        model: model.name.clone(),
        p,
        z_grid: z_grid.to_vec(),
        lhs,
        taylor_poly,
        rhs,
        residuals,
        max_residual,
        passed: max_residual < opts.tol_identity,
        constant_term_check: None,
    })
}

/// Main-theorem verification plus the constant-term fit in one report.
pub fn verify_model(model: &SpectrumModel, opts: &VerifyOptions) -> Result<DeterminantReport> {
    let mut rep = verify_main_theorem(model, &opts.z_grid, opts)?;
    let ct = verify_constant_term(model, opts)?;
    rep.passed = rep.passed && ct.passed;
    rep.constant_term_check = Some(ct);
    Ok(rep)
}

/// Fitted constant and log z coefficient of log det_p against
/// -log det_ζ(L) and A^H_00.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantTermCheck {
    pub model: String,
    pub fitted_constant: f64,
    pub expected_constant: f64,
    pub fitted_log_coeff: f64,
    pub expected_log_coeff: f64,
    pub fit_condition: f64,
    pub passed: bool,
}

/// Fits log det_p samples on the predicted template and compares the (0,0)
/// coefficient with -log det_ζ(L) and the (0,1) coefficient with A^H_00.
pub fn verify_constant_term(
    model: &SpectrumModel,
    opts: &VerifyOptions,
) -> Result<ConstantTermCheck> {
    if model.dim_ker != 0 {
        return Err(Error::InvalidModel(
            "constant-term verification needs dim ker = 0".into(),
        ));
    }
    let zopts = opts.zeta_options();
    let fopts = opts.fredholm_options();
    let det0 = zeta::log_det_zeta(model, &zopts)?.value;
    let mut taylor = Vec::new();
    for j in 1..model.schatten_p {
        taylor.push(zeta::taylor_log_det_zeta(model, j, &zopts)?);
    }
    let predicted = asymptotics::predict_fredholm_expansion_given(model, det0, &taylor)?;
    // Template: every predicted term down to z^{-2}, plus the constant and
    // log z slots (present or not). Cutting at z^{-1} would bias the fitted
    // constant by ~|c_2|·z_0^{-2} for models with a nonzero z^{-2} term.
    let mut template: Vec<(f64, u32)> = predicted
        .terms()
        .filter(|((a, _), _)| a.re_f64() <= 2.0 + 1e-9)
        .map(|((a, k), _)| (a.re_f64(), *k))
        .collect();
    for slot in [(0.0, 0u32), (0.0, 1u32)] {
        if !template.contains(&slot) {
            template.push(slot);
        }
    }
    template.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    // The fit needs template.len() + 2 samples; extend the geometric grid
    // when the template is larger than the default grid allows.
    let mut grid = opts.fit_grid.clone();
    while grid.len() < template.len() + 2 {
        grid.push(grid.last().copied().unwrap_or(25.0) * 2.0);
    }
    let samples: Vec<(f64, Complex64)> = grid
        .iter()
        .map(|&z| {
            let det =
                fredholm::det_fredholm(model, Complex64::new(z, 0.0), model.schatten_p, &fopts)?;
            Ok((
                z,
                det.log_value.ok_or(Error::OnSpectrum {
                    z: Complex64::new(z, 0.0),
                })?,
            ))
        })
        .collect::<Result<_>>()?;
    let (fit, diag) = asymptotics::fit_expansion(&samples, &template)?;
    let fitted_constant = fit.coeff(&Exponent::from_int(0), 0).value().re;
    let fitted_log_coeff = fit.coeff(&Exponent::from_int(0), 1).value().re;
    let expected_constant = -det0.re;
    let expected_log_coeff = model
        .heat_expansion
        .coeff(&Exponent::from_int(0), 0)
        .value()
        .re;
    let passed = (fitted_constant - expected_constant).abs() < opts.tol_constant
        && (fitted_log_coeff - expected_log_coeff).abs() < opts.tol_constant;
    Ok(ConstantTermCheck {
        model: model.name.clone(),
        fitted_constant,
        expected_constant,
        fitted_log_coeff,
        expected_log_coeff,
        fit_condition: diag.condition,
        passed,
    })
}

/// One line of the report; `z` is meaningful for per-grid-point checks.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub model: String,
    pub check: String,
    pub z: Complex64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl CheckRow {
    fn fail(model: &str, check: &str, note: String) -> Self {
        CheckRow {
            model: model.into(),
            check: check.into(),
            z: Complex64::ZERO,
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::NAN,
            passed: false,
            note,
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct FullReport {
    pub rows: Vec<CheckRow>,
    pub passed: bool,
}

impl FullReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,check,z_re,z_im,lhs,rhs,residual,status\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.15e},{:.15e},{:.3e},{}\n",
                r.model,
                r.check,
                r.z.re,
                r.z.im,
                r.lhs,
                r.rhs,
                r.residual,
                if r.passed { "PASS" } else { "FAIL" }
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn human_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<8} {:<22} {:>8} {:>14} {:>14} {:>10} {:>6}\n",
            "model", "check", "z", "lhs", "rhs", "residual", "status"
        ));
        for r in &self.rows {
            let zs = if r.z.im == 0.0 {
                format!("{}", r.z.re)
            } else {
                format!("{}", r.z)
            };
            out.push_str(&format!(
                "{:<8} {:<22} {:>8} {:>14.9} {:>14.9} {:>10.2e} {:>6}\n",
                r.model,
                r.check,
                zs,
                r.lhs,
                r.rhs,
                r.residual,
                if r.passed { "PASS" } else { "FAIL" }
            ));
            if !r.note.is_empty() {
                out.push_str(&format!("         note: {}\n", r.note));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn heat_validation_grid(model: &SpectrumModel) -> (Vec<f64>, f64) {
    match model.remainder {
        // The exp-small bound |rem| < 2e^{-rate/t} needs √(π/t) ≤ 2.
        RemainderLaw::ExpSmall { .. } => ((0..5).map(|i| 0.8 + 0.05 * i as f64).collect(), 0.0),
        RemainderLaw::Power { .. } => ((0..8).map(|i| 0.05 * 1.35f64.powi(i)).collect(), 1.0),
    }
}

/// Runs the full suite on the given models: dual-route determinants with
/// oracle anchors, heat-expansion validation, the main theorem on the z
/// grid, and the constant-term fit.
pub fn run_report(models: &[SpectrumModel], opts: &VerifyOptions) -> FullReport {
    let zopts = opts.zeta_options();
    let mut rows = Vec::new();
    for m in models {
        // Dual-route determinant (+ closed form when the model has one).
        match zeta::log_det_zeta(m, &zopts) {
            Ok(d) => {
                rows.push(CheckRow {
                    model: m.name.clone(),
                    check: "detzeta_routes".into(),
                    z: Complex64::ZERO,
                    lhs: d.route_heat.re,
                    rhs: d.route_derivative.re,
                    residual: d.residual,
                    passed: d.residual < 1e-7,
                    note: String::new(),
                });
                if let Some(oracle) = m.oracle {
                    let want = crate::oracles::log_det_zeta_closed(oracle);
                    let resid = (d.value.re - want).abs();
                    rows.push(CheckRow {
                        model: m.name.clone(),
                        check: "detzeta_oracle".into(),
                        z: Complex64::ZERO,
                        lhs: d.value.re,
                        rhs: want,
                        residual: resid,
                        passed: resid < 1e-8,
                        note: String::new(),
                    });
                }
            }
            Err(e) => rows.push(CheckRow::fail(&m.name, "detzeta_routes", e.to_string())),
        }
        // Heat-expansion validation.
        let (grid, k_max) = heat_validation_grid(m);
        match m.validate_heat_expansion(&grid, k_max) {
            Ok(cmp) => rows.push(CheckRow {
                model: m.name.clone(),
                check: "heat_expansion".into(),
                z: Complex64::ZERO,
                lhs: cmp.slope_fitted.unwrap_or(f64::NAN),
                rhs: cmp.slope_expected.unwrap_or(f64::NAN),
                residual: cmp.max_residual,
                passed: cmp.passed,
                note: cmp.notes,
            }),
            Err(e) => rows.push(CheckRow::fail(&m.name, "heat_expansion", e.to_string())),
        }
        // Main theorem on the grid.
        match verify_main_theorem(m, &opts.z_grid, opts) {
            Ok(rep) => {
                for i in 0..rep.z_grid.len() {
                    rows.push(CheckRow {
                        model: m.name.clone(),
                        check: "main_theorem".into(),
                        z: rep.z_grid[i],
                        lhs: rep.lhs[i].re,
                        rhs: rep.rhs[i].re,
                        residual: rep.residuals[i],
                        passed: rep.residuals[i] < opts.tol_identity,
                        note: String::new(),
                    });
                }
            }
            Err(e) => rows.push(CheckRow::fail(&m.name, "main_theorem", e.to_string())),
        }
        // Constant term of the Fredholm expansion.
        match verify_constant_term(m, opts) {
            Ok(ct) => {
                rows.push(CheckRow {
                    model: m.name.clone(),
                    check: "fredholm_constant".into(),
                    z: Complex64::ZERO,
                    lhs: ct.fitted_constant,
                    rhs: ct.expected_constant,
                    residual: (ct.fitted_constant - ct.expected_constant).abs(),
                    passed: (ct.fitted_constant - ct.expected_constant).abs() < opts.tol_constant,
                    note: String::new(),
                });
                rows.push(CheckRow {
                    model: m.name.clone(),
                    check: "fredholm_log_coeff".into(),
                    z: Complex64::ZERO,
                    lhs: ct.fitted_log_coeff,
                    rhs: ct.expected_log_coeff,
                    residual: (ct.fitted_log_coeff - ct.expected_log_coeff).abs(),
                    passed: (ct.fitted_log_coeff - ct.expected_log_coeff).abs() < opts.tol_constant,
                    note: String::new(),
                });
            }
            Err(e) => rows.push(CheckRow::fail(&m.name, "fredholm_constant", e.to_string())),
        }
    }
    let passed = rows.iter().all(|r| r.passed);
    FullReport { rows, passed }
}
