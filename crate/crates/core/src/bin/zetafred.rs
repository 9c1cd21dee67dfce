//! Command-line front end: model catalog, zeta and determinant evaluation,
//! large-z expansions, and the verification report.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use zetafred::asymptotics::{self, LargeZExpansion};
use zetafred::error::Error;
use zetafred::expansion::Exponent;
use zetafred::fredholm::{self, FredholmOptions};
use zetafred::models::{self, SpectrumModel};
use zetafred::numeric::Precision;
use zetafred::verify::{self, VerifyOptions};
use zetafred::zeta::{self, ZetaOptions, ZetaValue};

#[derive(Parser)]
#[command(
    name = "zetafred",
    version,
    about = "Zeta-regularized and Fredholm determinants of operators with discrete spectrum"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Accumulation precision for the numerical kernels.
    #[arg(long, global = true, default_value = "double", value_parser = ["double", "extended"])]
    precision: String,
    /// Override the identity-check tolerance (verify/report).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write machine-readable JSON output to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write the CSV report to this path (report subcommand).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Work with the model catalog.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Evaluate ζ(s; L).
    Zeta {
        model: String,
        /// Evaluation point "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Zeta-regularized determinant of L (or L + z with --shift).
    Detzeta {
        model: String,
        /// Shift z as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
    },
    /// Regularized Fredholm determinant det_order(I + z·L^{-1}).
    Fredholm {
        model: String,
        /// Point z as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Regularization order N+1 (must be ≥ the model's Schatten order).
        #[arg(long)]
        order: u32,
    },
    /// Predicted (and optionally fitted) large-z expansions.
    Expand {
        model: String,
        /// Which expansion: detzeta | fredholm | resolvent.
        #[arg(long)]
        what: String,
        /// Resolvent power N (resolvent expansions only).
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Also fit the expansion from numeric samples and compare.
        #[arg(long)]
        fit: bool,
    },
    /// Verify the determinant identity and the constant-term statement.
    Verify { model: String },
    /// Run the full catalog suite and emit a report.
    Report,
}

#[derive(Subcommand)]
enum ModelsAction {
    /// List built-in models.
    List,
    /// Print a model (built-in name or JSON file) in the JSON schema.
    Show { name: String },
    /// Load and invariant-check a model JSON file.
    Validate { file: PathBuf },
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("cannot parse number '{t}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(Error::Domain(format!(
            "expected 're' or 're,im', got '{s}'"
        ))),
    }
}

/// Resolve a model argument: built-in name first, then a JSON file path.
fn resolve_model(name: &str) -> Result<SpectrumModel, Error> {
    if let Some(m) = models::builtin(name) {
        return Ok(m);
    }
    let path = PathBuf::from(name);
    if path.exists() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        return models::load_model(&text);
    }
    Err(Error::Domain(format!(
        "unknown model '{name}': not a built-in (N1, N2, HO) and not a readable file"
    )))
}

fn complex_json(v: Complex64) -> serde_json::Value {
    if v.im == 0.0 {
        json!(v.re)
    } else {
        json!({ "re": v.re, "im": v.im })
    }
}

fn expansion_terms_json(e: &LargeZExpansion) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = e
        .terms()
        .map(|((a, k), c)| {
            let ac = a.to_complex();
            json!({"alpha": ac.re, "k": k, "re_c": c.value().re, "im_c": c.value().im})
        })
        .collect();
    json!(terms)
}

fn emit(cli: &Cli, value: &serde_json::Value) -> Result<(), Error> {
    let pretty = serde_json::to_string_pretty(value).expect("serializable");
    println!("{pretty}");
    if let Some(path) = &cli.json {
        std::fs::write(path, pretty)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let precision = if cli.precision == "extended" {
        Precision::Extended
    } else {
        Precision::Double
    };
    let zopts = ZetaOptions {
        tol: 1e-11,
        precision,
    };
    let fopts = FredholmOptions {
        tol: cli.tol.unwrap_or(1e-12).min(1e-10),
        precision,
    };
    let mut vopts = VerifyOptions {
        precision,
        ..VerifyOptions::default()
    };
    if let Some(t) = cli.tol {
        vopts.tol_identity = t;
    }
    match &cli.command {
        Command::Models { action } => match action {
            ModelsAction::List => {
                for m in models::catalog() {
                    println!(
                        "{:<4} λ_n = {:<14} p = {}, dim ker = {}, heat terms = {}",
                        m.name,
                        m.law_description(),
                        m.schatten_p,
                        m.dim_ker,
                        m.heat_expansion.len()
                    );
                }
                Ok(true)
            }
            ModelsAction::Show { name } => {
                let m = resolve_model(name)?;
                println!("{}", models::model_to_json(&m));
                Ok(true)
            }
            ModelsAction::Validate { file } => {
                let text = std::fs::read_to_string(file)
                    .map_err(|e| Error::Domain(format!("cannot read {}: {e}", file.display())))?;
                let m = models::load_model(&text)?;
                println!(
                    "model '{}' is valid (p = {}, λ_1 = {})",
                    m.name,
                    m.schatten_p,
                    m.lambda_min()
                );
                Ok(true)
            }
        },
        Command::Zeta { model, s } => {
            let m = resolve_model(model)?;
            let s = parse_complex(s)?;
            let out = match zeta::zeta(&m, s, &zopts)? {
                ZetaValue::Regular(v) => json!({
                    "model": m.name, "s": complex_json(s), "kind": "regular",
                    "value": complex_json(v),
                }),
                ZetaValue::Pole(data) => json!({
                    "model": m.name, "s": complex_json(s), "kind": "pole",
                    "order": data.pole_order(),
                    "residue": complex_json(data.residue()),
                    "finite_part": complex_json(data.finite_part()),
                }),
            };
            emit(cli, &out)?;
            Ok(true)
        }
        Command::Detzeta { model, shift } => {
            let m = resolve_model(model)?;
            let d = match shift {
                Some(z) => zeta::log_det_zeta_shifted(&m, parse_complex(z)?, &zopts)?,
                None => zeta::log_det_zeta(&m, &zopts)?,
            };
            let out = json!({
                "model": m.name,
                "shift": shift.as_deref().unwrap_or("0"),
                "log_det_zeta": complex_json(d.value),
                "value": complex_json(d.value),
                "route_heat": complex_json(d.route_heat),
                "route_derivative": complex_json(d.route_derivative),
                "residual": d.residual,
            });
            emit(cli, &out)?;
            Ok(true)
        }
        Command::Fredholm { model, z, order } => {
            let m = resolve_model(model)?;
            let f = fredholm::det_fredholm(&m, parse_complex(z)?, *order, &fopts)?;
            let out = json!({
                "model": m.name,
                "z": complex_json(f.z),
                "order": f.order,
                "log_value": f.log_value.map(complex_json),
                "value": complex_json(f.value),
                "truncation_n": f.truncation_n,
                "tail_bound": f.tail_bound,
            });
            emit(cli, &out)?;
            Ok(true)
        }
        Command::Expand {
            model,
            what,
            n,
            fit,
        } => {
            let m = resolve_model(model)?;
            // The fit needs template-size + 2 samples; the template keeps
            // every predicted term down to z^{-1}, so the grid may need to
            // grow beyond the default 6 points.
            let sample_grid = |p: &LargeZExpansion| {
                let cols = p.terms().filter(|((a, _), _)| a.re_f64() <= 2.0 + 1e-9).count();
                let mut grid = vopts.fit_grid.clone();
                while grid.len() < cols + 2 {
                    grid.push(grid.last().copied().unwrap_or(25.0) * 2.0);
                }
                grid
            };
            let (predicted, samples): (LargeZExpansion, Vec<(f64, Complex64)>) = match what.as_str()
            {
                "detzeta" => {
                    let p = asymptotics::predict_log_det_zeta_expansion(&m)?;
                    let samples = if *fit {
                        sample_grid(&p)
                            .iter()
                            .map(|&zv| {
                                Ok((
                                    zv,
                                    zeta::log_det_zeta_shifted(
                                        &m,
                                        Complex64::new(zv, 0.0),
                                        &zopts,
                                    )?
                                    .value,
                                ))
                            })
                            .collect::<Result<_, Error>>()?
                    } else {
                        Vec::new()
                    };
                    (p, samples)
                }
                "fredholm" => {
                    let p = asymptotics::predict_fredholm_expansion(&m, &zopts)?;
                    let samples = if *fit {
                        sample_grid(&p)
                            .iter()
                            .map(|&zv| {
                                let d = fredholm::det_fredholm(
                                    &m,
                                    Complex64::new(zv, 0.0),
                                    m.schatten_p,
                                    &fopts,
                                )?;
                                Ok((
                                    zv,
                                    d.log_value.ok_or(Error::OnSpectrum {
                                        z: Complex64::new(zv, 0.0),
                                    })?,
                                ))
                            })
                            .collect::<Result<_, Error>>()?
                    } else {
                        Vec::new()
                    };
                    (p, samples)
                }
                "resolvent" => {
                    let nn = if *n == 0 { m.schatten_p } else { *n };
                    let p = asymptotics::predict_resolvent_expansion(&m, nn)?;
                    let samples = if *fit {
                        sample_grid(&p)
                            .iter()
                            .map(|&zv| {
                                Ok((
                                    zv,
                                    fredholm::resolvent_power_trace(
                                        &m,
                                        Complex64::new(zv, 0.0),
                                        nn,
                                        &fopts,
                                    )?,
                                ))
                            })
                            .collect::<Result<_, Error>>()?
                    } else {
                        Vec::new()
                    };
                    (p, samples)
                }
                other => return Err(Error::Domain(format!("unknown expansion '{other}'"))),
            };
            let mut out = json!({
                "model": m.name,
                "what": what,
                "predicted": expansion_terms_json(&predicted),
            });
            if *fit {
                let template: Vec<(f64, u32)> = predicted
                    .terms()
                    .filter(|((a, _), _)| a.re_f64() <= 2.0 + 1e-9)
                    .map(|((a, k), _)| (a.re_f64(), *k))
                    .collect();
                let (fitted, diag) = asymptotics::fit_expansion(&samples, &template)?;
                let rows: Vec<serde_json::Value> = template
                    .iter()
                    .map(|(alpha, k)| {
                        let key = Exponent::from_f64(*alpha);
                        let p = predicted.coeff(&key, *k).value();
                        let f = fitted.coeff(&key, *k).value();
                        json!({
                            "alpha": alpha, "k": k,
                            "predicted": p.re, "fitted": f.re,
                            "abs_diff": (p - f).norm(),
                        })
                    })
                    .collect();
                out["fitted"] = json!(rows);
                out["diagnostics"] = json!({
                    "condition": diag.condition,
                    "max_residual": diag.max_residual,
                    "rms_residual": diag.rms_residual,
                });
            }
            emit(cli, &out)?;
            Ok(true)
        }
        Command::Verify { model } => {
            let m = resolve_model(model)?;
            let rep = verify::verify_model(&m, &vopts)?;
            let ct = rep
                .constant_term_check
                .as_ref()
                .expect("filled by verify_model");
            let out = json!({
                "model": m.name,
                "main_theorem": {
                    "max_residual": rep.max_residual,
                    "taylor_poly": rep.taylor_poly.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
                },
                "constant_term": {
                    "fitted": ct.fitted_constant,
                    "expected": ct.expected_constant,
                    "log_coeff_fitted": ct.fitted_log_coeff,
                    "log_coeff_expected": ct.expected_log_coeff,
                    "passed": ct.passed,
                },
                "passed": rep.passed,
            });
            let passed = rep.passed;
            emit(cli, &out)?;
            println!("{}: {}", m.name, if passed { "PASS" } else { "FAIL" });
            Ok(passed)
        }
        Command::Report => {
            let report = verify::run_report(&models::catalog(), &vopts);
            print!("{}", report.human_table());
            if let Some(path) = &cli.json {
                std::fs::write(path, report.to_json())
                    .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
            }
            if let Some(path) = &cli.csv {
                std::fs::write(path, report.to_csv())
                    .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
