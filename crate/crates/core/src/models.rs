//! Model operators: eigenvalue sequences with declared Schatten order,
//! kernel dimension and heat expansion, the built-in catalog, heat traces by
//! direct eigen-summation, and JSON loading of user models.

use crate::compare::{ComparisonRow, ExpansionComparison};
use crate::error::{Error, Result};
use crate::exact::{bernoulli_rat, factorial_rat, rat_from_f64, rat_i64, rat_int, rat_to_f64};
use crate::expansion::{AsymptoticExpansion, Coeff, Direction, Exponent};
use crate::numeric::{ls_slope, Neumaier};
use crate::special::upper_incomplete_gamma;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const MAX_HEAT_TERMS: f64 = 3e7;

/// Approximate tail behaviour λ_n ≈ scale·n^power (1 + o(1)) of a table
/// model beyond its listed eigenvalues.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailLaw {
    pub scale: f64,
    pub power: f64,
}

/// How the eigenvalue sequence is defined.
#[derive(Debug, Clone)]
pub enum EigenvalueLaw {
    /// λ_n = scale·(n + shift)^power, n ≥ 1; exact rational parameters so
    /// tail power sums reduce to Hurwitz zeta values.
    PowerLaw {
        scale: BigRational,
        power: BigRational,
        shift: BigRational,
    },
    /// Finite eigenvalue table continued by a declared tail law.
    Table {
        values: Vec<f64>,
        multiplicities: Option<Vec<u32>>,
        tail: TailLaw,
    },
}

/// Behaviour of the heat remainder after subtracting the full declared
/// expansion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RemainderLaw {
    /// O(t^next) as t → 0+.
    Power { next: f64 },
    /// |remainder| ≤ 2 e^{-rate/t}.
    ExpSmall { rate: f64 },
}

/// Closed forms available for this model; used by tests and reports only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinOracle {
    N1,
    N2,
    HO,
}

/// An operator given by its spectrum, with the declared analytic data the
/// determinant machinery needs.
#[derive(Debug, Clone)]
pub struct SpectrumModel {
    pub name: String,
    pub law: EigenvalueLaw,
    pub dim_ker: u32,
    pub schatten_p: u32,
    pub heat_expansion: AsymptoticExpansion,
    pub remainder: RemainderLaw,
    pub oracle: Option<BuiltinOracle>,
}

impl SpectrumModel {
    pub fn eigenvalue(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match &self.law {
            EigenvalueLaw::PowerLaw {
                scale,
                power,
                shift,
            } => rat_to_f64(scale) * (n as f64 + rat_to_f64(shift)).powf(rat_to_f64(power)),
            EigenvalueLaw::Table { values, tail, .. } => {
                if n as usize <= values.len() {
                    values[n as usize - 1]
                } else {
                    tail.scale * (n as f64).powf(tail.power)
                }
            }
        }
    }

    pub fn multiplicity(&self, n: u64) -> u32 {
        match &self.law {
            EigenvalueLaw::Table {
                multiplicities: Some(m),
                ..
            } if (n as usize) <= m.len() => m[n as usize - 1],
            _ => 1,
        }
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalue(1)
    }

    /// Human-readable eigenvalue law.
    pub fn law_description(&self) -> String {
        match &self.law {
            EigenvalueLaw::PowerLaw {
                scale,
                power,
                shift,
            } => {
                let mut s = String::new();
                if !scale.is_one() {
                    s.push_str(&format!("{}·", rat_to_f64(scale)));
                }
                if shift.is_zero() {
                    s.push('n');
                } else {
                    s.push_str(&format!("(n{:+})", rat_to_f64(shift)));
                }
                if !power.is_one() {
                    s.push_str(&format!("^{}", rat_to_f64(power)));
                }
                s
            }
            EigenvalueLaw::Table { values, tail, .. } => {
                format!(
                    "table[{}] then {}·n^{}",
                    values.len(),
                    tail.scale,
                    tail.power
                )
            }
        }
    }

    /// Tail-law exponent r and scale c with λ_n ≈ c n^r for large n.
    fn tail_law(&self) -> (f64, f64) {
        match &self.law {
            EigenvalueLaw::PowerLaw { scale, power, .. } => (rat_to_f64(scale), rat_to_f64(power)),
            EigenvalueLaw::Table { tail, .. } => (tail.scale, tail.power),
        }
    }

    /// Σ_{n > q} mult(n)·λ_n^{-m} together with an uncertainty bound.
    ///
    /// Exact (Hurwitz zeta) for power-law spectra; for table models the
    /// declared tail law gives an estimate whose slack is reported.
    pub fn tail_power_sum(&self, m: f64, q: u64) -> Result<(f64, f64)> {
        match &self.law {
            EigenvalueLaw::PowerLaw {
                scale,
                power,
                shift,
            } => {
                let s = m * rat_to_f64(power);
                if s <= 1.0 {
                    return Err(Error::Domain(format!(
                        "tail power sum diverges: m·power = {s} ≤ 1 for model {}",
                        self.name
                    )));
                }
                let a = q as f64 + 1.0 + rat_to_f64(shift);
                let z = crate::special::hurwitz_zeta(Complex64::new(s, 0.0), a)?.re;
                let v = rat_to_f64(scale).powf(-m) * z;
                Ok((v, 1e-14 * v.abs()))
            }
            EigenvalueLaw::Table { values, tail, .. } => {
                let s = m * tail.power;
                if s <= 1.0 {
                    return Err(Error::Domain(format!(
                        "tail power sum diverges: m·power = {s} ≤ 1 for model {}",
                        self.name
                    )));
                }
                let mut exact_part = 0.0;
                let start = q.max(values.len() as u64);
                for n in q + 1..=start {
                    exact_part += self.multiplicity(n) as f64 * self.eigenvalue(n).powf(-m);
                }
                let z =
                    crate::special::hurwitz_zeta(Complex64::new(s, 0.0), start as f64 + 1.0)?.re;
                let v = tail.scale.powf(-m) * z;
                // The tail law is only (1 + o(1)); be explicit about slack.
                Ok((exact_part + v, 0.05 * v * m))
            }
        }
    }

    /// Number of terms needed before the heat tail bound drops below tol.
    fn heat_terms_estimate(&self, t: f64, tol: f64) -> f64 {
        let (c, r) = self.tail_law();
        let target = (1.0 / tol.max(1e-300)).ln() + 3.0;
        (target / (t * c)).powf(1.0 / r) + 2.0
    }

    /// Largest t for which `heat_trace` refuses to run at tolerance `tol`.
    pub fn heat_floor(&self, tol: f64) -> f64 {
        let (c, r) = self.tail_law();
        let target = (1.0 / tol.max(1e-300)).ln() + 3.0;
        target / (c * MAX_HEAT_TERMS.powf(r))
    }

    /// tr e^{-tL} = Σ_n mult(n)·e^{-t λ_n}, summed ascending with
    /// compensated summation until the integral tail bound is below tol.
    pub fn heat_trace(&self, t: f64, tol: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::Domain(format!("heat_trace requires t > 0, got {t}")));
        }
        let est = self.heat_terms_estimate(t, tol);
        if est > MAX_HEAT_TERMS {
            return Err(Error::HeatFloor {
                t,
                terms: est,
                max_terms: MAX_HEAT_TERMS,
            });
        }
        let (c, r) = self.tail_law();
        let mut acc = Neumaier::new();
        acc.add(self.dim_ker as f64);
        let mut n = 0u64;
        loop {
            for _ in 0..64 {
                n += 1;
                acc.add(self.multiplicity(n) as f64 * (-t * self.eigenvalue(n)).exp());
            }
            // Integral tail bound: Σ_{m>n} e^{-t λ_m} ≤ ∫_n^∞ e^{-t c x^r} dx.
            let x = t * c * (n as f64).powf(r);
            let bound = upper_incomplete_gamma(1.0 / r, x) / (r * (t * c).powf(1.0 / r));
            if bound < tol {
                break;
            }
            if n as f64 > 2.0 * est + 1e4 {
                return Err(Error::HeatFloor {
                    t,
                    terms: n as f64,
                    max_terms: MAX_HEAT_TERMS,
                });
            }
        }
        Ok(acc.value())
    }

    /// Heat trace of the shifted operator L + z: e^{-tz}·tr e^{-tL}.
    pub fn heat_trace_shifted(&self, z: Complex64, t: f64, tol: f64) -> Result<Complex64> {
        Ok((-t * z).exp() * self.heat_trace(t, tol)?)
    }

    /// Transported heat coefficients of L + z (Taylor of e^{-tz} times the
    /// declared expansion), complete to Re α ≤ order.
    pub fn transported_heat_expansion(&self, z: Complex64, order: f64) -> AsymptoticExpansion {
        let taylor =
            crate::regint::power_times_exp_expansion(Exponent::from_int(0), z, order + 1.5);
        let prod = self
            .heat_expansion
            .multiply(&taylor)
            .expect("same direction");
        let mut out = prod.truncate(order);
        out.set_cutoff(prod.cutoff().min(self.heat_expansion.cutoff()).min(order));
        out
    }

    /// A^H_00(L+z) = Σ_n (Res_{-n}Γ)·A^H_{-n,0}(L)·z^n: the finite sum over
    /// declared t^{-n} coefficients.
    pub fn a00_shifted(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for ((alpha, k), c) in self.heat_expansion.terms() {
            if *k != 0 {
                continue;
            }
            if let Some(n) = alpha.as_nonpositive_integer() {
                let res = rat_to_f64(&crate::exact::gamma_residue_rat(n));
                acc += res * c.value() * z.powu(n);
            }
        }
        acc
    }

    /// Checks |heat_trace(t) - Σ_{Re α ≤ K}| against the declared next order:
    /// a log-log slope fit for power remainders, the explicit bound for
    /// exponentially small ones.
    pub fn validate_heat_expansion(
        &self,
        t_grid: &[f64],
        k_max: f64,
    ) -> Result<ExpansionComparison> {
        if t_grid.is_empty() || t_grid.iter().any(|&t| t <= 0.0) {
            return Err(Error::Domain(
                "validate_heat_expansion needs a positive t grid".into(),
            ));
        }
        if k_max > self.heat_expansion.cutoff() {
            return Err(Error::InsufficientExpansion {
                cutoff: self.heat_expansion.cutoff(),
                required: k_max,
            });
        }
        let tol = 1e-13;
        let mut rows = Vec::new();
        let mut logs_t = Vec::new();
        let mut logs_r = Vec::new();
        let mut max_resid: f64 = 0.0;
        for &t in t_grid {
            let h = self.heat_trace(t, tol)?;
            let partial = self.heat_expansion.eval_partial(t, k_max).re;
            let rem = h - partial;
            rows.push(ComparisonRow {
                alpha: Complex64::new(t, 0.0),
                k: 0,
                predicted: Complex64::new(partial, 0.0),
                fitted: Complex64::new(h, 0.0),
                error: rem.abs(),
            });
            max_resid = max_resid.max(rem.abs());
            if rem.abs() > 0.0 {
                logs_t.push(t.ln());
                logs_r.push(rem.abs().ln());
            }
        }
        let mut cmp = ExpansionComparison {
            rows,
            max_residual: max_resid,
            ..Default::default()
        };
        match self.remainder {
            RemainderLaw::ExpSmall { rate } => {
                let ok = t_grid
                    .iter()
                    .zip(&cmp.rows)
                    .all(|(&t, row)| row.error < 2.0 * (-rate / t).exp());
                cmp.passed = ok;
                cmp.notes = format!("exp-small remainder check |rem| < 2 e^{{-{rate:.4}/t}}");
            }
            RemainderLaw::Power { next } => {
                // Expected slope: first declared exponent beyond K, or the
                // declared next order if the whole expansion was subtracted.
                let next_declared = self
                    .heat_expansion
                    .terms()
                    .map(|((a, _), _)| a.re_f64())
                    .filter(|re| *re > k_max + 1e-9)
                    .fold(f64::INFINITY, f64::min);
                let expected = if next_declared.is_finite() {
                    next_declared
                } else {
                    next
                };
                if logs_t.len() < 2 {
                    cmp.passed = false;
                    cmp.notes = "remainder at rounding floor; slope unavailable".into();
                } else {
                    let slope = ls_slope(&logs_t, &logs_r);
                    cmp.slope_expected = Some(expected);
                    cmp.slope_fitted = Some(slope);
                    cmp.passed = (slope - expected).abs() <= 0.1;
                    cmp.notes = format!("log-log remainder slope {slope:.4}, expected {expected}");
                }
            }
        }
        Ok(cmp)
    }

    fn check_invariants(&self) -> Result<()> {
        // Positivity / monotonicity of the spectrum head.
        let mut prev = 0.0;
        for n in 1..=32u64 {
            let l = self.eigenvalue(n);
            if l <= 0.0 {
                return Err(Error::InvalidModel(format!("λ_{n} = {l} is not positive")));
            }
            if l + 1e-12 < prev {
                return Err(Error::InvalidModel(format!(
                    "eigenvalues not nondecreasing at n = {n}"
                )));
            }
            prev = l;
        }
        // Schatten order: tail exponent estimate must give p·r > 1.
        let r_hat = match &self.law {
            EigenvalueLaw::PowerLaw { power, .. } => rat_to_f64(power),
            EigenvalueLaw::Table { values, tail, .. } => {
                if values.len() >= 8 {
                    let half = values.len() / 2;
                    let xs: Vec<f64> = (half..values.len())
                        .map(|i| ((i + 1) as f64).ln())
                        .collect();
                    let ys: Vec<f64> = (half..values.len()).map(|i| values[i].ln()).collect();
                    ls_slope(&xs, &ys)
                } else {
                    tail.power
                }
            }
        };
        if self.schatten_p as f64 * r_hat <= 1.02 {
            return Err(Error::InvalidModel(format!(
                "no finite Schatten order p = {}: tail exponent estimate r ≈ {r_hat:.3} gives p·r ≤ 1",
                self.schatten_p
            )));
        }
        // Standing assumption: no t^{-n} log^k terms with k > 0.
        for ((alpha, k), _) in self.heat_expansion.terms() {
            if *k > 0 && alpha.as_nonpositive_integer().is_some() {
                return Err(Error::InvalidModel(format!(
                    "heat expansion has a t^{} log^{k} t term; coefficients A_(-n,k) with k > 0 must vanish",
                    alpha.re_f64()
                )));
            }
        }
        if self.heat_expansion.direction() != Direction::AtZero {
            return Err(Error::InvalidModel(
                "heat expansion must be an expansion at t → 0".into(),
            ));
        }
        Ok(())
    }
}

// --- built-in catalog -----------------------------------------------------

/// λ_n = n, p = 2: heat trace 1/(e^t - 1), Bernoulli heat coefficients.
pub fn model_n1() -> SpectrumModel {
    let mut heat = AsymptoticExpansion::new(Direction::AtZero, 16.0);
    for n in 0..=16u32 {
        let b = bernoulli_rat(n);
        if b.is_zero() {
            continue;
        }
        heat.accumulate(
            Exponent::from_int(n as i64 - 1),
            0,
            Coeff::from_rational(b / factorial_rat(n)),
        );
    }
    SpectrumModel {
        name: "N1".into(),
        law: EigenvalueLaw::PowerLaw {
            scale: rat_int(1),
            power: rat_int(1),
            shift: rat_int(0),
        },
        dim_ker: 0,
        schatten_p: 2,
        heat_expansion: heat,
        remainder: RemainderLaw::Power { next: 17.0 },
        oracle: Some(BuiltinOracle::N1),
    }
}

/// λ_n = n², p = 1: heat trace ½(θ(t) - 1), expansion √π/2·t^{-1/2} - 1/2
/// with exponentially small remainder by Jacobi inversion.
pub fn model_n2() -> SpectrumModel {
    let heat = AsymptoticExpansion::new(Direction::AtZero, f64::INFINITY)
        .with_term(
            Exponent::from_rational(rat_i64(-1, 2)),
            0,
            Coeff::from_exact(crate::exact::ExactC::from_real(
                crate::exact::SqrtPiRat::sqrt_pi_term(1, rat_i64(1, 2)),
            )),
        )
        .with_term(
            Exponent::from_int(0),
            0,
            Coeff::from_rational(rat_i64(-1, 2)),
        );
    SpectrumModel {
        name: "N2".into(),
        law: EigenvalueLaw::PowerLaw {
            scale: rat_int(1),
            power: rat_int(2),
            shift: rat_int(0),
        },
        dim_ker: 0,
        schatten_p: 1,
        heat_expansion: heat,
        remainder: RemainderLaw::ExpSmall { rate: PI * PI },
        oracle: Some(BuiltinOracle::N2),
    }
}

/// λ_n = n - 1/2, p = 2: heat trace 1/(2 sinh(t/2)),
/// coefficients (2 - 4^n) B_{2n} / (4^n (2n)!).
pub fn model_ho() -> SpectrumModel {
    let mut heat = AsymptoticExpansion::new(Direction::AtZero, 16.0).with_term(
        Exponent::from_int(-1),
        0,
        Coeff::from_int(1),
    );
    for n in 1..=8u32 {
        let four_n = rat_int(4).pow(n as i32);
        let c =
            (rat_int(2) - four_n.clone()) * bernoulli_rat(2 * n) / (four_n * factorial_rat(2 * n));
        heat.accumulate(
            Exponent::from_int(2 * n as i64 - 1),
            0,
            Coeff::from_rational(c),
        );
    }
    SpectrumModel {
        name: "HO".into(),
        law: EigenvalueLaw::PowerLaw {
            scale: rat_int(1),
            power: rat_int(1),
            shift: rat_i64(-1, 2),
        },
        dim_ker: 0,
        schatten_p: 2,
        heat_expansion: heat,
        remainder: RemainderLaw::Power { next: 17.0 },
        oracle: Some(BuiltinOracle::HO),
    }
}

pub fn catalog() -> Vec<SpectrumModel> {
    vec![model_n1(), model_n2(), model_ho()]
}

pub fn builtin(name: &str) -> Option<SpectrumModel> {
    match name.to_ascii_uppercase().as_str() {
        "N1" => Some(model_n1()),
        "N2" => Some(model_n2()),
        "HO" => Some(model_ho()),
        _ => None,
    }
}

// --- JSON interface --------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct HeatTermDe {
    re_alpha: f64,
    #[serde(default)]
    im_alpha: f64,
    k: u32,
    re_c: f64,
    #[serde(default)]
    im_c: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EigenvaluesDe {
    Spec {
        kind: String,
        #[serde(default)]
        scale: Option<f64>,
        #[serde(default)]
        power: Option<f64>,
        #[serde(default)]
        shift: Option<f64>,
        #[serde(default)]
        values: Option<Vec<f64>>,
        #[serde(default)]
        multiplicities: Option<Vec<u32>>,
        #[serde(default)]
        tail_scale: Option<f64>,
        #[serde(default)]
        tail_power: Option<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct ModelDe {
    name: String,
    eigenvalues: EigenvaluesDe,
    #[serde(default)]
    dim_ker: u32,
    p: u32,
    heat_terms: Vec<HeatTermDe>,
    #[serde(default)]
    heat_cutoff: Option<f64>,
    #[serde(default)]
    remainder: Option<RemainderLaw>,
    #[serde(default)]
    oracles: Option<BuiltinOracle>,
}

/// Parses compact eigenvalue formulas like "n", "n^2", "2*n^1.5", "n-1/2".
fn parse_formula(expr: &str) -> Result<(f64, f64, f64)> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidModel(format!("cannot parse eigenvalue formula '{expr}'"));
    let (scale, rest) = match s.split_once("*n") {
        Some((c, rest)) => (c.parse::<f64>().map_err(|_| bad())?, rest.to_string()),
        None => {
            let rest = s.strip_prefix('n').ok_or_else(bad)?;
            (1.0, rest.to_string())
        }
    };
    let rest = rest.strip_prefix('n').unwrap_or(&rest).to_string();
    let (power, shift_str) = if let Some(r) = rest.strip_prefix('^') {
        let idx = r.find(['+', '-']).unwrap_or(r.len());
        (
            r[..idx].parse::<f64>().map_err(|_| bad())?,
            r[idx..].to_string(),
        )
    } else {
        (1.0, rest)
    };
    let shift = if shift_str.is_empty() {
        0.0
    } else if let Some((num, den)) = shift_str.split_once('/') {
        let n = num.parse::<f64>().map_err(|_| bad())?;
        let d = den.parse::<f64>().map_err(|_| bad())?;
        n / d
    } else {
        shift_str.parse::<f64>().map_err(|_| bad())?
    };
    Ok((scale, power, shift))
}

fn rat_or_invalid(x: f64) -> Result<BigRational> {
    rat_from_f64(x).ok_or_else(|| Error::InvalidModel(format!("non-finite number {x}")))
}

/// Builds and validates a model from its JSON description.
pub fn load_model(json: &str) -> Result<SpectrumModel> {
    let de: ModelDe = serde_json::from_str(json)?;
    let EigenvaluesDe::Spec {
        kind,
        scale,
        power,
        shift,
        values,
        multiplicities,
        tail_scale,
        tail_power,
    } = de.eigenvalues;
    let law = if kind == "table" {
        let values =
            values.ok_or_else(|| Error::InvalidModel("table law needs 'values'".into()))?;
        let tail = TailLaw {
            scale: tail_scale
                .ok_or_else(|| Error::InvalidModel("table law needs 'tail_scale'".into()))?,
            power: tail_power
                .ok_or_else(|| Error::InvalidModel("table law needs 'tail_power'".into()))?,
        };
        EigenvalueLaw::Table {
            values,
            multiplicities,
            tail,
        }
    } else if kind == "formula" {
        EigenvalueLaw::PowerLaw {
            scale: rat_or_invalid(scale.unwrap_or(1.0))?,
            power: rat_or_invalid(power.unwrap_or(1.0))?,
            shift: rat_or_invalid(shift.unwrap_or(0.0))?,
        }
    } else if let Some(expr) = kind.strip_prefix("formula:") {
        let (c, r, a) = parse_formula(expr)?;
        EigenvalueLaw::PowerLaw {
            scale: rat_or_invalid(c)?,
            power: rat_or_invalid(r)?,
            shift: rat_or_invalid(a)?,
        }
    } else {
        return Err(Error::InvalidModel(format!(
            "unknown eigenvalue kind '{kind}'"
        )));
    };
    let mut heat =
        AsymptoticExpansion::new(Direction::AtZero, de.heat_cutoff.unwrap_or(f64::INFINITY));
    for t in de.heat_terms {
        heat.accumulate(
            Exponent::new(rat_or_invalid(t.re_alpha)?, rat_or_invalid(t.im_alpha)?),
            t.k,
            Coeff::from_f64_promoted(t.re_c, t.im_c),
        );
    }
    let model = SpectrumModel {
        name: de.name,
        law,
        dim_ker: de.dim_ker,
        schatten_p: de.p,
        heat_expansion: heat,
        // Without a declared remainder law, fall back to the cutoff: the
        // expansion being complete to Re α ≤ K makes the remainder o(t^K).
        remainder: de.remainder.unwrap_or(RemainderLaw::Power {
            next: de.heat_cutoff.unwrap_or(f64::NAN),
        }),
        oracle: de.oracles,
    };
    model.check_invariants()?;
    Ok(model)
}

/// Serializes a model to the same JSON schema `load_model` accepts.
pub fn model_to_json(model: &SpectrumModel) -> String {
    let eigenvalues = match &model.law {
        EigenvalueLaw::PowerLaw {
            scale,
            power,
            shift,
        } => EigenvaluesDe::Spec {
            kind: "formula".into(),
            scale: Some(rat_to_f64(scale)),
            power: Some(rat_to_f64(power)),
            shift: Some(rat_to_f64(shift)),
            values: None,
            multiplicities: None,
            tail_scale: None,
            tail_power: None,
        },
        EigenvalueLaw::Table {
            values,
            multiplicities,
            tail,
        } => EigenvaluesDe::Spec {
            kind: "table".into(),
            scale: None,
            power: None,
            shift: None,
            values: Some(values.clone()),
            multiplicities: multiplicities.clone(),
            tail_scale: Some(tail.scale),
            tail_power: Some(tail.power),
        },
    };
    let de = ModelDe {
        name: model.name.clone(),
        eigenvalues,
        dim_ker: model.dim_ker,
        p: model.schatten_p,
        heat_terms: model
            .heat_expansion
            .terms()
            .map(|((a, k), c)| {
                let ac = a.to_complex();
                HeatTermDe {
                    re_alpha: ac.re,
                    im_alpha: ac.im,
                    k: *k,
                    re_c: c.value().re,
                    im_c: c.value().im,
                }
            })
            .collect(),
        heat_cutoff: if model.heat_expansion.cutoff().is_finite() {
            Some(model.heat_expansion.cutoff())
        } else {
            None
        },
        remainder: Some(model.remainder),
        oracles: model.oracle,
    };
    serde_json::to_string_pretty(&de).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn catalog_passes_invariants() {
        for m in catalog() {
            m.check_invariants().unwrap();
            assert_eq!(m.dim_ker, 0);
        }
    }

    #[test]
    fn heat_trace_closed_forms() {
        let n1 = model_n1();
        // Σ e^{-n t} = 1/(e^t - 1) at t = 1.
        assert_relative_eq!(
            n1.heat_trace(1.0, 1e-13).unwrap(),
            1.0 / (1f64.exp() - 1.0),
            epsilon = 1e-12
        );
        let n2 = model_n2();
        // 20-term direct sum oracle; tail < e^{-441}.
        let direct: f64 = (1..=20).map(|n| (-(n as f64) * (n as f64)).exp()).sum();
        assert_relative_eq!(n2.heat_trace(1.0, 1e-13).unwrap(), direct, epsilon = 1e-13);
        assert_relative_eq!(
            n2.heat_trace(1.0, 1e-13).unwrap(),
            0.386318602,
            epsilon = 1e-9
        );
        let ho = model_ho();
        assert_relative_eq!(
            ho.heat_trace(1.0, 1e-13).unwrap(),
            1.0 / (2.0 * (0.5f64).sinh()),
            epsilon = 1e-12
        );
    }

    #[test]
    fn heat_trace_decays_and_vanishes_at_infinity() {
        for m in catalog() {
            let h1 = m.heat_trace(0.7, 1e-12).unwrap();
            let h2 = m.heat_trace(1.3, 1e-12).unwrap();
            assert!(h2 < h1);
            // dim ker = 0: tr e^{-50 L} ≤ C e^{-50 λ_1}.
            let h50 = m.heat_trace(50.0, 1e-15).unwrap();
            assert!(
                h50 <= 2.0 * (-50.0 * m.lambda_min()).exp(),
                "{}: {h50}",
                m.name
            );
        }
    }

    #[test]
    fn heat_floor_is_enforced() {
        let n1 = model_n1();
        let err = n1.heat_trace(1e-9, 1e-12);
        assert!(matches!(err, Err(Error::HeatFloor { .. })));
    }

    #[test]
    fn n1_heat_coefficients_match_bernoulli() {
        let n1 = model_n1();
        let c = |i: i64| {
            n1.heat_expansion
                .coeff(&Exponent::from_int(i), 0)
                .value()
                .re
        };
        assert_eq!(c(-1), 1.0);
        assert_eq!(c(0), -0.5);
        assert_relative_eq!(c(1), 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(c(3), -1.0 / 720.0, max_relative = 1e-15);
        assert_eq!(c(2), 0.0);
    }

    #[test]
    fn heat_sum_n1_plus_n2_truncated() {
        // heat(N1) + heat(N2) truncated at K = 1:
        // {t^{-1}: 1, t^{-1/2}: √π/2, t^0: -1, t^1: 1/12}.
        let sum = model_n1()
            .heat_expansion
            .add(&model_n2().heat_expansion)
            .unwrap()
            .truncate(1.0);
        assert_eq!(sum.len(), 4);
        assert_relative_eq!(sum.coeff(&Exponent::from_int(-1), 0).value().re, 1.0);
        assert_relative_eq!(
            sum.coeff(&Exponent::from_rational(rat_i64(-1, 2)), 0)
                .value()
                .re,
            PI.sqrt() / 2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(sum.coeff(&Exponent::from_int(0), 0).value().re, -1.0);
        assert_relative_eq!(
            sum.coeff(&Exponent::from_int(1), 0).value().re,
            1.0 / 12.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn regularized_limit_of_t_times_heat_trace() {
        // t · tr e^{-tL} for λ_n = n tends to 1 as t → 0: multiply the heat
        // expansion by {t^1: 1} and take the (0,0) coefficient.
        let n1 = model_n1();
        let t_factor = AsymptoticExpansion::new(Direction::AtZero, f64::INFINITY).with_term(
            Exponent::from_int(1),
            0,
            Coeff::from_int(1),
        );
        let prod = n1.heat_expansion.multiply(&t_factor).unwrap();
        assert_eq!(prod.regularized_limit().unwrap().re, 1.0);
    }

    #[test]
    fn mellin_pole_of_heat_expansion_gives_zeta_residue() {
        // Res_{s=1} ζ(s; N1) = A^H_{-1,0}/Γ(1) = 1 via the symbolic Mellin
        // pole data of the declared expansion.
        let n1 = model_n1();
        let data =
            crate::expansion::mellin_pf(&n1.heat_expansion, Complex64::new(1.0, 0.0)).unwrap();
        let res_gamma_zeta = data.residue();
        let res_zeta = res_gamma_zeta / crate::special::gamma(Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(res_zeta.re, 1.0);
    }

    #[test]
    fn transported_a00_is_polynomial_identity() {
        // For N1: A^H_00(L+z) = -1/2 - z, exactly.
        let n1 = model_n1();
        let z = Complex64::new(0.375, 0.0); // exact binary fraction
        let direct = n1.a00_shifted(z);
        assert_eq!(direct, Complex64::new(-0.5 - 0.375, 0.0));
        let via_product = n1
            .transported_heat_expansion(z, 2.0)
            .coeff(&Exponent::from_int(0), 0)
            .value();
        assert_eq!(via_product, direct);
        // Product route must agree with the direct multiply example:
        // heat(N1) × Taylor(e^{-tz}): coefficient of t^0 is -1/2 - z.
        let n2 = model_n2();
        assert_eq!(n2.a00_shifted(z), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn shift_identity_for_heat_trace() {
        let m = model_ho();
        let z = Complex64::new(0.8, -0.3);
        let t = 0.9;
        let lhs = m.heat_trace_shifted(z, t, 1e-13).unwrap();
        let rhs = (-t * z).exp() * m.heat_trace(t, 1e-13).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn validate_n1_slope_is_cubic() {
        let n1 = model_n1();
        let grid: Vec<f64> = (0..8).map(|i| 0.05 * 1.35f64.powi(i)).collect();
        let cmp = n1.validate_heat_expansion(&grid, 1.0).unwrap();
        assert!(cmp.passed, "{cmp:?}");
        assert!((cmp.slope_fitted.unwrap() - 3.0).abs() < 0.1);
    }

    #[test]
    fn validate_n2_exponentially_small() {
        let n2 = model_n2();
        let grid: Vec<f64> = vec![0.8, 0.85, 0.9, 0.95, 1.0];
        let cmp = n2.validate_heat_expansion(&grid, 0.0).unwrap();
        assert!(cmp.passed, "{cmp:?}");
    }

    #[test]
    fn validate_corrupted_model_fails() {
        let mut bad = model_n1();
        bad.heat_expansion.accumulate(
            Exponent::from_int(0),
            0,
            Coeff::from_f64_promoted(1e-3, 0.0),
        );
        let grid: Vec<f64> = (0..8).map(|i| 0.05 * 1.35f64.powi(i)).collect();
        let cmp = bad.validate_heat_expansion(&grid, 1.0).unwrap();
        assert!(!cmp.passed);
    }

    #[test]
    fn json_round_trip() {
        for m in catalog() {
            let json = model_to_json(&m);
            let back = load_model(&json).unwrap();
            assert_eq!(back.name, m.name);
            assert_eq!(back.schatten_p, m.schatten_p);
            assert_eq!(back.heat_expansion.len(), m.heat_expansion.len());
            for ((a, k), c) in m.heat_expansion.terms() {
                let b = back.heat_expansion.coeff(a, *k).value();
                // BigRational -> f64 is within one ulp of round-to-nearest,
                // so the JSON cycle is value-faithful to that level.
                assert_relative_eq!(b.re, c.value().re, max_relative = 5e-16);
            }
            assert_relative_eq!(back.eigenvalue(7), m.eigenvalue(7), max_relative = 1e-15);
        }
    }

    #[test]
    fn rejects_log_term_at_nonpositive_integer_power() {
        let json = r#"{
            "name": "bad", "eigenvalues": {"kind": "formula:n"}, "p": 2,
            "heat_terms": [{"re_alpha": -1, "k": 1, "re_c": 1.0}]
        }"#;
        let err = load_model(json).unwrap_err();
        assert!(err.to_string().contains("k > 0"), "{err}");
    }

    #[test]
    fn rejects_log_growth_spectrum() {
        // λ_n = log(n+1): no finite Schatten order.
        let values: Vec<f64> = (1..=128).map(|n| ((n + 1) as f64).ln()).collect();
        let json = format!(
            r#"{{
            "name": "log", "eigenvalues": {{"kind": "table", "values": {values:?},
            "tail_scale": 1.0, "tail_power": 0.05}}, "p": 4, "heat_terms": []
        }}"#
        );
        let err = load_model(&json).unwrap_err();
        assert!(err.to_string().contains("Schatten"), "{err}");
    }

    #[test]
    fn formula_parser_variants() {
        assert_eq!(parse_formula("n").unwrap(), (1.0, 1.0, 0.0));
        assert_eq!(parse_formula("n^2").unwrap(), (1.0, 2.0, 0.0));
        assert_eq!(parse_formula("n-1/2").unwrap(), (1.0, 1.0, -0.5));
        assert_eq!(parse_formula("2*n^1.5").unwrap(), (2.0, 1.5, 0.0));
        assert_eq!(parse_formula("n+3").unwrap(), (1.0, 1.0, 3.0));
        assert!(parse_formula("m^2").is_err());
    }

    #[test]
    fn tail_power_sum_matches_hurwitz() {
        let n2 = model_n2();
        // Σ_{n>10} n^{-4} = ζ(4) - Σ_{n≤10}.
        let direct: f64 =
            crate::special::zeta_int(4) - (1..=10).map(|n: i32| (n as f64).powi(-4)).sum::<f64>();
        let (v, _) = n2.tail_power_sum(2.0, 10).unwrap();
        assert_relative_eq!(v, direct, max_relative = 1e-12);
        assert!(n2.tail_power_sum(0.4, 10).is_err());
    }
}
