//! The spectral zeta function ζ(s; L+z) by Mellin splitting, its pole data,
//! the zeta-regularized determinant det_ζ(L+z) by two independent routes,
//! and the Taylor coefficients of log det_ζ(L+z) at z = 0.
//!
//! The splitting writes Γ(s)ζ(s; L+z) = ⨍ t^{s-1} e^{-tz} tr e^{-tL} dt as
//!   Σ_{α,k} A_{αk} Σ_n (-z)^n/n! ∫_0^{t0} t^{s+α+n-1} log^k t dt
//!   + ∫_δ^{t0} t^{s-1} e^{-tz} (tr e^{-tL} - P)(t) dt
//!   + ∫_{t0}^∞ t^{s-1} e^{-tz} (tr e^{-tL} - dim ker) dt  (+ kernel term),
//! with P the full declared expansion. The first family is meromorphic in s
//! in closed form, the quadrature pieces are holomorphic where they are
//! used, so the same expression evaluates ζ at regular points and assembles
//! Laurent data at the predicted poles.

use crate::error::{Error, Result};
use crate::expansion::{Exponent, LaurentData};
use crate::models::{RemainderLaw, SpectrumModel};
use crate::numeric::{richardson_derivative, Precision};
use crate::quad;
use crate::regint::{regint01_term, InfinitySide, Integrand, RegIntOptions};
use crate::special::{self, EULER_GAMMA};
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy)]
pub struct ZetaOptions {
    pub tol: f64,
    pub precision: Precision,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions {
            tol: 1e-11,
            precision: Precision::Double,
        }
    }
}

/// Value of ζ(s; L): a number at regular points, Laurent data at poles.
#[derive(Debug, Clone)]
pub enum ZetaValue {
    Regular(Complex64),
    Pole(LaurentData),
}

/// det_ζ result carrying both evaluation routes and their disagreement.
#[derive(Debug, Clone, Copy)]
pub struct DetZeta {
    pub value: Complex64,
    pub route_heat: Complex64,
    pub route_derivative: Complex64,
    pub residual: f64,
}

/// A predicted pole of ζ(s; L), read off the declared heat expansion.
#[derive(Debug, Clone, Copy)]
pub struct ZetaPolePrediction {
    pub location: Complex64,
    pub order: u32,
    /// Coefficient of (s - location)^{-order}.
    pub leading: Complex64,
}

/// Pole dictionary from the heat coefficients alone: at -α the pole has
/// order k_α + 1 with leading (-1)^{k_α} A_{α k_α} k_α! / Γ(-α) for α ∉ Z_+,
/// and order k_α with leading (-1)^{k_α+α} α! k_α! A'_{α k_α} for α ∈ Z_+.
pub fn predicted_poles(model: &SpectrumModel) -> Result<Vec<ZetaPolePrediction>> {
    let mut groups: BTreeMap<Exponent, (u32, Complex64)> = BTreeMap::new();
    for ((alpha, k), c) in model.heat_expansion.terms() {
        let mut value = c.value();
        if *k == 0 && alpha == &Exponent::from_int(0) {
            value -= model.dim_ker as f64;
        }
        let entry = groups.entry(alpha.clone()).or_insert((0, value));
        if *k >= entry.0 {
            *entry = (*k, value);
        }
    }
    // dim ker contributes to the (0,0) group even if nothing is declared.
    if model.dim_ker > 0 && !groups.contains_key(&Exponent::from_int(0)) {
        groups.insert(
            Exponent::from_int(0),
            (0, Complex64::new(-(model.dim_ker as f64), 0.0)),
        );
    }
    let mut out = Vec::new();
    for (alpha, (k_max, a_top)) in groups {
        let loc = -alpha.to_complex();
        let k_fact = special::factorial(k_max);
        let sign_k = if k_max % 2 == 0 { 1.0 } else { -1.0 };
        let nonneg_int = alpha.is_real()
            && alpha.re().is_integer()
            && alpha.re() >= &num_rational::BigRational::from_integer(0.into());
        if nonneg_int {
            if k_max == 0 {
                continue; // the simple zero of 1/Γ makes ζ regular here
            }
            use num_traits::ToPrimitive;
            let a_int = alpha.re().to_integer().to_u32().unwrap();
            let sign = if (k_max + a_int) % 2 == 0 { 1.0 } else { -1.0 };
            let leading = sign * special::factorial(a_int) * k_fact * a_top;
            out.push(ZetaPolePrediction {
                location: loc,
                order: k_max,
                leading,
            });
        } else {
            let g = special::gamma(-alpha.to_complex())?;
            let leading = sign_k * a_top * k_fact / g;
            if leading.norm() > 0.0 {
                out.push(ZetaPolePrediction {
                    location: loc,
                    order: k_max + 1,
                    leading,
                });
            }
        }
    }
    Ok(out)
}

// --- the splitting ---------------------------------------------------------

struct Splitter<'a> {
    model: &'a SpectrumModel,
    shift: Complex64,
    t0: f64,
    delta: f64,
    tol: f64,
    precision: Precision,
    heat_tol: f64,
    /// Heat-trace memo: quadrature nodes repeat across the s-stencil.
    cache: std::cell::RefCell<std::collections::HashMap<u64, f64>>,
}

impl<'a> Splitter<'a> {
    /// `min_re_s`: smallest Re s this splitter will be asked to evaluate at;
    /// it controls how far the t → 0 cut must push the neglected mass down.
    fn new(
        model: &'a SpectrumModel,
        shift: Complex64,
        min_re_s: f64,
        opts: &ZetaOptions,
    ) -> Result<Self> {
        let t0 = if shift.norm() <= 8.0 {
            1.0
        } else {
            8.0 / shift.norm()
        };
        let heat_tol = 1e-15;
        let floor = model.heat_floor(heat_tol) * 1.05;
        // Continuation to Re s needs the remainder beyond the declared
        // expansion to beat t^{-Re s}.
        let next = match model.remainder {
            RemainderLaw::Power { next } => {
                // NaN-safe: an undeclared next order must fail, not pass.
                if !(next > -min_re_s + 0.5) {
                    return Err(Error::InsufficientExpansion {
                        cutoff: model.heat_expansion.cutoff(),
                        required: -min_re_s + 0.5,
                    });
                }
                next
            }
            RemainderLaw::ExpSmall { .. } => f64::INFINITY,
        };
        let delta = match model.remainder {
            RemainderLaw::ExpSmall { rate } => floor.max((rate / 600.0).min(0.02 * t0)),
            RemainderLaw::Power { next } => {
                // |h - P| ≈ C t^next near 0; choose δ with the weighted
                // neglected mass C δ^{next+min_re_s}/(next+min_re_s) small.
                let tp = (0.05f64).min(t0 / 2.0).max(floor);
                let rem = (model.heat_trace(tp, heat_tol)? - model.heat_expansion.eval_all(tp).re)
                    .abs()
                    .max(1e-18);
                let c_est = rem / tp.powf(next);
                let expo = next + min_re_s;
                let target = opts.tol / 16.0 * expo.max(0.5);
                let mut delta = (target / c_est).powf(1.0 / expo);
                delta = delta.min(0.05 * t0).max(floor);
                let bound = c_est * delta.powf(expo) / expo.max(0.5);
                if bound > opts.tol {
                    return Err(Error::QuadratureFailure {
                        context: format!(
                            "heat expansion of {} too short near t = 0 for Re s ≥ {min_re_s}",
                            model.name
                        ),
                        estimate: bound,
                        tolerance: opts.tol,
                    });
                }
                delta
            }
        };
        let _ = next;
        Ok(Splitter {
            model,
            shift,
            t0,
            delta,
            tol: opts.tol,
            precision: opts.precision,
            heat_tol,
            cache: Default::default(),
        })
    }

    fn heat(&self, t: f64) -> f64 {
        let key = t.to_bits();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return v;
        }
        let v = self
            .model
            .heat_trace(t, self.heat_tol)
            .expect("t above the heat floor by construction");
        self.cache.borrow_mut().insert(key, v);
        v
    }

    fn heat_remainder(&self, t: f64) -> f64 {
        self.heat(t) - self.model.heat_expansion.eval_all(t).re
    }

    /// Λ(a, k) = Σ_n (-z)^n/n! ∫_0^{t0} t^{a+n-1} log^k t dt.
    fn lambda(&self, a: Complex64, k: u32) -> Complex64 {
        let mut sum = Complex64::ZERO;
        let mut w = Complex64::ONE; // (-z)^n / n!
        let guard = (self.shift.norm() * self.t0).ceil() as usize + 4;
        for n in 0..200 {
            let term = w * regint01_term(a + n as f64 - 1.0, k, self.t0);
            sum += term;
            w *= -self.shift / (n as f64 + 1.0);
            if n > guard && term.norm() < self.tol * 1e-5 {
                break;
            }
        }
        sum
    }

    /// Γ(s)ζ(s; L+z) at a point where no ∫_0^{t0} power integral is singular.
    fn gamma_zeta(&self, s: Complex64) -> Result<Complex64> {
        let mut m = Complex64::ZERO;
        for ((alpha, k), c) in self.model.heat_expansion.terms() {
            m += c.value() * self.lambda(s + alpha.to_complex(), *k);
        }
        m += self.quadrature_part(s)?;
        if self.model.dim_ker > 0 && self.shift.norm() == 0.0 {
            // ⨍_{t0}^∞ t^{s-1} dt = -t0^s/s for the kernel constant.
            m -= self.model.dim_ker as f64 * Complex64::new(self.t0, 0.0).powc(s) / s;
        }
        Ok(m)
    }

    /// The two holomorphic-in-s quadrature pieces.
    fn quadrature_part(&self, s: Complex64) -> Result<Complex64> {
        let z = self.shift;
        let inner =
            |t: f64| Complex64::new(t, 0.0).powc(s - 1.0) * (-t * z).exp() * self.heat_remainder(t);
        let r1 = quad::adaptive(&inner, self.delta, self.t0, self.tol / 3.0, self.precision)?;
        let d = if z.norm() == 0.0 {
            self.model.dim_ker as f64
        } else {
            0.0
        };
        let outer =
            |t: f64| Complex64::new(t, 0.0).powc(s - 1.0) * (-t * z).exp() * (self.heat(t) - d);
        let rate = self.model.lambda_min() + z.re;
        let scale = outer(self.t0).norm() * (rate * self.t0).exp() * 2.0 + 1e-30;
        let r2 =
            quad::integrate_decaying(&outer, self.t0, rate, scale, self.tol / 3.0, self.precision)?;
        Ok(r1.value + r2.value)
    }

    /// Laurent coefficients of Γ(s)ζ(s; L) about s0 for indices lo..=0
    /// (shift must be zero). Index i is the coefficient of (s - s0)^i.
    fn gamma_zeta_laurent(&self, s0: Complex64, lo: i32) -> Result<BTreeMap<i32, Complex64>> {
        assert_eq!(
            self.shift,
            Complex64::ZERO,
            "Laurent assembly is for the unshifted operator"
        );
        let mut acc: BTreeMap<i32, Complex64> = BTreeMap::new();
        for ((alpha, k), c) in self.model.heat_expansion.terms() {
            let a0 = s0 + alpha.to_complex();
            for (idx, v) in i0_laurent(a0, *k, self.t0, lo, 0) {
                *acc.entry(idx).or_insert(Complex64::ZERO) += c.value() * v;
            }
        }
        if self.model.dim_ker > 0 && s0.norm() < 1e-9 {
            // -d·t0^s/s = -d/u · e^{u ln t0}: contributes -d at u^{-1},
            // -d ln t0 at u^0.
            let d = self.model.dim_ker as f64;
            *acc.entry(-1).or_insert(Complex64::ZERO) -= d;
            *acc.entry(0).or_insert(Complex64::ZERO) -= d * self.t0.ln();
        }
        *acc.entry(0).or_insert(Complex64::ZERO) += self.quadrature_part(s0)?;
        Ok(acc)
    }
}

/// Laurent coefficients in u of ∫_0^{T} t^{a0+u-1} log^k t dt for indices
/// lo..=hi: the closed form T^{a0+u} Σ_i C(k,i) ln^{k-i}T (-1)^i i!/(a0+u)^{i+1}
/// expanded about u = 0.
fn i0_laurent(a0: Complex64, k: u32, t_split: f64, lo: i32, hi: i32) -> BTreeMap<i32, Complex64> {
    let lnt = t_split.ln();
    let singular = a0.norm() < 1e-12;
    // exp part: T^{a0} e^{u ln T} — Taylor coefficients in u.
    let depth = (hi - lo) as usize + k as usize + 3;
    let t_a0 = if singular {
        Complex64::ONE
    } else {
        Complex64::new(t_split, 0.0).powc(a0)
    };
    let mut exp_part = vec![Complex64::ZERO; depth];
    let mut c = t_a0;
    for (j, slot) in exp_part.iter_mut().enumerate() {
        *slot = c;
        c *= lnt / (j as f64 + 1.0);
    }
    let mut out: BTreeMap<i32, Complex64> = BTreeMap::new();
    for i in 0..=k {
        let sign_i = if i % 2 == 0 { 1.0 } else { -1.0 };
        let ci =
            special::binomial(k, i) * lnt.powi((k - i) as i32) * sign_i * special::factorial(i);
        if singular {
            // (a0+u)^{-(i+1)} = u^{-(i+1)} exactly.
            let base = -(i as i32) - 1;
            for (j, &e) in exp_part.iter().enumerate() {
                let idx = base + j as i32;
                if idx >= lo && idx <= hi {
                    *out.entry(idx).or_insert(Complex64::ZERO) += ci * e;
                }
            }
        } else {
            // Taylor: Σ_j C(i+j, j) (-1)^j a0^{-(i+j+1)} u^j.
            let mut pole = vec![Complex64::ZERO; depth];
            let mut q = a0.powi(-(i as i32) - 1);
            for (j, slot) in pole.iter_mut().enumerate() {
                *slot = q;
                q *= -((i as usize + j + 1) as f64) / ((j + 1) as f64) / a0;
            }
            for (j1, &e) in exp_part.iter().enumerate() {
                for (j2, &p) in pole.iter().enumerate() {
                    let idx = (j1 + j2) as i32;
                    if idx >= lo && idx <= hi {
                        *out.entry(idx).or_insert(Complex64::ZERO) += ci * e * p;
                    }
                }
            }
        }
    }
    out
}

fn reciprocal_gamma(s: Complex64) -> Result<Complex64> {
    if special::as_nonpositive_integer(s).is_some() {
        return Ok(Complex64::ZERO);
    }
    Ok(1.0 / special::gamma(s)?)
}

/// Regular-point evaluation of ζ(s; L+z).
pub fn zeta_shifted_regular(
    model: &SpectrumModel,
    shift: Complex64,
    s: Complex64,
    opts: &ZetaOptions,
) -> Result<Complex64> {
    let sp = Splitter::new(model, shift, s.re.min(0.0), opts)?;
    Ok(sp.gamma_zeta(s)? * reciprocal_gamma(s)?)
}

/// Candidate pole locations of Γ·ζ in s (from the declared expansion).
fn mellin_pole_candidates(model: &SpectrumModel) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = model
        .heat_expansion
        .terms()
        .map(|((a, _), _)| -a.to_complex())
        .collect();
    if model.dim_ker > 0 {
        v.push(Complex64::ZERO);
    }
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
    v
}

/// Full Laurent data of ζ(s; L) about s0 (a candidate pole location of the
/// Mellin transform). Works at regular points of ζ too, where the principal
/// part comes out empty.
pub fn zeta_laurent_at(
    model: &SpectrumModel,
    s0: Complex64,
    opts: &ZetaOptions,
) -> Result<LaurentData> {
    let max_k = model
        .heat_expansion
        .terms()
        .map(|((_, k), _)| *k)
        .max()
        .unwrap_or(0);
    let mmax = max_k as i32 + 2;
    let sp = Splitter::new(model, Complex64::ZERO, s0.re.min(0.0), opts)?;
    let m = sp.gamma_zeta_laurent(s0, -mmax)?;
    let g = special::reciprocal_gamma_taylor(s0, mmax as usize + 2)?;
    let mut data = LaurentData {
        location: s0,
        coeffs: BTreeMap::new(),
    };
    let scale: f64 = m.values().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    for i in -mmax..=0 {
        let mut v = Complex64::ZERO;
        for (&mi, &mc) in &m {
            let j = i - mi;
            if j >= 0 && (j as usize) < g.len() {
                v += mc * g[j as usize];
            }
        }
        if i < 0 && v.norm() < 1e-11 * scale {
            continue; // numerical zero in the principal part
        }
        data.coeffs.insert(-i, v);
    }
    Ok(data)
}

/// ζ(s; L): regular value, or Laurent data when s sits on a pole predicted
/// by the heat expansion.
pub fn zeta(model: &SpectrumModel, s: Complex64, opts: &ZetaOptions) -> Result<ZetaValue> {
    for cand in mellin_pole_candidates(model) {
        if (s - cand).norm() < 1e-9 {
            let data = zeta_laurent_at(model, cand, opts)?;
            let is_pole = predicted_poles(model)?
                .iter()
                .any(|p| (p.location - cand).norm() < 1e-12 && p.order > 0);
            return Ok(if is_pole {
                ZetaValue::Pole(data)
            } else {
                ZetaValue::Regular(data.finite_part())
            });
        }
    }
    Ok(ZetaValue::Regular(zeta_shifted_regular(
        model,
        Complex64::ZERO,
        s,
        opts,
    )?))
}

/// Residue and finite part of ζ(s; L) at the positive integer n:
/// residue A^H_{-n,0}/(n-1)!, finite part from the splitting.
pub fn zeta_pf_at_positive_integer(
    model: &SpectrumModel,
    n: u32,
    opts: &ZetaOptions,
) -> Result<(Complex64, Complex64)> {
    assert!(n >= 1);
    let s0 = Complex64::new(n as f64, 0.0);
    let declared = model
        .heat_expansion
        .terms()
        .any(|((a, k), _)| *k == 0 && a.as_nonpositive_integer() == Some(n));
    if declared {
        let data = zeta_laurent_at(model, s0, opts)?;
        Ok((data.residue(), data.finite_part()))
    } else {
        Ok((
            Complex64::ZERO,
            zeta_shifted_regular(model, Complex64::ZERO, s0, opts)?,
        ))
    }
}

/// A^H'_00 = A^H_00 - dim ker L.
pub fn a_prime_00(model: &SpectrumModel) -> Complex64 {
    model
        .heat_expansion
        .coeff(&Exponent::from_int(0), 0)
        .value()
        - model.dim_ker as f64
}

const RICHARDSON_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
const ROUTE_TOL: f64 = 1e-7;

fn derivative_route(
    model: &SpectrumModel,
    shift: Complex64,
    opts: &ZetaOptions,
) -> Result<Complex64> {
    let sp = Splitter::new(model, shift, -RICHARDSON_STEPS[0] - 1e-3, opts)?;
    let mut samples = Vec::new();
    for &h in &RICHARDSON_STEPS {
        for sign in [1.0, -1.0] {
            let s = Complex64::new(sign * h, 0.0);
            let v = sp.gamma_zeta(s)? * reciprocal_gamma(s)?;
            samples.push(((sign * h), v));
        }
    }
    let lookup = move |x: f64| {
        samples
            .iter()
            .find(|(h, _)| (h - x).abs() < 1e-15)
            .map(|(_, v)| *v)
            .expect("stencil point")
    };
    Ok(-richardson_derivative(&lookup, 0.0, &RICHARDSON_STEPS))
}

/// log det_ζ(L) = -ζ'(0; L), computed by the heat route
/// -γ·A'_00 - ⨍ t^{-1} tr e^{-tL} dt and cross-checked against the
/// derivative route (Richardson differentiation of the splitting at s = 0).
pub fn log_det_zeta(model: &SpectrumModel, opts: &ZetaOptions) -> Result<DetZeta> {
    // Heat route via the general regularized integral.
    let mut at_zero = crate::expansion::AsymptoticExpansion::new(
        crate::expansion::Direction::AtZero,
        model.heat_expansion.cutoff() - 1.0,
    );
    for ((a, k), c) in model.heat_expansion.terms() {
        at_zero.accumulate(a.add(&Exponent::from_int(-1)), *k, c.clone());
    }
    let heat_tol = 1e-15;
    let floor = model.heat_floor(heat_tol) * 1.05;
    let f = |t: f64| {
        Complex64::new(
            model.heat_trace(t, heat_tol).expect("above heat floor") / t,
            0.0,
        )
    };
    let lambda1 = model.lambda_min();
    let infinity = if model.dim_ker == 0 {
        InfinitySide::ExponentialDecay {
            rate: lambda1,
            scale: model.heat_trace(1.0, heat_tol)? * lambda1.exp() * 2.0,
        }
    } else {
        InfinitySide::Expansion(
            crate::expansion::AsymptoticExpansion::new(
                crate::expansion::Direction::AtInfinity,
                f64::INFINITY,
            )
            .with_term(
                Exponent::from_int(-1),
                0,
                crate::expansion::Coeff::from_int(model.dim_ker as i64),
            ),
        )
    };
    let integrand = Integrand {
        f: &f,
        at_zero,
        infinity,
        floor,
    };
    let reg = crate::regint::regint_numeric(
        &integrand,
        &RegIntOptions {
            tol: opts.tol,
            split: 1.0,
            precision: opts.precision,
        },
    )?;
    let route_heat = -EULER_GAMMA * a_prime_00(model) - reg.value;
    let route_derivative = derivative_route(model, Complex64::ZERO, opts)?;
    let residual = (route_heat - route_derivative).norm();
    if residual > ROUTE_TOL {
        return Err(Error::RouteMismatch {
            what: format!("log det_ζ({})", model.name),
            heat: route_heat,
            derivative: route_derivative,
            diff: residual,
            tol: ROUTE_TOL,
        });
    }
    Ok(DetZeta {
        value: route_heat,
        route_heat,
        route_derivative,
        residual,
    })
}

/// log det_ζ(L + z) for Re z > -λ_1, by the same two routes. The heat route
/// uses the closed-form Laplace integrals of the declared terms plus an
/// ordinary integral of the (small) heat remainder when Re z is positive,
/// and the transported-expansion regularized integral otherwise.
pub fn log_det_zeta_shifted(
    model: &SpectrumModel,
    z: Complex64,
    opts: &ZetaOptions,
) -> Result<DetZeta> {
    if z.norm() < 1e-13 {
        return log_det_zeta(model, opts);
    }
    let lambda1 = model.lambda_min();
    if z.re <= -lambda1 + 1e-9 {
        return Err(Error::Domain(format!(
            "log_det_zeta_shifted requires Re z > -λ_1 = {}, got z = {z}",
            -lambda1
        )));
    }
    let heat_tol = 1e-15;
    let floor = model.heat_floor(heat_tol) * 1.05;
    let rate = lambda1 + z.re;

    let route_heat = if z.norm() <= 8.0 {
        // Transported-coefficient route through the general regularized
        // integral: the subtraction happens on (0, 1] only, so the Taylor
        // factors of e^{-tz} stay bounded there.
        let transported = model.transported_heat_expansion(z, 9.0);
        let mut at_zero = crate::expansion::AsymptoticExpansion::new(
            crate::expansion::Direction::AtZero,
            transported.cutoff() - 1.0,
        );
        for ((a, k), c) in transported.terms() {
            at_zero.accumulate(a.add(&Exponent::from_int(-1)), *k, c.clone());
        }
        let f =
            |t: f64| (-t * z).exp() * model.heat_trace(t, heat_tol).expect("above heat floor") / t;
        let scale = f(1.0).norm() * rate.exp() * 2.0 + 1e-30;
        let integrand = Integrand {
            f: &f,
            at_zero,
            infinity: InfinitySide::ExponentialDecay { rate, scale },
            floor,
        };
        let reg = crate::regint::regint_numeric(
            &integrand,
            &RegIntOptions {
                tol: opts.tol,
                split: 1.0,
                precision: opts.precision,
            },
        )?;
        -EULER_GAMMA * model.a00_shifted(z) - reg.value
    } else {
        // Large shifts: ⨍ t^{-1} e^{-tz} tr e^{-tL} dt = Pf_{s=0} of the
        // splitting, whose t0 ~ 8/|z| keeps every piece bounded. The β = -1
        // case of the ∫_0^{t0} closed form already is the finite part.
        let sp = Splitter::new(model, z, 0.0, opts)?;
        let mut pf = Complex64::ZERO;
        for ((alpha, k), c) in model.heat_expansion.terms() {
            pf += c.value() * sp.lambda(alpha.to_complex(), *k);
        }
        pf += sp.quadrature_part(Complex64::ZERO)?;
        -EULER_GAMMA * model.a00_shifted(z) - pf
    };

    let route_derivative = derivative_route(model, z, opts)?;
    let residual = (route_heat - route_derivative).norm();
    if residual > ROUTE_TOL {
        return Err(Error::RouteMismatch {
            what: format!("log det_ζ({} + {z})", model.name),
            heat: route_heat,
            derivative: route_derivative,
            diff: residual,
            tol: ROUTE_TOL,
        });
    }
    Ok(DetZeta {
        value: route_heat,
        route_heat,
        route_derivative,
        residual,
    })
}

/// d^n/dz^n log det_ζ(L+z) at z = 0 for n ≥ 1:
/// (-1)^{n+1} [ (n-1)!·Pf_{s=n} ζ(s;L) + A^H_{-n,0}·L_{n-1} ].
///
/// The sign (-1)^{n+1} and the bare L_{n-1} normalization are the
/// calibration outcome pinned by the finite-difference oracle on the model
/// with λ_n = n, where log det_ζ(L+z) = ½log 2π - log Γ(1+z) exactly; see
/// the tests alongside this module.
pub fn taylor_log_det_zeta(model: &SpectrumModel, n: u32, opts: &ZetaOptions) -> Result<Complex64> {
    assert!(n >= 1, "taylor_log_det_zeta is defined for n ≥ 1");
    let (_, pf) = zeta_pf_at_positive_integer(model, n, opts)?;
    let a = model
        .heat_expansion
        .coeff(&Exponent::from_int(-(n as i64)), 0)
        .value();
    let sigma = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sigma * (special::factorial(n - 1) * pf + a * crate::special::harmonic_f64(n - 1)))
}
