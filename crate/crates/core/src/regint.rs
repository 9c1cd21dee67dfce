//! Numerical evaluation of the regularized integral ⨍_0^∞ f(t) dt for
//! functions with declared complete asymptotics.
//!
//! The integral splits at t0 (default 1). On (0, t0] the declared t → 0
//! terms are subtracted, the remainder is integrated by adaptive quadrature,
//! and each subtracted term is added back through the closed form
//! ⨍_0^T t^β log^k t dt. On [t0, ∞) the integrand is either exponentially
//! decaying (ordinary integral) or handled the same way with the declared
//! t → ∞ terms, whose add-backs are -⨍_0^T by the vanishing rule.

use crate::error::{Error, Result};
use crate::expansion::{AsymptoticExpansion, Direction};
use crate::numeric::Precision;
use crate::quad;
use num_complex::Complex64;

/// Behaviour of the integrand on [t0, ∞).
pub enum InfinitySide {
    /// |f(t)| ≲ scale · e^{-rate·t}; integrated directly.
    ExponentialDecay { rate: f64, scale: f64 },
    /// Complete power-log asymptotics at ∞ (cutoff must exceed 1 so the
    /// subtracted remainder is integrable).
    Expansion(AsymptoticExpansion),
}

/// A sampled function together with its declared expansions.
pub struct Integrand<'a> {
    pub f: &'a dyn Fn(f64) -> Complex64,
    pub at_zero: AsymptoticExpansion,
    pub infinity: InfinitySide,
    /// Smallest t at which `f` may be evaluated.
    pub floor: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RegIntOptions {
    pub tol: f64,
    /// Split point t0 between the subtracted region and the tail.
    pub split: f64,
    pub precision: Precision,
}

impl Default for RegIntOptions {
    fn default() -> Self {
        RegIntOptions {
            tol: 1e-10,
            split: 1.0,
            precision: Precision::Double,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RegIntValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evals: usize,
}

/// Closed form of ⨍_0^T t^β log^k t dt:
/// T^{β+1} Σ_i C(k,i) ln^{k-i} T · (-1)^i i! / (β+1)^{i+1} for β ≠ -1,
/// and ln^{k+1} T / (k+1) for β = -1 (regularized at the lower end).
pub fn regint01_term(beta: Complex64, k: u32, t_split: f64) -> Complex64 {
    let a = beta + 1.0;
    let lnt = t_split.ln();
    if a.norm() < 1e-13 {
        return Complex64::new(lnt.powi(k as i32 + 1) / (k as f64 + 1.0), 0.0);
    }
    let mut sum = Complex64::ZERO;
    let mut inv_a = 1.0 / a;
    let mut fact = 1.0;
    for i in 0..=k {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += crate::special::binomial(k, i) * lnt.powi((k - i) as i32) * sign * fact * inv_a;
        inv_a /= a;
        fact *= (i + 1) as f64;
    }
    Complex64::new(t_split, 0.0).powc(a) * sum
}

/// ⨍_0^∞ f(t) dt by subtraction of the declared divergent behaviour.
pub fn regint_numeric(integrand: &Integrand, opts: &RegIntOptions) -> Result<RegIntValue> {
    let at_zero = &integrand.at_zero;
    if at_zero.direction() != Direction::AtZero {
        return Err(Error::DirectionMismatch {
            expected: "at_zero",
            got: at_zero.direction().name(),
        });
    }
    if at_zero.cutoff() < 0.0 {
        return Err(Error::InsufficientExpansion {
            cutoff: at_zero.cutoff(),
            required: 0.0,
        });
    }
    let t0 = opts.split;
    let tol = opts.tol;
    let mut value = Complex64::ZERO;
    let mut err = 0.0;
    let mut evals = 0usize;

    // ---- (0, t0]: subtract every declared term up to re α ≤ sub_max.
    let sub_max = at_zero.cutoff().min(6.0);
    let p0 = at_zero.truncate(sub_max);
    for ((a, k), c) in p0.terms() {
        value += c.value() * regint01_term(a.to_complex(), *k, t0);
    }
    let g0 = |t: f64| (integrand.f)(t) - p0.eval_all(t);

    // Pick the lower cut δ so the neglected ∫_0^δ of the remainder is
    // negligible; the remainder behaves like the first omitted power, so one
    // probe fixes the local exponent and the required δ is extrapolated
    // instead of probed downward (a corrupted expansion would otherwise
    // drag the heat summation to its floor before failing).
    let mut delta = (t0 * 0.02).max(integrand.floor);
    let mut neglected;
    let mut attempts = 0;
    loop {
        let g1 = g0(delta).norm();
        let g2 = g0(2.0 * delta).norm();
        let noise = 4.0 * f64::EPSILON * ((integrand.f)(delta).norm() + p0.eval_all(delta).norm());
        if g1 <= noise * 4.0 {
            neglected = noise * delta;
            break;
        }
        let p_hat = if g2 > 0.0 && g1 > 0.0 {
            (g2 / g1).ln() / 2f64.ln()
        } else {
            0.0
        };
        neglected = if p_hat > -0.9 {
            g1 * delta / (p_hat + 1.0).max(0.1)
        } else {
            f64::INFINITY
        };
        if neglected < tol / 8.0 {
            break;
        }
        let needed = if neglected.is_finite() {
            delta * (tol / (8.0 * neglected)).powf(1.0 / (p_hat.max(0.0) + 1.0))
        } else {
            0.0
        };
        attempts += 1;
        if needed < integrand.floor || attempts > 4 {
            return Err(Error::QuadratureFailure {
                context: format!(
                    "regint_numeric: remainder near 0 not negligible above the evaluation floor \
                     {:.3e} (|g({delta:.3e})| = {g1:.3e}, local exponent {p_hat:.2}, needs δ ≈ {needed:.3e})",
                    integrand.floor
                ),
                estimate: neglected,
                tolerance: tol,
            });
        }
        delta = (needed * 0.5).max(integrand.floor);
    }
    err += neglected;
    let r0 = quad::adaptive(&g0, delta, t0, tol / 4.0, opts.precision)?;
    value += r0.value;
    err += r0.abs_error;
    evals += r0.evals;

    // ---- [t0, ∞)
    match &integrand.infinity {
        InfinitySide::ExponentialDecay { rate, scale } => {
            let ri = quad::integrate_decaying(
                &integrand.f,
                t0,
                *rate,
                *scale,
                tol / 4.0,
                opts.precision,
            )?;
            value += ri.value;
            err += ri.abs_error;
            evals += ri.evals;
        }
        InfinitySide::Expansion(e_inf) => {
            if e_inf.direction() != Direction::AtInfinity {
                return Err(Error::DirectionMismatch {
                    expected: "at_infinity",
                    got: e_inf.direction().name(),
                });
            }
            if e_inf.cutoff() <= 1.0 {
                return Err(Error::InsufficientExpansion {
                    cutoff: e_inf.cutoff(),
                    required: 1.0 + 1e-9,
                });
            }
            // ⨍_T^∞ t^β log^k t dt = -⨍_0^T by eq.regzero.
            for ((a, k), c) in e_inf.terms() {
                value -= c.value() * regint01_term(a.to_complex(), *k, t0);
            }
            let ginf = |t: f64| (integrand.f)(t) - e_inf.eval_all(t);
            // The remainder is o(t^{-K}); find T with the tail below tol.
            let kk = e_inf.cutoff().min(12.0);
            let mut t_end = t0 * 4.0;
            loop {
                let tail = ginf(t_end).norm() * t_end / (kk - 1.0);
                if tail < tol / 8.0 || t_end > 1e12 {
                    err += tail;
                    break;
                }
                t_end *= 4.0;
            }
            // Geometric panels keep the adaptive rule well conditioned.
            let mut lo = t0;
            while lo < t_end {
                let hi = (lo * 4.0).min(t_end);
                let r = quad::adaptive(
                    &ginf,
                    lo,
                    hi,
                    tol / 8.0 * (hi - lo) / (t_end - t0),
                    opts.precision,
                )?;
                value += r.value;
                err += r.abs_error;
                evals += r.evals;
                lo = hi;
            }
        }
    }

    Ok(RegIntValue {
        value,
        error_estimate: err,
        evals,
    })
}

/// The t → 0 expansion of t^β e^{-w t} (β rational-exact, w arbitrary):
/// t^β Σ_m (-w)^m t^m / m!, truncated so the cutoff reaches `order`.
pub fn power_times_exp_expansion(
    beta: crate::expansion::Exponent,
    w: Complex64,
    order: f64,
) -> AsymptoticExpansion {
    use crate::expansion::Coeff;
    let beta_re = beta.re_f64();
    let m_max = ((order - beta_re).ceil() as i64).max(0) as u32 + 1;
    let mut e = AsymptoticExpansion::new(Direction::AtZero, beta_re + m_max as f64 - 0.5);
    let mut coeff = Coeff::from_int(1);
    let w_exact = Coeff::from_f64_promoted(w.re, w.im);
    for m in 0..=m_max {
        let alpha = beta.add(&crate::expansion::Exponent::from_int(m as i64));
        e.accumulate(alpha, 0, coeff.clone());
        coeff = coeff
            .mul(&w_exact)
            .neg()
            .scale_rational(&crate::exact::rat_i64(1, (m + 1) as i64));
    }
    e
}
