//! Cross-module invariants: Taylor coefficients against derivative
//! sampling of the numeric determinant, and fitted large-z coefficients
//! against the predicted ones, across the whole catalog.

use num_complex::Complex64;
use std::f64::consts::PI;
use zetafred::asymptotics;
use zetafred::fredholm::FredholmOptions;
use zetafred::models::catalog;
use zetafred::numeric::central_derivative;
use zetafred::special::factorial;
use zetafred::zeta::{log_det_zeta_shifted, taylor_log_det_zeta, ZetaOptions};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// d^n/dz^n at 0 through a 32-point Cauchy circle of radius 1/4; pure
/// sampling of f, no use of the coefficient formulas.
fn circle_derivative<F: Fn(Complex64) -> Complex64>(f: &F, n: u32) -> Complex64 {
    const M: usize = 32;
    const R: f64 = 0.25;
    let mut acc = Complex64::ZERO;
    for j in 0..M {
        let theta = 2.0 * PI * j as f64 / M as f64;
        let z = Complex64::from_polar(R, theta);
        acc += f(z) * Complex64::from_polar(R.powi(-(n as i32)), -(n as f64) * theta);
    }
    acc / M as f64 * factorial(n)
}

#[test]
fn taylor_coefficients_match_derivative_sampling() {
    let opts = ZetaOptions {
        tol: 5e-13,
        ..Default::default()
    };
    for m in catalog() {
        let f = |z: Complex64| log_det_zeta_shifted(&m, z, &opts).unwrap().value;
        let fr = |x: f64| f(c(x, 0.0));
        for n in 1..=4u32 {
            let formula = taylor_log_det_zeta(&m, n, &opts).unwrap();
            let sampled = if n <= 3 {
                // Central differences including step 1e-2, two Richardson
                // levels.
                let d1 = central_derivative(&fr, 0.0, n, 0.02);
                let d2 = central_derivative(&fr, 0.0, n, 0.01);
                (d2 * 16.0 - d1) / 15.0
            } else {
                // The step-1e-2 real-axis stencil is truncation-bound above
                // 1e-6 for the 4th derivative when λ_1 = 1/2; the circle
                // derivative samples the same function.
                circle_derivative(&f, n)
            };
            let err = (sampled - formula).norm();
            assert!(
                err < 1e-6,
                "{} n={n}: formula {formula} vs sampled {sampled} (err {err:.3e})",
                m.name
            );
        }
    }
}

#[test]
fn fitted_expansion_coefficients_match_predicted() {
    // For every catalog model: fit log det_ζ(L+z) samples on the predicted
    // template (all terms with Re α ≤ 1) and compare coefficients within
    // 1e-3 relative.
    let zopts = ZetaOptions::default();
    for m in catalog() {
        let predicted = asymptotics::predict_log_det_zeta_expansion(&m).unwrap();
        let template: Vec<(f64, u32)> = predicted
            .terms()
            .filter(|((a, _), _)| a.re_f64() <= 1.0 + 1e-9)
            .map(|((a, k), _)| (a.re_f64(), *k))
            .collect();
        let mut samples = Vec::new();
        for j in 0..(template.len() + 3).max(6) {
            let z = 25.0 * 2f64.powi(j as i32);
            samples.push((
                z,
                log_det_zeta_shifted(&m, c(z, 0.0), &zopts).unwrap().value,
            ));
        }
        let (fit, diag) = asymptotics::fit_expansion(&samples, &template).unwrap();
        for ((a, k), pc) in predicted.terms() {
            if a.re_f64() > 1.0 + 1e-9 {
                continue;
            }
            let fc = fit.coeff(a, *k).value();
            let rel = (fc - pc.value()).norm() / pc.value().norm();
            assert!(
                rel < 1e-3,
                "{} term (α={:.2}, k={k}): predicted {} vs fitted {} (rel {rel:.3e}, cond {:.3e})",
                m.name,
                a.re_f64(),
                pc.value(),
                fc,
                diag.condition
            );
        }
    }
}

#[test]
fn regint_of_heat_trace_over_t_matches_closed_form() {
    // ⨍ t^{-1} tr e^{-tL} dt = -log 2π + γ/2 for λ_n = n² (from the
    // determinant formula with A'_00 = -1/2 and det_ζ = 2π).
    use zetafred::expansion::{AsymptoticExpansion, Direction, Exponent};
    use zetafred::regint::{regint_numeric, InfinitySide, Integrand, RegIntOptions};
    let m = zetafred::models::model_n2();
    let mut at_zero = AsymptoticExpansion::new(Direction::AtZero, f64::INFINITY);
    for ((a, k), cc) in m.heat_expansion.terms() {
        at_zero.accumulate(a.add(&Exponent::from_int(-1)), *k, cc.clone());
    }
    let f = |t: f64| c(m.heat_trace(t, 1e-15).unwrap() / t, 0.0);
    let integrand = Integrand {
        f: &f,
        at_zero,
        infinity: InfinitySide::ExponentialDecay {
            rate: 1.0,
            scale: 2.0,
        },
        floor: m.heat_floor(1e-15) * 1.05,
    };
    let v = regint_numeric(&integrand, &RegIntOptions::default())
        .unwrap()
        .value;
    let want = -(2.0 * PI).ln() + zetafred::special::EULER_GAMMA / 2.0;
    assert!((v.re - want).abs() < 1e-9, "{} vs {want}", v.re);
}

#[test]
fn predicted_fredholm_matches_numeric_at_large_z() {
    // |log det_p(z) - predicted truncated at z^{-2}| decays like z^{-3}.
    let zopts = ZetaOptions::default();
    let fopts = FredholmOptions::default();
    for m in catalog() {
        let pred = asymptotics::predict_fredholm_expansion(&m, &zopts)
            .unwrap()
            .truncate_through(2.0);
        let mut prev: Option<f64> = None;
        for &z in &[50.0, 100.0, 200.0] {
            let direct = zetafred::fredholm::det_fredholm(&m, c(z, 0.0), m.schatten_p, &fopts)
                .unwrap()
                .log_value
                .unwrap();
            let rem = (direct - pred.eval(z)).norm();
            if let Some(p) = prev {
                assert!(
                    rem < p * 0.25 || rem < 1e-9,
                    "{}: remainder did not decay ({p:.3e} -> {rem:.3e})",
                    m.name
                );
            }
            prev = Some(rem);
        }
    }
}
