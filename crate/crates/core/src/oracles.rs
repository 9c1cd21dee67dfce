//! Closed forms for the built-in models, used by tests, the acceptance
//! suite, and report cross-checks. Everything here is independent of the
//! Mellin-splitting and product machinery it is used to check.

use crate::error::Result;
use crate::models::BuiltinOracle;
use crate::special::{self, EULER_GAMMA, LN_2PI};
use num_complex::Complex64;
use std::f64::consts::PI;

/// ζ(s; L) in closed form.
pub fn zeta_closed(which: BuiltinOracle, s: Complex64) -> Result<Complex64> {
    match which {
        BuiltinOracle::N1 => special::riemann_zeta(s),
        BuiltinOracle::N2 => special::riemann_zeta(2.0 * s),
        BuiltinOracle::HO => {
            // ζ_H(s, 1/2) = (2^s - 1) ζ_R(s)
            Ok(((s * 2f64.ln()).exp() - 1.0) * special::riemann_zeta(s)?)
        }
    }
}

/// log det_ζ(L) = -ζ'(0; L) in closed form.
pub fn log_det_zeta_closed(which: BuiltinOracle) -> f64 {
    match which {
        BuiltinOracle::N1 => 0.5 * LN_2PI,
        BuiltinOracle::N2 => LN_2PI,
        BuiltinOracle::HO => 0.5 * 2f64.ln(),
    }
}

/// log det_ζ(L + z) in closed form (real z > -λ_1, or complex with Re z > 0).
pub fn log_det_zeta_shifted_closed(which: BuiltinOracle, z: Complex64) -> Result<Complex64> {
    match which {
        // det_ζ(L+z) = √(2π)/Γ(1+z)
        BuiltinOracle::N1 => Ok(0.5 * LN_2PI - special::log_gamma(z + 1.0)?),
        // det_ζ(L+z) = 2 sinh(π√z)/√z
        BuiltinOracle::N2 => {
            let sq = z.sqrt();
            Ok((2.0 * (PI * sq).sinh() / sq).ln())
        }
        // det_ζ(L+z) = √(2π)/Γ(1/2+z)
        BuiltinOracle::HO => Ok(0.5 * LN_2PI - special::log_gamma(z + 0.5)?),
    }
}

/// log det_p(I + z L^{-1}) in closed form for the model's Schatten order p.
pub fn log_det_p_closed(which: BuiltinOracle, z: Complex64) -> Result<Complex64> {
    match which {
        // det_2 = e^{-γz}/Γ(1+z) (Weierstrass product for 1/Γ)
        BuiltinOracle::N1 => Ok(-EULER_GAMMA * z - special::log_gamma(z + 1.0)?),
        // det_1 = sinh(π√z)/(π√z)
        BuiltinOracle::N2 => {
            let sq = z.sqrt();
            Ok(((PI * sq).sinh() / (PI * sq)).ln())
        }
        // det_2 = √π · 4^{-z} e^{-γz} / Γ(1/2+z)
        BuiltinOracle::HO => {
            Ok(0.5 * PI.ln() - z * 4f64.ln() - EULER_GAMMA * z - special::log_gamma(z + 0.5)?)
        }
    }
}

/// tr e^{-tL} in closed form; the N2 branch uses Jacobi inversion below
/// t = 0.3 so it stays cheap and accurate for all t.
pub fn heat_closed(which: BuiltinOracle, t: f64) -> f64 {
    match which {
        BuiltinOracle::N1 => 1.0 / (t.exp() - 1.0),
        BuiltinOracle::HO => 0.5 / (0.5 * t).sinh(),
        BuiltinOracle::N2 => {
            if t >= 0.3 {
                let mut sum = 0.0;
                let mut n = 1.0;
                loop {
                    let term = (-t * n * n).exp();
                    sum += term;
                    if term < 1e-18 * (1.0 + sum) {
                        return sum;
                    }
                    n += 1.0;
                }
            } else {
                let mut theta_tail = 0.0;
                let mut n = 1.0;
                loop {
                    let term = (-PI * PI * n * n / t).exp();
                    theta_tail += term;
                    if term < 1e-18 {
                        break;
                    }
                    n += 1.0;
                }
                ((PI / t).sqrt() * (1.0 + 2.0 * theta_tail) - 1.0) / 2.0
            }
        }
    }
}

/// tr (L + z)^{-N} in closed form, where a closed form exists.
pub fn resolvent_closed(
    which: BuiltinOracle,
    z: Complex64,
    order: u32,
) -> Result<Option<Complex64>> {
    match (which, order) {
        // Σ (n+z)^{-N} = (-1)^N ψ^{(N-1)}(1+z)/(N-1)!  … sign works out to +
        // for the absolutely convergent sums below.
        (BuiltinOracle::N1, n) if n >= 2 => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(Some(
                sign * special::polygamma(n - 1, z + 1.0)? / special::factorial(n - 1),
            ))
        }
        (BuiltinOracle::HO, n) if n >= 2 => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(Some(
                sign * special::polygamma(n - 1, z + 0.5)? / special::factorial(n - 1),
            ))
        }
        // Σ 1/(n²+z) = π coth(π√z)/(2√z) - 1/(2z)
        (BuiltinOracle::N2, 1) => {
            let sq = z.sqrt();
            Ok(Some(PI / (2.0 * sq * (PI * sq).tanh()) - 1.0 / (2.0 * z)))
        }
        _ => Ok(None),
    }
}
