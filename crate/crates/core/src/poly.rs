//! Truncated power-series arithmetic over Complex64, used for local Taylor
//! and Laurent manipulations (series inversion, exponentials, products).

use num_complex::Complex64;

pub type Series = Vec<Complex64>;

pub fn mul_trunc(a: &[Complex64], b: &[Complex64], len: usize) -> Series {
    let mut out = vec![Complex64::ZERO; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == Complex64::ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Reciprocal of a series with nonzero constant term.
pub fn inv_trunc(a: &[Complex64], len: usize) -> Series {
    assert!(
        !a.is_empty() && a[0] != Complex64::ZERO,
        "series not invertible"
    );
    let mut out = vec![Complex64::ZERO; len];
    out[0] = 1.0 / a[0];
    for n in 1..len {
        let mut acc = Complex64::ZERO;
        for j in 1..=n {
            let aj = if j < a.len() { a[j] } else { Complex64::ZERO };
            acc += aj * out[n - j];
        }
        out[n] = -acc / a[0];
    }
    out
}

/// exp of a series with zero constant term.
pub fn exp_trunc(a: &[Complex64], len: usize) -> Series {
    assert!(
        a.is_empty() || a[0] == Complex64::ZERO,
        "exp_trunc needs a(0) = 0"
    );
    // e' = a' e, so n·e_n = Σ_{j=1..n} j·a_j·e_{n-j}.
    let mut out = vec![Complex64::ZERO; len];
    out[0] = Complex64::ONE;
    for n in 1..len {
        let mut acc = Complex64::ZERO;
        for j in 1..=n {
            let aj = if j < a.len() { a[j] } else { Complex64::ZERO };
            acc += aj * out[n - j] * (j as f64);
        }
        out[n] = acc / (n as f64);
    }
    out
}
