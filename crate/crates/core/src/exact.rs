//! Exact coefficient arithmetic.
//!
//! Declared heat coefficients and everything derived from them by the
//! expansion calculus live in the ring Q[√π, 1/√π]: rational numbers times
//! integer powers of √π. Gamma at integer and half-integer arguments stays
//! inside this ring, so predicted expansions and the heat ↔ resolvent round
//! trip can be carried out with no rounding at all. Values fall back to
//! floating point only when a genuinely transcendental factor (γ, ψ-values,
//! log z) enters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

pub fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Exact conversion: every finite f64 is a binary rational.
pub fn rat_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    BigRational::from_float(x)
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial_rat(n: u32) -> BigRational {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    BigRational::from(acc)
}

pub fn binomial_rat(n: u32, k: u32) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= rat_int((n - j) as i64) / rat_int((j + 1) as i64);
    }
    acc
}

/// Harmonic number L_n = Σ_{j=1..n} 1/j, with L_0 = 0.
pub fn harmonic_rat(n: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 1..=n as i64 {
        acc += rat_i64(1, j);
    }
    acc
}

/// Generalized harmonic number Σ_{j=1..n} j^{-k}.
pub fn gen_harmonic_rat(n: u32, k: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 1..=n as i64 {
        acc += BigRational::new(BigInt::one(), BigInt::from(j).pow(k));
    }
    acc
}

/// Bernoulli numbers B_0..B_30 (B_1 = -1/2 convention).
const BERNOULLI: [(i64, i64); 16] = [
    (1, 1),
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
];

/// Exact Bernoulli number B_n for n ≤ 30.
pub fn bernoulli_rat(n: u32) -> BigRational {
    if n == 1 {
        return rat_i64(-1, 2);
    }
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let idx = (n / 2) as usize;
    assert!(idx < BERNOULLI.len(), "Bernoulli table covers n <= 30");
    let (p, q) = BERNOULLI[idx];
    rat_i64(p, q)
}

/// Element of Q[√π, 1/√π]: map from the power of √π to its rational
/// coefficient. `{0: q}` is the plain rational q, `{1: q}` is q·√π,
/// `{2: q}` is q·π, `{-1: q}` is q/√π.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SqrtPiRat {
    terms: BTreeMap<i32, BigRational>,
}

impl SqrtPiRat {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        SqrtPiRat { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// q·(√π)^power.
    pub fn sqrt_pi_term(power: i32, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(power, q);
        }
        SqrtPiRat { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational part, if the value is a plain rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let sqrt_pi = PI.sqrt();
        self.terms
            .iter()
            .map(|(&p, q)| rat_to_f64(q) * sqrt_pi.powi(p))
            .sum()
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(&p, q)| (p, -q.clone())).collect();
        SqrtPiRat { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&p, q) in &other.terms {
            let entry = terms.entry(p).or_insert_with(BigRational::zero);
            *entry += q.clone();
            if entry.is_zero() {
                terms.remove(&p);
            }
        }
        SqrtPiRat { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i32, BigRational> = BTreeMap::new();
        for (&p1, q1) in &self.terms {
            for (&p2, q2) in &other.terms {
                let entry = terms.entry(p1 + p2).or_insert_with(BigRational::zero);
                *entry += q1 * q2;
            }
        }
        terms.retain(|_, q| !q.is_zero());
        SqrtPiRat { terms }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&p, c)| (p, c * q)).collect();
        SqrtPiRat { terms }
    }

    /// Multiplicative inverse; exists exactly for monomials q·(√π)^p.
    pub fn invert(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&p, q) = self.terms.iter().next().unwrap();
        Some(Self::sqrt_pi_term(-p, q.recip()))
    }
}

impl fmt::Debug for SqrtPiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&p, q)| match p {
                0 => format!("{q}"),
                1 => format!("{q}·√π"),
                _ => format!("{q}·√π^{p}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Complex number with exact SqrtPiRat components.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExactC {
    pub re: SqrtPiRat,
    pub im: SqrtPiRat,
}

impl ExactC {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_real(re: SqrtPiRat) -> Self {
        ExactC {
            re,
            im: SqrtPiRat::zero(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_real(SqrtPiRat::from_rational(q))
    }

    pub fn from_f64_pair(re: f64, im: f64) -> Option<Self> {
        Some(ExactC {
            re: SqrtPiRat::from_rational(rat_from_f64(re)?),
            im: SqrtPiRat::from_rational(rat_from_f64(im)?),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExactC {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ExactC {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> Self {
        ExactC {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExactC {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn mul_real(&self, r: &SqrtPiRat) -> Self {
        ExactC {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        ExactC {
            re: self.re.scale(q),
            im: self.im.scale(q),
        }
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for ExactC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

/// Γ(x) for rational x, exact when x is a positive integer or a
/// half-integer: Γ(n) = (n-1)!, Γ(1/2 + n) ∈ Q·√π. Returns None at poles
/// and at rationals outside Z ∪ (Z + 1/2).
pub fn gamma_exact(x: &BigRational) -> Option<SqrtPiRat> {
    let two = rat_int(2);
    let doubled = x * &two;
    if !doubled.is_integer() {
        return None;
    }
    if x.is_integer() {
        if x <= &BigRational::zero() {
            return None; // pole
        }
        let n = x.to_integer().to_u32()?;
        return Some(SqrtPiRat::from_rational(factorial_rat(n - 1)));
    }
    // Half-integer: walk from Γ(1/2) = √π with Γ(x+1) = x·Γ(x).
    let half = rat_i64(1, 2);
    let mut value = SqrtPiRat::sqrt_pi_term(1, BigRational::one());
    let mut arg = half;
    if *x > arg {
        while arg < *x {
            value = value.scale(&arg);
            arg += BigRational::one();
        }
    } else {
        while arg > *x {
            arg -= BigRational::one();
            value = value.scale(&arg.recip());
        }
    }
    Some(value)
}

/// 1/Γ(x) for rational x; exact on Z ∪ (Z + 1/2), including the zeros at
/// non-positive integers.
pub fn one_over_gamma_exact(x: &BigRational) -> Option<SqrtPiRat> {
    if x.is_integer() && *x <= BigRational::zero() {
        return Some(SqrtPiRat::zero());
    }
    gamma_exact(x)?.invert()
}

/// m-th derivative of 1/Γ at rational x, where it stays exact:
/// m = 0 everywhere on Z ∪ (Z+1/2), and m = 1 at non-positive integers
/// (where (1/Γ)'(-n) = (-1)^n · n!).
pub fn one_over_gamma_deriv_exact(m: u32, x: &BigRational) -> Option<SqrtPiRat> {
    match m {
        0 => one_over_gamma_exact(x),
        1 => {
            if x.is_integer() && *x <= BigRational::zero() {
                let n = (-x.to_integer()).to_u32()?;
                let sign = if n % 2 == 0 { 1 } else { -1 };
                Some(SqrtPiRat::from_rational(factorial_rat(n).scale_int(sign)))
            } else {
                None
            }
        }
        _ => None,
    }
}

trait ScaleInt {
    fn scale_int(self, s: i64) -> Self;
}

impl ScaleInt for BigRational {
    fn scale_int(self, s: i64) -> Self {
        self * rat_int(s)
    }
}

/// Residue of Γ at -n: (-1)^n / n!.
pub fn gamma_residue_rat(n: u32) -> BigRational {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    rat_int(sign) / factorial_rat(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_pi_ring_ops() {
        let a = SqrtPiRat::sqrt_pi_term(1, rat_i64(1, 2)); // √π/2
        let b = SqrtPiRat::sqrt_pi_term(1, rat_int(-2)); // -2√π
        let prod = a.mul(&b); // -π
        assert_eq!(prod, SqrtPiRat::sqrt_pi_term(2, rat_int(-1)));
        assert!((prod.to_f64() + PI).abs() < 1e-15);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn gamma_exact_values() {
        assert_eq!(gamma_exact(&rat_int(5)).unwrap(), SqrtPiRat::from_int(24));
        // Γ(1/2) = √π
        assert_eq!(
            gamma_exact(&rat_i64(1, 2)).unwrap(),
            SqrtPiRat::sqrt_pi_term(1, BigRational::one())
        );
        // Γ(-1/2) = -2√π
        assert_eq!(
            gamma_exact(&rat_i64(-1, 2)).unwrap(),
            SqrtPiRat::sqrt_pi_term(1, rat_int(-2))
        );
        // Γ(5/2) = 3√π/4
        assert_eq!(
            gamma_exact(&rat_i64(5, 2)).unwrap(),
            SqrtPiRat::sqrt_pi_term(1, rat_i64(3, 4))
        );
        assert!(gamma_exact(&rat_int(0)).is_none());
        assert!(gamma_exact(&rat_i64(1, 3)).is_none());
    }

    #[test]
    fn reciprocal_gamma_and_derivative() {
        assert!(one_over_gamma_exact(&rat_int(-3)).unwrap().is_zero());
        let inv = one_over_gamma_exact(&rat_i64(1, 2)).unwrap(); // 1/√π
        assert_eq!(inv, SqrtPiRat::sqrt_pi_term(-1, BigRational::one()));
        // (1/Γ)'(-2) = 2
        assert_eq!(
            one_over_gamma_deriv_exact(1, &rat_int(-2)).unwrap(),
            SqrtPiRat::from_int(2)
        );
        // (1/Γ)'(-3) = -6
        assert_eq!(
            one_over_gamma_deriv_exact(1, &rat_int(-3)).unwrap(),
            SqrtPiRat::from_int(-6)
        );
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic_rat(0), BigRational::zero());
        assert_eq!(harmonic_rat(1), rat_int(1));
        assert_eq!(harmonic_rat(3), rat_i64(11, 6));
    }

    #[test]
    fn f64_round_trips_exactly() {
        let r = rat_from_f64(0.1).unwrap();
        assert_eq!(rat_to_f64(&r), 0.1);
        assert_ne!(r, rat_i64(1, 10)); // 0.1 is not 1/10 in binary
    }
}
