//! Exact arithmetic and calculus on formal asymptotic expansions with terms
//! c · x^α · log^k x, either as x → 0+ or as x → ∞: sums, Cauchy products,
//! regularized limits, the vanishing rule for regularized integrals of pure
//! terms, the dilation correction, and the symbolic pole data of Mellin
//! transforms.
//!
//! Term keys (α, k) are compared exactly: exponents are stored with rational
//! real and imaginary parts (every f64 promotes losslessly), so merging can
//! never corrupt pole orders. Coefficients carry an f64 value plus, where the
//! provenance allows it, an exact representative in Q[√π].

use crate::error::{Error, Result};
use crate::exact::{rat_from_f64, rat_to_f64, ExactC};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtZero,
    AtInfinity,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::AtZero => "at_zero",
            Direction::AtInfinity => "at_infinity",
        }
    }
}

/// Complex exponent with exactly ordered rational components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exponent {
    re: BigRational,
    im: BigRational,
}

impl Exponent {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Exponent { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Exponent {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(crate::exact::rat_int(n))
    }

    pub fn from_f64(re: f64) -> Self {
        Self::from_rational(rat_from_f64(re).expect("finite exponent"))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Exponent {
            re: rat_from_f64(z.re).expect("finite exponent"),
            im: rat_from_f64(z.im).expect("finite exponent"),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn re_f64(&self) -> f64 {
        rat_to_f64(&self.re)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn neg(&self) -> Exponent {
        Exponent {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Some(n) if the exponent is the real integer -n with n ≥ 0.
    pub fn as_nonpositive_integer(&self) -> Option<u32> {
        use num_traits::{Signed, ToPrimitive};
        if !self.im.is_zero() || !self.re.is_integer() || self.re.is_positive() {
            return None;
        }
        (-self.re.to_integer()).to_u32()
    }
}

/// Expansion coefficient: f64 value plus optional exact representative.
/// Arithmetic keeps the exact part alive whenever both operands carry one.
#[derive(Debug, Clone)]
pub struct Coeff {
    num: Complex64,
    exact: Option<ExactC>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            num: Complex64::ZERO,
            exact: Some(ExactC::zero()),
        }
    }

    /// Numeric-only coefficient (no exactness claim).
    pub fn from_complex(c: Complex64) -> Self {
        Coeff {
            num: c,
            exact: None,
        }
    }

    pub fn from_exact(e: ExactC) -> Self {
        Coeff {
            num: e.to_complex(),
            exact: Some(e),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_exact(ExactC::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(crate::exact::rat_int(n))
    }

    /// Promote a float pair to its exact binary-rational value.
    pub fn from_f64_promoted(re: f64, im: f64) -> Self {
        match ExactC::from_f64_pair(re, im) {
            Some(e) => Self::from_exact(e),
            None => Self::from_complex(Complex64::new(re, im)),
        }
    }

    pub fn value(&self) -> Complex64 {
        self.num
    }

    pub fn exact(&self) -> Option<&ExactC> {
        self.exact.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.is_zero(),
            None => self.num == Complex64::ZERO,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Coeff::from_exact(a.add(b)),
            _ => Coeff::from_complex(self.num + other.num),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Coeff::from_exact(a.mul(b)),
            _ => Coeff::from_complex(self.num * other.num),
        }
    }

    pub fn neg(&self) -> Coeff {
        match &self.exact {
            Some(e) => Coeff::from_exact(e.neg()),
            None => Coeff::from_complex(-self.num),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Coeff {
        match &self.exact {
            Some(e) => Coeff::from_exact(e.scale(q)),
            None => Coeff::from_complex(self.num * rat_to_f64(q)),
        }
    }

    /// Multiply by a numeric factor; the exact track is dropped.
    pub fn scale_complex(&self, c: Complex64) -> Coeff {
        Coeff::from_complex(self.num * c)
    }
}

pub type TermKey = (Exponent, u32);

/// A finite collection of terms c·x^α·log^k x with a direction and a cutoff.
///
/// For `AtZero` the expansion is complete for Re α ≤ cutoff; for
/// `AtInfinity` it is complete for Re α ≥ -cutoff. A cutoff of +∞ means the
/// remainder beyond the stored terms is smaller than any power.
#[derive(Debug, Clone)]
pub struct AsymptoticExpansion {
    direction: Direction,
    cutoff: f64,
    terms: BTreeMap<TermKey, Coeff>,
}

impl AsymptoticExpansion {
    pub fn new(direction: Direction, cutoff: f64) -> Self {
        AsymptoticExpansion {
            direction,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn set_cutoff(&mut self, cutoff: f64) {
        self.cutoff = cutoff;
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Exponent, k: u32) -> Coeff {
        self.terms
            .get(&(alpha.clone(), k))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Add `coeff` onto the (α, k) term, dropping it if the result is zero.
    pub fn accumulate(&mut self, alpha: Exponent, k: u32, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let key = (alpha, k);
        let merged = match self.terms.get(&key) {
            Some(existing) => existing.add(&coeff),
            None => coeff,
        };
        if merged.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, merged);
        }
    }

    pub fn with_term(mut self, alpha: Exponent, k: u32, coeff: Coeff) -> Self {
        self.accumulate(alpha, k, coeff);
        self
    }

    pub fn min_re_alpha(&self) -> Option<f64> {
        self.terms
            .keys()
            .map(|(a, _)| a.re_f64())
            .fold(None, |m, x| Some(m.map_or(x, |m: f64| m.min(x))))
    }

    pub fn max_re_alpha(&self) -> Option<f64> {
        self.terms
            .keys()
            .map(|(a, _)| a.re_f64())
            .fold(None, |m, x| Some(m.map_or(x, |m: f64| m.max(x))))
    }

    fn check_direction(&self, other: &Self) -> Result<()> {
        if self.direction != other.direction {
            return Err(Error::DirectionMismatch {
                expected: self.direction.name(),
                got: other.direction.name(),
            });
        }
        Ok(())
    }

    /// Termwise sum; cutoff is the weaker (smaller) of the two.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_direction(other)?;
        let mut out = AsymptoticExpansion::new(self.direction, self.cutoff.min(other.cutoff));
        for ((a, k), c) in &self.terms {
            out.accumulate(a.clone(), *k, c.clone());
        }
        for ((a, k), c) in &other.terms {
            out.accumulate(a.clone(), *k, c.clone());
        }
        Ok(out)
    }

    /// Cauchy product of terms: (α₁,k₁,c₁)·(α₂,k₂,c₂) → (α₁+α₂, k₁+k₂, c₁c₂).
    ///
    /// The product is complete up to the order at which the first omitted
    /// term of one factor, multiplied by the leading term of the other,
    /// could contribute.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_direction(other)?;
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(AsymptoticExpansion::new(self.direction, f64::INFINITY));
        }
        let cutoff = match self.direction {
            Direction::AtZero => {
                let m1 = self.min_re_alpha().unwrap();
                let m2 = other.min_re_alpha().unwrap();
                (self.cutoff + m2).min(other.cutoff + m1)
            }
            Direction::AtInfinity => {
                let m1 = self.max_re_alpha().unwrap();
                let m2 = other.max_re_alpha().unwrap();
                (self.cutoff - m2).min(other.cutoff - m1)
            }
        };
        let mut out = AsymptoticExpansion::new(self.direction, cutoff);
        for ((a1, k1), c1) in &self.terms {
            for ((a2, k2), c2) in &other.terms {
                out.accumulate(a1.add(a2), k1 + k2, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// Coefficient of x^0 log^0 x — the regularized limit LIM.
    pub fn regularized_limit(&self) -> Result<Complex64> {
        if self.cutoff < 0.0 {
            return Err(Error::InsufficientExpansion {
                cutoff: self.cutoff,
                required: 0.0,
            });
        }
        Ok(self.coeff(&Exponent::from_int(0), 0).value())
    }

    /// Evaluate the partial sum over terms with Re α ≤ max_re (AtZero) or
    /// Re α ≥ -max_re (AtInfinity), at x > 0.
    pub fn eval_partial(&self, x: f64, max_re: f64) -> Complex64 {
        let lx = x.ln();
        let mut acc = Complex64::ZERO;
        for ((a, k), c) in &self.terms {
            let re = a.re_f64();
            let keep = match self.direction {
                Direction::AtZero => re <= max_re + 1e-12,
                Direction::AtInfinity => re >= -max_re - 1e-12,
            };
            if keep {
                let xa = Complex64::new(x, 0.0).powc(a.to_complex());
                acc += c.value() * xa * lx.powi(*k as i32);
            }
        }
        acc
    }

    pub fn eval_all(&self, x: f64) -> Complex64 {
        self.eval_partial(x, f64::INFINITY)
    }

    /// Restrict to terms with Re α ≤ max_re (AtZero view); cutoff capped.
    pub fn truncate(&self, max_re: f64) -> Self {
        let mut out = AsymptoticExpansion::new(self.direction, self.cutoff.min(max_re));
        for ((a, k), c) in &self.terms {
            if a.re_f64() <= max_re + 1e-12 {
                out.accumulate(a.clone(), *k, c.clone());
            }
        }
        out
    }

    /// The expansion of x ↦ f(λx) given the expansion of f, for λ > 0:
    /// c·(λx)^α log^k(λx) = Σ_j C(k,j) c λ^α log^{k-j} λ · x^α log^j x.
    pub fn dilate(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0, "dilate requires λ > 0");
        let ll = lambda.ln();
        let mut out = AsymptoticExpansion::new(self.direction, self.cutoff);
        for ((a, k), c) in &self.terms {
            let la = Complex64::new(lambda, 0.0).powc(a.to_complex());
            for j in 0..=*k {
                let factor = crate::special::binomial(*k, j) * la * ll.powi((*k - j) as i32);
                out.accumulate(a.clone(), j, c.scale_complex(factor));
            }
        }
        out
    }

    /// Exact comparison of term maps; both sides must carry exact
    /// coefficients everywhere.
    pub fn exact_eq(&self, other: &Self) -> bool {
        if self.direction != other.direction || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(other.terms.iter())
            .all(|((k1, c1), (k2, c2))| {
                k1 == k2
                    && match (c1.exact(), c2.exact()) {
                        (Some(a), Some(b)) => a == b,
                        _ => panic!("exact_eq on non-exact coefficients"),
                    }
            })
    }
}

/// ⨍_0^∞ x^α log^k x dx = 0 for every α ∈ C, k ∈ Z_+.
pub fn regint_term(_alpha: Complex64, _k: u32) -> Complex64 {
    Complex64::ZERO
}

/// Correction term of the dilation law
/// λ ⨍ f(λu) du = ⨍ f dx + Σ_k (a^∞_{-1,k} - a^0_{-1,k}) log^{k+1} λ / (k+1).
pub fn dilation_correction(
    at_zero: &AsymptoticExpansion,
    at_infinity: &AsymptoticExpansion,
    lambda: f64,
) -> Result<Complex64> {
    if lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "dilation_correction requires λ > 0, got {lambda}"
        )));
    }
    if at_zero.direction() != Direction::AtZero {
        return Err(Error::DirectionMismatch {
            expected: "at_zero",
            got: at_zero.direction().name(),
        });
    }
    if at_infinity.direction() != Direction::AtInfinity {
        return Err(Error::DirectionMismatch {
            expected: "at_infinity",
            got: at_infinity.direction().name(),
        });
    }
    let minus_one = Exponent::from_int(-1);
    let ll = lambda.ln();
    let mut acc = Complex64::ZERO;
    let kmax = at_zero
        .terms()
        .chain(at_infinity.terms())
        .filter(|((a, _), _)| *a == minus_one)
        .map(|((_, k), _)| *k)
        .max();
    if let Some(kmax) = kmax {
        for k in 0..=kmax {
            let diff =
                at_infinity.coeff(&minus_one, k).value() - at_zero.coeff(&minus_one, k).value();
            acc += diff * ll.powi(k as i32 + 1) / (k as f64 + 1.0);
        }
    }
    Ok(acc)
}

/// Principal part + finite part of a meromorphic function at a point:
/// `coeffs[m]` is the coefficient of (z - location)^{-m}; the m = 0 entry is
/// the finite part Pf.
#[derive(Debug, Clone, Default)]
pub struct LaurentData {
    pub location: Complex64,
    pub coeffs: BTreeMap<i32, Complex64>,
}

impl LaurentData {
    pub fn residue(&self) -> Complex64 {
        self.coeffs.get(&1).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn finite_part(&self) -> Complex64 {
        self.coeffs.get(&0).copied().unwrap_or(Complex64::ZERO)
    }

    /// Largest m ≥ 1 with a nonzero (z-a)^{-m} coefficient; 0 if regular.
    pub fn pole_order(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|(&m, c)| m >= 1 && c.norm() > 0.0)
            .map(|(&m, _)| m as u32)
            .max()
            .unwrap_or(0)
    }
}

/// Symbolic pole structure of the Mellin transform ⨍ t^{s-1} f(t) dt at `s`,
/// for f with the given t → 0 expansion and rapid decay at ∞: a term
/// a·t^α log^k t contributes (-1)^k k! a/(s + α)^{k+1}.
///
/// Only the principal part is symbolically determined; the finite part
/// depends on f away from 0 and is left absent.
pub fn mellin_pf(e: &AsymptoticExpansion, s: Complex64) -> Result<LaurentData> {
    if e.direction() != Direction::AtZero {
        return Err(Error::DirectionMismatch {
            expected: "at_zero",
            got: e.direction().name(),
        });
    }
    if e.cutoff() < -s.re {
        return Err(Error::InsufficientExpansion {
            cutoff: e.cutoff(),
            required: -s.re,
        });
    }
    let mut data = LaurentData {
        location: s,
        coeffs: BTreeMap::new(),
    };
    for ((a, k), c) in e.terms() {
        if (a.to_complex() + s).norm() < 1e-9 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = sign * crate::special::factorial(*k) * c.value();
            *data.coeffs.entry(*k as i32 + 1).or_insert(Complex64::ZERO) += coeff;
        }
    }
    Ok(data)
}

// --- serde ---------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermDe {
    re_alpha: f64,
    #[serde(default)]
    im_alpha: f64,
    k: u32,
    re_c: f64,
    #[serde(default)]
    im_c: f64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionDe {
    direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<f64>,
    terms: Vec<TermDe>,
}

impl Serialize for AsymptoticExpansion {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let de = ExpansionDe {
            direction: self.direction,
            cutoff: if self.cutoff.is_finite() {
                Some(self.cutoff)
            } else {
                None
            },
            terms: self
                .terms
                .iter()
                .map(|((a, k), c)| {
                    let ac = a.to_complex();
                    TermDe {
                        re_alpha: ac.re,
                        im_alpha: ac.im,
                        k: *k,
                        re_c: c.value().re,
                        im_c: c.value().im,
                    }
                })
                .collect(),
        };
        de.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AsymptoticExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let de = ExpansionDe::deserialize(deserializer)?;
        let mut out = AsymptoticExpansion::new(de.direction, de.cutoff.unwrap_or(f64::INFINITY));
        for t in de.terms {
            out.accumulate(
                Exponent::new(
                    rat_from_f64(t.re_alpha)
                        .ok_or_else(|| serde::de::Error::custom("non-finite exponent"))?,
                    rat_from_f64(t.im_alpha)
                        .ok_or_else(|| serde::de::Error::custom("non-finite exponent"))?,
                ),
                t.k,
                Coeff::from_f64_promoted(t.re_c, t.im_c),
            );
        }
        Ok(out)
    }
}
