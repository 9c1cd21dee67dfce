//! Low-level numeric helpers: compensated and double-double accumulation,
//! precision selection, and finite-difference stencils.

use num_complex::Complex64;

/// Working precision for the accumulation-heavy kernels.
///
/// `Double` uses Neumaier-compensated f64 sums. `Extended` accumulates in
/// double-double arithmetic (~32 significant digits), which gives the
/// headroom needed when regularization subtractions cancel many digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

/// Double-double number: value is `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd::from(x))
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Neumaier (improved Kahan) accumulator for f64.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Real accumulator switching between compensated f64 and double-double.
#[derive(Debug, Clone, Copy)]
pub enum RealAccumulator {
    Double(Neumaier),
    Extended(Dd),
}

impl RealAccumulator {
    pub fn new(precision: Precision) -> Self {
        match precision {
            Precision::Double => RealAccumulator::Double(Neumaier::new()),
            Precision::Extended => RealAccumulator::Extended(Dd::default()),
        }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        match self {
            RealAccumulator::Double(n) => n.add(value),
            RealAccumulator::Extended(d) => *d = d.add_f64(value),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            RealAccumulator::Double(n) => n.value(),
            RealAccumulator::Extended(d) => d.value(),
        }
    }
}

/// Complex accumulator built from two real ones.
#[derive(Debug, Clone, Copy)]
pub struct ComplexAccumulator {
    re: RealAccumulator,
    im: RealAccumulator,
}

impl ComplexAccumulator {
    pub fn new(precision: Precision) -> Self {
        ComplexAccumulator {
            re: RealAccumulator::new(precision),
            im: RealAccumulator::new(precision),
        }
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Central difference of order `order` (1..=4) with one Richardson level.
///
/// `f` is sampled at `x0 + j*h` for the usual symmetric stencils; the h and
/// h/2 estimates are combined to cancel the leading h^2 error term.
pub fn central_derivative<F: Fn(f64) -> Complex64>(
    f: &F,
    x0: f64,
    order: u32,
    h: f64,
) -> Complex64 {
    let d = |h: f64| -> Complex64 {
        let at = |j: i32| f(x0 + j as f64 * h);
        match order {
            1 => (at(1) - at(-1)) / (2.0 * h),
            2 => (at(1) - at(0) * 2.0 + at(-1)) / (h * h),
            3 => (at(2) - at(1) * 2.0 + at(-1) * 2.0 - at(-2)) / (2.0 * h.powi(3)),
            4 => (at(2) - at(1) * 4.0 + at(0) * 6.0 - at(-1) * 4.0 + at(-2)) / h.powi(4),
            _ => panic!("central_derivative supports orders 1..=4"),
        }
    };
    let coarse = d(h);
    let fine = d(h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// Richardson extrapolation of central first differences over a step ladder.
///
/// `steps` must be strictly decreasing by a factor of 2 between neighbours.
pub fn richardson_derivative<F: Fn(f64) -> Complex64>(f: &F, x0: f64, steps: &[f64]) -> Complex64 {
    assert!(!steps.is_empty());
    let mut column: Vec<Complex64> = steps
        .iter()
        .map(|&h| (f(x0 + h) - f(x0 - h)) / (2.0 * h))
        .collect();
    let mut factor = 4.0;
    while column.len() > 1 {
        let mut next = Vec::with_capacity(column.len() - 1);
        for i in 0..column.len() - 1 {
            next.push((column[i + 1] * factor - column[i]) / (factor - 1.0));
        }
        column = next;
        factor *= 4.0;
    }
    column[0]
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut acc = Neumaier::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn dd_sums_harmonic_tail() {
        // Sum 1/k^2 forwards; double-double should match the Neumaier result
        // to well below 1e-16 relative.
        let mut dd = Dd::default();
        let mut kn = Neumaier::new();
        for k in 1..200_000u64 {
            let term = 1.0 / (k as f64 * k as f64);
            dd = dd.add_f64(term);
            kn.add(term);
        }
        assert!((dd.value() - kn.value()).abs() < 1e-15);
    }

    #[test]
    fn central_difference_matches_exp() {
        let f = |x: f64| Complex64::new(x.exp(), 0.0);
        for order in 1..=4 {
            let d = central_derivative(&f, 0.3, order, 0.05);
            assert!((d.re - 0.3f64.exp()).abs() < 1e-7, "order {order}: {d}");
        }
    }

    #[test]
    fn richardson_first_derivative() {
        let f = |x: f64| Complex64::new((2.0 * x).sin(), 0.0);
        let d = richardson_derivative(&f, 0.1, &[1e-2, 5e-3, 2.5e-3]);
        assert!((d.re - 2.0 * (0.2f64).cos()).abs() < 1e-11);
    }
}
