use serde::Serialize;

/// A series value together with the number of terms used and a bound on
/// the truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub tau_used: usize,
    pub error_bound: f64,
    pub converged: bool,
}

impl SeriesEvaluation {
    pub(crate) fn exact(value: f64) -> Self {
        SeriesEvaluation {
            value,
            tau_used: 0,
            error_bound: 0.0,
            converged: true,
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// `1 - value()` evaluated without first rounding the sum.
    #[inline]
    pub fn one_minus(&self) -> f64 {
        (1.0 - self.sum) - self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Unevaluated sum hi + lo of two doubles, about 106 bits of precision.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    DoubleDouble {
        hi: s,
        lo: b - (s - a),
    }
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    /// Exact product of two doubles.
    #[inline]
    pub fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        DoubleDouble {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn add(self, o: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn neg(self) -> DoubleDouble {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn sub(self, o: DoubleDouble) -> DoubleDouble {
        self + (-o)
    }
}

impl std::ops::Mul<f64> for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn mul(self, b: f64) -> DoubleDouble {
        let p = DoubleDouble::product(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn mul(self, o: DoubleDouble) -> DoubleDouble {
        let p = DoubleDouble::product(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl std::ops::Div<f64> for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn div(self, b: f64) -> DoubleDouble {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::product(q1, b);
        let q2 = r.hi / b;
        quick_two_sum(q1, q2)
    }
}
