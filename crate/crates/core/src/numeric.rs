//! Error-free transformations for period differences.
//!
//! The clock effect is a tiny difference of two nearly equal periods. At
//! Earth scale T+ and T- agree to eleven digits, so subtracting two rounded
//! `f64` periods would leave only five correct digits in the difference.
//! Each route therefore carries the reciprocal frequencies as unevaluated
//! `hi + lo` sums and forms the difference from those.

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compensated {
    pub hi: f64,
    pub lo: f64,
}

/// Knuth's two-sum: `a + b == s + e` exactly.
pub fn two_sum(a: f64, b: f64) -> Compensated {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    Compensated { hi: s, lo: e }
}

/// `a * b == p + e` exactly (barring underflow), via fused multiply-add.
pub fn two_prod(a: f64, b: f64) -> Compensated {
    let p = a * b;
    let e = a.mul_add(b, -p);
    Compensated { hi: p, lo: e }
}

impl Compensated {
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn negated(self) -> Self {
        Compensated {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            self.negated()
        } else {
            self
        }
    }

    pub fn scale(self, k: f64) -> Self {
        let p = two_prod(self.hi, k);
        let lo = p.lo + self.lo * k;
        two_sum(p.hi, lo)
    }

    /// `self - other`, accurate when the two are close.
    pub fn diff(self, other: Compensated) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}
