//! Minimal double-double (~31 significant digits) arithmetic.
//!
//! Used by the modified Bessel K power series, whose two halves cancel to
//! about `e^{2t}` relative magnitude near the series/asymptotic crossover;
//! plain f64 accumulation would lose all significance there. Only the
//! operations the series needs are implemented.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

/// Euler-Mascheroni constant.
pub(crate) const EULER_GAMMA: Dd = Dd {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// Full-accuracy addition (Dekker), safe under cancellation.
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }

    /// Division with two Newton correction steps.
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn div_f64(self, x: f64) -> Dd {
        self.div(Dd::from_f64(x))
    }
}

/// Natural log of a positive normal f64 to double-double accuracy.
///
/// Splits `x = m * 2^k` with `m` in `[sqrt(1/2), sqrt(2))`, then sums the
/// atanh series for `ln m` with `u = (m-1)/(m+1)` (`|u| < 0.1716`, so the
/// series gains ~1.5 digits per term).
pub(crate) fn ln_dd(x: f64) -> Dd {
    assert!(x.is_finite() && x > 0.0 && x >= f64::MIN_POSITIVE);
    let bits = x.to_bits();
    let mut k = ((bits >> 52) & 0x7ff) as i32 - 1023;
    let mut m = f64::from_bits((bits & 0x800f_ffff_ffff_ffff) | (1023u64 << 52));
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        k += 1;
    }
    // m - 1 is exact (Sterbenz); m + 1 held as a dd.
    let num = Dd::from_f64(m - 1.0);
    let den = Dd::from_f64(m).add(Dd::from_f64(1.0));
    let u = num.div(den);
    let u2 = u.mul(u);
    let mut term = u;
    let mut sum = u;
    let mut j = 1u32;
    loop {
        term = term.mul(u2);
        let inc = term.div_f64((2 * j + 1) as f64);
        sum = sum.add(inc);
        if inc.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) || j > 60 {
            break;
        }
        j += 1;
    }
    let ln_m = sum.add(sum); // 2 * atanh(u)
    LN2.mul_f64(k as f64).add(ln_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_tiny_tail() {
        let big = Dd::from_f64(1e16);
        let s = big.add(Dd::from_f64(1.0)).sub(big);
        assert_eq!(s.to_f64(), 1.0);
    }

    #[test]
    fn mul_exact_products() {
        let p = Dd::from_f64(3.0).mul(Dd::from_f64(7.0));
        assert_eq!(p.hi, 21.0);
        assert_eq!(p.lo, 0.0);
    }

    #[test]
    fn div_roundtrip() {
        let x = Dd::from_f64(1.0).div_f64(3.0);
        let back = x.mul_f64(3.0);
        assert!((back.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn ln_dd_of_two_matches_constant() {
        let l = ln_dd(2.0);
        assert_eq!(l.hi, LN2.hi);
        assert!((l.lo - LN2.lo).abs() < 1e-32);
    }

    #[test]
    fn ln_dd_is_additive_on_exact_products() {
        // 1.5 * 2.5 = 3.75 exactly in f64
        let lhs = ln_dd(3.75);
        let rhs = ln_dd(1.5).add(ln_dd(2.5));
        let diff = lhs.sub(rhs);
        assert!(diff.to_f64().abs() < 1e-31, "diff = {:e}", diff.to_f64());
    }

    #[test]
    fn ln_dd_one_is_zero() {
        let l = ln_dd(1.0);
        assert_eq!(l.hi, 0.0);
        assert_eq!(l.lo, 0.0);
    }

    #[test]
    fn ln_dd_agrees_with_f64_ln() {
        for &x in &[0.001, 0.37, 0.9999, 1.0001, 5.0, 7.5, 1234.5] {
            let l = ln_dd(x);
            assert!(
                (l.to_f64() - x.ln()).abs() <= 2.0 * f64::EPSILON * x.ln().abs().max(1.0),
                "x = {x}"
            );
        }
    }
}
