//! Rational interval arithmetic with certified logarithms.
//!
//! Intervals carry exact rational endpoints. They are how exact data
//! (p-powers, big rationals, algebraic numbers) turns into real-valued
//! reports without losing the error accounting.

use crate::exact::{rat_to_f64, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        (rat_to_f64(&self.lo) + rat_to_f64(&self.hi)) / 2.0
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            Self::new(&self.hi * c, &self.lo * c)
        } else {
            Self::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Reciprocal; requires the interval to exclude zero.
    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "interval straddles zero"
        );
        Self::new(Rat::one() / &self.hi, Rat::one() / &self.lo)
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Self::new(Rat::zero(), self.lo.abs().max(self.hi.abs()))
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::point(Rat::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Definitely positive / negative; None when the interval straddles 0.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// True when this interval lies entirely strictly below the other.
    pub fn strictly_below(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    /// Round the endpoints outward to denominators 2^bits, bounding the
    /// coefficient blow-up of long interval computations.
    pub fn coarsen(&self, bits: u32) -> Self {
        Self::new(round_dir(&self.lo, bits, false), round_dir(&self.hi, bits, true))
    }
}

fn round_dir(x: &Rat, bits: u32, up: bool) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    let fl = scaled.floor();
    let out = if up && fl != scaled {
        fl + Rat::one()
    } else {
        fl
    };
    out / Rat::from_integer(scale)
}

/// Certified natural log of a positive rational: returns an interval of
/// width about 2^-bits containing ln(q).
pub fn ln_interval(q: &Rat, bits: u32) -> RatInterval {
    assert!(q.is_positive(), "log of nonpositive value");
    if q.is_one() {
        return RatInterval::zero();
    }
    // Range-reduce q = 2^e * m with m in [1, 2).
    let mut e: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = Rat::from_integer(BigInt::from(2));
    let mut m = shift_pow2(q, -e);
    while m >= two {
        m = &m / &two;
        e += 1;
    }
    while m < Rat::one() {
        m = &m * &two;
        e -= 1;
    }
    let ln_m = atanh_series(&m, bits + 2);
    let ln2 = if e == 0 {
        RatInterval::zero()
    } else {
        atanh_series(&two, bits + 2).scale(&Rat::from_integer(BigInt::from(e)))
    };
    ln_m.add(&ln2).coarsen(bits)
}

fn shift_pow2(q: &Rat, e: i64) -> Rat {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        q * Rat::from_integer(p)
    } else {
        q / Rat::from_integer(p)
    }
}

/// ln m = 2 atanh((m-1)/(m+1)) by the odd series, with an explicit geometric
/// tail bound. Valid for m in [1, 2].
fn atanh_series(m: &Rat, bits: u32) -> RatInterval {
    let x = (m - Rat::one()) / (m + Rat::one());
    if x.is_zero() {
        return RatInterval::zero();
    }
    let x2 = &x * &x;
    let tol = Rat::new(BigInt::one(), BigInt::one() << bits);
    let mut term = x.clone(); // x^(2j+1)
    let mut sum = Rat::zero();
    let mut j: u64 = 0;
    loop {
        sum += &term / Rat::from_integer(BigInt::from(2 * j + 1));
        term *= &x2;
        j += 1;
        // tail <= term/(2j+1) * 1/(1-x^2)
        let tail = (&term / Rat::from_integer(BigInt::from(2 * j + 1)))
            / (Rat::one() - &x2);
        if tail < tol {
            let two = Rat::from_integer(BigInt::from(2));
            let lo = &two * &sum;
            let hi = &two * (&sum + &tail);
            return RatInterval::new(lo, hi).coarsen(bits);
        }
        // Keep the working denominators bounded.
        if j % 8 == 0 {
            term = round_dir(&term, 4 * bits, true);
        }
    }
}

/// Certified ln of a rational interval (all values positive).
pub fn ln_of_interval(v: &RatInterval, bits: u32) -> RatInterval {
    assert!(v.lo.is_positive(), "log of interval touching zero");
    let lo = ln_interval(&v.lo, bits).lo;
    let hi = ln_interval(&v.hi, bits).hi;
    RatInterval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn ln_basic() {
        let l2 = ln_interval(&rat_int(2), 60);
        assert!(l2.contains(&rat(693147180559945309, 1000000000000000000)));
        assert!(l2.width() < rat(1, 1 << 50));
        let le = ln_interval(&rat(1, 3), 50);
        assert!(rat_to_f64(&le.lo) < -1.0986 && rat_to_f64(&le.hi) > -1.0987);
    }

    #[test]
    fn ln_additivity_certified() {
        let a = rat(7, 5);
        let b = rat(15, 4);
        let lhs = ln_interval(&(&a * &b), 70);
        let rhs = ln_interval(&a, 70).add(&ln_interval(&b, 70));
        // the two intervals must overlap
        assert!(lhs.lo <= rhs.hi && rhs.lo <= lhs.hi);
    }

    #[test]
    fn ln_huge_value() {
        use num_bigint::BigInt;
        let big = Rat::from_integer(BigInt::from(3).pow(2000));
        let l = ln_interval(&big, 40);
        let expect = 2000.0 * 3.0_f64.ln();
        assert!((l.mid_f64() - expect).abs() < 1e-6);
    }

    #[test]
    fn interval_mul_signs() {
        let a = RatInterval::new(rat_int(-2), rat_int(3));
        let b = RatInterval::new(rat_int(-1), rat_int(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat_int(-8));
        assert_eq!(p.hi, rat_int(12));
    }
}
