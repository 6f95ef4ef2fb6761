//! Exact arithmetic in Q(lambda) for a real algebraic lambda given by its
//! (monic, irreducible) minimal polynomial and an isolating interval.
//!
//! Zero-testing is syntactic (the field has no zero divisors), so every sign
//! query on a nonzero element terminates by refining the isolating interval.
//! Refinement is memoized behind a mutex; values are otherwise immutable.

use crate::exact::Rat;
use crate::interval::RatInterval;
use crate::zpoly::{QPoly, ZPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::{Arc, Mutex};

/// Hard cap on isolating-interval width during sign certification.
const REFINE_CAP_BITS: u32 = 600;

#[derive(Debug)]
pub struct NumberField {
    pub minpoly: ZPoly,
    iso: Mutex<(Rat, Rat)>,
}

impl NumberField {
    /// `minpoly` must be monic and irreducible with a sign change on the
    /// isolating interval, which must contain exactly one real root.
    pub fn new(minpoly: ZPoly, lo: Rat, hi: Rat) -> Arc<Self> {
        assert!(minpoly.is_monic());
        if minpoly.degree() > 1 {
            let vl = minpoly.eval_rat(&lo);
            let vh = minpoly.eval_rat(&hi);
            assert!(
                !vl.is_zero() && !vh.is_zero() && vl.is_positive() != vh.is_positive(),
                "isolating interval must produce a sign change"
            );
        }
        Arc::new(NumberField { minpoly, iso: Mutex::new((lo, hi)) })
    }

    /// The rational field Q, presented as Q(d) with minimal polynomial x - d.
    pub fn rational(d: Rat) -> Arc<Self> {
        let denom = d.denom().clone();
        // monic over Q: store x - d scaled to integer coeffs only when integral;
        // otherwise keep the degree-1 minimal polynomial of the rational as
        // denom*x - numer, normalized monic in QPoly form when used.
        if denom.is_one() {
            let mp = ZPoly::new(vec![-d.numer().clone(), BigInt::one()]);
            let lo = &d - Rat::one();
            let hi = &d + Rat::one();
            Arc::new(NumberField { minpoly: mp, iso: Mutex::new((lo, hi)) })
        } else {
            // represent in Q(x)/(x - d) with non-integer d via the monic
            // rational minimal polynomial; keep an integer proxy for Sturm-free
            // handling (degree-1 case never needs refinement).
            let mp = ZPoly::new(vec![-d.numer().clone(), denom.clone()]);
            let lo = &d - Rat::one();
            let hi = &d + Rat::one();
            Arc::new(NumberField { minpoly: mp, iso: Mutex::new((lo, hi)) })
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn interval(&self) -> (Rat, Rat) {
        self.iso.lock().unwrap().clone()
    }

    /// Shrink the isolating interval below the requested width.
    pub fn refine_to(&self, width: &Rat) {
        if self.degree() == 1 {
            let root = Rat::new(-self.minpoly.0[0].clone(), self.minpoly.0[1].clone());
            let mut iso = self.iso.lock().unwrap();
            *iso = (root.clone(), root);
            return;
        }
        let mut iso = self.iso.lock().unwrap();
        let (mut lo, mut hi) = iso.clone();
        while &hi - &lo > *width {
            crate::zpoly::refine_root(&self.minpoly, &mut lo, &mut hi);
        }
        *iso = (lo, hi);
    }

    pub fn root_interval(&self, bits: u32) -> RatInterval {
        let w = Rat::new(BigInt::one(), BigInt::one() << bits);
        self.refine_to(&w);
        let (lo, hi) = self.interval();
        RatInterval::new(lo, hi)
    }
}

#[derive(Clone, Debug)]
pub struct AlgNum {
    pub field: Arc<NumberField>,
    pub coeffs: Vec<Rat>, // length < field degree (or 1 for degree-1 fields)
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.field, &o.field));
        self.sub(o).is_zero()
    }
}

impl AlgNum {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        AlgNum { field: field.clone(), coeffs: vec![] }
    }

    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> Self {
        let mut out = Self::zero(field);
        if !r.is_zero() {
            out.coeffs = vec![r];
        }
        out
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    /// The generator lambda itself.
    pub fn gen(field: &Arc<NumberField>) -> Self {
        if field.degree() == 1 {
            let root = Rat::new(-field.minpoly.0[0].clone(), field.minpoly.0[1].clone());
            return Self::from_rat(field, root);
        }
        AlgNum { field: field.clone(), coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    fn from_qpoly(field: &Arc<NumberField>, p: QPoly) -> Self {
        let modp = field_minpoly_q(field);
        let (_, r) = p.div_rem(&modp);
        AlgNum { field: field.clone(), coeffs: r.0 }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_qpoly(&self.field, self.as_qpoly().add(&o.as_qpoly()))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_qpoly(&self.field, self.as_qpoly().sub(&o.as_qpoly()))
    }

    pub fn neg(&self) -> Self {
        AlgNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_qpoly(&self.field, self.as_qpoly().mul(&o.as_qpoly()))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        AlgNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in number field");
        let modp = field_minpoly_q(&self.field);
        let (g, s, _) = self.as_qpoly().xgcd(&modp);
        assert!(
            !g.is_zero() && g.degree() == 0,
            "minimal polynomial is reducible (xgcd found a factor)"
        );
        Self::from_qpoly(&self.field, s)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Certified sign: Some(-1|0|1), or None if the refinement cap was hit
    /// (cannot happen for honestly nonzero elements at desk scale).
    pub fn try_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        let mut bits = 32u32;
        loop {
            let iv = self.interval(bits);
            if let Some(s) = iv.sign() {
                return Some(s);
            }
            if bits >= REFINE_CAP_BITS {
                return None;
            }
            bits *= 2;
        }
    }

    pub fn sign(&self) -> i8 {
        self.try_sign().expect("sign certification exceeded refinement cap")
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    /// Enclosing interval at roughly the requested precision.
    pub fn interval(&self, bits: u32) -> RatInterval {
        if self.is_zero() {
            return RatInterval::zero();
        }
        let lam = self.field.root_interval(bits);
        let mut acc = RatInterval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lam).add(&RatInterval::point(c.clone()));
        }
        acc.coarsen(bits + 16)
    }

    pub fn to_f64(&self) -> f64 {
        self.interval(64).mid_f64()
    }

    pub fn cmp_certified(&self, o: &Self) -> std::cmp::Ordering {
        match self.sub(o).sign() {
            -1 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }
}

fn field_minpoly_q(field: &Arc<NumberField>) -> QPoly {
    field.minpoly.to_qpoly().monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn golden_field() -> Arc<NumberField> {
        NumberField::new(ZPoly::from_i64(&[-1, -1, 1]), rat_int(1), rat_int(2))
    }

    #[test]
    fn golden_ratio_identities() {
        let f = golden_field();
        let phi = AlgNum::gen(&f);
        // phi^2 = phi + 1
        assert_eq!(phi.pow(2), phi.add(&AlgNum::one(&f)));
        // 1/phi = phi - 1
        assert_eq!(phi.inv(), phi.sub(&AlgNum::one(&f)));
        assert_eq!(phi.sign(), 1);
        assert_eq!(phi.sub(&AlgNum::from_rat(&f, rat_int(2))).sign(), -1);
        let iv = phi.interval(80);
        assert!(iv.width() < rat(1, 1 << 60));
    }

    #[test]
    fn rational_field_degenerates() {
        let f = NumberField::rational(rat(7, 2));
        let d = AlgNum::gen(&f);
        assert_eq!(d.mul(&d), AlgNum::from_rat(&f, rat(49, 4)));
        assert_eq!(d.sign(), 1);
    }

    #[test]
    fn tight_sign_certification() {
        let f = golden_field();
        let phi = AlgNum::gen(&f);
        // phi^2 - phi - 1 + 2^-90: a tiny but nonzero value
        let eps = AlgNum::from_rat(&f, Rat::new(BigInt::one(), BigInt::one() << 90));
        let val = phi.pow(2).sub(&phi).sub(&AlgNum::one(&f)).add(&eps);
        assert_eq!(val.sign(), 1);
    }
}
