//! Univariate polynomials over Z and Q: exact arithmetic, pseudo-division,
//! primitive PRS gcd, Sturm sequences and real-root isolation.

use crate::exact::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn zero() -> Self {
        ZPoly(vec![])
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn x() -> Self {
        ZPoly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![BigInt::from(c)])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.0.len() - 1
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("lead of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lead().is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.0.iter().enumerate() {
            c[i] += x;
        }
        Self::new(c)
    }

    pub fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> Self {
        Self::new(self.0.iter().map(|x| x * s).collect())
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Self::new(self.0.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of self by o: lc(o)^(deg self - deg o + 1) * self = q*o + r.
    pub fn pseudo_rem(&self, o: &Self) -> Self {
        assert!(!o.is_zero());
        let d = o.degree();
        let lc = o.lead().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= d {
            let k = r.degree() - d;
            let coef = r.lead().clone();
            // r = lc*r - coef * x^k * o
            let mut c = vec![BigInt::zero(); r.0.len()];
            for (i, x) in r.0.iter().enumerate() {
                c[i] = x * &lc;
            }
            for (i, x) in o.0.iter().enumerate() {
                c[i + k] -= x * &coef;
            }
            r = Self::new(c);
        }
        r
    }

    /// Exact division; panics if not divisible.
    pub fn divexact(&self, o: &Self) -> Self {
        self.try_divexact(o).expect("inexact polynomial division")
    }

    pub fn try_divexact(&self, o: &Self) -> Option<Self> {
        assert!(!o.is_zero());
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < o.degree() {
            return None;
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.degree() - o.degree() + 1];
        let d = o.degree();
        for k in (0..q.len()).rev() {
            let top = r[k + d].clone();
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(o.lead());
            if !rr.is_zero() {
                return None;
            }
            q[k] = qq.clone();
            for (i, c) in o.0.iter().enumerate() {
                r[k + i] -= c * &qq;
            }
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Primitive-PRS gcd; result is primitive with positive leading coefficient,
    /// scaled by gcd of the contents.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive().mul_scalar(&o.content().gcd(&BigInt::zero())).primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        let cont = self.content().gcd(&o.content());
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive().mul_scalar(&cont)
    }

    /// self / gcd(self, self'): same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero());
        let g = self.gcd(&self.derivative());
        if g.is_zero() || g.degree() == 0 {
            return self.primitive();
        }
        self.divexact(&g).primitive()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.0.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// Cauchy bound: all real roots lie in (-B, B).
    pub fn root_bound(&self) -> Rat {
        assert!(!self.is_zero());
        let lead = Rat::from_integer(self.lead().abs());
        let mut m = Rat::zero();
        for c in &self.0[..self.0.len() - 1] {
            let q = Rat::from_integer(c.abs()) / &lead;
            if q > m {
                m = q;
            }
        }
        m + Rat::one()
    }

    pub fn compose_scale_pow(&self, n: u32) -> Self {
        // p(x^n)
        let mut c = vec![BigInt::zero(); (self.0.len() - 1) * n as usize + 1];
        for (i, x) in self.0.iter().enumerate() {
            c[i * n as usize] = x.clone();
        }
        Self::new(c)
    }
}

/// Rational-coefficient univariate polynomial (ascending, normalized).
#[derive(Clone, PartialEq, Debug)]
pub struct QPoly(pub Vec<Rat>);

impl QPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(vec![])
    }

    pub fn one() -> Self {
        QPoly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.0.len() - 1
    }

    pub fn lead(&self) -> &Rat {
        self.0.last().expect("lead of zero polynomial")
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![Rat::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.0.iter().enumerate() {
            c[i] += x;
        }
        Self::new(c)
    }

    pub fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|x| -x.clone()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.0.iter().map(|x| x * s).collect())
    }

    pub fn monic(&self) -> Self {
        assert!(!self.is_zero());
        let l = self.lead().clone();
        self.scale(&(Rat::one() / l))
    }

    pub fn div_rem(&self, o: &Self) -> (Self, Self) {
        assert!(!o.is_zero());
        if self.is_zero() || self.degree() < o.degree() {
            return (Self::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let d = o.degree();
        let mut q = vec![Rat::zero(); self.degree() - d + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + d].clone();
            if top.is_zero() {
                continue;
            }
            let qq = top / o.lead();
            for (i, c) in o.0.iter().enumerate() {
                r[k + i] -= c * &qq;
            }
            q[k] = qq;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*o = g, g monic or zero.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rat::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
}

/// Sturm chain of a squarefree rational polynomial.
pub struct Sturm {
    chain: Vec<QPoly>,
}

impl Sturm {
    pub fn new(p: &QPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        Sturm { chain }
    }

    fn variations_at(&self, x: &Rat) -> usize {
        let mut signs = Vec::new();
        for p in &self.chain {
            let v = p.eval(x);
            if !v.is_zero() {
                signs.push(v.is_positive());
            }
        }
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        assert!(a <= b);
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Isolate the largest real root of a nonconstant squarefree integer
/// polynomial. Returns None if there is no real root.
pub fn isolate_largest_real_root(p: &ZPoly) -> Option<(Rat, Rat)> {
    let q = p.to_qpoly();
    let sturm = Sturm::new(&q);
    let bound = p.root_bound();
    let total = sturm.count_roots(&-bound.clone(), &bound);
    if total == 0 {
        return None;
    }
    // Bisect from the right until exactly one root remains in (lo, hi].
    let mut lo = -bound.clone();
    let mut hi = bound.clone();
    loop {
        let n = sturm.count_roots(&lo, &hi);
        debug_assert!(n >= 1);
        if n == 1 {
            break;
        }
        let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
        if sturm.count_roots(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Shrink until the endpoints are not roots and p changes sign.
    let two = Rat::from_integer(BigInt::from(2));
    loop {
        if !q.eval(&lo).is_zero() && !q.eval(&hi).is_zero() && q.eval(&lo).is_positive() != q.eval(&hi).is_positive()
        {
            return Some((lo, hi));
        }
        let mid = (&lo + &hi) / &two;
        if q.eval(&mid).is_zero() {
            // rational root: return a point interval around it after nudging
            let w = (&hi - &lo) / Rat::from_integer(BigInt::from(4));
            lo = &mid - &w;
            hi = &mid + &w;
            if q.eval(&lo).is_positive() != q.eval(&hi).is_positive() {
                return Some((lo, hi));
            }
            continue;
        }
        if sturm.count_roots(&mid, &hi) == 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// One bisection refinement step for an isolating interval of `p` (which must
/// change sign on it).
pub fn refine_root(p: &ZPoly, lo: &mut Rat, hi: &mut Rat) {
    let two = Rat::from_integer(BigInt::from(2));
    let mid = (&*lo + &*hi) / &two;
    let vm = p.eval_rat(&mid);
    if vm.is_zero() {
        // exact rational root: collapse to a tiny interval around it
        let w = (&*hi - &*lo) / Rat::from_integer(BigInt::from(1000));
        *lo = &mid - &w;
        *hi = &mid + &w;
        return;
    }
    let vl = p.eval_rat(lo);
    if vl.is_positive() != vm.is_positive() {
        *hi = mid;
    } else {
        *lo = mid;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = ZPoly::from_i64(&[2, -3, 0, 1]);
        let sf = p.squarefree_part();
        // (x-1)(x+2) = x^2 + x - 2
        assert_eq!(sf, ZPoly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn golden_ratio_isolation() {
        // x^2 - x - 1: largest root = golden ratio in (1.6, 1.62)
        let p = ZPoly::from_i64(&[-1, -1, 1]);
        let (mut lo, mut hi) = isolate_largest_real_root(&p).unwrap();
        for _ in 0..60 {
            refine_root(&p, &mut lo, &mut hi);
        }
        assert!(lo > rat(16, 10) && hi < rat(162, 100));
    }

    #[test]
    fn sturm_counts() {
        // x^3 - x = x(x-1)(x+1): 3 real roots
        let p = ZPoly::from_i64(&[0, -1, 0, 1]);
        let s = Sturm::new(&p.to_qpoly());
        assert_eq!(s.count_roots(&rat_int(-2), &rat_int(2)), 3);
        assert_eq!(s.count_roots(&rat(1, 2), &rat_int(2)), 1);
    }

    #[test]
    fn pseudo_rem_consistency() {
        let a = ZPoly::from_i64(&[1, 2, 3, 4, 5]);
        let b = ZPoly::from_i64(&[2, 0, 7]);
        let r = a.pseudo_rem(&b);
        assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b);
        assert_eq!(g.degree(), 0); // coprime
    }

    #[test]
    fn divexact_roundtrip() {
        let a = ZPoly::from_i64(&[1, 1]);
        let b = ZPoly::from_i64(&[-3, 0, 2]);
        let prod = a.mul(&b);
        assert_eq!(prod.divexact(&a), b);
        assert_eq!(prod.divexact(&b), a);
        assert!(prod.try_divexact(&ZPoly::from_i64(&[1, 5])).is_none());
    }

    #[test]
    fn xgcd_inverse() {
        // invert x modulo x^2 - 2: x * (x/2) = x^2/2 = 1 + (x^2-2)/2
        let m = QPoly::new(vec![rat_int(-2), rat_int(0), rat_int(1)]);
        let x = QPoly::new(vec![rat_int(0), rat_int(1)]);
        let (g, s, _) = x.xgcd(&m);
        assert_eq!(g, QPoly::one());
        // s*x = 1 mod m
        let (_, r) = s.mul(&x).div_rem(&m);
        assert_eq!(r, QPoly::one());
    }
}
