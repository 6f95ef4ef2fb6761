//! Places of Q, normalized absolute values, and exact product-formula
//! accounting.
//!
//! Everything here is exact: finite-place norms are integer powers of p kept
//! as rationals, and the archimedean norm of a rational is again a rational.
//! Logarithms only appear at report boundaries (see `interval`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A place of Q: the archimedean absolute value or a p-adic one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Place {
    Arch,
    Finite(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Arch => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{}", p),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("norm of zero undefined")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

impl Place {
    /// Finite place, with the primality of `p` certified deterministically.
    pub fn finite(p: u64) -> Result<Place, ExactError> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below decides primality for
/// all n < 3.3 * 10^24, which covers the full u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = n.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if r.is_zero() {
            v += 1;
            cur = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(a: &Rat, p: u64) -> i64 {
    assert!(!a.is_zero(), "valuation of zero");
    valuation_int(a.numer(), p) - valuation_int(a.denom(), p)
}

/// A local norm value |a|_v, exact in all cases: at a finite place it is an
/// integer power of p, at the archimedean place the usual absolute value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalNorm {
    pub place: Place,
    pub value: Rat,
}

impl LocalNorm {
    pub fn log_f64(&self) -> f64 {
        rat_to_f64(&self.value).ln()
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Scale into f64 range before converting; numerator/denominator can be
    // thousands of bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = bigint_to_f64(&n);
    let df = bigint_to_f64(&d);
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// |a|_v. Finite v: exact p^(-v_p(a)); archimedean: |a| as exact rational.
pub fn abs_v(a: &Rat, v: Place) -> Result<LocalNorm, ExactError> {
    if a.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    let value = match v {
        Place::Arch => a.abs(),
        Place::Finite(p) => pow_rat(p, -valuation(a, p)),
    };
    Ok(LocalNorm { place: v, value })
}

/// p^e as an exact rational, e possibly negative.
pub fn pow_rat(p: u64, e: i64) -> Rat {
    let big = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(big)
    } else {
        Rat::new(BigInt::one(), big)
    }
}

/// The finite set of places where |a|_v != 1.
pub fn support(a: &Rat) -> Result<BTreeSet<Place>, ExactError> {
    if a.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    let mut out = BTreeSet::new();
    if a.abs() != Rat::one() {
        out.insert(Place::Arch);
    }
    for p in prime_factors(a.numer()).into_iter().chain(prime_factors(a.denom())) {
        out.insert(Place::Finite(p));
    }
    Ok(out)
}

/// Prime factors of an integer by trial division. Support computations only
/// meet numbers built from small primes at desk scale; the cursor is capped
/// so pathological inputs fail loudly instead of spinning.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut cur = n.abs();
    if cur <= BigInt::one() {
        return out;
    }
    let mut p: u64 = 2;
    while cur > BigInt::one() {
        if BigInt::from(p).pow(2) > cur {
            // remainder is prime
            let fits: Option<u64> = (&cur).try_into().ok();
            match fits {
                Some(q) => out.push(q),
                None => panic!("prime factor exceeds u64: {}", cur),
            }
            break;
        }
        let pb = BigInt::from(p);
        let (q, r) = cur.div_rem(&pb);
        if r.is_zero() {
            out.push(p);
            cur = q;
            while {
                let (q2, r2) = cur.div_rem(&pb);
                if r2.is_zero() {
                    cur = q2;
                    true
                } else {
                    false
                }
            } {}
        } else {
            p = if p == 2 { 3 } else { p + 2 };
            assert!(p < 1 << 40, "trial division exceeded cap");
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Verifies the product formula for `a` in exact multiplicative form:
/// the product of |a|_v over the support is exactly 1.
pub fn product_formula_check(a: &Rat) -> Result<bool, ExactError> {
    let sup = support(a)?;
    let mut prod = Rat::one();
    for v in sup {
        prod *= abs_v(a, v)?.value;
    }
    Ok(prod == Rat::one())
}

/// max_i |a_i|_v over a nonzero vector of rationals.
pub fn max_norm_vec(a: &[Rat], v: Place) -> Result<LocalNorm, ExactError> {
    let mut best: Option<Rat> = None;
    for x in a {
        if x.is_zero() {
            continue;
        }
        let n = abs_v(x, v)?.value;
        best = Some(match best {
            None => n,
            Some(b) => {
                if n > b {
                    n
                } else {
                    b
                }
            }
        });
    }
    match best {
        Some(value) => Ok(LocalNorm { place: v, value }),
        None => Err(ExactError::ZeroInput),
    }
}

/// max_i |a_i|_v for integer vectors (the common case on primitive
/// coordinates).
pub fn max_norm_ints(a: &[BigInt], v: Place) -> Result<LocalNorm, ExactError> {
    let rats: Vec<Rat> = a.iter().map(|x| Rat::from_integer(x.clone())).collect();
    max_norm_vec(&rats, v)
}

/// gcd of the absolute values of a list of integers.
pub fn content_ints(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in a {
        g = g.gcd(x);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_v_examples() {
        // v_5(6/5) = -1 by factorization
        assert_eq!(abs_v(&rat(6, 5), Place::Finite(5)).unwrap().value, rat_int(5));
        assert_eq!(abs_v(&rat_int(1), Place::Finite(7)).unwrap().value, rat_int(1));
        assert_eq!(abs_v(&rat_int(1), Place::Arch).unwrap().value, rat_int(1));
        // v_2(8) = 3
        assert_eq!(abs_v(&rat_int(-8), Place::Finite(2)).unwrap().value, rat(1, 8));
        assert_eq!(abs_v(&rat_int(0), Place::Arch), Err(ExactError::ZeroInput));
    }

    #[test]
    fn support_examples() {
        assert!(support(&rat_int(1)).unwrap().is_empty());
        assert!(support(&rat_int(-1)).unwrap().is_empty());
        let s = support(&rat(6, 5)).unwrap();
        let expect: BTreeSet<Place> = [Place::Arch, Place::Finite(2), Place::Finite(3), Place::Finite(5)]
            .into_iter()
            .collect();
        assert_eq!(s, expect);
    }

    #[test]
    fn product_formula_examples() {
        assert!(product_formula_check(&rat(6, 5)).unwrap());
        assert!(product_formula_check(&rat_int(1)).unwrap());
        for p in [2u64, 3, 97] {
            assert!(product_formula_check(&rat_int(p as i64)).unwrap());
        }
    }

    #[test]
    fn max_norm_examples() {
        let v = |coords: &[i64]| coords.iter().map(|&c| rat_int(c)).collect::<Vec<_>>();
        assert_eq!(max_norm_vec(&v(&[1, 2, 3]), Place::Finite(5)).unwrap().value, rat_int(1));
        assert_eq!(max_norm_vec(&v(&[1, 0, 0]), Place::Finite(2)).unwrap().value, rat_int(1));
        assert_eq!(max_norm_vec(&v(&[4, 6, 10]), Place::Finite(2)).unwrap().value, rat(1, 2));
        assert!(max_norm_vec(&v(&[0, 0]), Place::Arch).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(is_prime_u64(2_147_483_647));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(18_446_744_073_709_551_615));
        assert!(Place::finite(6).is_err());
    }

    #[test]
    fn ultrametric_property() {
        // |a+b|_p <= max(|a|_p, |b|_p), equality when the two norms differ
        let cases = [(rat(3, 4), rat(5, 8)), (rat(7, 2), rat(9, 2)), (rat(1, 3), rat(2, 3))];
        for (a, b) in cases {
            for p in [2u64, 3, 5] {
                let s = &a + &b;
                if s.is_zero() {
                    continue;
                }
                let na = abs_v(&a, Place::Finite(p)).unwrap().value;
                let nb = abs_v(&b, Place::Finite(p)).unwrap().value;
                let ns = abs_v(&s, Place::Finite(p)).unwrap().value;
                let m = na.clone().max(nb.clone());
                assert!(ns <= m);
                if na != nb {
                    assert_eq!(ns, m);
                }
            }
        }
    }
}
