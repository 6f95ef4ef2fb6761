//! Factorization of monic integer polynomials at desk scale (degree <= ~16),
//! by Cantor-Zassenhaus modulo a single prime larger than twice the Mignotte
//! bound, followed by subset recombination.
//!
//! Outputs are verified by multiplying back, so a bad random prime can cost
//! time but never correctness of the returned factorization.

use crate::zpoly::ZPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gen_biguint_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let words = bits.div_ceil(64);
    loop {
        let mut v = BigUint::zero();
        for _ in 0..words {
            v = (v << 64) | BigUint::from(rng.gen::<u64>());
        }
        v &= (BigUint::one() << bits) - BigUint::one();
        if &v < bound {
            return v;
        }
    }
}

fn gen_biguint_range(rng: &mut ChaCha8Rng, lo: &BigUint, hi: &BigUint) -> BigUint {
    lo + gen_biguint_below(rng, &(hi - lo))
}

/// Miller-Rabin with 40 random bases. Probabilistic beyond u64 range, but a
/// composite modulus only stalls factoring (results are re-verified over Z).
fn probably_prime(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % pb).is_zero() {
            return false;
        }
    }
    let n1 = n - BigUint::one();
    let mut d = n1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d >>= 1;
        s += 1;
    }
    'outer: for _ in 0..40 {
        let a = gen_biguint_range(rng, &two, &n1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Dense polynomial over F_p, ascending coefficients in [0, p).
#[derive(Clone, Debug, PartialEq)]
struct PPoly(Vec<BigInt>);

struct Fp {
    p: BigInt,
}

impl Fp {
    fn red(&self, x: &BigInt) -> BigInt {
        let r = x.mod_floor(&self.p);
        r
    }

    fn norm(&self, mut c: Vec<BigInt>) -> PPoly {
        for x in c.iter_mut() {
            *x = self.red(x);
        }
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        PPoly(c)
    }

    fn from_z(&self, z: &ZPoly) -> PPoly {
        self.norm(z.0.clone())
    }

    fn add(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let n = a.0.len().max(b.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in a.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in b.0.iter().enumerate() {
            c[i] += x;
        }
        self.norm(c)
    }

    fn sub(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let n = a.0.len().max(b.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in a.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in b.0.iter().enumerate() {
            c[i] -= x;
        }
        self.norm(c)
    }

    fn mul(&self, a: &PPoly, b: &PPoly) -> PPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return PPoly(vec![]);
        }
        let mut c = vec![BigInt::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.norm(c)
    }

    fn rem(&self, a: &PPoly, m: &PPoly) -> PPoly {
        assert!(!m.0.is_empty());
        let lead_inv = self.inv(m.0.last().unwrap());
        let mut r = a.0.clone();
        let d = m.0.len() - 1;
        while r.len() > d {
            let top = self.red(r.last().unwrap());
            let k = r.len() - 1 - d;
            if !top.is_zero() {
                let q = self.red(&(&top * &lead_inv));
                for (i, c) in m.0.iter().enumerate() {
                    let t = &r[k + i] - c * &q;
                    r[k + i] = self.red(&t);
                }
            }
            r.pop();
        }
        self.norm(r)
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        let e = &self.p - BigInt::from(2);
        let xu: BigUint = self.red(x).to_biguint().unwrap();
        let out = xu.modpow(&e.to_biguint().unwrap(), &self.p.to_biguint().unwrap());
        BigInt::from(out)
    }

    fn monic(&self, a: &PPoly) -> PPoly {
        if a.0.is_empty() {
            return a.clone();
        }
        let inv = self.inv(a.0.last().unwrap());
        let c = a.0.iter().map(|x| self.red(&(x * &inv))).collect();
        self.norm(c)
    }

    fn gcd(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.0.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// base^e mod m, e a nonnegative big integer.
    fn powmod(&self, base: &PPoly, e: &BigUint, m: &PPoly) -> PPoly {
        let mut acc = PPoly(vec![BigInt::one()]);
        let mut b = self.rem(base, m);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
            b = self.rem(&self.mul(&b, &b), m);
        }
        acc
    }
}

/// Factor a monic integer polynomial into monic irreducible factors with
/// multiplicities (sorted deterministically).
pub fn factor_monic(poly: &ZPoly) -> Vec<(ZPoly, usize)> {
    assert!(poly.is_monic(), "factor_monic requires a monic polynomial");
    let mut out: Vec<(ZPoly, usize)> = Vec::new();
    let mut rest = poly.clone();
    // Peel repeated factors via squarefree parts.
    while rest.degree() > 0 {
        let sf = rest.squarefree_part();
        for f in factor_squarefree(&sf) {
            let mut mult = 0usize;
            while let Some(q) = rest.try_divexact(&f) {
                rest = q;
                mult += 1;
            }
            debug_assert!(mult >= 1);
            out.push((f, mult));
        }
        if rest.degree() == 0 {
            break;
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0 .0).cmp(&(b.0.degree(), &b.0 .0)));
    // verification: product reproduces the input
    let mut prod = ZPoly::one();
    for (f, m) in &out {
        for _ in 0..*m {
            prod = prod.mul(f);
        }
    }
    assert_eq!(prod, *poly, "factorization verification failed");
    out
}

fn factor_squarefree(poly: &ZPoly) -> Vec<ZPoly> {
    if poly.degree() == 0 {
        return vec![];
    }
    if poly.degree() == 1 {
        return vec![poly.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let p = choose_prime(poly, &mut rng);
    let fp = Fp { p: p.clone() };
    let fbar = fp.from_z(poly);
    let modular = factor_mod_p(&fp, &fbar, &mut rng);
    recombine(poly, &fp, &modular)
}

fn choose_prime(poly: &ZPoly, rng: &mut ChaCha8Rng) -> BigInt {
    // Mignotte: any monic factor has coefficients bounded by 2^n * ||poly||_2.
    let n = poly.degree() as u32;
    let norm2_sq: BigInt = poly.0.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    let bound: BigInt = (BigInt::one() << (n + 1)) * norm2 * BigInt::from(2) + BigInt::one();
    let mut cand = bound.to_biguint().unwrap();
    if (&cand % BigUint::from(2u32)).is_zero() {
        cand += BigUint::one();
    }
    loop {
        if probably_prime(&cand, rng) {
            let p = BigInt::from(cand.clone());
            // need p not dividing the discriminant-ish data: squarefree mod p
            let fp = Fp { p: p.clone() };
            let fbar = fp.from_z(poly);
            if fbar.0.len() == poly.0.len() {
                let g = fp.gcd(&fbar, &fp.from_z(&poly.derivative()));
                if g.0.len() == 1 {
                    return p;
                }
            }
        }
        cand += BigUint::from(2u32);
    }
}

fn factor_mod_p(fp: &Fp, f: &PPoly, rng: &mut ChaCha8Rng) -> Vec<PPoly> {
    // Distinct-degree then equal-degree splitting.
    let mut out = Vec::new();
    let mut rest = fp.monic(f);
    let x = PPoly(vec![BigInt::zero(), BigInt::one()]);
    let pu = fp.p.to_biguint().unwrap();
    let mut d = 1usize;
    let mut xq = fp.powmod(&x, &pu, &rest); // x^(p^1) mod rest
    while rest.0.len() > 1 {
        if 2 * d > rest.0.len() - 1 {
            out.push(rest.clone());
            break;
        }
        let g = fp.gcd(&fp.sub(&xq, &x), &rest);
        if g.0.len() > 1 {
            split_equal_degree(fp, &g, d, rng, &mut out);
            rest = divide_out(fp, &rest, &g);
            xq = fp.rem(&xq, &rest);
        }
        d += 1;
        xq = fp.powmod(&xq, &pu, &rest);
    }
    out
}

fn divide_out(fp: &Fp, a: &PPoly, b: &PPoly) -> PPoly {
    // exact division in F_p[x]
    let mut r = a.clone();
    let mut q: Vec<BigInt> = vec![BigInt::zero(); a.0.len() - b.0.len() + 1];
    let inv = fp.inv(b.0.last().unwrap());
    let d = b.0.len() - 1;
    for k in (0..q.len()).rev() {
        let top = fp.red(&r.0[k + d]);
        if !top.is_zero() {
            let qq = fp.red(&(&top * &inv));
            for (i, c) in b.0.iter().enumerate() {
                let t = &r.0[k + i] - c * &qq;
                r.0[k + i] = fp.red(&t);
            }
            q[k] = qq;
        }
    }
    fp.norm(q)
}

fn split_equal_degree(fp: &Fp, f: &PPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PPoly>) {
    let deg = f.0.len() - 1;
    if deg == d {
        out.push(fp.monic(f));
        return;
    }
    let pu = fp.p.to_biguint().unwrap();
    let e = (pu.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let pb = fp.p.to_biguint().unwrap();
        let a = PPoly(
            (0..deg)
                .map(|_| BigInt::from(gen_biguint_below(rng, &pb)))
                .collect::<Vec<_>>(),
        );
        let a = fp.norm(a.0);
        if a.0.is_empty() {
            continue;
        }
        let b = fp.powmod(&a, &e, f);
        let b1 = fp.sub(&b, &PPoly(vec![BigInt::one()]));
        let g = fp.gcd(&b1, f);
        if g.0.len() > 1 && g.0.len() < f.0.len() {
            split_equal_degree(fp, &g, d, rng, out);
            split_equal_degree(fp, &divide_out(fp, f, &g), d, rng, out);
            return;
        }
    }
}

fn symmetric_lift(fp: &Fp, f: &PPoly) -> ZPoly {
    let half = &fp.p / BigInt::from(2);
    ZPoly::new(
        f.0.iter()
            .map(|c| {
                if c > &half {
                    c - &fp.p
                } else {
                    c.clone()
                }
            })
            .collect(),
    )
}

fn recombine(poly: &ZPoly, fp: &Fp, modular: &[PPoly]) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut rest = poly.clone();
    let mut avail: Vec<PPoly> = modular.to_vec();
    let mut size = 1usize;
    while !avail.is_empty() {
        if size > avail.len() {
            // remaining product is irreducible over Z
            out.push(rest.clone());
            return out;
        }
        let mut found = None;
        'subsets: for subset in subsets_of_size(avail.len(), size) {
            let mut prod = PPoly(vec![BigInt::one()]);
            for &i in &subset {
                prod = fp.mul(&prod, &avail[i]);
            }
            let cand = symmetric_lift(fp, &prod);
            if let Some(q) = rest.try_divexact(&cand) {
                found = Some((subset, cand, q));
                break 'subsets;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                let mut keep = Vec::new();
                for (i, f) in avail.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(f);
                    }
                }
                avail = keep;
            }
            None => {
                size += 1;
            }
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_products() {
        // (x^2+1)(x-3)(x+5)
        let a = ZPoly::from_i64(&[1, 0, 1]);
        let b = ZPoly::from_i64(&[-3, 1]);
        let c = ZPoly::from_i64(&[5, 1]);
        let p = a.mul(&b).mul(&c);
        let fs = factor_monic(&p);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
        assert!(fs.iter().any(|(f, _)| *f == a));
    }

    #[test]
    fn repeated_factors() {
        // (x-1)^3 (x^2+x+1)
        let a = ZPoly::from_i64(&[-1, 1]);
        let b = ZPoly::from_i64(&[1, 1, 1]);
        let p = a.mul(&a).mul(&a).mul(&b);
        let fs = factor_monic(&p);
        let mults: Vec<usize> = fs.iter().map(|(_, m)| *m).collect();
        assert!(mults.contains(&3) && mults.contains(&1));
    }

    #[test]
    fn salem_quintics_irreducible() {
        // the degree-growth quintic of the stabilized (1/4)-family
        let p = ZPoly::from_i64(&[-1, -1, -1, -1, 0, 1]);
        let fs = factor_monic(&p);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.degree(), 5);
        // and the cubic t^3 - t^2 - 2t - 1
        let c = ZPoly::from_i64(&[-1, -2, -1, 1]);
        assert_eq!(factor_monic(&c).len(), 1);
    }

    #[test]
    fn cyclotomic_like() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let p = ZPoly::from_i64(&[-1, 0, 0, 0, 1]);
        let fs = factor_monic(&p);
        assert_eq!(fs.len(), 3);
    }
}
