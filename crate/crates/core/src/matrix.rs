//! Exact dense linear algebra over Q and Q(lambda): products, kernels,
//! fraction-free characteristic polynomials, and a small exact simplex for
//! nonnegative feasibility questions.

use crate::algnum::AlgNum;
use crate::exact::Rat;
use crate::zpoly::ZPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Field operations dispatched through a sample element, so that elements
/// carrying context (a number field handle) stay usable.
pub trait Scalar: Clone {
    fn s_zero(&self) -> Self;
    fn s_one(&self) -> Self;
    fn s_add(&self, o: &Self) -> Self;
    fn s_sub(&self, o: &Self) -> Self;
    fn s_mul(&self, o: &Self) -> Self;
    fn s_div(&self, o: &Self) -> Self;
    fn s_neg(&self) -> Self;
    fn s_is_zero(&self) -> bool;
    /// Certified sign, None when certification fails.
    fn s_try_sign(&self) -> Option<i8>;
}

impl Scalar for Rat {
    fn s_zero(&self) -> Self {
        Rat::zero()
    }
    fn s_one(&self) -> Self {
        Rat::one()
    }
    fn s_add(&self, o: &Self) -> Self {
        self + o
    }
    fn s_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn s_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn s_div(&self, o: &Self) -> Self {
        self / o
    }
    fn s_neg(&self) -> Self {
        -self.clone()
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_try_sign(&self) -> Option<i8> {
        Some(if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        })
    }
}

impl Scalar for AlgNum {
    fn s_zero(&self) -> Self {
        AlgNum::zero(&self.field)
    }
    fn s_one(&self) -> Self {
        AlgNum::one(&self.field)
    }
    fn s_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn s_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn s_div(&self, o: &Self) -> Self {
        self.div(o)
    }
    fn s_neg(&self) -> Self {
        self.neg()
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_try_sign(&self) -> Option<i8> {
        self.try_sign()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>, // row-major
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    fn sample(&self) -> &T {
        &self.data[0]
    }

    pub fn identity_like(&self, n: usize) -> Self {
        let z = self.sample().s_zero();
        let o = self.sample().s_one();
        let mut data = vec![z; n * n];
        for i in 0..n {
            data[i * n + i] = o.clone();
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let z = self.sample().s_zero();
        let mut data = vec![z.clone(); self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.s_is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a.s_mul(o.at(k, j));
                    data[i * o.cols + j] = data[i * o.cols + j].s_add(&t);
                }
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        let z = self.sample().s_zero();
        let mut out = vec![z; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let t = self.at(i, j).s_mul(&v[j]);
                out[i] = out[i].s_add(&t);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.identity_like(self.rows);
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Basis of the right kernel by Gauss-Jordan elimination.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let z = self.sample().s_zero();
        let o = self.sample().s_one();
        let mut pivots: Vec<Option<usize>> = vec![None; m.cols];
        let mut row = 0usize;
        for col in 0..m.cols {
            let mut pr = None;
            for r in row..m.rows {
                if !m.at(r, col).s_is_zero() {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            for j in 0..m.cols {
                let tmp = m.at(pr, j).clone();
                *m.at_mut(pr, j) = m.at(row, j).clone();
                *m.at_mut(row, j) = tmp;
            }
            let inv = o.s_div(m.at(row, col));
            for j in 0..m.cols {
                let v = m.at(row, j).s_mul(&inv);
                *m.at_mut(row, j) = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).s_is_zero() {
                    let f = m.at(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.at(r, j).s_sub(&f.s_mul(m.at(row, j)));
                        *m.at_mut(r, j) = v;
                    }
                }
            }
            pivots[col] = Some(row);
            row += 1;
            if row == m.rows {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivots[free].is_some() {
                continue;
            }
            let mut v = vec![z.clone(); m.cols];
            v[free] = o.clone();
            for (col, p) in pivots.iter().enumerate() {
                if let Some(prow) = p {
                    v[col] = m.at(*prow, free).s_neg();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Characteristic polynomial det(xI - M) of an integer matrix by
/// fraction-free (Bareiss) elimination on polynomial entries.
pub fn charpoly_bareiss(m: &[Vec<BigInt>]) -> ZPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    // entries of xI - M
    let mut a: Vec<Vec<ZPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ZPoly::new(vec![-m[i][j].clone(), BigInt::one()])
                    } else {
                        ZPoly::new(vec![-m[i][j].clone()])
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        debug_assert!(!a[k][k].is_zero(), "characteristic pivots are monic, never zero");
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.divexact(&prev);
            }
        }
        prev = a[k][k].clone();
        for i in k + 1..n {
            a[i][k] = ZPoly::zero();
        }
    }
    a[n - 1][n - 1].clone()
}

/// Exact nonnegative feasibility: does A x = b admit x >= 0?
/// Phase-I simplex with Bland's rule. Returns:
///   Some(Some(x)) feasible with witness, Some(None) infeasible,
///   None if a sign could not be certified.
pub fn feasible_nonneg<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<Option<Vec<T>>> {
    let m = a.rows;
    let n = a.cols;
    assert_eq!(b.len(), m);
    let sample = if !a.data.is_empty() { a.data[0].clone() } else { b[0].clone() };
    let z = sample.s_zero();
    let one = sample.s_one();

    // tableau: n original + m artificial columns, plus rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![z.clone(); width];
        let flip = match b[i].s_try_sign() {
            Some(s) => s < 0,
            None => return None,
        };
        for j in 0..n {
            row[j] = if flip { a.at(i, j).s_neg() } else { a.at(i, j).clone() };
        }
        row[n + i] = one.clone();
        row[width - 1] = if flip { b[i].s_neg() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // objective: minimize sum of artificials; reduced cost row
    let mut obj = vec![z.clone(); width];
    for row in &t {
        for (j, cell) in row.iter().enumerate() {
            obj[j] = obj[j].s_add(cell);
        }
    }
    for j in n..n + m {
        obj[j] = z.clone();
    }

    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 20_000 {
            return None;
        }
        // Bland: entering = smallest index with positive reduced cost
        let mut enter = None;
        for (j, c) in obj.iter().enumerate().take(n + m) {
            if basis.contains(&j) {
                continue;
            }
            match c.s_try_sign() {
                Some(s) if s > 0 => {
                    enter = Some(j);
                    break;
                }
                Some(_) => {}
                None => return None,
            }
        }
        let Some(enter) = enter else { break };
        // ratio test, Bland tie-break by basis index
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in t.iter().enumerate() {
            let coef = &row[enter];
            match coef.s_try_sign() {
                Some(s) if s > 0 => {
                    let ratio = row[width - 1].s_div(coef);
                    let better = match &leave {
                        None => true,
                        Some((li, best)) => match ratio.s_sub(best).s_try_sign() {
                            Some(-1) => true,
                            Some(0) => basis[i] < basis[*li],
                            Some(_) => false,
                            None => return None,
                        },
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
                Some(_) => {}
                None => return None,
            }
        }
        let Some((leave_row, _)) = leave else {
            // unbounded phase-1 cannot happen; treat as failure
            return None;
        };
        pivot(&mut t, &mut obj, leave_row, enter);
        basis[leave_row] = enter;
    }

    // objective value = sum of basic artificial values
    let mut objective = z.clone();
    for (i, &bi) in basis.iter().enumerate() {
        if bi >= n {
            objective = objective.s_add(&t[i][width - 1]);
        }
    }
    match objective.s_try_sign() {
        Some(0) => {}
        Some(_) => return Some(None),
        None => return None,
    }
    let mut x = vec![z.clone(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    Some(Some(x))
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], obj: &mut [T], row: usize, col: usize) {
    let width = t[0].len();
    let inv = t[row][col].s_one().s_div(&t[row][col]);
    for j in 0..width {
        t[row][j] = t[row][j].s_mul(&inv);
    }
    for i in 0..t.len() {
        if i == row || t[i][col].s_is_zero() {
            continue;
        }
        let f = t[i][col].clone();
        for j in 0..width {
            let v = t[i][j].s_sub(&f.s_mul(&t[row][j]));
            t[i][j] = v;
        }
    }
    if !obj[col].s_is_zero() {
        let f = obj[col].clone();
        for j in 0..width {
            let v = obj[j].s_sub(&f.s_mul(&t[row][j]));
            obj[j] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn zmat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,1]]: x^2 - 3x + 1
        let m = zmat(&[&[2, 1], &[1, 1]]);
        assert_eq!(charpoly_bareiss(&m), ZPoly::from_i64(&[1, -3, 1]));
        // companion of x^2 - x - 1
        let c = zmat(&[&[0, 1], &[1, 1]]);
        assert_eq!(charpoly_bareiss(&c), ZPoly::from_i64(&[-1, -1, 1]));
    }

    #[test]
    fn charpoly_diag() {
        let m = zmat(&[&[3, 0, 0], &[0, -1, 0], &[0, 0, 2]]);
        // (x-3)(x+1)(x-2) = x^3 -4x^2 +x +6
        assert_eq!(charpoly_bareiss(&m), ZPoly::from_i64(&[6, 1, -4, 1]));
    }

    #[test]
    fn kernel_basis_rat() {
        // x + y + z = 0, x - z = 0 → kernel span (1, -2, 1)
        let m = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(0), rat_int(-1)],
        ]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // check Av = 0
        let img = m.apply(v);
        assert!(img.iter().all(|x| x.is_zero()));
        assert_eq!(&v[0] + &v[2], -v[1].clone() - &v[1] + &v[1]); // x = z
    }

    #[test]
    fn simplex_feasibility() {
        // x1 + x2 = 2 with x >= 0: feasible
        let a = Matrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let w = feasible_nonneg(&a, &[rat_int(2)]).unwrap().unwrap();
        assert_eq!(&w[0] + &w[1], rat_int(2));
        assert!(w.iter().all(|x| !x.is_negative()));
        // x1 + x2 = -1 with x >= 0: infeasible
        assert!(feasible_nonneg(&a, &[rat_int(-1)]).unwrap().is_none());
        // x1 - x2 = 3, x1 + x2 = 1: only solution (2,-1): infeasible in cone
        let a2 = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(-1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        assert!(feasible_nonneg(&a2, &[rat_int(3), rat_int(1)]).unwrap().is_none());
        // same but achievable: x1 - x2 = e.g. (5/2, 3/2)
        let w2 = feasible_nonneg(&a2, &[rat_int(1), rat_int(4)]).unwrap().unwrap();
        assert_eq!(&w2[0] - &w2[1], rat_int(1));
        assert_eq!(&w2[0] + &w2[1], rat_int(4));
        assert!(w2.iter().all(|x| *x >= rat(0, 1)));
    }

    #[test]
    fn matrix_power() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let m6 = m.pow(6);
        // Fibonacci: F7 = 13 at (1,1)
        assert_eq!(*m6.at(1, 1), rat_int(13));
    }
}
