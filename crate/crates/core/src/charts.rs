//! Canonical affine charts at rational points of the ambient surface.
//!
//! At a point q we fix a pivot coordinate per projective factor (the first
//! index with nonzero coordinate) and use the remaining coordinates, divided
//! by the pivot, as affine coordinates (u, v). Tangent directions at q and
//! the direction data of infinitely near points are always expressed in this
//! chart, as primitive integer pairs [du : dv].

use crate::exact::Rat;
use crate::lattice::{Ambient, SurfacePoint};
use crate::mpoly::MPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub ambient: Ambient,
    /// global indices of the affine coordinates (u, v)
    pub affine: (usize, usize),
    /// global indices of the pivot coordinate backing u resp. v
    pub pivots: (usize, usize),
    /// affine values (u0, v0) of the point in this chart
    pub base: (Rat, Rat),
}

pub fn chart_at(q: &SurfacePoint) -> Chart {
    match q.ambient {
        Ambient::P2 => {
            let rho = (0..3).find(|&i| !q.coords[i].is_zero()).unwrap();
            let rest: Vec<usize> = (0..3).filter(|&i| i != rho).collect();
            let (a, b) = (rest[0], rest[1]);
            Chart {
                ambient: q.ambient,
                affine: (a, b),
                pivots: (rho, rho),
                base: (
                    Rat::new(q.coords[a].clone(), q.coords[rho].clone()),
                    Rat::new(q.coords[b].clone(), q.coords[rho].clone()),
                ),
            }
        }
        Ambient::P1xP1 => {
            let rho1 = if !q.coords[0].is_zero() { 0 } else { 1 };
            let a = 1 - rho1;
            let rho2 = if !q.coords[2].is_zero() { 2 } else { 3 };
            let b = 5 - rho2; // the other of {2, 3}
            Chart {
                ambient: q.ambient,
                affine: (a, b),
                pivots: (rho1, rho2),
                base: (
                    Rat::new(q.coords[a].clone(), q.coords[rho1].clone()),
                    Rat::new(q.coords[b].clone(), q.coords[rho2].clone()),
                ),
            }
        }
    }
}

/// Local 2-variable form of `poly` at `q`: substitute the chart
/// parametrization and shift q to the origin. Integer coefficients; the
/// vanishing order at the origin is the multiplicity of the curve at q, and
/// the lowest homogeneous part is its tangent cone in (u, v).
pub fn local_form(ambient: Ambient, poly: &MPoly, q: &SurfacePoint) -> MPoly {
    assert_eq!(ambient, q.ambient);
    let ch = chart_at(q);
    let n = ambient.nvars();
    let (a, b) = ch.affine;
    let (p1, p2) = ch.pivots;
    let mut args = Vec::with_capacity(n);
    for i in 0..n {
        if i == a {
            // x_a := q_a + u * q_pivot1
            args.push(
                MPoly::constant(2, q.coords[i].clone())
                    .add(&MPoly::monomial(2, [1, 0, 0, 0], q.coords[p1].clone())),
            );
        } else if i == b {
            args.push(
                MPoly::constant(2, q.coords[i].clone())
                    .add(&MPoly::monomial(2, [0, 1, 0, 0], q.coords[p2].clone())),
            );
        } else {
            args.push(MPoly::constant(2, q.coords[i].clone()));
        }
    }
    poly.subst(&args)
}

/// Primitive integer form of a rational direction pair.
pub fn primitive_pair(a: &Rat, b: &Rat) -> (BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let l = a.denom().clone() * b.denom().clone();
    let x = (a * Rat::from_integer(l.clone())).to_integer();
    let y = (b * Rat::from_integer(l)).to_integer();
    let mut g = num_integer::Integer::gcd(&x, &y);
    let lead = if !x.is_zero() { &x } else { &y };
    if lead.is_negative() {
        g = -g;
    }
    (x / &g, y / &g)
}

/// True when two projective pairs agree.
pub fn pairs_equal(p: &(BigInt, BigInt), q: &(BigInt, BigInt)) -> bool {
    &p.0 * &q.1 == &p.1 * &q.0 && !(p.0.is_zero() && p.1.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    #[test]
    fn chart_and_local_form() {
        // conic Q = xz + yz - xy at [0:1:0]: order 1, tangent cone u - v with
        // (u, v) = (x, z) chart coords
        let q = parse_poly("x*z + y*z - x*y", &["x", "y", "z"]).unwrap().0;
        let p = SurfacePoint::p2(0, 1, 0);
        let local = local_form(Ambient::P2, &q, &p);
        assert_eq!(crate::mpoly::order_at_origin(&local), 1);
        let cone = crate::mpoly::lowest_part(&local);
        // tangent direction [1:1]: cone vanishes at (u, v) = (1, 1)
        assert!(cone.eval_int(&[BigInt::one(), BigInt::one()]).is_zero());
    }

    #[test]
    fn p1p1_local_form() {
        // {w = z - 1} at ((1,0)): affine point z=1, w=0
        let names = ["z0", "z1", "w0", "w1"];
        let c = parse_poly("w0*z1 - w1*z0 + w1*z1", &names).unwrap().0;
        let p = SurfacePoint::p1p1((1, 1), (0, 1));
        let local = local_form(Ambient::P1xP1, &c, &p);
        assert_eq!(crate::mpoly::order_at_origin(&local), 1);
        let away = SurfacePoint::p1p1((5, 1), (0, 1));
        let l2 = local_form(Ambient::P1xP1, &c, &away);
        assert_eq!(crate::mpoly::order_at_origin(&l2), 0);
    }
}
