//! Picard lattices of blowup models of P^2 and P^1 x P^1: intersection
//! pairing, canonical classes, strict-transform classes of tracked curves,
//! and effectivity/nefness tests relative to the tracked curve list.
//!
//! The exceptional basis consists of total-transform classes e_i (pairwise
//! orthogonal, square -1); the strict transform of the exceptional curve
//! over center i has class e_i - sum of e_j over j proximate to i.

use crate::exact::{content_ints, Rat};
use crate::matrix::{feasible_nonneg, Matrix, Scalar};
use crate::mpoly::{self, MPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Ambient {
    P2,
    P1xP1,
}

impl Ambient {
    pub fn nvars(&self) -> usize {
        match self {
            Ambient::P2 => 3,
            Ambient::P1xP1 => 4,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        match self {
            Ambient::P2 => 1,
            Ambient::P1xP1 => 2,
        }
    }

    pub fn var_names(&self) -> &'static [&'static str] {
        match self {
            Ambient::P2 => &["x", "y", "z"],
            Ambient::P1xP1 => &["z0", "z1", "w0", "w1"],
        }
    }

    /// Variable groups carrying independent gradings.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        match self {
            Ambient::P2 => vec![vec![0, 1, 2]],
            Ambient::P1xP1 => vec![vec![0, 1], vec![2, 3]],
        }
    }
}

/// A rational point of the ambient surface in primitive integer coordinates,
/// in canonical form (content 1, first nonzero coordinate of each factor
/// positive).
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct SurfacePoint {
    pub ambient: Ambient,
    pub coords: Vec<BigInt>, // 3 for P2; z0,z1,w0,w1 for P1xP1
}

impl std::fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.ambient {
            Ambient::P2 => write!(f, "[{}:{}:{}]", self.coords[0], self.coords[1], self.coords[2]),
            Ambient::P1xP1 => write!(
                f,
                "([{}:{}],[{}:{}])",
                self.coords[0], self.coords[1], self.coords[2], self.coords[3]
            ),
        }
    }
}

impl Ord for Ambient {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

impl PartialOrd for Ambient {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Ambient {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (*self as u8).hash(state);
    }
}

fn normalize_chunk(c: &mut [BigInt]) {
    let g = content_ints(c);
    assert!(!g.is_zero(), "zero projective coordinates");
    for x in c.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = c.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in c.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

impl SurfacePoint {
    pub fn new(ambient: Ambient, mut coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), ambient.nvars());
        match ambient {
            Ambient::P2 => normalize_chunk(&mut coords),
            Ambient::P1xP1 => {
                let (a, b) = coords.split_at_mut(2);
                normalize_chunk(a);
                normalize_chunk(b);
            }
        }
        SurfacePoint { ambient, coords }
    }

    pub fn p2(x: i64, y: i64, z: i64) -> Self {
        Self::new(Ambient::P2, vec![BigInt::from(x), BigInt::from(y), BigInt::from(z)])
    }

    pub fn p1p1(z: (i64, i64), w: (i64, i64)) -> Self {
        Self::new(
            Ambient::P1xP1,
            vec![BigInt::from(z.0), BigInt::from(z.1), BigInt::from(w.0), BigInt::from(w.1)],
        )
    }

    /// Affine P1xP1 point (z, w) given as rationals.
    pub fn from_affine(z: Rat, w: Rat) -> Self {
        Self::new(
            Ambient::P1xP1,
            vec![z.numer().clone(), z.denom().clone(), w.numer().clone(), w.denom().clone()],
        )
    }
}

/// A blowup center: a proper point of the ambient or a point infinitely near
/// an earlier center, given by a primitive tangent direction in the parent's
/// canonical chart (see `birmap::charts`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointSpec {
    Proper(SurfacePoint),
    InfinitelyNear { parent: usize, direction: (BigInt, BigInt) },
}

#[derive(Clone, Debug)]
pub struct BlowupModel {
    pub ambient: Ambient,
    pub points: Vec<PointSpec>,
    /// proximity[j][i]: center j proximate to center i (strictly lower
    /// triangular).
    pub proximity: Vec<Vec<bool>>,
}

impl BlowupModel {
    pub fn new(ambient: Ambient, points: Vec<PointSpec>) -> Self {
        let n = points.len();
        let mut proximity = vec![vec![false; n]; n];
        for (j, p) in points.iter().enumerate() {
            if let PointSpec::InfinitelyNear { parent, direction } = p {
                assert!(*parent < j, "parent must precede the infinitely near point");
                assert!(
                    !(direction.0.is_zero() && direction.1.is_zero()),
                    "zero tangent direction"
                );
                proximity[j][*parent] = true;
            }
            if let PointSpec::Proper(sp) = p {
                assert_eq!(sp.ambient, ambient);
                for earlier in &points[..j] {
                    if let PointSpec::Proper(q) = earlier {
                        assert!(q != sp, "duplicate blowup center {}", sp);
                    }
                }
            }
        }
        let model = BlowupModel { ambient, points, proximity };
        let (pos, neg) = model.signature();
        assert_eq!(
            (pos, neg),
            (1, model.rank() - 1),
            "intersection form must have signature (1, rank-1)"
        );
        model
    }

    pub fn bare(ambient: Ambient) -> Self {
        Self::new(ambient, vec![])
    }

    pub fn rank(&self) -> usize {
        self.ambient.ambient_rank() + self.points.len()
    }

    /// Intersection pairing of basis classes.
    pub fn gram(&self, i: usize, j: usize) -> i64 {
        let ar = self.ambient.ambient_rank();
        match self.ambient {
            Ambient::P2 => {
                if i == 0 && j == 0 {
                    1
                } else if i == j {
                    -1
                } else {
                    0
                }
            }
            Ambient::P1xP1 => {
                if i < ar && j < ar {
                    if i != j {
                        1
                    } else {
                        0
                    }
                } else if i == j {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Signature of the intersection form by symmetric (congruence)
    /// diagonalization over Q.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.rank();
        let mut g: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| Rat::from_integer(BigInt::from(self.gram(i, j)))).collect())
            .collect();
        let mut pos = 0;
        let mut neg = 0;
        for k in 0..n {
            if g[k][k].is_zero() {
                // find l > k with g[k][l] != 0 and mix rows/cols
                if let Some(l) = (k + 1..n).find(|&l| !g[k][l].is_zero()) {
                    for j in 0..n {
                        let t = g[l][j].clone();
                        g[k][j] += t;
                    }
                    for i in 0..n {
                        let t = g[i][l].clone();
                        g[i][k] += t;
                    }
                }
            }
            let d = g[k][k].clone();
            if d.is_zero() {
                continue;
            }
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if g[i][k].is_zero() {
                    continue;
                }
                let f = &g[i][k] / &d;
                for j in 0..n {
                    let t = &g[k][j] * &f;
                    g[i][j] -= t;
                }
                for jj in 0..n {
                    let t = &g[jj][k] * &f;
                    g[jj][i] -= t;
                }
            }
        }
        (pos, neg)
    }

    /// Name of a basis class, for reports.
    pub fn basis_label(&self, i: usize) -> String {
        match self.ambient {
            Ambient::P2 => {
                if i == 0 {
                    "H".to_string()
                } else {
                    format!("e{}", i)
                }
            }
            Ambient::P1xP1 => match i {
                0 => "F1".to_string(),
                1 => "F2".to_string(),
                _ => format!("e{}", i - 1),
            },
        }
    }
}

/// A divisor class in the basis {H} u {e_i} (P^2) or {F1, F2} u {e_i}.
#[derive(Clone, Debug, PartialEq)]
pub struct DivClass<K> {
    pub coeffs: Vec<K>,
}

impl<K: Scalar> DivClass<K> {
    pub fn zero_like(sample: &K, rank: usize) -> Self {
        DivClass { coeffs: vec![sample.s_zero(); rank] }
    }

    pub fn add(&self, o: &Self) -> Self {
        DivClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.s_add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DivClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.s_sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        DivClass { coeffs: self.coeffs.iter().map(|a| a.s_mul(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        DivClass { coeffs: self.coeffs.iter().map(|a| a.s_neg()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.s_is_zero())
    }
}

impl DivClass<Rat> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        DivClass {
            coeffs: coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// Intersection pairing of two classes on the same model.
pub fn intersection<K: Scalar>(model: &BlowupModel, a: &DivClass<K>, b: &DivClass<K>) -> K {
    assert_eq!(a.coeffs.len(), model.rank(), "dimension mismatch");
    assert_eq!(b.coeffs.len(), model.rank(), "dimension mismatch");
    let sample = &a.coeffs[0];
    let mut acc = sample.s_zero();
    let ar = model.ambient.ambient_rank();
    match model.ambient {
        Ambient::P2 => {
            acc = acc.s_add(&a.coeffs[0].s_mul(&b.coeffs[0]));
        }
        Ambient::P1xP1 => {
            acc = acc.s_add(&a.coeffs[0].s_mul(&b.coeffs[1]));
            acc = acc.s_add(&a.coeffs[1].s_mul(&b.coeffs[0]));
        }
    }
    for i in ar..model.rank() {
        acc = acc.s_sub(&a.coeffs[i].s_mul(&b.coeffs[i]));
    }
    acc
}

/// K_X = -3H + sum e_i on P^2 models; -2F1 - 2F2 + sum e_i on P^1 x P^1.
pub fn canonical_class(model: &BlowupModel) -> DivClass<Rat> {
    let mut coeffs = Vec::with_capacity(model.rank());
    match model.ambient {
        Ambient::P2 => coeffs.push(Rat::from_integer(BigInt::from(-3))),
        Ambient::P1xP1 => {
            coeffs.push(Rat::from_integer(BigInt::from(-2)));
            coeffs.push(Rat::from_integer(BigInt::from(-2)));
        }
    }
    for _ in 0..model.points.len() {
        coeffs.push(Rat::one());
    }
    DivClass { coeffs }
}

/// Class of the ambient hyperplane (H, resp. F1 + F2).
pub fn ample_generator(model: &BlowupModel) -> DivClass<Rat> {
    let mut coeffs = vec![Rat::zero(); model.rank()];
    for i in 0..model.ambient.ambient_rank() {
        coeffs[i] = Rat::one();
    }
    DivClass { coeffs }
}

/// What a tracked curve is on the model: the strict transform of an ambient
/// curve, or the strict transform of an exceptional curve.
#[derive(Clone, Debug)]
pub enum CurveLocus {
    Ambient(MPoly),
    ExcStrict(usize),
}

#[derive(Clone, Debug)]
pub struct TrackedCurve {
    pub label: String,
    pub locus: CurveLocus,
    pub class: DivClass<Rat>,
}

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("class is not integral for curve {0}")]
    NonIntegralClass(String),
    #[error("declared class of {0} does not match the computed strict transform class")]
    ClassMismatch(String),
    #[error("sign not certifiable at current precision")]
    SignUnknown,
}

/// Multiplicity of an ambient curve at each blowup center (proper centers by
/// chart order, infinitely near ones through the lifted local form).
pub fn curve_multiplicities(model: &BlowupModel, poly: &MPoly) -> Vec<u32> {
    let n = model.points.len();
    let mut mult = vec![0u32; n];
    // local forms at proper centers, reused by children
    let mut locals: Vec<Option<MPoly>> = vec![None; n];
    for (i, p) in model.points.iter().enumerate() {
        match p {
            PointSpec::Proper(sp) => {
                let local = crate::charts::local_form(model.ambient, poly, sp);
                mult[i] = mpoly::order_at_origin(&local).min(u32::MAX);
                if mult[i] == u32::MAX {
                    mult[i] = 0; // zero polynomial guard; callers ensure nonzero
                }
                locals[i] = Some(local);
            }
            PointSpec::InfinitelyNear { parent, direction } => {
                let parent_local = locals[*parent]
                    .as_ref()
                    .expect("infinitely near point must follow its parent")
                    .clone();
                if parent_local.is_zero() || mpoly::order_at_origin(&parent_local) == 0 {
                    mult[i] = 0;
                    locals[i] = Some(MPoly::one(2));
                    continue;
                }
                let lifted = mpoly::blowup_toward(&parent_local, (&direction.0, &direction.1));
                mult[i] = if lifted.is_zero() { 0 } else { mpoly::order_at_origin(&lifted) };
                locals[i] = Some(lifted);
            }
        }
    }
    mult
}

/// Class of the strict transform of an ambient curve: degree part minus
/// multiplicities at the centers.
pub fn strict_transform_class(model: &BlowupModel, poly: &MPoly) -> DivClass<Rat> {
    let mut coeffs = Vec::with_capacity(model.rank());
    match model.ambient {
        Ambient::P2 => {
            let d = poly.total_degree();
            coeffs.push(Rat::from_integer(BigInt::from(d)));
        }
        Ambient::P1xP1 => {
            let dz = poly.deg_in_group(&[0, 1]);
            let dw = poly.deg_in_group(&[2, 3]);
            coeffs.push(Rat::from_integer(BigInt::from(dz)));
            coeffs.push(Rat::from_integer(BigInt::from(dw)));
        }
    }
    for m in curve_multiplicities(model, poly) {
        coeffs.push(Rat::from_integer(BigInt::from(-(m as i64))));
    }
    DivClass { coeffs }
}

/// Class of the strict transform of the exceptional curve over center i:
/// e_i minus the e_j for j proximate to i.
pub fn exc_strict_class(model: &BlowupModel, center: usize) -> DivClass<Rat> {
    let ar = model.ambient.ambient_rank();
    let mut coeffs = vec![Rat::zero(); model.rank()];
    coeffs[ar + center] = Rat::one();
    for j in 0..model.points.len() {
        if model.proximity[j][center] {
            coeffs[ar + j] = -Rat::one();
        }
    }
    DivClass { coeffs }
}

impl TrackedCurve {
    /// Build a tracked curve from its locus, deriving and checking the class.
    pub fn new(model: &BlowupModel, label: &str, locus: CurveLocus) -> Self {
        let class = match &locus {
            CurveLocus::Ambient(p) => strict_transform_class(model, p),
            CurveLocus::ExcStrict(i) => exc_strict_class(model, *i),
        };
        TrackedCurve { label: label.to_string(), locus, class }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EffectiveVerdict<K> {
    /// Nonnegative witness coefficients over the tracked curve classes.
    Yes(Vec<K>),
    /// Not decidable from the tracked set; optional certificate that the
    /// difference pairs negatively with a nef class (so it is certainly not
    /// effective).
    Unknown { negative_against_nef: Option<String> },
}

/// Is a2 - a1 a nonnegative combination of the tracked curve classes?
pub fn leq_effective<K: Scalar>(
    model: &BlowupModel,
    a1: &DivClass<K>,
    a2: &DivClass<K>,
    curves: &[TrackedCurve],
) -> Result<EffectiveVerdict<K>, LatticeError> {
    let diff = a2.sub(a1);
    let sample = diff.coeffs[0].clone();
    if diff.is_zero() {
        return Ok(EffectiveVerdict::Yes(vec![sample.s_zero(); curves.len()]));
    }
    if curves.is_empty() {
        return Ok(unknown_with_certificate(model, &diff));
    }
    let rank = model.rank();
    let rows: Vec<Vec<K>> = (0..rank)
        .map(|r| {
            curves
                .iter()
                .map(|c| lift_rat(&sample, &c.class.coeffs[r]))
                .collect()
        })
        .collect();
    let a = Matrix::from_rows(rows);
    match feasible_nonneg(&a, &diff.coeffs) {
        None => Err(LatticeError::SignUnknown),
        Some(Some(w)) => Ok(EffectiveVerdict::Yes(w)),
        Some(None) => Ok(unknown_with_certificate(model, &diff)),
    }
}

fn unknown_with_certificate<K: Scalar>(model: &BlowupModel, diff: &DivClass<K>) -> EffectiveVerdict<K> {
    // Pair with the ambient nef generators: a negative pairing certifies
    // non-effectivity outright.
    let sample = &diff.coeffs[0];
    for i in 0..model.ambient.ambient_rank() {
        let mut nef = DivClass::zero_like(sample, model.rank());
        nef.coeffs[i] = sample.s_one();
        let pairing = intersection(model, diff, &nef);
        if pairing.s_try_sign() == Some(-1) {
            return EffectiveVerdict::Unknown {
                negative_against_nef: Some(format!(
                    "pairs negatively with nef {}",
                    model.basis_label(i)
                )),
            };
        }
    }
    EffectiveVerdict::Unknown { negative_against_nef: None }
}

/// Embed a rational into the scalar field through its 1.
pub fn lift_rat<K: Scalar>(sample: &K, r: &Rat) -> K {
    let one = sample.s_one();
    let num = big_to_scalar(&one, r.numer());
    let den = big_to_scalar(&one, r.denom());
    num.s_div(&den)
}

fn big_to_scalar<K: Scalar>(one: &K, n: &BigInt) -> K {
    // binary expansion; |n| is small in practice (class coefficients)
    let mut acc = one.s_zero();
    let mut base = one.clone();
    let mag = n.magnitude();
    for i in 0..mag.bits() {
        if mag.bit(i) {
            acc = acc.s_add(&base);
        }
        base = base.s_add(&base);
    }
    if n.is_negative() {
        acc = acc.s_neg();
    }
    acc
}

/// Nefness against the tracked set: (alpha . C) >= 0 for every tracked curve
/// and against the ambient fiber/hyperplane classes.
pub fn nef_on_tracked<K: Scalar>(
    model: &BlowupModel,
    alpha: &DivClass<K>,
    curves: &[TrackedCurve],
) -> Result<(bool, Vec<String>), LatticeError> {
    let sample = &alpha.coeffs[0];
    let mut violators = Vec::new();
    for i in 0..model.ambient.ambient_rank() {
        let mut nef = DivClass::zero_like(sample, model.rank());
        nef.coeffs[i] = sample.s_one();
        let p = intersection(model, alpha, &nef);
        match p.s_try_sign() {
            Some(s) if s < 0 => violators.push(model.basis_label(i)),
            Some(_) => {}
            None => return Err(LatticeError::SignUnknown),
        }
    }
    for c in curves {
        let cls = DivClass {
            coeffs: c.class.coeffs.iter().map(|r| lift_rat(sample, r)).collect(),
        };
        let p = intersection(model, alpha, &cls);
        match p.s_try_sign() {
            Some(s) if s < 0 => violators.push(c.label.clone()),
            Some(_) => {}
            None => return Err(LatticeError::SignUnknown),
        }
    }
    Ok((violators.is_empty(), violators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn p2_model_2pts() -> BlowupModel {
        BlowupModel::new(
            Ambient::P2,
            vec![
                PointSpec::Proper(SurfacePoint::p2(1, 0, 0)),
                PointSpec::Proper(SurfacePoint::p2(0, 1, 0)),
            ],
        )
    }

    #[test]
    fn pairing_examples() {
        let bare = BlowupModel::bare(Ambient::P2);
        let h = DivClass::from_i64(&[1]);
        assert_eq!(intersection(&bare, &h, &h), rat_int(1));

        let m = p2_model_2pts();
        let e1 = DivClass::from_i64(&[0, 1, 0]);
        assert_eq!(intersection(&m, &e1, &e1), rat_int(-1));
        // (3H - e1 - e2, H - e1) = 3 - 1 = 2
        let a = DivClass::from_i64(&[3, -1, -1]);
        let b = DivClass::from_i64(&[1, -1, 0]);
        assert_eq!(intersection(&m, &a, &b), rat_int(2));

        let q = BlowupModel::bare(Ambient::P1xP1);
        let f1 = DivClass::from_i64(&[1, 0]);
        let f2 = DivClass::from_i64(&[0, 1]);
        assert_eq!(intersection(&q, &f1, &f2), rat_int(1));
        assert_eq!(intersection(&q, &f1, &f1), rat_int(0));
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(canonical_class(&BlowupModel::bare(Ambient::P2)), DivClass::from_i64(&[-3]));
        assert_eq!(canonical_class(&p2_model_2pts()), DivClass::from_i64(&[-3, 1, 1]));
        assert_eq!(
            canonical_class(&BlowupModel::bare(Ambient::P1xP1)),
            DivClass::from_i64(&[-2, -2])
        );
        // K^2 = 9 - n on P^2 with n blowups, 8 - n on P1xP1
        let m = p2_model_2pts();
        let k = canonical_class(&m);
        assert_eq!(intersection(&m, &k, &k), rat_int(7));
    }

    #[test]
    fn signatures() {
        let m = p2_model_2pts();
        assert_eq!(m.signature(), (1, 2));
        let q = BlowupModel::bare(Ambient::P1xP1);
        assert_eq!(q.signature(), (1, 1));
    }

    #[test]
    fn effectivity_verdicts() {
        let m = p2_model_2pts();
        let e1 = TrackedCurve::new(&m, "e1", CurveLocus::ExcStrict(0));
        let curves = vec![e1];
        let a = DivClass::from_i64(&[2, 0, 0]);
        let b = DivClass::from_i64(&[2, -1, 0]);
        // b + e1 = a: a - b = e1 effective
        match leq_effective(&m, &b, &a, &curves).unwrap() {
            EffectiveVerdict::Yes(w) => assert_eq!(w[0], rat_int(1)),
            v => panic!("expected Yes, got {:?}", v),
        }
        // a1 = a2 -> Yes with zero witness
        match leq_effective(&m, &a, &a, &curves).unwrap() {
            EffectiveVerdict::Yes(w) => assert!(w.iter().all(|x| x.is_zero())),
            v => panic!("expected Yes, got {:?}", v),
        }
        // difference -H: certified non-effective against nef H
        let zero = DivClass::from_i64(&[0, 0, 0]);
        let neg_h = DivClass::from_i64(&[-1, 0, 0]);
        match leq_effective(&m, &zero, &neg_h, &curves).unwrap() {
            EffectiveVerdict::Unknown { negative_against_nef } => {
                assert!(negative_against_nef.is_some())
            }
            v => panic!("expected Unknown, got {:?}", v),
        }
    }

    #[test]
    fn nef_checks() {
        let m = p2_model_2pts();
        let e1 = TrackedCurve::new(&m, "e1", CurveLocus::ExcStrict(0));
        let curves = vec![e1];
        let h = DivClass::from_i64(&[1, 0, 0]);
        assert!(nef_on_tracked(&m, &h, &curves).unwrap().0);
        let e1c = DivClass::from_i64(&[0, 1, 0]);
        let (ok, viol) = nef_on_tracked(&m, &e1c, &curves).unwrap();
        assert!(!ok);
        assert_eq!(viol, vec!["e1".to_string()]);
        // boundary nef: H - e1 against a line through p1 of the same class
        let line = DivClass::from_i64(&[1, -1, 0]);
        let lc = TrackedCurve {
            label: "line".into(),
            locus: CurveLocus::Ambient(MPoly::var(3, 2)),
            class: line.clone(),
        };
        let (ok2, _) = nef_on_tracked(&m, &line, &[lc]).unwrap();
        assert!(ok2);
    }
}
