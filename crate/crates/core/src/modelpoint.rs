//! Points of the blowup model and exact evaluation of the lifted map there.
//!
//! A model point is an ambient rational point away from the blowup centers,
//! or a point on the exceptional curve over a center: for a proper center,
//! a tangent direction in the canonical chart; for an infinitely near
//! center, the second-order parameter in the aligned blowup chart.
//!
//! Evaluation at exceptional points parametrizes a rational arc through the
//! point, pushes its truncated Taylor jet through the coordinate lift, and
//! reads the limit off the image jet. Two arcs with independent generic
//! tails must agree; disagreement means the lifted map is not defined there
//! and is reported as such.

use crate::charts::{self, Chart};
use crate::exact::Rat;
use crate::lattice::{Ambient, BlowupModel, CurveLocus, PointSpec, SurfacePoint, TrackedCurve};
use crate::birmap::PolyMap;
use crate::mpoly::{self, MPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelPoint {
    Ambient(SurfacePoint),
    OnExc { center: usize, param: (BigInt, BigInt) },
}

impl ModelPoint {
    pub fn on_exc(center: usize, p: i64, q: i64) -> Self {
        let param = charts::primitive_pair(
            &Rat::from_integer(BigInt::from(p)),
            &Rat::from_integer(BigInt::from(q)),
        );
        ModelPoint::OnExc { center, param }
    }
}

impl std::fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelPoint::Ambient(p) => write!(f, "{}", p),
            ModelPoint::OnExc { center, param } => {
                write!(f, "E{}[{}:{}]", center, param.0, param.1)
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelEvalError {
    #[error("the ambient point is a blowup center; use an exceptional point")]
    AmbientIsCenter,
    #[error("indeterminate at this model point")]
    Indeterminate,
    #[error("jet truncation exhausted")]
    Truncated,
    #[error("tower of infinitely near points too deep")]
    TowerTooDeep,
}

/// Truncated power series in t over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    pub coeffs: Vec<Rat>,
}

impl TSeries {
    pub fn zero(t: usize) -> Self {
        TSeries { coeffs: vec![Rat::zero(); t] }
    }

    pub fn constant(t: usize, c: Rat) -> Self {
        let mut s = Self::zero(t);
        s.coeffs[0] = c;
        s
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        let t = self.trunc().min(o.trunc());
        TSeries {
            coeffs: (0..t).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let t = self.trunc().min(o.trunc());
        TSeries {
            coeffs: (0..t).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let t = self.trunc().min(o.trunc());
        let mut coeffs = vec![Rat::zero(); t];
        for i in 0..t {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..t - i {
                if !o.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &o.coeffs[j];
                }
            }
        }
        TSeries { coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn shift_down(&self, k: usize) -> Self {
        TSeries { coeffs: self.coeffs[k..].to_vec() }
    }

    /// Division by a series with nonzero constant term.
    pub fn div_unit(&self, o: &Self) -> Self {
        assert!(!o.coeffs[0].is_zero(), "division by non-unit series");
        let t = self.trunc().min(o.trunc());
        let mut out = vec![Rat::zero(); t];
        for n in 0..t {
            let mut acc = self.coeffs[n].clone();
            for k in 0..n {
                acc -= &out[k] * &o.coeffs[n - k];
            }
            out[n] = acc / &o.coeffs[0];
        }
        TSeries { coeffs: out }
    }
}

fn eval_series(p: &MPoly, args: &[TSeries]) -> TSeries {
    let t = args[0].trunc();
    let mut pows: Vec<Vec<TSeries>> = Vec::with_capacity(p.nvars);
    for v in 0..p.nvars {
        let d = p.deg_in(v) as usize;
        let mut col = Vec::with_capacity(d + 1);
        col.push(TSeries::constant(t, Rat::one()));
        for k in 1..=d {
            let prev = col[k - 1].clone();
            col.push(prev.mul(&args[v]));
        }
        pows.push(col);
    }
    let mut acc = TSeries::zero(t);
    for (e, c) in &p.terms {
        let mut term = TSeries::constant(t, Rat::from_integer(c.clone()));
        for v in 0..p.nvars {
            if e[v] > 0 {
                term = term.mul(&pows[v][e[v] as usize]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Deterministic "generic" integers for germ tails.
fn generic_int(variant: u64, k: u64) -> BigInt {
    let x = variant
        .wrapping_mul(6364136223846793005)
        .wrapping_add(k.wrapping_mul(1442695040888963407));
    BigInt::from((x >> 33) as i64 % 97 + 2)
}

struct GermChart {
    chart: Chart,
    u: TSeries,
    v: TSeries,
}

/// Ambient coordinate jets of an arc through/approaching the model point.
fn encode_germ(
    model: &BlowupModel,
    p: &ModelPoint,
    variant: u64,
    trunc: usize,
) -> Result<Vec<TSeries>, ModelEvalError> {
    match p {
        ModelPoint::Ambient(sp) => {
            let mut out = Vec::new();
            for (i, c) in sp.coords.iter().enumerate() {
                let mut s = TSeries::constant(trunc, Rat::from_integer(c.clone()));
                if trunc > 2 {
                    s.coeffs[1] = Rat::from_integer(generic_int(variant, i as u64));
                    s.coeffs[2] = Rat::from_integer(generic_int(variant, 10 + i as u64));
                }
                out.push(s);
            }
            Ok(out)
        }
        ModelPoint::OnExc { center, param } => {
            let gc = match &model.points[*center] {
                PointSpec::Proper(q) => {
                    let chart = charts::chart_at(q);
                    let (d0, d1) = param;
                    let mut u = TSeries::constant(trunc, chart.base.0.clone());
                    let mut v = TSeries::constant(trunc, chart.base.1.clone());
                    u.coeffs[1] = Rat::from_integer(d0.clone());
                    v.coeffs[1] = Rat::from_integer(d1.clone());
                    if trunc > 2 {
                        u.coeffs[2] = Rat::from_integer(generic_int(variant, 21));
                        v.coeffs[2] = Rat::from_integer(generic_int(variant, 22));
                    }
                    GermChart { chart, u, v }
                }
                PointSpec::InfinitelyNear { parent, direction } => {
                    let q = match &model.points[*parent] {
                        PointSpec::Proper(q) => q,
                        _ => return Err(ModelEvalError::TowerTooDeep),
                    };
                    let chart = charts::chart_at(q);
                    let (d0, d1) = direction;
                    let (vnum, vden) = param;
                    let mut u = TSeries::constant(trunc, chart.base.0.clone());
                    let mut v = TSeries::constant(trunc, chart.base.1.clone());
                    if !vden.is_zero() {
                        // finite second-order parameter V
                        let vv = Rat::new(vnum.clone(), vden.clone());
                        u.coeffs[1] = Rat::from_integer(d0.clone());
                        v.coeffs[1] = Rat::from_integer(d1.clone());
                        if !d0.is_zero() {
                            v.coeffs[2] = vv;
                            if trunc > 3 {
                                u.coeffs[3] = Rat::from_integer(generic_int(variant, 31));
                                v.coeffs[3] = Rat::from_integer(generic_int(variant, 32));
                            }
                        } else {
                            u.coeffs[2] = vv;
                            if trunc > 3 {
                                u.coeffs[3] = Rat::from_integer(generic_int(variant, 31));
                                v.coeffs[3] = Rat::from_integer(generic_int(variant, 32));
                            }
                        }
                    } else {
                        // V = infinity: the crossing with the strict transform
                        // of the first exceptional curve
                        u.coeffs[2] = Rat::from_integer(d0.clone());
                        v.coeffs[2] = Rat::from_integer(d1.clone());
                        if !d0.is_zero() {
                            v.coeffs[3] = Rat::one();
                        } else {
                            u.coeffs[3] = Rat::one();
                        }
                        if trunc > 4 {
                            u.coeffs[4] = Rat::from_integer(generic_int(variant, 41));
                            v.coeffs[4] = Rat::from_integer(generic_int(variant, 42));
                        }
                    }
                    GermChart { chart, u, v }
                }
            };
            Ok(chart_to_ambient(model.ambient, &gc, trunc))
        }
    }
}

fn chart_to_ambient(ambient: Ambient, gc: &GermChart, trunc: usize) -> Vec<TSeries> {
    let n = ambient.nvars();
    let (a, b) = gc.chart.affine;
    let (p1, p2) = gc.chart.pivots;
    let mut out = vec![TSeries::zero(trunc); n];
    for i in 0..n {
        if i == a {
            out[i] = gc.u.clone();
        } else if i == b {
            out[i] = gc.v.clone();
        } else if i == p1 || i == p2 {
            out[i] = TSeries::constant(trunc, Rat::one());
        }
    }
    out
}

/// Read the model point off an image jet.
fn decode_germ(model: &BlowupModel, series: &[TSeries]) -> Result<ModelPoint, ModelEvalError> {
    let groups: Vec<Vec<usize>> = match model.ambient {
        Ambient::P2 => vec![vec![0, 1, 2]],
        Ambient::P1xP1 => vec![vec![0, 1], vec![2, 3]],
    };
    let mut shifted: Vec<TSeries> = series.to_vec();
    for g in &groups {
        let val = g
            .iter()
            .filter_map(|&i| series[i].valuation())
            .min()
            .ok_or(ModelEvalError::Truncated)?;
        for &i in g {
            shifted[i] = series[i].shift_down(val);
        }
    }
    // the point at t = 0
    let consts: Vec<Rat> = shifted.iter().map(|s| s.coeffs[0].clone()).collect();
    let denom: BigInt = consts.iter().fold(BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: Vec<BigInt> = consts
        .iter()
        .map(|c| (c * Rat::from_integer(denom.clone())).to_integer())
        .collect();
    let point = SurfacePoint::new(model.ambient, ints);

    let center = model.points.iter().position(|ps| match ps {
        PointSpec::Proper(q) => *q == point,
        _ => false,
    });
    let Some(center) = center else {
        return Ok(ModelPoint::Ambient(point));
    };

    // direction at the center in its canonical chart
    let chart = charts::chart_at(&point);
    let (a, b) = chart.affine;
    let (p1, p2) = chart.pivots;
    let u = shifted[a].div_unit(&shifted[p1]);
    let v = shifted[b].div_unit(&shifted[p2]);
    let au = u.sub(&TSeries::constant(u.trunc(), chart.base.0.clone()));
    let bv = v.sub(&TSeries::constant(v.trunc(), chart.base.1.clone()));
    let va = au.valuation();
    let vb = bv.valuation();
    let k = match (va, vb) {
        (None, None) => return Err(ModelEvalError::Truncated),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (Some(x), Some(y)) => x.min(y),
    };
    let ca = au.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
    let cb = bv.coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
    let dir = charts::primitive_pair(&ca, &cb);

    // does the direction point at an infinitely near center?
    let child = model.points.iter().position(|ps| match ps {
        PointSpec::InfinitelyNear { parent, direction } => {
            *parent == center && charts::pairs_equal(direction, &dir)
        }
        _ => false,
    });
    let Some(child) = child else {
        return Ok(ModelPoint::OnExc { center, param: dir });
    };

    // second-order parameter in the aligned chart
    let (d0, d1) = match &model.points[child] {
        PointSpec::InfinitelyNear { direction, .. } => direction.clone(),
        _ => unreachable!(),
    };
    let (main, other, dm, dof) = if !d0.is_zero() {
        (au, bv, d0, d1)
    } else {
        (bv, au, d1, d0)
    };
    // V = dm * (dm*other - dof*main) / main^2
    let num = other
        .scale(&Rat::from_integer(dm.clone()))
        .sub(&main.scale(&Rat::from_integer(dof.clone())))
        .scale(&Rat::from_integer(dm.clone()));
    let den = main.mul(&main);
    let vn = num.valuation();
    let vd = den.valuation();
    let m = match (vn, vd) {
        (None, None) => return Err(ModelEvalError::Truncated),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (Some(x), Some(y)) => x.min(y),
    };
    if m >= num.trunc() {
        return Err(ModelEvalError::Truncated);
    }
    let pn = num.coeffs.get(m).cloned().unwrap_or_else(Rat::zero);
    let pd = den.coeffs.get(m).cloned().unwrap_or_else(Rat::zero);
    let param = charts::primitive_pair(&pn, &pd);

    // no third level supported
    let has_grandchild = model.points.iter().any(|ps| match ps {
        PointSpec::InfinitelyNear { parent, .. } => *parent == child,
        _ => false,
    });
    if has_grandchild {
        return Err(ModelEvalError::TowerTooDeep);
    }
    Ok(ModelPoint::OnExc { center: child, param })
}

/// Evaluate the lifted map at a model point. Exceptional-point images are
/// computed through two independent arcs and must agree.
pub fn evaluate_model(
    map: &PolyMap,
    model: &BlowupModel,
    p: &ModelPoint,
) -> Result<ModelPoint, ModelEvalError> {
    if let ModelPoint::Ambient(sp) = p {
        let is_center = model.points.iter().any(|ps| matches!(ps, PointSpec::Proper(q) if q == sp));
        if is_center {
            return Err(ModelEvalError::AmbientIsCenter);
        }
        if let Some(img) = map.evaluate(sp) {
            let img_is_center = model
                .points
                .iter()
                .any(|ps| matches!(ps, PointSpec::Proper(q) if *q == img));
            if !img_is_center {
                return Ok(ModelPoint::Ambient(img));
            }
        } else {
            // ambient indeterminacy away from the centers stays indeterminate
            // on the model
            return Err(ModelEvalError::Indeterminate);
        }
    }
    let mut trunc = 8usize;
    loop {
        let mut decoded = Vec::new();
        for variant in [1u64, 2u64] {
            let germ = encode_germ(model, p, variant, trunc)?;
            let image: Vec<TSeries> = map.components.iter().map(|c| eval_series(c, &germ)).collect();
            match decode_germ(model, &image) {
                Ok(mp) => decoded.push(mp),
                Err(ModelEvalError::Truncated) => {
                    decoded.clear();
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if decoded.len() == 2 {
            if decoded[0] == decoded[1] {
                return Ok(decoded[0].clone());
            }
            return Err(ModelEvalError::Indeterminate);
        }
        trunc *= 2;
        if trunc > 64 {
            return Err(ModelEvalError::Truncated);
        }
    }
}

/// Exact incidence of a model point with a tracked curve (strict transform).
pub fn model_point_on_curve(model: &BlowupModel, curve: &TrackedCurve, p: &ModelPoint) -> bool {
    match (&curve.locus, p) {
        (CurveLocus::Ambient(poly), ModelPoint::Ambient(sp)) => {
            poly.eval_int(&sp.coords).is_zero()
        }
        (CurveLocus::Ambient(poly), ModelPoint::OnExc { center, param }) => {
            match &model.points[*center] {
                PointSpec::Proper(q) => {
                    let local = charts::local_form(model.ambient, poly, q);
                    if local.is_zero() || mpoly::order_at_origin(&local) == 0 {
                        return false;
                    }
                    let cone = mpoly::lowest_part(&local);
                    cone.eval_int(&[param.0.clone(), param.1.clone()]).is_zero()
                }
                PointSpec::InfinitelyNear { parent, direction } => {
                    let q = match &model.points[*parent] {
                        PointSpec::Proper(q) => q,
                        _ => return false,
                    };
                    let local = charts::local_form(model.ambient, poly, q);
                    if local.is_zero() || mpoly::order_at_origin(&local) == 0 {
                        return false;
                    }
                    let lifted = mpoly::blowup_toward(&local, (&direction.0, &direction.1));
                    if lifted.is_zero() || mpoly::order_at_origin(&lifted) == 0 {
                        return false;
                    }
                    // E-parameter V corresponds to the direction [t:s] = [W:V]
                    let cone = mpoly::lowest_part(&lifted);
                    cone.eval_int(&[param.1.clone(), param.0.clone()]).is_zero()
                }
            }
        }
        (CurveLocus::ExcStrict(i), ModelPoint::OnExc { center, param }) => {
            if center == i {
                return true;
            }
            // the crossing point of a child exceptional curve with this one
            match &model.points[*center] {
                PointSpec::InfinitelyNear { parent, .. } if parent == i => {
                    param.1.is_zero() && !param.0.is_zero()
                }
                _ => false,
            }
        }
        (CurveLocus::ExcStrict(_), ModelPoint::Ambient(_)) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CurveLocus;

    /// sigma0 with the three coordinate points blown up: the standard
    /// resolution of the quadratic involution.
    fn sigma0_model() -> (PolyMap, BlowupModel) {
        let map = PolyMap::parse(Ambient::P2, &["y*z", "x*z", "x*y"]).unwrap();
        let model = BlowupModel::new(
            Ambient::P2,
            vec![
                PointSpec::Proper(SurfacePoint::p2(1, 0, 0)),
                PointSpec::Proper(SurfacePoint::p2(0, 1, 0)),
                PointSpec::Proper(SurfacePoint::p2(0, 0, 1)),
            ],
        );
        (map, model)
    }

    #[test]
    fn sigma0_swaps_lines_and_exceptionals() {
        let (map, model) = sigma0_model();
        // {x=0} is contracted to [1:0:0] ambiently; on the model it maps onto
        // the exceptional curve over [1:0:0]. A point of {x=0}: [0:2:1].
        let p = ModelPoint::Ambient(SurfacePoint::p2(0, 2, 1));
        let img = evaluate_model(&map, &model, &p).unwrap();
        match img {
            ModelPoint::OnExc { center: 0, .. } => {}
            other => panic!("expected a point on E0, got {}", other),
        }
        // and the exceptional point maps back to the line {x=0}
        let back = evaluate_model(&map, &model, &img).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn generic_points_stay_ambient() {
        let (map, model) = sigma0_model();
        let p = ModelPoint::Ambient(SurfacePoint::p2(1, 2, 3));
        let img = evaluate_model(&map, &model, &p).unwrap();
        assert_eq!(img, ModelPoint::Ambient(SurfacePoint::p2(6, 3, 2)));
    }

    #[test]
    fn incidence_tests() {
        let (_, model) = sigma0_model();
        // line {x=0} passes through centers [0:1:0] and [0:0:1]
        let line = TrackedCurve::new(&model, "x", CurveLocus::Ambient(MPoly::var(3, 0)));
        // direction of {x=0} at [0:1:0]: chart coords (x, z): tangent along z
        assert!(model_point_on_curve(&model, &line, &ModelPoint::on_exc(1, 0, 1)));
        assert!(!model_point_on_curve(&model, &line, &ModelPoint::on_exc(1, 1, 0)));
        let off = ModelPoint::Ambient(SurfacePoint::p2(1, 5, 5));
        assert!(!model_point_on_curve(&model, &line, &off));
        let e1 = TrackedCurve::new(&model, "E0", CurveLocus::ExcStrict(0));
        assert!(model_point_on_curve(&model, &e1, &ModelPoint::on_exc(0, 1, 1)));
        assert!(!model_point_on_curve(&model, &e1, &ModelPoint::on_exc(1, 1, 1)));
    }

    #[test]
    fn center_rejected_as_ambient_point() {
        let (map, model) = sigma0_model();
        let p = ModelPoint::Ambient(SurfacePoint::p2(1, 0, 0));
        assert_eq!(evaluate_model(&map, &model, &p), Err(ModelEvalError::AmbientIsCenter));
    }
}
