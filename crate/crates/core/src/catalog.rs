//! Built-in example families with their stabilized blowup models and action
//! ledgers, plus a bare quadratic-involution fixture.
//!
//! All catalog data is re-verified at construction time: declared inverses,
//! indeterminacy and exceptional data, strict-transform classes, and the
//! action matrices (adjointness, push-pull, ramification). Degenerate
//! parameters are rejected with a diagnostic rather than silently accepted.

use crate::birmap::{BasePointData, BirMap, ExcCurve, PolyMap};
use crate::exact::Rat;
use crate::lattice::{
    Ambient, BlowupModel, CurveLocus, DivClass, PointSpec, SurfacePoint, TrackedCurve,
};
use crate::modelpoint::ModelPoint;
use crate::mpoly::{parse_poly, MPoly};
use crate::picdyn::{
    as1_check, build_pullback_matrix, verify_action, ActionLedger, CurveStep, MapSystem,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("catalog data failed verification: {0}")]
    Verification(String),
}

fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn p4(src: &str) -> MPoly {
    parse_poly(src, &["z0", "z1", "w0", "w1"]).unwrap().0
}

fn p3(src: &str) -> MPoly {
    parse_poly(src, &["x", "y", "z"]).unwrap().0
}

fn class(coeffs: &[i64]) -> DivClass<Rat> {
    DivClass::from_i64(coeffs)
}

/// Basis class vector with a 1 at `idx` (0 = first ambient class).
fn unit_class(rank: usize, idx: usize) -> DivClass<Rat> {
    let mut c = vec![Rat::zero(); rank];
    c[idx] = Rat::one();
    DivClass { coeffs: c }
}

/// The standard quadratic involution on the bare plane, which is not
/// algebraically stable there: a negative fixture.
pub fn sigma0_system() -> MapSystem {
    let map = PolyMap::parse(Ambient::P2, &["y*z", "x*z", "x*y"]).unwrap();
    let model = BlowupModel::bare(Ambient::P2);
    let pts = [
        SurfacePoint::p2(1, 0, 0),
        SurfacePoint::p2(0, 1, 0),
        SurfacePoint::p2(0, 0, 1),
    ];
    let lines = [("x=0", "x"), ("y=0", "y"), ("z=0", "z")];
    let exc: Vec<ExcCurve> = lines
        .iter()
        .zip([0usize, 1, 2])
        .map(|((label, src), i)| ExcCurve {
            poly: p3(src),
            image: pts[i].clone(),
            label: label.to_string(),
        })
        .collect();
    let bir = BirMap {
        forward: map.clone(),
        backward: map,
        ind_f: pts.to_vec(),
        ind_finv: pts.to_vec(),
        exc_f: exc.clone(),
        exc_finv: exc,
        base_points_f: pts
            .iter()
            .map(|p| BasePointData { point: PointSpec::Proper(p.clone()), multiplicities: vec![1] })
            .collect(),
    };
    let tracked: Vec<TrackedCurve> = lines
        .iter()
        .map(|(label, src)| TrackedCurve::new(&model, label, CurveLocus::Ambient(p3(src))))
        .collect();
    let mut forward_step = BTreeMap::new();
    let mut backward_step = BTreeMap::new();
    for (label, _) in &lines {
        forward_step.insert(label.to_string(), CurveStep::Contracted);
        backward_step.insert(label.to_string(), CurveStep::Contracted);
    }
    MapSystem {
        name: "sigma0".into(),
        map: bir,
        model,
        tracked,
        ledger: ActionLedger {
            pull_exc_cols: vec![],
            push_exc_cols: vec![],
            forward_step,
            backward_step,
        },
        model_ind_f: pts.iter().cloned().map(ModelPoint::Ambient).collect(),
        model_ind_finv: pts.iter().cloned().map(ModelPoint::Ambient).collect(),
        ind_images_f: vec![vec!["x=0".into()], vec!["y=0".into()], vec!["z=0".into()]],
        ind_images_finv: vec![vec!["x=0".into()], vec!["y=0".into()], vec!["z=0".into()]],
    }
}

/// The family f(z, w) = (w + 1 - eps, z (w - eps)/(w + 1)) on P^1 x P^1,
/// stabilized by blowing up the colliding orbit of contracted points.
/// Supported: eps = 1/k (k >= 4) and eps = k/(k+2) (k >= 3).
pub fn catalog_df_epsilon(eps: &Rat) -> Result<MapSystem, CatalogError> {
    let one = Rat::one();
    let is_first_family = eps.numer().is_one() && eps.denom() >= &BigInt::from(4);
    let is_second_family = {
        // eps = k/(k+2)
        let k = eps.numer();
        let k2 = eps.denom();
        k2 - k == BigInt::from(2) && k >= &BigInt::from(3)
    };
    if !is_first_family && !is_second_family {
        return Err(CatalogError::Unsupported(format!(
            "eps = {} is not 1/k (k >= 4) or k/(k+2) (k >= 3)",
            rat_str(eps)
        )));
    }

    // coordinate lift of f and its inverse
    let e = rat_str(eps);
    let one_minus = rat_str(&(&one - eps));
    let forward = PolyMap::parse(
        Ambient::P1xP1,
        &[
            &format!("w0 + {}*w1", one_minus),
            "w1",
            &format!("z0*(w0 - {}*w1)", e),
            "z1*(w0 + w1)",
        ],
    )
    .map_err(|er| CatalogError::Verification(er.to_string()))?;
    let backward = PolyMap::parse(
        Ambient::P1xP1,
        &[
            &format!("w0*(z0 + {}*z1)", e),
            "w1*(z0 - z1)",
            &format!("z0 - {}*z1", one_minus),
            "z1",
        ],
    )
    .map_err(|er| CatalogError::Verification(er.to_string()))?;

    let pt = |z: Rat, w_inf: bool, w: Rat| -> SurfacePoint {
        if w_inf {
            SurfacePoint::new(
                Ambient::P1xP1,
                vec![z.numer().clone(), z.denom().clone(), BigInt::one(), BigInt::zero()],
            )
        } else {
            SurfacePoint::from_affine(z, w)
        }
    };
    let z_inf = |w: Rat| {
        SurfacePoint::new(
            Ambient::P1xP1,
            vec![BigInt::one(), BigInt::zero(), w.numer().clone(), w.denom().clone()],
        )
    };

    // ambient indeterminacy and exceptional data (independent of the model)
    let ind_f = vec![pt(Rat::zero(), false, -one.clone()), z_inf(eps.clone())];
    let ind_finv = vec![pt(one.clone(), false, Rat::zero()), pt(-eps.clone(), true, Rat::zero())];
    let exc_f = vec![
        ExcCurve {
            poly: p4(&format!("w0 - {}*w1", e)),
            image: pt(one.clone(), false, Rat::zero()),
            label: "w=eps".into(),
        },
        ExcCurve {
            poly: p4("w0 + w1"),
            image: pt(-eps.clone(), true, Rat::zero()),
            label: "w=-1".into(),
        },
    ];
    let exc_finv = vec![
        ExcCurve {
            poly: p4(&format!("z0 + {}*z1", e)),
            image: pt(Rat::zero(), false, -one.clone()),
            label: "z=-eps".into(),
        },
        ExcCurve {
            poly: p4("z0 - z1"),
            image: z_inf(eps.clone()),
            label: "z=1".into(),
        },
    ];
    let base_points_f = vec![
        BasePointData {
            point: PointSpec::Proper(pt(Rat::zero(), false, -one.clone())),
            multiplicities: vec![0, 1],
        },
        BasePointData {
            point: PointSpec::Proper(z_inf(eps.clone())),
            multiplicities: vec![0, 1],
        },
    ];
    let bir = BirMap {
        forward,
        backward,
        ind_f,
        ind_finv,
        exc_f,
        exc_finv,
        base_points_f,
    };

    // the blown-up orbit
    let centers: Vec<SurfacePoint> = if is_first_family {
        // p_j = (1 - j*eps, -j*eps), j = 0..k, ending at (0, -1)
        let k: i64 = eps.denom().try_into().map_err(|_| {
            CatalogError::Unsupported("k too large".into())
        })?;
        (0..=k)
            .map(|j| {
                let je = Rat::from_integer(BigInt::from(j)) * eps;
                pt(&one - &je, false, -je.clone())
            })
            .collect()
    } else {
        // x_{2j} = (c_j, inf), x_{2j+1} = (inf, c_j), c_j = -eps + j(1-eps),
        // j = 0..k, ending at (inf, eps)
        let k: i64 = eps.numer().try_into().map_err(|_| {
            CatalogError::Unsupported("k too large".into())
        })?;
        let mut out = Vec::new();
        for j in 0..=k {
            let c = -eps + Rat::from_integer(BigInt::from(j)) * (&one - eps);
            out.push(pt(c.clone(), true, Rat::zero()));
            out.push(z_inf(c));
        }
        out
    };
    let n = centers.len();
    let model = BlowupModel::new(
        Ambient::P1xP1,
        centers.iter().cloned().map(PointSpec::Proper).collect(),
    );
    let rank = model.rank();

    // tracked curves
    let mut tracked = vec![
        TrackedCurve::new(&model, "w=eps", CurveLocus::Ambient(p4(&format!("w0 - {}*w1", e)))),
        TrackedCurve::new(&model, "w=-1", CurveLocus::Ambient(p4("w0 + w1"))),
        TrackedCurve::new(&model, "z=-eps", CurveLocus::Ambient(p4(&format!("z0 + {}*z1", e)))),
        TrackedCurve::new(&model, "z=1", CurveLocus::Ambient(p4("z0 - z1"))),
        // the line w = z - 1
        TrackedCurve::new(&model, "per_line", CurveLocus::Ambient(p4("w0*z1 - w1*z0 + w1*z1"))),
        TrackedCurve::new(&model, "w=inf", CurveLocus::Ambient(p4("w1"))),
        TrackedCurve::new(&model, "z=inf", CurveLocus::Ambient(p4("z1"))),
    ];
    for i in 0..n {
        tracked.push(TrackedCurve::new(&model, &format!("E{}", i), CurveLocus::ExcStrict(i)));
    }

    // exceptional columns of the ledger
    let mut pull_exc_cols = Vec::new();
    let mut push_exc_cols = Vec::new();
    for i in 0..n {
        // f^* E_i
        pull_exc_cols.push(if i == 0 {
            // the curve mapping onto E_0 is the first contracted curve
            if is_first_family {
                class_of(&tracked, "w=eps", rank)
            } else {
                class_of(&tracked, "w=-1", rank)
            }
        } else {
            unit_class(rank, 2 + (i - 1))
        });
        // f_* E_i
        push_exc_cols.push(if i == n - 1 {
            if is_first_family {
                class_of(&tracked, "z=-eps", rank)
            } else {
                class_of(&tracked, "z=1", rank)
            }
        } else {
            unit_class(rank, 2 + (i + 1))
        });
    }

    // strict-transform steps
    let mut forward_step = BTreeMap::new();
    let mut backward_step = BTreeMap::new();
    let (first_exc, last_exc, still_exc_f, still_exc_b) = if is_first_family {
        ("w=eps", "z=-eps", "w=-1", "z=1")
    } else {
        ("w=-1", "z=1", "w=eps", "z=-eps")
    };
    forward_step.insert(first_exc.to_string(), CurveStep::To("E0".into()));
    backward_step.insert(first_exc.to_string(), CurveStep::Exit);
    forward_step.insert(last_exc.to_string(), CurveStep::Exit);
    backward_step.insert(last_exc.to_string(), CurveStep::To(format!("E{}", n - 1)));
    forward_step.insert(still_exc_f.to_string(), CurveStep::Contracted);
    backward_step.insert(still_exc_f.to_string(), CurveStep::Exit);
    forward_step.insert(still_exc_b.to_string(), CurveStep::Exit);
    backward_step.insert(still_exc_b.to_string(), CurveStep::Contracted);
    forward_step.insert("per_line".into(), CurveStep::To("per_line".into()));
    backward_step.insert("per_line".into(), CurveStep::To("per_line".into()));
    if is_first_family {
        forward_step.insert("w=inf".into(), CurveStep::To("z=inf".into()));
        forward_step.insert("z=inf".into(), CurveStep::To("w=inf".into()));
        backward_step.insert("w=inf".into(), CurveStep::To("z=inf".into()));
        backward_step.insert("z=inf".into(), CurveStep::To("w=inf".into()));
    } else {
        forward_step.insert("w=inf".into(), CurveStep::To("z=inf".into()));
        forward_step.insert("z=inf".into(), CurveStep::To("w=inf".into()));
        backward_step.insert("w=inf".into(), CurveStep::To("z=inf".into()));
        backward_step.insert("z=inf".into(), CurveStep::To("w=inf".into()));
    }
    for i in 0..n {
        forward_step.insert(
            format!("E{}", i),
            if i + 1 < n {
                CurveStep::To(format!("E{}", i + 1))
            } else {
                CurveStep::To(last_exc.to_string())
            },
        );
        backward_step.insert(
            format!("E{}", i),
            if i >= 1 {
                CurveStep::To(format!("E{}", i - 1))
            } else {
                CurveStep::To(first_exc.to_string())
            },
        );
    }

    let (model_ind_f, images_f, model_ind_finv, images_finv) = if is_first_family {
        (
            vec![ModelPoint::Ambient(z_inf(eps.clone()))],
            vec![vec!["z=1".to_string()]],
            vec![ModelPoint::Ambient(pt(-eps.clone(), true, Rat::zero()))],
            vec![vec!["w=-1".to_string()]],
        )
    } else {
        (
            vec![ModelPoint::Ambient(pt(Rat::zero(), false, -one.clone()))],
            vec![vec!["z=-eps".to_string()]],
            vec![ModelPoint::Ambient(pt(one.clone(), false, Rat::zero()))],
            vec![vec!["w=eps".to_string()]],
        )
    };

    let sys = MapSystem {
        name: format!("df(eps={})", rat_str(eps)),
        map: bir,
        model,
        tracked,
        ledger: ActionLedger { pull_exc_cols, push_exc_cols, forward_step, backward_step },
        model_ind_f,
        model_ind_finv,
        ind_images_f: images_f,
        ind_images_finv: images_finv,
    };
    validate_system(&sys)?;
    Ok(sys)
}

fn class_of(tracked: &[TrackedCurve], label: &str, rank: usize) -> DivClass<Rat> {
    let c = tracked
        .iter()
        .find(|c| c.label == label)
        .unwrap_or_else(|| panic!("tracked curve {} missing", label));
    assert_eq!(c.class.coeffs.len(), rank);
    c.class.clone()
}

/// The composition f = sigma o tau of the two involutions
///   sigma: [x:y:z] -> [xyz + (-y+z)x^2 : xyz + (-x+z)y^2 : xyz]
///   tau:   [x:y:z] -> [x : bx + (a+1)z - y : z],
/// on the model blown up at [1:0:0], [1:b:0], [0:1:0] and one point
/// infinitely near [0:1:0].
pub fn catalog_bd_sigma_tau(a: &Rat, b: &Rat) -> Result<MapSystem, CatalogError> {
    if a.is_zero() || b.is_zero() {
        return Err(CatalogError::Unsupported(
            "a = 0 or b = 0 degenerates the blowup model".into(),
        ));
    }
    let astr = rat_str(a);
    let bstr = rat_str(b);
    let a1 = rat_str(&(a + Rat::one()));
    // f = sigma o tau: components x*Qt, ell*Qt, x*z*ell with
    // ell = b x + (a+1) z - y and Qt = Q o tau
    let ell = format!("({}*x + {}*z - y)", bstr, a1);
    let qt = format!(
        "(-({})*x^2 + x*y + ({} - ({}))*x*z - y*z + ({})*z^2)",
        bstr, bstr, astr, a1
    );
    let forward = PolyMap::parse(
        Ambient::P2,
        &[
            &format!("x*{}", qt),
            &format!("{}*{}", ell, qt),
            &format!("x*z*{}", ell),
        ],
    )
    .map_err(|er| CatalogError::Verification(er.to_string()))?;
    // f^-1 = tau o sigma: [xQ : b*xQ + (a+1)*xyz - yQ : xyz]
    let q = "(x*z + y*z - x*y)";
    let backward = PolyMap::parse(
        Ambient::P2,
        &[
            &format!("x*{}", q),
            &format!("{}*x*{} + {}*x*y*z - y*{}", bstr, q, a1, q),
            "x*y*z",
        ],
    )
    .map_err(|er| CatalogError::Verification(er.to_string()))?;

    let ptq = |c0: &Rat, c1: &Rat, c2: &Rat| {
        let l = c0.denom() * c1.denom() * c2.denom();
        SurfacePoint::new(
            Ambient::P2,
            vec![
                (c0 * Rat::from_integer(l.clone())).to_integer(),
                (c1 * Rat::from_integer(l.clone())).to_integer(),
                (c2 * Rat::from_integer(l)).to_integer(),
            ],
        )
    };
    let zero = Rat::zero();
    let one = Rat::one();
    let q1 = SurfacePoint::p2(1, 0, 0);
    let q2 = ptq(&one, b, &zero);
    let q3 = SurfacePoint::p2(0, 1, 0);
    let ind_f = vec![ptq(&zero, &(a + Rat::one()), &one), q2.clone(), q3.clone()];
    let ind_finv = vec![q3.clone(), q1.clone(), SurfacePoint::p2(0, 0, 1)];

    let exc_f = vec![
        ExcCurve { poly: p3("x"), image: q3.clone(), label: "x=0".into() },
        ExcCurve {
            poly: parse_poly(&ell, &["x", "y", "z"]).unwrap().0,
            image: q1.clone(),
            label: "Ltau".into(),
        },
        ExcCurve {
            poly: parse_poly(&qt, &["x", "y", "z"]).unwrap().0,
            image: SurfacePoint::p2(0, 0, 1),
            label: "Qtau".into(),
        },
    ];
    let exc_finv = vec![
        ExcCurve { poly: p3("x"), image: q3.clone(), label: "x=0".into() },
        ExcCurve { poly: p3("y"), image: q2.clone(), label: "y=0".into() },
        ExcCurve {
            poly: parse_poly(q, &["x", "y", "z"]).unwrap().0,
            image: ptq(&zero, &(a + Rat::one()), &one),
            label: "Q".into(),
        },
    ];
    // base points of f: tau-images of sigma's base scheme
    let dir_a1 = crate::charts::primitive_pair(a, &Rat::one());
    let base_points_f = vec![
        BasePointData {
            point: PointSpec::Proper(ptq(&zero, &(a + Rat::one()), &one)),
            multiplicities: vec![2],
        },
        BasePointData { point: PointSpec::Proper(q2.clone()), multiplicities: vec![1] },
        BasePointData { point: PointSpec::Proper(q3.clone()), multiplicities: vec![1] },
        BasePointData {
            point: PointSpec::InfinitelyNear { parent: 1, direction: dir_a1.clone() },
            multiplicities: vec![1],
        },
        BasePointData {
            point: PointSpec::InfinitelyNear {
                parent: 2,
                direction: (BigInt::one(), BigInt::one()),
            },
            multiplicities: vec![1],
        },
    ];
    let bir = BirMap { forward, backward, ind_f, ind_finv, exc_f, exc_finv, base_points_f };

    let model = BlowupModel::new(
        Ambient::P2,
        vec![
            PointSpec::Proper(q1.clone()),
            PointSpec::Proper(q2.clone()),
            PointSpec::Proper(q3.clone()),
            PointSpec::InfinitelyNear { parent: 2, direction: (BigInt::one(), BigInt::one()) },
        ],
    );
    let rank = model.rank();

    let tracked = vec![
        TrackedCurve::new(&model, "z=0", CurveLocus::Ambient(p3("z"))),
        TrackedCurve::new(&model, "E3", CurveLocus::ExcStrict(2)),
        TrackedCurve::new(&model, "E1", CurveLocus::ExcStrict(0)),
        TrackedCurve::new(&model, "E2", CurveLocus::ExcStrict(1)),
        TrackedCurve::new(&model, "E4", CurveLocus::ExcStrict(3)),
        TrackedCurve::new(&model, "x=0", CurveLocus::Ambient(p3("x"))),
        TrackedCurve::new(
            &model,
            "Ltau",
            CurveLocus::Ambient(parse_poly(&ell, &["x", "y", "z"]).unwrap().0),
        ),
        TrackedCurve::new(
            &model,
            "Qtau",
            CurveLocus::Ambient(parse_poly(&qt, &["x", "y", "z"]).unwrap().0),
        ),
        TrackedCurve::new(&model, "y=0", CurveLocus::Ambient(p3("y"))),
        TrackedCurve::new(
            &model,
            "Q",
            CurveLocus::Ambient(parse_poly(q, &["x", "y", "z"]).unwrap().0),
        ),
    ];

    // exceptional columns (basis H, E1, E2, E3, E4):
    //   f^*E1 = H, f^*E2 = E1, f^*E3 = H - E4, f^*E4 = H - E3
    //   f_*E1 = E2, f_*E2 = H, f_*E3 = H - E4, f_*E4 = H - E3
    let pull_exc_cols = vec![
        class(&[1, 0, 0, 0, 0]),
        class(&[0, 1, 0, 0, 0]),
        class(&[1, 0, 0, 0, -1]),
        class(&[1, 0, 0, -1, 0]),
    ];
    let push_exc_cols = vec![
        class(&[0, 0, 1, 0, 0]),
        class(&[1, 0, 0, 0, 0]),
        class(&[1, 0, 0, 0, -1]),
        class(&[1, 0, 0, -1, 0]),
    ];
    let mut forward_step = BTreeMap::new();
    let mut backward_step = BTreeMap::new();
    for (label, fwd, bwd) in [
        ("z=0", CurveStep::To("z=0".into()), CurveStep::To("z=0".into())),
        ("E3", CurveStep::To("E3".into()), CurveStep::To("E3".into())),
        ("x=0", CurveStep::To("E4".into()), CurveStep::To("E4".into())),
        ("E4", CurveStep::To("x=0".into()), CurveStep::To("x=0".into())),
        ("E1", CurveStep::To("E2".into()), CurveStep::To("E2".into())),
        ("E2", CurveStep::To("E1".into()), CurveStep::To("E1".into())),
        ("Ltau", CurveStep::Contracted, CurveStep::Exit),
        ("Qtau", CurveStep::Contracted, CurveStep::Exit),
        ("y=0", CurveStep::Exit, CurveStep::Contracted),
        ("Q", CurveStep::Exit, CurveStep::Contracted),
    ] {
        forward_step.insert(label.to_string(), fwd);
        backward_step.insert(label.to_string(), bwd);
    }

    let model_ind_f = vec![
        ModelPoint::Ambient(ptq(&zero, &(a + Rat::one()), &one)),
        ModelPoint::OnExc { center: 1, param: dir_a1 },
    ];
    let model_ind_finv = vec![
        ModelPoint::Ambient(SurfacePoint::p2(0, 0, 1)),
        ModelPoint::OnExc { center: 0, param: (BigInt::one(), BigInt::one()) },
    ];
    let sys = MapSystem {
        name: format!("bd(a={},b={})", astr, bstr),
        map: bir,
        model,
        tracked,
        ledger: ActionLedger { pull_exc_cols, push_exc_cols, forward_step, backward_step },
        model_ind_f,
        model_ind_finv,
        ind_images_f: vec![vec!["Q".into()], vec!["y=0".into()]],
        ind_images_finv: vec![vec!["Qtau".into()], vec!["Ltau".into()]],
    };
    validate_system(&sys)?;
    // lambda > 1 is part of the contract for this family
    let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger)
        .map_err(|e| CatalogError::Verification(e.to_string()))?;
    let (_, lambda, _, _) = crate::picdyn::dynamical_degree(&pull)
        .map_err(|e| CatalogError::Verification(e.to_string()))?;
    let above_one = lambda
        .sub(&crate::algnum::AlgNum::one(&lambda.field))
        .try_sign()
        .ok_or_else(|| CatalogError::Verification("lambda sign unknown".into()))?;
    if above_one <= 0 {
        return Err(CatalogError::Unsupported(
            "parameters give dynamical degree <= 1".into(),
        ));
    }
    Ok(sys)
}

/// Construction-time verification shared by the catalog families: declared
/// map data, ledger shape, and the action identities.
pub fn validate_system(sys: &MapSystem) -> Result<(), CatalogError> {
    let rep = sys
        .map
        .verify()
        .map_err(|e| CatalogError::Verification(e.to_string()))?;
    if let Some(no) = &rep.noether {
        if !(no.degree_sum_ok && no.degree_square_ok) {
            return Err(CatalogError::Verification(format!(
                "base point consistency failed: {}",
                no.details
            )));
        }
    }
    for label_list in sys.ind_images_f.iter().chain(sys.ind_images_finv.iter()) {
        for l in label_list {
            if sys.tracked_by_label(l).is_none() {
                return Err(CatalogError::Verification(format!(
                    "indeterminacy image curve {} not tracked",
                    l
                )));
            }
        }
    }
    let (pull, push) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger)
        .map_err(|e| CatalogError::Verification(e.to_string()))?;
    let action = verify_action(&pull, &push, sys)
        .map_err(|e| CatalogError::Verification(e.to_string()))?;
    if !action.adjoint_ok {
        return Err(CatalogError::Verification("adjointness failed".into()));
    }
    if !action.push_pull_ok {
        return Err(CatalogError::Verification(format!(
            "push-pull inequality failed on {:?}",
            action.push_pull_failures
        )));
    }
    if !action.ramification_ok && !sys.model.points.is_empty() {
        return Err(CatalogError::Verification(
            "ramification identity failed against declared exceptional curves".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn sigma0_fails_as1_at_two() {
        let sys = sigma0_system();
        let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        assert_eq!(pull, vec![vec![BigInt::from(2)]]);
        let rep = as1_check(&sys, &pull, 4).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.degree_failure_at, Some(2));
        assert_eq!(rep.orbit_violation.as_ref().map(|(_, k)| *k), Some(0));
    }

    #[test]
    fn df_quarter_builds_and_verifies() {
        let sys = catalog_df_epsilon(&rat(1, 4)).unwrap();
        assert_eq!(sys.model.points.len(), 5);
        let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        // char poly factor t^5 - t^3 - t^2 - t - 1 appears
        let (_, _, chi, minp) = crate::picdyn::dynamical_degree(&pull).unwrap();
        assert_eq!(minp, crate::zpoly::ZPoly::from_i64(&[-1, -1, -1, -1, 0, 1]));
        assert_eq!(chi.degree(), 7);
    }

    #[test]
    fn df_rejects_unsupported_eps() {
        assert!(catalog_df_epsilon(&rat(1, 3)).is_err());
        assert!(catalog_df_epsilon(&rat(2, 5)).is_err());
        assert!(catalog_df_epsilon(&rat(1, 2)).is_err());
    }

    #[test]
    fn df_second_family_builds() {
        let sys = catalog_df_epsilon(&rat(3, 5)).unwrap();
        assert_eq!(sys.model.points.len(), 8);
        let (pull, push) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        let action = verify_action(&pull, &push, &sys).unwrap();
        assert!(action.adjoint_ok && action.push_pull_ok && action.ramification_ok);
    }

    #[test]
    fn bd_builds_and_verifies() {
        let sys = catalog_bd_sigma_tau(&rat(2, 1), &rat(1, 1)).unwrap();
        let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        let (_, _, _, minp) = crate::picdyn::dynamical_degree(&pull).unwrap();
        // lambda is the largest root of t^3 - t^2 - 2t - 1
        assert_eq!(minp, crate::zpoly::ZPoly::from_i64(&[-1, -2, -1, 1]));
    }

    #[test]
    fn bd_rejects_degenerate() {
        assert!(catalog_bd_sigma_tau(&rat(0, 1), &rat(1, 1)).is_err());
        assert!(catalog_bd_sigma_tau(&rat(2, 1), &rat(0, 1)).is_err());
    }

    #[test]
    fn df_as1_passes_on_model() {
        let sys = catalog_df_epsilon(&rat(1, 4)).unwrap();
        let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        let rep = as1_check(&sys, &pull, 6).unwrap();
        assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn bd_as1_passes_on_model() {
        let sys = catalog_bd_sigma_tau(&rat(2, 1), &rat(1, 1)).unwrap();
        let (pull, _) = build_pullback_matrix(&sys.map, &sys.model, &sys.ledger).unwrap();
        let rep = as1_check(&sys, &pull, 6).unwrap();
        assert!(rep.pass, "{:?}", rep);
    }
}
