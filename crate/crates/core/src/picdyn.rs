//! Pullback and pushforward matrices on the blowup model, their verification
//! (adjointness, push-pull, ramification), algebraic-stability checks, the
//! dynamical degree as a certified algebraic number, and the invariant
//! classes theta+/theta-.

use crate::algnum::{AlgNum, NumberField};
use crate::birmap::{self, BirMap, PolyMap};
use crate::exact::Rat;
use crate::factor::factor_monic;
use crate::lattice::{
    ample_generator, canonical_class, intersection, lift_rat, nef_on_tracked, Ambient,
    BlowupModel, DivClass, EffectiveVerdict, TrackedCurve,
};
use crate::matrix::{charpoly_bareiss, feasible_nonneg, Matrix, Scalar};
use crate::modelpoint::{evaluate_model, ModelEvalError, ModelPoint};
use crate::mpoly::MPoly;
use crate::zpoly::{isolate_largest_real_root, Sturm, ZPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Where the strict transform of a tracked curve goes in one step.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveStep {
    To(String),
    Contracted,
    /// leaves the tracked set; the sequence is undetermined past this point
    Exit,
}

/// Declared combinatorial data determining the exceptional columns of the
/// action matrices and the strict-transform dynamics of tracked curves.
#[derive(Clone, Debug)]
pub struct ActionLedger {
    /// column of f^* on each exceptional basis class e_i (integer classes)
    pub pull_exc_cols: Vec<DivClass<Rat>>,
    /// column of f_* on each exceptional basis class
    pub push_exc_cols: Vec<DivClass<Rat>>,
    pub forward_step: BTreeMap<String, CurveStep>,
    pub backward_step: BTreeMap<String, CurveStep>,
}

/// The full analysis bundle for one map on one model.
#[derive(Clone, Debug)]
pub struct MapSystem {
    pub name: String,
    pub map: BirMap,
    pub model: BlowupModel,
    pub tracked: Vec<TrackedCurve>,
    pub ledger: ActionLedger,
    /// indeterminacy of the lifted map, as model points
    pub model_ind_f: Vec<ModelPoint>,
    pub model_ind_finv: Vec<ModelPoint>,
    /// tracked labels of the curves forming f(x) for each model ind point
    pub ind_images_f: Vec<Vec<String>>,
    pub ind_images_finv: Vec<Vec<String>>,
}

impl MapSystem {
    pub fn tracked_by_label(&self, label: &str) -> Option<&TrackedCurve> {
        self.tracked.iter().find(|c| c.label == label)
    }

    /// Polynomials worth trying as common factors during composition.
    pub fn reduction_candidates(&self) -> Vec<MPoly> {
        let mut out = Vec::new();
        for c in self.map.exc_f.iter().chain(self.map.exc_finv.iter()) {
            out.push(c.poly.clone());
        }
        for c in &self.tracked {
            if let crate::lattice::CurveLocus::Ambient(p) = &c.locus {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    /// Class of the indeterminacy-image divisor f(x) (resp. f^{-1}(x)).
    pub fn ind_image_class(&self, idx: usize, forward: bool) -> DivClass<Rat> {
        let labels = if forward { &self.ind_images_f[idx] } else { &self.ind_images_finv[idx] };
        let mut acc = DivClass::zero_like(&Rat::zero(), self.model.rank());
        for l in labels {
            let c = self.tracked_by_label(l).expect("ind image label not tracked");
            acc = acc.add(&c.class);
        }
        acc
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PicError {
    #[error("ledger incomplete: {0}")]
    LedgerIncomplete(String),
    #[error("action verification failed: {0}")]
    ActionCheck(String),
    #[error("eigenspace dimension {0} != 1: degenerate spectral data")]
    Degenerate(usize),
    #[error("sign not certifiable")]
    SignUnknown,
    #[error(transparent)]
    Map(#[from] birmap::MapError),
}

/// Integer matrices of f^* and f_* in the model basis. Ambient columns come
/// from degrees and computed base-point multiplicities; exceptional columns
/// from the ledger.
pub fn build_pullback_matrix(
    map: &BirMap,
    model: &BlowupModel,
    ledger: &ActionLedger,
) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>), PicError> {
    let rank = model.rank();
    if ledger.pull_exc_cols.len() != model.points.len()
        || ledger.push_exc_cols.len() != model.points.len()
    {
        return Err(PicError::LedgerIncomplete(format!(
            "need {} exceptional columns",
            model.points.len()
        )));
    }
    let ar = model.ambient.ambient_rank();
    let mut pull = vec![vec![BigInt::zero(); rank]; rank];
    let mut push = vec![vec![BigInt::zero(); rank]; rank];
    for (mat, pm) in [(&mut pull, &map.forward), (&mut push, &map.backward)] {
        let ambient_cols = ambient_pullback_columns(pm, model);
        for (j, col) in ambient_cols.into_iter().enumerate() {
            for i in 0..rank {
                mat[i][j] = col[i].clone();
            }
        }
    }
    for (j, col) in ledger.pull_exc_cols.iter().enumerate() {
        if !col.is_integral() {
            return Err(PicError::LedgerIncomplete("non-integral ledger column".into()));
        }
        for i in 0..rank {
            pull[i][ar + j] = col.coeffs[i].to_integer();
        }
    }
    for (j, col) in ledger.push_exc_cols.iter().enumerate() {
        for i in 0..rank {
            push[i][ar + j] = col.coeffs[i].to_integer();
        }
    }
    Ok((pull, push))
}

/// Columns of the pullback on the ambient basis classes.
fn ambient_pullback_columns(pm: &PolyMap, model: &BlowupModel) -> Vec<Vec<BigInt>> {
    let rank = model.rank();
    let ar = model.ambient.ambient_rank();
    match model.ambient {
        Ambient::P2 => {
            let d = pm.degree();
            let mut col = vec![BigInt::zero(); rank];
            col[0] = BigInt::from(d);
            for i in 0..model.points.len() {
                let m = birmap::multiplicity_at(pm, &model.points, i);
                col[ar + i] = -BigInt::from(m);
            }
            vec![col]
        }
        Ambient::P1xP1 => {
            let bd = pm.bidegrees();
            let mut cols = Vec::new();
            for pair in [[0usize, 1], [2usize, 3]] {
                let sub = PolyMap {
                    ambient: pm.ambient,
                    components: vec![
                        pm.components[pair[0]].clone(),
                        pm.components[pair[1]].clone(),
                        pm.components[pair[0]].clone(),
                        pm.components[pair[1]].clone(),
                    ],
                };
                let row = if pair[0] == 0 { bd[0] } else { bd[1] };
                let mut col = vec![BigInt::zero(); rank];
                col[0] = BigInt::from(row[0]);
                col[1] = BigInt::from(row[1]);
                for i in 0..model.points.len() {
                    let m = birmap::multiplicity_at(&sub, &model.points, i);
                    col[ar + i] = -BigInt::from(m);
                }
                cols.push(col);
            }
            cols
        }
    }
}

#[derive(Debug, Clone)]
pub struct ActionReport {
    pub adjoint_ok: bool,
    pub push_pull_ok: bool,
    pub push_pull_failures: Vec<String>,
    pub ramification_ok: bool,
    pub ramification_witness: Option<Vec<Rat>>,
}

/// Adjointness, push-pull monotonicity on a test set, and the ramification
/// identity K - f^*K = [R_f] against the declared exceptional curves.
pub fn verify_action(
    pull: &[Vec<BigInt>],
    push: &[Vec<BigInt>],
    sys: &MapSystem,
) -> Result<ActionReport, PicError> {
    let model = &sys.model;
    let rank = model.rank();
    // (i) adjointness: G * M_push = M_pull^T * G, integrally
    let mut adjoint_ok = true;
    'outer: for i in 0..rank {
        for j in 0..rank {
            // (G M_push)_{ij} = sum_k G_{ik} push_{kj}
            let mut lhs = BigInt::zero();
            let mut rhs = BigInt::zero();
            for k in 0..rank {
                lhs += BigInt::from(model.gram(i, k)) * &push[k][j];
                rhs += &pull[k][i] * BigInt::from(model.gram(k, j));
            }
            if lhs != rhs {
                adjoint_ok = false;
                break 'outer;
            }
        }
    }
    // (ii) push-pull inequality on the test set
    let mut test_set: Vec<(String, DivClass<Rat>)> =
        vec![("ample".into(), ample_generator(model))];
    let ar = model.ambient.ambient_rank();
    for i in 0..model.points.len() {
        let mut c = ample_generator(model);
        c.coeffs[ar + i] = -Rat::one();
        test_set.push((format!("ample-e{}", i + 1), c));
        let mut e = DivClass::zero_like(&Rat::zero(), rank);
        e.coeffs[ar + i] = Rat::one();
        test_set.push((format!("e{}", i + 1), e));
    }
    let mut push_pull_failures = Vec::new();
    for (label, alpha) in &test_set {
        let img = apply_int(pull, alpha);
        let before = intersection(model, alpha, alpha);
        let after = intersection(model, &img, &img);
        if after < before {
            push_pull_failures.push(label.clone());
        }
    }
    // (iii) ramification: K - f^*K as a nonnegative combination of the
    // declared f-exceptional curve classes
    let k = canonical_class(model);
    let fk = apply_int(pull, &k);
    let rf = k.sub(&fk);
    let exc_classes: Vec<DivClass<Rat>> = sys
        .map
        .exc_f
        .iter()
        .map(|c| crate::lattice::strict_transform_class(model, &c.poly))
        .collect();
    let (ramification_ok, ramification_witness) = if exc_classes.is_empty() {
        (rf.is_zero(), None)
    } else {
        let rows: Vec<Vec<Rat>> = (0..rank)
            .map(|r| exc_classes.iter().map(|c| c.coeffs[r].clone()).collect())
            .collect();
        match feasible_nonneg(&Matrix::from_rows(rows), &rf.coeffs) {
            Some(Some(w)) => (true, Some(w)),
            Some(None) => (false, None),
            None => return Err(PicError::SignUnknown),
        }
    };
    Ok(ActionReport {
        adjoint_ok,
        push_pull_ok: push_pull_failures.is_empty(),
        push_pull_failures,
        ramification_ok,
        ramification_witness,
    })
}

pub fn apply_int(m: &[Vec<BigInt>], v: &DivClass<Rat>) -> DivClass<Rat> {
    let rank = m.len();
    let mut out = vec![Rat::zero(); rank];
    for i in 0..rank {
        for j in 0..rank {
            out[i] += Rat::from_integer(m[i][j].clone()) * &v.coeffs[j];
        }
    }
    DivClass { coeffs: out }
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct As1Report {
    pub pass: bool,
    pub horizon: u32,
    pub degree_failure_at: Option<u32>,
    pub orbit_violation: Option<(ModelPoint, u32)>,
    pub upgraded_to_all_k: bool,
    pub notes: Vec<String>,
}

/// Two independent stability checks to a horizon: composed degrees against
/// matrix predictions, and exact model orbits of Ind_{f^-1} avoiding Ind_f.
pub fn as1_check(sys: &MapSystem, pull: &[Vec<BigInt>], horizon: u32) -> Result<As1Report, PicError> {
    assert!(horizon >= 2);
    let mut report = As1Report {
        pass: true,
        horizon,
        degree_failure_at: None,
        orbit_violation: None,
        upgraded_to_all_k: true,
        notes: Vec::new(),
    };
    // (a) degree sequence
    let candidates = sys.reduction_candidates();
    let f = &sys.map.forward;
    let mut g = f.clone();
    let mut mn = pull.to_vec();
    for n in 2..=horizon {
        g = birmap::compose(f, &g, &candidates)?;
        mn = mat_mul_int(&mn, pull);
        if !degrees_match(sys.model.ambient, &g, &mn, &sys.model) {
            report.pass = false;
            report.degree_failure_at = Some(n);
            break;
        }
    }
    // (b) orbit scan of the model indeterminacy points of the inverse
    'points: for start in &sys.model_ind_finv {
        if sys.model_ind_f.contains(start) {
            report.pass = false;
            report.orbit_violation = Some((start.clone(), 0));
            break;
        }
        let mut seen = vec![start.clone()];
        let mut cur = start.clone();
        let mut closed = false;
        for k in 1..=horizon {
            match evaluate_model(&sys.map.forward, &sys.model, &cur) {
                Ok(next) => {
                    if sys.model_ind_f.contains(&next) {
                        report.pass = false;
                        report.orbit_violation = Some((start.clone(), k));
                        break 'points;
                    }
                    if seen.contains(&next) {
                        closed = true;
                        break;
                    }
                    seen.push(next.clone());
                    cur = next;
                }
                Err(ModelEvalError::Indeterminate) | Err(ModelEvalError::AmbientIsCenter) => {
                    report.pass = false;
                    report.orbit_violation = Some((start.clone(), k));
                    break 'points;
                }
                Err(e) => {
                    report.notes.push(format!("orbit of {} stopped: {}", start, e));
                    report.upgraded_to_all_k = false;
                    break;
                }
            }
        }
        if !closed {
            report.upgraded_to_all_k = false;
        }
    }
    Ok(report)
}

fn degrees_match(
    ambient: Ambient,
    g: &PolyMap,
    mn: &[Vec<BigInt>],
    model: &BlowupModel,
) -> bool {
    match ambient {
        Ambient::P2 => {
            let d = g.degree();
            mn[0][0] == BigInt::from(d)
        }
        Ambient::P1xP1 => {
            // column of F1 is (d11, d12, ...), column of F2 is (d21, d22, ...)
            let bd = g.bidegrees();
            let _ = model;
            mn[0][0] == BigInt::from(bd[0][0])
                && mn[1][0] == BigInt::from(bd[0][1])
                && mn[0][1] == BigInt::from(bd[1][0])
                && mn[1][1] == BigInt::from(bd[1][1])
        }
    }
}

/// Certified spectral data of the action.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub field: Arc<NumberField>,
    pub lambda: AlgNum,
    pub char_poly: ZPoly,
    pub min_poly: ZPoly,
    pub theta_plus: DivClass<AlgNum>,
    pub theta_minus: DivClass<AlgNum>,
    /// (theta+ . theta+) > 0 certified: the map is strictly birational
    pub strictly_birational: bool,
    pub normalization: String,
}

/// Largest real eigenvalue of the pullback matrix as a certified algebraic
/// number: characteristic polynomial by fraction-free elimination, Sturm
/// isolation of the largest real root, minimal polynomial by factorization.
pub fn dynamical_degree(pull: &[Vec<BigInt>]) -> Result<(Arc<NumberField>, AlgNum, ZPoly, ZPoly), PicError> {
    let chi = charpoly_bareiss(pull);
    let sf = chi.squarefree_part();
    let (mut lo, mut hi) =
        isolate_largest_real_root(&sf).ok_or_else(|| PicError::ActionCheck("no real eigenvalue".into()))?;
    // select the irreducible factor vanishing on the isolating interval
    let factors = factor_monic(&sf);
    let minpoly = loop {
        let candidates: Vec<&ZPoly> = factors
            .iter()
            .map(|(f, _)| f)
            .filter(|f| {
                let s = Sturm::new(&f.to_qpoly());
                s.count_roots(&lo, &hi) == 1
            })
            .collect();
        match candidates.len() {
            1 => break candidates[0].clone(),
            0 => return Err(PicError::ActionCheck("isolation lost the root".into())),
            _ => {
                crate::zpoly::refine_root(&sf, &mut lo, &mut hi);
            }
        }
    };
    // shrink until the minimal polynomial itself changes sign
    while minpoly.eval_rat(&lo).is_zero()
        || minpoly.eval_rat(&hi).is_zero()
        || (minpoly.eval_rat(&lo).is_positive() == minpoly.eval_rat(&hi).is_positive()
            && minpoly.degree() > 1)
    {
        crate::zpoly::refine_root(&sf, &mut lo, &mut hi);
    }
    let field = NumberField::new(minpoly.clone(), lo, hi);
    let lambda = AlgNum::gen(&field);
    Ok((field, lambda, chi, minpoly))
}

/// Eigenclasses for the dynamical degree: theta+ in ker(M_pull - lambda),
/// theta- in ker(M_push - lambda), normalized so (theta+ . theta-) = 1.
pub fn invariant_classes(
    pull: &[Vec<BigInt>],
    push: &[Vec<BigInt>],
    sys: &MapSystem,
) -> Result<SpectralData, PicError> {
    let (field, lambda, char_poly, min_poly) = dynamical_degree(pull)?;
    let one_test = lambda.sub(&AlgNum::one(&field));
    if one_test.try_sign() == Some(0) {
        return Err(PicError::ActionCheck("lambda = 1: no expanding class".into()));
    }
    let model = &sys.model;
    let theta_plus = eigenvector(pull, &field, &lambda)?;
    let theta_minus_raw = eigenvector(push, &field, &lambda)?;
    // orient against the ample generator
    let ample: DivClass<AlgNum> = lift_class(&lambda, &ample_generator(model));
    let mut tp = theta_plus;
    let sp = intersection(model, &tp, &ample).try_sign().ok_or(PicError::SignUnknown)?;
    if sp < 0 {
        tp = tp.neg();
    } else if sp == 0 {
        return Err(PicError::ActionCheck("theta+ orthogonal to the ample class".into()));
    }
    let mut tm = theta_minus_raw;
    let sm = intersection(model, &tm, &ample).try_sign().ok_or(PicError::SignUnknown)?;
    if sm < 0 {
        tm = tm.neg();
    }
    let pairing = intersection(model, &tp, &tm);
    match pairing.try_sign() {
        Some(1) => {}
        Some(_) => return Err(PicError::ActionCheck("(theta+ . theta-) not positive".into())),
        None => return Err(PicError::SignUnknown),
    }
    // scale theta- so the pairing is exactly 1
    let tm = tm.scale(&pairing.inv());
    // residual check: exact eigen equations
    let residual_p = apply_alg(pull, &tp).sub(&tp.scale(&lambda));
    let residual_m = apply_alg(push, &tm).sub(&tm.scale(&lambda));
    if !residual_p.is_zero() || !residual_m.is_zero() {
        return Err(PicError::ActionCheck("eigen residual nonzero".into()));
    }
    let big = intersection(model, &tp, &tp).try_sign().ok_or(PicError::SignUnknown)?;
    Ok(SpectralData {
        field,
        lambda,
        char_poly,
        min_poly,
        theta_plus: tp,
        theta_minus: tm,
        strictly_birational: big > 0,
        normalization: "(theta+ . theta-) = 1; theta+ oriented against the ample class".into(),
    })
}

fn eigenvector(
    m: &[Vec<BigInt>],
    field: &Arc<NumberField>,
    lambda: &AlgNum,
) -> Result<DivClass<AlgNum>, PicError> {
    let n = m.len();
    let rows: Vec<Vec<AlgNum>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = AlgNum::from_rat(field, Rat::from_integer(m[i][j].clone()));
                    if i == j {
                        e = e.sub(lambda);
                    }
                    e
                })
                .collect()
        })
        .collect();
    let mat = Matrix::from_rows(rows);
    let kernel = mat.kernel_basis();
    if kernel.len() != 1 {
        return Err(PicError::Degenerate(kernel.len()));
    }
    Ok(DivClass { coeffs: kernel.into_iter().next().unwrap() })
}

pub fn lift_class(sample: &AlgNum, c: &DivClass<Rat>) -> DivClass<AlgNum> {
    DivClass { coeffs: c.coeffs.iter().map(|r| lift_rat(sample, r)).collect() }
}

pub fn apply_alg(m: &[Vec<BigInt>], v: &DivClass<AlgNum>) -> DivClass<AlgNum> {
    let n = m.len();
    let sample = &v.coeffs[0];
    let mut out = vec![sample.s_zero(); n];
    for i in 0..n {
        for j in 0..n {
            let c = lift_rat(sample, &Rat::from_integer(m[i][j].clone()));
            out[i] = out[i].add(&c.mul(&v.coeffs[j]));
        }
    }
    DivClass { coeffs: out }
}

#[derive(Debug, Clone)]
pub struct As2Report {
    pub pass: bool,
    pub pairings: Vec<(String, String, i8)>, // (point, side, sign)
}

/// (theta+ . f(x)) > 0 for every model indeterminacy point of f, and the
/// mirror statement for theta- and f^{-1}.
pub fn as2_check(sys: &MapSystem, spectral: &SpectralData) -> Result<As2Report, PicError> {
    let mut pairings = Vec::new();
    let mut pass = true;
    for (idx, x) in sys.model_ind_f.iter().enumerate() {
        let cls = lift_class(&spectral.lambda, &sys.ind_image_class(idx, true));
        let s = intersection(&sys.model, &spectral.theta_plus, &cls)
            .try_sign()
            .ok_or(PicError::SignUnknown)?;
        pairings.push((x.to_string(), "theta+".into(), s));
        if s <= 0 {
            pass = false;
        }
    }
    for (idx, x) in sys.model_ind_finv.iter().enumerate() {
        let cls = lift_class(&spectral.lambda, &sys.ind_image_class(idx, false));
        let s = intersection(&sys.model, &spectral.theta_minus, &cls)
            .try_sign()
            .ok_or(PicError::SignUnknown)?;
        pairings.push((x.to_string(), "theta-".into(), s));
        if s <= 0 {
            pass = false;
        }
    }
    Ok(As2Report { pass, pairings })
}

/// sup-norm residuals of lambda^{-n} M^n alpha against the projection onto
/// theta+, as certified intervals.
pub fn convergence_check(
    pull: &[Vec<BigInt>],
    sys: &MapSystem,
    spectral: &SpectralData,
    alpha: &DivClass<Rat>,
    horizon: u32,
    bits: u32,
) -> Vec<crate::interval::RatInterval> {
    let model = &sys.model;
    let a = lift_class(&spectral.lambda, alpha);
    let coeff = intersection(model, &a, &spectral.theta_minus);
    let target = spectral.theta_plus.scale(&coeff);
    let mut out = Vec::new();
    let mut v = a.clone();
    let mut lam_pow = AlgNum::one(&spectral.field);
    for _n in 0..=horizon {
        // residual vector v / lambda^n - target
        let inv = lam_pow.inv();
        let mut max_iv: Option<crate::interval::RatInterval> = None;
        for i in 0..model.rank() {
            let d = v.coeffs[i].mul(&inv).sub(&target.coeffs[i]);
            let iv = d.interval(bits).abs();
            max_iv = Some(match max_iv {
                None => iv,
                Some(m) => {
                    if iv.hi > m.hi {
                        crate::interval::RatInterval::new(m.lo.max(iv.lo.clone()), iv.hi)
                    } else {
                        crate::interval::RatInterval::new(m.lo.max(iv.lo.clone()), m.hi)
                    }
                }
            });
        }
        out.push(max_iv.unwrap());
        v = apply_alg(pull, &v);
        lam_pow = lam_pow.mul(&spectral.lambda);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynamical_degree_rank_one() {
        // M = (d) on the bare plane
        let m = vec![vec![BigInt::from(2)]];
        let (_, lam, chi, minp) = dynamical_degree(&m).unwrap();
        assert_eq!(chi, ZPoly::from_i64(&[-2, 1]));
        assert_eq!(minp, ZPoly::from_i64(&[-2, 1]));
        assert_eq!(lam.sub(&AlgNum::from_rat(&lam.field, Rat::from_integer(BigInt::from(2)))).try_sign(), Some(0));
    }

    #[test]
    fn dynamical_degree_companion() {
        // companion of x^2 - x - 1: golden ratio, interval within (1.6, 1.62)
        let m = vec![
            vec![BigInt::zero(), BigInt::one()],
            vec![BigInt::one(), BigInt::one()],
        ];
        let (field, lam, _, minp) = dynamical_degree(&m).unwrap();
        assert_eq!(minp, ZPoly::from_i64(&[-1, -1, 1]));
        let iv = lam.interval(40);
        field.refine_to(&Rat::new(BigInt::one(), BigInt::from(1_000_000)));
        assert!(iv.lo < Rat::new(BigInt::from(162), BigInt::from(100)));
        assert!(iv.hi > Rat::new(BigInt::from(160), BigInt::from(100)));
    }
}
