use super::*;
use crate::pointset::{normalize, Component, PointSet};
use crate::rational::q;

fn set(c: Vec<Component>) -> PointSet {
    normalize(c).unwrap()
}

fn co(a: Rational, b: Rational) -> Component {
    Component::interval(a, b, true, false)
}

fn figure_one() -> PointSet {
    set(vec![
        co(q(0, 1), q(1, 2)),
        co(q(1, 1), q(3, 2)),
        Component::point(q(7, 4)),
        Component::interval(q(2, 1), q(5, 2), false, false),
        Component::point(q(21, 8)),
        Component::interval(q(3, 1), q(7, 2), false, true),
    ])
}

fn gap_at(s: &PointSet, lo: Rational) -> Gap {
    s.bad_gaps()
        .unwrap()
        .into_iter()
        .find(|g| g.lo == lo)
        .unwrap()
}

fn check(s: &PointSet, m: &crate::plmap::PlMap) {
    assert!(m.is_strictly_increasing_on(s).unwrap().passed());
    assert!(m.threshold_equiv(s).unwrap().passed());
}

#[test]
fn figure_one_plan_closes_gap() {
    let s = figure_one();
    let g = gap_at(&s, q(1, 2));
    let plan = plan_gap(&s, &g).unwrap();
    let (m, img) = apply_plan(&s, &plan).unwrap();
    check(&s, &m);
    assert_eq!(m.apply(&q(1, 2)).unwrap(), m.apply(&q(1, 1)).unwrap());
    assert!(img.bad_gaps().unwrap().len() < s.bad_gaps().unwrap().len());
}

#[test]
fn identity_plan_certifies() {
    let s = figure_one();
    let plan = ThresholdPlan::identity(&s);
    let (m, img) = apply_plan(&s, &plan).unwrap();
    assert_eq!(img, s);
    check(&s, &m);
}

#[test]
fn corrupted_plan_is_rejected() {
    let s = figure_one();
    let g = gap_at(&s, q(1, 2));
    let mut plan = plan_gap(&s, &g).unwrap();
    // flatten the stretch on [1, 3/2] so it drops below the fused value
    plan.pieces[2].piece.slope = Rational::one();
    let err = apply_plan(&s, &plan).unwrap_err();
    assert!(
        matches!(err, ThresholdError::CertificateFailed { .. }),
        "{err:?}"
    );
}

#[test]
fn good_gap_is_not_bad() {
    let s = set(vec![
        Component::closed(q(0, 1), q(1, 2)),
        Component::closed(q(1, 1), q(3, 2)),
    ]);
    let g = s.gaps().unwrap()[0].clone();
    assert!(matches!(plan_gap(&s, &g), Err(ThresholdError::NotBad(_))));
}

#[test]
fn epsilon_schedule_meets_target() {
    let s = figure_one();
    let eps = q(1, 10);
    let (m, img, trace) = remove_epsilon(&s, &eps).unwrap();
    check(&s, &m);
    for g in img.bad_gaps().unwrap() {
        assert!(g.length < eps);
    }
    assert_eq!(trace.sup_norm_ledger.len(), trace.steps.len() + 1);
    assert_eq!(trace.sup_norm_ledger.last(), Some(&Rational::zero()));
    assert!(trace.eps1.is_positive() && trace.eps1 <= eps);
}

#[test]
fn epsilon_must_be_positive() {
    let s = figure_one();
    assert!(matches!(
        remove_epsilon(&s, &Rational::zero()),
        Err(ThresholdError::InvalidEpsilon(_))
    ));
}

#[test]
fn strong_removal_leaves_no_bad_gap() {
    let s = set(vec![
        co(q(0, 1), q(1, 2)),
        Component::closed(q(1, 1), q(3, 2)),
    ]);
    let (m, img, trace) = remove_strong(&s).unwrap();
    check(&s, &m);
    assert!(img.bad_gaps().unwrap().is_empty());
    assert_eq!(trace.closed_gaps.len(), 1);
}

#[test]
fn strong_removal_reports_infeasible_tail() {
    let s = set(vec![
        co(q(0, 1), q(1, 2)),
        Component::closed(q(1, 1), q(2, 1)),
    ]);
    let err = remove_strong(&s).unwrap_err();
    assert!(
        matches!(err, ThresholdError::StructureViolated(_)),
        "{err:?}"
    );
}
