//! Structural conditions around bad gaps.
//!
//! For a closed-open gap `[r, ua)` the image set must look a certain way on
//! the unit shifts of the gap. To the right, each window `[r+n, ua+n]` holds
//! at most one point while the chain continues; to the left, `[r-1, ua-1)` is
//! empty and later windows again hold at most one point. Each step is tagged
//! with the case it falls into. Open-closed gaps are handled by mirroring.
//!
//! The tags describe the configuration. The verdict itself is exact: after
//! the local checks, the threshold grid system is solved with the gap closed
//! and, once every gap passes, with all bad gaps closed together.

use serde::{Deserialize, Serialize};

use crate::grid::{GridError, ThresholdGrid};
use crate::pointset::{Gap, GapKind, PointSet, PointSetError, WindowContent};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("gap {0:?} is neither closed-open nor open-closed")]
    NotBad(Gap),
    #[error("gap {0:?} has length at least 1")]
    GapTooLong(Gap),
    #[error(transparent)]
    Set(#[from] PointSetError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    A1,
    B111,
    B112,
    B113,
    B12,
    A2,
    B211,
    B212,
    B22,
}

impl CaseTag {
    pub fn is_terminal(self) -> bool {
        !matches!(self, CaseTag::A1 | CaseTag::A2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub n: u32,
    pub case: CaseTag,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub singleton: Option<Rational>,
    pub gamma_l: Rational,
    pub gamma_r: Rational,
    /// Interval read as the next active gap in the B111/B112 continuations.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub continuation: Option<(Rational, Rational)>,
}

/// Why a chain stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainEnd {
    /// A terminal B-case was reached.
    Terminal,
    /// No member of the set lies beyond the next window.
    SpanExhausted,
    /// The next window holds several points; the local cases say nothing more.
    Crowded { n: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapContext {
    pub gap: Gap,
    pub r: Rational,
    pub ua: Rational,
    pub direction: Direction,
    pub steps: Vec<StepReport>,
    pub end: ChainEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailReason {
    GapTooLong,
    SingletonViolation,
    LeftWindowNonEmpty,
    ChainInfeasible,
    JointInfeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub reason: FailReason,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub step: Option<u32>,
    /// Labels of a contradictory cycle of constraints, when one was found.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapAnalysis {
    pub gap: Gap,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub right: Option<GapContext>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub left: Option<GapContext>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Pass,
    Fail {
        gap: Option<Gap>,
        step: Option<u32>,
        reason: FailReason,
        #[serde(skip_serializing_if = "Vec::is_empty", default)]
        witness: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub per_gap: Vec<GapAnalysis>,
    pub verdict: Verdict,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass)
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// Distance from `x` to the members strictly left of it, zero when `x` is a
/// member; `None` when nothing lies to the left.
fn gap_left(s: &PointSet, x: &Rational) -> Option<Rational> {
    if s.contains(x) {
        return Some(Rational::zero());
    }
    s.sup_below(x).map(|v| Rational::min_of(&(x - v), &half()))
}

fn gap_right(s: &PointSet, x: &Rational) -> Option<Rational> {
    if s.contains(x) {
        return Some(Rational::zero());
    }
    s.inf_above(x).map(|v| Rational::min_of(&(v - x), &half()))
}

/// Right chain of a closed-open gap `[r, ua)`, in the coordinates of `s`.
/// Returns the steps, how the chain ended, and a failure at step 1.
fn right_chain(
    s: &PointSet,
    r: &Rational,
    ua: &Rational,
) -> (Vec<StepReport>, ChainEnd, Option<Failure>) {
    let mut steps = Vec::new();
    let mut n: u32 = 1;
    loop {
        let k = Rational::from_int(n as i64);
        let lo = r + &k;
        let hi = ua + &k;
        let content = s.window(&lo, &hi, true, true);
        if let WindowContent::Many = content {
            if n == 1 {
                let f = Failure {
                    reason: FailReason::SingletonViolation,
                    step: Some(1),
                    witness: Vec::new(),
                };
                return (steps, ChainEnd::Crowded { n }, Some(f));
            }
            return (steps, ChainEnd::Crowded { n }, None);
        }
        if s.inf_above(&hi).is_none() {
            return (steps, ChainEnd::SpanExhausted, None);
        }
        let singleton = content.single().cloned();
        let gl = gap_left(s, &lo).unwrap_or_else(half);
        let gr = gap_right(s, &hi).unwrap_or_else(half);
        let case = match (&singleton, gl.is_zero(), gr.is_zero()) {
            (_, true, true) => CaseTag::A1,
            (Some(_), false, true) => CaseTag::B111,
            (Some(_), true, false) => CaseTag::B112,
            (Some(_), false, false) => CaseTag::B113,
            (None, _, _) => CaseTag::B12,
        };
        let one = Rational::one();
        let continuation = match (&case, &singleton) {
            (CaseTag::B111, Some(s1)) => Some((s1 + &one, &hi + &one)),
            (CaseTag::B112, Some(s1)) => {
                let far = s1 + &one;
                match s.window(&(&lo + &one), &far, true, true) {
                    WindowContent::Single(s2) => Some((&lo + &one, s2)),
                    _ => None,
                }
            }
            _ => None,
        };
        steps.push(StepReport {
            n,
            case,
            singleton,
            gamma_l: gl,
            gamma_r: gr,
            continuation,
        });
        if case.is_terminal() {
            return (steps, ChainEnd::Terminal, None);
        }
        n += 1;
    }
}

/// Left chain of a closed-open gap `[r, ua)`.
fn left_chain(
    s: &PointSet,
    r: &Rational,
    ua: &Rational,
) -> (Vec<StepReport>, ChainEnd, Option<Failure>) {
    let mut steps = Vec::new();
    let mut n: u32 = 1;
    loop {
        let k = Rational::from_int(n as i64);
        let lo = r - &k;
        let hi = ua - &k;
        let content = s.window(&lo, &hi, true, true);
        let adjoint_ok = match &content {
            WindowContent::Empty => true,
            WindowContent::Single(p) => p == &hi,
            WindowContent::Many => false,
        };
        if n == 1 && !adjoint_ok {
            let f = Failure {
                reason: FailReason::LeftWindowNonEmpty,
                step: Some(1),
                witness: Vec::new(),
            };
            return (steps, ChainEnd::Crowded { n }, Some(f));
        }
        if let WindowContent::Many = content {
            return (steps, ChainEnd::Crowded { n }, None);
        }
        if s.sup_below(&lo).is_none() {
            return (steps, ChainEnd::SpanExhausted, None);
        }
        let singleton = content.single().cloned();
        let gl = gap_left(s, &lo).unwrap_or_else(half);
        let gr = gap_right(s, &hi).unwrap_or_else(half);
        let case = match (&singleton, gl.is_zero(), gr.is_zero()) {
            (_, true, true) => CaseTag::A2,
            (Some(_), true, false) => CaseTag::B211,
            (Some(_), false, _) => CaseTag::B212,
            (None, _, _) => CaseTag::B22,
        };
        steps.push(StepReport {
            n,
            case,
            singleton,
            gamma_l: gl,
            gamma_r: gr,
            continuation: None,
        });
        if case.is_terminal() {
            return (steps, ChainEnd::Terminal, None);
        }
        n += 1;
    }
}

fn mirror_steps(steps: Vec<StepReport>) -> Vec<StepReport> {
    steps
        .into_iter()
        .map(|st| StepReport {
            n: st.n,
            case: st.case,
            singleton: st.singleton.map(|v| -v),
            gamma_l: st.gamma_r,
            gamma_r: st.gamma_l,
            continuation: st.continuation.map(|(a, b)| (-b, -a)),
        })
        .collect()
}

/// Chains in both directions around one bad gap, plus the exact per-gap check.
pub fn analyze_gap(s: &PointSet, g: &Gap) -> Result<GapAnalysis, StructureError> {
    if !g.is_bad() {
        return Err(StructureError::NotBad(g.clone()));
    }
    if g.length >= Rational::one() {
        return Err(StructureError::GapTooLong(g.clone()));
    }
    // orient as closed-open [r, ua)
    let (work, r, ua, mirrored) = match g.kind {
        GapKind::ClosedOpen => (s.clone(), g.lo.clone(), g.hi.clone(), false),
        _ => (s.mirror(), -g.hi.clone(), -g.lo.clone(), true),
    };
    let (rs, rend, rfail) = right_chain(&work, &r, &ua);
    let (ls, lend, lfail) = left_chain(&work, &r, &ua);
    let (r_orig, ua_orig) = if mirrored {
        (g.hi.clone(), g.lo.clone())
    } else {
        (g.lo.clone(), g.hi.clone())
    };
    let ctx = |steps: Vec<StepReport>, end: ChainEnd, dir: Direction| GapContext {
        gap: g.clone(),
        r: r_orig.clone(),
        ua: ua_orig.clone(),
        direction: dir,
        steps: if mirrored { mirror_steps(steps) } else { steps },
        end,
    };
    // the A1 family runs away from the gap's member end
    let (primary_dir, secondary_dir) = if mirrored {
        (Direction::Left, Direction::Right)
    } else {
        (Direction::Right, Direction::Left)
    };
    let primary = ctx(rs, rend, primary_dir);
    let secondary = ctx(ls, lend, secondary_dir);
    let mut failure = rfail.or(lfail);
    if failure.is_none() {
        let grid = ThresholdGrid::build(s, &[(g.lo.clone(), g.hi.clone())])?;
        if let Err(inf) = grid.solve_values() {
            failure = Some(Failure {
                reason: FailReason::ChainInfeasible,
                step: None,
                witness: inf.cycle.iter().map(|c| c.label.clone()).collect(),
            });
        }
    }
    let (right, left) = if mirrored {
        (secondary, primary)
    } else {
        (primary, secondary)
    };
    Ok(GapAnalysis {
        gap: g.clone(),
        right: Some(right),
        left: Some(left),
        failure,
    })
}

/// Every bad gap, biggest first, then the joint closing of all of them.
pub fn check_all(s: &PointSet) -> Result<StructureReport, StructureError> {
    let gaps = s.bad_gaps_by_size()?;
    let mut per_gap = Vec::with_capacity(gaps.len());
    let mut verdict: Option<Verdict> = None;
    for g in &gaps {
        let analysis = match analyze_gap(s, g) {
            Ok(a) => a,
            Err(StructureError::GapTooLong(_)) => GapAnalysis {
                gap: g.clone(),
                right: None,
                left: None,
                failure: Some(Failure {
                    reason: FailReason::GapTooLong,
                    step: None,
                    witness: Vec::new(),
                }),
            },
            Err(e) => return Err(e),
        };
        if verdict.is_none() {
            if let Some(f) = &analysis.failure {
                verdict = Some(Verdict::Fail {
                    gap: Some(g.clone()),
                    step: f.step,
                    reason: f.reason,
                    witness: f.witness.clone(),
                });
            }
        }
        per_gap.push(analysis);
    }
    if verdict.is_none() && gaps.len() > 1 {
        let closures: Vec<(Rational, Rational)> =
            gaps.iter().map(|g| (g.lo.clone(), g.hi.clone())).collect();
        if let Err(inf) = ThresholdGrid::build(s, &closures)?.solve_values() {
            verdict = Some(Verdict::Fail {
                gap: None,
                step: None,
                reason: FailReason::JointInfeasible,
                witness: inf.cycle.iter().map(|c| c.label.clone()).collect(),
            });
        }
    }
    Ok(StructureReport {
        per_gap,
        verdict: verdict.unwrap_or(Verdict::Pass),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{normalize, Component};
    use crate::rational::q;

    fn set(c: Vec<Component>) -> PointSet {
        normalize(c).unwrap()
    }

    fn co(a: Rational, b: Rational) -> Component {
        Component::interval(a, b, true, false)
    }

    fn tags(ctx: &Option<GapContext>) -> Vec<CaseTag> {
        ctx.as_ref().unwrap().steps.iter().map(|s| s.case).collect()
    }

    fn first_bad(s: &PointSet) -> Gap {
        s.biggest_bad_gap().unwrap().unwrap()
    }

    #[test]
    fn figure_one_right_chain() {
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            co(q(1, 1), q(3, 2)),
            Component::point(q(7, 4)),
            Component::interval(q(2, 1), q(5, 2), false, false),
            Component::point(q(21, 8)),
            Component::interval(q(3, 1), q(7, 2), false, true),
        ]);
        let g = s
            .bad_gaps()
            .unwrap()
            .into_iter()
            .find(|g| g.lo == q(1, 2))
            .unwrap();
        let a = analyze_gap(&s, &g).unwrap();
        assert_eq!(tags(&a.right), vec![CaseTag::A1, CaseTag::A1]);
        let singles: Vec<_> = a
            .right
            .as_ref()
            .unwrap()
            .steps
            .iter()
            .map(|s| s.singleton.clone())
            .collect();
        assert_eq!(singles, vec![Some(q(7, 4)), Some(q(21, 8))]);
        assert!(a.failure.is_none());
    }

    #[test]
    fn tight_left_edge_is_b112() {
        // [0,1/2) ∪ [1,3/2) ∪ {7/4} ∪ (21/10, 3]
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            co(q(1, 1), q(3, 2)),
            Component::point(q(7, 4)),
            Component::interval(q(21, 10), q(3, 1), false, true),
        ]);
        let a = analyze_gap(&s, &first_bad(&s)).unwrap();
        assert_eq!(tags(&a.right), vec![CaseTag::B112]);
        let st = &a.right.unwrap().steps[0];
        assert_eq!(
            (st.gamma_l.clone(), st.gamma_r.clone()),
            (q(0, 1), q(1, 10))
        );
    }

    #[test]
    fn figure_two_is_b113() {
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            co(q(1, 1), q(7, 5)),
            Component::point(q(7, 4)),
            Component::interval(q(21, 10), q(7, 2), false, true),
        ]);
        let a = analyze_gap(&s, &first_bad(&s)).unwrap();
        assert_eq!(tags(&a.right), vec![CaseTag::B113]);
    }

    #[test]
    fn two_points_in_window_fail() {
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            Component::closed(q(1, 1), q(5, 4)),
            Component::point(q(13, 8)),
            Component::point(q(7, 4)),
        ]);
        let r = check_all(&s).unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::Fail {
                reason: FailReason::SingletonViolation,
                step: Some(1),
                ..
            }
        ));
    }

    #[test]
    fn vacuous_and_long() {
        let s = set(vec![Component::closed(q(0, 1), q(1, 1))]);
        assert!(check_all(&s).unwrap().passed());
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            Component::closed(q(3, 2), q(2, 1)),
        ]);
        assert!(matches!(
            check_all(&s).unwrap().verdict,
            Verdict::Fail {
                reason: FailReason::GapTooLong,
                ..
            }
        ));
    }

    #[test]
    fn figure_three_left_chain() {
        let s = set(vec![
            co(q(-2, 1), q(-3, 2)),
            co(q(-1, 1), q(-1, 2)),
            co(q(0, 1), q(1, 2)),
            Component::closed(q(1, 1), q(3, 2)),
        ]);
        let g = s
            .bad_gaps()
            .unwrap()
            .into_iter()
            .find(|g| g.lo == q(1, 2))
            .unwrap();
        let a = analyze_gap(&s, &g).unwrap();
        assert_eq!(tags(&a.left), vec![CaseTag::A2, CaseTag::A2]);
    }

    #[test]
    fn figure_four_left_b22() {
        let s = set(vec![
            co(q(-2, 1), q(-3, 5)),
            Component::interval(q(1, 10), q(1, 2), false, false),
            Component::closed(q(1, 1), q(3, 2)),
        ]);
        let g = s
            .bad_gaps()
            .unwrap()
            .into_iter()
            .find(|g| g.lo == q(1, 2))
            .unwrap();
        let a = analyze_gap(&s, &g).unwrap();
        assert_eq!(tags(&a.left), vec![CaseTag::B22]);
    }

    #[test]
    fn left_window_must_be_empty() {
        // -1/4 lies in [r-1, ua-1) = [-1/2, 0)
        let s = set(vec![
            Component::point(q(-1, 4)),
            Component::closed(q(1, 5), q(1, 2)),
            Component::closed(q(1, 1), q(5, 4)),
        ]);
        // gap (1/2, 1) is open; build a closed-open one instead
        let s2 = set(vec![
            Component::point(q(-1, 4)),
            co(q(1, 5), q(1, 2)),
            Component::closed(q(1, 1), q(5, 4)),
        ]);
        assert!(check_all(&s).unwrap().passed());
        assert!(matches!(
            check_all(&s2).unwrap().verdict,
            Verdict::Fail {
                reason: FailReason::LeftWindowNonEmpty,
                ..
            }
        ));
    }

    #[test]
    fn open_closed_mirrors() {
        // mirror of [0,1/2) ∪ [1,3/2]
        let s = set(vec![
            Component::closed(q(-3, 2), q(-1, 1)),
            Component::interval(q(-1, 2), q(0, 1), false, true),
        ]);
        let g = first_bad(&s);
        assert_eq!(g.kind, GapKind::OpenClosed);
        let a = analyze_gap(&s, &g).unwrap();
        assert!(a.failure.is_none());
        assert_eq!(a.left.unwrap().direction, Direction::Left);
    }

    #[test]
    fn report_is_deterministic_json() {
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            co(q(1, 1), q(7, 5)),
            Component::point(q(7, 4)),
            Component::interval(q(21, 10), q(7, 2), false, true),
        ]);
        let a = serde_json::to_string(&check_all(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&check_all(&s).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: StructureReport = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}
