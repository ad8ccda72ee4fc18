//! Removing bad gaps one at a time while keeping the span.
//!
//! With the span normalized to `[0, 1]`, a gap `[a, b]` of length `δ` is fused
//! by `x ↦ x / (1 − δ)` on `x ≤ a` and `x ↦ (x − δ) / (1 − δ)` on `x ≥ b`.
//! Gaps are removed biggest first (leftmost on ties). Since every step scales
//! the untouched gaps uniformly, the `n`-th removal sees the length
//! `δₙ / (1 − Σ_{k<n} δₖ)` in normalized units.

use serde::{Deserialize, Serialize};

use crate::plmap::{AffinePiece, PlMap, PlMapError};
use crate::pointset::{Gap, PointSet, PointSetError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DebreuError {
    #[error("gap {0:?} is neither closed-open nor open-closed")]
    NotBad(Gap),
    #[error("no gap ({0}, {1}) in the set")]
    NoSuchGap(Rational, Rational),
    #[error("empty set")]
    EmptySet,
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(Rational),
    #[error("gap lengths sum to {0}, which is not below 1")]
    MassExceedsOne(Rational),
    #[error("removed mass {removed} is not below the distance {d0}")]
    DegenerateDistance { removed: Rational, d0: Rational },
    #[error("index {n} is outside 1..={len}")]
    BadIndex { n: usize, len: usize },
    #[error(transparent)]
    Map(#[from] PlMapError),
}

impl From<PointSetError> for DebreuError {
    fn from(e: PointSetError) -> Self {
        match e {
            PointSetError::EmptySet => DebreuError::EmptySet,
            other => panic!("unexpected point-set error: {other}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub n: usize,
    /// The gap as it appears in the current set.
    pub gap_before: Gap,
    /// Length of the same gap in the original set.
    pub delta: Rational,
    /// Length at removal time, in the current set.
    pub l: Rational,
    pub map: PlMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalTrace {
    pub steps: Vec<RemovalStep>,
    pub total_map: PlMap,
    pub final_set: PointSet,
}

/// The two-piece map fusing `g`, in the coordinates of `s`.
pub fn removal_map(s: &PointSet, g: &Gap) -> Result<PlMap, DebreuError> {
    if !g.is_bad() {
        return Err(DebreuError::NotBad(g.clone()));
    }
    if !s.gaps()?.iter().any(|h| h.lo == g.lo && h.hi == g.hi) {
        return Err(DebreuError::NoSuchGap(g.lo.clone(), g.hi.clone()));
    }
    let inf = s.inf()?.clone();
    let sup = s.sup()?.clone();
    let span = &sup - &inf;
    let width = &g.hi - &g.lo;
    // normalized length
    let delta = &width / &span;
    let scale = (Rational::one() - &delta).recip();
    let left = AffinePiece::new(
        inf.clone(),
        g.lo.clone(),
        true,
        true,
        scale.clone(),
        &inf - &inf * &scale,
    );
    let right = AffinePiece::new(
        g.hi.clone(),
        sup,
        true,
        true,
        scale.clone(),
        &inf - (&inf + &width) * &scale,
    );
    Ok(PlMap::new(vec![left, right], s.clone())?)
}

pub fn remove_one(s: &PointSet, g: &Gap) -> Result<(PlMap, PointSet), DebreuError> {
    let m = removal_map(s, g)?;
    let img = m.image(s)?;
    Ok((m, img))
}

fn run(s: &PointSet, stop_below: Option<&Rational>) -> Result<RemovalTrace, DebreuError> {
    let original = s.bad_gaps_by_size()?;
    let span = s.span()?;
    let (mass, _) = s.bad_gap_mass()?;
    assert!(mass < span, "bad gaps cannot cover the whole span");
    let mut current = s.clone();
    let mut total = PlMap::identity(s.clone());
    let mut steps = Vec::new();
    // the current gaps stay in the original order, so track them by rank
    for (n, orig) in original.iter().enumerate() {
        let g = current
            .biggest_bad_gap()?
            .expect("one bad gap per remaining original gap");
        if let Some(eps) = stop_below {
            if &g.length < eps {
                break;
            }
        }
        let (m, img) = remove_one(&current, &g)?;
        total = PlMap::compose(&m, &total)?;
        steps.push(RemovalStep {
            n: n + 1,
            l: g.length.clone(),
            gap_before: g,
            delta: orig.length.clone(),
            map: m,
        });
        current = img;
    }
    total.merge_pieces();
    Ok(RemovalTrace {
        steps,
        total_map: total,
        final_set: current,
    })
}

/// Removes every bad gap.
pub fn remove_all(s: &PointSet) -> Result<RemovalTrace, DebreuError> {
    run(s, None)
}

/// Removes gaps until the biggest remaining one is shorter than `eps`.
pub fn remove_until(s: &PointSet, eps: &Rational) -> Result<RemovalTrace, DebreuError> {
    if !eps.is_positive() {
        return Err(DebreuError::InvalidEpsilon(eps.clone()));
    }
    run(s, Some(eps))
}

/// `δₙ / (1 − Σ_{k<n} δₖ)`, with `n` counted from 1.
pub fn predicted_length(deltas: &[Rational], n: usize) -> Result<Rational, DebreuError> {
    let total: Rational = deltas.iter().sum();
    if total >= Rational::one() {
        return Err(DebreuError::MassExceedsOne(total));
    }
    if n == 0 || n > deltas.len() {
        return Err(DebreuError::BadIndex {
            n,
            len: deltas.len(),
        });
    }
    let before: Rational = deltas[..n - 1].iter().sum();
    Ok(&deltas[n - 1] / (Rational::one() - before))
}

/// `(d₀ − Σ δ) / (1 − Σ δ)`: the distance between two points once every gap
/// in `deltas`, all lying between them, has been removed.
pub fn predicted_distance(
    deltas_between: &[Rational],
    d0: &Rational,
) -> Result<Rational, DebreuError> {
    predicted_distance_general(deltas_between, deltas_between, d0)
}

/// `(d₀ − Σ between) / (1 − Σ all)`, when only some removed gaps separate the
/// two points.
pub fn predicted_distance_general(
    between: &[Rational],
    all: &[Rational],
    d0: &Rational,
) -> Result<Rational, DebreuError> {
    let removed: Rational = between.iter().sum();
    if &removed >= d0 {
        return Err(DebreuError::DegenerateDistance {
            removed,
            d0: d0.clone(),
        });
    }
    let total: Rational = all.iter().sum();
    if total >= Rational::one() {
        return Err(DebreuError::MassExceedsOne(total));
    }
    Ok((d0 - removed) / (Rational::one() - total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{normalize, Component, GapKind};
    use crate::rational::q;

    fn set(c: Vec<Component>) -> PointSet {
        normalize(c).unwrap()
    }

    fn co(a: Rational, b: Rational) -> Component {
        Component::interval(a, b, true, false)
    }

    #[test]
    fn remove_one_examples() {
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            Component::closed(q(3, 5), q(1, 1)),
        ]);
        let g = s.biggest_bad_gap().unwrap().unwrap();
        let (m, img) = remove_one(&s, &g).unwrap();
        assert_eq!(m.pieces.len(), 2);
        assert_eq!(
            (m.pieces[0].slope.clone(), m.pieces[0].intercept.clone()),
            (q(10, 9), q(0, 1))
        );
        assert_eq!(
            (m.pieces[1].slope.clone(), m.pieces[1].intercept.clone()),
            (q(10, 9), q(-1, 9))
        );
        assert_eq!(img, set(vec![Component::closed(q(0, 1), q(1, 1))]));

        let s = set(vec![
            Component::point(q(0, 1)),
            Component::interval(q(1, 2), q(1, 1), false, true),
        ]);
        let g = s.biggest_bad_gap().unwrap().unwrap();
        assert_eq!(g.kind, GapKind::OpenClosed);
        let (_, img) = remove_one(&s, &g).unwrap();
        assert_eq!(img, set(vec![Component::closed(q(0, 1), q(1, 1))]));

        let s = set(vec![Component::closed(q(0, 1), q(1, 1))]);
        let fake = Gap::new(q(1, 4), q(1, 2), GapKind::ClosedOpen);
        assert_eq!(
            remove_one(&s, &fake).map(|_| ()),
            Err(DebreuError::NoSuchGap(q(1, 4), q(1, 2)))
        );
    }

    #[test]
    fn remove_all_examples() {
        let s = set(vec![
            co(q(0, 1), q(1, 5)),
            co(q(2, 5), q(3, 5)),
            Component::closed(q(1, 1), q(2, 1)),
        ]);
        let t = remove_all(&s).unwrap();
        assert_eq!(t.steps.len(), 2);
        assert_eq!(t.steps[0].gap_before.lo, q(3, 5));
        assert!(t.final_set.bad_gaps().unwrap().is_empty());
        assert_eq!(t.final_set.span().unwrap(), s.span().unwrap());
        assert!(t.total_map.is_strictly_increasing_on(&s).unwrap().passed());

        let s = set(vec![Component::closed(q(0, 1), q(1, 1))]);
        let t = remove_all(&s).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_set, s);

        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            Component::closed(q(3, 5), q(1, 1)),
        ]);
        let t = remove_all(&s).unwrap();
        assert_eq!(t.final_set, set(vec![Component::closed(q(0, 1), q(1, 1))]));
    }

    #[test]
    fn remove_until_examples() {
        let s = set(vec![
            co(q(0, 1), q(1, 5)),
            co(q(2, 5), q(3, 5)),
            Component::closed(q(1, 1), q(2, 1)),
        ]);
        assert!(remove_until(&s, &q(1, 1)).unwrap().steps.is_empty());
        // normalized deltas (1/5, 1/10) on a span of 2: the second gap is
        // 2 · (1/10)/(4/5) = 1/4 long after step 1
        let t = remove_until(&s, &q(3, 10)).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(
            t.final_set.biggest_bad_gap().unwrap().unwrap().length,
            q(1, 4)
        );
        let t = remove_until(&s, &q(1, 4)).unwrap();
        assert_eq!(t.steps.len(), 2);
        assert_eq!(
            remove_until(&s, &q(0, 1)).map(|_| ()),
            Err(DebreuError::InvalidEpsilon(q(0, 1)))
        );
    }

    #[test]
    fn ledger_examples() {
        assert_eq!(predicted_length(&[q(1, 3)], 1).unwrap(), q(1, 3));
        assert_eq!(predicted_length(&[q(1, 5), q(1, 10)], 2).unwrap(), q(1, 8));
        assert_eq!(
            predicted_length(&[q(1, 5), q(1, 10), q(1, 10)], 3).unwrap(),
            q(1, 7)
        );
        assert!(matches!(
            predicted_length(&[q(1, 2), q(1, 2)], 1),
            Err(DebreuError::MassExceedsOne(_))
        ));
        // measured against an actual run
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            co(q(7, 10), q(4, 5)),
            Component::closed(q(9, 10), q(1, 1)),
        ]);
        let t = remove_all(&s).unwrap();
        assert_eq!(t.steps[1].l, q(1, 8));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(predicted_distance(&[], &q(3, 7)).unwrap(), q(3, 7));
        assert_eq!(predicted_distance(&[q(1, 10)], &q(1, 2)).unwrap(), q(4, 9));
        assert!(matches!(
            predicted_distance(&[q(1, 4), q(1, 4)], &q(1, 2)),
            Err(DebreuError::DegenerateDistance { .. })
        ));
        // 0 and 3/5 around the gap [1/2, 3/5) of [0,1/2) ∪ [3/5,1]
        let s = set(vec![
            co(q(0, 1), q(1, 2)),
            Component::closed(q(3, 5), q(1, 1)),
        ]);
        let t = remove_all(&s).unwrap();
        let d = t.total_map.apply(&q(3, 5)).unwrap() - t.total_map.apply(&q(0, 1)).unwrap();
        assert_eq!(d, predicted_distance(&[q(1, 10)], &q(3, 5)).unwrap());
    }

    #[test]
    fn span_is_normalized_internally() {
        let s = set(vec![
            co(q(2, 1), q(3, 1)),
            Component::closed(q(4, 1), q(6, 1)),
        ]);
        let t = remove_all(&s).unwrap();
        assert_eq!(t.final_set, set(vec![Component::closed(q(2, 1), q(6, 1))]));
    }
}
