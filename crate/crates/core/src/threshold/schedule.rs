//! Scheduling gap removals across unit intervals, and the all-at-once variant.

use serde::{Deserialize, Serialize};

use crate::grid::ThresholdGrid;
use crate::plmap::PlMap;
use crate::pointset::{Gap, PointSet, UnitPartition};
use crate::rational::Rational;
use crate::structure::{check_all, Verdict};

use super::plan::{apply_plan, certify, plan_gap, Construction};
use super::ThresholdError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStep {
    /// The gap in the original set.
    pub original: Gap,
    /// The same gap as it appeared when it was removed.
    pub gap_before: Gap,
    pub interval: i64,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleTrace {
    pub partition: UnitPartition,
    pub interval_order: Vec<i64>,
    /// Lengths of the bad-gap pieces inside each visited interval, biggest first.
    pub per_interval_deltas: Vec<(i64, Vec<Rational>)>,
    pub eps0: Rational,
    pub eps1: Rational,
    pub steps: Vec<ScheduleStep>,
    /// `max |u_{n+1}(x) − u_n(x)|` over the sample points, one entry per step,
    /// closed by the zero of the stabilized sequence.
    pub sup_norm_ledger: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFamily {
    pub cell: i64,
    pub pieces: Vec<crate::plmap::AffinePiece>,
}

/// A stretch of the line sent to a single value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub lo: Rational,
    pub hi: Rational,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongTrace {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partition: Option<UnitPartition>,
    pub closed_gaps: Vec<Gap>,
    pub families: Vec<CellFamily>,
    pub identifications: Vec<Identification>,
}

fn require_structure(s: &PointSet) -> Result<(), ThresholdError> {
    let report = check_all(s)?;
    match report.verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail { reason, .. } => Err(ThresholdError::StructureViolated(reason)),
    }
}

/// Splits `g` along the unit intervals of `p`; returns `(index, length)`.
fn split_gap(p: &UnitPartition, g: &Gap) -> Vec<(i64, Rational)> {
    p.intervals
        .iter()
        .filter_map(|(k, lo, hi)| {
            let a = Rational::max_of(lo, &g.lo);
            let b = Rational::min_of(hi, &g.hi);
            (a < b).then(|| (*k, b - a))
        })
        .collect()
}

/// The interval holding the biggest piece of `g`, leftmost on ties.
fn home_interval(p: &UnitPartition, g: &Gap) -> i64 {
    let parts = split_gap(p, g);
    let mut best = &parts[0];
    for part in &parts[1..] {
        if part.1 > best.1 {
            best = part;
        }
    }
    best.0
}

fn sup_distance(a: &PlMap, b: &PlMap, samples: &[Rational]) -> Result<Rational, ThresholdError> {
    let mut best = Rational::zero();
    for x in samples {
        let d = (a.apply(x)? - b.apply(x)?).abs();
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// The current image of an original gap, if it is still a bad gap.
fn current_gap(current: &PointSet, total: &PlMap, g: &Gap) -> Result<Option<Gap>, ThresholdError> {
    let lo = total.apply(&g.lo)?;
    let hi = total.apply(&g.hi)?;
    Ok(current
        .bad_gaps()?
        .into_iter()
        .find(|h| h.lo == lo && h.hi == hi))
}

/// Removes bad gaps until every remaining one is shorter than `eps0`.
pub fn remove_epsilon(
    s: &PointSet,
    eps0: &Rational,
) -> Result<(PlMap, PointSet, ScheduleTrace), ThresholdError> {
    if !eps0.is_positive() {
        return Err(ThresholdError::InvalidEpsilon(eps0.clone()));
    }
    require_structure(s)?;
    let original = s.bad_gaps_by_size()?;
    let anchor = match original.first() {
        Some(g) => g.member_end().cloned().unwrap_or_else(|| g.hi.clone()),
        None => s.inf()?.clone(),
    };
    let partition = s.unit_partition(&anchor)?;
    let homes: Vec<i64> = original
        .iter()
        .map(|g| home_interval(&partition, g))
        .collect();
    // only intervals holding a gap at or above the target are scheduled
    let busy: Vec<i64> = original
        .iter()
        .zip(&homes)
        .filter(|(g, _)| &g.length >= eps0)
        .map(|(_, k)| *k)
        .collect();
    let mut per_interval: Vec<(i64, Vec<Rational>)> = Vec::new();
    for g in &original {
        for (k, len) in split_gap(&partition, g) {
            if !busy.contains(&k) {
                continue;
            }
            match per_interval.iter_mut().find(|(i, _)| *i == k) {
                Some((_, v)) => v.push(len),
                None => per_interval.push((k, vec![len])),
            }
        }
    }
    for (_, v) in per_interval.iter_mut() {
        v.sort_by(|a, b| b.cmp(a));
    }
    per_interval.sort_by(|(ka, va), (kb, vb)| vb[0].cmp(&va[0]).then(ka.cmp(kb)));
    let mut eps1 = eps0.clone();
    for (k, v) in &per_interval {
        let factor = Rational::one() - v.iter().sum::<Rational>();
        if !factor.is_positive() {
            return Err(ThresholdError::BudgetDegenerate(*k));
        }
        eps1 = eps1 * factor;
    }
    eps1 = eps1 / Rational::from_int(2);
    let interval_order: Vec<i64> = per_interval.iter().map(|(k, _)| *k).collect();

    let samples = s.sample_points();
    let mut current = s.clone();
    let mut total = PlMap::identity(s.clone());
    let mut steps = Vec::new();
    let mut ledger = Vec::new();
    let close = |idx: usize,
                 current: &mut PointSet,
                 total: &mut PlMap,
                 steps: &mut Vec<ScheduleStep>,
                 ledger: &mut Vec<Rational>|
     -> Result<bool, ThresholdError> {
        let Some(g) = current_gap(current, total, &original[idx])? else {
            return Ok(false);
        };
        let plan = plan_gap(current, &g)?;
        let (m, img) = apply_plan(current, &plan)?;
        let mut next = PlMap::compose(&m, total)?;
        next.merge_pieces();
        ledger.push(sup_distance(&next, total, &samples)?);
        steps.push(ScheduleStep {
            original: original[idx].clone(),
            gap_before: g,
            interval: homes[idx],
            construction: plan.construction,
        });
        *total = next;
        *current = img;
        Ok(true)
    };
    for k in &interval_order {
        loop {
            // biggest remaining gap of this interval at or above the budget
            let mut pick: Option<(usize, Rational)> = None;
            for (idx, g) in original.iter().enumerate() {
                if homes[idx] != *k {
                    continue;
                }
                if let Some(c) = current_gap(&current, &total, g)? {
                    if c.length >= eps1 && pick.as_ref().map_or(true, |(_, l)| c.length > *l) {
                        pick = Some((idx, c.length));
                    }
                }
            }
            let Some((idx, _)) = pick else { break };
            close(idx, &mut current, &mut total, &mut steps, &mut ledger)?;
        }
    }
    loop {
        let Some(g) = current.biggest_bad_gap()? else {
            break;
        };
        if &g.length < eps0 {
            break;
        }
        let mut found = None;
        for (idx, o) in original.iter().enumerate() {
            if current_gap(&current, &total, o)?.map_or(false, |c| c == g) {
                found = Some(idx);
                break;
            }
        }
        let idx = found.expect("every current bad gap comes from an original one");
        close(idx, &mut current, &mut total, &mut steps, &mut ledger)?;
    }
    ledger.push(Rational::zero());
    Ok((
        total,
        current,
        ScheduleTrace {
            partition,
            interval_order,
            per_interval_deltas: per_interval,
            eps0: eps0.clone(),
            eps1,
            steps,
            sup_norm_ledger: ledger,
        },
    ))
}

/// Removes every bad gap at once with the exact grid solution.
pub fn remove_strong(s: &PointSet) -> Result<(PlMap, PointSet, StrongTrace), ThresholdError> {
    require_structure(s)?;
    let gaps = s.bad_gaps_by_size()?;
    if gaps.is_empty() {
        return Ok((
            PlMap::identity(s.clone()),
            s.clone(),
            StrongTrace {
                partition: None,
                closed_gaps: Vec::new(),
                families: Vec::new(),
                identifications: Vec::new(),
            },
        ));
    }
    let closures: Vec<(Rational, Rational)> =
        gaps.iter().map(|g| (g.lo.clone(), g.hi.clone())).collect();
    let mut map = ThresholdGrid::build(s, &closures)?.solve()?;
    for g in &gaps {
        certify(&map, s, Some(g))?;
    }
    map.merge_pieces();
    let img = map.image(s)?;
    if let Some(g) = img.biggest_bad_gap()? {
        return Err(ThresholdError::CertificateFailed {
            certificate: "no_bad_gaps".into(),
            x: g.lo,
            y: g.hi,
        });
    }
    let anchor = gaps[0]
        .member_end()
        .cloned()
        .unwrap_or_else(|| gaps[0].hi.clone());
    let partition = s.unit_partition(&anchor)?;
    let families = partition
        .intervals
        .iter()
        .map(|(k, lo, hi)| CellFamily {
            cell: *k,
            pieces: map
                .pieces
                .iter()
                .filter(|p| p.lo < *hi && p.hi > *lo)
                .cloned()
                .collect(),
        })
        .collect();
    let identifications = map
        .pieces
        .iter()
        .filter(|p| p.slope.is_zero() && p.lo < p.hi)
        .map(|p| Identification {
            lo: p.lo.clone(),
            hi: p.hi.clone(),
            value: p.intercept.clone(),
        })
        .collect();
    Ok((
        map,
        img,
        StrongTrace {
            partition: Some(partition),
            closed_gaps: gaps,
            families,
            identifications,
        },
    ))
}
