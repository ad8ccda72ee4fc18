//! Finite presentations of bounded subsets of the real line.
//!
//! A [`PointSet`] is a sorted list of pairwise disjoint, non-adjacent
//! [`Component`]s. Its gaps are the maximal non-degenerate intervals between
//! consecutive components; a gap is *bad* when exactly one of its endpoints
//! belongs to the set.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointSetError {
    #[error("malformed component: lo {lo} hi {hi} ({reason})")]
    MalformedComponent {
        lo: Rational,
        hi: Rational,
        reason: &'static str,
    },
    #[error("operation requires a nonempty set")]
    EmptySet,
}

/// An interval with endpoint-inclusion flags, or a single point.
///
/// A point is stored as `lo == hi` with both flags set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Component {
    pub fn point(at: Rational) -> Self {
        Component {
            lo: at.clone(),
            hi: at,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn interval(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        Component {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::interval(lo, hi, true, true)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn validate(&self) -> Result<(), PointSetError> {
        if self.lo > self.hi {
            return Err(PointSetError::MalformedComponent {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
                reason: "lo > hi",
            });
        }
        if self.lo == self.hi && !(self.lo_closed && self.hi_closed) {
            return Err(PointSetError::MalformedComponent {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
                reason: "degenerate interval must be a closed point",
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn map_affine(&self, slope: &Rational, intercept: &Rational) -> Component {
        let a = slope * &self.lo + intercept;
        let b = slope * &self.hi + intercept;
        if slope.is_negative() {
            Component::interval(b, a, self.hi_closed, self.lo_closed)
        } else {
            Component::interval(a, b, self.lo_closed, self.hi_closed)
        }
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(
                f,
                "{}{},{}{}",
                if self.lo_closed { '[' } else { '(' },
                self.lo,
                self.hi,
                if self.hi_closed { ']' } else { ')' }
            )
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ComponentRepr {
    Interval {
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
    },
    Point {
        at: Rational,
    },
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = if self.is_point() {
            ComponentRepr::Point {
                at: self.lo.clone(),
            }
        } else {
            ComponentRepr::Interval {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
                lo_closed: self.lo_closed,
                hi_closed: self.hi_closed,
            }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let c = match ComponentRepr::deserialize(deserializer)? {
            ComponentRepr::Point { at } => Component::point(at),
            ComponentRepr::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => Component::interval(lo, hi, lo_closed, hi_closed),
        };
        c.validate().map_err(serde::de::Error::custom)?;
        Ok(c)
    }
}

/// Endpoint-membership classification of a gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapKind {
    /// Both endpoints belong to the set: the gap interval is `(lo, hi)`.
    Open,
    /// Neither endpoint belongs to the set: the gap interval is `[lo, hi]`.
    Closed,
    /// `lo` is a limit point outside the set, `hi` is a member: `[lo, hi)`.
    ClosedOpen,
    /// `lo` is a member, `hi` is a limit point outside the set: `(lo, hi]`.
    OpenClosed,
}

impl GapKind {
    pub fn is_bad(self) -> bool {
        matches!(self, GapKind::ClosedOpen | GapKind::OpenClosed)
    }

    fn from_membership(lo_in_set: bool, hi_in_set: bool) -> Self {
        match (lo_in_set, hi_in_set) {
            (true, true) => GapKind::Open,
            (false, false) => GapKind::Closed,
            (false, true) => GapKind::ClosedOpen,
            (true, false) => GapKind::OpenClosed,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            GapKind::ClosedOpen => GapKind::OpenClosed,
            GapKind::OpenClosed => GapKind::ClosedOpen,
            k => k,
        }
    }
}

/// A maximal lacuna of a point set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gap {
    pub lo: Rational,
    pub hi: Rational,
    pub kind: GapKind,
    pub length: Rational,
}

impl Gap {
    pub fn new(lo: Rational, hi: Rational, kind: GapKind) -> Self {
        let length = &hi - &lo;
        Gap {
            lo,
            hi,
            kind,
            length,
        }
    }

    pub fn is_bad(&self) -> bool {
        self.kind.is_bad()
    }

    /// The endpoint that belongs to the set, for a bad gap.
    pub fn member_end(&self) -> Option<&Rational> {
        match self.kind {
            GapKind::ClosedOpen => Some(&self.hi),
            GapKind::OpenClosed => Some(&self.lo),
            _ => None,
        }
    }

    /// The endpoint that is only a limit of the set, for a bad gap.
    pub fn limit_end(&self) -> Option<&Rational> {
        match self.kind {
            GapKind::ClosedOpen => Some(&self.lo),
            GapKind::OpenClosed => Some(&self.hi),
            _ => None,
        }
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.kind {
            GapKind::Open => ('(', ')'),
            GapKind::Closed => ('[', ']'),
            GapKind::ClosedOpen => ('[', ')'),
            GapKind::OpenClosed => ('(', ']'),
        };
        write!(f, "{}{},{}{}", l, self.lo, self.hi, r)
    }
}

/// What a query window sees of a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowContent {
    Empty,
    Single(Rational),
    /// At least two members (possibly a whole sub-interval).
    Many,
}

impl WindowContent {
    pub fn count_at_most_one(&self) -> bool {
        !matches!(self, WindowContent::Many)
    }

    pub fn single(&self) -> Option<&Rational> {
        match self {
            WindowContent::Single(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PointSet {
    components: Vec<Component>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

/// Sorts and merges raw components into the canonical presentation of their union.
pub fn normalize(raw: Vec<Component>) -> Result<PointSet, PointSetError> {
    for c in &raw {
        c.validate()?;
    }
    let mut raw = raw;
    raw.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    let mut out: Vec<Component> = Vec::with_capacity(raw.len());
    for c in raw {
        if let Some(cur) = out.last_mut() {
            let touches = c.lo < cur.hi || (c.lo == cur.hi && (cur.hi_closed || c.lo_closed));
            if touches {
                if c.lo == cur.lo {
                    cur.lo_closed |= c.lo_closed;
                }
                if c.hi > cur.hi {
                    cur.hi = c.hi;
                    cur.hi_closed = c.hi_closed;
                } else if c.hi == cur.hi {
                    cur.hi_closed |= c.hi_closed;
                }
                continue;
            }
        }
        out.push(c);
    }
    Ok(PointSet { components: out })
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet::default()
    }

    pub fn from_components(raw: Vec<Component>) -> Result<Self, PointSetError> {
        normalize(raw)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // components are sorted; binary search on lo
        let idx = self.components.partition_point(|c| &c.lo <= x);
        idx > 0 && self.components[idx - 1].contains(x)
    }

    pub fn inf(&self) -> Result<&Rational, PointSetError> {
        self.components
            .first()
            .map(|c| &c.lo)
            .ok_or(PointSetError::EmptySet)
    }

    pub fn sup(&self) -> Result<&Rational, PointSetError> {
        self.components
            .last()
            .map(|c| &c.hi)
            .ok_or(PointSetError::EmptySet)
    }

    pub fn span(&self) -> Result<Rational, PointSetError> {
        Ok(self.sup()? - self.inf()?)
    }

    /// Whether `x` is in the closure of the set.
    pub fn closure_contains(&self, x: &Rational) -> bool {
        self.components.iter().any(|c| &c.lo <= x && x <= &c.hi)
    }

    pub fn gaps(&self) -> Result<Vec<Gap>, PointSetError> {
        if self.is_empty() {
            return Err(PointSetError::EmptySet);
        }
        Ok(self
            .components
            .windows(2)
            .filter(|w| w[0].hi < w[1].lo)
            .map(|w| {
                Gap::new(
                    w[0].hi.clone(),
                    w[1].lo.clone(),
                    GapKind::from_membership(w[0].hi_closed, w[1].lo_closed),
                )
            })
            .collect())
    }

    pub fn bad_gaps(&self) -> Result<Vec<Gap>, PointSetError> {
        Ok(self.gaps()?.into_iter().filter(Gap::is_bad).collect())
    }

    /// Bad gaps ordered by non-increasing length, ties broken leftmost first.
    pub fn bad_gaps_by_size(&self) -> Result<Vec<Gap>, PointSetError> {
        let mut v = self.bad_gaps()?;
        v.sort_by(|a, b| b.length.cmp(&a.length).then(a.lo.cmp(&b.lo)));
        Ok(v)
    }

    /// Total and per-gap lengths of the bad gaps, per-gap sorted non-increasing.
    pub fn bad_gap_mass(&self) -> Result<(Rational, Vec<Rational>), PointSetError> {
        let per_gap: Vec<Rational> = self
            .bad_gaps_by_size()?
            .into_iter()
            .map(|g| g.length)
            .collect();
        let total = per_gap.iter().sum();
        Ok((total, per_gap))
    }

    pub fn biggest_bad_gap(&self) -> Result<Option<Gap>, PointSetError> {
        Ok(self.bad_gaps_by_size()?.into_iter().next())
    }

    /// Member endpoints, midpoints and interior quartiles of every component.
    pub fn sample_points(&self) -> Vec<Rational> {
        let four = Rational::from_int(4);
        let mut out = Vec::new();
        for c in &self.components {
            if c.is_point() {
                out.push(c.lo.clone());
                continue;
            }
            if c.lo_closed {
                out.push(c.lo.clone());
            }
            let len = c.length();
            for k in 1..=3 {
                out.push(&c.lo + &len * Rational::from_int(k) / &four);
            }
            if c.hi_closed {
                out.push(c.hi.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Classifies the members of the window with the given bounds.
    pub fn window(
        &self,
        lo: &Rational,
        hi: &Rational,
        lo_closed: bool,
        hi_closed: bool,
    ) -> WindowContent {
        let mut found: Option<Rational> = None;
        for c in &self.components {
            // intersection bounds
            let (a, a_closed) = if &c.lo > lo {
                (c.lo.clone(), c.lo_closed)
            } else if &c.lo == lo {
                (c.lo.clone(), c.lo_closed && lo_closed)
            } else {
                (lo.clone(), lo_closed)
            };
            let (b, b_closed) = if &c.hi < hi {
                (c.hi.clone(), c.hi_closed)
            } else if &c.hi == hi {
                (c.hi.clone(), c.hi_closed && hi_closed)
            } else {
                (hi.clone(), hi_closed)
            };
            if a < b {
                return WindowContent::Many;
            }
            if a == b && a_closed && b_closed {
                if found.is_some() {
                    return WindowContent::Many;
                }
                found = Some(a);
            }
        }
        match found {
            Some(s) => WindowContent::Single(s),
            None => WindowContent::Empty,
        }
    }

    /// `sup (S ∩ (-∞, x))`, if that intersection is nonempty.
    pub fn sup_below(&self, x: &Rational) -> Option<Rational> {
        self.components
            .iter()
            .filter(|c| &c.lo < x)
            .map(|c| Rational::min_of(&c.hi, x))
            .max()
    }

    /// `inf (S ∩ (x, +∞))`, if that intersection is nonempty.
    pub fn inf_above(&self, x: &Rational) -> Option<Rational> {
        self.components
            .iter()
            .filter(|c| &c.hi > x)
            .map(|c| Rational::max_of(&c.lo, x))
            .min()
    }

    pub fn translate(&self, t: &Rational) -> PointSet {
        self.map_affine(&Rational::one(), t)
    }

    /// Image under `x ↦ -x`.
    pub fn mirror(&self) -> PointSet {
        self.map_affine(&-Rational::one(), &Rational::zero())
    }

    /// Image under a nonconstant affine map.
    pub fn map_affine(&self, slope: &Rational, intercept: &Rational) -> PointSet {
        assert!(!slope.is_zero(), "affine image needs a nonzero slope");
        let comps = self
            .components
            .iter()
            .map(|c| c.map_affine(slope, intercept))
            .collect();
        normalize(comps).expect("affine image of a valid set is valid")
    }

    /// The set split at the given cut points: each component is broken into
    /// pieces so that no cut lies strictly inside a piece. Cut points that are
    /// members become isolated point pieces.
    pub fn atoms(&self, cuts: &[Rational]) -> Vec<Component> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.is_point() {
                out.push(c.clone());
                continue;
            }
            let inner: Vec<&Rational> = cuts.iter().filter(|x| &c.lo < *x && *x < &c.hi).collect();
            let mut lo = c.lo.clone();
            if c.lo_closed {
                out.push(Component::point(c.lo.clone()));
            }
            for x in inner {
                out.push(Component::interval(lo.clone(), x.clone(), false, false));
                out.push(Component::point(x.clone()));
                lo = x.clone();
            }
            out.push(Component::interval(lo, c.hi.clone(), false, false));
            if c.hi_closed {
                out.push(Component::point(c.hi.clone()));
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        out.dedup();
        out
    }

    pub fn unit_partition(&self, anchor: &Rational) -> Result<UnitPartition, PointSetError> {
        let inf = self.inf()?;
        let sup = self.sup()?;
        // I_k = [anchor + k - 2, anchor + k - 1]
        let k_min = (inf - anchor).floor_i64() + 2;
        let k_max = ((sup - anchor).ceil_i64() + 1).max(k_min);
        let intervals: Vec<(i64, Rational, Rational)> = (k_min..=k_max)
            .map(|k| {
                let lo = anchor + Rational::from_int(k - 2);
                let hi = &lo + Rational::one();
                (k, lo, hi)
            })
            .collect();
        let m = intervals.iter().filter(|(k, _, _)| *k <= 0).count();
        let n = intervals.len() - m;
        Ok(UnitPartition {
            anchor: anchor.clone(),
            m,
            n,
            intervals,
        })
    }
}

/// Covering of a set's span by consecutive unit intervals `I_k`, with
/// `I_1 = [anchor - 1, anchor]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitPartition {
    pub anchor: Rational,
    /// Number of intervals with index `k <= 0`.
    pub m: usize,
    /// Number of intervals with index `k >= 1`.
    pub n: usize,
    pub intervals: Vec<(i64, Rational, Rational)>,
}

impl UnitPartition {
    pub fn total(&self) -> usize {
        self.m + self.n
    }

    /// Index of the unit interval `[lo, lo + 1]` whose interior or left end holds `x`.
    pub fn index_of(&self, x: &Rational) -> i64 {
        (x - &self.anchor).floor_i64() + 2
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    components: Vec<Component>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PointSetRepr {
            components: self.components.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PointSetRepr::deserialize(deserializer)?;
        normalize(repr.components).map_err(serde::de::Error::custom)
    }
}
