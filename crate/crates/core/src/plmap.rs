//! Non-decreasing piecewise-affine maps and their certificates.
//!
//! A [`PlMap`] is an ordered list of [`AffinePiece`]s over pairwise disjoint
//! domains, together with the point set it is meant to act on. Slope-zero
//! pieces are allowed: they collapse a stretch of the line that holds at most
//! one member of the host set.
//!
//! Two certificates are provided. Both first run the pairwise check over
//! [`PointSet::sample_points`], then an exact check over every pair of
//! *atoms* (members split at the map's breakpoints) using exact two-variable
//! feasibility, so that violations between samples are also caught.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::halfplane::{find_point, Lin2};
use crate::pointset::{normalize, Component, PointSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlMapError {
    #[error("{0} is outside the domain of every piece")]
    OutOfDomain(Rational),
    #[error("inner image point {0} is outside the outer map's domain")]
    DomainMismatch(Rational),
    #[error("malformed map: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub slope: Rational,
    pub intercept: Rational,
}

impl fmt::Debug for AffinePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{} ↦ {}·x + {}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
            self.slope,
            self.intercept
        )
    }
}

impl AffinePiece {
    pub fn new(
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
        slope: Rational,
        intercept: Rational,
    ) -> Self {
        AffinePiece {
            lo,
            hi,
            lo_closed,
            hi_closed,
            slope,
            intercept,
        }
    }

    /// The affine function through `(x0, y0)` and `(x1, y1)` on `[x0, x1]`.
    pub fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        AffinePiece::new(x0.clone(), x1.clone(), true, true, slope, intercept)
    }

    pub fn covers(&self, x: &Rational) -> bool {
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

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    fn same_formula(&self, other: &AffinePiece) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlMap {
    pub pieces: Vec<AffinePiece>,
    #[serde(rename = "domain")]
    pub domain_hint: PointSet,
}

impl fmt::Debug for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pieces.iter()).finish()
    }
}

/// Outcome of a monotonicity or threshold certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Certificate {
    Pass,
    Fail { x: Rational, y: Rational },
}

impl Certificate {
    pub fn passed(&self) -> bool {
        matches!(self, Certificate::Pass)
    }

    pub fn witness(&self) -> Option<(&Rational, &Rational)> {
        match self {
            Certificate::Pass => None,
            Certificate::Fail { x, y } => Some((x, y)),
        }
    }
}

impl PlMap {
    /// Builds a map from pieces, checking order, disjointness and slopes.
    pub fn new(pieces: Vec<AffinePiece>, domain_hint: PointSet) -> Result<Self, PlMapError> {
        for p in &pieces {
            if p.lo > p.hi || (p.lo == p.hi && !(p.lo_closed && p.hi_closed)) {
                return Err(PlMapError::Malformed(format!("empty piece {:?}", p)));
            }
            if p.slope.is_negative() {
                return Err(PlMapError::Malformed(format!("negative slope in {:?}", p)));
            }
        }
        for w in pieces.windows(2) {
            let ok =
                w[0].hi < w[1].lo || (w[0].hi == w[1].lo && !(w[0].hi_closed && w[1].lo_closed));
            if !ok {
                return Err(PlMapError::Malformed(format!(
                    "pieces {:?} and {:?} overlap or are out of order",
                    w[0], w[1]
                )));
            }
        }
        Ok(PlMap {
            pieces,
            domain_hint,
        })
    }

    pub fn identity(domain: PointSet) -> Self {
        Self::affine(Rational::one(), Rational::zero(), domain)
    }

    /// A single affine formula over the closed hull of `domain`.
    pub fn affine(slope: Rational, intercept: Rational, domain: PointSet) -> Self {
        let pieces = match (domain.inf(), domain.sup()) {
            (Ok(a), Ok(b)) => vec![AffinePiece::new(
                a.clone(),
                b.clone(),
                true,
                true,
                slope,
                intercept,
            )],
            _ => Vec::new(),
        };
        PlMap {
            pieces,
            domain_hint: domain,
        }
    }

    /// The continuous map interpolating `knots` (strictly increasing abscissae).
    pub fn from_knots(
        knots: &[(Rational, Rational)],
        domain: PointSet,
    ) -> Result<Self, PlMapError> {
        if knots.is_empty() {
            return Err(PlMapError::Malformed("no knots".into()));
        }
        if knots.len() == 1 {
            let (x, y) = &knots[0];
            return PlMap::new(
                vec![AffinePiece::new(
                    x.clone(),
                    x.clone(),
                    true,
                    true,
                    Rational::zero(),
                    y.clone(),
                )],
                domain,
            );
        }
        let mut pieces = Vec::with_capacity(knots.len() - 1);
        for (i, w) in knots.windows(2).enumerate() {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x0 >= x1 {
                return Err(PlMapError::Malformed(
                    "knots not strictly increasing".into(),
                ));
            }
            let mut p = AffinePiece::through(x0, y0, x1, y1);
            p.lo_closed = i == 0;
            pieces.push(p);
        }
        let mut m = PlMap::new(pieces, domain)?;
        m.merge_pieces();
        Ok(m)
    }

    pub fn piece_at(&self, x: &Rational) -> Option<&AffinePiece> {
        let idx = self.pieces.partition_point(|p| &p.lo <= x);
        // a degenerate or closed-left piece starting at x sits at idx-1
        self.pieces[..idx]
            .iter()
            .rev()
            .take(2)
            .find(|p| p.covers(x))
    }

    pub fn apply(&self, x: &Rational) -> Result<Rational, PlMapError> {
        self.piece_at(x)
            .map(|p| p.eval(x))
            .ok_or_else(|| PlMapError::OutOfDomain(x.clone()))
    }

    /// All piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self
            .pieces
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Joins consecutive touching pieces that share one affine formula.
    pub fn merge_pieces(&mut self) {
        let mut out: Vec<AffinePiece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.drain(..) {
            if let Some(last) = out.last_mut() {
                let touching = last.hi == p.lo && (last.hi_closed || p.lo_closed);
                let degenerate_last = last.lo == last.hi;
                let degenerate_p = p.lo == p.hi;
                if touching
                    && (last.same_formula(&p)
                        || (degenerate_p && last.eval(&p.lo) == p.eval(&p.lo) && !last.hi_closed)
                        || (degenerate_last
                            && last.eval(&last.lo) == p.eval(&last.lo)
                            && !p.lo_closed))
                {
                    if degenerate_last && !last.same_formula(&p) {
                        let keep_lo = last.lo.clone();
                        *last = p;
                        last.lo = keep_lo;
                        last.lo_closed = true;
                    } else {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    }
                    continue;
                }
            }
            out.push(p);
        }
        self.pieces = out;
    }

    /// `outer ∘ inner`, over `inner`'s domain hint.
    pub fn compose(outer: &PlMap, inner: &PlMap) -> Result<PlMap, PlMapError> {
        // every member of inner's domain must land inside outer's pieces
        let img = inner.image(&inner.domain_hint)?;
        for c in img.components() {
            outer.check_covers(c)?;
        }
        let outer_bps = outer.breakpoints();
        let mut atomic: Vec<AffinePiece> = Vec::new();
        for p in &inner.pieces {
            // cut points inside p where p(x) hits an outer breakpoint
            let mut cuts: Vec<Rational> = Vec::new();
            if !p.slope.is_zero() {
                for b in &outer_bps {
                    let t = (b - &p.intercept) / &p.slope;
                    if t > p.lo && t < p.hi {
                        cuts.push(t);
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut sub: Vec<Component> = Vec::new();
            if p.lo == p.hi {
                sub.push(Component::point(p.lo.clone()));
            } else {
                if p.lo_closed {
                    sub.push(Component::point(p.lo.clone()));
                }
                let mut lo = p.lo.clone();
                for t in cuts {
                    sub.push(Component::interval(lo.clone(), t.clone(), false, false));
                    sub.push(Component::point(t.clone()));
                    lo = t;
                }
                sub.push(Component::interval(lo, p.hi.clone(), false, false));
                if p.hi_closed {
                    sub.push(Component::point(p.hi.clone()));
                }
            }
            for s in sub {
                let probe = if s.is_point() {
                    s.lo.clone()
                } else {
                    s.lo.midpoint(&s.hi)
                };
                let y = p.eval(&probe);
                let Some(o) = outer.piece_at(&y) else {
                    // only acceptable off the domain hint
                    if s.is_point() && !inner.domain_hint.contains(&s.lo) {
                        continue;
                    }
                    if !s.is_point()
                        && !inner
                            .domain_hint
                            .components()
                            .iter()
                            .any(|c| overlaps(c, &s))
                    {
                        continue;
                    }
                    return Err(PlMapError::DomainMismatch(y));
                };
                atomic.push(AffinePiece::new(
                    s.lo.clone(),
                    s.hi.clone(),
                    s.lo_closed,
                    s.hi_closed,
                    &o.slope * &p.slope,
                    &o.slope * &p.intercept + &o.intercept,
                ));
            }
        }
        let mut m = PlMap {
            pieces: atomic,
            domain_hint: inner.domain_hint.clone(),
        };
        m.merge_pieces();
        Ok(m)
    }

    fn check_covers(&self, c: &Component) -> Result<(), PlMapError> {
        let probe_pts: Vec<Rational> = if c.is_point() {
            vec![c.lo.clone()]
        } else {
            let mut v = vec![c.lo.midpoint(&c.hi)];
            if c.lo_closed {
                v.push(c.lo.clone());
            }
            if c.hi_closed {
                v.push(c.hi.clone());
            }
            v
        };
        for x in &probe_pts {
            if self.piece_at(x).is_none() {
                return Err(PlMapError::DomainMismatch(x.clone()));
            }
        }
        // interior coverage: no hole in the piece union inside c
        for b in self.breakpoints() {
            if b > c.lo && b < c.hi && self.piece_at(&b).is_none() {
                return Err(PlMapError::DomainMismatch(b));
            }
        }
        let lo_ok =
            self.pieces.iter().any(|p| p.lo <= c.lo) && self.pieces.iter().any(|p| p.hi >= c.hi);
        if !lo_ok {
            return Err(PlMapError::DomainMismatch(c.lo.clone()));
        }
        Ok(())
    }

    /// Members of `s` split at this map's breakpoints; each atom lies in one piece.
    fn atoms_with_pieces<'a>(
        &'a self,
        s: &PointSet,
    ) -> Result<Vec<(Component, &'a AffinePiece)>, PlMapError> {
        let atoms = s.atoms(&self.breakpoints());
        let mut out = Vec::with_capacity(atoms.len());
        for a in atoms {
            let probe = if a.is_point() {
                a.lo.clone()
            } else {
                a.lo.midpoint(&a.hi)
            };
            let p = self
                .piece_at(&probe)
                .ok_or_else(|| PlMapError::OutOfDomain(probe.clone()))?;
            out.push((a, p));
        }
        Ok(out)
    }

    /// Exact image of `s`, normalized.
    pub fn image(&self, s: &PointSet) -> Result<PointSet, PlMapError> {
        let comps: Vec<Component> = self
            .atoms_with_pieces(s)?
            .into_iter()
            .map(|(a, p)| {
                if p.slope.is_zero() {
                    Component::point(p.eval(&a.lo))
                } else {
                    a.map_affine(&p.slope, &p.intercept)
                }
            })
            .collect();
        Ok(normalize(comps).expect("image components are well formed"))
    }

    /// Strict monotonicity on the members of `s`.
    pub fn is_strictly_increasing_on(&self, s: &PointSet) -> Result<Certificate, PlMapError> {
        let samples = s.sample_points();
        let vals = samples
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..samples.len() {
            for j in i + 1..samples.len() {
                if vals[i] >= vals[j] {
                    return Ok(Certificate::Fail {
                        x: samples[i].clone(),
                        y: samples[j].clone(),
                    });
                }
            }
        }
        let atoms = self.atoms_with_pieces(s)?;
        for (i, (a, pa)) in atoms.iter().enumerate() {
            for (b, pb) in atoms.iter().skip(i) {
                // x in a, y in b, x < y, f(x) >= f(y)
                let mut cons = membership(a, true);
                cons.extend(membership(b, false));
                cons.push(Lin2::lt(
                    Rational::one(),
                    -Rational::one(),
                    Rational::zero(),
                ));
                // f(y) - f(x) <= 0
                cons.push(Lin2::le(
                    -pa.slope.clone(),
                    pb.slope.clone(),
                    &pb.intercept - &pa.intercept,
                ));
                if let Some((x, y)) = find_point(&cons) {
                    return Ok(Certificate::Fail { x, y });
                }
            }
        }
        Ok(Certificate::Pass)
    }

    /// Unit-threshold equivalence on the members of `s`:
    /// `x + 1 < y ⇔ f(x) + 1 < f(y)`.
    pub fn threshold_equiv(&self, s: &PointSet) -> Result<Certificate, PlMapError> {
        let one = Rational::one();
        let samples = s.sample_points();
        let vals = samples
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..samples.len() {
            for j in 0..samples.len() {
                let before = &samples[i] + &one < samples[j];
                let after = &vals[i] + &one < vals[j];
                if before != after {
                    return Ok(Certificate::Fail {
                        x: samples[i].clone(),
                        y: samples[j].clone(),
                    });
                }
            }
        }
        let atoms = self.atoms_with_pieces(s)?;
        for (a, pa) in &atoms {
            for (b, pb) in &atoms {
                // skip pairs whose relation is decided far apart in both coordinates
                if &a.hi + &one < b.lo && pa.eval(&a.hi) + &one < pb.eval(&b.lo) {
                    continue;
                }
                if &a.lo + &one > b.hi && pa.eval(&a.lo) + &one > pb.eval(&b.hi) {
                    continue;
                }
                let mut base = membership(a, true);
                base.extend(membership(b, false));
                // g(x,y) = f(y) - f(x) - 1 = pb.s*y - pa.s*x + (pb.i - pa.i - 1)
                let gc = &pb.intercept - &pa.intercept - &one;
                // violation 1: x + 1 < y and g <= 0
                let mut v1 = base.clone();
                v1.push(Lin2::lt(one.clone(), -one.clone(), one.clone()));
                v1.push(Lin2::le(-pa.slope.clone(), pb.slope.clone(), gc.clone()));
                if let Some((x, y)) = find_point(&v1) {
                    return Ok(Certificate::Fail { x, y });
                }
                // violation 2: y - x - 1 <= 0 and g > 0
                let mut v2 = base;
                v2.push(Lin2::le(-one.clone(), one.clone(), -one.clone()));
                v2.push(Lin2::lt(pa.slope.clone(), -pb.slope.clone(), -gc));
                if let Some((x, y)) = find_point(&v2) {
                    return Ok(Certificate::Fail { x, y });
                }
            }
        }
        Ok(Certificate::Pass)
    }

    /// `max |f(x) - x|` over the sample points of `s`.
    pub fn sup_distance_from_identity(&self, s: &PointSet) -> Result<Rational, PlMapError> {
        let mut best = Rational::zero();
        for x in s.sample_points() {
            let d = (self.apply(&x)? - &x).abs();
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }

    /// Conjugate by `t(x) = slope·x + shift` (slope ≠ 0): returns `t⁻¹ ∘ self ∘ t`
    /// as a map on `t⁻¹(domain)`. With a negative slope the piece order flips.
    pub fn conjugate(&self, slope: &Rational, shift: &Rational, new_domain: PointSet) -> PlMap {
        // x' = (x - shift)/slope  i.e. t^{-1}
        let mut pieces: Vec<AffinePiece> = self
            .pieces
            .iter()
            .map(|p| {
                let a = (&p.lo - shift) / slope;
                let b = (&p.hi - shift) / slope;
                // f'(x) = t^{-1}(f(t(x))) = (p.s*(slope*x+shift) + p.i - shift)/slope
                let new_slope = p.slope.clone();
                let new_int = (&p.slope * shift + &p.intercept - shift) / slope;
                if slope.is_negative() {
                    AffinePiece::new(b, a, p.hi_closed, p.lo_closed, new_slope, new_int)
                } else {
                    AffinePiece::new(a, b, p.lo_closed, p.hi_closed, new_slope, new_int)
                }
            })
            .collect();
        if slope.is_negative() {
            pieces.reverse();
        }
        PlMap {
            pieces,
            domain_hint: new_domain,
        }
    }
}

fn overlaps(a: &Component, b: &Component) -> bool {
    a.lo < b.hi && b.lo < a.hi
}

/// Constraints placing the x (or y) coordinate inside a component.
fn membership(c: &Component, is_x: bool) -> Vec<Lin2> {
    let one = Rational::one();
    let zero = Rational::zero();
    let coef = |v: Rational| {
        if is_x {
            (v, zero.clone())
        } else {
            (zero.clone(), v)
        }
    };
    let mut out = Vec::with_capacity(2);
    // lo ⋈ v  ⇔ -v + lo ⋈ 0
    let (a, b) = coef(-one.clone());
    if c.is_point() || c.lo_closed {
        out.push(Lin2::le(a, b, c.lo.clone()));
    } else {
        out.push(Lin2::lt(a, b, c.lo.clone()));
    }
    // v ⋈ hi ⇔ v - hi ⋈ 0
    let (a, b) = coef(one);
    if c.is_point() || c.hi_closed {
        out.push(Lin2::le(a, b, -c.hi.clone()));
    } else {
        out.push(Lin2::lt(a, b, -c.hi.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn closed(a: Rational, b: Rational) -> Component {
        Component::closed(a, b)
    }

    fn set(c: Vec<Component>) -> PointSet {
        normalize(c).unwrap()
    }

    fn debreu_f1() -> PlMap {
        // x·10/9 on [0,1/2], (x - 1/10)·10/9 on [3/5,1]
        PlMap::new(
            vec![
                AffinePiece::new(q(0, 1), q(1, 2), true, true, q(10, 9), q(0, 1)),
                AffinePiece::new(q(3, 5), q(1, 1), true, true, q(10, 9), q(-1, 9)),
            ],
            set(vec![
                Component::interval(q(0, 1), q(1, 2), true, false),
                closed(q(3, 5), q(1, 1)),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = PlMap::identity(set(vec![closed(q(0, 1), q(1, 1))]));
        assert_eq!(id.apply(&q(3, 7)).unwrap(), q(3, 7));
        assert_eq!(debreu_f1().apply(&q(1, 2)).unwrap(), q(5, 9));
        assert_eq!(
            debreu_f1().apply(&q(11, 20)),
            Err(PlMapError::OutOfDomain(q(11, 20)))
        );
    }

    #[test]
    fn compose_examples() {
        let dom = set(vec![closed(q(0, 1), q(1, 1))]);
        let m = debreu_f1();
        let id = PlMap::identity(set(vec![closed(q(0, 1), q(1, 1))]));
        let c = PlMap::compose(&id, &m).unwrap();
        for x in m.domain_hint.sample_points() {
            assert_eq!(c.apply(&x).unwrap(), m.apply(&x).unwrap());
        }
        let twice = PlMap::affine(q(2, 1), q(0, 1), set(vec![closed(q(1, 1), q(2, 1))]));
        let plus1 = PlMap::affine(q(1, 1), q(1, 1), dom);
        let c = PlMap::compose(&twice, &plus1).unwrap();
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(
            (c.pieces[0].slope.clone(), c.pieces[0].intercept.clone()),
            (q(2, 1), q(2, 1))
        );
    }

    #[test]
    fn compose_rejects_mismatch() {
        let small = PlMap::identity(set(vec![closed(q(0, 1), q(1, 2))]));
        let inner = PlMap::identity(set(vec![closed(q(0, 1), q(1, 1))]));
        assert!(matches!(
            PlMap::compose(&small, &inner),
            Err(PlMapError::DomainMismatch(_))
        ));
    }

    #[test]
    fn image_examples() {
        let s = set(vec![
            Component::interval(q(0, 1), q(1, 2), true, false),
            closed(q(3, 5), q(1, 1)),
        ]);
        assert_eq!(PlMap::identity(s.clone()).image(&s).unwrap(), s);
        assert_eq!(
            debreu_f1().image(&s).unwrap(),
            set(vec![closed(q(0, 1), q(1, 1))])
        );
        // constant piece on [1/4,1/2] collapses
        let m = PlMap::from_knots(
            &[
                (q(0, 1), q(0, 1)),
                (q(1, 4), q(1, 4)),
                (q(1, 2), q(1, 4)),
                (q(1, 1), q(3, 4)),
            ],
            set(vec![closed(q(0, 1), q(1, 1))]),
        )
        .unwrap();
        assert_eq!(
            m.image(&set(vec![closed(q(0, 1), q(1, 1))])).unwrap(),
            set(vec![closed(q(0, 1), q(3, 4))])
        );
        assert_eq!(
            m.image(&set(vec![
                Component::point(q(1, 3)),
                Component::point(q(2, 5))
            ]))
            .unwrap(),
            set(vec![Component::point(q(1, 4))])
        );
    }

    #[test]
    fn monotone_examples() {
        let s = set(vec![closed(q(0, 1), q(1, 1))]);
        assert!(PlMap::identity(s.clone())
            .is_strictly_increasing_on(&s)
            .unwrap()
            .passed());
        let c = PlMap::affine(q(0, 1), q(1, 1), s.clone());
        assert_eq!(
            c.is_strictly_increasing_on(&s).unwrap(),
            Certificate::Fail {
                x: q(0, 1),
                y: q(1, 4)
            }
        );
        let f1 = debreu_f1();
        assert!(f1
            .is_strictly_increasing_on(&f1.domain_hint)
            .unwrap()
            .passed());
    }

    #[test]
    fn threshold_examples() {
        let s = set(vec![closed(q(0, 1), q(3, 1))]);
        assert!(PlMap::identity(s.clone())
            .threshold_equiv(&s)
            .unwrap()
            .passed());
        assert!(PlMap::affine(q(1, 1), q(7, 3), s.clone())
            .threshold_equiv(&s)
            .unwrap()
            .passed());
        let pts = set(vec![Component::point(q(0, 1)), Component::point(q(3, 5))]);
        assert_eq!(
            PlMap::affine(q(2, 1), q(0, 1), pts.clone())
                .threshold_equiv(&pts)
                .unwrap(),
            Certificate::Fail {
                x: q(0, 1),
                y: q(3, 5)
            }
        );
    }

    #[test]
    fn exact_pass_catches_between_sample_violation() {
        // cells [0,1] and [1,2]; the second is shifted by 1 - 1/1000, which the
        // sampled pairs miss but an exact pair check does not
        let s = set(vec![closed(q(0, 1), q(2, 1))]);
        let m = PlMap::new(
            vec![
                AffinePiece::new(q(0, 1), q(1, 1), true, true, q(1, 1), q(0, 1)),
                AffinePiece::new(q(1, 1), q(2, 1), false, true, q(1001, 1000), q(-1, 1000)),
            ],
            s.clone(),
        )
        .unwrap();
        let cert = m.threshold_equiv(&s).unwrap();
        let (x, y) = cert.witness().expect("violation must be found");
        let before = x + &Rational::one() < *y;
        let after = m.apply(x).unwrap() + Rational::one() < m.apply(y).unwrap();
        assert_ne!(before, after);
    }

    #[test]
    fn conjugate_by_mirror() {
        // f(x) = 2x on [0,1]; conjugating by t(x) = -x gives x ↦ 2x on [-1,0]
        let m = PlMap::affine(q(2, 1), q(0, 1), set(vec![closed(q(0, 1), q(1, 1))]));
        let c = m.conjugate(&q(-1, 1), &q(0, 1), set(vec![closed(q(-1, 1), q(0, 1))]));
        assert_eq!(c.apply(&q(-1, 2)).unwrap(), q(-1, 1));
    }

    #[test]
    fn json_round_trip() {
        let m = debreu_f1();
        let text = serde_json::to_string(&m).unwrap();
        let back: PlMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
