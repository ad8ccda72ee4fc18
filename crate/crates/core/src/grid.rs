//! Exact threshold-preserving reparameterizations on the unit grid.
//!
//! Let `C` be every component endpoint of `S` shifted by every integer,
//! restricted to `[inf S, sup S]`. `C` is closed under `±1` inside the span,
//! so each cell between consecutive grid points is carried onto another cell
//! (or outside the span) by a unit shift. A map that is affine on every cell
//! is therefore described by its grid values, and both strict monotonicity on
//! `S` and the law `x + 1 < y ⇔ g(x) + 1 < g(y)` become difference constraints
//! between grid values:
//!
//! * atoms are member grid points and open cells lying inside `S`;
//! * if every pair of an atom `A` and a later atom `B` satisfies `x + 1 < y`,
//!   then `g(sup A) + 1 ≤ g(inf B)` (strict when both are points);
//! * if every pair satisfies `x + 1 ≥ y`, then `g(inf A) + 1 ≥ g(sup B)`;
//! * otherwise `B = A + 1` is a cell and `g` must commute with the shift on it.
//!
//! Closing a gap pins its two endpoints to the same value. An infeasible
//! system is reported with a negative cycle of labelled constraints.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diffcons::{DiffSystem, Infeasible};
use crate::plmap::PlMap;
use crate::pointset::{PointSet, PointSetError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error(transparent)]
    Set(#[from] PointSetError),
    #[error("{0} is not a grid point")]
    NotAGridPoint(Rational),
    #[error(transparent)]
    Infeasible(#[from] Infeasible),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub lo: usize,
    pub hi: usize,
}

impl Atom {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone)]
pub struct ThresholdGrid {
    pub set: PointSet,
    pub points: Vec<Rational>,
    pub atoms: Vec<Atom>,
    pub system: DiffSystem,
}

fn grid_points(s: &PointSet) -> Result<Vec<Rational>, PointSetError> {
    let inf = s.inf()?.clone();
    let sup = s.sup()?.clone();
    let mut out = BTreeSet::new();
    for c in s.components() {
        for e in [&c.lo, &c.hi] {
            let k0 = (&inf - e).ceil_i64();
            let k1 = (&sup - e).floor_i64();
            for k in k0..=k1 {
                out.insert(e + Rational::from_int(k));
            }
        }
    }
    Ok(out.into_iter().collect())
}

impl ThresholdGrid {
    /// Builds the system for `s`, with `closures` listing pairs of grid points
    /// that must receive equal values.
    pub fn build(s: &PointSet, closures: &[(Rational, Rational)]) -> Result<Self, GridError> {
        let points = grid_points(s)?;
        let k = points.len();
        let mut atoms = Vec::new();
        let mut in_cell = Vec::with_capacity(k.saturating_sub(1));
        for i in 0..k {
            if s.contains(&points[i]) {
                atoms.push(Atom { lo: i, hi: i });
            }
            if i + 1 < k {
                let inside = s.contains(&points[i].midpoint(&points[i + 1]));
                in_cell.push(inside);
                if inside {
                    atoms.push(Atom { lo: i, hi: i + 1 });
                }
            }
        }
        let one = Rational::one();
        let zero = Rational::zero();
        let mut sys = DiffSystem::new(k);
        // non-decreasing along the grid, strictly on member cells
        for i in 0..k.saturating_sub(1) {
            let label = format!("monotone {} {}", points[i], points[i + 1]);
            if in_cell[i] {
                sys.lt(i, i + 1, zero.clone(), &label);
            } else {
                sys.le(i, i + 1, zero.clone(), &label);
            }
        }
        for w in atoms.windows(2) {
            if w[0].is_point() && w[1].is_point() {
                sys.lt(
                    w[0].lo,
                    w[1].lo,
                    zero.clone(),
                    &format!("increase {} {}", points[w[0].lo], points[w[1].lo]),
                );
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            let a_lo = &points[a.lo];
            let a_hi = &points[a.hi];
            let mut last_below: Option<usize> = None;
            let mut first_above: Option<usize> = None;
            for (j, b) in atoms.iter().enumerate().skip(i) {
                let b_lo = &points[b.lo];
                let b_hi = &points[b.hi];
                let shifted_hi = a_hi + &one;
                let above =
                    &shifted_hi < b_lo || (&shifted_hi == b_lo && !(a.is_point() && b.is_point()));
                if above {
                    first_above = Some(j);
                    break;
                }
                if &(a_lo + &one) >= b_hi {
                    last_below = Some(j);
                    continue;
                }
                // the shifted cell
                debug_assert!(!a.is_point() && !b.is_point() && b_lo == &(a_lo + &one));
                let label = format!("shift {} {}", a_lo, b_lo);
                sys.eq(b.lo, a.lo, one.clone(), &label);
                sys.eq(b.hi, a.hi, one.clone(), &label);
            }
            if let Some(j) = last_below {
                let b = &atoms[j];
                // g(b_hi) - g(a_lo) <= 1
                sys.le(
                    b.hi,
                    a.lo,
                    one.clone(),
                    &format!("within {} {}", a_lo, points[b.hi]),
                );
            }
            if let Some(j) = first_above {
                let b = &atoms[j];
                let label = format!("beyond {} {}", a_hi, points[b.lo]);
                if a.is_point() && b.is_point() {
                    sys.lt(a.hi, b.lo, -one.clone(), &label);
                } else {
                    sys.le(a.hi, b.lo, -one.clone(), &label);
                }
            }
        }
        let mut grid = ThresholdGrid {
            set: s.clone(),
            points,
            atoms,
            system: sys,
        };
        for (x, y) in closures {
            grid.pin_equal(x, y)?;
        }
        Ok(grid)
    }

    pub fn index_of(&self, x: &Rational) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    /// Requires `g(x) = g(y)`.
    pub fn pin_equal(&mut self, x: &Rational, y: &Rational) -> Result<(), GridError> {
        let i = self
            .index_of(x)
            .ok_or_else(|| GridError::NotAGridPoint(x.clone()))?;
        let j = self
            .index_of(y)
            .ok_or_else(|| GridError::NotAGridPoint(y.clone()))?;
        self.system
            .eq(i, j, Rational::zero(), &format!("close {} {}", x, y));
        Ok(())
    }

    /// Requires `g(x) - g(y) = w`.
    pub fn pin_difference(
        &mut self,
        x: &Rational,
        y: &Rational,
        w: Rational,
    ) -> Result<(), GridError> {
        let i = self
            .index_of(x)
            .ok_or_else(|| GridError::NotAGridPoint(x.clone()))?;
        let j = self
            .index_of(y)
            .ok_or_else(|| GridError::NotAGridPoint(y.clone()))?;
        self.system.eq(i, j, w, &format!("pin {} {}", x, y));
        Ok(())
    }

    /// Grid values of the largest solution lying on or below the identity.
    pub fn solve_values(&self) -> Result<Vec<Rational>, Infeasible> {
        self.system.solve_below(&self.points)
    }

    pub fn solve(&self) -> Result<PlMap, GridError> {
        let vals = self.solve_values()?;
        Ok(self.map_from_values(&vals))
    }

    pub fn map_from_values(&self, vals: &[Rational]) -> PlMap {
        let knots: Vec<(Rational, Rational)> = self
            .points
            .iter()
            .cloned()
            .zip(vals.iter().cloned())
            .collect();
        PlMap::from_knots(&knots, self.set.clone()).expect("grid points are strictly increasing")
    }
}

/// A threshold-preserving, strictly increasing map of `s` fusing every gap
/// `(lo, hi)` in `closures`.
pub fn solve_closing(s: &PointSet, closures: &[(Rational, Rational)]) -> Result<PlMap, GridError> {
    ThresholdGrid::build(s, closures)?.solve()
}
