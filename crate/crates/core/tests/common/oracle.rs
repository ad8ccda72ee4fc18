//! Brute-force search for threshold-preserving gap-closing maps.

use std::collections::BTreeSet;

use gapsmith::plmap::PlMap;
use gapsmith::pointset::PointSet;
use gapsmith::rational::{q, Rational};

/// Searches maps affine on each grid cell, with grid values in `Z / den`, for
/// one that fuses every bad gap and keeps the threshold. Values are held as
/// numerators over `den`; each assignment narrows the bounds of the remaining
/// grid values, and complete assignments are certified exactly.
pub struct Oracle<'a> {
    s: &'a PointSet,
    den: i64,
    pub points: Vec<Rational>,
    /// `x[a] - x[b] <= c` in numerators.
    pub constraints: Vec<(usize, usize, i64)>,
    pub values: Vec<i64>,
    pub nodes: u64,
}

impl<'a> Oracle<'a> {
    pub fn new(s: &'a PointSet, den: i64) -> Self {
        let inf = s.inf().unwrap().clone();
        let sup = s.sup().unwrap().clone();
        let mut pts = BTreeSet::new();
        for c in s.components() {
            for e in [&c.lo, &c.hi] {
                for k in (&inf - e).ceil_i64()..=(&sup - e).floor_i64() {
                    pts.insert(e + Rational::from_int(k));
                }
            }
        }
        let points: Vec<Rational> = pts.into_iter().collect();
        let n = points.len();
        let member: Vec<bool> = points.iter().map(|x| s.contains(x)).collect();
        let closure: Vec<bool> = points.iter().map(|x| s.closure_contains(x)).collect();
        let one = Rational::one();
        let mut cs = Vec::new();
        // x[a] <= x[b] + c, strict shaved by one numerator
        let mut le = |a: usize, b: usize, c: i64, strict: bool| {
            cs.push((a, b, if strict { c - 1 } else { c }))
        };
        let cells: Vec<bool> = points
            .windows(2)
            .map(|w| s.contains(&w[0].midpoint(&w[1])))
            .collect();
        for i in 0..n.saturating_sub(1) {
            le(i, i + 1, 0, cells[i]);
        }
        for i in 1..n {
            if !closure[i] {
                // both neighbouring cells miss S, so the value is immaterial
                le(i, i - 1, 0, false);
            }
        }
        for g in s.bad_gaps().unwrap() {
            let lo = points.binary_search(&g.lo).unwrap();
            let hi = points.binary_search(&g.hi).unwrap();
            le(hi, lo, 0, false);
            le(lo, hi, 0, false);
        }
        // The law holds for sequences x -> a, y -> b inside S; each side of a
        // grid point (left cell, the point itself, right cell) that meets S
        // supplies such sequences.
        let sides = |i: usize| -> Vec<i8> {
            let mut v = Vec::new();
            if i > 0 && cells[i - 1] {
                v.push(-1);
            }
            if member[i] {
                v.push(0);
            }
            if i + 1 < n && cells[i] {
                v.push(1);
            }
            v
        };
        for b in 0..n {
            for a in 0..b {
                let both = member[a] && member[b];
                if closure[a] && closure[b] {
                    le(a, b, 0, both);
                }
                match (&points[a] + &one).cmp(&points[b]) {
                    std::cmp::Ordering::Less if closure[a] && closure[b] => le(a, b, -den, both),
                    std::cmp::Ordering::Greater if closure[a] && closure[b] => le(b, a, den, false),
                    std::cmp::Ordering::Equal => {
                        for sa in sides(a) {
                            for sb in sides(b) {
                                // x + 1 compared with y near b
                                match sa.cmp(&sb) {
                                    std::cmp::Ordering::Less => le(a, b, -den, false),
                                    std::cmp::Ordering::Greater => le(b, a, den, false),
                                    std::cmp::Ordering::Equal if sa == 0 => le(b, a, den, false),
                                    std::cmp::Ordering::Equal => {
                                        le(a, b, -den, false);
                                        le(b, a, den, false);
                                    }
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        Oracle {
            s,
            den,
            points,
            constraints: cs,
            values: Vec::new(),
            nodes: 0,
        }
    }

    fn numerator(&self, x: &Rational) -> i64 {
        let v = x * &Rational::from_int(self.den);
        assert!(v.is_integer(), "{x} is not on the lattice");
        v.floor_i64()
    }

    pub fn leaf(&self) -> bool {
        let knots: Vec<(Rational, Rational)> = self
            .points
            .iter()
            .cloned()
            .zip(self.values.iter().map(|&v| q(v, self.den)))
            .collect();
        let Ok(map) = PlMap::from_knots(&knots, self.s.clone()) else {
            return false;
        };
        map.is_strictly_increasing_on(self.s).unwrap().passed()
            && map.threshold_equiv(self.s).unwrap().passed()
            && map.image(self.s).unwrap().bad_gaps().unwrap().is_empty()
    }

    /// Bounds on every unassigned value implied by the assigned ones.
    fn bounds(&self, lo: &mut [i64], hi: &mut [i64]) -> bool {
        let k = self.values.len();
        for &(a, b, c) in &self.constraints {
            match (a < k, b < k) {
                (true, true) => {
                    if self.values[a] - self.values[b] > c {
                        return false;
                    }
                }
                (false, true) => hi[a] = hi[a].min(self.values[b] + c),
                (true, false) => lo[b] = lo[b].max(self.values[a] - c),
                (false, false) => {}
            }
        }
        (k..lo.len()).all(|i| lo[i] <= hi[i])
    }

    fn search(&mut self, floor: i64, ceiling: i64) -> bool {
        self.nodes += 1;
        let n = self.points.len();
        let mut lo = vec![floor; n];
        let mut hi = vec![ceiling; n];
        if !self.bounds(&mut lo, &mut hi) {
            return false;
        }
        let i = self.values.len();
        if i == n {
            return self.leaf();
        }
        for v in lo[i]..=hi[i] {
            self.values.push(v);
            if self.search(floor, ceiling) {
                return true;
            }
            self.values.pop();
        }
        false
    }

    /// Translation is free, so the first grid value is pinned to `inf S`.
    pub fn run(&mut self) -> bool {
        let inf = self.numerator(&self.points[0]);
        let span = self.numerator(&(self.points.last().unwrap() - &self.points[0]));
        self.values.push(inf);
        self.search(inf, inf + span + self.den)
    }
}
