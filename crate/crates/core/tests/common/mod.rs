#![allow(dead_code)]

pub mod oracle;

use gapsmith::pointset::{normalize, Component, PointSet};
use gapsmith::rational::{q, Rational};
use gapsmith::structure::check_all;
use rand::seq::index::sample;
use rand::Rng;

pub fn co(a: Rational, b: Rational) -> Component {
    Component::interval(a, b, true, false)
}

/// A set with `k` components whose endpoints are distinct multiples of `1/den`
/// in `[0, width]`; roughly a quarter of the components are points.
pub fn random_set<R: Rng>(rng: &mut R, den: i64, width: i64, k: usize) -> PointSet {
    let slots = (den * width + 1) as usize;
    let k = k.min(slots / 2).max(1);
    let mut ends: Vec<i64> = sample(rng, slots, 2 * k)
        .into_iter()
        .map(|v| v as i64)
        .collect();
    ends.sort();
    let mut comps = Vec::with_capacity(k);
    for pair in ends.chunks(2) {
        let lo = q(pair[0], den);
        if rng.gen_ratio(1, 4) {
            comps.push(Component::point(lo));
        } else {
            comps.push(Component::interval(
                lo,
                q(pair[1], den),
                rng.gen(),
                rng.gen(),
            ));
        }
    }
    normalize(comps).expect("endpoints are distinct")
}

/// Corpus for the classical removal laws: up to 9 components, denominators up to 60.
pub fn debreu_instance<R: Rng>(rng: &mut R) -> PointSet {
    loop {
        let den = rng.gen_range(2..=60);
        let k = rng.gen_range(2..=9);
        let s = random_set(rng, den, 3, k);
        if !s.bad_gaps().unwrap().is_empty() {
            return s;
        }
    }
}

/// Number of grid points: every endpoint shifted by every integer, inside the hull.
pub fn grid_size(s: &PointSet) -> usize {
    let inf = s.inf().unwrap().clone();
    let sup = s.sup().unwrap().clone();
    let mut pts = std::collections::BTreeSet::new();
    for c in s.components() {
        for e in [&c.lo, &c.hi] {
            for k in (&inf - e).ceil_i64()..=(&sup - e).floor_i64() {
                pts.insert(e + Rational::from_int(k));
            }
        }
    }
    pts.len()
}

/// A set with at least one bad gap whose structure verdict is `want`.
pub fn threshold_instance<R: Rng>(
    rng: &mut R,
    want: bool,
    den: i64,
    width: i64,
    max_grid: usize,
) -> PointSet {
    loop {
        let k = rng.gen_range(2..=4);
        let s = random_set(rng, den, width, k);
        if s.bad_gaps().unwrap().is_empty() || grid_size(&s) > max_grid {
            continue;
        }
        if check_all(&s).unwrap().passed() == want {
            return s;
        }
    }
}

pub fn figure_one() -> PointSet {
    normalize(vec![
        co(q(0, 1), q(1, 2)),
        co(q(1, 1), q(3, 2)),
        Component::point(q(7, 4)),
        Component::interval(q(2, 1), q(5, 2), false, false),
        Component::point(q(21, 8)),
        Component::interval(q(3, 1), q(7, 2), false, true),
    ])
    .unwrap()
}

pub fn figure_two() -> PointSet {
    normalize(vec![
        co(q(0, 1), q(1, 2)),
        Component::closed(q(1, 1), q(7, 5)),
        Component::point(q(7, 4)),
        Component::closed(q(21, 10), q(7, 2)),
    ])
    .unwrap()
}

pub fn figure_three() -> PointSet {
    normalize(vec![
        co(q(-2, 1), q(-3, 2)),
        co(q(-1, 1), q(-1, 2)),
        co(q(0, 1), q(1, 2)),
        Component::closed(q(1, 1), q(3, 2)),
    ])
    .unwrap()
}

pub fn figure_four() -> PointSet {
    normalize(vec![
        co(q(-2, 1), q(-3, 5)),
        Component::interval(q(1, 10), q(1, 2), false, false),
        Component::closed(q(1, 1), q(3, 2)),
    ])
    .unwrap()
}

pub fn figures() -> Vec<(&'static str, PointSet)> {
    vec![
        ("figure1", figure_one()),
        ("figure2", figure_two()),
        ("figure3", figure_three()),
        ("figure4", figure_four()),
    ]
}
