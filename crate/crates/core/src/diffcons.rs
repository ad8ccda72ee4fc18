//! Systems of difference constraints `x_a - x_b ≤ w` and `x_a - x_b < w`.
//!
//! Strict constraints are handled symbolically: every weight is a pair
//! `(w, k)` read as `w + k·ε` for an infinitesimal `ε > 0`, compared
//! lexicographically. Shortest paths from a virtual source give the largest
//! solution below a given ceiling; a concrete `ε` is then chosen so that
//! every constraint holds exactly. An infeasible system yields a negative
//! cycle as its witness.

use std::cmp::Ordering;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    /// `x[a] - x[b] ≤ w` (or `<` when strict).
    pub a: usize,
    pub b: usize,
    pub w: Rational,
    pub strict: bool,
    pub label: String,
}

/// `w + k·ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Weight {
    w: Rational,
    k: i64,
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.w.cmp(&other.w).then(self.k.cmp(&other.k))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            w: &self.w + &rhs.w,
            k: self.k + rhs.k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("infeasible: {} constraints form a negative cycle", cycle.len())]
pub struct Infeasible {
    /// The constraints along a cycle whose weights sum below zero.
    pub cycle: Vec<Constraint>,
}

#[derive(Debug, Clone, Default)]
pub struct DiffSystem {
    n: usize,
    cons: Vec<Constraint>,
}

impl DiffSystem {
    pub fn new(n: usize) -> Self {
        DiffSystem {
            n,
            cons: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    fn push(&mut self, a: usize, b: usize, w: Rational, strict: bool, label: &str) {
        assert!(a < self.n && b < self.n, "variable out of range");
        self.cons.push(Constraint {
            a,
            b,
            w,
            strict,
            label: label.to_string(),
        });
    }

    /// `x[a] - x[b] ≤ w`.
    pub fn le(&mut self, a: usize, b: usize, w: Rational, label: &str) {
        self.push(a, b, w, false, label);
    }

    /// `x[a] - x[b] < w`.
    pub fn lt(&mut self, a: usize, b: usize, w: Rational, label: &str) {
        self.push(a, b, w, true, label);
    }

    /// `x[a] - x[b] = w`.
    pub fn eq(&mut self, a: usize, b: usize, w: Rational, label: &str) {
        self.push(a, b, w.clone(), false, label);
        self.push(b, a, -w, false, label);
    }

    /// Largest solution with `x[v] ≤ ceiling[v]`.
    ///
    /// Ceilings cannot cause infeasibility, so the returned cycle (if any)
    /// consists of system constraints only.
    pub fn solve_below(&self, ceiling: &[Rational]) -> Result<Vec<Rational>, Infeasible> {
        assert_eq!(ceiling.len(), self.n);
        // edge b -> a with weight (w, -strict) encodes x_a <= x_b + w
        let mut dist: Vec<Weight> = ceiling
            .iter()
            .map(|c| Weight { w: c.clone(), k: 0 })
            .collect();
        let mut pred: Vec<Option<usize>> = vec![None; self.n];
        let weights: Vec<Weight> = self
            .cons
            .iter()
            .map(|c| Weight {
                w: c.w.clone(),
                k: if c.strict { -1 } else { 0 },
            })
            .collect();
        let mut last_relaxed = None;
        for _round in 0..=self.n {
            last_relaxed = None;
            for (i, c) in self.cons.iter().enumerate() {
                let cand = &dist[c.b] + &weights[i];
                if cand < dist[c.a] {
                    dist[c.a] = cand;
                    pred[c.a] = Some(i);
                    last_relaxed = Some(c.a);
                }
            }
            if last_relaxed.is_none() {
                break;
            }
        }
        if let Some(mut v) = last_relaxed {
            // walk back far enough to land on the cycle
            for _ in 0..self.n {
                v = self.cons[pred[v].expect("relaxed vertex has a predecessor")].b;
            }
            let start = v;
            let mut cycle = Vec::new();
            loop {
                let ci = pred[v].expect("cycle vertex has a predecessor");
                cycle.push(self.cons[ci].clone());
                v = self.cons[ci].b;
                if v == start {
                    break;
                }
            }
            cycle.reverse();
            return Err(Infeasible { cycle });
        }
        let eps = self.pick_epsilon(&dist, &weights);
        Ok(dist
            .into_iter()
            .map(|d| d.w + Rational::from_int(d.k) * &eps)
            .collect())
    }

    /// Feasibility with all-zero ceilings (a solution shifted to be ≤ 0).
    pub fn solve(&self) -> Result<Vec<Rational>, Infeasible> {
        self.solve_below(&vec![Rational::zero(); self.n])
    }

    /// Any `ε` in `(0, 1]` making every lexicographic inequality a real one.
    fn pick_epsilon(&self, dist: &[Weight], weights: &[Weight]) -> Rational {
        let mut eps = Rational::one();
        for (i, c) in self.cons.iter().enumerate() {
            // need (dist_a - dist_b - w) as real value <= 0 (< 0 if strict)
            let slack = &dist[c.b].w + &weights[i].w - &dist[c.a].w;
            let coef = dist[c.a].k - dist[c.b].k - weights[i].k;
            if slack.is_positive() && coef > 0 {
                let bound = slack / Rational::from_int(2 * coef);
                if bound < eps {
                    eps = bound;
                }
            }
        }
        eps
    }

    /// Checks an assignment exactly.
    pub fn violated<'a>(&'a self, x: &[Rational]) -> Option<&'a Constraint> {
        self.cons.iter().find(|c| {
            let d = &x[c.a] - &x[c.b];
            if c.strict {
                d >= c.w
            } else {
                d > c.w
            }
        })
    }
}
