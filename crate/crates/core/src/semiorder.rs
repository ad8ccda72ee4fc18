//! Finite semiorders and their Scott–Suppes representations.
//!
//! A relation `≺` on `{0, …, n-1}` is a semiorder when it is irreflexive,
//! asymmetric and satisfies
//!
//! 1. `x ≺ y ∧ z ≺ t ⇒ x ≺ t ∨ z ≺ y`
//! 2. `x ≺ y ∧ y ≺ z ⇒ x ≺ w ∨ w ≺ z`
//!
//! A representation is a map `u` with `x ≺ y ⇔ u(x) + 1 < u(y)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diffcons::DiffSystem;
use crate::rational::Rational;

pub const MAX_ENUMERATION: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemiorderError {
    #[error("relation is not asymmetric at ({i}, {j})")]
    NotAsymmetric { i: usize, j: usize },
    #[error("relation matrix is not {n}×{n}")]
    BadShape { n: usize },
    #[error("not a semiorder: {0:?}")]
    NotASemiorder(AxiomVerdict),
    #[error("representation has {got} values for {n} elements")]
    WrongLength { n: usize, got: usize },
    #[error("synthesis failed down to slack {0}")]
    SynthesisFailed(Rational),
    #[error("enumeration limited to n ≤ {MAX_ENUMERATION}, got {0}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum AxiomVerdict {
    Valid,
    Violates1 {
        x: usize,
        y: usize,
        z: usize,
        t: usize,
    },
    Violates2 {
        x: usize,
        y: usize,
        z: usize,
        w: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Semiorder {
    pub n: usize,
    pub strict: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceOrder {
    /// `weak[x][y]` is `x ≾⁰ y`.
    pub weak: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsRep {
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum SsVerdict {
    Represents,
    Fails { x: usize, y: usize },
}

/// An irreducible block together with the original element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub elements: Vec<usize>,
    pub relation: Semiorder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub n: usize,
    pub up_to_iso: bool,
    pub count: usize,
    pub instances: Vec<Semiorder>,
}

fn check_shape(strict: &[Vec<bool>]) -> Result<(), SemiorderError> {
    let n = strict.len();
    if strict.iter().any(|row| row.len() != n) {
        return Err(SemiorderError::BadShape { n });
    }
    for i in 0..n {
        for j in 0..n {
            if strict[i][j] && strict[j][i] {
                return Err(SemiorderError::NotAsymmetric { i, j });
            }
        }
    }
    Ok(())
}

/// Checks conditions (1) and (2), returning the first counterexample found.
pub fn check_axioms(strict: &[Vec<bool>]) -> Result<AxiomVerdict, SemiorderError> {
    check_shape(strict)?;
    let n = strict.len();
    let r = |a: usize, b: usize| strict[a][b];
    for x in 0..n {
        for y in 0..n {
            if !r(x, y) {
                continue;
            }
            for z in 0..n {
                for t in 0..n {
                    if r(z, t) && !r(x, t) && !r(z, y) {
                        return Ok(AxiomVerdict::Violates1 { x, y, z, t });
                    }
                }
                if r(y, z) {
                    for w in 0..n {
                        if !r(x, w) && !r(w, z) {
                            return Ok(AxiomVerdict::Violates2 { x, y, z, w });
                        }
                    }
                }
            }
        }
    }
    Ok(AxiomVerdict::Valid)
}

impl Semiorder {
    /// Validates shape, asymmetry and both axioms.
    pub fn new(strict: Vec<Vec<bool>>) -> Result<Self, SemiorderError> {
        match check_axioms(&strict)? {
            AxiomVerdict::Valid => Ok(Semiorder {
                n: strict.len(),
                strict,
            }),
            v => Err(SemiorderError::NotASemiorder(v)),
        }
    }

    /// From a list of strict pairs `(x, y)` meaning `x ≺ y`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, SemiorderError> {
        let mut strict = vec![vec![false; n]; n];
        for &(x, y) in pairs {
            strict[x][y] = true;
        }
        Semiorder::new(strict)
    }

    pub fn antichain(n: usize) -> Self {
        Semiorder {
            n,
            strict: vec![vec![false; n]; n],
        }
    }

    pub fn prec(&self, x: usize, y: usize) -> bool {
        self.strict[x][y]
    }

    /// Re-validates a value that came from deserialization.
    pub fn validate(&self) -> Result<(), SemiorderError> {
        if self.strict.len() != self.n {
            return Err(SemiorderError::BadShape { n: self.n });
        }
        match check_axioms(&self.strict)? {
            AxiomVerdict::Valid => Ok(()),
            v => Err(SemiorderError::NotASemiorder(v)),
        }
    }

    /// Restriction to `elements`, in the given order.
    pub fn restrict(&self, elements: &[usize]) -> Semiorder {
        Semiorder {
            n: elements.len(),
            strict: elements
                .iter()
                .map(|&a| elements.iter().map(|&b| self.strict[a][b]).collect())
                .collect(),
        }
    }

    /// `perm[i]` is the new label of old element `i`.
    pub fn relabel(&self, perm: &[usize]) -> Semiorder {
        let mut strict = vec![vec![false; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                strict[perm[i]][perm[j]] = self.strict[i][j];
            }
        }
        Semiorder { n: self.n, strict }
    }
}

/// `x ≾⁰ y` iff every predecessor of `x` precedes `y` and every successor of
/// `y` succeeds `x`.
pub fn trace(r: &Semiorder) -> TraceOrder {
    let n = r.n;
    let mut weak = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            weak[x][y] =
                (0..n).all(|z| (!r.prec(z, x) || r.prec(z, y)) && (!r.prec(y, z) || r.prec(x, z)));
        }
    }
    TraceOrder { weak }
}

impl TraceOrder {
    pub fn strictly_below(&self, x: usize, y: usize) -> bool {
        self.weak[x][y] && !self.weak[y][x]
    }

    pub fn indifferent(&self, x: usize, y: usize) -> bool {
        self.weak[x][y] && self.weak[y][x]
    }

    /// Elements sorted by the trace, ties by index.
    pub fn sorted(&self) -> Vec<usize> {
        let n = self.weak.len();
        let mut v: Vec<usize> = (0..n).collect();
        // rank = number of elements strictly below
        let rank: Vec<usize> = (0..n)
            .map(|x| (0..n).filter(|&z| self.strictly_below(z, x)).count())
            .collect();
        v.sort_by_key(|&x| (rank[x], x));
        v
    }
}

pub fn check_ss(r: &Semiorder, u: &SsRep) -> Result<SsVerdict, SemiorderError> {
    if u.values.len() != r.n {
        return Err(SemiorderError::WrongLength {
            n: r.n,
            got: u.values.len(),
        });
    }
    let one = Rational::one();
    for x in 0..r.n {
        for y in 0..r.n {
            if r.prec(x, y) != (&u.values[x] + &one < u.values[y]) {
                return Ok(SsVerdict::Fails { x, y });
            }
        }
    }
    Ok(SsVerdict::Represents)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A trace-monotone representation, constant on indifference classes of the
/// trace and normalized to minimum zero.
pub fn synthesize_ss(r: &Semiorder) -> Result<SsRep, SemiorderError> {
    r.validate()?;
    let n = r.n;
    if n == 0 {
        return Ok(SsRep { values: Vec::new() });
    }
    let tr = trace(r);
    let one = Rational::one();
    let mut slack = Rational::new(1, 2 * n as i64);
    let floor = Rational::new(1, 2 * n as i64 * factorial(n) as i64);
    loop {
        let mut sys = DiffSystem::new(n);
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                if r.prec(x, y) {
                    // u(x) - u(y) <= -(1 + s)
                    sys.le(x, y, -(&one + &slack), "prec");
                } else {
                    sys.le(y, x, one.clone(), "not prec");
                }
                if tr.weak[x][y] {
                    sys.le(x, y, Rational::zero(), "trace");
                }
            }
        }
        if let Ok(vals) = sys.solve() {
            let min = vals.iter().min().cloned().unwrap_or_default();
            let values: Vec<Rational> = vals.into_iter().map(|v| v - &min).collect();
            let rep = SsRep { values };
            debug_assert_eq!(check_ss(r, &rep), Ok(SsVerdict::Represents));
            return Ok(rep);
        }
        slack = slack / Rational::from_int(2);
        if slack < floor {
            return Err(SemiorderError::SynthesisFailed(slack));
        }
    }
}

/// Splits at every cut `X₁ ∪ X₂` with `x₁ ≺ x₂` across, leftmost first.
pub fn irreducible_components(r: &Semiorder) -> Vec<Block> {
    let order = trace(r).sorted();
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..r.n {
        let cut = order[..k]
            .iter()
            .all(|&a| order[k..].iter().all(|&b| r.prec(a, b)));
        if cut {
            let elements = order[start..k].to_vec();
            blocks.push(Block {
                relation: r.restrict(&elements),
                elements,
            });
            start = k;
        }
    }
    if r.n > 0 {
        let elements = order[start..].to_vec();
        blocks.push(Block {
            relation: r.restrict(&elements),
            elements,
        });
    }
    blocks
}

/// The ordinal sum: each later part entirely above each earlier part.
pub fn glued_relation(parts: &[(Semiorder, SsRep)]) -> Semiorder {
    let n: usize = parts.iter().map(|(p, _)| p.n).sum();
    let mut strict = vec![vec![false; n]; n];
    let mut off = 0;
    for (p, _) in parts {
        for i in 0..p.n {
            for j in 0..p.n {
                strict[off + i][off + j] = p.strict[i][j];
            }
            for later in off + p.n..n {
                strict[off + i][later] = true;
            }
        }
        off += p.n;
    }
    Semiorder { n, strict }
}

/// Concatenates representations, shifting each later part by
/// `m = sup(u so far) - inf(u_next) + 2`.
pub fn glue(parts: &[(Semiorder, SsRep)]) -> SsRep {
    let mut values: Vec<Rational> = Vec::new();
    for (_, u) in parts {
        if u.values.is_empty() {
            continue;
        }
        if values.is_empty() {
            values.extend(u.values.iter().cloned());
            continue;
        }
        let sup = values.iter().max().expect("nonempty");
        let inf = u.values.iter().min().expect("nonempty");
        let m = sup - inf + Rational::from_int(2);
        values.extend(u.values.iter().map(|v| v + &m));
    }
    SsRep { values }
}

/// Relabels by trace order; indifferent elements are twins, so the result does
/// not depend on how ties are broken.
pub fn canonical_form(r: &Semiorder) -> Semiorder {
    let order = trace(r).sorted();
    let mut perm = vec![0; r.n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    r.relabel(&perm)
}

/// Lexicographically least relabeling over all permutations.
pub fn brute_canonical_form(r: &Semiorder) -> Semiorder {
    let mut perm: Vec<usize> = (0..r.n).collect();
    let mut best = r.relabel(&perm);
    while next_permutation(&mut perm) {
        let c = r.relabel(&perm);
        if c < best {
            best = c;
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Axioms restricted to tuples that mention `v`; the rest is known to hold.
fn valid_with_new(strict: &[Vec<bool>], v: usize) -> bool {
    let n = v + 1;
    let r = |a: usize, b: usize| strict[a][b];
    for x in 0..n {
        for y in 0..n {
            if !r(x, y) {
                continue;
            }
            for z in 0..n {
                for t in 0..n {
                    if (x == v || y == v || z == v || t == v) && r(z, t) && !r(x, t) && !r(z, y) {
                        return false;
                    }
                }
                if r(y, z) {
                    for w in 0..n {
                        if (x == v || y == v || z == v || w == v) && !r(x, w) && !r(w, z) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every semiorder on `n` labeled elements, or one per isomorphism class.
pub fn enumerate_semiorders(n: usize, up_to_iso: bool) -> Result<Enumeration, SemiorderError> {
    if n > MAX_ENUMERATION {
        return Err(SemiorderError::TooLarge(n));
    }
    // grow element by element; restrictions of semiorders are semiorders
    let mut layer: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
    for v in 0..n {
        let mut next = Vec::new();
        for base in &layer {
            for code in 0..3usize.pow(v as u32) {
                let mut m: Vec<Vec<bool>> = base
                    .iter()
                    .map(|row| {
                        let mut row = row.clone();
                        row.push(false);
                        row
                    })
                    .collect();
                m.push(vec![false; v + 1]);
                let mut c = code;
                for old in 0..v {
                    match c % 3 {
                        1 => m[old][v] = true,
                        2 => m[v][old] = true,
                        _ => {}
                    }
                    c /= 3;
                }
                if valid_with_new(&m, v) {
                    next.push(m);
                }
            }
        }
        layer = next;
    }
    let all = layer.into_iter().map(|strict| Semiorder { n, strict });
    let instances: Vec<Semiorder> = if up_to_iso {
        all.map(|r| canonical_form(&r))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    } else {
        all.collect()
    };
    Ok(Enumeration {
        n,
        up_to_iso,
        count: instances.len(),
        instances,
    })
}
