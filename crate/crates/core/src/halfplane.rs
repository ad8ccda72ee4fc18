//! Exact feasibility of small systems of linear inequalities in two unknowns.
//!
//! Each constraint reads `a·x + b·y + c < 0` (strict) or `≤ 0`. Feasibility is
//! decided by Fourier–Motzkin elimination of `y`, and a witness point is
//! recovered by back-substitution, all in exact arithmetic.

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct Lin2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub strict: bool,
}

impl Lin2 {
    pub fn le(a: Rational, b: Rational, c: Rational) -> Self {
        Lin2 {
            a,
            b,
            c,
            strict: false,
        }
    }

    pub fn lt(a: Rational, b: Rational, c: Rational) -> Self {
        Lin2 {
            a,
            b,
            c,
            strict: true,
        }
    }
}

/// A one-sided bound `v > k`, `v ≥ k`, `v < k` or `v ≤ k`.
#[derive(Debug, Clone)]
struct Bound {
    value: Rational,
    strict: bool,
}

/// Tightest interval from a list of lower and upper bounds, or `None` when empty.
fn pick_in(lowers: &[Bound], uppers: &[Bound]) -> Option<Rational> {
    let lo = lowers
        .iter()
        .max_by(|p, q| p.value.cmp(&q.value).then(p.strict.cmp(&q.strict)));
    let hi = uppers
        .iter()
        .min_by(|p, q| p.value.cmp(&q.value).then(q.strict.cmp(&p.strict)));
    match (lo, hi) {
        (None, None) => Some(Rational::zero()),
        (Some(l), None) => Some(&l.value + Rational::one()),
        (None, Some(h)) => Some(&h.value - Rational::one()),
        (Some(l), Some(h)) => {
            if l.value < h.value {
                Some(l.value.midpoint(&h.value))
            } else if l.value == h.value && !l.strict && !h.strict {
                Some(l.value.clone())
            } else {
                None
            }
        }
    }
}

/// Splits constraints on a single unknown `v` (`a·v + c ⋈ 0`) into bounds;
/// returns `false` when a constant constraint is violated.
fn bounds_1d(
    cons: &[(Rational, Rational, bool)],
    lowers: &mut Vec<Bound>,
    uppers: &mut Vec<Bound>,
) -> bool {
    for (a, c, strict) in cons {
        if a.is_zero() {
            let bad = if *strict {
                !c.is_negative()
            } else {
                c.is_positive()
            };
            if bad {
                return false;
            }
        } else {
            let value = -c / a;
            let b = Bound {
                value,
                strict: *strict,
            };
            if a.is_positive() {
                uppers.push(b);
            } else {
                lowers.push(b);
            }
        }
    }
    true
}

/// Returns a point satisfying every constraint, or `None` if none exists.
pub fn find_point(cons: &[Lin2]) -> Option<(Rational, Rational)> {
    let (free, with_y): (Vec<&Lin2>, Vec<&Lin2>) = cons.iter().partition(|c| c.b.is_zero());
    let (ups, downs): (Vec<&Lin2>, Vec<&Lin2>) =
        with_y.into_iter().partition(|c| c.b.is_positive());

    // constraints on x alone: a·x + c ⋈ 0
    let mut x_cons: Vec<(Rational, Rational, bool)> = free
        .iter()
        .map(|c| (c.a.clone(), c.c.clone(), c.strict))
        .collect();
    // y ⋈ -(a x + c)/b for b > 0 (upper); y ⋈' -(a x + c)/b for b < 0 (lower)
    // lower(x) ⋈ upper(x) combined
    for u in &ups {
        for d in &downs {
            // upper: y ≤ (-a_u x - c_u)/b_u ; lower: y ≥ (-a_d x - c_d)/b_d
            // need (-a_d x - c_d)/b_d ⋈ (-a_u x - c_u)/b_u
            // ⇔ (-a_d x - c_d)/b_d + (a_u x + c_u)/b_u ⋈ 0
            let a = &(-&d.a) / &d.b + &u.a / &u.b;
            let c = &(-&d.c) / &d.b + &u.c / &u.b;
            x_cons.push((a, c, u.strict || d.strict));
        }
    }
    let mut xl = Vec::new();
    let mut xu = Vec::new();
    if !bounds_1d(&x_cons, &mut xl, &mut xu) {
        return None;
    }
    let x = pick_in(&xl, &xu)?;

    let mut yl = Vec::new();
    let mut yu = Vec::new();
    let y_cons: Vec<(Rational, Rational, bool)> = ups
        .iter()
        .chain(downs.iter())
        .map(|c| (c.b.clone(), &c.a * &x + &c.c, c.strict))
        .collect();
    if !bounds_1d(&y_cons, &mut yl, &mut yu) {
        return None;
    }
    let y = pick_in(&yl, &yu)?;
    debug_assert!(cons.iter().all(|c| {
        let v = &c.a * &x + &c.b * &y + &c.c;
        if c.strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    }));
    Some((x, y))
}
