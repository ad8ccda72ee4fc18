//! Per-gap plans.
//!
//! The plan is first built from the expansion/contraction families, in
//! coordinates where the gap is `[r, 1)` with `r = 1 − δ` (open-closed gaps
//! are mirrored first). Unit cells `[k, k+1]` inside the unbroken part of both
//! chains get
//!
//! * `λ₁`: `t ↦ k + (t − k)/r` on `[k, k + r]`,
//! * `λ₃`: the constant `k + 1` on `[k + r, k + 1]`,
//!
//! which fuses `[r, 1)` and commutes with the unit shift. From the first
//! terminal step on, cells get `λ₂` (the same affine formula without the
//! collapse) and the window `[k + r − γ_l, k + 1 + γ_r]` is contracted onto
//! `[k + (r − γ_l)/r, k + 1 + γ_r/r]`, through the lone point of the window
//! if there is one (`c₁`, `c₂`).
//!
//! The result is certified. If a certificate fails, the plan falls back to the
//! exact grid solution and records why.

use serde::{Deserialize, Serialize};

use crate::grid::ThresholdGrid;
use crate::plmap::{AffinePiece, Certificate, PlMap};
use crate::pointset::{Gap, GapKind, PointSet, WindowContent};
use crate::rational::Rational;
use crate::structure::{analyze_gap, ChainEnd, GapAnalysis, GapContext};

use super::ThresholdError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceTag {
    Lambda1,
    Lambda2,
    Lambda3,
    ContractionC,
    ContractionC1,
    ContractionC2,
    Identity,
    /// A piece of the exact grid solution.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanPiece {
    pub tag: PieceTag,
    pub piece: AffinePiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    ClosedOpen,
    OpenClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Lambda,
    Exact,
    Identity,
}

/// γ extensions of one contracted window, in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowGammas {
    pub cell: i64,
    pub gamma_l: Rational,
    pub gamma_r: Rational,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub singleton: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdPlan {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap: Option<Gap>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub orientation: Option<Orientation>,
    /// First terminal step on the left chain, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    /// First terminal step on the right chain, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m_prime: Option<u32>,
    pub gammas: Vec<WindowGammas>,
    pub pieces: Vec<PlanPiece>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure: Option<GapAnalysis>,
    pub construction: Construction,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fallback_reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl ThresholdPlan {
    /// The identity on the hull of `s`.
    pub fn identity(s: &PointSet) -> ThresholdPlan {
        let pieces = PlMap::identity(s.clone())
            .pieces
            .into_iter()
            .map(|piece| PlanPiece {
                tag: PieceTag::Identity,
                piece,
            })
            .collect();
        ThresholdPlan {
            gap: None,
            orientation: None,
            m: None,
            m_prime: None,
            gammas: Vec::new(),
            pieces,
            structure: None,
            construction: Construction::Identity,
            fallback_reason: None,
            notes: Vec::new(),
        }
    }

    /// The map the plan describes, as stored (no repair of corrupted pieces).
    pub fn to_map(&self, s: &PointSet) -> Result<PlMap, ThresholdError> {
        let mut pieces: Vec<AffinePiece> = self.pieces.iter().map(|p| p.piece.clone()).collect();
        for (i, p) in pieces.iter_mut().enumerate() {
            p.lo_closed = i == 0;
            p.hi_closed = true;
        }
        Ok(PlMap::new(pieces, s.clone())?)
    }
}

/// First terminal step of a chain, or the crowded step where it stopped.
fn terminal_step(ctx: &GapContext) -> Option<u32> {
    if let Some(st) = ctx.steps.iter().find(|st| st.case.is_terminal()) {
        return Some(st.n);
    }
    match ctx.end {
        ChainEnd::Crowded { n } => Some(n),
        _ => None,
    }
}

struct Segment {
    t0: Rational,
    t1: Rational,
    v0: Rational,
    v1: Rational,
    tag: PieceTag,
}

/// Segments of the λ/c construction for the normalized set `s` with gap
/// `[r, 1)`. `Err` carries the reason the construction does not apply.
fn lambda_segments(
    s: &PointSet,
    r: &Rational,
    m: Option<u32>,
    m_prime: Option<u32>,
    gammas: &mut Vec<WindowGammas>,
) -> Result<Vec<Segment>, String> {
    let one = Rational::one();
    let third = r / Rational::from_int(3);
    let inf = s.inf().map_err(|e| e.to_string())?.clone();
    let sup = s.sup().map_err(|e| e.to_string())?.clone();
    let k_min = inf.floor_i64();
    let k_max = (sup.ceil_i64() - 1).max(k_min);
    let is_b = |k: i64| -> bool {
        if k > 0 {
            m_prime.map_or(false, |mp| k >= mp as i64)
        } else if k < 0 {
            m.map_or(false, |ml| -k >= ml as i64)
        } else {
            false
        }
    };
    let lambda = |k: &Rational, t: &Rational| k + (t - k) / r;
    let mut segs: Vec<Segment> = Vec::new();
    let mut carry = Rational::zero();
    for k in k_min..=k_max {
        let kq = Rational::from_int(k);
        if !is_b(k) {
            let mid = &kq + r;
            let end = &kq + &one;
            segs.push(Segment {
                t0: kq.clone(),
                t1: mid.clone(),
                v0: kq.clone(),
                v1: end.clone(),
                tag: PieceTag::Lambda1,
            });
            segs.push(Segment {
                t0: mid,
                t1: end.clone(),
                v0: end.clone(),
                v1: end,
                tag: PieceTag::Lambda3,
            });
            carry = Rational::zero();
            continue;
        }
        let start = &kq + &carry;
        let edge = &kq + r;
        let gl = if s.contains(&edge) {
            Rational::zero()
        } else {
            s.sup_below(&edge)
                .map(|v| Rational::min_of(&(&edge - v), &third))
                .unwrap_or_else(|| third.clone())
        };
        let next = &kq + &one;
        let gr = if k < k_max && is_b(k + 1) {
            if s.contains(&next) {
                Rational::zero()
            } else {
                s.inf_above(&next)
                    .map(|v| Rational::min_of(&(v - &next), &third))
                    .unwrap_or_else(|| third.clone())
            }
        } else {
            Rational::zero()
        };
        let a = &edge - &gl;
        let b = &next + &gr;
        let content = s.window(&a, &b, gl.is_zero(), gr.is_zero());
        let sigma = match content {
            WindowContent::Empty => None,
            WindowContent::Single(x) => Some(x),
            WindowContent::Many => return Err(format!("window at cell {k} holds several points")),
        };
        gammas.push(WindowGammas {
            cell: k,
            gamma_l: gl.clone(),
            gamma_r: gr.clone(),
            singleton: sigma.clone(),
        });
        if start < a {
            segs.push(Segment {
                v0: lambda(&kq, &start),
                v1: lambda(&kq, &a),
                t0: start,
                t1: a.clone(),
                tag: PieceTag::Lambda2,
            });
        }
        let va = lambda(&kq, &a);
        let vb = &next + &gr / r;
        match sigma {
            Some(x) => {
                if a < x {
                    segs.push(Segment {
                        t0: a.clone(),
                        t1: x.clone(),
                        v0: va,
                        v1: next.clone(),
                        tag: PieceTag::ContractionC1,
                    });
                }
                if x < b {
                    segs.push(Segment {
                        t0: x,
                        t1: b,
                        v0: next,
                        v1: vb,
                        tag: PieceTag::ContractionC2,
                    });
                }
            }
            None => segs.push(Segment {
                t0: a,
                t1: b,
                v0: va,
                v1: vb,
                tag: PieceTag::ContractionC,
            }),
        }
        carry = gr;
    }
    Ok(segs)
}

/// Pieces in original coordinates, given `x ↦ sign·x + shift` into the
/// normalized frame.
fn to_original(segs: Vec<Segment>, mirrored: bool, shift: &Rational) -> Vec<PlanPiece> {
    let back = |t: &Rational| if mirrored { shift - t } else { t - shift };
    let mut out: Vec<PlanPiece> = segs
        .into_iter()
        .map(|sg| {
            let (x0, y0, x1, y1) = if mirrored {
                (back(&sg.t1), back(&sg.v1), back(&sg.t0), back(&sg.v0))
            } else {
                (back(&sg.t0), back(&sg.v0), back(&sg.t1), back(&sg.v1))
            };
            PlanPiece {
                tag: sg.tag,
                piece: AffinePiece::through(&x0, &y0, &x1, &y1),
            }
        })
        .collect();
    if mirrored {
        out.reverse();
    }
    out
}

/// Certifies `map` on `s`: strict increase, threshold law, and `g` fused.
pub fn certify(map: &PlMap, s: &PointSet, g: Option<&Gap>) -> Result<(), ThresholdError> {
    if let Certificate::Fail { x, y } = map.is_strictly_increasing_on(s)? {
        return Err(ThresholdError::CertificateFailed {
            certificate: "strictly_increasing".into(),
            x,
            y,
        });
    }
    if let Certificate::Fail { x, y } = map.threshold_equiv(s)? {
        return Err(ThresholdError::CertificateFailed {
            certificate: "threshold".into(),
            x,
            y,
        });
    }
    if let Some(g) = g {
        if map.apply(&g.lo)? != map.apply(&g.hi)? {
            return Err(ThresholdError::CertificateFailed {
                certificate: "gap_closed".into(),
                x: g.lo.clone(),
                y: g.hi.clone(),
            });
        }
    }
    Ok(())
}

fn tag_grid_pieces(map: &PlMap) -> Vec<PlanPiece> {
    map.pieces
        .iter()
        .map(|p| PlanPiece {
            tag: if p.slope == Rational::one() && p.intercept.is_zero() {
                PieceTag::Identity
            } else {
                PieceTag::Grid
            },
            piece: p.clone(),
        })
        .collect()
}

/// A certified plan removing `g` from `s`.
pub fn plan_gap(s: &PointSet, g: &Gap) -> Result<ThresholdPlan, ThresholdError> {
    if !g.is_bad() {
        return Err(ThresholdError::NotBad(g.clone()));
    }
    if g.length >= Rational::one() {
        return Err(ThresholdError::GapTooLong(g.clone()));
    }
    let analysis = analyze_gap(s, g)?;
    if let Some(f) = &analysis.failure {
        return Err(ThresholdError::StructureViolated(f.reason));
    }
    let mirrored = g.kind == GapKind::OpenClosed;
    // normalized frame: t = sign·x + shift with the member end at 1
    let (shift, orientation) = if mirrored {
        (Rational::one() + &g.lo, Orientation::OpenClosed)
    } else {
        (Rational::one() - &g.hi, Orientation::ClosedOpen)
    };
    let frame = if mirrored {
        s.map_affine(&-Rational::one(), &shift)
    } else {
        s.translate(&shift)
    };
    let r = Rational::one() - &g.length;
    let local_gap = Gap::new(r.clone(), Rational::one(), GapKind::ClosedOpen);
    let local = analyze_gap(&frame, &local_gap)?;
    let m_prime = local.right.as_ref().and_then(terminal_step);
    let m = local.left.as_ref().and_then(terminal_step);
    let mut notes = Vec::new();
    if local.right.as_ref().map_or(false, |c| {
        c.steps.iter().any(|st| st.continuation.is_some())
    }) {
        notes.push("continuation window read as the next active gap".to_string());
    }
    let mut gammas = Vec::new();
    let attempt = lambda_segments(&frame, &r, m, m_prime, &mut gammas).and_then(|segs| {
        let pieces = to_original(segs, mirrored, &shift);
        let plan = ThresholdPlan {
            gap: Some(g.clone()),
            orientation: Some(orientation),
            m,
            m_prime,
            gammas: gammas.clone(),
            pieces,
            structure: Some(analysis.clone()),
            construction: Construction::Lambda,
            fallback_reason: None,
            notes: notes.clone(),
        };
        let map = plan.to_map(s).map_err(|e| e.to_string())?;
        certify(&map, s, Some(g)).map_err(|e| e.to_string())?;
        Ok(plan)
    });
    match attempt {
        Ok(plan) => Ok(plan),
        Err(reason) => {
            let grid = ThresholdGrid::build(s, &[(g.lo.clone(), g.hi.clone())])?;
            let map = grid.solve()?;
            certify(&map, s, Some(g))?;
            Ok(ThresholdPlan {
                gap: Some(g.clone()),
                orientation: Some(orientation),
                m,
                m_prime,
                gammas,
                pieces: tag_grid_pieces(&map),
                structure: Some(analysis),
                construction: Construction::Exact,
                fallback_reason: Some(reason),
                notes,
            })
        }
    }
}

/// Applies a plan, re-checking every certificate.
pub fn apply_plan(s: &PointSet, plan: &ThresholdPlan) -> Result<(PlMap, PointSet), ThresholdError> {
    let mut map = plan.to_map(s)?;
    certify(&map, s, plan.gap.as_ref())?;
    map.merge_pieces();
    let img = map.image(s)?;
    Ok((map, img))
}
