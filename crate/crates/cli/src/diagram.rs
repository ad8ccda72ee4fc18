//! SVG gap diagrams: one horizontal track per stage.

use std::fmt::Write;

use gapsmith::pointset::{GapKind, PointSet};
use gapsmith::rational::Rational;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
const TRACK: f64 = 60.0;

fn kind_label(k: GapKind) -> &'static str {
    match k {
        GapKind::Open => "open",
        GapKind::Closed => "closed",
        GapKind::ClosedOpen => "closed-open",
        GapKind::OpenClosed => "open-closed",
    }
}

pub fn render(stages: &[(String, PointSet)]) -> String {
    let mut lo: Option<f64> = None;
    let mut hi: Option<f64> = None;
    for (_, s) in stages {
        if let (Ok(a), Ok(b)) = (s.inf(), s.sup()) {
            lo = Some(lo.map_or(a.to_f64(), |v| v.min(a.to_f64())));
            hi = Some(hi.map_or(b.to_f64(), |v| v.max(b.to_f64())));
        }
    }
    let lo = lo.unwrap_or(0.0);
    let mut hi = hi.unwrap_or(1.0);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let x = |r: &Rational| MARGIN + (r.to_f64() - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let height = TRACK * stages.len() as f64 + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" font-family="monospace" font-size="10">"#
    );
    for (i, (label, s)) in stages.iter().enumerate() {
        let y = MARGIN / 2.0 + TRACK * i as f64 + 20.0;
        let _ = writeln!(
            out,
            r#"  <text x="4" y="{:.1}">{}</text>"#,
            y - 12.0,
            escape(label)
        );
        for c in s.components() {
            let (x0, x1) = (x(&c.lo), x(&c.hi));
            if c.is_point() {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{x0:.2}" cy="{y:.1}" r="3" fill="black"/>"#
                );
                continue;
            }
            let _ = writeln!(
                out,
                r#"  <rect x="{x0:.2}" y="{:.1}" width="{:.2}" height="6" fill="steelblue"/>"#,
                y - 3.0,
                x1 - x0
            );
            for (px, closed) in [(x0, c.lo_closed), (x1, c.hi_closed)] {
                let fill = if closed { "black" } else { "white" };
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{px:.2}" cy="{y:.1}" r="3" fill="{fill}" stroke="black"/>"#
                );
            }
        }
        if let Ok(gaps) = s.gaps() {
            for g in gaps {
                let color = if g.is_bad() { "crimson" } else { "gray" };
                let _ = writeln!(
                    out,
                    r#"  <text x="{:.2}" y="{:.1}" fill="{color}" text-anchor="middle">{} {}</text>"#,
                    (x(&g.lo) + x(&g.hi)) / 2.0,
                    y + 16.0,
                    kind_label(g.kind),
                    g.length
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
