use std::fmt::Write;

use super::SweepRecord;
use crate::hh::TheoremId;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

/// Scatter of tightness ratio against α, one colour per theorem. Only
/// certified rows with a finite ratio are drawn; sandwich rows have no α
/// and are skipped.
pub fn render_svg(records: &[SweepRecord]) -> String {
    let pts: Vec<&SweepRecord> = records
        .iter()
        .filter(|r| r.certified && r.alpha.is_finite() && r.ratio.is_finite())
        .collect();
    let (amin, amax) = extent(pts.iter().map(|r| r.alpha), (0.0, 1.0));
    let (_, rmax) = extent(pts.iter().map(|r| r.ratio), (0.0, 1.0));
    let (rmin, rmax) = (0.0, rmax.max(1.0) * 1.05);

    let sx = |a: f64| MARGIN + (a - amin) / (amax - amin) * (WIDTH - 2.0 * MARGIN);
    let sy = |r: f64| HEIGHT - MARGIN - (r - rmin) / (rmax - rmin) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 600" width="800" height="600">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="800" height="600" fill="white"/>"#);
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let one = sy(1.0);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{one:.2}" x2="{x1}" y2="{one:.2}" stroke="gray" stroke-dasharray="4 4"/>"#
    );
    for (v, pos) in [(amin, x0), (amax, x1)] {
        let _ = writeln!(out, r#"<text x="{pos:.2}" y="{:.2}" font-size="12" text-anchor="middle">{v}</text>"#, y0 + 18.0);
    }
    for (v, pos) in [(rmin, y0), (1.0, one)] {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{pos:.2}" font-size="12" text-anchor="end">{v}</text>"#, x0 - 6.0);
    }
    let _ = writeln!(out, r#"<text x="400" y="590" font-size="14" text-anchor="middle">alpha</text>"#);
    let _ = writeln!(
        out,
        r#"<text x="16" y="300" font-size="14" text-anchor="middle" transform="rotate(-90 16 300)">lhs/rhs</text>"#
    );

    let mut legend_row = 0;
    for (i, id) in TheoremId::ALL.iter().enumerate() {
        let mine: Vec<_> = pts.iter().filter(|r| r.theorem == *id).collect();
        if mine.is_empty() {
            continue;
        }
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<g fill="{colour}" fill-opacity="0.5">"#);
        for r in mine {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(r.alpha), sy(r.ratio));
        }
        let _ = writeln!(out, "</g>");
        let ly = MARGIN + 16.0 * legend_row as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="12" fill="{colour}">{id}</text>"#,
            WIDTH - MARGIN - 50.0
        );
        legend_row += 1;
    }
    out.push_str("</svg>\n");
    out
}

fn extent(vals: impl Iterator<Item = f64>, fallback: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        fallback
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
