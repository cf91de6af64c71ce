//! SVG rendering: the curve as a polyline and, at a marked sample, the
//! osculating parabola (dashed), the osculating conic (dotted) and the
//! equi-affine frame.

use std::fmt::Write;

use affine_elastica::fullaffine::{osculating_conic, osculating_parabola, parabola_points};
use affine_elastica::CurveSamples;

const MARGIN: f64 = 0.05;
const OVERLAY_POINTS: usize = 201;

fn polyline(out: &mut String, class: &str, pts: &[[f64; 2]]) {
    let _ = write!(out, "  <polyline class=\"{class}\" points=\"");
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.6},{:.6}", p[0], -p[1]);
    }
    out.push_str("\"/>\n");
}

/// `mark` selects the sample that gets the overlays.
pub fn render(c: &CurveSamples, mark: Option<usize>) -> String {
    let pts = c.points();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &pts {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let m = MARGIN * span;
    // y is flipped so that the picture has the usual orientation.
    let (vx, vy, vw, vh) = (x0 - m, -y1 - m, x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<!-- affine-elastica {} -->",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\" width=\"800\" height=\"{:.0}\">",
        800.0 * vh / vw
    );
    out.push_str(
        "  <style>\n    polyline, line { fill: none; stroke-width: 1.2; vector-effect: non-scaling-stroke; }\n    .curve { stroke: #000; }\n    .parabola { stroke: #1f5fa8; stroke-dasharray: 6 4; }\n    .conic { stroke: #a83a1f; stroke-dasharray: 1 3; }\n    .frame { stroke: #2a8a2a; }\n    .mark { fill: #000; }\n  </style>\n",
    );
    polyline(&mut out, "curve", &pts);

    if let Some(i) = mark.filter(|&i| i < c.len()) {
        let k = c.kappa()[i];
        let r = (1.0 / k.abs().sqrt().max(1e-9)).min(0.25 * (c.s[c.len() - 1] - c.s[0]));
        if let Ok((l, b)) = osculating_parabola(c, i) {
            polyline(
                &mut out,
                "parabola",
                &parabola_points(&l, b, r, OVERLAY_POINTS),
            );
        }
        polyline(
            &mut out,
            "conic",
            &osculating_conic(c, i, r, OVERLAY_POINTS),
        );
        let p = c.point(i);
        let tick = 0.08 * span;
        for d in [c.deriv(1)[i], c.deriv(2)[i]] {
            let len = d[0].hypot(d[1]).max(1e-300);
            let _ = writeln!(
                out,
                "  <line class=\"frame\" x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>",
                p[0],
                -p[1],
                p[0] + tick * d[0] / len,
                -(p[1] + tick * d[1] / len)
            );
        }
        let _ = writeln!(
            out,
            "  <circle class=\"mark\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\"/>",
            p[0],
            -p[1],
            0.006 * span
        );
    }
    out.push_str("</svg>\n");
    out
}
