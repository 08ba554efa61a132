//! Canonical polygon output: exact CSV and a small deterministic SVG.

use std::fmt::Write;

use crate::exact::ExactPosReal;

/// `dim,H^2` per vertex, no header.
pub fn polygon_csv(poly: &[(usize, ExactPosReal)]) -> String {
    let mut out = String::new();
    for (d, h) in poly {
        writeln!(out, "{d},{h}").expect("string");
    }
    out
}

/// Plot of `deg = -ln(H^2) / 2` against dimension. Coordinates are rendered
/// from doubles; exact squared heights ride along as attributes.
pub fn polygon_svg(title: &str, poly: &[(usize, ExactPosReal)]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 40.0;
    let pts: Vec<(f64, f64)> = poly.iter().map(|(d, h)| (*d as f64, -0.5 * h.ln())).collect();
    let xmax = pts.iter().map(|p| p.0).fold(1.0, f64::max);
    let (mut ymin, mut ymax) = pts.iter().fold((0.0f64, 0.0f64), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    if ymax - ymin < 1e-9 {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let sx = |x: f64| PAD + x / xmax * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - ymin) / (ymax - ymin) * (H - 2.0 * PAD);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
    writeln!(s, r##"  <rect width="{W}" height="{H}" fill="#ffffff"/>"##).unwrap();
    writeln!(
        s,
        r##"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#999999"/>"##,
        sx(0.0),
        sy(0.0),
        sx(xmax),
        sy(0.0)
    )
    .unwrap();
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
    writeln!(s, r##"  <polyline fill="none" stroke="#1f4e9c" stroke-width="2" points="{}"/>"##, path.join(" ")).unwrap();
    for ((d, h), &(x, y)) in poly.iter().zip(&pts) {
        writeln!(
            s,
            r##"  <circle cx="{:.3}" cy="{:.3}" r="4" fill="#1f4e9c" data-dim="{d}" data-sq-height="{}" data-deg="{y:.6}"/>"##,
            sx(x),
            sy(y),
            escape(&h.to_string())
        )
        .unwrap();
        writeln!(s, r#"  <text x="{:.3}" y="{:.3}" font-size="11" font-family="monospace">{d}: {}</text>"#, sx(x) + 6.0, sy(y) - 6.0, escape(&h.to_string())).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn poly() -> Vec<(usize, ExactPosReal)> {
        [(0, 1), (1, 1), (2, 4)].iter().map(|&(d, h)| (d, ExactPosReal::from_rat(&rat(h, 1)).unwrap())).collect()
    }

    #[test]
    fn csv_rows() {
        assert_eq!(polygon_csv(&poly()), "0,1\n1,1\n2,4\n");
    }

    #[test]
    fn svg_is_deterministic() {
        let a = polygon_svg("diag(1,4)", &poly());
        assert_eq!(a, polygon_svg("diag(1,4)", &poly()));
        assert!(a.contains(r#"data-sq-height="4""#));
        assert!(a.contains("data-deg=\"-0.693147\""));
    }
}
