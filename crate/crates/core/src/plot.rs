//! Bare-bones SVG line charts for experiment outputs.

use std::fmt::Write;

pub struct Series<'a> {
    pub label: &'a str,
    pub colour: &'a str,
    pub points: &'a [(f64, f64)],
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Renders the series on shared axes. Empty input yields an empty frame.
pub fn line_chart(title: &str, series: &[Series<'_>]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{PAD}" y="20">{}</text>"#, escape(title));
    let _ = writeln!(
        out,
        r#"<path d="M{PAD} {} H{} M{PAD} {} V{PAD}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD,
        H - PAD
    );
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{}">{x0:.3}</text><text x="{}" y="{}" text-anchor="end">{x1:.3}</text>"#,
        H - PAD + 16.0,
        W - PAD,
        H - PAD + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{y0:.3}</text><text x="{}" y="{}" text-anchor="end">{y1:.3}</text>"#,
        PAD - 4.0,
        H - PAD,
        PAD - 4.0,
        PAD + 4.0
    );
    for (idx, s) in series.iter().enumerate() {
        if !s.points.is_empty() {
            let mut d = String::new();
            for (j, &(x, y)) in s.points.iter().enumerate() {
                let _ = write!(d, "{}{:.2} {:.2}", if j == 0 { "M" } else { " L" }, sx(x), sy(y));
            }
            let _ = writeln!(out, r#"<path d="{d}" stroke="{}" fill="none"/>"#, s.colour);
        }
        let ly = PAD + 16.0 * idx as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" fill="{}" text-anchor="end">{}</text>"#,
            W - PAD,
            s.colour,
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_paths() {
        let pts = [(0.0, 0.0), (0.5, 0.25), (1.0, 0.0)];
        let svg = line_chart("x<t>", &[Series { label: "x", colour: "red", points: &pts }]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("x&lt;t&gt;"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(line_chart("empty", &[]).ends_with("</svg>\n"));
    }
}
