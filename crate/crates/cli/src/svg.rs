//! Minimal static SVG plots: polylines, markers and filled cells.

use std::fmt::Write;

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

pub struct Plot {
    x: (f64, f64),
    y: (f64, f64),
    labels: (String, String),
    body: String,
}

impl Plot {
    pub fn new(x: (f64, f64), y: (f64, f64), x_label: &str, y_label: &str) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Self { x: widen(x), y: widen(y), labels: (x_label.into(), y_label.into()), body: String::new() }
    }

    /// Plot bounds covering every finite point, with a small margin.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a (f64, f64)>, x_label: &str, y_label: &str) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if !x0.is_finite() {
            return Self::new((0.0, 1.0), (0.0, 1.0), x_label, y_label);
        }
        let (mx, my) = (0.05 * (x1 - x0), 0.05 * (y1 - y0));
        Self::new((x0 - mx, x1 + mx), (y0 - my, y1 + my), x_label, y_label)
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x.0) / (self.x.1 - self.x.0) * (SIZE - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        SIZE - PAD - (y - self.y.0) / (self.y.1 - self.y.0) * (SIZE - 2.0 * PAD)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        if coords.len() >= 2 {
            let _ = writeln!(
                self.body,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
                coords.join(" ")
            );
        }
    }

    pub fn marker(&mut self, x: f64, y: f64, color: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, self.px(x), self.py(y));
    }

    pub fn cell(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, color: &str) {
        let (a, b) = (self.px(x0), self.py(y1));
        let (w, h) = (self.px(x1) - a, self.py(y0) - b);
        let _ = writeln!(self.body, r#"<rect x="{a:.2}" y="{b:.2}" width="{w:.2}" height="{h:.2}" fill="{color}"/>"#);
    }

    pub fn finish(self) -> String {
        let inner = SIZE - 2.0 * PAD;
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
        s.push_str(&self.body);
        let _ = writeln!(s, r#"<rect x="{PAD}" y="{PAD}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#);
        let style = r#"font-family="sans-serif" font-size="11""#;
        let base = SIZE - PAD + 14.0;
        let _ = writeln!(s, r#"<text x="{PAD}" y="{base}" {style}>{:.4}</text>"#, self.x.0);
        let _ = writeln!(s, r#"<text x="{}" y="{base}" {style} text-anchor="end">{:.4}</text>"#, SIZE - PAD, self.x.1);
        let _ = writeln!(s, r#"<text x="{}" y="{base}" {style} text-anchor="middle">{}</text>"#, SIZE / 2.0, self.labels.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" {style} text-anchor="end">{:.4}</text>"#, PAD - 4.0, SIZE - PAD, self.y.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" {style} text-anchor="end">{:.4}</text>"#, PAD - 4.0, PAD + 10.0, self.y.1);
        let _ = writeln!(s, r#"<text x="{}" y="{}" {style}>{}</text>"#, 4.0, SIZE / 2.0, self.labels.1);
        s.push_str("</svg>\n");
        s
    }
}
