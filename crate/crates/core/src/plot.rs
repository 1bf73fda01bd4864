//! Static SVG bifurcation diagrams.

use std::fmt::Write;

use crate::monodromy::LoopSpec;
use crate::systems::{stratum_image, IntegrableSystem, ScanReport, Window};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const STRATUM_COLORS: [&str; 4] = ["#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Polylines in the `(J, H)` plane.
pub type Curves = Vec<Vec<(f64, f64)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Diagram {
    pub title: String,
    pub window: Window,
    pub critical: Vec<(f64, f64)>,
    /// Stratum images grouped by isotropy order.
    pub strata: Vec<(u64, Curves)>,
    /// Fixed-point images with their weights.
    pub fixed: Vec<((f64, f64), (i64, i64))>,
    pub loop_: Option<LoopSpec>,
}

impl Diagram {
    pub fn new(
        sys: &dyn IntegrableSystem,
        window: Window,
        scan: Option<&ScanReport>,
        loop_: Option<&LoopSpec>,
    ) -> Self {
        Diagram {
            title: sys.id(),
            window,
            critical: scan
                .map(|r| r.points.iter().map(|c| (c.j, c.h)).collect())
                .unwrap_or_default(),
            strata: sys
                .strata()
                .iter()
                .map(|st| (st.order, stratum_image(sys, st, 400)))
                .collect(),
            fixed: sys
                .fixed_point_catalog()
                .iter()
                .map(|p| (p.f_value, (p.weights.0, p.weights.1)))
                .collect(),
            loop_: loop_.cloned(),
        }
    }

    fn to_px(&self, (j, h): (f64, f64)) -> (f64, f64) {
        let w = &self.window;
        let x = MARGIN + (j - w.j_min) / (w.j_max - w.j_min) * (WIDTH - 2.0 * MARGIN);
        let y = HEIGHT - MARGIN - (h - w.h_min) / (w.h_max - w.h_min) * (HEIGHT - 2.0 * MARGIN);
        (x, y)
    }

    fn path(&self, pts: &[(f64, f64)], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.to_px(*p);
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, x, y);
        }
        if closed {
            d.push('Z');
        }
        d.trim_end().to_string()
    }

    pub fn to_svg(&self) -> String {
        let w = &self.window;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
        let _ = writeln!(
            s,
            r##"<defs><clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}"/></clipPath></defs>"##,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        let _ = writeln!(
            s,
            r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#333333"/>"##,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">J</text>"#,
            WIDTH / 2.0,
            HEIGHT - 12.0
        );
        let _ = writeln!(s, r#"<text x="14" y="{}" text-anchor="middle">H</text>"#, HEIGHT / 2.0);
        for (v, anchor, (x, y)) in [
            (w.j_min, "start", (MARGIN, HEIGHT - MARGIN + 16.0)),
            (w.j_max, "end", (WIDTH - MARGIN, HEIGHT - MARGIN + 16.0)),
        ] {
            let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, tick(v));
        }
        for (v, y) in [(w.h_min, HEIGHT - MARGIN), (w.h_max, MARGIN + 10.0)] {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
                MARGIN - 4.0,
                tick(v)
            );
        }

        let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
        let _ = writeln!(s, r##"<g fill="#1f77b4">"##);
        for p in &self.critical {
            let (x, y) = self.to_px(*p);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5"/>"#);
        }
        let _ = writeln!(s, "</g>");
        for (i, (order, curves)) in self.strata.iter().enumerate() {
            let color = STRATUM_COLORS[i % STRATUM_COLORS.len()];
            for c in curves {
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2" stroke-opacity="0.7"><title>Z_{order}</title></path>"#,
                    self.path(c, false)
                );
            }
        }
        if let Some(lp) = &self.loop_ {
            let _ = writeln!(
                s,
                r##"<path d="{}" fill="none" stroke="#000000" stroke-width="1.5" stroke-dasharray="5,3"/>"##,
                self.path(&lp.sample(256), true)
            );
            let (x, y) = self.to_px(lp.point_at(0.0));
            let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#000000"/>"##);
        }
        for (p, (m, n)) in &self.fixed {
            let (x, y) = self.to_px(*p);
            let _ = writeln!(
                s,
                r##"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="#000000"><title>weights ({m}, {n})</title></rect>"##,
                x - 3.5,
                y - 3.5
            );
        }
        let _ = writeln!(s, "</g>");

        let mut y = MARGIN + 14.0;
        let legend_x = WIDTH - MARGIN - 120.0;
        let _ = writeln!(
            s,
            r##"<circle cx="{legend_x}" cy="{}" r="3" fill="#1f77b4"/><text x="{}" y="{y}">critical values</text>"##,
            y - 4.0,
            legend_x + 8.0
        );
        for (i, (order, _)) in self.strata.iter().enumerate() {
            y += 16.0;
            let color = STRATUM_COLORS[i % STRATUM_COLORS.len()];
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/><text x="{}" y="{y}">Z_{order} orbits</text>"#,
                legend_x - 4.0,
                y - 4.0,
                legend_x + 4.0,
                y - 4.0,
                legend_x + 8.0
            );
        }
        let _ = writeln!(s, "</svg>");
        s
    }
}

/// A window showing the interesting part of a catalog system's diagram.
pub fn default_window(sys: &dyn IntegrableSystem) -> Window {
    match sys.id().as_str() {
        "s2xs2" => Window::new(-3.5, 3.5, -1.5, 1.5),
        "qsp" => Window::new(-1.5, 1.5, -2.0, 1.5),
        _ => Window::new(-2.0, 2.0, -1.0, 4.0),
    }
}

fn tick(v: f64) -> String {
    let t = format!("{v:.3}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
