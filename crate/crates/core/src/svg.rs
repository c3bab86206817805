//! Static 800×600 SVG line charts with reference markers.

use std::fmt::Write as _;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// A black reference line or point.
#[derive(Debug, Clone)]
pub enum Marker {
    HLine { y: f64, label: String },
    VLine { x: f64, label: String },
    Point { x: f64, y: f64, label: String },
}

#[derive(Debug, Clone, Default)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Roughly five round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl LineChart {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                xs.push(x);
                ys.push(y);
            }
        }
        for m in &self.markers {
            match m {
                Marker::HLine { y, .. } => ys.push(*y),
                Marker::VLine { x, .. } => xs.push(*x),
                Marker::Point { x, y, .. } => {
                    xs.push(*x);
                    ys.push(*y);
                }
            }
        }
        let fin = |v: &[f64]| {
            let it = v.iter().copied().filter(|v| v.is_finite());
            let lo = it.clone().fold(f64::INFINITY, f64::min);
            let hi = it.fold(f64::NEG_INFINITY, f64::max);
            match (lo.is_finite(), hi > lo) {
                (false, _) => (0.0, 1.0),
                (true, true) => (lo, hi),
                (true, false) => (lo - 0.5 * lo.abs().max(1.0), hi + 0.5 * hi.abs().max(1.0)),
            }
        };
        let (x0, x1) = fin(&xs);
        let (y0, y1) = fin(&ys);
        let pad = 0.05 * (y1 - y0);
        (x0, x1, y0 - pad, y1 + pad)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{b2:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{}</text>"#,
                fmt_tick(t),
                b = MARGIN_TOP + ph,
                b2 = MARGIN_TOP + ph + 5.0,
                ty = MARGIN_TOP + ph + 20.0
            );
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                s,
                r#"<line x1="{l:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{}</text>"#,
                fmt_tick(t),
                l = MARGIN_LEFT - 5.0,
                tx = MARGIN_LEFT - 8.0,
                ty = y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">{}</text>"#,
            escape(&self.y_label),
            y = MARGIN_TOP + ph / 2.0
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                pts.join(" "),
                escape(&series.name)
            );
        }
        for m in &self.markers {
            match m {
                Marker::HLine { y, label } => {
                    let _ = writeln!(
                        s,
                        r#"<line x1="{MARGIN_LEFT}" y1="{v:.2}" x2="{r:.2}" y2="{v:.2}" stroke="black" stroke-dasharray="6 4"><title>{}</title></line>"#,
                        escape(label),
                        v = sy(*y),
                        r = MARGIN_LEFT + pw
                    );
                }
                Marker::VLine { x, label } => {
                    let _ = writeln!(
                        s,
                        r#"<line x1="{v:.2}" y1="{MARGIN_TOP}" x2="{v:.2}" y2="{b:.2}" stroke="black" stroke-dasharray="2 3"><title>{}</title></line>"#,
                        escape(label),
                        v = sx(*x),
                        b = MARGIN_TOP + ph
                    );
                }
                Marker::Point { x, y, label } => {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"><title>{}</title></circle>"#,
                        sx(*x),
                        sy(*y),
                        escape(label)
                    );
                }
            }
        }
        if self.series.len() > 1 && self.series.len() <= 12 {
            for (i, series) in self.series.iter().enumerate() {
                let y = MARGIN_TOP + 15.0 + 15.0 * i as f64;
                let x = MARGIN_LEFT + pw - 110.0;
                let _ = writeln!(
                    s,
                    r#"<line x1="{x}" y1="{y}" x2="{x2}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{tx}" y="{ty}">{}</text>"#,
                    PALETTE[i % PALETTE.len()],
                    escape(&series.name),
                    x2 = x + 20.0,
                    tx = x + 25.0,
                    ty = y + 4.0
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}
