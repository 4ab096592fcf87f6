//! Minimal static SVG charts: stacked panels of lines, bands, markers and boxplots.

use std::fmt::Write as _;

pub const BLUE: &str = "#1f77b4";
pub const ORANGE: &str = "#ff7f0e";
pub const GREEN: &str = "#2ca02c";
pub const RED: &str = "#d62728";
pub const GREY: &str = "#7f7f7f";

/// Qualitative palette for many series (e.g. one line per year).
pub const PALETTE: [&str; 10] = [
    BLUE, ORANGE, GREEN, RED, "#9467bd", "#8c564b", "#e377c2", GREY, "#bcbd22", "#17becf",
];

#[derive(Debug, Clone)]
pub enum Layer {
    /// Polyline; non-finite y values break the line.
    Line {
        label: String,
        points: Vec<(f64, f64)>,
        color: &'static str,
        dashed: bool,
    },
    /// Filled region between two curves sharing x values.
    Band {
        label: String,
        x: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        color: &'static str,
    },
    Markers {
        label: String,
        points: Vec<(f64, f64)>,
        color: &'static str,
    },
    /// Boxplots as `(x, [min, q1, median, q3, max])`.
    Boxes {
        items: Vec<(f64, [f64; 5])>,
        color: &'static str,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub layers: Vec<Layer>,
    /// Explicit x tick positions and labels; numeric ticks when empty.
    pub x_ticks: Vec<(f64, String)>,
}

impl Panel {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn labels(mut self, x: impl Into<String>, y: impl Into<String>) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    pub fn layer(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    pub fn ticks(mut self, ticks: Vec<(f64, String)>) -> Self {
        self.x_ticks = ticks;
        self
    }

    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for layer in &self.layers {
            match layer {
                Layer::Line { points, .. } | Layer::Markers { points, .. } => {
                    // masked points still claim their x position
                    for &(x, y) in points.iter().filter(|(x, _)| x.is_finite()) {
                        xs.push(x);
                        if y.is_finite() {
                            ys.push(y);
                        }
                    }
                }
                Layer::Band { x, lower, upper, .. } => {
                    xs.extend(x.iter().copied());
                    ys.extend(lower.iter().chain(upper).copied().filter(|v| v.is_finite()));
                }
                Layer::Boxes { items, .. } => {
                    for (x, s) in items {
                        xs.push(*x - 0.5);
                        xs.push(*x + 0.5);
                        ys.extend(s.iter().copied());
                    }
                }
            }
        }
        if xs.is_empty() || ys.is_empty() {
            return None;
        }
        let fold = |v: &[f64]| {
            v.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
        };
        let (x0, x1) = fold(&xs);
        let (y0, y1) = fold(&ys);
        Some((x0, x1, y0, y1))
    }
}

/// Roughly `n` round tick values covering `[lo, hi]`.
pub fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Vec::new();
    }
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    let raw = span / n.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= n as f64)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).floor() as i64;
    let last = ((hi / step).ceil() as i64).max(first + 1);
    (first..=last)
        .map(|i| {
            let t = i as f64 * step;
            if t.abs() < step * 1e-9 {
                0.0
            } else {
                t
            }
        })
        .collect()
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;

/// Renders panels stacked vertically into one SVG document.
pub fn render(title: &str, panels: &[Panel], width: f64, panel_height: f64) -> String {
    let title_h = if title.is_empty() { 0.0 } else { 30.0 };
    let height = title_h + panel_height * panels.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !title.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="15">{}</text>"#,
            width / 2.0,
            escape(title)
        );
    }
    for (i, panel) in panels.iter().enumerate() {
        draw_panel(&mut s, panel, 0.0, title_h + i as f64 * panel_height, width, panel_height);
    }
    s.push_str("</svg>\n");
    s
}

fn draw_panel(s: &mut String, panel: &Panel, x0: f64, y0: f64, w: f64, h: f64) {
    let (left, top) = (x0 + MARGIN_LEFT, y0 + MARGIN_TOP);
    let (pw, ph) = (w - MARGIN_LEFT - MARGIN_RIGHT, h - MARGIN_TOP - MARGIN_BOTTOM);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
        left + pw / 2.0,
        y0 + 22.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left:.1}" y="{top:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#333"/>"##
    );
    let Some((bx0, bx1, by0, by1)) = panel.bounds() else {
        return;
    };
    let yt = nice_ticks(by0, by1, 5);
    let (ylo, yhi) = match (yt.first(), yt.last()) {
        (Some(a), Some(b)) if b > a => (*a, *b),
        _ => (by0 - 1.0, by1 + 1.0),
    };
    let (xlo, xhi) = if bx1 > bx0 { (bx0, bx1) } else { (bx0 - 1.0, bx1 + 1.0) };
    let sx = |x: f64| left + (x - xlo) / (xhi - xlo) * pw;
    let sy = |y: f64| top + ph - (y - ylo) / (yhi - ylo) * ph;

    for t in &yt {
        let y = sy(*t);
        let _ = writeln!(
            s,
            r##"<line x1="{left:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0,
            tick_label(*t)
        );
    }
    let xt: Vec<(f64, String)> = if panel.x_ticks.is_empty() {
        nice_ticks(xlo, xhi, 8)
            .into_iter()
            .filter(|v| (xlo..=xhi).contains(v))
            .map(|v| (v, tick_label(v)))
            .collect()
    } else {
        let eps = (xhi - xlo) * 1e-9;
        panel
            .x_ticks
            .iter()
            .filter(|(v, _)| (xlo - eps..=xhi + eps).contains(v))
            .cloned()
            .collect()
    };
    for (v, label) in &xt {
        let x = sx(*v);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#333"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            top + ph,
            top + ph + 4.0,
            top + ph + 16.0,
            escape(label)
        );
    }
    if !panel.x_label.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            left + pw / 2.0,
            top + ph + 34.0,
            escape(&panel.x_label)
        );
    }
    if !panel.y_label.is_empty() {
        let (cx, cy) = (x0 + 14.0, top + ph / 2.0);
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{cy:.1}" text-anchor="middle" transform="rotate(-90 {cx:.1} {cy:.1})">{}</text>"#,
            escape(&panel.y_label)
        );
    }

    let mut legend: Vec<(&str, &str)> = Vec::new();
    for layer in &panel.layers {
        match layer {
            Layer::Band {
                label,
                x,
                lower,
                upper,
                color,
            } => {
                let mut pts: Vec<String> = x.iter().zip(upper).map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y))).collect();
                pts.extend(x.iter().zip(lower).rev().map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y))));
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                    pts.join(" ")
                );
                legend.push((label, color));
            }
            Layer::Line {
                label,
                points,
                color,
                dashed,
            } => {
                let dash = if *dashed { r#" stroke-dasharray="5,3""# } else { "" };
                for segment in points.split(|(x, y)| !(x.is_finite() && y.is_finite())) {
                    if segment.is_empty() {
                        continue;
                    }
                    let pts: Vec<String> = segment.iter().map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y))).collect();
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                        pts.join(" ")
                    );
                }
                legend.push((label, color));
            }
            Layer::Markers { label, points, color } => {
                for (x, y) in points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                    let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#, sx(*x), sy(*y));
                }
                legend.push((label, color));
            }
            Layer::Boxes { items, color } => {
                let half = 0.3 * pw / (xhi - xlo);
                for (x, [min, q1, med, q3, max]) in items {
                    let cx = sx(*x);
                    let _ = writeln!(
                        s,
                        r##"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="#333"/><rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{color}" fill-opacity="0.5" stroke="#333"/><line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#000" stroke-width="2"/>"##,
                        sy(*min),
                        sy(*max),
                        cx - half,
                        sy(*q3),
                        2.0 * half,
                        (sy(*q1) - sy(*q3)).max(0.5),
                        cx - half,
                        sy(*med),
                        cx + half,
                        sy(*med)
                    );
                }
            }
        }
    }
    for (i, (label, color)) in legend.iter().filter(|(l, _)| !l.is_empty()).enumerate() {
        let ly = top + 10.0 + 16.0 * i as f64;
        let lx = left + pw + 10.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="8" fill="{color}"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 7.0,
            lx + 16.0,
            escape(label)
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(nice_ticks(0.0, 10.0, 5), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        let t = nice_ticks(5234.0, 11890.0, 5);
        assert!(t[0] <= 5234.0 && *t.last().unwrap() >= 11890.0);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!(!nice_ticks(3.0, 3.0, 5).is_empty());
    }

    #[test]
    fn renders_all_layers() {
        let p = Panel::new("t & u")
            .labels("x", "y")
            .layer(Layer::Line {
                label: "a".into(),
                points: vec![(0.0, 1.0), (1.0, f64::NAN), (2.0, 3.0), (3.0, 2.0)],
                color: BLUE,
                dashed: true,
            })
            .layer(Layer::Band {
                label: "band".into(),
                x: vec![0.0, 1.0],
                lower: vec![0.0, 0.5],
                upper: vec![2.0, 2.5],
                color: GREEN,
            })
            .layer(Layer::Boxes {
                items: vec![(1.0, [0.0, 1.0, 2.0, 3.0, 4.0])],
                color: ORANGE,
            });
        let svg = render("title", &[p.clone(), p], 800.0, 300.0);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("t &amp; u"));
        // the NaN splits the line into two polylines per panel
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg.matches("<polygon").count(), 2);
    }

    #[test]
    fn empty_panel() {
        let svg = render("", &[Panel::new("nothing")], 400.0, 200.0);
        assert!(svg.contains("nothing"));
    }
}
