//! Minimal static SVG line and scatter charts.
//!
//! Every series becomes one `<polyline>`; a series with a single point, or
//! one drawn as [`Style::Markers`], becomes `<circle>` markers instead.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("nothing to plot")]
    Empty,
    #[error("series `{0}` has no points")]
    EmptySeries(String),
    #[error("series `{0}` has a non-finite coordinate")]
    NonFinite(String),
    #[error("cannot write plot {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Line,
    Markers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    pub color: Option<&'static str>,
}

impl PlotSeries {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            style: Style::Line,
            color: None,
        }
    }

    pub fn markers(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            style: Style::Markers,
            ..Self::line(name, points)
        }
    }

    pub fn with_color(mut self, color: &'static str) -> Self {
        self.color = Some(color);
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Draw a legend box; skipped for spaghetti plots.
    pub legend: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

/// Renders `series` as an SVG document.
pub fn render_svg(series: &[PlotSeries], chart: &Chart) -> Result<String, PlotError> {
    if series.is_empty() {
        return Err(PlotError::Empty);
    }
    for s in series {
        if s.points.is_empty() {
            return Err(PlotError::EmptySeries(s.name.clone()));
        }
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(PlotError::NonFinite(s.name.clone()));
        }
    }
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(all().map(|p| p.0));
    let (y0, y1) = range(all().map(|p| p.1));
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&chart.title)
    );

    let (left, right, top, bottom) = (MARGIN_L, WIDTH - MARGIN_R, MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>"#);
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/>"#);
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g class="ticks" font-family="sans-serif" font-size="11">"#);
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        (left + right) / 2.0,
        HEIGHT - 15.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(&chart.y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = s.color.unwrap_or(PALETTE[i % PALETTE.len()]);
        let name = escape(&s.name);
        if s.style == Style::Markers || s.points.len() == 1 {
            let _ = writeln!(svg, r#"<g class="markers" data-series="{name}" fill="{color}">"#);
            for &(x, y) in &s.points {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, sx(x), sy(y));
            }
            let _ = writeln!(svg, "</g>");
        } else {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline data-series="{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
    }

    if chart.legend {
        let _ = writeln!(svg, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
        for (i, s) in series.iter().enumerate() {
            let color = s.color.unwrap_or(PALETTE[i % PALETTE.len()]);
            let y = top + 10.0 + 16.0 * i as f64;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                left + 10.0,
                y - 9.0,
                left + 26.0,
                y,
                escape(&s.name)
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes `series` to `path`.
pub fn emit_plot(series: &[PlotSeries], chart: &Chart, path: impl AsRef<Path>) -> Result<(), PlotError> {
    let svg = render_svg(series, chart)?;
    let path = path.as_ref();
    std::fs::write(path, svg).map_err(|source| PlotError::Io {
        path: path.to_path_buf(),
        source,
    })
}
