//! Standalone SVG 1.1 scatter plots of 2D run results.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::partition::Label;
use crate::report::RunResult;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
/// Space for the axes and their labels.
const PAD: f64 = 40.0;
const MARGIN: f64 = 0.05;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#393b79", "#637939",
];

pub fn group_color(group: usize) -> &'static str {
    PALETTE[group % PALETTE.len()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlotOptions {
    /// Plot the first two features of higher-dimensional results.
    pub project: bool,
}

/// Data-to-pixel mapping with one scale for both axes so circles stay round.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn new(points: &[[f64; 2]]) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            xmin = xmin.min(p[0]);
            xmax = xmax.max(p[0]);
            ymin = ymin.min(p[1]);
            ymax = ymax.max(p[1]);
        }
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - MARGIN * span, hi + MARGIN * span)
        };
        let (xmin, xmax) = pad(xmin, xmax);
        let (ymin, ymax) = pad(ymin, ymax);
        let scale = ((WIDTH - 2.0 * PAD) / (xmax - xmin)).min((HEIGHT - 2.0 * PAD) / (ymax - ymin));
        // center the data range inside the plot area
        let x0 = (xmin + xmax) / 2.0 - (WIDTH - 2.0 * PAD) / (2.0 * scale);
        let y0 = (ymin + ymax) / 2.0 - (HEIGHT - 2.0 * PAD) / (2.0 * scale);
        Self { x0, y0, scale }
    }

    fn x(&self, v: f64) -> f64 {
        PAD + (v - self.x0) * self.scale
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - PAD - (v - self.y0) * self.scale
    }

    fn x_value(&self, px: f64) -> f64 {
        self.x0 + (px - PAD) / self.scale
    }

    fn y_value(&self, py: f64) -> f64 {
        self.y0 + (HEIGHT - PAD - py) / self.scale
    }
}

/// Renders a result as SVG: points filled by group color, targets as larger
/// outlined squares, outliers as crosses, Apollonius circles as outlines.
pub fn render_svg(result: &RunResult, options: PlotOptions) -> Result<String> {
    if result.dim != 2 && !(options.project && result.dim > 2) {
        return Err(Error::Dimension { dim: result.dim });
    }
    let points: Vec<[f64; 2]> = result.coords.iter().map(|c| [c[0], c[1]]).collect();
    let frame = Frame::new(&points);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{} / {}</title>", escape(&result.report.dataset), escape(&result.report.algorithm));
    let plot_w = WIDTH - 2.0 * PAD;
    let plot_h = HEIGHT - 2.0 * PAD;
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot-area"><rect x="{PAD}" y="{PAD}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="10" fill="black">"#);
    for (px, anchor) in [(PAD, "start"), (WIDTH - PAD, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="{anchor}">{:.3}</text>"#,
            HEIGHT - PAD + 14.0,
            frame.x_value(px)
        );
    }
    for py in [HEIGHT - PAD, PAD] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.3}</text>"#,
            PAD - 4.0,
            py + 3.0,
            frame.y_value(py)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="circles" clip-path="url(#plot-area)" fill="none" stroke-width="1.2">"#);
    if result.dim == 2 {
        for c in &result.circles {
            let _ = writeln!(
                s,
                r#"<circle class="apollonius" cx="{:.3}" cy="{:.3}" r="{:.3}" stroke="{}"/>"#,
                frame.x(c.center[0]),
                frame.y(c.center[1]),
                c.radius * frame.scale,
                group_color(c.group)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="points">"#);
    for (i, (p, label)) in points.iter().zip(&result.assignments).enumerate() {
        let (x, y) = (frame.x(p[0]), frame.y(p[1]));
        match label {
            Label::Outlier => {
                let d = 4.0;
                let _ = writeln!(
                    s,
                    r#"<path class="outlier" d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" stroke="black" stroke-width="1.5"/>"#,
                    x - d,
                    y - d,
                    x + d,
                    y + d,
                    x - d,
                    y + d,
                    x + d,
                    y - d
                );
            }
            Label::Group(g) if result.targets.contains(&i) => {
                let h = 6.0;
                let _ = writeln!(
                    s,
                    r#"<rect class="target" x="{:.3}" y="{:.3}" width="{}" height="{}" fill="{}" stroke="black" stroke-width="1.5"/>"#,
                    x - h / 2.0,
                    y - h / 2.0,
                    h,
                    h,
                    group_color(*g)
                );
            }
            Label::Group(g) => {
                let _ = writeln!(
                    s,
                    r#"<circle class="point" cx="{x:.3}" cy="{y:.3}" r="3" fill="{}"/>"#,
                    group_color(*g)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
