//! Serialization of experiment results: CSV and JSON tables, plus a small
//! dependency-free SVG line-plot writer for the error curves.

use crate::harness::experiment::ErrorReportRow;
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(name: &str) -> Result<OutputFormat> {
        match name {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

fn fmt_cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

pub fn rows_to_csv(rows: &[ErrorReportRow]) -> String {
    let mut out = String::from("n,gm_l1,mk_l1,gm_sup,mk_sup\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.n,
            fmt_cell(row.gm_l1),
            fmt_cell(row.mk_l1),
            fmt_cell(row.gm_sup),
            fmt_cell(row.mk_sup),
        );
    }
    out
}

pub fn rows_to_json(rows: &[ErrorReportRow]) -> String {
    // Serialization of plain numeric structs cannot fail.
    serde_json::to_string_pretty(rows).expect("row serialization")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the table to `path` in the requested format.
pub fn emit_rows(rows: &[ErrorReportRow], path: &Path, format: OutputFormat) -> Result<()> {
    let contents = match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows),
    };
    write_file(path, &contents)
}

/// One polyline in an SVG plot.
#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const SVG_WIDTH: f64 = 960.0;
const SVG_HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn data_bounds(curves: &[Curve]) -> Option<((f64, f64), (f64, f64))> {
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    for curve in curves {
        for &(x, y) in &curve.points {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            any = true;
            xs = (xs.0.min(x), xs.1.max(x));
            ys = (ys.0.min(y), ys.1.max(y));
        }
    }
    if !any {
        return None;
    }
    if xs.1 - xs.0 < 1e-300 {
        xs = (xs.0 - 0.5, xs.1 + 0.5);
    }
    if ys.1 - ys.0 < 1e-300 {
        ys = (ys.0 - 0.5, ys.1 + 0.5);
    }
    Some((xs, ys))
}

/// Renders the curves to a standalone SVG document (pure vector output).
pub fn svg_curves(curves: &[Curve], title: &str, x_label: &str, y_label: &str) -> Result<String> {
    let ((x_lo, x_hi), (y_lo, y_hi)) =
        data_bounds(curves).ok_or_else(|| Error::invalid("no finite points to plot"))?;
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w,
            MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        xml_escape(title)
    );

    // Axes.
    let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>",
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x0:.1}\" y2=\"{MARGIN_TOP:.1}\" stroke=\"black\"/>"
    );

    // Ticks: five per axis with numeric labels.
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let x = x_lo + t * (x_hi - x_lo);
        let y = y_lo + t * (y_hi - y_lo);
        let (px, _) = to_px(x, y_lo);
        let (_, py) = to_px(x_lo, y);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{y0:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            y0 + 20.0,
            format_tick(x)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            x0 - 9.0,
            py + 4.0,
            format_tick(y)
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 10.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(y_label)
    );

    // Curves and legend.
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in &curve.points {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let (px, py) = to_px(x, y);
            let _ = write!(path, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            path.trim_end()
        );
        let ly = MARGIN_TOP + 14.0 + i as f64 * 20.0;
        let lx = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            lx + 24.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            lx + 30.0,
            ly + 4.0,
            xml_escape(&curve.label)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders curves and writes the SVG document to `path`.
pub fn emit_svg_curves(
    curves: &[Curve],
    title: &str,
    x_label: &str,
    y_label: &str,
    path: &Path,
) -> Result<()> {
    let svg = svg_curves(curves, title, x_label, y_label)?;
    write_file(path, &svg)
}

fn format_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && (a < 1e-3 || a >= 1e4) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
