//! SVG, CSV and JSON renderings of a region boundary.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::region::boundary::{BoundaryPiece, PieceKind, RegionBoundary};
use crate::region::closure::leray_hopf_segment;

pub const DEFAULT_ARC_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(ExportFormat::Svg),
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unsupported format `{other}` (expected svg, csv or json)"
            ))),
        }
    }
}

/// Up to 12 significant digits, trailing zeros dropped.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    let digits = (11 - v.abs().log10().floor() as i32).clamp(0, 20) as usize;
    let s = format!("{v:.digits$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn piece_points(p: &BoundaryPiece, arc_samples: usize) -> Vec<Point<f64>> {
    p.sample(arc_samples)
}

pub fn export(rb: &RegionBoundary, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Svg => Ok(to_svg(rb, DEFAULT_ARC_SAMPLES)),
        ExportFormat::Csv => to_csv(rb, DEFAULT_ARC_SAMPLES),
        ExportFormat::Json => to_json(rb),
    }
}

pub fn to_json(rb: &RegionBoundary) -> Result<String> {
    serde_json::to_string_pretty(rb).map_err(|e| Error::Numerical(e.to_string()))
}

pub fn from_json(s: &str) -> Result<RegionBoundary> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn kind_name(k: PieceKind) -> &'static str {
    match k {
        PieceKind::Segment => "segment",
        PieceKind::Arc => "arc",
        PieceKind::Edge => "edge",
        PieceKind::Vertical => "vertical",
        PieceKind::Polyline => "polyline",
    }
}

/// One row per sample point: `piece_id,kind,x,y,strict`.
pub fn to_csv(rb: &RegionBoundary, arc_samples: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    let io = |e: csv::Error| Error::Numerical(e.to_string());
    w.write_record(["piece_id", "kind", "x", "y", "strict"])
        .map_err(io)?;
    for p in &rb.pieces {
        for q in piece_points(p, arc_samples) {
            let strict = if p.strict { "true" } else { "false" };
            w.write_record([
                p.id.as_str(),
                kind_name(p.kind),
                &fmt_num(q.x),
                &fmt_num(q.y),
                strict,
            ])
            .map_err(io)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

const SIZE: f64 = 560.0;
const MARGIN: f64 = 60.0;

fn px(p: &Point<f64>) -> (String, String) {
    let sx = MARGIN + p.x / 0.5 * SIZE;
    let sy = MARGIN + (0.5 - p.y) / 0.5 * SIZE;
    (fmt_num(sx), fmt_num(sy))
}

fn path(points: &[Point<f64>]) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let (x, y) = px(p);
        let _ = write!(d, "{}{x},{y} ", if k == 0 { "M" } else { "L" });
    }
    d.trim_end().to_string()
}

/// Outline for the shaded region.
fn fill_outline(rb: &RegionBoundary, arc_samples: usize) -> Vec<Point<f64>> {
    let upper: Vec<Point<f64>> = rb
        .pieces
        .iter()
        .filter(|p| !p.lower)
        .flat_map(|p| piece_points(p, arc_samples))
        .collect();
    let mut out = upper.clone();
    let lower: Vec<Point<f64>> = rb
        .pieces
        .iter()
        .filter(|p| p.lower)
        .flat_map(|p| piece_points(p, arc_samples))
        .collect();
    if lower.is_empty() {
        if let Some(last) = upper.last() {
            out.push(Point::new(last.x, 0.0));
        }
        out.push(Point::new(0.0, 0.0));
        if let Some(first) = upper.first() {
            out.push(Point::new(0.0, first.y));
        }
    } else {
        out.extend(lower.into_iter().rev());
    }
    out
}

pub fn to_svg(rb: &RegionBoundary, arc_samples: usize) -> String {
    to_svg_titled(rb, arc_samples, &rb.scenario.to_string())
}

pub fn to_svg_titled(rb: &RegionBoundary, arc_samples: usize, title: &str) -> String {
    let total = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{t}" height="{t}" viewBox="0 0 {t} {t}">"#,
        t = fmt_num(total)
    );
    let _ = writeln!(s, "<title>{}</title>", xml_escape(title));
    let corner = |x: f64, y: f64| px(&Point::new(x, y));
    let (x0, y0) = corner(0.0, 0.0);
    let (x1, _) = corner(0.5, 0.0);
    let (_, y1) = corner(0.0, 0.5);
    let _ = writeln!(
        s,
        r##"<g id="axes" stroke="#000" stroke-width="1" fill="none">"##
    );
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="14">1/p</text>"#,
        fmt_num(MARGIN + SIZE + 8.0),
        y0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="14">1/q</text>"#,
        x0,
        fmt_num(MARGIN - 12.0)
    );
    for k in 0..=5 {
        let t = 0.1 * k as f64;
        let (tx, _) = corner(t, 0.0);
        let (_, ty) = corner(0.0, t);
        let _ = writeln!(
            s,
            r#"<text x="{tx}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            fmt_num(MARGIN + SIZE + 16.0),
            fmt_num(t)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ty}" font-size="10" text-anchor="end">{}</text>"#,
            fmt_num(MARGIN - 6.0),
            fmt_num(t)
        );
    }
    let outline = fill_outline(rb, arc_samples);
    if !outline.is_empty() {
        let _ = writeln!(
            s,
            r##"<path id="region" d="{} Z" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>"##,
            path(&outline)
        );
    }
    let _ = writeln!(
        s,
        r##"<path id="bisectrice" d="{}" stroke="#888" stroke-width="1" fill="none"/>"##,
        path(&[Point::new(0.0, 0.0), Point::new(0.5, 0.5)])
    );
    let [a, b] = leray_hopf_segment(&rb.scenario.gamma);
    let (a, mut b) = (a.to_f64(), b.to_f64());
    if b.x < 0.0 {
        // Clip to the square.
        let t = a.x / (a.x - b.x);
        b = Point::new(0.0, a.y + t * (b.y - a.y));
    }
    let _ = writeln!(
        s,
        r##"<path id="leray-hopf" d="{}" stroke="#d62728" stroke-width="2" fill="none"/>"##,
        path(&[a, b])
    );
    for p in &rb.pieces {
        let dash = if p.strict {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r##"<path id="piece-{}" class="{}" d="{}" stroke="#08519c" stroke-width="2" fill="none"{dash}/>"##,
            p.id,
            if p.strict { "strict" } else { "nonstrict" },
            path(&piece_points(p, arc_samples))
        );
    }
    for v in &rb.vertices {
        let q = v.point.to_f64();
        let (cx, cy) = px(&q);
        let _ = writeln!(
            s,
            r##"<g class="vertex" data-x="{}" data-y="{}"><circle cx="{cx}" cy="{cy}" r="3" fill="#000"/><text x="{cx}" y="{cy}" dx="5" dy="-5" font-size="11">{}</text></g>"##,
            fmt_num(q.x),
            fmt_num(q.y),
            xml_escape(&v.label)
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
