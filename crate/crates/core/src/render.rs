//! Figure regeneration: the lune boundary and the image domains of the
//! extremal maps, as SVG 1.1 and `theta,re,im` CSV.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::Extremal;
use crate::error::{Error, Result};
use crate::maps::{evaluate, figure_method, lune_q, Method};

pub const MIN_LUNE_SAMPLES: usize = 64;
pub const MAX_IMAGE_RADIUS: f64 = 0.995;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub w: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub label: String,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCheck {
    pub label: &'static str,
    pub target: Complex64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LuneFigure {
    pub samples: usize,
    pub right: Polyline,
    pub left: Polyline,
    /// `max ||w^2 - 1| - 2|w||` over all vertices of both lobes.
    pub max_boundary_residual: f64,
    pub vertices: Vec<VertexCheck>,
    /// Real-axis extent of the right lobe.
    pub right_extent: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageFigure {
    pub name: String,
    pub radius: f64,
    pub closed_form: bool,
    pub curve: Polyline,
}

/// `e^{i theta}` for `theta = 2 pi k / n`, exact at quarter turns so that
/// the cusp vertices of the lune are hit exactly.
fn unit_root(k: usize, n: usize) -> Complex64 {
    if (4 * k).is_multiple_of(n) {
        match (4 * k / n) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
    }
}

fn close_loop(mut points: Vec<CurvePoint>) -> Vec<CurvePoint> {
    if let Some(&first) = points.first() {
        points.push(CurvePoint { theta: TAU, w: first.w });
    }
    points
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn distance_to_polylines(p: Complex64, lines: &[&Polyline]) -> f64 {
    lines
        .iter()
        .flat_map(|line| line.points.windows(2))
        .map(|seg| distance_to_segment(p, seg[0].w, seg[1].w))
        .fold(f64::INFINITY, f64::min)
}

/// Image of the unit circle under `q(z) = z + sqrt(1 + z^2)` (right lobe)
/// and its reflection through the origin (left lobe). `samples` is rounded
/// up to a multiple of four.
pub fn render_lune(samples: usize) -> Result<LuneFigure> {
    if samples < MIN_LUNE_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "lune needs at least {MIN_LUNE_SAMPLES} samples, got {samples}"
        )));
    }
    let n = samples.div_ceil(4) * 4;
    let right: Vec<CurvePoint> = (0..n)
        .map(|k| CurvePoint {
            theta: TAU * k as f64 / n as f64,
            w: lune_q(unit_root(k, n)),
        })
        .collect();
    let left: Vec<CurvePoint> = right.iter().map(|p| CurvePoint { theta: p.theta, w: -p.w }).collect();

    let residual = |w: Complex64| ((w * w - 1.0).norm() - 2.0 * w.norm()).abs();
    let max_boundary_residual = right
        .iter()
        .chain(&left)
        .map(|p| residual(p.w))
        .fold(0.0, f64::max);
    let right_extent = right
        .iter()
        .filter(|p| p.w.im.abs() < 1e-12)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.w.re), hi.max(p.w.re))
        });

    let right = Polyline { label: "right lobe".into(), points: close_loop(right) };
    let left = Polyline { label: "left lobe".into(), points: close_loop(left) };
    let targets = [
        ("i", Complex64::new(0.0, 1.0)),
        ("-i", Complex64::new(0.0, -1.0)),
        ("1+sqrt2", Complex64::new(1.0 + SQRT_2, 0.0)),
        ("1-sqrt2", Complex64::new(1.0 - SQRT_2, 0.0)),
    ];
    let vertices = targets
        .iter()
        .map(|&(label, target)| VertexCheck {
            label,
            target,
            distance: distance_to_polylines(target, &[&right, &left]),
        })
        .collect();

    Ok(LuneFigure {
        samples: n,
        right,
        left,
        max_boundary_residual,
        vertices,
        right_extent,
    })
}

/// Image of `|z| = radius` under an extremal map.
pub fn render_image_domain(map: &Extremal, radius: f64, samples: usize) -> Result<ImageFigure> {
    if !(radius > 0.0 && radius <= MAX_IMAGE_RADIUS) {
        return Err(Error::InvalidArgument(format!(
            "radius {radius} must lie in (0, {MAX_IMAGE_RADIUS}]"
        )));
    }
    if samples < 4 {
        return Err(Error::InvalidArgument("image needs at least 4 samples".into()));
    }
    let method = figure_method(map);
    let points: Vec<Result<CurvePoint>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let theta = TAU * k as f64 / samples as f64;
            let z = unit_root(k, samples) * radius;
            Ok(CurvePoint { theta, w: evaluate(map, z, method, theta)? })
        })
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ImageFigure {
        name: map.name().to_string(),
        radius,
        closed_form: method == Method::Closed,
        curve: Polyline {
            label: format!("{}(|z| = {radius})", map.name()),
            points: close_loop(points),
        },
    })
}

/// Writes the `theta,re,im` rows of the given polylines, one after another.
pub fn write_csv<W: Write>(out: W, lines: &[&Polyline]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["theta", "re", "im"])?;
    for line in lines {
        for p in &line.points {
            writer.write_record([p.theta.to_string(), p.w.re.to_string(), p.w.im.to_string()])?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG 1.1 document with a view box fitted to the data plus 5% margins.
/// The imaginary axis points up.
pub fn svg_document(title: &str, description: &str, lines: &[&Polyline]) -> String {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in lines.iter().flat_map(|l| &l.points) {
        lo_x = lo_x.min(p.w.re);
        hi_x = hi_x.max(p.w.re);
        lo_y = lo_y.min(-p.w.im);
        hi_y = hi_y.max(-p.w.im);
    }
    if !lo_x.is_finite() {
        (lo_x, hi_x, lo_y, hi_y) = (-1.0, 1.0, -1.0, 1.0);
    }
    let width = (hi_x - lo_x).max(1e-9);
    let height = (hi_y - lo_y).max(1e-9);
    let (mx, my) = (0.05 * width, 0.05 * height);
    let (vx, vy, vw, vh) = (lo_x - mx, lo_y - my, width + 2.0 * mx, height + 2.0 * my);
    let stroke = 0.004 * vw.max(vh);
    let pixels_w = 600.0;
    let pixels_h = (pixels_w * vh / vw).round();

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{pixels_w}" height="{pixels_h}" viewBox="{vx:.9} {vy:.9} {vw:.9} {vh:.9}">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(svg, "<desc>{}</desc>", escape(description));
    let axis = format!(r##"stroke="#bbbbbb" stroke-width="{:.9}""##, stroke * 0.5);
    if vy < 0.0 && vy + vh > 0.0 {
        let _ = writeln!(svg, r#"<line x1="{vx:.9}" y1="0" x2="{:.9}" y2="0" {axis}/>"#, vx + vw);
    }
    if vx < 0.0 && vx + vw > 0.0 {
        let _ = writeln!(svg, r#"<line x1="0" y1="{vy:.9}" x2="0" y2="{:.9}" {axis}/>"#, vy + vh);
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    for (i, line) in lines.iter().enumerate() {
        let coords: Vec<String> = line
            .points
            .iter()
            .map(|p| format!("{:.9},{:.9}", p.w.re, -p.w.im))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="{stroke:.9}" points="{}"><title>{}</title></polyline>"#,
            colors[i % colors.len()],
            coords.join(" "),
            escape(&line.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

impl LuneFigure {
    pub fn to_svg(&self) -> String {
        let checks: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("d({})={:.3e}", v.label, v.distance))
            .collect();
        let description = format!(
            "|w^2-1| = 2|w|, image of the unit circle under q(z) = z + sqrt(1+z^2) and its reflection; samples={}; max residual={:.3e}; {}",
            self.samples,
            self.max_boundary_residual,
            checks.join("; ")
        );
        svg_document("Lune domain", &description, &[&self.right, &self.left])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(out, &[&self.right, &self.left])
    }
}

impl ImageFigure {
    pub fn to_svg(&self) -> String {
        let description = format!(
            "image of |z| = {} under {} ({})",
            self.radius,
            self.name,
            if self.closed_form { "closed form" } else { "quadrature" }
        );
        svg_document(&format!("{}(D)", self.name), &description, &[&self.curve])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(out, &[&self.curve])
    }
}
