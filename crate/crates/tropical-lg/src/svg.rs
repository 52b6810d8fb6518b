//! Deterministic SVG rendering of scattering diagrams.
//!
//! All combinatorics upstream is exact; rendering is the one place where
//! coordinates are converted to floating point, purely for display. Output
//! is byte-deterministic for a fixed diagram.

use std::fmt::Write as _;

use crate::geom2d::{Point, Scalar};
use crate::scattering::Diagram;

/// The square clipping box: bounding box of the marked points and joints,
/// padded by three times its diameter, at least ten units on each side of
/// the center.
pub(crate) fn clip_box(d: &Diagram) -> (Scalar, Scalar, Scalar, Scalar) {
    let mut pts: Vec<&Point> = d.marked_points().iter().collect();
    for j in d.joints() {
        pts.push(&j.point);
    }
    let zero = Scalar::zero();
    let (mut xmin, mut xmax, mut ymin, mut ymax) =
        (zero.clone(), zero.clone(), zero.clone(), zero);
    if let Some((first, rest)) = pts.split_first() {
        xmin = first.x.clone();
        xmax = first.x.clone();
        ymin = first.y.clone();
        ymax = first.y.clone();
        for p in rest {
            if p.x < xmin {
                xmin = p.x.clone();
            }
            if p.x > xmax {
                xmax = p.x.clone();
            }
            if p.y < ymin {
                ymin = p.y.clone();
            }
            if p.y > ymax {
                ymax = p.y.clone();
            }
        }
    }
    let dx = &xmax - &xmin;
    let dy = &ymax - &ymin;
    let diam = if dx > dy { dx } else { dy };
    let mut pad = &diam * &Scalar::from(3);
    if pad < Scalar::from(5) {
        pad = Scalar::from(5);
    }
    (
        &xmin - &pad,
        &xmax + &pad,
        &ymin - &pad,
        &ymax + &pad,
    )
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders the diagram to an SVG document: walls as clipped rays with
/// monomial labels, marked points as dots, joints as crosses. A diagram
/// with no walls gets a legend of the fan rays instead.
pub fn render(d: &Diagram) -> String {
    let (xmin, xmax, ymin, ymax) = clip_box(d);
    let (x0, x1) = (xmin.to_f64(), xmax.to_f64());
    let (y0, y1) = (ymin.to_f64(), ymax.to_f64());
    let w = x1 - x0;
    let h = y1 - y0;
    // SVG's y axis points down; flip by mapping y to -y.
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        fmt_coord(x0),
        fmt_coord(-y1),
        fmt_coord(w),
        fmt_coord(h),
    );
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        fmt_coord(x0),
        fmt_coord(-y1),
        fmt_coord(w),
        fmt_coord(h),
    );
    let stroke = w / 400.0;
    let font = w / 50.0;
    // Long enough that every ray exits the box from any base inside it.
    let reach = 3.0 * (w + h);

    if d.walls().is_empty() {
        // Fan legend: rays from the origin.
        for (rho, ray) in d.fan().rays().iter().enumerate() {
            let rx: f64 = ray.x.to_string().parse().unwrap_or(0.0);
            let ry: f64 = ray.y.to_string().parse().unwrap_or(0.0);
            let norm = (rx * rx + ry * ry).sqrt();
            let (ux, uy) = (rx / norm, ry / norm);
            let len = 0.25 * w.min(h);
            let _ = writeln!(
                out,
                r#"<line x1="0" y1="0" x2="{}" y2="{}" stroke="gray" stroke-width="{}"/>"#,
                fmt_coord(ux * len),
                fmt_coord(-uy * len),
                fmt_coord(stroke),
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="{}" fill="gray">ray {rho}: ({},{})</text>"#,
                fmt_coord(ux * len * 1.1),
                fmt_coord(-uy * len * 1.1),
                fmt_coord(font),
                ray.x,
                ray.y,
            );
        }
    }

    for wall in d.walls() {
        let Some((base, far)) = wall.support.endpoints() else {
            continue;
        };
        let bx = base.x.to_f64();
        let by = base.y.to_f64();
        let (ex, ey) = match far {
            Some(p) => (p.x.to_f64(), p.y.to_f64()),
            None => {
                let t = wall.support.tangent().expect("walls are rays");
                let tx: f64 = t.x.to_string().parse().unwrap_or(0.0);
                let ty: f64 = t.y.to_string().parse().unwrap_or(0.0);
                let norm = (tx * tx + ty * ty).sqrt();
                (bx + tx / norm * reach, by + ty / norm * reach)
            }
        };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}"/>"#,
            fmt_coord(bx),
            fmt_coord(-by),
            fmt_coord(ex),
            fmt_coord(-ey),
            fmt_coord(stroke),
        );
        // Label near the midpoint of the drawn stretch inside the box.
        let (mx, my) = ((bx + ex) / 2.0, (by + ey) / 2.0);
        let (mx, my) = (mx.clamp(x0, x1), my.clamp(y0, y1));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{}" fill="black">{} {}</text>"#,
            fmt_coord(mx),
            fmt_coord(-my),
            fmt_coord(font),
            wall.m,
            wall.marks,
        );
    }

    for p in d.marked_points() {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="blue"/>"#,
            fmt_coord(p.x.to_f64()),
            fmt_coord(-p.y.to_f64()),
            fmt_coord(stroke * 3.0),
        );
    }

    for j in d.joints() {
        let (cx, cy) = (j.point.x.to_f64(), -j.point.y.to_f64());
        let r = stroke * 4.0;
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0)] {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="red" stroke-width="{}"/>"#,
                fmt_coord(cx - r * sx),
                fmt_coord(cy - r * sy),
                fmt_coord(cx + r * sx),
                fmt_coord(cy + r * sy),
                fmt_coord(stroke),
            );
        }
    }

    out.push_str("</svg>\n");
    out
}
