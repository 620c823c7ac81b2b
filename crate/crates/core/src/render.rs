//! Plain SVG pictures of sets and base scenes.

use std::fmt::Write as _;

use crate::columnar::ColumnarSet;
use crate::connectedness::PartitionCertificate;
use crate::grid::{Axis, CellId};
use crate::profile::Profile;

const SIZE: f64 = 480.0;
const CLIP: f64 = 4.0;

/// Drawing coordinates of each cell along an axis; unbounded cells get width 1.
fn spans(axis: &Axis) -> Vec<(f64, f64)> {
    let b = axis.breaks();
    (0..axis.cells())
        .map(|i| {
            let (lo, hi) = (b[i].value(), b[i + 1].value());
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => (lo, hi),
                (false, true) => (hi - 1.0, hi),
                (true, false) => (lo, lo + 1.0),
                (false, false) => (-0.5, 0.5),
            }
        })
        .collect()
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        (x - self.x0) / (self.x1 - self.x0) * SIZE
    }

    fn y(&self, y: f64) -> f64 {
        SIZE - (y - self.y0) / (self.y1 - self.y0) * SIZE
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

fn rect(out: &mut String, x: f64, y: f64, w: f64, h: f64, fill: &str) {
    let _ = writeln!(out, r#"<rect x="{x:.4}" y="{y:.4}" width="{w:.4}" height="{h:.4}" fill="{fill}"/>"#);
}

/// Columns of a set over a 1-D base, clipped to `|y| ≤ 4`. A set over a 2-D
/// base is drawn as the base grid shaded by section measure.
pub fn render_set(set: &ColumnarSet) -> String {
    let mut out = String::new();
    header(&mut out);
    let grid = set.grid();
    if set.base_dim() == 1 {
        let xs = spans(grid.axis(0));
        let f = Frame { x0: xs[0].0, x1: xs[xs.len() - 1].1, y0: -CLIP, y1: CLIP };
        for (i, &(a, b)) in xs.iter().enumerate() {
            for iv in set.section(CellId(i)).intervals() {
                let lo = iv.lo().value().max(-CLIP);
                let hi = iv.hi().value().min(CLIP);
                if hi > lo {
                    rect(&mut out, f.x(a), f.y(hi), f.x(b) - f.x(a), f.y(lo) - f.y(hi), "steelblue");
                }
            }
        }
        let _ = writeln!(out, r#"<line x1="0" y1="{0:.4}" x2="{SIZE}" y2="{0:.4}" stroke="black"/>"#, f.y(0.0));
    } else {
        let shade: Vec<String> =
            grid.cells().map(|c| grey(set.section(c).gauss_measure())).collect();
        cells(&mut out, grid, |c| shade[c.0].clone());
    }
    out.push_str("</svg>\n");
    out
}

fn grey(v: f64) -> String {
    let g = (255.0 * (1.0 - v.clamp(0.0, 1.0))).round() as u8;
    format!("rgb({g},{g},{g})")
}

fn cells(out: &mut String, grid: &crate::grid::Grid, fill: impl Fn(CellId) -> String) -> Frame {
    let xs = spans(grid.axis(0));
    let ys = if grid.base_dim() == 2 { spans(grid.axis(1)) } else { vec![(0.0, 1.0)] };
    let f = Frame { x0: xs[0].0, x1: xs[xs.len() - 1].1, y0: ys[0].0, y1: ys[ys.len() - 1].1 };
    for c in grid.cells() {
        let (i, j) = grid.coords(c);
        let ((a, b), (lo, hi)) = (xs[i], ys[j]);
        rect(out, f.x(a), f.y(hi), f.x(b) - f.x(a), f.y(lo) - f.y(hi), &fill(c));
    }
    f
}

/// The base grid of a profile shaded by value, or coloured by the sides of a
/// partition; blocked facets are dashed red.
pub fn render_scene(p: &Profile, partition: Option<&PartitionCertificate>) -> String {
    let mut out = String::new();
    header(&mut out);
    let grid = p.grid();
    let f = cells(&mut out, grid, |c| match partition {
        Some(cert) if cert.plus.contains(&c) => "tomato".to_string(),
        Some(cert) if cert.minus.contains(&c) => "royalblue".to_string(),
        _ => grey(p.value(c)),
    });
    let xs = spans(grid.axis(0));
    let ys = if grid.base_dim() == 2 { spans(grid.axis(1)) } else { vec![(0.0, 1.0)] };
    for facet in grid.facets() {
        let lim = match p.limits(crate::profile::Location::Facet(facet.id)) {
            Ok(l) => l,
            Err(_) => continue,
        };
        if !lim.blocks() || !facet.is_interior() {
            continue;
        }
        let id = facet.id;
        let (x1, y1, x2, y2) = if id.axis == 0 {
            let x = if id.at < xs.len() { xs[id.at].0 } else { xs[id.at - 1].1 };
            let (lo, hi) = ys[id.transverse];
            (x, lo, x, hi)
        } else {
            let y = if id.at < ys.len() { ys[id.at].0 } else { ys[id.at - 1].1 };
            let (a, b) = xs[id.transverse];
            (a, y, b, y)
        };
        let _ = writeln!(
            out,
            r#"<line x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="red" stroke-width="2" stroke-dasharray="4 3"/>"#,
            f.x(x1),
            f.y(y1),
            f.x(x2),
            f.y(y2)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn halfspace_picture() {
        let svg = render_set(&ColumnarSet::upper_halfspace(1, crate::ExtReal::ZERO).unwrap());
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("steelblue").count(), 1);
    }

    #[test]
    fn blocked_facets_are_dashed() {
        let grid = Grid::line_from_f64(&[f64::NEG_INFINITY, 0.0, 1.0, f64::INFINITY]).unwrap();
        let p = Profile::from_values(grid, &[0.3, 0.0, 0.6]).unwrap();
        let svg = render_scene(&p, None);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert_eq!(svg, render_scene(&p, None));
    }
}
