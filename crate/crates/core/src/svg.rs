//! Static SVG figures of a sample, its triangulation and its sewings.

use std::fmt::Write as _;

use crate::delaunay::Triangulation;
use crate::geom::{Face, Label, Point2, Rect};
use crate::sewing::Sewing;

#[derive(Clone, Copy, Debug)]
pub struct SvgOptions {
    /// Output width in pixels; the height follows the window's aspect ratio.
    pub width: f64,
    pub draw_triangles: bool,
    pub draw_points: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 800.0,
            draw_triangles: true,
            draw_points: true,
        }
    }
}

struct Frame {
    window: Rect,
    scale: f64,
}

impl Frame {
    fn map(&self, p: &Point2) -> (f64, f64) {
        (
            (p.x - self.window.x_min) * self.scale,
            (self.window.y_max - p.y) * self.scale,
        )
    }
}

fn faces_path(out: &mut String, frame: &Frame, points: &[Point2], faces: &[Face], stroke: &str, width: f64) {
    let _ = write!(out, r#"<path fill="none" stroke="{stroke}" stroke-width="{width}" d=""#);
    for f in faces {
        let [a, b] = f.vertices();
        let (x0, y0) = frame.map(&points[a as usize]);
        let (x1, y1) = frame.map(&points[b as usize]);
        let _ = write!(out, "M{x0:.2} {y0:.2}L{x1:.2} {y1:.2}");
    }
    out.push_str("\"/>\n");
}

/// Inner sewing in green, outer in red, over the (optional) triangulation.
pub fn render(
    window: &Rect,
    tri: &Triangulation,
    labels: &[Label],
    sewing: &Sewing,
    options: &SvgOptions,
) -> String {
    let frame = Frame {
        window: *window,
        scale: options.width / window.width(),
    };
    let height = window.height() * frame.scale;
    let points = tri.points();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{height:.0}" viewBox="0 0 {:.2} {height:.2}">"#,
        options.width, options.width
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if options.draw_triangles {
        let mut edges = Vec::new();
        for t in 0..tri.len() {
            for f in tri.faces_of(t) {
                edges.push(f);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        faces_path(&mut out, &frame, points, &edges, "#c8c8c8", 0.5);
    }
    if options.draw_points {
        for (p, l) in points.iter().zip(labels) {
            let (x, y) = frame.map(p);
            let fill = if l.is_inside() { "#1f77b4" } else { "#ff7f0e" };
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.2" fill="{fill}"/>"#);
        }
    }
    faces_path(&mut out, &frame, points, &sewing.inner_faces, "#2ca02c", 1.5);
    faces_path(&mut out, &frame, points, &sewing.outer_faces, "#d62728", 1.5);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Label::{Inside as I, Outside as O};

    #[test]
    fn square_figure_is_well_formed() {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let tri = Triangulation::build(&pts).unwrap();
        let labels = [I, I, O, O];
        let sewing = Sewing::extract(&tri, &labels).unwrap();
        let w = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let svg = render(&w, &tri, &labels, &sewing, &SvgOptions::default());
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("#2ca02c") && svg.contains("#d62728"));
    }
}
