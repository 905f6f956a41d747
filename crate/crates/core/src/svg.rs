//! SVG 1.1 output for drawings and for carving trees.

use std::fmt::Write;

use crate::decomposition::{carving_cuts, CarvingDecomposition};
use crate::drawing::Drawing;
use crate::error::Result;
use crate::geometry::to_f64;
use crate::graph::{Graph, VertexKind};

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub radius: f64,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            margin: 24.0,
            radius: 5.0,
            labels: true,
        }
    }
}

fn header(out: &mut String, o: &SvgOptions) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = o.width,
        h = o.height
    );
}

/// Maps `[lo, hi]` onto `[a, b]`; a degenerate range goes to the middle.
fn scale(v: f64, lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        (a + b) / 2.0
    } else {
        a + (v - lo) / (hi - lo) * (b - a)
    }
}

/// Vertices as circles (dummies as small filled squares), edges as lines.
/// Coordinates are exact until this point; y grows upward.
pub fn export_svg(d: &Drawing, o: &SvgOptions) -> String {
    let g = d.graph();
    let pts: Vec<(f64, f64)> = d
        .positions()
        .iter()
        .map(|p| (to_f64(&p.x), to_f64(&p.y)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let map = |(x, y): (f64, f64)| {
        (
            scale(x, x0, x1, o.margin, o.width - o.margin),
            scale(y, y0, y1, o.height - o.margin, o.margin),
        )
    };
    let mut out = String::new();
    header(&mut out, o);
    if g.m() > 0 {
        let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
        for &(u, v) in g.edges() {
            let ((ax, ay), (bx, by)) = (map(pts[u]), map(pts[v]));
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }
    for v in 0..g.n() {
        let (x, y) = map(pts[v]);
        match g.kind(v) {
            VertexKind::Original => {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="white" stroke="black"/>"#,
                    r = o.radius
                );
                if o.labels {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.2}" y="{:.2}" font-size="10">{v}</text>"#,
                        x + o.radius + 1.0,
                        y - o.radius - 1.0
                    );
                }
            }
            VertexKind::Dummy { .. } => {
                let s = o.radius * 0.6;
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="red"/>"#,
                    x - s,
                    y - s,
                    2.0 * s,
                    2.0 * s
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Schematic of a carving tree hung from its first internal node: leaves
/// spread evenly in depth-first order, each tree edge drawn as thick as the
/// number of graph edges it cuts.
pub fn export_carving_svg(g: &Graph, cd: &CarvingDecomposition, o: &SvgOptions) -> Result<String> {
    let cuts = carving_cuts(g, cd)?;
    let t = &cd.tree;
    let root = (0..t.len()).find(|&v| cd.labels[v].is_none()).unwrap_or(0);
    let rooted = t.rooted(root);
    let leaves: Vec<usize> = rooted
        .order
        .iter()
        .copied()
        .filter(|&v| v != root && t.degree(v) <= 1)
        .collect();
    let mut xs = vec![0.0f64; t.len()];
    let mut count = vec![0usize; t.len()];
    let mut is_leaf = vec![false; t.len()];
    for (i, &l) in leaves.iter().enumerate() {
        xs[l] = i as f64;
        count[l] = 1;
        is_leaf[l] = true;
    }
    // parents take the mean of their leaves
    for &v in rooted.order.iter().rev() {
        let p = rooted.parent[v];
        if p != usize::MAX {
            xs[p] += xs[v] * count[v] as f64;
            count[p] += count[v];
        }
        if count[v] > 0 && !is_leaf[v] {
            xs[v] /= count[v] as f64;
        }
    }
    let depth = rooted.depth.iter().copied().max().unwrap_or(0) as f64;
    let span = leaves.len().saturating_sub(1) as f64;
    let at = |v: usize| {
        (
            scale(xs[v], 0.0, span, o.margin, o.width - o.margin),
            scale(
                rooted.depth[v] as f64,
                0.0,
                depth,
                o.margin,
                o.height - o.margin,
            ),
        )
    };
    let mut out = String::new();
    header(&mut out, o);
    let _ = writeln!(out, r#"<g stroke="steelblue" stroke-linecap="round">"#);
    for (&(a, b), &c) in t.edges().iter().zip(&cuts) {
        let ((ax, ay), (bx, by)) = (at(a), at(b));
        let _ = writeln!(
            out,
            r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke-width="{}"><title>{c}</title></line>"#,
            1 + 2 * c
        );
    }
    let _ = writeln!(out, "</g>");
    for v in 0..t.len() {
        let (x, y) = at(v);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{}" fill="black"/>"#,
            o.radius / 2.0
        );
        if let (Some(label), true) = (cd.labels[v], o.labels) {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{label}</text>"#,
                y + o.radius + 10.0
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Q};
    use crate::planarize::zarankiewicz_k3n;

    fn count(s: &str, tag: &str) -> usize {
        s.matches(&format!("<{tag} ")).count()
    }

    #[test]
    fn empty_graph_has_no_shapes() {
        let d = Drawing::new(Graph::empty(0), vec![]).unwrap();
        let s = export_svg(&d, &SvgOptions::default());
        assert!(s.contains("<svg"));
        assert_eq!(
            count(&s, "circle") + count(&s, "line") + count(&s, "rect"),
            0
        );
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let p = |x: i64, y: i64| Point::new(Q::from_integer(x.into()), Q::from_integer(y.into()));
        let d = Drawing::new(g, vec![p(0, 0), p(3, 1)]).unwrap();
        let s = export_svg(&d, &SvgOptions::default());
        assert_eq!(count(&s, "circle"), 2);
        assert_eq!(count(&s, "line"), 1);
    }

    #[test]
    fn zarankiewicz_drawing() {
        let d = zarankiewicz_k3n(11).unwrap();
        let s = export_svg(&d, &SvgOptions::default());
        assert_eq!(count(&s, "circle"), 14);
        assert_eq!(count(&s, "line"), 33);
        let (p, pd) =
            crate::drawing::planarize_drawing_full(&d, crate::par::Execution::Sequential).unwrap();
        let s = export_svg(&pd, &SvgOptions::default());
        assert_eq!(count(&s, "rect"), p.crossings());
        assert_eq!(count(&s, "rect"), 25);
    }

    #[test]
    fn carving_schematic() {
        let g = crate::generators::k3n(3).unwrap();
        let (_, cd) = crate::decomposition::exact_carving_width(&g).unwrap();
        let s = export_carving_svg(&g, &cd, &SvgOptions::default()).unwrap();
        assert_eq!(count(&s, "line"), cd.tree.edges().len());
        assert_eq!(count(&s, "circle"), cd.tree.len());
    }
}
