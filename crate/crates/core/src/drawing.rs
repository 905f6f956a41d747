//! Straight-line drawings with exact rational coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::LinearArrangement;
use crate::error::{Error, Result};
use crate::geometry::{
    self, contact, in_open_segment, overlap_at_shared, Point, SegmentContact, Q,
};
use crate::graph::{EdgeId, Graph, VertexId, VertexKind};
use crate::par::{self, Execution};
use crate::planarization::Planarization;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Drawing {
    graph: Graph,
    pos: Vec<Point>,
}

impl<'de> Deserialize<'de> for Drawing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            graph: Graph,
            pos: Vec<Point>,
        }
        let raw = Raw::deserialize(d)?;
        Drawing::new(raw.graph, raw.pos).map_err(serde::de::Error::custom)
    }
}

impl Drawing {
    /// Positions must be given for every vertex and be pairwise distinct.
    pub fn new(graph: Graph, pos: Vec<Point>) -> Result<Self> {
        if pos.len() != graph.n() {
            return Err(Error::invalid(format!(
                "{} positions for {} vertices",
                pos.len(),
                graph.n()
            )));
        }
        let mut idx: Vec<usize> = (0..pos.len()).collect();
        idx.sort_by(|&a, &b| pos[a].cmp(&pos[b]));
        for w in idx.windows(2) {
            if pos[w[0]] == pos[w[1]] {
                return Err(Error::invalid(format!(
                    "vertices {} and {} share position {}",
                    w[0].min(w[1]),
                    w[0].max(w[1]),
                    pos[w[0]]
                )));
            }
        }
        Ok(Self { graph, pos })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pos(&self, v: VertexId) -> &Point {
        &self.pos[v]
    }

    pub fn positions(&self) -> &[Point] {
        &self.pos
    }

    fn segment(&self, e: EdgeId) -> (&Point, &Point) {
        let (u, v) = self.graph.edge(e);
        (&self.pos[u], &self.pos[v])
    }

    /// Applies `x <- x + eps * y`.
    pub fn sheared(&self, eps: &Q) -> Drawing {
        let pos = self
            .pos
            .iter()
            .map(|p| Point::new(&p.x + eps * &p.y, p.y.clone()))
            .collect();
        Drawing {
            graph: self.graph.clone(),
            pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub edge_a: EdgeId,
    pub edge_b: EdgeId,
    pub point: Point,
}

/// Something with an x-coordinate: a vertex or a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Vertex(VertexId),
    Crossing(EdgeId, EdgeId),
}

/// A general-position violation, tagged by class (a)-(d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Violation {
    /// (a) two vertices or crossing points with the same x-coordinate.
    XTie {
        #[serde(with = "geometry::rational_serde")]
        x: Q,
        first: Feature,
        second: Feature,
    },
    /// (b) three or more segments through one point.
    TriplePoint { point: Point, edges: Vec<EdgeId> },
    /// (c) a vertex in the relative interior of a non-incident segment.
    VertexOnEdge { vertex: VertexId, edge: EdgeId },
    /// (d) two segments sharing a piece of positive length.
    Overlap { edge_a: EdgeId, edge_b: EdgeId },
}

impl Violation {
    pub fn class(&self) -> char {
        match self {
            Violation::XTie { .. } => 'a',
            Violation::TriplePoint { .. } => 'b',
            Violation::VertexOnEdge { .. } => 'c',
            Violation::Overlap { .. } => 'd',
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::XTie { x, first, second } => {
                write!(f, "(a) {first:?} and {second:?} share x = {x}")
            }
            Violation::TriplePoint { point, edges } => {
                write!(f, "(b) edges {edges:?} are concurrent at {point}")
            }
            Violation::VertexOnEdge { vertex, edge } => {
                write!(f, "(c) vertex {vertex} lies inside edge {edge}")
            }
            Violation::Overlap { edge_a, edge_b } => {
                write!(f, "(d) edges {edge_a} and {edge_b} overlap")
            }
        }
    }
}

/// Crossing events, or the first structural violation (classes b-d).
fn structural(d: &Drawing, exec: Execution) -> std::result::Result<Vec<CrossingEvent>, Violation> {
    let g = &d.graph;
    let m = g.m();
    let per_edge = par::map_range(exec, m, |a| {
        let (ua, va) = g.edge(a);
        let (pa, qa) = d.segment(a);
        let mut overlap = None;
        let mut events = Vec::new();
        for b in a + 1..m {
            let (ub, vb) = g.edge(b);
            let (pb, qb) = d.segment(b);
            let shared = [ua, va].into_iter().find(|&x| x == ub || x == vb);
            if let Some(s) = shared {
                let other = |u, v| if u == s { v } else { u };
                let (oa, ob) = (other(ua, va), other(ub, vb));
                if overlap.is_none() && overlap_at_shared(&d.pos[s], &d.pos[oa], &d.pos[ob]) {
                    overlap = Some(b);
                }
                continue;
            }
            match contact(pa, qa, pb, qb) {
                SegmentContact::Overlap if overlap.is_none() => overlap = Some(b),
                SegmentContact::Proper(point) => events.push(CrossingEvent {
                    edge_a: a,
                    edge_b: b,
                    point,
                }),
                _ => {}
            }
        }
        let on_edge =
            (0..g.n()).find(|&w| w != ua && w != va && in_open_segment(&d.pos[w], pa, qa));
        (overlap, on_edge, events)
    });

    if let Some((a, (o, _, _))) = per_edge.iter().enumerate().find(|(_, r)| r.0.is_some()) {
        return Err(Violation::Overlap {
            edge_a: a,
            edge_b: o.unwrap(),
        });
    }
    if let Some((e, w)) = per_edge
        .iter()
        .enumerate()
        .find_map(|(e, r)| r.1.map(|w| (e, w)))
    {
        return Err(Violation::VertexOnEdge { vertex: w, edge: e });
    }
    let events: Vec<CrossingEvent> = per_edge.into_iter().flat_map(|r| r.2).collect();

    let mut by_point: Vec<usize> = (0..events.len()).collect();
    by_point.sort_by(|&i, &j| events[i].point.cmp(&events[j].point));
    let mut first: Option<(Point, Vec<EdgeId>)> = None;
    for group in by_point.chunk_by(|&i, &j| events[i].point == events[j].point) {
        if group.len() > 1 {
            let mut edges: Vec<EdgeId> = group
                .iter()
                .flat_map(|&i| [events[i].edge_a, events[i].edge_b])
                .collect();
            edges.sort_unstable();
            edges.dedup();
            // report the violation whose smallest edge pair comes first
            let better = first.as_ref().is_none_or(|(_, f)| edges < *f);
            if better {
                first = Some((events[group[0]].point.clone(), edges));
            }
        }
    }
    if let Some((point, edges)) = first {
        return Err(Violation::TriplePoint { point, edges });
    }
    Ok(events)
}

fn x_tie(d: &Drawing, events: &[CrossingEvent]) -> Option<Violation> {
    let mut features: Vec<(&Point, Feature)> = d
        .pos
        .iter()
        .enumerate()
        .map(|(v, p)| (p, Feature::Vertex(v)))
        .chain(
            events
                .iter()
                .map(|e| (&e.point, Feature::Crossing(e.edge_a, e.edge_b))),
        )
        .collect();
    features.sort_by(|a, b| a.0.cmp(b.0));
    features
        .windows(2)
        .find(|w| w[0].0.x == w[1].0.x)
        .map(|w| Violation::XTie {
            x: w[0].0.x.clone(),
            first: w[0].1,
            second: w[1].1,
        })
}

/// Checks general position. Structural violations (overlap, vertex on edge,
/// triple point) are reported before x-coordinate ties.
pub fn check_general_position(d: &Drawing) -> std::result::Result<(), Violation> {
    check_general_position_with(d, Execution::default())
}

pub fn check_general_position_with(
    d: &Drawing,
    exec: Execution,
) -> std::result::Result<(), Violation> {
    let events = structural(d, exec)?;
    match x_tie(d, &events) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// All proper crossings, sorted by edge pair. Ties in x are allowed; the
/// structural conditions are not.
pub fn crossings(d: &Drawing) -> Result<Vec<CrossingEvent>> {
    crossings_with(d, Execution::default())
}

pub fn crossings_with(d: &Drawing, exec: Execution) -> Result<Vec<CrossingEvent>> {
    structural(d, exec).map_err(|v| Error::Degenerate(Box::new(v)))
}

/// Vertices are the edges of the drawn graph; edges are crossing pairs.
pub fn crossing_graph(d: &Drawing) -> Result<Graph> {
    let events = crossings(d)?;
    Ok(Graph::new(
        d.graph.m(),
        events.iter().map(|e| (e.edge_a, e.edge_b)),
    )?)
}

/// Replaces every crossing by a dummy vertex. Dummy `n + i` stands for the
/// `i`-th crossing event.
pub fn planarize_drawing(d: &Drawing) -> Result<Planarization> {
    planarize_drawing_full(d, Execution::default()).map(|(p, _)| p)
}

/// Planarization plus the drawing of the planar graph (dummies at their
/// crossing points).
pub fn planarize_drawing_full(d: &Drawing, exec: Execution) -> Result<(Planarization, Drawing)> {
    let events = crossings_with(d, exec)?;
    let g = &d.graph;
    let n = g.n();
    let mut on_edge: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
    for (i, e) in events.iter().enumerate() {
        on_edge[e.edge_a].push(i);
        on_edge[e.edge_b].push(i);
    }
    let chains: Vec<Vec<VertexId>> = on_edge
        .into_iter()
        .enumerate()
        .map(|(e, mut ids)| {
            let (u, v) = g.edge(e);
            let (pu, pv) = (&d.pos[u], &d.pos[v]);
            let mut keyed: Vec<(Q, usize)> = ids
                .drain(..)
                .map(|i| (geometry::along(&events[i].point, pu, pv), i))
                .collect();
            keyed.sort();
            std::iter::once(u)
                .chain(keyed.into_iter().map(|(_, i)| n + i))
                .chain(std::iter::once(v))
                .collect()
        })
        .collect();
    let mut kinds = g.kinds().to_vec();
    kinds.extend(events.iter().map(|e| VertexKind::Dummy {
        edge_a: e.edge_a,
        edge_b: e.edge_b,
    }));
    let planar = Planarization::from_chains(n, kinds, chains)?;
    let pos = d
        .pos
        .iter()
        .cloned()
        .chain(events.into_iter().map(|e| e.point))
        .collect();
    let drawn = Drawing::new(planar.planar.clone(), pos)?;
    Ok((planar, drawn))
}

/// Vertices sorted by x-coordinate; fails on ties.
pub fn x_order(d: &Drawing) -> Result<LinearArrangement> {
    let mut order: Vec<VertexId> = (0..d.graph.n()).collect();
    order.sort_by(|&a, &b| d.pos[a].x.cmp(&d.pos[b].x));
    if let Some(w) = order.windows(2).find(|w| d.pos[w[0]].x == d.pos[w[1]].x) {
        return Err(Error::Degenerate(Box::new(Violation::XTie {
            x: d.pos[w[0]].x.clone(),
            first: Feature::Vertex(w[0].min(w[1])),
            second: Feature::Vertex(w[0].max(w[1])),
        })));
    }
    LinearArrangement::new(order)
}

/// Removes x-ties by the shear `x <- x + eps*y` with `eps` the largest power
/// of 1/2 that keeps the sheared x-order of all vertices and crossings equal
/// to their lexicographic `(x, y)` order. Returns the drawing unchanged (and
/// `eps = 0`) when it has no ties.
pub fn shear_to_general_position(d: &Drawing, exec: Execution) -> Result<(Drawing, Q)> {
    let events = crossings_with(d, exec)?;
    if x_tie(d, &events).is_none() {
        return Ok((d.clone(), Q::from_integer(0.into())));
    }
    let mut pts: Vec<&Point> = d
        .pos
        .iter()
        .chain(events.iter().map(|e| &e.point))
        .collect();
    pts.sort();
    let bound = pts
        .windows(2)
        .filter(|w| w[0].x < w[1].x && w[0].y > w[1].y)
        .map(|w| (&w[1].x - &w[0].x) / (&w[0].y - &w[1].y))
        .min();
    let mut eps = match bound {
        Some(b) => geometry::dyadic_below(&b),
        None => Q::from_integer(1.into()),
    };
    for _ in 0..64 {
        let s = d.sheared(&eps);
        match check_general_position_with(&s, exec) {
            Ok(()) => return Ok((s, eps)),
            Err(_) => eps /= Q::from_integer(2.into()),
        }
    }
    Err(Error::internal(
        "shear search did not reach general position",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn drawing(n: usize, edges: &[(usize, usize)], pos: &[(i64, i64)]) -> Drawing {
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        Drawing::new(g, pos.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
    }

    fn x_drawing() -> Drawing {
        drawing(4, &[(0, 1), (2, 3)], &[(0, 0), (2, 2), (0, 2), (2, 0)])
    }

    #[test]
    fn parallel_segments_do_not_cross() {
        let d = drawing(4, &[(0, 1), (2, 3)], &[(0, 0), (2, 0), (0, 1), (2, 1)]);
        assert!(crossings(&d).unwrap().is_empty());
    }

    #[test]
    fn x_has_one_crossing() {
        let ev = crossings(&x_drawing()).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].point, Point::int(1, 1));
        assert_eq!((ev[0].edge_a, ev[0].edge_b), (0, 1));
    }

    #[test]
    fn x_planarization() {
        let p = planarize_drawing(&x_drawing()).unwrap();
        assert_eq!((p.planar.n(), p.planar.m()), (5, 4));
        assert_eq!(p.planar.degree(4), 4);
        assert_eq!(p.chains[0], vec![0, 4, 1]);
        assert_eq!(p.contract().unwrap(), *x_drawing().graph());
    }

    #[test]
    fn planar_drawing_has_no_dummies() {
        let d = drawing(3, &[(0, 1), (1, 2), (0, 2)], &[(0, 0), (1, 0), (0, 1)]);
        let p = planarize_drawing(&d).unwrap();
        assert_eq!(p.planar, *d.graph());
        assert!(crossing_graph(&d).unwrap().m() == 0);
    }

    #[test]
    fn vertical_points_tie() {
        let d = drawing(3, &[], &[(0, 0), (0, 1), (0, 2)]);
        let v = check_general_position(&d).unwrap_err();
        assert_eq!(v.class(), 'a');
    }

    #[test]
    fn hexagon_diagonals_are_concurrent() {
        // affine image of a regular hexagon; concurrency is affine-invariant
        let d = drawing(
            6,
            &[(0, 3), (1, 4), (2, 5)],
            &[(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)],
        );
        let v = check_general_position(&d).unwrap_err();
        assert_eq!(v.class(), 'b');
        assert!(matches!(v, Violation::TriplePoint { edges, .. } if edges == vec![0, 1, 2]));
        assert!(crossings(&d).is_err());
    }

    #[test]
    fn vertex_on_edge_and_overlap() {
        let d = drawing(3, &[(0, 1)], &[(0, 0), (2, 0), (1, 0)]);
        assert_eq!(check_general_position(&d).unwrap_err().class(), 'c');
        let d = drawing(4, &[(0, 1), (2, 3)], &[(0, 0), (2, 0), (1, 0), (3, 0)]);
        assert_eq!(check_general_position(&d).unwrap_err().class(), 'd');
        let d = drawing(3, &[(0, 1), (0, 2)], &[(0, 0), (1, 1), (2, 2)]);
        // shared endpoint, same ray: vertex 1 is also inside edge (0,2)
        assert_eq!(check_general_position(&d).unwrap_err().class(), 'd');
    }

    #[test]
    fn shear_breaks_ties() {
        let (s, eps) = shear_to_general_position(&x_drawing(), Execution::Sequential).unwrap();
        assert!(eps > Q::from_integer(0.into()));
        assert!(check_general_position(&s).is_ok());
        assert_eq!(crossings(&s).unwrap().len(), 1);
        // lexicographic order preserved: (0,0) < (0,2) < (1,1) < (2,0) < (2,2)
        assert_eq!(x_order(&s).unwrap().order(), &[0, 2, 3, 1]);
        let d = drawing(2, &[(0, 1)], &[(0, 0), (1, 3)]);
        let (_, eps) = shear_to_general_position(&d, Execution::Sequential).unwrap();
        assert_eq!(eps, ratio(0, 1));
    }

    #[test]
    fn drawing_json_round_trip() {
        let d = x_drawing();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Drawing>(&s).unwrap(), d);
    }

    #[test]
    fn coincident_vertices_rejected() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert!(Drawing::new(g, vec![Point::int(0, 0), Point::int(0, 0)]).is_err());
    }
}
