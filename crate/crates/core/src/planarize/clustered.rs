use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::convex::convex_drawing;
use super::guided::{subdivide, trivial_report, Embedding, RectangleRouting};
use super::{PlanarizationReport, Witness};
use crate::decomposition::{
    restricted_partition, validate_carving, CarvingDecomposition, Editable, RestrictedPartition,
};
use crate::drawing::{planarize_drawing_full, x_order};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, VertexKind};
use crate::par::{self, Execution};
use crate::planarization::Planarization;

/// Per-cluster figures of a clustered planarization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterStats {
    /// Carving-tree nodes in the cluster.
    pub nodes: Vec<usize>,
    pub vertices: usize,
    /// Chords joining two vertices of the cluster.
    pub internal_edges: usize,
    /// All chords drawn in the cluster's disk.
    pub wires: usize,
    pub crossings: usize,
    /// Tree edges leaving the cluster.
    pub boundary: usize,
}

/// `max(2, ceil(sqrt(w)))`.
pub fn default_z(w: usize) -> usize {
    let mut r = (w as f64).sqrt() as usize;
    while r * r < w {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= w {
        r -= 1;
    }
    r.max(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Rim {
    Leaf(VertexId),
    /// Wire `e` where it meets the rectangle above tree node `c`.
    Port(usize, EdgeId),
}

enum Step {
    Chord(usize, usize),
    Rect(usize, bool),
}

struct Cluster {
    rim: Vec<Rim>,
    index: HashMap<Rim, usize>,
    chords: Vec<(usize, usize, EdgeId)>,
}

struct Drawn {
    /// Crossing chord pairs, by local dummy.
    crossings: Vec<(usize, usize)>,
    /// Local dummies along each chord, from its first rim point.
    along: Vec<Vec<usize>>,
    /// Rim points and local dummies (`rim.len() + i`) by x.
    order: Vec<usize>,
}

pub fn clustered_carving(
    g: &Graph,
    cd: &CarvingDecomposition,
    z: usize,
) -> Result<PlanarizationReport> {
    clustered_carving_with(g, cd, z, Execution::default()).map(|(r, _)| r)
}

/// Contracts the blocks of a restricted partition of the carving tree into
/// disks. Inside a disk the rim points (cluster vertices and the wires at
/// each boundary rectangle, in embedding order) lie on a convex curve and
/// every wire is a straight chord; rectangles between disks are routed as in
/// the guided planarization. The output carving hangs a caterpillar over the
/// x-order of each disk's planarized drawing, each boundary bundle attached
/// where its first port occurs, and subdivides the rectangles.
pub fn clustered_carving_with(
    g: &Graph,
    cd: &CarvingDecomposition,
    z: usize,
    exec: Execution,
) -> Result<(PlanarizationReport, Vec<ClusterStats>)> {
    if z == 0 {
        return Err(Error::invalid("cluster order z must be at least 1"));
    }
    let claimed = validate_carving(g, cd)?;
    let Some(emb) = Embedding::new(g, cd)? else {
        return Ok((trivial_report("clustered", g, cd, claimed)?, Vec::new()));
    };
    emb.check_disks()?;
    let part = restricted_partition(&cd.tree, z)?;
    let block = part.block_of(cd.tree.len());
    let boundary = |c: usize| c != emb.root && block[c] != block[emb.parent[c]];

    let rects: Vec<usize> = emb
        .rectangles()
        .into_iter()
        .filter(|&c| boundary(c))
        .collect();
    let routings: Vec<RectangleRouting> = par::map(exec, &rects, |&c| {
        RectangleRouting::new(
            (c, emb.parent[c]),
            emb.bottom[c].clone(),
            emb.top[c].clone(),
        )
    });

    let mut clusters: Vec<Cluster> = part
        .blocks
        .iter()
        .map(|nodes| {
            let top = *nodes
                .iter()
                .min_by_key(|&&v| emb.depth[v])
                .expect("blocks are non-empty");
            let mut rim = Vec::new();
            contour(&emb, cd, &block, top, &mut rim);
            if top != emb.root {
                rim.extend(emb.bottom[top].iter().rev().map(|&e| Rim::Port(top, e)));
            }
            let index = rim.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            Cluster {
                rim,
                index,
                chords: Vec::new(),
            }
        })
        .collect();

    let mut plans: Vec<Vec<Step>> = Vec::with_capacity(g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (up, down) = emb.path(u, v);
        let lca = emb.parent[*up.last().expect("distinct leaves")];
        let seq: Vec<usize> = up.iter().copied().chain([lca]).chain(down).collect();
        let mut plan = Vec::new();
        let mut start = Rim::Leaf(u);
        let mut chord = |b: usize, from: Rim, to: Rim, plan: &mut Vec<Step>| {
            let cl = &mut clusters[b];
            cl.chords.push((cl.index[&from], cl.index[&to], e));
            plan.push(Step::Chord(b, cl.chords.len() - 1));
        };
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            if block[a] == block[b] {
                continue;
            }
            let climbing = emb.parent[a] == b;
            let c = if climbing { a } else { b };
            chord(block[a], start, Rim::Port(c, e), &mut plan);
            plan.push(Step::Rect(c, climbing));
            start = Rim::Port(c, e);
        }
        chord(
            block[*seq.last().expect("non-empty path")],
            start,
            Rim::Leaf(v),
            &mut plan,
        );
        plans.push(plan);
    }

    let drawn: Vec<Drawn> = par::map(exec, &clusters, |cl| {
        draw_cluster(cl, Execution::Sequential)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    // global dummy ids: clusters in block order, then rectangles
    let n = g.n();
    let mut kinds = vec![VertexKind::Original; n];
    let mut local_to_global: Vec<Vec<VertexId>> = Vec::with_capacity(clusters.len());
    for (cl, dr) in clusters.iter().zip(&drawn) {
        let ids = dr
            .crossings
            .iter()
            .map(|&(a, b)| {
                let (ea, eb) = (cl.chords[a].2, cl.chords[b].2);
                kinds.push(VertexKind::Dummy {
                    edge_a: ea.min(eb),
                    edge_b: ea.max(eb),
                });
                kinds.len() - 1
            })
            .collect();
        local_to_global.push(ids);
    }
    let mut met: HashMap<(usize, EdgeId), Vec<VertexId>> = HashMap::new();
    let mut spines = Vec::with_capacity(routings.len());
    for r in &routings {
        let mut spine = Vec::new();
        for (a, b) in r.swaps() {
            let d = kinds.len();
            kinds.push(VertexKind::Dummy {
                edge_a: a.min(b),
                edge_b: a.max(b),
            });
            met.entry((r.tree_edge.0, a)).or_default().push(d);
            met.entry((r.tree_edge.0, b)).or_default().push(d);
            spine.push(d);
        }
        spines.push(spine);
    }

    let chains: Vec<Vec<VertexId>> = plans
        .iter()
        .enumerate()
        .map(|(e, plan)| {
            let (u, v) = g.edge(e);
            let mut chain = vec![u];
            for step in plan {
                match *step {
                    Step::Chord(b, k) => {
                        chain.extend(drawn[b].along[k].iter().map(|&d| local_to_global[b][d]))
                    }
                    Step::Rect(c, climbing) => {
                        if let Some(ds) = met.get(&(c, e)) {
                            if climbing {
                                chain.extend(ds);
                            } else {
                                chain.extend(ds.iter().rev());
                            }
                        }
                    }
                }
            }
            chain.push(v);
            chain
        })
        .collect();
    let planarization = Planarization::from_chains(n, kinds, chains)?;

    let mut ed = Editable {
        adj: Vec::new(),
        labels: Vec::new(),
        alive: Vec::new(),
    };
    let mut stubs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut stats = Vec::with_capacity(clusters.len());
    for (b, (cl, dr)) in clusters.iter().zip(&drawn).enumerate() {
        let mut items = Vec::new();
        for &x in &dr.order {
            match cl.rim.get(x) {
                Some(Rim::Leaf(v)) => items.push(ed.add_node(Some(*v))),
                Some(Rim::Port(c, _)) => {
                    if let std::collections::hash_map::Entry::Vacant(slot) = stubs.entry((b, *c)) {
                        let s = ed.add_node(None);
                        slot.insert(s);
                        items.push(s);
                    }
                }
                None => items.push(ed.add_node(Some(local_to_global[b][x - cl.rim.len()]))),
            }
        }
        let anchors = anchors_of(&emb, &part, &block, b);
        for &c in &anchors {
            if let std::collections::hash_map::Entry::Vacant(slot) = stubs.entry((b, c)) {
                let s = ed.add_node(None);
                slot.insert(s);
                items.push(s);
            }
        }
        ed.caterpillar(&items);
        stats.push(ClusterStats {
            nodes: part.blocks[b].clone(),
            vertices: cl.rim.iter().filter(|p| matches!(p, Rim::Leaf(_))).count(),
            internal_edges: cl
                .chords
                .iter()
                .filter(|&&(x, y, _)| {
                    matches!((cl.rim[x], cl.rim[y]), (Rim::Leaf(_), Rim::Leaf(_)))
                })
                .count(),
            wires: cl.chords.len(),
            crossings: dr.crossings.len(),
            boundary: anchors.len(),
        });
    }
    for (r, spine) in routings.iter().zip(&spines) {
        let (c, p) = r.tree_edge;
        let (low, high) = (stubs[&(block[c], c)], stubs[&(block[p], c)]);
        ed.link(low, high);
        subdivide(&mut ed, (low, high), spine);
    }
    ed.tidy();
    let (tree, labels) = ed.finish()?;
    let out = CarvingDecomposition::new(tree, labels);
    let validated = validate_carving(&planarization.planar, &out)?;
    let report = PlanarizationReport {
        strategy: "clustered".into(),
        crossings_added: planarization.crossings(),
        planarization,
        witness: Witness::Carving(out),
        claimed_width: claimed,
        validated_width: validated,
        routings,
    };
    Ok((report, stats))
}

/// Leaves and boundary port bundles of the cluster below `v`, left to right.
fn contour(
    emb: &Embedding,
    cd: &CarvingDecomposition,
    block: &[usize],
    v: usize,
    out: &mut Vec<Rim>,
) {
    if let Some(x) = cd.labels[v] {
        out.push(Rim::Leaf(x));
        return;
    }
    for &c in &emb.children[v] {
        if block[c] == block[v] {
            contour(emb, cd, block, c, out);
        } else {
            out.extend(emb.top[c].iter().map(|&e| Rim::Port(c, e)));
        }
    }
}

/// Tree edges leaving block `b`, named by their child node.
fn anchors_of(
    emb: &Embedding,
    part: &RestrictedPartition,
    block: &[usize],
    b: usize,
) -> Vec<usize> {
    let mut out = Vec::new();
    for &x in &part.blocks[b] {
        if x != emb.root && block[emb.parent[x]] != b {
            out.push(x);
        }
        out.extend(emb.children[x].iter().copied().filter(|&c| block[c] != b));
    }
    out.sort_unstable();
    out
}

/// Chord pairs whose rim positions interleave.
fn interleaving(chords: &[(usize, usize, EdgeId)]) -> usize {
    let span: Vec<(usize, usize)> = chords
        .iter()
        .map(|&(a, b, _)| (a.min(b), a.max(b)))
        .collect();
    let mut count = 0;
    for (i, &(a, b)) in span.iter().enumerate() {
        for &(c, d) in &span[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                count += 1;
            }
        }
    }
    count
}

fn draw_cluster(cl: &Cluster, exec: Execution) -> Result<Drawn> {
    let p = cl.rim.len();
    let cg = Graph::new(p, cl.chords.iter().map(|&(a, b, _)| (a, b)))?;
    let positions: Vec<usize> = (0..p).collect();
    let d = convex_drawing(&cg, &positions, exec)?;
    let (pl, pd) = planarize_drawing_full(&d, exec)?;
    let expected = interleaving(&cl.chords);
    if pl.crossings() != expected {
        return Err(Error::internal(format!(
            "cluster drawing has {} crossings, rim order gives {expected}",
            pl.crossings()
        )));
    }
    let edge_of: Vec<EdgeId> = cl
        .chords
        .iter()
        .map(|&(a, b, _)| cg.edge_id(a, b).expect("chord drawn"))
        .collect();
    let to_chord: HashMap<EdgeId, usize> =
        edge_of.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let crossings = pl
        .dummy_of
        .iter()
        .map(|&(_, a, b)| (to_chord[&a], to_chord[&b]))
        .collect();
    let along = cl
        .chords
        .iter()
        .zip(&edge_of)
        .map(|(&(a, b, _), &e)| {
            let chain = &pl.chains[e];
            let mut inner: Vec<usize> = chain[1..chain.len() - 1].iter().map(|&x| x - p).collect();
            if a > b {
                inner.reverse();
            }
            inner
        })
        .collect();
    let order = x_order(&pd)?.order().to_vec();
    Ok(Drawn {
        crossings,
        along,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{exact_carving_width, random_carving};
    use crate::generators::*;

    fn check(
        g: &Graph,
        cd: &CarvingDecomposition,
        z: usize,
    ) -> (PlanarizationReport, Vec<ClusterStats>) {
        let w = validate_carving(g, cd).unwrap();
        let (r, stats) = clustered_carving_with(g, cd, z, Execution::default()).unwrap();
        assert!(r.planarization.is_planar(), "z = {z}");
        assert_eq!(&r.planarization.contract().unwrap(), g);
        for s in &stats {
            assert!(s.crossings <= s.wires * s.wires.saturating_sub(1) / 2);
            assert!(s.wires <= 2 * w + s.internal_edges);
        }
        let inner: usize = stats.iter().map(|s| s.crossings).sum();
        let outer: usize = r.routings.iter().map(|x| x.transpositions.len()).sum();
        assert_eq!(inner + outer, r.crossings_added);
        (r, stats)
    }

    #[test]
    fn default_order() {
        assert_eq!(default_z(1), 2);
        assert_eq!(default_z(4), 2);
        assert_eq!(default_z(5), 3);
        assert_eq!(default_z(9), 3);
        assert_eq!(default_z(10), 4);
    }

    #[test]
    fn k33_small_clusters() {
        let g = k3n(3).unwrap();
        let (_, cd) = exact_carving_width(&g).unwrap();
        for z in 1..=12 {
            check(&g, &cd, z);
        }
    }

    #[test]
    fn one_cluster_is_a_convex_drawing() {
        let g = complete(5).unwrap();
        let (_, cd) = exact_carving_width(&g).unwrap();
        let (r, stats) = check(&g, &cd, 100);
        assert_eq!(stats.len(), 1);
        assert!(r.routings.is_empty());
        assert_eq!(r.crossings_added, 5);
    }

    #[test]
    fn random_inputs() {
        for seed in 0..10 {
            let g = random_connected(11, 9, seed).unwrap();
            let cd = random_carving(&g, seed);
            for z in [1, 2, 3, 5] {
                check(&g, &cd, z);
            }
        }
    }

    #[test]
    fn clique_family() {
        let g = disjoint_cliques(4, 4).unwrap();
        let cd = random_carving(&g, 2);
        check(&g, &cd, 3);
    }
}
