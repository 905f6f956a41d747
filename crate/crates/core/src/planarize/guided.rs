use std::cmp::Reverse;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{PlanarizationReport, Witness};
use crate::decomposition::{validate_carving, CarvingDecomposition, Editable};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, VertexKind};
use crate::par::{self, Execution};
use crate::planarization::Planarization;

/// Wires crossing one tree edge, from the child end (entry) to the parent end
/// (exit), realized as a sequence of adjacent swaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleRouting {
    /// `(child, parent)` in the rooted carving tree.
    pub tree_edge: (usize, usize),
    /// Graph edges through the rectangle, by id.
    pub wires: Vec<EdgeId>,
    pub entry_order: Vec<EdgeId>,
    pub exit_order: Vec<EdgeId>,
    /// Position `i` swaps the wires at `i` and `i + 1`.
    pub transpositions: Vec<usize>,
}

impl RectangleRouting {
    /// Insertion-sort schedule from `entry` to `exit`; one swap per inversion.
    pub fn new(tree_edge: (usize, usize), entry: Vec<EdgeId>, exit: Vec<EdgeId>) -> Self {
        let rank: HashMap<EdgeId, usize> = exit.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut cur = entry.clone();
        let mut transpositions = Vec::new();
        for i in 1..cur.len() {
            let mut j = i;
            while j > 0 && rank[&cur[j - 1]] > rank[&cur[j]] {
                cur.swap(j - 1, j);
                transpositions.push(j - 1);
                j -= 1;
            }
        }
        let mut wires = entry.clone();
        wires.sort_unstable();
        Self {
            tree_edge,
            wires,
            entry_order: entry,
            exit_order: exit,
            transpositions,
        }
    }

    /// Entry order after all swaps.
    pub fn apply(&self) -> Vec<EdgeId> {
        let mut cur = self.entry_order.clone();
        for &i in &self.transpositions {
            cur.swap(i, i + 1);
        }
        cur
    }

    /// Crossing pairs in schedule order, as `(left, right)` before the swap.
    pub fn swaps(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut cur = self.entry_order.clone();
        self.transpositions
            .iter()
            .map(|&i| {
                let pair = (cur[i], cur[i + 1]);
                cur.swap(i, i + 1);
                pair
            })
            .collect()
    }
}

/// Number of pairs ordered differently by two permutations of one set.
pub fn inversions(a: &[EdgeId], b: &[EdgeId]) -> usize {
    let rank: HashMap<EdgeId, usize> = b.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let r: Vec<usize> = a.iter().map(|e| rank[e]).collect();
    (0..r.len())
        .map(|i| r[i + 1..].iter().filter(|&&x| x < r[i]).count())
        .sum()
}

/// Planar embedding of a carving tree with the wire order at both ends of
/// every tree edge.
///
/// The tree hangs from its smallest internal node; children are ordered by
/// the smallest vertex below them and leaves are ranked left to right. At the
/// parent end of edge `c`, wires heading left come first, those turning into
/// a sibling before those continuing up, nearer siblings outermost; wires
/// heading right follow, by decreasing destination rank.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub root: usize,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Preorder, children in embedding order.
    pub order: Vec<usize>,
    /// Tree node of every vertex.
    pub leaf_of: Vec<usize>,
    /// Left-to-right rank of every vertex.
    pub rank: Vec<usize>,
    /// Leaf-rank interval of every subtree.
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
    /// Wire order at the parent end of the edge above each node.
    pub top: Vec<Vec<EdgeId>>,
    /// Wire order at the child end of the edge above each node.
    pub bottom: Vec<Vec<EdgeId>>,
}

impl Embedding {
    /// `None` when the tree has no internal node.
    pub fn new(g: &Graph, cd: &CarvingDecomposition) -> Result<Option<Self>> {
        let leaf_of = cd.leaf_of(g.n())?;
        let tree = &cd.tree;
        let Some(root) = (0..tree.len()).find(|&v| cd.labels[v].is_none()) else {
            return Ok(None);
        };
        let rooted = tree.rooted(root);
        let nodes = tree.len();
        let mut min_label = vec![usize::MAX; nodes];
        for &v in rooted.order.iter().rev() {
            if let Some(x) = cd.labels[v] {
                min_label[v] = x;
            }
            if v != root {
                let p = rooted.parent[v];
                min_label[p] = min_label[p].min(min_label[v]);
            }
        }
        let mut children = vec![Vec::new(); nodes];
        for &v in &rooted.order {
            if v != root {
                children[rooted.parent[v]].push(v);
            }
        }
        for c in &mut children {
            c.sort_by_key(|&v| min_label[v]);
        }
        let mut order = Vec::with_capacity(nodes);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(children[v].iter().rev());
        }
        let mut rank = vec![0; g.n()];
        let mut next = 0;
        for &v in &order {
            if let Some(x) = cd.labels[v] {
                rank[x] = next;
                next += 1;
            }
        }
        let (mut lo, mut hi) = (vec![usize::MAX; nodes], vec![0; nodes]);
        for &v in order.iter().rev() {
            if let Some(x) = cd.labels[v] {
                lo[v] = rank[x];
                hi[v] = rank[x];
            }
            if v != root {
                let p = rooted.parent[v];
                lo[p] = lo[p].min(lo[v]);
                hi[p] = hi[p].max(hi[v]);
            }
        }
        let mut emb = Embedding {
            root,
            parent: rooted.parent,
            children,
            depth: rooted.depth,
            order,
            leaf_of,
            rank,
            lo,
            hi,
            top: vec![Vec::new(); nodes],
            bottom: vec![Vec::new(); nodes],
        };
        emb.route(g);
        Ok(Some(emb))
    }

    fn inside(&self, c: usize, v: VertexId) -> bool {
        (self.lo[c]..=self.hi[c]).contains(&self.rank[v])
    }

    /// Ancestor of `v` at depth `d`.
    fn ancestor(&self, mut v: usize, d: usize) -> usize {
        while self.depth[v] > d {
            v = self.parent[v];
        }
        v
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        a
    }

    fn route(&mut self, g: &Graph) {
        let nodes = self.parent.len();
        let mut through: Vec<Vec<EdgeId>> = vec![Vec::new(); nodes];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = (self.leaf_of[u], self.leaf_of[v]);
            let l = self.lca(a, b);
            for mut x in [a, b] {
                while x != l {
                    through[x].push(e);
                    x = self.parent[x];
                }
            }
        }
        for c in 0..nodes {
            if c == self.root {
                continue;
            }
            let mut keyed: Vec<_> = through[c]
                .iter()
                .map(|&e| {
                    let (u, v) = g.edge(e);
                    let (x, r) = if self.inside(c, u) { (u, v) } else { (v, u) };
                    let (rx, rr) = (self.rank[x], self.rank[r]);
                    let key = if rr < self.lo[c] {
                        let l = self.lca(self.leaf_of[x], self.leaf_of[r]);
                        let side = self.ancestor(self.leaf_of[r], self.depth[l] + 1);
                        let idx = self.children[l]
                            .iter()
                            .position(|&d| d == side)
                            .unwrap_or(0);
                        (0, Reverse(self.depth[l]), Reverse(idx), rx, Reverse(rr))
                    } else {
                        (1, Reverse(rr), Reverse(0), rx, Reverse(0))
                    };
                    (key, e)
                })
                .collect();
            keyed.sort_unstable();
            self.top[c] = keyed.into_iter().map(|(_, e)| e).collect();
        }
        for &c in self.order.iter().rev() {
            if c == self.root {
                continue;
            }
            self.bottom[c] = if self.children[c].is_empty() {
                self.top[c].clone()
            } else {
                self.children[c]
                    .iter()
                    .flat_map(|&d| self.top[d].iter().copied())
                    .filter(|&e| {
                        let (u, v) = g.edge(e);
                        self.inside(c, u) != self.inside(c, v)
                    })
                    .collect()
            };
        }
    }

    /// Reading the rim of every internal disk (children's exit orders left
    /// to right, then the entry order above it right to left), each wire's
    /// two visits must nest like parentheses.
    pub fn check_disks(&self) -> Result<()> {
        for (p, ch) in self.children.iter().enumerate() {
            if ch.is_empty() {
                continue;
            }
            let mut rim: Vec<EdgeId> = ch
                .iter()
                .flat_map(|&d| self.top[d].iter().copied())
                .collect();
            if p != self.root {
                rim.extend(self.bottom[p].iter().rev());
            }
            let mut stack: Vec<EdgeId> = Vec::new();
            let mut open = std::collections::HashSet::new();
            for e in rim {
                if open.insert(e) {
                    stack.push(e);
                } else if stack.pop() != Some(e) {
                    return Err(Error::internal(format!(
                        "wire {e} crosses another wire inside the disk of tree node {p}"
                    )));
                }
            }
            if !stack.is_empty() {
                return Err(Error::internal(format!("unmatched wires at tree node {p}")));
            }
        }
        Ok(())
    }

    /// Non-root nodes in preorder: one per rectangle.
    pub fn rectangles(&self) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&c| c != self.root)
            .collect()
    }

    /// Tree path of edge `(u, v)`: rectangles climbed from `u`'s leaf, then
    /// rectangles descended to `v`'s leaf.
    pub fn path(&self, u: VertexId, v: VertexId) -> (Vec<usize>, Vec<usize>) {
        let (a, b) = (self.leaf_of[u], self.leaf_of[v]);
        let l = self.lca(a, b);
        let climb = |mut x: usize| {
            let mut out = Vec::new();
            while x != l {
                out.push(x);
                x = self.parent[x];
            }
            out
        };
        let up = climb(a);
        let mut down = climb(b);
        down.reverse();
        (up, down)
    }
}

pub fn carving_guided(g: &Graph, cd: &CarvingDecomposition) -> Result<PlanarizationReport> {
    carving_guided_with(g, cd, Execution::default())
}

/// Routes every edge through the thickened carving tree and replaces each
/// rectangle by a caterpillar spine over its crossings.
pub fn carving_guided_with(
    g: &Graph,
    cd: &CarvingDecomposition,
    exec: Execution,
) -> Result<PlanarizationReport> {
    let claimed = validate_carving(g, cd)?;
    let Some(emb) = Embedding::new(g, cd)? else {
        return trivial_report("carving", g, cd, claimed);
    };
    emb.check_disks()?;
    let rects = emb.rectangles();
    let routings: Vec<RectangleRouting> = par::map(exec, &rects, |&c| {
        RectangleRouting::new(
            (c, emb.parent[c]),
            emb.bottom[c].clone(),
            emb.top[c].clone(),
        )
    });
    let n = g.n();
    let mut kinds = vec![VertexKind::Original; n];
    // dummies met by each wire inside each rectangle, bottom to top
    let mut met: HashMap<(usize, EdgeId), Vec<VertexId>> = HashMap::new();
    let mut spines: Vec<Vec<VertexId>> = Vec::with_capacity(rects.len());
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
    let chains = chains_through(g, &emb, &met);
    let planarization = Planarization::from_chains(n, kinds, chains)?;

    let mut ed = Editable::from_tree(&cd.tree, &cd.labels);
    for (r, spine) in routings.iter().zip(&spines) {
        subdivide(&mut ed, r.tree_edge, spine);
    }
    let (tree, labels) = ed.finish()?;
    let out = CarvingDecomposition::new(tree, labels);
    let validated = validate_carving(&planarization.planar, &out)?;
    Ok(PlanarizationReport {
        strategy: "carving".into(),
        crossings_added: planarization.crossings(),
        planarization,
        witness: Witness::Carving(out),
        claimed_width: claimed,
        validated_width: validated,
        routings,
    })
}

pub(super) fn trivial_report(
    strategy: &str,
    g: &Graph,
    cd: &CarvingDecomposition,
    claimed: usize,
) -> Result<PlanarizationReport> {
    let planarization = Planarization::trivial(g);
    let validated = validate_carving(&planarization.planar, cd)?;
    Ok(PlanarizationReport {
        strategy: strategy.into(),
        planarization,
        crossings_added: 0,
        witness: Witness::Carving(cd.clone()),
        claimed_width: claimed,
        validated_width: validated,
        routings: Vec::new(),
    })
}

/// Chains of the planarization: each edge collects its rectangle dummies
/// climbing from its first endpoint, then descending to its second.
fn chains_through(
    g: &Graph,
    emb: &Embedding,
    met: &HashMap<(usize, EdgeId), Vec<VertexId>>,
) -> Vec<Vec<VertexId>> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let (up, down) = emb.path(u, v);
            let mut chain = vec![u];
            for c in up {
                if let Some(ds) = met.get(&(c, e)) {
                    chain.extend(ds);
                }
            }
            for c in down {
                if let Some(ds) = met.get(&(c, e)) {
                    chain.extend(ds.iter().rev());
                }
            }
            chain.push(v);
            chain
        })
        .collect()
}

/// Replaces tree edge `(child, parent)` by a path whose inner nodes carry
/// `leaves` in order from the child end.
pub(super) fn subdivide(ed: &mut Editable, (child, parent): (usize, usize), leaves: &[VertexId]) {
    if leaves.is_empty() {
        return;
    }
    ed.unlink(child, parent);
    let mut prev = child;
    for &d in leaves {
        let s = ed.add_node(None);
        let leaf = ed.add_node(Some(d));
        ed.link(prev, s);
        ed.link(s, leaf);
        prev = s;
    }
    ed.link(prev, parent);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::LinearArrangement;
    use crate::decomposition::{caterpillar_carving_from_arrangement, exact_carving_width};
    use crate::generators::*;

    fn check(g: &Graph, cd: &CarvingDecomposition) -> PlanarizationReport {
        let w = validate_carving(g, cd).unwrap();
        let r = carving_guided(g, cd).unwrap();
        assert!(r.planarization.is_planar());
        assert_eq!(&r.planarization.contract().unwrap(), g);
        assert!(r.validated_width <= w.max(4));
        let internal = cd.tree.len() - g.n();
        let bound = internal.saturating_sub(1) * w * w.saturating_sub(1) / 2;
        assert!(r.crossings_added <= bound);
        for rt in &r.routings {
            assert_eq!(rt.apply(), rt.exit_order);
            assert_eq!(
                rt.transpositions.len(),
                inversions(&rt.entry_order, &rt.exit_order)
            );
        }
        r
    }

    #[test]
    fn k33_with_optimal_carving() {
        let g = k3n(3).unwrap();
        let (w, cd) = exact_carving_width(&g).unwrap();
        assert_eq!(w, 4);
        let r = check(&g, &cd);
        assert!(r.crossings_added <= 18);
        assert!(r.validated_width <= 4);
    }

    #[test]
    fn path_with_path_caterpillar_has_no_crossings() {
        let g = path(9).unwrap();
        let cd = caterpillar_carving_from_arrangement(&g, &LinearArrangement::identity(9)).unwrap();
        let r = check(&g, &cd);
        assert_eq!(r.crossings_added, 0);
    }

    #[test]
    fn random_graphs_and_trees() {
        for seed in 0..12 {
            let g = random_connected(9, 6, seed).unwrap();
            let cd = crate::decomposition::random_carving(&g, seed);
            check(&g, &cd);
        }
    }

    #[test]
    fn tiny_trees_are_trivial() {
        let g = path(2).unwrap();
        let cd = caterpillar_carving_from_arrangement(&g, &LinearArrangement::identity(2)).unwrap();
        let r = carving_guided(&g, &cd).unwrap();
        assert_eq!(r.crossings_added, 0);
        assert_eq!(r.validated_width, 1);
    }

    #[test]
    fn schedule_counts_inversions() {
        let r = RectangleRouting::new((0, 1), vec![3, 1, 2, 0], vec![0, 1, 2, 3]);
        assert_eq!(r.transpositions.len(), 5);
        assert_eq!(inversions(&[3, 1, 2, 0], &[0, 1, 2, 3]), 5);
        assert_eq!(r.apply(), vec![0, 1, 2, 3]);
    }
}
