use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::{check_leaf_labels, DecompositionError, Editable, Tree};
use crate::arrangement::LinearArrangement;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::par;
use crate::solver::Solver;

/// Unrooted tree, internal degree 3, leaves labelled by graph vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarvingDecomposition {
    pub tree: Tree,
    /// Vertex at each tree node; `None` on internal nodes.
    pub labels: Vec<Option<VertexId>>,
}

impl CarvingDecomposition {
    pub fn new(tree: Tree, labels: Vec<Option<VertexId>>) -> Self {
        Self { tree, labels }
    }

    /// Tree node holding each vertex.
    pub fn leaf_of(&self, n: usize) -> std::result::Result<Vec<usize>, DecompositionError> {
        check_leaf_labels(&self.tree, &self.labels, n)
    }
}

/// Number of graph edges crossing each tree edge, in `tree.edges()` order.
pub fn carving_cuts(
    g: &Graph,
    cd: &CarvingDecomposition,
) -> std::result::Result<Vec<usize>, DecompositionError> {
    if g.n() == 0 {
        return Err(DecompositionError::Empty { what: "vertices" });
    }
    let leaf_of = cd.leaf_of(g.n())?;
    let rooted = cd.tree.rooted(0);
    // an edge uv crosses exactly the tree edges on the leaf(u)-leaf(v) path
    let mut w = vec![0i64; cd.tree.len()];
    for &(u, v) in g.edges() {
        let (a, b) = (leaf_of[u], leaf_of[v]);
        w[a] += 1;
        w[b] += 1;
        w[rooted.lca(a, b)] -= 2;
    }
    let sums = rooted.subtree_sums(&w);
    Ok(cd
        .tree
        .edges()
        .iter()
        .map(|&(a, b)| {
            let child = if rooted.parent[a] == b { a } else { b };
            sums[child] as usize
        })
        .collect())
}

/// Largest cut over the tree edges.
pub fn validate_carving(
    g: &Graph,
    cd: &CarvingDecomposition,
) -> std::result::Result<usize, DecompositionError> {
    Ok(carving_cuts(g, cd)?.into_iter().max().unwrap_or(0))
}

/// Caterpillar over the arrangement: a spine with the first two vertices on
/// its first node, the last two on its last node and one vertex on each node
/// between. Spine edges cut prefixes; leaf edges cut single vertices.
pub fn caterpillar_carving_from_arrangement(
    g: &Graph,
    a: &LinearArrangement,
) -> Result<CarvingDecomposition> {
    if a.len() != g.n() {
        return Err(Error::invalid(format!(
            "arrangement has {} vertices, graph has {}",
            a.len(),
            g.n()
        )));
    }
    caterpillar(a.order())
}

/// Caterpillar with leaves `order` (any vertex labels). Leaf of `order[i]` is
/// node `i`; spine nodes follow.
pub(crate) fn caterpillar(order: &[usize]) -> Result<CarvingDecomposition> {
    let n = order.len();
    let labels_for = |nodes: usize| {
        let mut labels: Vec<Option<usize>> = order.iter().map(|&v| Some(v)).collect();
        labels.resize(nodes, None);
        labels
    };
    match n {
        0 => Err(Error::invalid("a carving needs at least one vertex")),
        1 => Ok(CarvingDecomposition::new(
            Tree::new(1, vec![])?,
            labels_for(1),
        )),
        2 => Ok(CarvingDecomposition::new(
            Tree::new(2, vec![(0, 1)])?,
            labels_for(2),
        )),
        _ => {
            let spine = |i: usize| n + i; // spine node i, 0-based, n-2 of them
            let k = n - 2;
            let mut edges = Vec::with_capacity(2 * n - 3);
            for i in 1..k {
                edges.push((spine(i - 1), spine(i)));
            }
            edges.push((0, spine(0)));
            edges.push((1, spine(0)));
            for i in 2..n - 2 {
                edges.push((i, spine(i - 1)));
            }
            if n > 3 {
                edges.push((n - 2, spine(k - 1)));
            }
            edges.push((n - 1, spine(k - 1)));
            let nodes = n + k;
            Ok(CarvingDecomposition::new(
                Tree::new(nodes, edges)?,
                labels_for(nodes),
            ))
        }
    }
}

/// Carving of `g` from carvings of its connected components, produced by
/// `solve`. Each component's tree is attached through a node subdividing one
/// of its edges (or through its only leaf); the attachments hang off a
/// caterpillar spine whose edges cut nothing.
pub fn carving_by_components<F>(g: &Graph, solve: F) -> Result<CarvingDecomposition>
where
    F: Fn(&Graph) -> Result<CarvingDecomposition>,
{
    if g.n() == 0 {
        return Err(Error::invalid("a carving needs at least one vertex"));
    }
    let mut ed = Editable {
        adj: Vec::new(),
        labels: Vec::new(),
        alive: Vec::new(),
    };
    let mut attach = Vec::new();
    for comp in g.components() {
        let (sub, map) = g.induced(&comp);
        let cd = solve(&sub)?;
        cd.leaf_of(sub.n())?;
        let base = ed.adj.len();
        for v in 0..cd.tree.len() {
            ed.add_node(cd.labels[v].map(|x| map[x]));
        }
        for &(a, b) in cd.tree.edges() {
            ed.link(base + a, base + b);
        }
        match cd.tree.edges().first() {
            Some(&(a, b)) => {
                let x = ed.add_node(None);
                ed.unlink(base + a, base + b);
                ed.link(base + a, x);
                ed.link(x, base + b);
                attach.push(x);
            }
            None => attach.push(base),
        }
    }
    ed.caterpillar(&attach);
    let (tree, labels) = ed.finish()?;
    Ok(CarvingDecomposition::new(tree, labels))
}

/// Carving on a random binary tree with vertices shuffled onto its leaves.
pub fn random_carving(g: &Graph, seed: u64) -> CarvingDecomposition {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let tree = super::random_binary_tree(g.n(), seed);
    let mut verts: Vec<VertexId> = (0..g.n()).collect();
    verts.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    let mut labels = vec![None; tree.len()];
    for (leaf, v) in tree.leaves().into_iter().zip(verts) {
        labels[leaf] = Some(v);
    }
    CarvingDecomposition::new(tree, labels)
}

pub fn exact_carving_width(g: &Graph) -> Result<(usize, CarvingDecomposition)> {
    Solver::default().carving_width(g)
}

/// A partial carving tree: each edge `(a, b, side, cut)` records the placed
/// vertices on `b`'s side and how many edges among placed vertices it cuts.
#[derive(Clone)]
struct Partial {
    edges: Vec<(usize, usize, u32, usize)>,
    placed: u32,
    next_node: usize,
}

impl Partial {
    fn cut(adj: &[u32], side: u32, placed: u32) -> usize {
        let other = placed & !side;
        crate::subset::bits(side)
            .map(|v| (adj[v] & other).count_ones() as usize)
            .sum()
    }

    /// Subdivides edge `i` with a new node carrying leaf `k`.
    fn insert(&self, adj: &[u32], i: usize, k: usize) -> Partial {
        let kb = 1u32 << k;
        let (a, b, m, _) = self.edges[i];
        let placed = self.placed | kb;
        let mut edges = Vec::with_capacity(self.edges.len() + 2);
        for (j, &(c, d, side, cut)) in self.edges.iter().enumerate() {
            if j == i {
                continue;
            }
            // edge i lies on `side`'s part of the tree iff one of its own
            // sides fits inside `side`
            let rest = self.placed & !side;
            let on_side = m & !side == 0 || (self.placed & !m) & !side == 0;
            if on_side {
                edges.push((c, d, side | kb, cut + (adj[k] & rest).count_ones() as usize));
            } else {
                edges.push((c, d, side, cut + (adj[k] & side).count_ones() as usize));
            }
        }
        let x = self.next_node;
        for (p, q, side) in [(a, x, m | kb), (x, b, m), (x, k, kb)] {
            edges.push((p, q, side, Self::cut(adj, side, placed)));
        }
        Partial {
            edges,
            placed,
            next_node: x + 1,
        }
    }

    fn bound(&self) -> usize {
        self.edges.iter().map(|e| e.3).max().unwrap_or(0)
    }
}

struct Search<'a> {
    adj: &'a [u32],
    order: &'a [usize],
    global: &'a AtomicUsize,
    best: usize,
    witness: Option<Partial>,
}

impl Search<'_> {
    fn dfs(&mut self, p: Partial, depth: usize) {
        if depth == self.order.len() {
            let w = p.bound();
            if w < self.best {
                self.best = w;
                self.global.fetch_min(w, Ordering::Relaxed);
                self.witness = Some(p);
            }
            return;
        }
        let k = self.order[depth];
        for i in 0..p.edges.len() {
            let next = p.insert(self.adj, i, k);
            let lb = next.bound();
            // strict against the shared bound keeps the result independent
            // of thread timing
            if lb >= self.best || lb > self.global.load(Ordering::Relaxed) {
                continue;
            }
            self.dfs(next, depth + 1);
        }
    }
}

impl Solver {
    /// Minimum carving width by enumerating unrooted binary trees leaf by
    /// leaf (each new leaf subdivides an existing edge) with cut-based
    /// pruning. Parallel over the first few insertions.
    pub fn carving_width(&self, g: &Graph) -> Result<(usize, CarvingDecomposition)> {
        let n = g.n();
        self.check("carving", n, self.limits.carving.min(32))?;
        if n <= 2 {
            let cd = caterpillar(&(0..n).collect::<Vec<_>>())?;
            return Ok((validate_carving(g, &cd)?, cd));
        }
        let adj: Vec<u32> = g.neighbor_masks().into_iter().map(|m| m as u32).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

        let upper = validate_carving(g, &caterpillar(&order)?)?;
        let global = AtomicUsize::new(upper);

        let center = n;
        let placed = order[..3].iter().fold(0u32, |m, &v| m | 1 << v);
        let star = Partial {
            edges: order[..3]
                .iter()
                .map(|&v| {
                    let side = 1u32 << v;
                    (center, v, side, Partial::cut(&adj, side, placed))
                })
                .collect(),
            placed,
            next_node: n + 1,
        };
        let split = n.min(if n >= 8 { 6 } else { 5 });
        let mut frontier = vec![star];
        for &k in &order[3..split] {
            frontier = frontier
                .iter()
                .flat_map(|p| (0..p.edges.len()).map(move |i| (p, i)))
                .map(|(p, i)| p.insert(&adj, i, k))
                .collect();
        }
        let results = par::map(self.exec, &frontier, |p| {
            let mut s = Search {
                adj: &adj,
                order: &order,
                global: &global,
                best: usize::MAX,
                witness: None,
            };
            if p.bound() <= global.load(Ordering::Relaxed) {
                s.dfs(p.clone(), split);
            }
            s.witness.map(|w| (s.best, w))
        });
        let (width, p) = results
            .into_iter()
            .flatten()
            .min_by_key(|(w, _)| *w)
            .ok_or_else(|| Error::internal("carving search found no tree"))?;
        let nodes = 2 * n - 2;
        let tree = Tree::new(nodes, p.edges.iter().map(|e| (e.0, e.1)).collect())?;
        let mut labels: Vec<Option<usize>> = (0..n).map(Some).collect();
        labels.resize(nodes, None);
        let cd = CarvingDecomposition::new(tree, labels);
        debug_assert_eq!(validate_carving(g, &cd), Ok(width));
        Ok((width, cd))
    }
}
