use serde::{Deserialize, Serialize};

use super::{DecompositionError, Tree};
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::solver::Solver;
use crate::subset::{bits, layered};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    bags: Vec<Vec<VertexId>>,
    tree: Tree,
}

impl<'de> Deserialize<'de> for TreeDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            bags: Vec<Vec<VertexId>>,
            tree: Tree,
        }
        let raw = Raw::deserialize(d)?;
        if raw.bags.len() != raw.tree.len() {
            return Err(serde::de::Error::custom("bag count differs from tree size"));
        }
        Ok(TreeDecomposition {
            bags: raw.bags,
            tree: raw.tree,
        })
    }
}

impl TreeDecomposition {
    /// Bags indexed by tree node; `tree` lists edges between bag ids.
    pub fn new(bags: Vec<Vec<VertexId>>, tree: Vec<(usize, usize)>) -> Result<Self> {
        let tree = Tree::new(bags.len().max(1), tree)?;
        let mut bags = bags;
        if bags.is_empty() {
            bags.push(Vec::new());
        }
        Ok(Self { bags, tree })
    }

    pub fn bags(&self) -> &[Vec<VertexId>] {
        &self.bags
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }
}

/// Width (largest bag minus one) once all three axioms hold: every vertex is
/// in a bag, every edge is in a bag, and each vertex's bags are connected.
pub fn validate_tree_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
) -> std::result::Result<usize, DecompositionError> {
    let n = g.n();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (b, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(DecompositionError::BagVertexOutOfRange {
                    bag: b,
                    vertex: v,
                    n,
                });
            }
            if holders[v].last() != Some(&b) {
                holders[v].push(b);
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return Err(DecompositionError::VertexNotCovered { vertex: v });
    }
    for &(u, v) in g.edges() {
        let covered = holders[u]
            .iter()
            .any(|&b| holders[v].binary_search(&b).is_ok());
        if !covered {
            return Err(DecompositionError::EdgeNotCovered { u, v });
        }
    }
    // a vertex's bags induce a subforest; it is connected iff it has one
    // edge fewer than nodes
    let mut inside = vec![0usize; n];
    for &(a, b) in td.tree.edges() {
        for &v in &td.bags[a] {
            if td.bags[b].contains(&v) {
                inside[v] += 1;
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| inside[v] + 1 != holders[v].len()) {
        return Err(DecompositionError::DisconnectedBags { vertex: v });
    }
    Ok(td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b.len()
        })
        .max()
        .unwrap_or(0)
        .saturating_sub(1))
}

pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    Solver::default().treewidth(g)
}

impl Solver {
    /// Minimum-width elimination ordering by DP over the set of vertices
    /// eliminated so far, then the tree decomposition of that ordering.
    pub fn treewidth(&self, g: &Graph) -> Result<(usize, TreeDecomposition)> {
        self.check("treewidth", g.n(), self.limits.treewidth)?;
        let n = g.n();
        if n == 0 {
            return Ok((0, TreeDecomposition::new(vec![], vec![])?));
        }
        let adj: Vec<u32> = g.neighbor_masks().into_iter().map(|m| m as u32).collect();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        // tw[S]: best width of eliminating exactly S first
        let tw = layered(n, self.exec, false, 0u8, |s, tw| {
            bits(s)
                .map(|v| {
                    let rest = s & !(1 << v);
                    tw[rest as usize].max(fill_degree(&adj, rest, v))
                })
                .min()
                .unwrap_or(0)
        });
        let width = tw[full as usize];
        let mut order = Vec::with_capacity(n);
        let mut s = full;
        while s != 0 {
            let v = bits(s)
                .find(|&v| {
                    let rest = s & !(1 << v);
                    tw[rest as usize].max(fill_degree(&adj, rest, v)) == tw[s as usize]
                })
                .expect("DP optimum is attained");
            order.push(v);
            s &= !(1 << v);
        }
        order.reverse();
        let td = from_elimination(&adj, &order)?;
        Ok((width as usize, td))
    }
}

/// Neighbors of `v` in the graph after eliminating `gone`: vertices outside
/// `gone + v` reachable from `v` through `gone`.
fn fill_degree(adj: &[u32], gone: u32, v: usize) -> u8 {
    let mut reach = 1u32 << v;
    let mut frontier = reach;
    while frontier != 0 {
        let nb = bits(frontier).fold(0u32, |m, x| m | adj[x]);
        frontier = nb & gone & !reach;
        reach |= frontier;
    }
    let around = bits(reach).fold(0u32, |m, x| m | adj[x]);
    (around & !gone & !(1 << v)).count_ones() as u8
}

/// Bag of `v` = `v` plus its later neighbors in the fill-in graph; its parent
/// is the earliest-eliminated of those neighbors. Separate roots are chained.
fn from_elimination(adj: &[u32], order: &[usize]) -> Result<TreeDecomposition> {
    let n = order.len();
    let mut fill = adj.to_vec();
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut gone = 0u32;
    let mut bags = Vec::with_capacity(n);
    let mut tree = Vec::with_capacity(n);
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let nb = fill[v] & !gone & !(1 << v);
        for a in bits(nb) {
            fill[a] |= nb & !(1 << a);
        }
        gone |= 1 << v;
        let mut bag: Vec<usize> = bits(nb).collect();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        match bits(nb).min_by_key(|&w| rank[w]) {
            Some(p) => tree.push((i, rank[p])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::oracle;

    /// Fig. 1: a path of bags {a, b, c, x_i}.
    fn fig1() -> TreeDecomposition {
        let bags = (3..8).map(|x| vec![0, 1, 2, x]).collect();
        TreeDecomposition::new(bags, (1..5).map(|i| (i - 1, i)).collect()).unwrap()
    }

    #[test]
    fn fig1_has_width_three() {
        assert_eq!(
            validate_tree_decomposition(&k3n(5).unwrap(), &fig1()).unwrap(),
            3
        );
    }

    #[test]
    fn single_bag() {
        let g = petersen();
        let td = TreeDecomposition::new(vec![(0..10).collect()], vec![]).unwrap();
        assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), 9);
    }

    #[test]
    fn axiom_failures() {
        let g = path(3).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]).unwrap();
        assert_eq!(
            validate_tree_decomposition(&g, &td),
            Err(DecompositionError::EdgeNotCovered { u: 1, v: 2 })
        );
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]).unwrap();
        assert_eq!(
            validate_tree_decomposition(&Graph::empty(4), &td),
            Err(DecompositionError::VertexNotCovered { vertex: 3 })
        );
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(
            validate_tree_decomposition(&complete(3).unwrap(), &td),
            Err(DecompositionError::DisconnectedBags { vertex: 0 })
        );
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_treewidth(&path(7).unwrap()).unwrap().0, 1);
        for n in 3..7 {
            assert_eq!(exact_treewidth(&k3n(n).unwrap()).unwrap().0, 3);
        }
        assert_eq!(oracle::treewidth(&k3n(5).unwrap()).unwrap(), 3);
        assert_eq!(exact_treewidth(&complete(6).unwrap()).unwrap().0, 5);
        assert_eq!(exact_treewidth(&petersen()).unwrap().0, 4);
        assert_eq!(exact_treewidth(&Graph::empty(3)).unwrap().0, 0);
    }

    #[test]
    fn witnesses_validate() {
        for seed in 0..10 {
            let g = random_connected(10, seed as usize, seed).unwrap();
            let (w, td) = exact_treewidth(&g).unwrap();
            assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), w);
            assert_eq!(w, oracle::treewidth(&g).unwrap());
        }
        let g = disjoint_cliques(3, 3).unwrap();
        let (w, td) = exact_treewidth(&g).unwrap();
        assert_eq!((w, validate_tree_decomposition(&g, &td).unwrap()), (2, 2));
    }
}
