//! Undirected trees and the leaf-labelled binary trees behind carving and
//! branch decompositions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DecompositionError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// A tree on nodes `0..nodes`. Rejects anything that is not connected
    /// and acyclic.
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self, DecompositionError> {
        let bad = |reason: String| Err(DecompositionError::NotATree { reason });
        if nodes == 0 {
            return bad("no nodes".into());
        }
        if edges.len() != nodes - 1 {
            return bad(format!("{} nodes but {} edges", nodes, edges.len()));
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in &edges {
            if a >= nodes || b >= nodes || a == b {
                return bad(format!("bad tree edge ({a}, {b})"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let t = Self { edges, adj };
        if t.preorder(0).len() != nodes {
            return bad("not connected".into());
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Nodes of degree at most one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.degree(v) <= 1).collect()
    }

    /// Preorder from `root`, children visited in adjacency order.
    pub fn preorder(&self, root: usize) -> Vec<usize> {
        self.rooted(root).order
    }

    pub fn rooted(&self, root: usize) -> Rooted {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in self.adj[v].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    stack.push(w);
                }
            }
        }
        Rooted {
            root,
            parent,
            depth,
            order,
        }
    }
}

/// A tree hung from a root. `parent[root] == usize::MAX`.
#[derive(Clone, Debug)]
pub struct Rooted {
    pub root: usize,
    pub parent: Vec<usize>,
    pub depth: Vec<usize>,
    /// Preorder; parents precede children.
    pub order: Vec<usize>,
}

impl Rooted {
    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
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

    /// Sums `weight` over subtrees: result[v] = total weight below and at `v`.
    pub fn subtree_sums(&self, weight: &[i64]) -> Vec<i64> {
        let mut sum = weight.to_vec();
        for &v in self.order.iter().rev() {
            if v != self.root {
                let p = self.parent[v];
                sum[p] += sum[v];
            }
        }
        sum
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeJson {
            nodes: self.len(),
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TreeJson::deserialize(d)?;
        Tree::new(raw.nodes, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Checks the shape shared by carving and branch decompositions: internal
/// nodes have degree 3 and no label, leaves carry distinct labels covering
/// `0..count`. Returns the leaf node of each label.
pub(crate) fn check_leaf_labels(
    tree: &Tree,
    labels: &[Option<usize>],
    count: usize,
) -> Result<Vec<usize>, DecompositionError> {
    if labels.len() != tree.len() {
        return Err(DecompositionError::LabelCount {
            labels: labels.len(),
            nodes: tree.len(),
        });
    }
    let mut leaf_of = vec![usize::MAX; count];
    for v in 0..tree.len() {
        let d = tree.degree(v);
        match labels[v] {
            Some(l) if d <= 1 => {
                if l >= count {
                    return Err(DecompositionError::UnknownLabel { node: v, label: l });
                }
                if leaf_of[l] != usize::MAX {
                    return Err(DecompositionError::DuplicateLabel { label: l });
                }
                leaf_of[l] = v;
            }
            None if d <= 1 => return Err(DecompositionError::UnlabeledLeaf { node: v }),
            Some(_) => return Err(DecompositionError::LabeledInternal { node: v }),
            None if d != 3 => return Err(DecompositionError::BadDegree { node: v, degree: d }),
            None => {}
        }
    }
    if let Some(l) = leaf_of.iter().position(|&x| x == usize::MAX) {
        return Err(DecompositionError::MissingLabel { label: l });
    }
    Ok(leaf_of)
}

/// Mutable tree used to rewrite decompositions: leaves can be expanded into
/// subtrees or dropped, after which degree-2 nodes are suppressed.
#[derive(Clone, Debug)]
pub(crate) struct Editable {
    pub adj: Vec<Vec<usize>>,
    pub labels: Vec<Option<usize>>,
    pub alive: Vec<bool>,
}

impl Editable {
    pub fn from_tree(tree: &Tree, labels: &[Option<usize>]) -> Self {
        Self {
            adj: (0..tree.len())
                .map(|v| tree.neighbors(v).to_vec())
                .collect(),
            labels: labels.to_vec(),
            alive: vec![true; tree.len()],
        }
    }

    pub fn add_node(&mut self, label: Option<usize>) -> usize {
        self.adj.push(Vec::new());
        self.labels.push(label);
        self.alive.push(true);
        self.adj.len() - 1
    }

    pub fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
    }

    pub fn remove(&mut self, v: usize) {
        for w in std::mem::take(&mut self.adj[v]) {
            self.adj[w].retain(|&x| x != v);
        }
        self.alive[v] = false;
    }

    /// Joins existing nodes `items` by a new caterpillar spine, in order.
    pub fn caterpillar(&mut self, items: &[usize]) {
        match items.len() {
            0 | 1 => {}
            2 => self.link(items[0], items[1]),
            k => {
                let spine: Vec<usize> = (0..k - 2).map(|_| self.add_node(None)).collect();
                for w in spine.windows(2) {
                    self.link(w[0], w[1]);
                }
                self.link(items[0], spine[0]);
                self.link(items[1], spine[0]);
                for i in 2..k - 2 {
                    self.link(items[i], spine[i - 1]);
                }
                if k > 3 {
                    self.link(items[k - 2], spine[k - 3]);
                }
                self.link(items[k - 1], spine[k - 3]);
            }
        }
    }

    /// Drops unlabelled leaves and suppresses unlabelled degree-2 nodes until
    /// neither remains.
    pub fn tidy(&mut self) {
        loop {
            let live = self.alive.iter().filter(|&&a| a).count();
            let target = (0..self.adj.len()).find(|&v| {
                self.alive[v] && self.labels[v].is_none() && self.adj[v].len() <= 2 && live > 1
            });
            let Some(v) = target else { return };
            if self.adj[v].len() == 2 {
                let (a, b) = (self.adj[v][0], self.adj[v][1]);
                self.unlink(v, a);
                self.unlink(v, b);
                self.link(a, b);
                self.alive[v] = false;
            } else {
                self.remove(v);
            }
        }
    }

    /// Renumbers live nodes in id order.
    pub fn finish(self) -> Result<(Tree, Vec<Option<usize>>), DecompositionError> {
        let mut id = vec![usize::MAX; self.adj.len()];
        let mut labels = Vec::new();
        for v in 0..self.adj.len() {
            if self.alive[v] {
                id[v] = labels.len();
                labels.push(self.labels[v]);
            }
        }
        let mut edges = Vec::new();
        for v in 0..self.adj.len() {
            for &w in &self.adj[v] {
                if self.alive[v] && v < w {
                    edges.push((id[v], id[w]));
                }
            }
        }
        edges.sort_unstable();
        Ok((Tree::new(labels.len(), edges)?, labels))
    }
}

/// Random unrooted binary tree with `leaves` leaves, built by attaching each
/// new leaf to a uniformly chosen existing edge. Returns the tree; leaves are
/// the degree-1 nodes.
pub fn random_binary_tree(leaves: usize, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match leaves {
        0 | 1 => return Tree::new(1, vec![]).expect("single node"),
        2 => return Tree::new(2, vec![(0, 1)]).expect("single edge"),
        _ => {}
    }
    let mut edges = vec![(0, 3), (1, 3), (2, 3)];
    let mut nodes = 4;
    for _ in 3..leaves {
        let e = rng.random_range(0..edges.len());
        let (a, b) = edges[e];
        let (x, leaf) = (nodes, nodes + 1);
        nodes += 2;
        edges[e] = (a, x);
        edges.push((x, b));
        edges.push((x, leaf));
    }
    Tree::new(nodes, edges).expect("insertion keeps a tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::new(3, vec![(0, 1)]).is_err());
        assert!(Tree::new(3, vec![(0, 1), (0, 1)]).is_err());
        assert!(Tree::new(0, vec![]).is_err());
        assert!(Tree::new(1, vec![]).is_ok());
    }

    #[test]
    fn random_tree_shape() {
        let t = random_binary_tree(50, 1);
        assert_eq!(t.len(), 98);
        assert_eq!(t.leaves().len(), 50);
        assert!((0..t.len()).all(|v| matches!(t.degree(v), 1 | 3)));
        assert_eq!(t, random_binary_tree(50, 1));
    }

    #[test]
    fn lca_and_sums() {
        let t = Tree::new(5, vec![(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        let r = t.rooted(0);
        assert_eq!(r.lca(3, 4), 2);
        assert_eq!(r.lca(1, 4), 0);
        assert_eq!(r.subtree_sums(&[1; 5]), vec![5, 1, 3, 1, 1]);
    }
}
