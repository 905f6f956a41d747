//! Linear arrangements and the widths they induce.

mod exact;

pub use exact::{exact_bandwidth, exact_cutwidth, exact_pathwidth};

use serde::{Deserialize, Serialize};

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// A permutation of the vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LinearArrangement {
    order: Vec<VertexId>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl<'de> Deserialize<'de> for LinearArrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let order = Vec::<VertexId>::deserialize(d)?;
        LinearArrangement::new(order).map_err(serde::de::Error::custom)
    }
}

impl LinearArrangement {
    pub fn new(order: Vec<VertexId>) -> Result<Self> {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::invalid(format!(
                    "arrangement is not a permutation of 0..{n}"
                )));
            }
            pos[v] = i;
        }
        Ok(Self { order, pos })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity permutation")
    }

    /// `0, n-1, 1, n-2, ...`: a cyclic order folded onto a line, so cyclic
    /// neighbors at distance `o` end up at most `2o` apart.
    pub fn fold(n: usize) -> Self {
        let mut order = Vec::with_capacity(n);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            order.push(lo);
            lo += 1;
            if lo < hi {
                hi -= 1;
                order.push(hi);
            }
        }
        Self::new(order).expect("fold is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn position(&self, v: VertexId) -> usize {
        self.pos[v]
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::invalid(format!(
                "arrangement has {} vertices, graph has {}",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Edges crossing each of the `n - 1` prefix cuts.
pub fn cut_profile(g: &Graph, a: &LinearArrangement) -> Result<Vec<usize>> {
    a.check(g)?;
    let mut cut = 0isize;
    let mut out = Vec::with_capacity(g.n().saturating_sub(1));
    for (i, &v) in a.order.iter().enumerate().take(g.n().saturating_sub(1)) {
        let earlier = g.neighbors(v).iter().filter(|&&w| a.pos[w] < i).count() as isize;
        cut += g.degree(v) as isize - 2 * earlier;
        out.push(cut as usize);
    }
    Ok(out)
}

/// Maximum number of edges crossing a prefix cut.
pub fn edge_separation(g: &Graph, a: &LinearArrangement) -> Result<usize> {
    Ok(cut_profile(g, a)?.into_iter().max().unwrap_or(0))
}

/// Prefix vertices with a neighbor in the suffix, for each of the `n - 1` cuts.
pub fn vertex_separation_profile(g: &Graph, a: &LinearArrangement) -> Result<Vec<usize>> {
    a.check(g)?;
    let n = g.n();
    let mut diff = vec![0isize; n + 1];
    for v in 0..n {
        let p = a.pos[v];
        let last = g.neighbors(v).iter().map(|&w| a.pos[w]).max().unwrap_or(0);
        if last > p {
            // v is in the prefix and sees the suffix for cuts p..last-1
            diff[p] += 1;
            diff[last] -= 1;
        }
    }
    let mut acc = 0isize;
    Ok((0..n.saturating_sub(1))
        .map(|i| {
            acc += diff[i];
            acc as usize
        })
        .collect())
}

pub fn vertex_separation(g: &Graph, a: &LinearArrangement) -> Result<usize> {
    Ok(vertex_separation_profile(g, a)?
        .into_iter()
        .max()
        .unwrap_or(0))
}

/// Maximum distance between the endpoints of an edge.
pub fn span(g: &Graph, a: &LinearArrangement) -> Result<usize> {
    a.check(g)?;
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| a.pos[u].abs_diff(a.pos[v]))
        .max()
        .unwrap_or(0))
}

/// Path decomposition with one bag per position: the vertex there plus every
/// earlier vertex that still has a neighbor at or after it.
pub fn arrangement_to_path_decomposition(
    g: &Graph,
    a: &LinearArrangement,
) -> Result<TreeDecomposition> {
    a.check(g)?;
    let n = g.n();
    let last: Vec<usize> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&w| a.pos[w])
                .max()
                .unwrap_or(0)
                .max(a.pos[v])
        })
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut active: Vec<VertexId> = Vec::new();
    for (i, &v) in a.order.iter().enumerate() {
        active.retain(|&u| last[u] >= i);
        let mut bag = active.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        active.push(v);
    }
    let tree = (1..n).map(|i| (i - 1, i)).collect();
    TreeDecomposition::new(bags, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_tree_decomposition;
    use crate::generators::*;

    #[test]
    fn path_in_order() {
        let g = path(6).unwrap();
        let a = LinearArrangement::identity(6);
        assert_eq!(edge_separation(&g, &a).unwrap(), 1);
        assert_eq!(vertex_separation(&g, &a).unwrap(), 1);
        assert_eq!(span(&g, &a).unwrap(), 1);
        let td = arrangement_to_path_decomposition(&g, &a).unwrap();
        assert!(td.bags().iter().skip(1).all(|b| b.len() == 2));
        assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), 1);
    }

    #[test]
    fn cycle_wraparound() {
        let g = cycle(7).unwrap();
        assert_eq!(span(&g, &LinearArrangement::identity(7)).unwrap(), 6);
        assert_eq!(span(&g, &LinearArrangement::fold(7)).unwrap(), 2);
    }

    #[test]
    fn circulant_identity_span() {
        // the wraparound edge (0, 7) spans the whole order
        let g = circulant(8, &[1, 2, 3]).unwrap();
        assert_eq!(span(&g, &LinearArrangement::identity(8)).unwrap(), 7);
        assert_eq!(span(&g, &LinearArrangement::fold(8)).unwrap(), 6);
    }

    /// The arrangement of Fig. 5: two K_{3,4} vertices of side B, then side
    /// A, then the other two.
    fn k34_split() -> LinearArrangement {
        LinearArrangement::new(vec![3, 4, 0, 1, 2, 5, 6]).unwrap()
    }

    #[test]
    fn k34_split_has_cutwidth_six() {
        let g = k3n(4).unwrap();
        assert_eq!(edge_separation(&g, &k34_split()).unwrap(), 6);
    }

    #[test]
    fn k35_three_side_spread() {
        // side A first: every later bag holds a, b, c
        let g = k3n(5).unwrap();
        let a = LinearArrangement::identity(8);
        assert_eq!(vertex_separation(&g, &a).unwrap(), 3);
        let td = arrangement_to_path_decomposition(&g, &a).unwrap();
        assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), 3);
        for bag in &td.bags()[3..] {
            assert!(bag.starts_with(&[0, 1, 2]));
        }
    }

    #[test]
    fn size_mismatch() {
        let g = path(3).unwrap();
        assert!(edge_separation(&g, &LinearArrangement::identity(4)).is_err());
        assert!(LinearArrangement::new(vec![0, 0]).is_err());
    }

    #[test]
    fn fold_order() {
        assert_eq!(LinearArrangement::fold(5).order(), &[0, 4, 1, 3, 2]);
        assert_eq!(LinearArrangement::fold(0).order(), &[] as &[usize]);
    }
}
