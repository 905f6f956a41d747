use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{DecompositionError, Tree};

/// Partition of a tree's nodes into connected blocks of order `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedPartition {
    pub z: usize,
    /// Sorted blocks, ordered by smallest node.
    pub blocks: Vec<Vec<usize>>,
}

impl RestrictedPartition {
    /// Block index of every tree node.
    pub fn block_of(&self, nodes: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; nodes];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                if v < nodes {
                    of[v] = i;
                }
            }
        }
        of
    }
}

fn fail<T>(reason: impl Into<String>) -> Result<T, DecompositionError> {
    Err(DecompositionError::Partition {
        reason: reason.into(),
    })
}

/// Greedy restricted partition: start from singletons, and in repeated
/// passes over the blocks (by smallest node) merge each block into its first
/// neighboring block (by smallest node) with which the union has at most `z`
/// nodes and at most two boundary edges. Stops after a pass with no merge.
pub fn restricted_partition(
    tree: &Tree,
    z: usize,
) -> Result<RestrictedPartition, DecompositionError> {
    if z == 0 {
        return fail("order z must be at least 1");
    }
    if let Some(v) =
        (0..tree.len()).find(|&v| tree.degree(v) > 3 || (tree.degree(v) == 2 && tree.len() > 2))
    {
        return Err(DecompositionError::BadDegree {
            node: v,
            degree: tree.degree(v),
        });
    }
    let n = tree.len();
    let mut block_of: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut boundary: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    // live blocks keyed by smallest member; a block's id is its first node
    let mut live: BTreeSet<usize> = (0..n).collect();
    loop {
        let mut merged_any = false;
        let keys: Vec<usize> = live.iter().copied().collect();
        for b in keys {
            if !live.contains(&b) {
                continue;
            }
            let mut neighbors: Vec<usize> = members[b]
                .iter()
                .flat_map(|&v| tree.neighbors(v).iter().map(|&w| block_of[w]))
                .filter(|&c| c != b)
                .collect();
            neighbors.sort_unstable();
            neighbors.dedup();
            let pick = neighbors.into_iter().find(|&c| {
                members[b].len() + members[c].len() <= z && boundary[b] + boundary[c] - 2 <= 2
            });
            if let Some(c) = pick {
                let (keep, gone) = (b.min(c), b.max(c));
                let moved = std::mem::take(&mut members[gone]);
                for &v in &moved {
                    block_of[v] = keep;
                }
                members[keep].extend(moved);
                boundary[keep] = boundary[b] + boundary[c] - 2;
                live.remove(&gone);
                merged_any = true;
            }
        }
        if !merged_any {
            break;
        }
    }
    let blocks = live
        .into_iter()
        .map(|b| {
            let mut m = std::mem::take(&mut members[b]);
            m.sort_unstable();
            m
        })
        .collect();
    Ok(RestrictedPartition { z, blocks })
}

/// Checks all defining properties: a partition into connected blocks, each
/// of at most `z` nodes; a block with more than two boundary edges is a
/// single node; and no two adjacent blocks could be merged.
pub fn validate_restricted_partition(
    tree: &Tree,
    p: &RestrictedPartition,
) -> Result<(), DecompositionError> {
    let n = tree.len();
    let mut of = vec![usize::MAX; n];
    for (i, b) in p.blocks.iter().enumerate() {
        if b.is_empty() {
            return fail(format!("block {i} is empty"));
        }
        for &v in b {
            if v >= n || of[v] != usize::MAX {
                return fail(format!("node {v} is out of range or in two blocks"));
            }
            of[v] = i;
        }
    }
    if let Some(v) = of.iter().position(|&b| b == usize::MAX) {
        return fail(format!("node {v} is in no block"));
    }
    let mut boundary = vec![0usize; p.blocks.len()];
    let mut inner = vec![0usize; p.blocks.len()];
    let mut adjacent = BTreeSet::new();
    for &(a, b) in tree.edges() {
        if of[a] == of[b] {
            inner[of[a]] += 1;
        } else {
            boundary[of[a]] += 1;
            boundary[of[b]] += 1;
            adjacent.insert((of[a].min(of[b]), of[a].max(of[b])));
        }
    }
    for (i, b) in p.blocks.iter().enumerate() {
        if inner[i] + 1 != b.len() {
            return fail(format!("block {i} is not connected"));
        }
        if b.len() > p.z {
            return fail(format!("block {i} has {} > z = {} nodes", b.len(), p.z));
        }
        if boundary[i] > 2 && b.len() > 1 {
            return fail(format!(
                "block {i} has {} boundary edges but {} nodes",
                boundary[i],
                b.len()
            ));
        }
    }
    for (i, j) in adjacent {
        if p.blocks[i].len() + p.blocks[j].len() <= p.z && boundary[i] + boundary[j] - 2 <= 2 {
            return fail(format!("adjacent blocks {i} and {j} could be merged"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::random_binary_tree;

    #[test]
    fn small_tree_is_one_block() {
        let t = random_binary_tree(4, 0);
        let p = restricted_partition(&t, 10).unwrap();
        assert_eq!(p.blocks.len(), 1);
        validate_restricted_partition(&t, &p).unwrap();
    }

    #[test]
    fn order_one_gives_singletons() {
        let t = random_binary_tree(20, 3);
        let p = restricted_partition(&t, 1).unwrap();
        assert_eq!(p.blocks.len(), t.len());
        validate_restricted_partition(&t, &p).unwrap();
    }

    #[test]
    fn random_tree_counts() {
        let t = random_binary_tree(251, 9);
        assert_eq!(t.len(), 500);
        let p = restricted_partition(&t, 10).unwrap();
        validate_restricted_partition(&t, &p).unwrap();
        assert!(p.blocks.len() <= 6 * 50);
    }

    #[test]
    fn validator_catches_problems() {
        let t = Tree::new(4, vec![(0, 3), (1, 3), (2, 3)]).unwrap();
        let p = RestrictedPartition {
            z: 4,
            blocks: vec![vec![0, 1, 2, 3]],
        };
        validate_restricted_partition(&t, &p).unwrap();
        let p = RestrictedPartition {
            z: 4,
            blocks: vec![vec![0, 3], vec![1], vec![2]],
        };
        assert!(validate_restricted_partition(&t, &p).is_err());
        let p = RestrictedPartition {
            z: 4,
            blocks: vec![vec![0, 1], vec![2, 3]],
        };
        assert!(validate_restricted_partition(&t, &p).is_err());
        assert!(restricted_partition(&t, 0).is_err());
    }
}
