//! Brute-force reference values, used to cross-check the exact solvers.
//!
//! Everything here enumerates all `n!` orderings (or all root choices), so it
//! is only usable for small graphs.

use std::collections::HashMap;

use crate::arrangement::{edge_separation, span, vertex_separation, LinearArrangement};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Execution};

/// Oracles refuse graphs above this size.
pub const ORACLE_LIMIT: usize = 9;

fn guard(g: &Graph) -> Result<()> {
    if g.n() > ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            solver: "oracle",
            n: g.n(),
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Lexicographic successor; false once the last permutation is passed.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Minimum of `f` over all orderings of `0..n`.
pub fn min_over_orderings<F>(n: usize, exec: Execution, f: F) -> usize
where
    F: Fn(&[usize]) -> usize + Sync + Send,
{
    if n == 0 {
        return f(&[]);
    }
    let firsts: Vec<usize> = (0..n).collect();
    par::map(exec, &firsts, |&first| {
        let mut rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
        let mut perm = Vec::with_capacity(n);
        let mut best = usize::MAX;
        loop {
            perm.clear();
            perm.push(first);
            perm.extend_from_slice(&rest);
            best = best.min(f(&perm));
            if !next_permutation(&mut rest) {
                break;
            }
        }
        best
    })
    .into_iter()
    .min()
    .unwrap_or(0)
}

fn arrangement_min(g: &Graph, w: fn(&Graph, &LinearArrangement) -> Result<usize>) -> Result<usize> {
    guard(g)?;
    Ok(min_over_orderings(g.n(), Execution::default(), |p| {
        let a = LinearArrangement::new(p.to_vec()).expect("permutation");
        w(g, &a).expect("sizes match")
    }))
}

pub fn cutwidth(g: &Graph) -> Result<usize> {
    arrangement_min(g, edge_separation)
}

pub fn pathwidth(g: &Graph) -> Result<usize> {
    arrangement_min(g, vertex_separation)
}

pub fn bandwidth(g: &Graph) -> Result<usize> {
    arrangement_min(g, span)
}

/// Width of an elimination ordering: the largest number of not yet
/// eliminated neighbors a vertex has (in the fill-in graph) when eliminated.
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let n = g.n();
    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut gone = vec![false; n];
    let mut width = 0;
    for &v in order {
        let nb: Vec<usize> = (0..n).filter(|&w| !gone[w] && adj[v][w]).collect();
        width = width.max(nb.len());
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    width
}

/// Treewidth as the minimum elimination width over all `n!` orderings.
pub fn treewidth_by_orderings(g: &Graph) -> Result<usize> {
    guard(g)?;
    Ok(min_over_orderings(g.n(), Execution::default(), |p| {
        elimination_width(g, p)
    }))
}

/// Treewidth by exhaustive search over elimination orderings, played out on
/// an explicit fill-in graph. Orderings are pruned once they cannot beat the
/// best found, and an eliminated set reached again at no better width is
/// skipped. Exact up to [`TREEWIDTH_ORACLE_LIMIT`] vertices.
pub fn treewidth(g: &Graph) -> Result<usize> {
    if g.n() > TREEWIDTH_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            solver: "treewidth oracle",
            n: g.n(),
            limit: TREEWIDTH_ORACLE_LIMIT,
        });
    }
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = g.neighbor_masks().into_iter().map(|m| m as u32).collect();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = n - 1;
    let mut seen = HashMap::new();
    eliminate(&adj, all, 0, &mut best, &mut seen);
    Ok(best)
}

pub const TREEWIDTH_ORACLE_LIMIT: usize = 20;

fn eliminate(
    adj: &[u32],
    remaining: u32,
    width: usize,
    best: &mut usize,
    seen: &mut HashMap<u32, usize>,
) {
    let left = remaining.count_ones() as usize;
    if left == 0 || left - 1 <= width {
        *best = (*best).min(width);
        return;
    }
    match seen.get(&remaining) {
        Some(&w) if w <= width => return,
        _ => {
            seen.insert(remaining, width);
        }
    }
    for v in 0..adj.len() {
        if remaining & (1 << v) == 0 {
            continue;
        }
        let nb = adj[v] & remaining & !(1 << v);
        let w = width.max(nb.count_ones() as usize);
        if w >= *best {
            continue;
        }
        let mut next = adj.to_vec();
        for a in 0..adj.len() {
            if nb & (1 << a) != 0 {
                next[a] |= nb & !(1 << a);
            }
        }
        eliminate(&next, remaining & !(1 << v), w, best, seen);
    }
}

/// Tree-depth straight from the recursive definition, without memoization.
/// Depth counts edges on the longest root-to-leaf path.
pub fn treedepth(g: &Graph) -> Result<usize> {
    guard(g)?;
    let alive: Vec<usize> = (0..g.n()).collect();
    Ok(td_rec(g, &alive).saturating_sub(1))
}

fn td_rec(g: &Graph, alive: &[usize]) -> usize {
    if alive.is_empty() {
        return 0;
    }
    let (sub, _) = g.induced(alive);
    let comps = sub.components();
    if comps.len() > 1 {
        return comps
            .iter()
            .map(|c| td_rec(g, &c.iter().map(|&i| alive[i]).collect::<Vec<_>>()))
            .max()
            .unwrap_or(0);
    }
    1 + alive
        .iter()
        .map(|&root| {
            let rest: Vec<usize> = alive.iter().copied().filter(|&v| v != root).collect();
            td_rec(g, &rest)
        })
        .min()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn permutations_are_all_visited() {
        let mut count = 0;
        let mut p = vec![0, 1, 2, 3];
        loop {
            count += 1;
            if !next_permutation(&mut p) {
                break;
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn small_values() {
        let p4 = path(4).unwrap();
        assert_eq!(cutwidth(&p4).unwrap(), 1);
        assert_eq!(treewidth(&p4).unwrap(), 1);
        assert_eq!(treedepth(&p4).unwrap(), 2);
        assert_eq!(treedepth(&Graph::empty(1)).unwrap(), 0);
        assert_eq!(bandwidth(&cycle(6).unwrap()).unwrap(), 2);
        assert_eq!(treewidth(&complete(5).unwrap()).unwrap(), 4);
        assert!(cutwidth(&path(12).unwrap()).is_err());
    }
}
