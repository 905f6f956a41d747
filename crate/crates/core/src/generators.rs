//! Graph families used by tests, experiments and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `K_{a,b}`; side A is `0..a`, side B is `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::invalid("complete bipartite sides must be nonempty"));
    }
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Ok(Graph::new(a + b, edges)?)
}

/// `K_{3,n}`.
pub fn k3n(n: usize) -> Result<Graph> {
    complete_bipartite(3, n)
}

/// `k` disjoint copies of `K_s`; copy `i` occupies `i*s..(i+1)*s`.
pub fn disjoint_cliques(k: usize, s: usize) -> Result<Graph> {
    if k == 0 || s == 0 {
        return Err(Error::invalid("clique count and size must be positive"));
    }
    let mut edges = Vec::new();
    for c in 0..k {
        let base = c * s;
        for u in 0..s {
            for v in u + 1..s {
                edges.push((base + u, base + v));
            }
        }
    }
    Ok(Graph::new(k * s, edges)?)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Ok(Graph::empty(0));
    }
    disjoint_cliques(1, n)
}

/// Vertex `i` adjacent to `i ± o (mod n)` for each offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid("circulant needs n >= 3"));
    }
    if let Some(&o) = offsets.iter().find(|&&o| o == 0 || o > n / 2) {
        return Err(Error::invalid(format!(
            "circulant offset {o} outside [1, {}]",
            n / 2
        )));
    }
    let mut edges: Vec<_> = offsets
        .iter()
        .flat_map(|&o| (0..n).map(move |i| (i.min((i + o) % n), i.max((i + o) % n))))
        .collect();
    // offset n/2 on even n and repeated offsets produce each edge twice
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::new(n, edges)?)
}

pub fn path(n: usize) -> Result<Graph> {
    Ok(Graph::new(n, (1..n).map(|i| (i - 1, i)))?)
}

pub fn cycle(n: usize) -> Result<Graph> {
    circulant(n, &[1])
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> Result<Graph> {
    complete_bipartite(1, k)
}

/// Cycle on `1..=k` plus hub 0.
pub fn wheel(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::invalid("wheel needs a rim of at least 3"));
    }
    let rim = (0..k).map(|i| (1 + i, 1 + (i + 1) % k));
    let spokes = (1..=k).map(|i| (0, i));
    Ok(Graph::new(k + 1, rim.chain(spokes))?)
}

/// The `d`-dimensional hypercube.
pub fn hypercube(d: usize) -> Result<Graph> {
    if d > 16 {
        return Err(Error::invalid("hypercube dimension above 16"));
    }
    let n = 1usize << d;
    let edges = (0..n).flat_map(|v| {
        (0..d)
            .map(move |b| (v, v ^ (1 << b)))
            .filter(|&(u, w)| u < w)
    });
    Ok(Graph::new(n, edges)?)
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).expect("petersen graph")
}

/// Connected random graph: a random spanning tree (each vertex attaches to a
/// uniformly chosen earlier vertex) plus `extra` further distinct edges,
/// capped at the complete graph.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("random graph needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present[u][v] = true;
        edges.push((u, v));
    }
    let room = n * (n - 1) / 2 - edges.len();
    for _ in 0..extra.min(room) {
        loop {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            let (u, v) = (u.min(v), u.max(v));
            if u != v && !present[u][v] {
                present[u][v] = true;
                edges.push((u, v));
                break;
            }
        }
    }
    Ok(Graph::new(n, edges)?)
}

/// Erdős–Rényi `G(n, p)` with `p = num/den`.
pub fn random_gnp(n: usize, num: u32, den: u32, seed: u64) -> Result<Graph> {
    if den == 0 || num > den {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_range(0..den) < num {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_counts() {
        let g = complete_bipartite(3, 5).unwrap();
        assert_eq!((g.n(), g.m()), (8, 15));
        let g = complete_bipartite(1, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = complete_bipartite(3, 11).unwrap();
        assert_eq!((g.n(), g.m()), (14, 33));
        assert!(complete_bipartite(0, 3).is_err());
    }

    #[test]
    fn clique_counts() {
        let g = disjoint_cliques(2, 3).unwrap();
        assert_eq!((g.n(), g.m(), g.components().len()), (6, 6, 2));
        assert_eq!(disjoint_cliques(1, 4).unwrap(), complete(4).unwrap());
        let g = disjoint_cliques(3, 5).unwrap();
        assert_eq!((g.n(), g.m()), (15, 30));
    }

    #[test]
    fn circulant_examples() {
        assert_eq!(circulant(5, &[1]).unwrap().m(), 5);
        assert!(circulant(5, &[1]).unwrap().neighbors(0) == [1, 4]);
        assert_eq!(circulant(6, &[1, 2]).unwrap().m(), 12);
        assert_eq!(circulant(6, &[3]).unwrap().m(), 3);
        assert!(circulant(6, &[4]).is_err());
        assert!(circulant(6, &[0]).is_err());
    }

    #[test]
    fn misc_families() {
        assert_eq!(petersen().m(), 15);
        assert_eq!(hypercube(3).unwrap().m(), 12);
        assert_eq!(wheel(5).unwrap().m(), 10);
        let g = random_connected(12, 8, 7).unwrap();
        assert_eq!((g.m(), g.components().len()), (19, 1));
        assert_eq!(g, random_connected(12, 8, 7).unwrap());
    }
}
