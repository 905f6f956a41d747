//! Exact minimum-width arrangements.
//!
//! Cutwidth and pathwidth both take the maximum of a set function over the
//! prefixes of the arrangement, so they share one DP over prefix sets.
//! Bandwidth is searched by branch and bound.

use super::LinearArrangement;
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::par::{self, Execution};
use crate::solver::Solver;
use crate::subset::{bits, layered};

pub fn exact_cutwidth(g: &Graph) -> Result<(usize, LinearArrangement)> {
    Solver::default().cutwidth(g)
}

pub fn exact_pathwidth(g: &Graph) -> Result<(usize, LinearArrangement)> {
    Solver::default().pathwidth(g)
}

pub fn exact_bandwidth(g: &Graph) -> Result<(usize, LinearArrangement)> {
    Solver::default().bandwidth(g)
}

impl Solver {
    /// Minimum edge separation, with the lexicographically smallest optimal
    /// arrangement.
    pub fn cutwidth(&self, g: &Graph) -> Result<(usize, LinearArrangement)> {
        self.check("cutwidth", g.n(), self.limits.cutwidth)?;
        let adj = masks(g);
        Ok(prefix_dp(g.n(), self.exec, |s| {
            bits(s).map(|v| (adj[v] & !s).count_ones()).sum::<u32>() as u16
        }))
    }

    /// Minimum vertex separation (= pathwidth), lexicographically smallest
    /// optimal arrangement.
    pub fn pathwidth(&self, g: &Graph) -> Result<(usize, LinearArrangement)> {
        self.check("pathwidth", g.n(), self.limits.pathwidth)?;
        let adj = masks(g);
        Ok(prefix_dp(g.n(), self.exec, |s| {
            bits(s).filter(|&v| adj[v] & !s != 0).count() as u16
        }))
    }

    /// Minimum span, lexicographically smallest optimal arrangement.
    pub fn bandwidth(&self, g: &Graph) -> Result<(usize, LinearArrangement)> {
        self.check("bandwidth", g.n(), self.limits.bandwidth)?;
        let n = g.n();
        if g.m() == 0 {
            return Ok((0, LinearArrangement::identity(n)));
        }
        let mut k = bandwidth_lower_bound(g);
        loop {
            if let Some(order) = band_search(g, k, self.exec) {
                return Ok((k, LinearArrangement::new(order)?));
            }
            k += 1;
        }
    }
}

fn masks(g: &Graph) -> Vec<u32> {
    g.neighbor_masks().into_iter().map(|m| m as u32).collect()
}

/// `best[S]` = smallest achievable max of `cost` over the prefixes that
/// extend `S` to the full set. The cost of the full set is never counted.
fn prefix_dp<C>(n: usize, exec: Execution, cost: C) -> (usize, LinearArrangement)
where
    C: Fn(u32) -> u16 + Sync + Send,
{
    if n == 0 {
        return (0, LinearArrangement::identity(0));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let costs = par::map_range(exec, 1usize << n, |s| cost(s as u32));
    let step = |s: u32, v: usize, best: &[u16]| {
        let t = s | 1 << v;
        let c = if t == full { 0 } else { costs[t as usize] };
        c.max(best[t as usize])
    };
    let best = layered(n, exec, true, 0u16, |s, best| {
        if s == full {
            return 0;
        }
        bits(full & !s).map(|v| step(s, v, best)).min().unwrap_or(0)
    });
    let width = best[0];
    let mut order = Vec::with_capacity(n);
    let mut s = 0u32;
    while s != full {
        let v = bits(full & !s)
            .find(|&v| step(s, v, &best) <= width)
            .expect("an optimal extension exists");
        order.push(v);
        s |= 1 << v;
    }
    (
        width as usize,
        LinearArrangement::new(order).expect("prefix DP yields a permutation"),
    )
}

/// Degree and local-density bounds: a vertex of degree `d` needs `ceil(d/2)`,
/// and a ball of radius `r` with `b` vertices needs `ceil((b-1)/(2r))`.
pub(crate) fn bandwidth_lower_bound(g: &Graph) -> usize {
    let n = g.n();
    let mut lb = if g.m() > 0 { 1 } else { 0 };
    lb = lb.max(g.max_degree().div_ceil(2));
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut frontier = vec![s];
        let mut reached = 1;
        let mut r = 0;
        while !frontier.is_empty() {
            r += 1;
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in g.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = r;
                        next.push(w);
                    }
                }
            }
            reached += next.len();
            if !next.is_empty() {
                lb = lb.max((reached - 1).div_ceil(2 * r));
            }
            frontier = next;
        }
    }
    lb
}

struct Band<'a> {
    g: &'a Graph,
    k: usize,
    pos: Vec<usize>,
    order: Vec<VertexId>,
}

impl Band<'_> {
    fn feasible(&self, v: VertexId) -> bool {
        let p = self.order.len();
        self.g
            .neighbors(v)
            .iter()
            .all(|&u| self.pos[u] == usize::MAX || p - self.pos[u] <= self.k)
    }

    /// Every unplaced vertex with a placed neighbor has a deadline; they must
    /// fit into the free positions before their deadlines.
    fn deadlines_ok(&self) -> bool {
        let mut deadlines: Vec<usize> = (0..self.g.n())
            .filter(|&w| self.pos[w] == usize::MAX)
            .filter_map(|w| {
                self.g
                    .neighbors(w)
                    .iter()
                    .filter(|&&u| self.pos[u] != usize::MAX)
                    .map(|&u| self.pos[u] + self.k)
                    .min()
            })
            .collect();
        deadlines.sort_unstable();
        let next = self.order.len();
        deadlines.iter().enumerate().all(|(i, &d)| d >= next + i)
    }

    fn search(&mut self) -> bool {
        if self.order.len() == self.g.n() {
            return true;
        }
        for v in 0..self.g.n() {
            if self.pos[v] == usize::MAX && self.feasible(v) {
                self.place(v);
                if self.deadlines_ok() && self.search() {
                    return true;
                }
                self.unplace(v);
            }
        }
        false
    }

    fn place(&mut self, v: VertexId) {
        self.pos[v] = self.order.len();
        self.order.push(v);
    }

    fn unplace(&mut self, v: VertexId) {
        self.pos[v] = usize::MAX;
        self.order.pop();
    }
}

/// Lexicographically smallest arrangement of span at most `k`, if any. The
/// first position is tried in parallel; the lowest successful start wins.
fn band_search(g: &Graph, k: usize, exec: Execution) -> Option<Vec<VertexId>> {
    let starts: Vec<VertexId> = (0..g.n()).collect();
    par::find_map_first(exec, &starts, |&v| {
        let mut b = Band {
            g,
            k,
            pos: vec![usize::MAX; g.n()],
            order: Vec::with_capacity(g.n()),
        };
        b.place(v);
        (b.deadlines_ok() && b.search()).then_some(b.order)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{edge_separation, span, vertex_separation};
    use crate::generators::*;
    use crate::oracle;

    #[test]
    fn k34_cutwidth_is_six() {
        let g = k3n(4).unwrap();
        let (w, a) = exact_cutwidth(&g).unwrap();
        assert_eq!(w, 6);
        assert_eq!(edge_separation(&g, &a).unwrap(), 6);
    }

    #[test]
    fn k33_cutwidth_matches_brute_force() {
        let g = k3n(3).unwrap();
        let (w, _) = exact_cutwidth(&g).unwrap();
        assert_eq!(w, oracle::cutwidth(&g).unwrap());
        assert_eq!(w, 5);
    }

    #[test]
    fn path_widths() {
        let g = path(6).unwrap();
        assert_eq!(
            exact_cutwidth(&g).unwrap(),
            (1, LinearArrangement::identity(6))
        );
        assert_eq!(exact_pathwidth(&g).unwrap().0, 1);
        assert_eq!(
            exact_bandwidth(&g).unwrap(),
            (1, LinearArrangement::identity(6))
        );
    }

    #[test]
    fn pathwidth_examples() {
        assert_eq!(exact_pathwidth(&k3n(5).unwrap()).unwrap().0, 3);
        assert_eq!(
            exact_pathwidth(&k3n(5).unwrap()).unwrap().0,
            oracle::pathwidth(&k3n(5).unwrap()).unwrap()
        );
        assert_eq!(exact_pathwidth(&star(5).unwrap()).unwrap().0, 1);
        assert_eq!(exact_pathwidth(&complete(4).unwrap()).unwrap().0, 3);
    }

    #[test]
    fn bandwidth_examples() {
        for n in 3..9 {
            let (w, a) = exact_bandwidth(&cycle(n).unwrap()).unwrap();
            assert_eq!(w, 2);
            assert_eq!(span(&cycle(n).unwrap(), &a).unwrap(), 2);
        }
        let g = k3n(4).unwrap();
        assert_eq!(
            exact_bandwidth(&g).unwrap().0,
            oracle::bandwidth(&g).unwrap()
        );
    }

    #[test]
    fn trivial_graphs() {
        let g = Graph::empty(0);
        assert_eq!(exact_cutwidth(&g).unwrap().0, 0);
        assert_eq!(exact_bandwidth(&g).unwrap().0, 0);
        let g = Graph::empty(3);
        assert_eq!(
            exact_pathwidth(&g).unwrap(),
            (0, LinearArrangement::identity(3))
        );
    }

    #[test]
    fn size_limit_is_an_error() {
        let g = path(25).unwrap();
        assert!(matches!(
            exact_cutwidth(&g),
            Err(crate::Error::SizeLimit {
                solver: "cutwidth",
                ..
            })
        ));
    }

    #[test]
    fn modes_agree() {
        let g = random_connected(11, 9, 3).unwrap();
        let seq = Solver::sequential();
        let par = Solver::default();
        assert_eq!(seq.cutwidth(&g).unwrap(), par.cutwidth(&g).unwrap());
        assert_eq!(seq.pathwidth(&g).unwrap(), par.pathwidth(&g).unwrap());
        assert_eq!(seq.bandwidth(&g).unwrap(), par.bandwidth(&g).unwrap());
        let (pw, a) = par.pathwidth(&g).unwrap();
        assert_eq!(vertex_separation(&g, &a).unwrap(), pw);
    }
}
