use serde::{Deserialize, Serialize};

use super::{check_leaf_labels, CarvingDecomposition, DecompositionError, Editable, Tree};
use crate::graph::{EdgeId, Graph};

/// Unrooted tree, internal degree 3, leaves labelled by graph edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    pub tree: Tree,
    /// Edge id at each tree node; `None` on internal nodes.
    pub labels: Vec<Option<EdgeId>>,
}

impl BranchDecomposition {
    pub fn new(tree: Tree, labels: Vec<Option<EdgeId>>) -> Self {
        Self { tree, labels }
    }
}

/// Largest number of vertices incident to edges on both sides of a tree edge.
pub fn validate_branch(
    g: &Graph,
    bd: &BranchDecomposition,
) -> std::result::Result<usize, DecompositionError> {
    if g.m() == 0 {
        return Err(DecompositionError::Empty { what: "edges" });
    }
    let leaf_of = check_leaf_labels(&bd.tree, &bd.labels, g.m())?;
    let rooted = bd.tree.rooted(0);
    let mut boundary = vec![0usize; bd.tree.len()];
    let mut w = vec![0i64; bd.tree.len()];
    for v in 0..g.n() {
        let incident: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&u| leaf_of[g.edge_id(u, v).expect("neighbor edge")])
            .collect();
        if incident.len() < 2 {
            continue;
        }
        w.iter_mut().for_each(|x| *x = 0);
        for &l in &incident {
            w[l] += 1;
        }
        let sums = rooted.subtree_sums(&w);
        let total = incident.len() as i64;
        for c in 0..bd.tree.len() {
            if c != rooted.root && sums[c] > 0 && sums[c] < total {
                boundary[c] += 1;
            }
        }
    }
    Ok(boundary.into_iter().max().unwrap_or(0))
}

/// Replaces each vertex leaf by a subtree holding the edges assigned to that
/// vertex; every edge goes to its lower-id endpoint.
pub fn carving_to_branch(
    g: &Graph,
    cd: &CarvingDecomposition,
) -> std::result::Result<BranchDecomposition, DecompositionError> {
    let leaf_of = cd.leaf_of(g.n())?;
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(DecompositionError::IsolatedVertex { vertex: v });
    }
    let mut assigned: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        assigned[u].push(e);
    }
    let mut t = Editable::from_tree(&cd.tree, &vec![None; cd.tree.len()]);
    for v in 0..g.n() {
        let node = leaf_of[v];
        match assigned[v].as_slice() {
            [] => t.remove(node),
            [e] => t.labels[node] = Some(*e),
            edges => hang_chain(&mut t, node, edges),
        }
    }
    t.tidy();
    let (tree, labels) = t.finish()?;
    Ok(BranchDecomposition::new(tree, labels))
}

/// Turns leaf `node` into the top of a binary caterpillar whose leaves carry
/// `labels` (at least two).
fn hang_chain(t: &mut Editable, node: usize, labels: &[usize]) {
    let mut top = node;
    for (i, &l) in labels.iter().enumerate() {
        if i + 2 == labels.len() {
            let a = t.add_node(Some(l));
            let b = t.add_node(Some(labels[i + 1]));
            t.link(top, a);
            t.link(top, b);
            break;
        }
        let leaf = t.add_node(Some(l));
        let next = t.add_node(None);
        t.link(top, leaf);
        t.link(top, next);
        top = next;
    }
}

/// Replaces each edge leaf by the zero, one or two endpoints assigned to it;
/// every vertex goes to its lowest-id incident edge.
pub fn branch_to_carving(
    g: &Graph,
    bd: &BranchDecomposition,
) -> std::result::Result<CarvingDecomposition, DecompositionError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(DecompositionError::IsolatedVertex { vertex: v });
    }
    if g.m() == 0 {
        return Err(DecompositionError::Empty { what: "edges" });
    }
    let leaf_of = check_leaf_labels(&bd.tree, &bd.labels, g.m())?;
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
    for v in 0..g.n() {
        let e = g
            .neighbors(v)
            .iter()
            .map(|&u| g.edge_id(u, v).expect("neighbor edge"))
            .min()
            .expect("no isolated vertices");
        assigned[e].push(v);
    }
    if bd.tree.len() == 1 {
        // a single edge: its two endpoints form the whole carving
        let tree = Tree::new(2, vec![(0, 1)])?;
        let vs = &assigned[0];
        return Ok(CarvingDecomposition::new(
            tree,
            vec![Some(vs[0]), Some(vs[1])],
        ));
    }
    let mut t = Editable::from_tree(&bd.tree, &vec![None; bd.tree.len()]);
    for e in 0..g.m() {
        let node = leaf_of[e];
        match assigned[e].as_slice() {
            [] => t.remove(node),
            [v] => t.labels[node] = Some(*v),
            vs => hang_chain(&mut t, node, vs),
        }
    }
    t.tidy();
    let (tree, labels) = t.finish()?;
    Ok(CarvingDecomposition::new(tree, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::LinearArrangement;
    use crate::decomposition::{
        caterpillar_carving_from_arrangement, exact_carving_width, validate_carving,
    };
    use crate::generators::*;

    fn star_bd(m: usize) -> BranchDecomposition {
        let edges = (0..m).map(|e| (e, m)).collect();
        let mut labels: Vec<Option<usize>> = (0..m).map(Some).collect();
        labels.push(None);
        BranchDecomposition::new(Tree::new(m + 1, edges).unwrap(), labels)
    }

    #[test]
    fn triangle_star_has_width_two() {
        let g = complete(3).unwrap();
        assert_eq!(validate_branch(&g, &star_bd(3)).unwrap(), 2);
    }

    #[test]
    fn single_edge() {
        let g = path(2).unwrap();
        let (_, cd) = exact_carving_width(&g).unwrap();
        let bd = carving_to_branch(&g, &cd).unwrap();
        assert_eq!(bd.tree.len(), 1);
        assert_eq!(validate_branch(&g, &bd).unwrap(), 0);
        let back = branch_to_carving(&g, &bd).unwrap();
        assert_eq!(back.tree.len(), 2);
        assert_eq!(validate_carving(&g, &back).unwrap(), 1);
    }

    #[test]
    fn triangle_round_trip() {
        let g = complete(3).unwrap();
        let (cw, cd) = exact_carving_width(&g).unwrap();
        let bd = carving_to_branch(&g, &cd).unwrap();
        let bw = validate_branch(&g, &bd).unwrap();
        assert_eq!(bw, 2);
        assert!(bw <= g.max_degree() * cw);
        let back = branch_to_carving(&g, &bd).unwrap();
        assert!(validate_carving(&g, &back).unwrap() <= 2 * bw);
    }

    #[test]
    fn k33_conversion_bound() {
        let g = k3n(3).unwrap();
        let (cw, cd) = exact_carving_width(&g).unwrap();
        assert_eq!(cw, 4);
        let bd = carving_to_branch(&g, &cd).unwrap();
        assert!(validate_branch(&g, &bd).unwrap() <= 3 * 4);
    }

    /// The star K_{1,3} has branch width 1 but carving width 3, so no
    /// conversion can keep carving width within twice the branch width. The
    /// valid bound in that direction is the degree factor.
    #[test]
    fn star_breaks_factor_two() {
        let g = star(3).unwrap();
        let bd = star_bd(3);
        let bw = validate_branch(&g, &bd).unwrap();
        assert_eq!(bw, 1);
        let cd = branch_to_carving(&g, &bd).unwrap();
        let cw = validate_carving(&g, &cd).unwrap();
        assert_eq!(cw, 3);
        assert!(cw > 2 * bw);
        assert!(cw <= g.max_degree() * bw);
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let cd = caterpillar_carving_from_arrangement(&g, &LinearArrangement::identity(3)).unwrap();
        assert_eq!(
            carving_to_branch(&g, &cd),
            Err(DecompositionError::IsolatedVertex { vertex: 2 })
        );
    }

    #[test]
    fn conversions_produce_valid_trees() {
        for seed in 0..10 {
            let g = random_connected(8, 6, seed).unwrap();
            let (cw, cd) = exact_carving_width(&g).unwrap();
            let bd = carving_to_branch(&g, &cd).unwrap();
            let bw = validate_branch(&g, &bd).unwrap();
            assert!(bw <= g.max_degree() * cw);
            assert!(bw <= 2 * cw);
            let back = branch_to_carving(&g, &bd).unwrap();
            let cw2 = validate_carving(&g, &back).unwrap();
            assert!(cw2 <= g.max_degree() * bw);
        }
    }
}
