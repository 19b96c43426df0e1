//! Enumeration of small trees without degree-2 vertices.
//!
//! Topologies are grown from the single edge: every such tree with `L + 1`
//! leaves arises from one with `L` leaves by hanging a new leaf on an
//! interior vertex or on a new vertex splitting an edge. Duplicates are
//! removed by a canonical string (AHU encoding rooted at the tree center).

use std::collections::BTreeMap;

use crate::rational::Rational;
use crate::tree::MetricTree;

/// An unlabeled tree shape with a canonical vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub leaves: usize,
    pub canonical: String,
    /// Edges over canonical vertex numbers, in DFS order from the center.
    pub edges: Vec<(usize, usize)>,
    labels: Vec<String>,
}

impl Topology {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Leaves are labeled `l1, l2, …` and interior vertices `x1, x2, …` in
    /// canonical DFS order; `weights[i]` goes on `edges[i]`.
    pub fn with_weights(&self, weights: &[Rational]) -> MetricTree {
        assert_eq!(weights.len(), self.edges.len(), "one weight per edge");
        MetricTree::from_edges(self.edges.iter().zip(weights).map(|(&(a, b), w)| {
            (self.labels[a].clone(), self.labels[b].clone(), w.clone())
        }))
        .expect("topology is a valid tree")
    }
}

/// Canonical AHU string of `adj` rooted at `root`.
pub fn rooted_encoding(adj: &[Vec<usize>], root: usize) -> String {
    fn go(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
        let mut children: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| go(adj, w, Some(v)))
            .collect();
        children.sort();
        format!("({})", children.concat())
    }
    go(adj, root, None)
}

/// The one or two centers of a tree, found by peeling leaves.
pub fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// `(encoding, root)` minimizing the encoding over the centers.
fn canonical_root(adj: &[Vec<usize>]) -> (String, usize) {
    centers(adj)
        .into_iter()
        .map(|c| (rooted_encoding(adj, c), c))
        .min()
        .expect("nonempty tree")
}

pub fn canonical_form(adj: &[Vec<usize>]) -> String {
    canonical_root(adj).0
}

fn build_topology(adj: &[Vec<usize>]) -> Topology {
    let (canonical, root) = canonical_root(adj);
    // Renumber in DFS order visiting children by ascending encoding.
    let mut order = Vec::with_capacity(adj.len());
    let mut edges = Vec::with_capacity(adj.len().saturating_sub(1));
    let mut number = vec![usize::MAX; adj.len()];
    fn visit(
        adj: &[Vec<usize>],
        v: usize,
        parent: Option<usize>,
        number: &mut Vec<usize>,
        order: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
    ) {
        number[v] = order.len();
        order.push(v);
        if let Some(p) = parent {
            edges.push((number[p], number[v]));
        }
        let mut children: Vec<(String, usize)> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| (rooted_encoding_from(adj, w, v), w))
            .collect();
        children.sort();
        for (_, w) in children {
            visit(adj, w, Some(v), number, order, edges);
        }
    }
    visit(adj, root, None, &mut number, &mut order, &mut edges);

    let (mut leaf_no, mut inner_no) = (0, 0);
    let labels = order
        .iter()
        .map(|&v| {
            if adj[v].len() == 1 {
                leaf_no += 1;
                format!("l{leaf_no}")
            } else {
                inner_no += 1;
                format!("x{inner_no}")
            }
        })
        .collect();
    Topology {
        leaves: adj.iter().filter(|a| a.len() == 1).count(),
        canonical,
        edges,
        labels,
    }
}

fn rooted_encoding_from(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_encoding_from(adj, w, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

fn grow(adj: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let n = adj.len();
    for v in 0..n {
        if adj[v].len() >= 3 {
            let mut g = adj.to_vec();
            g.push(vec![v]);
            g[v].push(n);
            out.push(g);
        }
    }
    for a in 0..n {
        for &b in &adj[a] {
            if a < b {
                let mut g = adj.to_vec();
                let (mid, leaf) = (n, n + 1);
                for slot in g[a].iter_mut() {
                    if *slot == b {
                        *slot = mid;
                    }
                }
                for slot in g[b].iter_mut() {
                    if *slot == a {
                        *slot = mid;
                    }
                }
                g.push(vec![a, b, leaf]);
                g.push(vec![mid]);
                out.push(g);
            }
        }
    }
    out
}

/// All topologies with `2 ≤ leaves ≤ max_leaves`, ordered by leaf count,
/// vertex count, then canonical string.
pub fn enumerate_topologies(max_leaves: usize) -> Vec<Topology> {
    if max_leaves < 2 {
        return Vec::new();
    }
    let mut level: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    let edge = vec![vec![1], vec![0]];
    level.insert(canonical_form(&edge), edge);
    let mut all = Vec::new();
    for _ in 2..=max_leaves {
        let mut current: Vec<Topology> = level.values().map(|adj| build_topology(adj)).collect();
        current.sort_by(|x, y| {
            (x.vertex_count(), &x.canonical).cmp(&(y.vertex_count(), &y.canonical))
        });
        let mut next = BTreeMap::new();
        for adj in level.values() {
            for g in grow(adj) {
                next.entry(canonical_form(&g)).or_insert(g);
            }
        }
        all.extend(current);
        level = next;
    }
    all
}

/// A weighted instance of an enumerated topology.
#[derive(Debug, Clone)]
pub struct WeightedTree {
    /// Index into [`enumerate_topologies`].
    pub topology: usize,
    pub topology_id: String,
    pub weights: Vec<Rational>,
    pub tree: MetricTree,
}

/// Every topology with every assignment of grid weights to its edges
/// (`gᵉ` instances per topology), in lexicographic grid-index order.
pub fn enumerate_trees(
    max_leaves: usize,
    grid: &[Rational],
) -> impl Iterator<Item = WeightedTree> + '_ {
    let g = grid.len();
    enumerate_topologies(max_leaves)
        .into_iter()
        .enumerate()
        .flat_map(move |(index, topo)| {
            let e = topo.edge_count();
            let count = if g == 0 { 0 } else { g.pow(e as u32) };
            let id = format!("L{}-{}", topo.leaves, topo.canonical);
            (0..count).map(move |mut code| {
                let mut weights = vec![grid[0].clone(); e];
                for slot in (0..e).rev() {
                    weights[slot] = grid[code % g].clone();
                    code /= g;
                }
                WeightedTree {
                    topology: index,
                    topology_id: id.clone(),
                    tree: topo.with_weights(&weights),
                    weights,
                }
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn up_to_three_leaves() {
        let topos = enumerate_topologies(3);
        assert_eq!(topos.len(), 2);
        assert_eq!(topos[0].leaves, 2);
        assert_eq!(topos[1].leaves, 3);
        let trees: Vec<_> = enumerate_trees(3, &[int(1)]).collect();
        assert_eq!(trees.len(), 2);
        assert!(trees[1].tree.is_star());
    }

    #[test]
    fn four_leaves() {
        let topos = enumerate_topologies(4);
        let shapes: Vec<(usize, usize)> = topos.iter().map(|t| (t.leaves, t.vertex_count())).collect();
        assert_eq!(shapes, [(2, 2), (3, 4), (4, 5), (4, 6)]);
    }

    #[test]
    fn weight_assignments_are_counted() {
        let grid = [int(1), int(2), ratio(1, 2)];
        let star3: Vec<_> = enumerate_trees(3, &grid).filter(|w| w.tree.is_star()).collect();
        assert_eq!(star3.len(), 27);
        assert_eq!(star3[0].weights, vec![int(1); 3]);
        assert_eq!(star3[1].weights, vec![int(1), int(1), int(2)]);
    }

    #[test]
    fn topology_trees_have_canonical_labels() {
        for t in enumerate_topologies(5) {
            let tree = t.with_weights(&vec![int(1); t.edge_count()]);
            assert_eq!(tree.leaf_count(), t.leaves);
            assert!(tree.suppressed().is_empty());
        }
    }
}
