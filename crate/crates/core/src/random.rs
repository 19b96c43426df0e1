//! Seeded random trees, points and rationals for sampling checks and tests.

use rand::Rng;

use crate::rational::{ratio, Rational};
use crate::tree::{EdgeId, MetricTree, TreePoint, VertexId};

/// `p/q` with `1 ≤ q ≤ max_den` and `0 < p/q ≤ 2`.
pub fn random_positive_rational<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den.max(1));
    let p = rng.gen_range(1..=2 * q);
    ratio(p, q)
}

/// Nonzero `p/q` with `1 ≤ q ≤ max_den` and `|p/q| ≤ 4`.
pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let value = random_positive_rational(rng, max_den) * ratio(2, 1);
    if rng.gen_bool(0.5) {
        value
    } else {
        -value
    }
}

/// A random tree with exactly `leaves` leaves (at least 2), no degree-2
/// vertices, and weights from [`random_positive_rational`].
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, leaves: usize, max_den: i64) -> MetricTree {
    let leaves = leaves.max(2);
    // Adjacency as edge list over integer vertices; vertices 0 and 1 start as a path.
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    let mut degree = vec![1usize, 1];
    let mut leaf_count = 2;
    while leaf_count < leaves {
        let interior: Vec<usize> = (0..degree.len()).filter(|&v| degree[v] >= 3).collect();
        let new_leaf = degree.len();
        if !interior.is_empty() && rng.gen_bool(0.5) {
            let host = interior[rng.gen_range(0..interior.len())];
            edges.push((host, new_leaf));
            degree[host] += 1;
            degree.push(1);
        } else {
            let i = rng.gen_range(0..edges.len());
            let (a, b) = edges[i];
            let mid = new_leaf + 1;
            edges[i] = (a, mid);
            edges.push((mid, b));
            edges.push((mid, new_leaf));
            degree.push(1);
            degree.push(3);
        }
        leaf_count += 1;
    }
    MetricTree::from_edges(edges.into_iter().map(|(a, b)| {
        (
            format!("v{a:02}"),
            format!("v{b:02}"),
            random_positive_rational(rng, max_den),
        )
    }))
    .expect("generated tree is valid")
}

/// A vertex (one time in four) or an interior edge point at a random
/// rational fraction of the edge.
pub fn random_point<R: Rng + ?Sized>(tree: &MetricTree, rng: &mut R) -> TreePoint {
    if rng.gen_bool(0.25) {
        return TreePoint::Vertex(VertexId(rng.gen_range(0..tree.vertex_count())));
    }
    let edge = EdgeId(rng.gen_range(0..tree.edge_count()));
    let q = rng.gen_range(2..=12);
    let p = rng.gen_range(1..q);
    TreePoint::Edge {
        edge,
        offset: &tree.edge(edge).weight * ratio(p, q),
    }
}
