//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own distance or path code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use mtree_embed::rational::{int, Rational};
use mtree_embed::tree::EdgeId;
use mtree_embed::{MetricTree, TreePoint};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn h_tree() -> MetricTree {
    MetricTree::from_edges([
        ("a", "b", int(1)),
        ("a", "l1", int(1)),
        ("a", "l2", int(1)),
        ("b", "l3", int(1)),
        ("b", "l4", int(1)),
    ])
    .unwrap()
}

pub fn point(tree: &MetricTree, label: &str) -> TreePoint {
    TreePoint::Vertex(tree.vertex(label).unwrap())
}

/// A plain weighted graph rebuilt from the tree's edge list.
pub struct GraphOracle {
    pub labels: Vec<String>,
    pub ends: Vec<(usize, usize, Rational)>,
    adj: Vec<Vec<(usize, usize)>>,
    pub dist: Vec<Vec<Rational>>,
}

impl GraphOracle {
    pub fn new(tree: &MetricTree) -> Self {
        let list = tree.edge_list();
        let mut labels: BTreeSet<String> = BTreeSet::new();
        for (a, b, _) in &list {
            labels.insert(a.clone());
            labels.insert(b.clone());
        }
        let labels: Vec<String> = labels.into_iter().collect();
        let idx: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let ends: Vec<_> = list
            .iter()
            .map(|(a, b, w)| (idx[a.as_str()], idx[b.as_str()], w.clone()))
            .collect();
        let mut adj = vec![Vec::new(); labels.len()];
        for (e, (a, b, _)) in ends.iter().enumerate() {
            adj[*a].push((*b, e));
            adj[*b].push((*a, e));
        }
        let n = labels.len();
        let mut dist = vec![vec![Rational::zero(); n]; n];
        for s in 0..n {
            // Breadth-first accumulation; each vertex is reached once in a tree.
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        dist[s][w] = &dist[s][v] + &ends[e].2;
                        queue.push_back(w);
                    }
                }
            }
        }
        GraphOracle {
            labels,
            ends,
            adj,
            dist,
        }
    }

    pub fn index(&self, label: &str) -> usize {
        self.labels.iter().position(|l| l == label).unwrap()
    }

    /// Vertex sequence of the path between two vertices.
    pub fn vertex_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.labels.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        path
    }

    /// `(u, v, offset from u)` in oracle indices for a library point.
    pub fn locate(&self, tree: &MetricTree, p: &TreePoint) -> (usize, usize, Rational) {
        match p {
            TreePoint::Vertex(v) => {
                let i = self.index(tree.label(*v));
                (i, i, Rational::zero())
            }
            TreePoint::Edge { edge, offset } => {
                let e = tree.edge(*edge);
                (
                    self.index(tree.label(e.u)),
                    self.index(tree.label(e.v)),
                    offset.clone(),
                )
            }
        }
    }

    /// Distance between two points: shortest combination through the
    /// endpoints of their edges, or the offset gap on a shared edge.
    pub fn distance(&self, tree: &MetricTree, p: &TreePoint, q: &TreePoint) -> Rational {
        let (pu, pv, ps) = self.locate(tree, p);
        let (qu, qv, qs) = self.locate(tree, q);
        if (pu, pv) == (qu, qv) && pu != pv {
            return (&ps - &qs).abs();
        }
        let pw = self.weight(pu, pv);
        let qw = self.weight(qu, qv);
        let p_ends = [(pu, ps.clone()), (pv, &pw - &ps)];
        let q_ends = [(qu, qs.clone()), (qv, &qw - &qs)];
        let mut best: Option<Rational> = None;
        for (x, dx) in &p_ends {
            for (y, dy) in &q_ends {
                let d = dx + &self.dist[*x][*y] + dy;
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap()
    }

    fn weight(&self, u: usize, v: usize) -> Rational {
        if u == v {
            return Rational::zero();
        }
        self.ends
            .iter()
            .find(|(a, b, _)| (*a, *b) == (u, v) || (*a, *b) == (v, u))
            .map(|(_, _, w)| w.clone())
            .unwrap()
    }
}

/// Midpoint of every edge plus every vertex.
pub fn vertices_and_midpoints(tree: &MetricTree) -> Vec<TreePoint> {
    let mut points: Vec<TreePoint> = tree.vertices().map(TreePoint::Vertex).collect();
    for e in tree.edge_ids() {
        let w = &tree.edge(e).weight;
        points.push(TreePoint::Edge {
            edge: e,
            offset: w / int(2),
        });
    }
    points
}

pub fn edge_id(tree: &MetricTree, a: &str, b: &str) -> EdgeId {
    let (va, vb) = (tree.vertex(a).unwrap(), tree.vertex(b).unwrap());
    tree.edge_ids()
        .find(|&e| {
            let x = tree.edge(e);
            (x.u, x.v) == (va, vb) || (x.u, x.v) == (vb, va)
        })
        .unwrap()
}
