//! Finite simplicial metric trees.
//!
//! A [`MetricTree`] is a finite connected acyclic graph with strictly positive
//! rational edge weights, viewed as a geodesic metric space that includes the
//! interior points of its edges. Interior vertices of degree two carry no
//! metric information and are merged away at construction time; the merged
//! vertices stay locatable as [`TreePoint`]s through [`MetricTree::locate`].
//!
//! Vertex ids follow label order and edge ids follow `(u, v)` order, so every
//! construction built on top of a tree is reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, half, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// An edge with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Traversal direction of an edge: `Forward` runs from `u` to `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A point of the tree: a vertex, or a point strictly inside an edge.
///
/// The offset of an interior point is measured from the edge's lower endpoint
/// `u`, so two equal points always compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreePoint {
    Vertex(VertexId),
    Edge { edge: EdgeId, offset: Rational },
}

/// A vertex that was merged into an edge during degree-2 suppression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuppressedVertex {
    pub label: String,
    pub edge: EdgeId,
    /// Distance from the edge's `u` endpoint.
    pub offset: Rational,
}

/// One edge (or part of one) traversed by a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub edge: EdgeId,
    pub direction: Direction,
    /// Offset from `u` where the step starts.
    pub start: Rational,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no edges")]
    Empty,
    #[error("edge {0}-{0} is a self-loop")]
    SelfLoop(String),
    #[error("edge {a}-{b} has non-positive weight {weight}")]
    NonPositiveWeight {
        a: String,
        b: String,
        weight: String,
    },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("edge {0}-{1} closes a cycle")]
    Cycle(String, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` is not a leaf")]
    NotALeaf(String),
    #[error("leaf pair removal needs two distinct leaves")]
    SameLeaf,
    #[error("tree has {0} leaves, at least 3 are required")]
    TooFewLeaves(usize),
    #[error("point is not on the tree")]
    PointNotOnTree,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Raw edge used while assembling a tree; markers are suppressed vertices
/// lying on the edge, with offsets measured from `a`.
#[derive(Debug, Clone)]
struct RawEdge {
    a: String,
    b: String,
    weight: Rational,
    markers: Vec<(String, Rational)>,
}

#[derive(Debug, Clone)]
pub struct MetricTree {
    labels: Vec<String>,
    index: BTreeMap<String, VertexId>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    suppressed: Vec<SuppressedVertex>,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    dist: Vec<Vec<Rational>>,
}

impl MetricTree {
    /// Builds a validated tree from `(label, label, weight)` triples.
    ///
    /// Degree-2 interior vertices are merged into a single edge whose weight
    /// is the sum of the two; see [`MetricTree::suppressed`].
    pub fn from_edges<I, S>(edges: I) -> Result<MetricTree, TreeError>
    where
        I: IntoIterator<Item = (S, S, Rational)>,
        S: Into<String>,
    {
        let raw = edges
            .into_iter()
            .map(|(a, b, weight)| RawEdge {
                a: a.into(),
                b: b.into(),
                weight,
                markers: Vec::new(),
            })
            .collect();
        assemble(raw)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn require_vertex(&self, label: &str) -> Result<VertexId, TreeError> {
        self.vertex(label)
            .ok_or_else(|| TreeError::UnknownVertex(label.to_string()))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    /// Neighbours of `v` with the connecting edge, in vertex order.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.0]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == 1
    }

    /// Degree-1 vertices in label order.
    pub fn leaves(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.vertices().filter(|&v| self.is_leaf(v)).count()
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| !self.is_leaf(v)).collect()
    }

    /// A star has exactly one interior vertex.
    pub fn is_star(&self) -> bool {
        self.interior_vertices().len() == 1
    }

    /// The unique neighbour of a leaf and the edge leading to it.
    pub fn attachment(&self, leaf: VertexId) -> Option<(VertexId, EdgeId)> {
        match self.adjacency[leaf.0].as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }

    /// Vertices that were merged away, in label order.
    pub fn suppressed(&self) -> &[SuppressedVertex] {
        &self.suppressed
    }

    /// Finds a label among the vertices or the suppressed vertices.
    pub fn locate(&self, label: &str) -> Option<TreePoint> {
        if let Some(v) = self.vertex(label) {
            return Some(TreePoint::Vertex(v));
        }
        self.suppressed
            .iter()
            .find(|s| s.label == label)
            .map(|s| TreePoint::Edge {
                edge: s.edge,
                offset: s.offset.clone(),
            })
    }

    pub fn total_weight(&self) -> Rational {
        self.edges
            .iter()
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// Canonical point at `offset` from `anchor` along `edge`. Offsets 0 and
    /// the full weight collapse to the endpoint vertices.
    pub fn point_on_edge(
        &self,
        edge: EdgeId,
        anchor: VertexId,
        offset: Rational,
    ) -> Result<TreePoint, TreeError> {
        let e = self.edges.get(edge.0).ok_or(TreeError::PointNotOnTree)?;
        let from_u = if anchor == e.u {
            offset
        } else if anchor == e.v {
            &e.weight - offset
        } else {
            return Err(TreeError::PointNotOnTree);
        };
        if from_u.is_negative() || from_u > e.weight {
            return Err(TreeError::PointNotOnTree);
        }
        Ok(self.canonical(edge, from_u))
    }

    fn canonical(&self, edge: EdgeId, from_u: Rational) -> TreePoint {
        let e = &self.edges[edge.0];
        if from_u.is_zero() {
            TreePoint::Vertex(e.u)
        } else if from_u == e.weight {
            TreePoint::Vertex(e.v)
        } else {
            TreePoint::Edge {
                edge,
                offset: from_u,
            }
        }
    }

    pub fn contains(&self, p: &TreePoint) -> bool {
        match p {
            TreePoint::Vertex(v) => v.0 < self.labels.len(),
            TreePoint::Edge { edge, offset } => self
                .edges
                .get(edge.0)
                .is_some_and(|e| offset.is_positive() && *offset < e.weight),
        }
    }

    fn check(&self, p: &TreePoint) -> Result<(), TreeError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(TreeError::PointNotOnTree)
        }
    }

    /// Vertex distance, precomputed.
    pub fn vertex_distance(&self, a: VertexId, b: VertexId) -> &Rational {
        &self.dist[a.0][b.0]
    }

    /// Endpoints of the edge carrying `p` with their distance to `p`.
    fn anchors(&self, p: &TreePoint) -> Vec<(VertexId, Rational)> {
        match p {
            TreePoint::Vertex(v) => vec![(*v, Rational::zero())],
            TreePoint::Edge { edge, offset } => {
                let e = &self.edges[edge.0];
                vec![(e.u, offset.clone()), (e.v, &e.weight - offset)]
            }
        }
    }

    fn distance_unchecked(&self, p: &TreePoint, q: &TreePoint) -> Rational {
        if let (
            TreePoint::Edge { edge: e1, offset: t },
            TreePoint::Edge { edge: e2, offset: s },
        ) = (p, q)
        {
            if e1 == e2 {
                return (t - s).abs();
            }
        }
        let mut best: Option<Rational> = None;
        for (x, dx) in self.anchors(p) {
            for (y, dy) in self.anchors(q) {
                let total = &dx + &self.dist[x.0][y.0] + &dy;
                if best.as_ref().is_none_or(|b| total < *b) {
                    best = Some(total);
                }
            }
        }
        best.expect("every point has an anchor")
    }

    /// Length of the unique path between two points.
    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<Rational, TreeError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.distance_unchecked(p, q))
    }

    /// Edges on the vertex path from `a` to `b`, in traversal order.
    pub fn vertex_path(&self, a: VertexId, b: VertexId) -> Vec<(EdgeId, Direction)> {
        let (mut x, mut y) = (a, b);
        let mut head = Vec::new();
        let mut tail = Vec::new();
        while self.depth[x.0] > self.depth[y.0] {
            let (p, e) = self.parent[x.0].expect("non-root has a parent");
            head.push((e, self.direction(e, x)));
            x = p;
        }
        while self.depth[y.0] > self.depth[x.0] {
            let (p, e) = self.parent[y.0].expect("non-root has a parent");
            tail.push((e, self.direction(e, p)));
            y = p;
        }
        while x != y {
            let (px, ex) = self.parent[x.0].expect("non-root has a parent");
            let (py, ey) = self.parent[y.0].expect("non-root has a parent");
            head.push((ex, self.direction(ex, x)));
            tail.push((ey, self.direction(ey, py)));
            x = px;
            y = py;
        }
        tail.reverse();
        head.extend(tail);
        head
    }

    /// Direction of `e` when leaving vertex `from`.
    pub fn direction(&self, e: EdgeId, from: VertexId) -> Direction {
        if self.edges[e.0].u == from {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }

    /// The unique path from `p` to `q`. Step lengths sum to `distance(p, q)`.
    pub fn path(&self, p: &TreePoint, q: &TreePoint) -> Result<Vec<PathStep>, TreeError> {
        self.check(p)?;
        self.check(q)?;
        if p == q {
            return Ok(Vec::new());
        }
        if let (
            TreePoint::Edge { edge: e1, offset: t },
            TreePoint::Edge { edge: e2, offset: s },
        ) = (p, q)
        {
            if e1 == e2 {
                let direction = if s > t {
                    Direction::Forward
                } else {
                    Direction::Backward
                };
                return Ok(vec![PathStep {
                    edge: *e1,
                    direction,
                    start: t.clone(),
                    length: (t - s).abs(),
                }]);
            }
        }
        let total = self.distance_unchecked(p, q);
        let mut steps = Vec::new();

        let exit = match p {
            TreePoint::Vertex(v) => *v,
            TreePoint::Edge { edge, offset } => {
                let e = &self.edges[edge.0];
                let via_u = offset + self.distance_unchecked(&TreePoint::Vertex(e.u), q);
                if via_u == total {
                    steps.push(PathStep {
                        edge: *edge,
                        direction: Direction::Backward,
                        start: offset.clone(),
                        length: offset.clone(),
                    });
                    e.u
                } else {
                    steps.push(PathStep {
                        edge: *edge,
                        direction: Direction::Forward,
                        start: offset.clone(),
                        length: &e.weight - offset,
                    });
                    e.v
                }
            }
        };

        let (entry, last) = match q {
            TreePoint::Vertex(v) => (*v, None),
            TreePoint::Edge { edge, offset } => {
                let e = &self.edges[edge.0];
                let from_exit = self.distance_unchecked(&TreePoint::Vertex(exit), q);
                if &self.dist[exit.0][e.u.0] + offset == from_exit {
                    let step = PathStep {
                        edge: *edge,
                        direction: Direction::Forward,
                        start: Rational::zero(),
                        length: offset.clone(),
                    };
                    (e.u, Some(step))
                } else {
                    let step = PathStep {
                        edge: *edge,
                        direction: Direction::Backward,
                        start: e.weight.clone(),
                        length: &e.weight - offset,
                    };
                    (e.v, Some(step))
                }
            }
        };

        for (edge, direction) in self.vertex_path(exit, entry) {
            let e = &self.edges[edge.0];
            let start = match direction {
                Direction::Forward => Rational::zero(),
                Direction::Backward => e.weight.clone(),
            };
            steps.push(PathStep {
                edge,
                direction,
                start,
                length: e.weight.clone(),
            });
        }
        steps.extend(last);
        Ok(steps)
    }

    /// The point at arclength `s` from `p` on the path towards `q`.
    pub fn point_along(
        &self,
        p: &TreePoint,
        q: &TreePoint,
        s: &Rational,
    ) -> Result<TreePoint, TreeError> {
        let steps = self.path(p, q)?;
        if s.is_negative() {
            return Err(TreeError::PointNotOnTree);
        }
        if s.is_zero() {
            return Ok(p.clone());
        }
        let mut remaining = s.clone();
        for step in &steps {
            if remaining <= step.length {
                let from_u = match step.direction {
                    Direction::Forward => &step.start + &remaining,
                    Direction::Backward => &step.start - &remaining,
                };
                return Ok(self.canonical(step.edge, from_u));
            }
            remaining -= &step.length;
        }
        Err(TreeError::PointNotOnTree)
    }

    /// The median `w` of three points: the unique point lying on all three
    /// pairwise paths.
    pub fn median(
        &self,
        x: &TreePoint,
        y: &TreePoint,
        z: &TreePoint,
    ) -> Result<TreePoint, TreeError> {
        let xy = self.distance(x, y)?;
        let xz = self.distance(x, z)?;
        let yz = self.distance(y, z)?;
        let along = (xy + xz - yz) * half();
        self.point_along(x, y, &along)
    }

    /// `d(x, z) = d(x, y) + d(y, z)`.
    pub fn is_between(
        &self,
        x: &TreePoint,
        y: &TreePoint,
        z: &TreePoint,
    ) -> Result<bool, TreeError> {
        Ok(self.distance(x, z)? == self.distance(x, y)? + self.distance(y, z)?)
    }

    /// Deletes the leaf edges of `a0` and `a1` and suppresses any resulting
    /// degree-2 vertex.
    ///
    /// The leaf count drops by two unless both leaves hang off the same
    /// degree-3 vertex, which then becomes a leaf itself.
    pub fn remove_leaf_pair(&self, a0: VertexId, a1: VertexId) -> Result<LeafPairRemoval, TreeError> {
        for a in [a0, a1] {
            if a.0 >= self.labels.len() {
                return Err(TreeError::PointNotOnTree);
            }
            if !self.is_leaf(a) {
                return Err(TreeError::NotALeaf(self.labels[a.0].clone()));
            }
        }
        if a0 == a1 {
            return Err(TreeError::SameLeaf);
        }
        let leaf_count = self.leaf_count();
        if leaf_count < 3 {
            return Err(TreeError::TooFewLeaves(leaf_count));
        }
        let (b0, e0) = self.attachment(a0).expect("leaf");
        let (b1, e1) = self.attachment(a1).expect("leaf");
        let raw = self
            .edge_ids()
            .filter(|&e| e != e0 && e != e1)
            .map(|e| self.raw_edge(e))
            .collect();
        let reduced = assemble(raw)?;
        let b0_point = reduced
            .locate(self.label(b0))
            .expect("attachment survives removal");
        let b1_point = reduced
            .locate(self.label(b1))
            .expect("attachment survives removal");
        Ok(LeafPairRemoval {
            tree: reduced,
            b0: b0_point,
            b1: b1_point,
            a0_weight: self.edges[e0.0].weight.clone(),
            a1_weight: self.edges[e1.0].weight.clone(),
        })
    }

    fn raw_edge(&self, e: EdgeId) -> RawEdge {
        let edge = &self.edges[e.0];
        RawEdge {
            a: self.labels[edge.u.0].clone(),
            b: self.labels[edge.v.0].clone(),
            weight: edge.weight.clone(),
            markers: self
                .suppressed
                .iter()
                .filter(|s| s.edge == e)
                .map(|s| (s.label.clone(), s.offset.clone()))
                .collect(),
        }
    }

    /// `(label, label, weight)` triples in edge order.
    pub fn edge_list(&self) -> Vec<(String, String, Rational)> {
        self.edges
            .iter()
            .map(|e| {
                (
                    self.labels[e.u.0].clone(),
                    self.labels[e.v.0].clone(),
                    e.weight.clone(),
                )
            })
            .collect()
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        for (a, b, w) in self.edge_list() {
            out.push_str(&format!("{a} {b} {}\n", format_rational(&w)));
        }
        out
    }

    /// Human-readable name of a point, e.g. `a` or `a-b@1/2`.
    pub fn describe(&self, p: &TreePoint) -> String {
        match p {
            TreePoint::Vertex(v) => self.labels[v.0].clone(),
            TreePoint::Edge { edge, offset } => {
                let e = &self.edges[edge.0];
                format!(
                    "{}-{}@{}",
                    self.labels[e.u.0],
                    self.labels[e.v.0],
                    format_rational(offset)
                )
            }
        }
    }
}

impl fmt::Display for MetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list_text())
    }
}

/// Result of [`MetricTree::remove_leaf_pair`].
#[derive(Debug, Clone)]
pub struct LeafPairRemoval {
    pub tree: MetricTree,
    /// Former attachment of the first leaf, located in the reduced tree.
    pub b0: TreePoint,
    pub b1: TreePoint,
    pub a0_weight: Rational,
    pub a1_weight: Rational,
}

fn assemble(raw: Vec<RawEdge>) -> Result<MetricTree, TreeError> {
    if raw.is_empty() {
        return Err(TreeError::Empty);
    }

    let mut names: BTreeSet<&str> = BTreeSet::new();
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    for edge in &raw {
        if edge.a == edge.b {
            return Err(TreeError::SelfLoop(edge.a.clone()));
        }
        if !edge.weight.is_positive() {
            return Err(TreeError::NonPositiveWeight {
                a: edge.a.clone(),
                b: edge.b.clone(),
                weight: format_rational(&edge.weight),
            });
        }
        let key = if edge.a < edge.b {
            (edge.a.as_str(), edge.b.as_str())
        } else {
            (edge.b.as_str(), edge.a.as_str())
        };
        if !seen.insert(key) {
            return Err(TreeError::DuplicateEdge(key.0.to_string(), key.1.to_string()));
        }
        names.insert(&edge.a);
        names.insert(&edge.b);
    }
    let names: Vec<String> = names.into_iter().map(str::to_string).collect();
    let position: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let mut uf = UnionFind::new(names.len());
    for edge in &raw {
        if !uf.union(position[edge.a.as_str()], position[edge.b.as_str()]) {
            return Err(TreeError::Cycle(edge.a.clone(), edge.b.clone()));
        }
    }
    if raw.len() + 1 != names.len() {
        return Err(TreeError::Disconnected);
    }

    // Suppress degree-2 vertices in label order.
    let mut edges: Vec<Option<RawEdge>> = raw.into_iter().map(Some).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for (i, edge) in edges.iter().enumerate() {
        let edge = edge.as_ref().expect("fresh");
        incident[position[edge.a.as_str()]].push(i);
        incident[position[edge.b.as_str()]].push(i);
    }
    let mut removed = vec![false; names.len()];
    for vi in 0..names.len() {
        if incident[vi].len() != 2 {
            continue;
        }
        let (i, j) = (incident[vi][0], incident[vi][1]);
        let first = edges[i].take().expect("live edge");
        let second = edges[j].take().expect("live edge");
        let name = &names[vi];
        let first = oriented_towards(first, name);
        let second = oriented_away(second, name);
        let mut markers = first.markers;
        markers.push((name.clone(), first.weight.clone()));
        markers.extend(
            second
                .markers
                .into_iter()
                .map(|(label, off)| (label, off + &first.weight)),
        );
        let merged = RawEdge {
            a: first.a,
            b: second.b,
            weight: first.weight + second.weight,
            markers,
        };
        let (pa, pb) = (position[merged.a.as_str()], position[merged.b.as_str()]);
        edges[i] = Some(merged);
        for end in [pa, pb] {
            for slot in incident[end].iter_mut() {
                if *slot == j {
                    *slot = i;
                }
            }
        }
        incident[vi].clear();
        removed[vi] = true;
    }

    let labels: Vec<String> = names
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(n, _)| n.clone())
        .collect();
    let index: BTreeMap<String, VertexId> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), VertexId(i)))
        .collect();

    let mut finished: Vec<(Edge, Vec<(String, Rational)>)> = edges
        .into_iter()
        .flatten()
        .map(|raw| {
            let (a, b) = (index[&raw.a], index[&raw.b]);
            if a < b {
                (
                    Edge {
                        u: a,
                        v: b,
                        weight: raw.weight,
                    },
                    raw.markers,
                )
            } else {
                let markers = raw
                    .markers
                    .into_iter()
                    .map(|(l, off)| (l, &raw.weight - off))
                    .collect();
                (
                    Edge {
                        u: b,
                        v: a,
                        weight: raw.weight,
                    },
                    markers,
                )
            }
        })
        .collect();
    finished.sort_by(|x, y| (x.0.u, x.0.v).cmp(&(y.0.u, y.0.v)));

    let mut suppressed = Vec::new();
    let mut tree_edges = Vec::with_capacity(finished.len());
    for (i, (edge, markers)) in finished.into_iter().enumerate() {
        for (label, offset) in markers {
            suppressed.push(SuppressedVertex {
                label,
                edge: EdgeId(i),
                offset,
            });
        }
        tree_edges.push(edge);
    }
    suppressed.sort_by(|a, b| a.label.cmp(&b.label));

    Ok(finish(labels, index, tree_edges, suppressed))
}

fn oriented_towards(mut edge: RawEdge, name: &str) -> RawEdge {
    if edge.a == name {
        edge = flip(edge);
    }
    edge
}

fn oriented_away(mut edge: RawEdge, name: &str) -> RawEdge {
    if edge.b == name {
        edge = flip(edge);
    }
    edge
}

fn flip(edge: RawEdge) -> RawEdge {
    let weight = edge.weight;
    let mut markers: Vec<(String, Rational)> = edge
        .markers
        .into_iter()
        .map(|(l, off)| (l, &weight - off))
        .collect();
    markers.reverse();
    RawEdge {
        a: edge.b,
        b: edge.a,
        weight,
        markers,
    }
}

fn finish(
    labels: Vec<String>,
    index: BTreeMap<String, VertexId>,
    edges: Vec<Edge>,
    suppressed: Vec<SuppressedVertex>,
) -> MetricTree {
    let n = labels.len();
    let mut adjacency: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e.u.0].push((e.v, EdgeId(i)));
        adjacency[e.v.0].push((e.u, EdgeId(i)));
    }
    for list in &mut adjacency {
        list.sort();
    }

    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut order = vec![VertexId(0)];
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &(y, e) in &adjacency[x.0] {
            if !visited[y.0] {
                visited[y.0] = true;
                parent[y.0] = Some((x, e));
                depth[y.0] = depth[x.0] + 1;
                order.push(y);
            }
        }
    }

    let mut dist = vec![vec![Rational::zero(); n]; n];
    for source in 0..n {
        let mut stack = vec![(VertexId(source), None::<VertexId>)];
        while let Some((x, from)) = stack.pop() {
            for &(y, e) in &adjacency[x.0] {
                if Some(y) != from {
                    dist[source][y.0] = &dist[source][x.0] + &edges[e.0].weight;
                    stack.push((y, Some(x)));
                }
            }
        }
    }

    MetricTree {
        labels,
        index,
        edges,
        adjacency,
        suppressed,
        parent,
        depth,
        dist,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Parses the edge-list text format: one `LABEL LABEL WEIGHT` per line,
/// weights as integers, decimals or `p/q`; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<MetricTree, TreeError> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [a, b, w] = fields.as_slice() else {
            return Err(TreeError::Parse {
                line: line_no,
                message: format!("expected `LABEL LABEL WEIGHT`, found {} fields", fields.len()),
            });
        };
        let weight = parse_rational(w).map_err(|e| TreeError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        edges.push((a.to_string(), b.to_string(), weight));
    }
    MetricTree::from_edges(edges)
}

/// A star: `k` arms of positive length glued at a common center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarTree {
    pub center: String,
    /// `(tip label, arm length)` in arm order.
    pub arms: Vec<(String, Rational)>,
}

impl StarTree {
    /// Center `o`, tips `t1..tk`.
    pub fn new(lengths: &[Rational]) -> StarTree {
        StarTree {
            center: "o".to_string(),
            arms: lengths
                .iter()
                .enumerate()
                .map(|(i, a)| (format!("t{}", i + 1), a.clone()))
                .collect(),
        }
    }

    pub fn uniform(k: usize, length: Rational) -> StarTree {
        StarTree::new(&vec![length; k])
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    /// The star as a metric tree. With two arms the center is suppressed
    /// but remains locatable by label.
    pub fn to_tree(&self) -> Result<MetricTree, TreeError> {
        MetricTree::from_edges(
            self.arms
                .iter()
                .map(|(tip, a)| (self.center.clone(), tip.clone(), a.clone())),
        )
    }

    /// Reads a star off a tree with one interior vertex, or a single edge
    /// (centered at its first endpoint, one arm).
    pub fn from_tree(tree: &MetricTree) -> Option<StarTree> {
        if tree.edge_count() == 1 {
            let e = &tree.edges()[0];
            return Some(StarTree {
                center: tree.label(e.u).to_string(),
                arms: vec![(tree.label(e.v).to_string(), e.weight.clone())],
            });
        }
        let interior = tree.interior_vertices();
        let [center] = interior.as_slice() else {
            return None;
        };
        Some(StarTree {
            center: tree.label(*center).to_string(),
            arms: tree
                .neighbors(*center)
                .iter()
                .map(|&(tip, e)| (tree.label(tip).to_string(), tree.edge(e).weight.clone()))
                .collect(),
        })
    }
}
