//! Exhaustive search for isometric embeddings into `(ℝⁿ, d∞)`.
//!
//! # Why witnesses are enough
//!
//! Under an isometric embedding every leaf-to-leaf path maps to a `d∞`
//! geodesic, so some coordinate `i` and sign `ε` make the image move at full
//! slope `ε` along the whole path (the sector characterization of `d∞`
//! geodesics). That property depends only on the per-edge coordinate deltas,
//! so straightening each edge image to a segment keeps it, and a
//! straight-edge embedding is determined by its slopes.
//!
//! The search therefore assigns a witness `(i, ε)` to every leaf pair. A
//! witness forces slope `±1` in coordinate `i` on each edge of the pair's
//! path; an assignment is consistent when no edge is forced to both `+1`
//! and `−1` in one coordinate. Unforced slopes are set to 0, every edge is on
//! some leaf path and so has a full-slope coordinate, and integrating the
//! slopes from the first vertex yields an embedding whose leaf pairs all carry
//! `d∞` certificates. Conversely, exhausting all assignments proves that no
//! isometric embedding into `(ℝⁿ, d∞)` exists.
//!
//! Coordinate permutations and sign flips are symmetries of the problem, so
//! a pair may only open the smallest unused coordinate, and only with `+`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::embedding::{Norm, PwaEmbedding};
use crate::geodesic::{SectorIndex, Sign};
use crate::rational::{int, Rational};
use crate::tree::{EdgeId, MetricTree, VertexId};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairScope {
    /// Witnesses for leaf pairs only; sufficient.
    Leaves,
    /// Witnesses for every vertex pair.
    AllVertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub scope: PairScope,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            scope: PairScope::Leaves,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("search gave up after {nodes} nodes; existence is undecided")]
    BudgetExceeded { nodes: u64 },
}

/// Proof object for a `d∞` isometry: slopes per edge and coordinate, plus a
/// full-slope witness per leaf pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeCertificate {
    pub dimension: usize,
    /// Slope of edge `e` in coordinate `c` when traversed from `u` to `v`.
    pub slopes: BTreeMap<(EdgeId, usize), Rational>,
    /// Keyed by `(a, b)` with `a < b`.
    pub witnesses: BTreeMap<(VertexId, VertexId), SectorIndex>,
}

impl SlopeCertificate {
    /// Slope with traversal direction applied (`sign` is ±1).
    pub fn slope(&self, edge: EdgeId, direction_sign: i8, coordinate: usize) -> Option<Rational> {
        self.slopes
            .get(&(edge, coordinate))
            .map(|s| if direction_sign > 0 { s.clone() } else { -s })
    }

    /// Integrates the slopes from the first vertex, placed at the origin.
    pub fn embedding(&self, tree: &MetricTree) -> PwaEmbedding {
        let n = self.dimension;
        let mut images: Vec<Option<Vec<Rational>>> = vec![None; tree.vertex_count()];
        images[0] = Some(vec![Rational::zero(); n]);
        let mut stack = vec![VertexId(0)];
        while let Some(x) = stack.pop() {
            for &(y, e) in tree.neighbors(x) {
                if images[y.0].is_some() {
                    continue;
                }
                let dir = tree.direction(e, x).sign();
                let w = &tree.edge(e).weight;
                let base = images[x.0].as_ref().expect("visited").clone();
                let next = (0..n)
                    .map(|c| {
                        let s = self.slope(e, dir, c).unwrap_or_else(Rational::zero);
                        &base[c] + s * w
                    })
                    .collect();
                images[y.0] = Some(next);
                stack.push(y);
            }
        }
        let mut emb = PwaEmbedding::new(Norm::Linf, n);
        for v in tree.vertices() {
            emb.images.insert(
                tree.label(v).to_string(),
                images[v.0].take().expect("tree is connected"),
            );
        }
        emb
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(PwaEmbedding, SlopeCertificate),
    /// Every witness assignment was refuted: no isometric embedding exists.
    Exhausted,
    /// Node budget ran out.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Searches with the default configuration. `Ok(None)` certifies that no
/// isometric embedding into `(ℝⁿ, d∞)` exists.
pub fn search_embed_linf(
    tree: &MetricTree,
    n: usize,
) -> Result<Option<(PwaEmbedding, SlopeCertificate)>, SearchError> {
    let result = search_embed_linf_with(tree, n, &SearchConfig::default())?;
    match result.outcome {
        SearchOutcome::Found(emb, cert) => Ok(Some((emb, cert))),
        SearchOutcome::Exhausted => Ok(None),
        SearchOutcome::Inconclusive => Err(SearchError::BudgetExceeded {
            nodes: result.nodes,
        }),
    }
}

pub fn search_embed_linf_with(
    tree: &MetricTree,
    n: usize,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroDimension);
    }
    let endpoints = match config.scope {
        PairScope::Leaves => tree.leaves(),
        PairScope::AllVertices => tree.vertices().collect(),
    };
    let mut pairs = Vec::new();
    for (i, &a) in endpoints.iter().enumerate() {
        for &b in &endpoints[i + 1..] {
            let steps = tree
                .vertex_path(a, b)
                .into_iter()
                .map(|(e, d)| (e.0, d.sign()))
                .collect();
            pairs.push(Pair { a, b, steps });
        }
    }
    // Longest paths first so conflicts surface early; stable on (a, b).
    pairs.sort_by(|x, y| y.steps.len().cmp(&x.steps.len()));

    let mut state = Search {
        n,
        pairs: &pairs,
        plus: vec![0; tree.edge_count() * n],
        minus: vec![0; tree.edge_count() * n],
        used: vec![0; n],
        assignment: vec![None; pairs.len()],
        nodes: 0,
        budget: config.node_budget,
    };
    let outcome = match state.descend(0) {
        Step::Solved => {
            let cert = state.certificate(tree);
            let emb = cert.embedding(tree);
            SearchOutcome::Found(emb, cert)
        }
        Step::Refuted => SearchOutcome::Exhausted,
        Step::OutOfBudget => SearchOutcome::Inconclusive,
    };
    Ok(SearchResult {
        outcome,
        nodes: state.nodes,
    })
}

struct Pair {
    a: VertexId,
    b: VertexId,
    /// `(edge index, direction sign)` along the path from `a` to `b`.
    steps: Vec<(usize, i8)>,
}

enum Step {
    Solved,
    Refuted,
    OutOfBudget,
}

struct Search<'a> {
    n: usize,
    pairs: &'a [Pair],
    plus: Vec<u32>,
    minus: Vec<u32>,
    /// Number of assigned pairs witnessed by each coordinate.
    used: Vec<u32>,
    assignment: Vec<Option<(usize, i8)>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn feasible(&self, pair: &Pair, c: usize, sign: i8) -> bool {
        pair.steps.iter().all(|&(e, dir)| {
            let slot = e * self.n + c;
            if sign * dir > 0 {
                self.minus[slot] == 0
            } else {
                self.plus[slot] == 0
            }
        })
    }

    fn apply(&mut self, pair: &Pair, c: usize, sign: i8, undo: bool) {
        for &(e, dir) in &pair.steps {
            let slot = e * self.n + c;
            let counter = if sign * dir > 0 {
                &mut self.plus[slot]
            } else {
                &mut self.minus[slot]
            };
            if undo {
                *counter -= 1;
            } else {
                *counter += 1;
            }
        }
        if undo {
            self.used[c] -= 1;
        } else {
            self.used[c] += 1;
        }
    }

    /// Every later pair still has a value. Fresh coordinates always fit, so
    /// the check only bites once all coordinates are in use.
    fn forward_ok(&self, from: usize) -> bool {
        if self.used.iter().any(|&u| u == 0) {
            return true;
        }
        self.pairs[from..].iter().all(|p| {
            (0..self.n).any(|c| self.feasible(p, c, 1) || self.feasible(p, c, -1))
        })
    }

    fn candidates(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::with_capacity(2 * self.n);
        for c in 0..self.n {
            if self.used[c] > 0 {
                out.push((c, 1));
                out.push((c, -1));
            } else {
                out.push((c, 1));
                break;
            }
        }
        out
    }

    fn descend(&mut self, depth: usize) -> Step {
        if depth == self.pairs.len() {
            return Step::Solved;
        }
        let pairs = self.pairs;
        let pair = &pairs[depth];
        for (c, sign) in self.candidates() {
            if !self.feasible(pair, c, sign) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
            self.apply(pair, c, sign, false);
            self.assignment[depth] = Some((c, sign));
            if self.forward_ok(depth + 1) {
                match self.descend(depth + 1) {
                    Step::Refuted => {}
                    done => return done,
                }
            }
            self.assignment[depth] = None;
            self.apply(pair, c, sign, true);
        }
        Step::Refuted
    }

    fn certificate(&self, tree: &MetricTree) -> SlopeCertificate {
        let mut slopes = BTreeMap::new();
        for e in tree.edge_ids() {
            for c in 0..self.n {
                let slot = e.0 * self.n + c;
                let s = if self.plus[slot] > 0 {
                    int(1)
                } else if self.minus[slot] > 0 {
                    int(-1)
                } else {
                    Rational::zero()
                };
                slopes.insert((e, c), s);
            }
        }
        let witnesses = self
            .pairs
            .iter()
            .zip(&self.assignment)
            .map(|(p, a)| {
                let (c, sign) = a.expect("complete assignment");
                ((p.a, p.b), SectorIndex::new(c, Sign::from_value(sign)))
            })
            .collect();
        SlopeCertificate {
            dimension: self.n,
            slopes,
            witnesses,
        }
    }
}

/// Independent validator: slopes in `[−1, 1]`, a full-slope coordinate on
/// every edge, and every leaf pair witnessed by a coordinate moving at full
/// slope with one sign along its whole path.
pub fn check_certificate(tree: &MetricTree, cert: &SlopeCertificate) -> bool {
    let n = cert.dimension;
    if n == 0 {
        return false;
    }
    if cert
        .slopes
        .keys()
        .any(|&(e, c)| e.0 >= tree.edge_count() || c >= n)
    {
        return false;
    }
    for e in tree.edge_ids() {
        let mut full = false;
        for c in 0..n {
            let Some(s) = cert.slopes.get(&(e, c)) else {
                return false;
            };
            if s.abs() > Rational::one() {
                return false;
            }
            full |= s.abs().is_one();
        }
        if !full {
            return false;
        }
    }
    let witness_ok = |a: VertexId, b: VertexId, w: &SectorIndex| {
        w.coordinate < n
            && tree.vertex_path(a, b).into_iter().all(|(e, dir)| {
                cert.slope(e, dir.sign(), w.coordinate)
                    .is_some_and(|s| s == int(w.sign.value() as i64))
            })
    };
    let leaves = tree.leaves();
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            match cert.witnesses.get(&(a, b)) {
                Some(w) if witness_ok(a, b, w) => {}
                _ => return false,
            }
        }
    }
    cert.witnesses.iter().all(|(&(a, b), w)| {
        a < b && b.0 < tree.vertex_count() && witness_ok(a, b, w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::tree::StarTree;
    use crate::verify::verify_isometry;

    fn star(k: usize) -> MetricTree {
        StarTree::uniform(k, int(1)).to_tree().unwrap()
    }

    #[test]
    fn three_star_in_the_plane() {
        let t = star(3);
        let (emb, cert) = search_embed_linf(&t, 2).unwrap().unwrap();
        assert!(check_certificate(&t, &cert));
        assert!(verify_isometry(&t, &emb).unwrap().passed());
        assert_eq!(emb.images["o"], vec![int(0), int(0)]);
    }

    #[test]
    fn impossible_stars_are_exhausted() {
        assert_eq!(search_embed_linf(&star(5), 2).unwrap(), None);
        assert_eq!(search_embed_linf(&star(3), 1).unwrap(), None);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let config = SearchConfig {
            node_budget: 2,
            ..SearchConfig::default()
        };
        let r = search_embed_linf_with(&star(5), 2, &config).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Inconclusive);
        assert!(search_embed_linf_with(&star(5), 0, &config).is_err());
    }

    #[test]
    fn perturbed_certificate_is_rejected() {
        let t = star(3);
        let (_, cert) = search_embed_linf(&t, 2).unwrap().unwrap();
        let (&(a, b), w) = cert.witnesses.iter().next().unwrap();
        let (e, _) = t.vertex_path(a, b)[0];
        let mut bad = cert.clone();
        bad.slopes.insert((e, w.coordinate), ratio(1, 2));
        assert!(!check_certificate(&t, &bad));

        let mut missing = cert.clone();
        missing.witnesses.remove(&(a, b));
        assert!(!check_certificate(&t, &missing));

        let mut too_steep = cert.clone();
        too_steep.slopes.insert((e, 1 - w.coordinate), int(2));
        assert!(!check_certificate(&t, &too_steep));
    }

    #[test]
    fn all_vertex_scope_agrees_on_stars() {
        let config = SearchConfig {
            scope: PairScope::AllVertices,
            ..SearchConfig::default()
        };
        for k in 2..=5 {
            for n in 1..=2 {
                let leaves = search_embed_linf_with(&star(k), n, &SearchConfig::default()).unwrap();
                let all = search_embed_linf_with(&star(k), n, &config).unwrap();
                assert_eq!(
                    matches!(leaves.outcome, SearchOutcome::Found(..)),
                    matches!(all.outcome, SearchOutcome::Found(..)),
                    "k={k} n={n}"
                );
            }
        }
    }
}
