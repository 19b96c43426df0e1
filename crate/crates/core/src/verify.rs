//! Exact isometry verification for piecewise-affine embeddings.
//!
//! An embedding passes when
//!
//! 1. every edge image has norm length equal to the edge weight, and
//! 2. every leaf pair carries a certificate: under `d₁`, each coordinate
//!    moves monotonically along the leaf-to-leaf path; under `d∞`, a single
//!    coordinate moves at full slope with one sign along the whole path.
//!
//! Together these give `‖F(x) − F(y)‖ = d(x, y)` for every pair of points,
//! not just vertices, because any path in a tree extends to a leaf-to-leaf
//! path and both certificate kinds restrict to sub-paths. A seeded random
//! sample of point pairs is compared exactly as an independent cross-check
//! of the implementation.

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{EmbedError, Norm, PwaEmbedding};
use crate::geodesic::{SectorIndex, Sign};
use crate::random::random_point;
use crate::rational::{sub_vec, Rational};
use crate::tree::{MetricTree, TreePoint, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Random point pairs compared after the certificate checks.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 1000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactPass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    EdgeLength,
    NoCertificate,
    SuppressedVertex,
    Sample,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub a: String,
    pub b: String,
    #[serde(with = "crate::rational::serde_one")]
    pub tree_distance: Rational,
    #[serde(with = "crate::rational::serde_one")]
    pub image_distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// Per-coordinate direction (−1, 0, +1) along the path.
    Monotone(Vec<i8>),
    FullSlope(SectorIndex),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub a: String,
    pub b: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub norm: Norm,
    pub dimension: usize,
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
    pub certificates: Vec<PairCertificate>,
    pub samples_checked: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::ExactPass
    }
}

pub fn verify_isometry(
    tree: &MetricTree,
    emb: &PwaEmbedding,
) -> Result<VerificationReport, EmbedError> {
    verify_isometry_with(tree, emb, &VerifyConfig::default())
}

pub fn verify_isometry_with(
    tree: &MetricTree,
    emb: &PwaEmbedding,
    config: &VerifyConfig,
) -> Result<VerificationReport, EmbedError> {
    emb.check_shape(tree)?;
    let norm = emb.norm;
    let image = |v: VertexId| &emb.images[tree.label(v)];
    let mut failures = Vec::new();

    let deltas: Vec<Vec<Rational>> = tree
        .edges()
        .iter()
        .map(|e| sub_vec(image(e.v), image(e.u)))
        .collect();
    for (e, delta) in tree.edges().iter().zip(&deltas) {
        let length = norm.length(delta);
        if length != e.weight {
            failures.push(Failure {
                kind: FailureKind::EdgeLength,
                a: tree.label(e.u).to_string(),
                b: tree.label(e.v).to_string(),
                tree_distance: e.weight.clone(),
                image_distance: length,
            });
        }
    }

    for s in tree.suppressed() {
        let point = TreePoint::Edge {
            edge: s.edge,
            offset: s.offset.clone(),
        };
        let expected = emb.eval(tree, &point)?;
        if let Some(given) = emb.images.get(&s.label) {
            if *given != expected {
                failures.push(Failure {
                    kind: FailureKind::SuppressedVertex,
                    a: s.label.clone(),
                    b: tree.describe(&point),
                    tree_distance: Rational::zero(),
                    image_distance: norm.distance(given, &expected),
                });
            }
        }
    }

    let leaves = tree.leaves();
    let mut certificates = Vec::new();
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            let steps: Vec<(Vec<Rational>, &Rational)> = tree
                .vertex_path(a, b)
                .into_iter()
                .map(|(e, dir)| {
                    let d = &deltas[e.0];
                    let signed = if dir.sign() > 0 {
                        d.clone()
                    } else {
                        d.iter().map(|x| -x).collect()
                    };
                    (signed, &tree.edge(e).weight)
                })
                .collect();
            let witness = match norm {
                Norm::L1 => monotone_witness(&steps, emb.dimension),
                Norm::Linf => full_slope_witness(&steps, emb.dimension),
            };
            match witness {
                Some(witness) => certificates.push(PairCertificate {
                    a: tree.label(a).to_string(),
                    b: tree.label(b).to_string(),
                    witness,
                }),
                None => failures.push(Failure {
                    kind: FailureKind::NoCertificate,
                    a: tree.label(a).to_string(),
                    b: tree.label(b).to_string(),
                    tree_distance: tree.vertex_distance(a, b).clone(),
                    image_distance: norm.distance(image(a), image(b)),
                }),
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.samples {
        let p = random_point(tree, &mut rng);
        let q = random_point(tree, &mut rng);
        let expected = tree.distance(&p, &q)?;
        let got = norm.distance(&emb.eval(tree, &p)?, &emb.eval(tree, &q)?);
        if got != expected {
            failures.push(Failure {
                kind: FailureKind::Sample,
                a: tree.describe(&p),
                b: tree.describe(&q),
                tree_distance: expected,
                image_distance: got,
            });
        }
    }

    failures.sort();
    failures.dedup();
    let pairs = leaves.len() * leaves.len().saturating_sub(1) / 2;
    let verdict = if failures.is_empty() && certificates.len() == pairs {
        Verdict::ExactPass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport {
        norm,
        dimension: emb.dimension,
        verdict,
        failures,
        certificates,
        samples_checked: config.samples,
    })
}

fn monotone_witness(steps: &[(Vec<Rational>, &Rational)], dimension: usize) -> Option<Witness> {
    let mut signs = vec![0i8; dimension];
    for (delta, _) in steps {
        for (c, x) in delta.iter().enumerate() {
            let s = if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            };
            if s == 0 {
                continue;
            }
            if signs[c] == 0 {
                signs[c] = s;
            } else if signs[c] != s {
                return None;
            }
        }
    }
    Some(Witness::Monotone(signs))
}

fn full_slope_witness(steps: &[(Vec<Rational>, &Rational)], dimension: usize) -> Option<Witness> {
    for coordinate in 0..dimension {
        for sign in [Sign::Plus, Sign::Minus] {
            let ok = steps.iter().all(|(delta, w)| match sign {
                Sign::Plus => delta[coordinate] == **w,
                Sign::Minus => -&delta[coordinate] == **w,
            });
            if ok {
                return Some(Witness::FullSlope(SectorIndex { coordinate, sign }));
            }
        }
    }
    None
}

/// Image of a tree point under a piecewise-affine embedding.
pub fn eval_embedding(
    tree: &MetricTree,
    emb: &PwaEmbedding,
    p: &TreePoint,
) -> Result<Vec<Rational>, EmbedError> {
    emb.eval(tree, p)
}
