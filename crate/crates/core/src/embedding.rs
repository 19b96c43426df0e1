//! Piecewise-affine embeddings of trees into `(ℝⁿ, d₁)` and `(ℝⁿ, d∞)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{l1_norm, lerp, linf_norm, sub_vec, Rational};
use crate::tree::{MetricTree, TreeError, TreePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    Linf,
}

impl Norm {
    pub fn length(self, v: &[Rational]) -> Rational {
        match self {
            Norm::L1 => l1_norm(v),
            Norm::Linf => linf_norm(v),
        }
    }

    pub fn distance(self, a: &[Rational], b: &[Rational]) -> Rational {
        self.length(&sub_vec(a, b))
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::Linf => "linf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{arms} arms do not fit in dimension {dimension} under {norm}: at most {bound} leaves embed")]
    TooManyArms {
        arms: usize,
        dimension: usize,
        norm: Norm,
        bound: usize,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("no image for vertex `{0}`")]
    MissingImage(String),
    #[error("label `{0}` is not a point of the tree")]
    UnknownLabel(String),
    #[error("dimension mismatch: image of `{label}` has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("vectors have lengths {0} and {1}")]
    VectorLengthMismatch(usize, usize),
    #[error("embedding is not isometric")]
    NotIsometric,
    #[error("leaf directions of `{0}` and `{1}` are positively proportional")]
    ProportionalDirections(String, String),
    #[error("polyline needs at least two distinct consecutive breakpoints")]
    InvalidPolyline,
    #[error("polyline is not a geodesic")]
    NotGeodesic,
    #[error("cut parameters must satisfy 0 < c < d < arclength")]
    CutOutOfRange,
}

/// Vertex images keyed by label; each edge maps affinely onto the segment
/// between its endpoint images.
///
/// Images may also be given for suppressed vertices of the tree; they are
/// checked against the affine interpolation when verifying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwaEmbedding {
    pub norm: Norm,
    pub dimension: usize,
    pub images: BTreeMap<String, Vec<Rational>>,
}

impl PwaEmbedding {
    pub fn new(norm: Norm, dimension: usize) -> Self {
        PwaEmbedding {
            norm,
            dimension,
            images: BTreeMap::new(),
        }
    }

    pub fn image(&self, label: &str) -> Option<&Vec<Rational>> {
        self.images.get(label)
    }

    /// Checks every tree vertex has an image of the right length and every
    /// image belongs to a vertex or suppressed vertex.
    pub fn check_shape(&self, tree: &MetricTree) -> Result<(), EmbedError> {
        if self.dimension == 0 {
            return Err(EmbedError::ZeroDimension);
        }
        for label in tree.labels() {
            if !self.images.contains_key(label) {
                return Err(EmbedError::MissingImage(label.clone()));
            }
        }
        for (label, image) in &self.images {
            if tree.locate(label).is_none() {
                return Err(EmbedError::UnknownLabel(label.clone()));
            }
            if image.len() != self.dimension {
                return Err(EmbedError::DimensionMismatch {
                    label: label.clone(),
                    expected: self.dimension,
                    found: image.len(),
                });
            }
        }
        Ok(())
    }

    /// Image of an arbitrary point: the stored vertex image, or the affine
    /// interpolation along the edge image.
    pub fn eval(&self, tree: &MetricTree, p: &TreePoint) -> Result<Vec<Rational>, EmbedError> {
        if !tree.contains(p) {
            return Err(TreeError::PointNotOnTree.into());
        }
        let lookup = |v| {
            let label = tree.label(v);
            self.images
                .get(label)
                .ok_or_else(|| EmbedError::MissingImage(label.to_string()))
        };
        match p {
            TreePoint::Vertex(v) => Ok(lookup(*v)?.clone()),
            TreePoint::Edge { edge, offset } => {
                let e = tree.edge(*edge);
                let (fu, fv) = (lookup(e.u)?, lookup(e.v)?);
                Ok(lerp(fu, fv, &(offset / &e.weight)))
            }
        }
    }

    /// Adds `shift` to every image.
    pub fn translated(&self, shift: &[Rational]) -> PwaEmbedding {
        PwaEmbedding {
            norm: self.norm,
            dimension: self.dimension,
            images: self
                .images
                .iter()
                .map(|(l, x)| (l.clone(), crate::rational::add_vec(x, shift)))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingDoc {
    norm: Norm,
    dimension: usize,
    coordinates: BTreeMap<String, RationalVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RationalVec(#[serde(with = "crate::rational::serde_vec")] Vec<Rational>);

impl Serialize for PwaEmbedding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingDoc {
            norm: self.norm,
            dimension: self.dimension,
            coordinates: self
                .images
                .iter()
                .map(|(l, x)| (l.clone(), RationalVec(x.clone())))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PwaEmbedding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = EmbeddingDoc::deserialize(d)?;
        Ok(PwaEmbedding {
            norm: doc.norm,
            dimension: doc.dimension,
            images: doc.coordinates.into_iter().map(|(l, v)| (l, v.0)).collect(),
        })
    }
}
