//! Exact isometric embeddings of finite metric trees into `(ℝⁿ, d₁)` and
//! `(ℝⁿ, d∞)`.
//!
//! * [`tree`]: finite simplicial metric trees with exact rational weights,
//!   tree points, paths, medians and leaf-pair removal.
//! * [`l1`]: star and general-tree embeddings into `d₁` at dimension `⌈L/2⌉`.
//! * [`linf`] and [`geodesic`]: star embeddings via sign vectors, the
//!   leaf-distance embedding, sectors, polyline geodesics and the
//!   leaf-direction star.
//! * [`search`]: exhaustive witness search for `d∞` embeddings of arbitrary
//!   trees, with checkable certificates; [`sweep`] runs it over every small
//!   tree.
//! * [`verify`]: exact certificate-based isometry checks.
//!
//! All arithmetic is exact; see [`rational`].
//!
//! ```
//! use mtree_embed::{embed_l1, verify_isometry, MetricTree};
//! use mtree_embed::rational::int;
//!
//! let tree = MetricTree::from_edges([
//!     ("a", "b", int(1)),
//!     ("a", "l1", int(1)),
//!     ("a", "l2", int(1)),
//!     ("b", "l3", int(1)),
//!     ("b", "l4", int(1)),
//! ])
//! .unwrap();
//! let emb = embed_l1(&tree);
//! assert_eq!(emb.dimension, 2);
//! assert!(verify_isometry(&tree, &emb).unwrap().passed());
//! ```

pub mod cli;
pub mod embedding;
pub mod enumerate;
pub mod geodesic;
pub mod l1;
pub mod linf;
pub mod newick;
pub mod random;
pub mod rational;
pub mod search;
pub mod sweep;
pub mod tree;
pub mod verify;

pub use embedding::{EmbedError, Norm, PwaEmbedding};
pub use geodesic::{in_sector, is_geodesic_polyline, shorten_geodesic, GeodesicPolyline, SectorIndex, Sign};
pub use l1::{embed_l1, min_dim_l1, star_embed_l1};
pub use linf::{kuratowski_embed_linf, leaf_direction_star, min_dim_linf_bounds, star_embed_linf};
pub use rational::Rational;
pub use search::{check_certificate, search_embed_linf, search_embed_linf_with, SlopeCertificate};
pub use sweep::{conjecture_sweep, SweepReport};
pub use tree::{MetricTree, StarTree, TreeError, TreePoint};
pub use verify::{eval_embedding, verify_isometry, verify_isometry_with, VerificationReport};
