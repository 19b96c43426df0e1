//! Isometric embeddings into `(ℝⁿ, d₁)` at the optimal dimension `⌈L/2⌉`.
//!
//! Stars send arm `i` along the `i`-th signed basis vector
//! `+e₁, −e₁, +e₂, −e₂, …`. General trees are handled by peeling off two
//! leaves, embedding the rest one dimension lower, and hanging the two
//! removed leaf edges on opposite half-axes of a fresh coordinate:
//!
//! ```text
//! x ∈ Y            ↦ (f(x), 0)
//! x on edge B₀A₀   ↦ (f(B₀), −d(x, B₀))
//! x on edge B₁A₁   ↦ (f(B₁), +d(x, B₁))
//! ```

use num_traits::Zero;

use crate::embedding::{EmbedError, Norm, PwaEmbedding};
use crate::rational::Rational;
use crate::tree::{MetricTree, StarTree, TreePoint, VertexId};

/// Places the arms of a star on `±eᵢ`. Needs `k ≤ 2n`.
pub fn star_embed_l1(star: &StarTree, n: usize) -> Result<PwaEmbedding, EmbedError> {
    if n == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    let k = star.arm_count();
    if k > 2 * n {
        return Err(EmbedError::TooManyArms {
            arms: k,
            dimension: n,
            norm: Norm::L1,
            bound: 2 * n,
        });
    }
    let mut emb = PwaEmbedding::new(Norm::L1, n);
    emb.images
        .insert(star.center.clone(), vec![Rational::zero(); n]);
    for (i, (tip, length)) in star.arms.iter().enumerate() {
        let mut x = vec![Rational::zero(); n];
        x[i / 2] = if i % 2 == 0 { length.clone() } else { -length };
        emb.images.insert(tip.clone(), x);
    }
    Ok(emb)
}

/// `⌈L/2⌉`: the least dimension admitting an isometric `d₁` embedding.
pub fn min_dim_l1(tree: &MetricTree) -> usize {
    tree.leaf_count().div_ceil(2)
}

/// The leaf pair peeled off by [`embed_l1`]: the lexicographically least
/// pair whose removal leaves exactly two fewer leaves. For three leaves
/// any pair leaves a path, so the least pair is taken.
pub fn select_leaf_pair(tree: &MetricTree) -> Option<(VertexId, VertexId)> {
    let leaves = tree.leaves();
    if leaves.len() < 3 {
        return None;
    }
    if leaves.len() == 3 {
        return Some((leaves[0], leaves[1]));
    }
    for (i, &a0) in leaves.iter().enumerate() {
        let (b0, _) = tree.attachment(a0).expect("leaf");
        for &a1 in &leaves[i + 1..] {
            let (b1, _) = tree.attachment(a1).expect("leaf");
            // Two leaves on one degree-3 vertex would turn it into a leaf.
            if b0 == b1 && tree.degree(b0) == 3 {
                continue;
            }
            return Some((a0, a1));
        }
    }
    None
}

/// Isometric embedding of any tree into `(ℝ^⌈L/2⌉, d₁)`.
pub fn embed_l1(tree: &MetricTree) -> PwaEmbedding {
    let Some((a0, a1)) = select_leaf_pair(tree) else {
        // One edge: arclength on the line.
        let e = &tree.edges()[0];
        let mut emb = PwaEmbedding::new(Norm::L1, 1);
        emb.images
            .insert(tree.label(e.u).to_string(), vec![Rational::zero()]);
        emb.images
            .insert(tree.label(e.v).to_string(), vec![e.weight.clone()]);
        return emb;
    };

    let removal = tree
        .remove_leaf_pair(a0, a1)
        .expect("selected pair is removable");
    let inner = embed_l1(&removal.tree);
    let n = inner.dimension + 1;
    let lift = |x: Vec<Rational>, last: Rational| {
        let mut x = x;
        x.push(last);
        x
    };
    let image_of = |p: &TreePoint| {
        inner
            .eval(&removal.tree, p)
            .expect("point located in reduced tree")
    };

    let mut emb = PwaEmbedding::new(Norm::L1, n);
    for v in tree.vertices() {
        let label = tree.label(v);
        let x = if v == a0 {
            lift(image_of(&removal.b0), -removal.a0_weight.clone())
        } else if v == a1 {
            lift(image_of(&removal.b1), removal.a1_weight.clone())
        } else {
            let p = removal
                .tree
                .locate(label)
                .expect("surviving vertex is a point of the reduced tree");
            lift(image_of(&p), Rational::zero())
        };
        emb.images.insert(label.to_string(), x);
    }
    emb
}
