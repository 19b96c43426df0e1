//! Constructions in `(ℝⁿ, d∞)`.

use num_traits::Zero;

use crate::embedding::{EmbedError, Norm, PwaEmbedding};
use crate::rational::{int, sub_vec, positively_proportional, Rational};
use crate::tree::{MetricTree, StarTree, TreePoint};
use crate::verify::{verify_isometry_with, VerifyConfig};

/// The `j`-th vertex of the cube `{−1, +1}ⁿ` in binary counting order,
/// with coordinate 1 as the most significant digit and `+1` as digit 0.
pub fn sign_vector(j: usize, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|c| {
            let bit = (j >> (n - 1 - c)) & 1;
            int(if bit == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Sends arm `i` to `aᵢ·vᵢ` for the sign vectors `vᵢ`. Needs `k ≤ 2ⁿ`.
///
/// A two-arm star is a single edge with its center suppressed, so its tips
/// take the antipodal pair `v₁, −v₁` to keep the edge image straight.
pub fn star_embed_linf(star: &StarTree, n: usize) -> Result<PwaEmbedding, EmbedError> {
    if n == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    let k = star.arm_count();
    let fits = n >= usize::BITS as usize || k <= 1usize << n;
    if !fits {
        return Err(EmbedError::TooManyArms {
            arms: k,
            dimension: n,
            norm: Norm::Linf,
            bound: 1usize << n,
        });
    }
    let mut emb = PwaEmbedding::new(Norm::Linf, n);
    emb.images
        .insert(star.center.clone(), vec![Rational::zero(); n]);
    let last = if n >= usize::BITS as usize { usize::MAX } else { (1usize << n) - 1 };
    for (i, (tip, length)) in star.arms.iter().enumerate() {
        let j = if k == 2 && i == 1 { last } else { i };
        let x = sign_vector(j, n).into_iter().map(|s| s * length).collect();
        emb.images.insert(tip.clone(), x);
    }
    Ok(emb)
}

/// `x ↦ (d(x, l₁), …, d(x, l_L))` over the leaves in label order.
pub fn kuratowski_embed_linf(tree: &MetricTree) -> PwaEmbedding {
    let leaves = tree.leaves();
    let mut emb = PwaEmbedding::new(Norm::Linf, leaves.len());
    for v in tree.vertices() {
        let x = leaves
            .iter()
            .map(|&l| tree.vertex_distance(v, l).clone())
            .collect();
        emb.images.insert(tree.label(v).to_string(), x);
    }
    emb
}

/// `(⌈log₂ L⌉, upper)`: no tree with more than `2ⁿ` leaves embeds in
/// dimension `n`, and the leaf-distance map always works in dimension `L`.
/// Stars and paths meet the lower bound.
pub fn min_dim_linf_bounds(tree: &MetricTree) -> (usize, usize) {
    let leaves = tree.leaf_count();
    let mut lower = 1;
    while (1usize << lower) < leaves {
        lower += 1;
    }
    let upper = if leaves <= 2 || tree.is_star() {
        lower
    } else {
        leaves
    };
    (lower, upper)
}

/// Collapses a verified embedding to the star of its leaf edges: arm `i`
/// has the weight of leaf `i`'s edge and tip `Aᵢ − Bᵢ`, the leaf image minus
/// the image of its attachment vertex.
///
/// For an isometric input the result is again isometric under the same
/// norm, so its arm count is bounded by the star bound of that norm. A
/// single edge is split at its suppressed vertex (or midpoint) instead.
pub fn leaf_direction_star(
    tree: &MetricTree,
    emb: &PwaEmbedding,
) -> Result<(StarTree, PwaEmbedding), EmbedError> {
    let report = verify_isometry_with(tree, emb, &VerifyConfig { samples: 0, seed: 0 })?;
    if !report.passed() {
        return Err(EmbedError::NotIsometric);
    }
    let leaves = tree.leaves();
    // A single edge has no interior vertex; its arms meet at the first
    // suppressed vertex, or at the midpoint.
    let path_center = (tree.edge_count() == 1).then(|| match tree.suppressed().first() {
        Some(s) => (
            s.label.clone(),
            tree.locate(&s.label).expect("suppressed vertex is locatable"),
        ),
        None => {
            let e = &tree.edges()[0];
            let mid = TreePoint::Edge {
                edge: crate::tree::EdgeId(0),
                offset: &e.weight * crate::rational::half(),
            };
            ("o".to_string(), mid)
        }
    });
    let mut directions = Vec::with_capacity(leaves.len());
    for &leaf in &leaves {
        let a = emb.eval(tree, &TreePoint::Vertex(leaf))?;
        let leaf_point = TreePoint::Vertex(leaf);
        let (b, weight) = match &path_center {
            Some((_, c)) => (emb.eval(tree, c)?, tree.distance(&leaf_point, c)?),
            None => {
                let (attach, edge) = tree.attachment(leaf).expect("leaf");
                (
                    emb.eval(tree, &TreePoint::Vertex(attach))?,
                    tree.edge(edge).weight.clone(),
                )
            }
        };
        directions.push((leaf, sub_vec(&a, &b), weight));
    }
    for (i, (li, di, _)) in directions.iter().enumerate() {
        for (lj, dj, _) in &directions[i + 1..] {
            if positively_proportional(di, dj) {
                return Err(EmbedError::ProportionalDirections(
                    tree.label(*li).to_string(),
                    tree.label(*lj).to_string(),
                ));
            }
        }
    }

    let mut center = path_center.map_or_else(|| "o".to_string(), |(label, _)| label);
    while leaves.iter().any(|&l| tree.label(l) == center) {
        center.push('\'');
    }
    let star = StarTree {
        center: center.clone(),
        arms: directions
            .iter()
            .map(|(l, _, w)| (tree.label(*l).to_string(), w.clone()))
            .collect(),
    };
    let mut star_emb = PwaEmbedding::new(emb.norm, emb.dimension);
    star_emb
        .images
        .insert(center, vec![Rational::zero(); emb.dimension]);
    for (l, d, _) in directions {
        star_emb.images.insert(tree.label(l).to_string(), d);
    }
    Ok((star, star_emb))
}
