mod common;

use common::{h_tree, point, rng, GraphOracle};
use mtree_embed::random::{random_point, random_tree};
use mtree_embed::rational::{int, ratio};
use mtree_embed::tree::TreeError;
use mtree_embed::{MetricTree, StarTree, TreePoint};
use proptest::prelude::*;

#[test]
fn build_examples() {
    let t = MetricTree::from_edges([("a", "b", int(1))]).unwrap();
    assert_eq!(t.leaf_count(), 2);

    let t = MetricTree::from_edges([("o", "x", int(1)), ("o", "y", int(1)), ("o", "z", int(1))])
        .unwrap();
    let leaves: Vec<_> = t.leaves().into_iter().map(|v| t.label(v)).collect();
    assert_eq!(leaves, ["x", "y", "z"]);

    let t = MetricTree::from_edges([("a", "b", int(1)), ("b", "c", int(2))]).unwrap();
    assert_eq!(t.edge_count(), 1);
    assert_eq!(t.edges()[0].weight, int(3));
    assert_eq!(t.suppressed().len(), 1);
    assert_eq!(t.suppressed()[0].label, "b");
}

#[test]
fn build_errors() {
    let e = MetricTree::from_edges([("a", "b", int(1)), ("c", "d", int(1))]).unwrap_err();
    assert_eq!(e, TreeError::Disconnected);
    assert!(matches!(
        MetricTree::from_edges([("a", "b", int(1)), ("b", "c", int(1)), ("c", "a", int(1))]),
        Err(TreeError::Cycle(..))
    ));
    assert!(matches!(
        MetricTree::from_edges([("a", "b", int(0))]),
        Err(TreeError::NonPositiveWeight { .. })
    ));
    assert!(matches!(
        MetricTree::from_edges([("a", "b", int(1)), ("b", "a", int(2))]),
        Err(TreeError::DuplicateEdge(..))
    ));
}

#[test]
fn distance_examples() {
    let star = StarTree::uniform(3, int(1)).to_tree().unwrap();
    assert_eq!(star.distance(&point(&star, "t1"), &point(&star, "t2")).unwrap(), int(2));
    for v in star.vertices() {
        let p = TreePoint::Vertex(v);
        assert_eq!(star.distance(&p, &p).unwrap(), int(0));
    }

    let path = MetricTree::from_edges([("a", "b", int(1)), ("b", "c", int(2))]).unwrap();
    let b = path.locate("b").unwrap();
    let c = point(&path, "c");
    let mid_bc = path.point_along(&b, &c, &int(1)).unwrap();
    assert_eq!(path.distance(&point(&path, "a"), &mid_bc).unwrap(), int(2));
}

#[test]
fn path_examples() {
    let star = StarTree::uniform(3, int(1)).to_tree().unwrap();
    let t1 = point(&star, "t1");
    assert!(star.path(&t1, &t1).unwrap().is_empty());
    let steps = star.path(&t1, &point(&star, "t2")).unwrap();
    assert_eq!(steps.len(), 2);
    let o = star.vertex("o").unwrap();
    let first = star.edge(steps[0].edge);
    let second = star.edge(steps[1].edge);
    assert!(first.u == o || first.v == o);
    assert!(second.u == o || second.v == o);

    let h = h_tree();
    let oracle = GraphOracle::new(&h);
    let steps = h.path(&point(&h, "l2"), &point(&h, "l4")).unwrap();
    let total = steps.iter().fold(int(0), |acc, s| acc + &s.length);
    assert_eq!(total, oracle.dist[oracle.index("l2")][oracle.index("l4")]);
    assert_eq!(total, int(3));
}

#[test]
fn leaves_examples() {
    let edge = MetricTree::from_edges([("u", "v", int(2))]).unwrap();
    assert_eq!(edge.leaves().len(), 2);
    let star = StarTree::uniform(5, int(1)).to_tree().unwrap();
    let tips: Vec<_> = star.leaves().into_iter().map(|v| star.label(v)).collect();
    assert_eq!(tips, ["t1", "t2", "t3", "t4", "t5"]);
    let h = h_tree();
    let leaves: Vec<_> = h.leaves().into_iter().map(|v| h.label(v)).collect();
    assert_eq!(leaves, ["l1", "l2", "l3", "l4"]);
}

#[test]
fn median_and_betweenness_examples() {
    let star = StarTree::uniform(3, int(1)).to_tree().unwrap();
    let (x, y, z) = (point(&star, "t1"), point(&star, "t2"), point(&star, "t3"));
    assert_eq!(star.median(&x, &x, &z).unwrap(), x);
    assert_eq!(star.median(&x, &y, &z).unwrap(), point(&star, "o"));
    assert!(star.is_between(&x, &x, &z).unwrap());
    assert!(!star.is_between(&x, &y, &z).unwrap());

    let path = MetricTree::from_edges([("a", "b", int(1)), ("b", "c", int(2))]).unwrap();
    let b = path.locate("b").unwrap();
    assert!(path.is_between(&point(&path, "a"), &b, &point(&path, "c")).unwrap());
}

#[test]
fn remove_leaf_pair_examples() {
    let h = h_tree();
    let r = h
        .remove_leaf_pair(h.vertex("l2").unwrap(), h.vertex("l4").unwrap())
        .unwrap();
    // Oracle: delete the two edges by hand and merge a and b away.
    let expect = MetricTree::from_edges([("l1", "a", int(1)), ("a", "b", int(1)), ("b", "l3", int(1))])
        .unwrap();
    assert_eq!(r.tree.edge_list(), expect.edge_list());
    assert_eq!(r.tree.edge_list()[0].2, int(3));
    let l1 = point(&r.tree, "l1");
    assert_eq!(r.tree.distance(&l1, &r.b0).unwrap(), int(1));
    assert_eq!(r.tree.distance(&l1, &r.b1).unwrap(), int(2));

    let star4 = StarTree::uniform(4, int(1)).to_tree().unwrap();
    let r = star4
        .remove_leaf_pair(star4.vertex("t1").unwrap(), star4.vertex("t2").unwrap())
        .unwrap();
    assert_eq!(r.tree.leaf_count(), 2);
    assert_eq!(r.b0, r.b1);
    assert_eq!(r.b0, r.tree.locate("o").unwrap());

    let star3 = StarTree::uniform(3, int(1)).to_tree().unwrap();
    let r = star3
        .remove_leaf_pair(star3.vertex("t1").unwrap(), star3.vertex("t2").unwrap())
        .unwrap();
    assert_eq!(r.tree.leaf_count(), 2);
    assert_eq!(r.tree.edge_count(), 1);

    assert!(matches!(
        h.remove_leaf_pair(h.vertex("a").unwrap(), h.vertex("l1").unwrap()),
        Err(TreeError::NotALeaf(_))
    ));
    let edge = MetricTree::from_edges([("u", "v", int(1))]).unwrap();
    assert!(matches!(
        edge.remove_leaf_pair(edge.vertex("u").unwrap(), edge.vertex("v").unwrap()),
        Err(TreeError::TooFewLeaves(2))
    ));
}

#[test]
fn medians_of_vertex_triples_match_path_intersection() {
    let mut r = rng(11);
    for trial in 0..30 {
        let tree = random_tree(&mut r, 3 + trial % 6, 8);
        let oracle = GraphOracle::new(&tree);
        let n = tree.vertex_count();
        for x in 0..n.min(6) {
            for y in 0..n {
                for z in (0..n).step_by(2) {
                    let label = |i: usize| tree.label(mtree_embed::tree::VertexId(i)).to_string();
                    let (ox, oy, oz) = (oracle.index(&label(x)), oracle.index(&label(y)), oracle.index(&label(z)));
                    let pxy = oracle.vertex_path(ox, oy);
                    let pxz = oracle.vertex_path(ox, oz);
                    let pyz = oracle.vertex_path(oy, oz);
                    let common: Vec<usize> = pxy
                        .iter()
                        .copied()
                        .filter(|v| pxz.contains(v) && pyz.contains(v))
                        .collect();
                    assert_eq!(common.len(), 1);
                    let w = tree
                        .median(
                            &TreePoint::Vertex(mtree_embed::tree::VertexId(x)),
                            &TreePoint::Vertex(mtree_embed::tree::VertexId(y)),
                            &TreePoint::Vertex(mtree_embed::tree::VertexId(z)),
                        )
                        .unwrap();
                    assert_eq!(w, point(&tree, &oracle.labels[common[0]]));
                }
            }
        }
    }
}

#[test]
fn distances_agree_with_graph_oracle() {
    let mut r = rng(5);
    for trial in 0..40 {
        let tree = random_tree(&mut r, 2 + trial % 8, 16);
        let oracle = GraphOracle::new(&tree);
        for _ in 0..50 {
            let p = random_point(&tree, &mut r);
            let q = random_point(&tree, &mut r);
            assert_eq!(tree.distance(&p, &q).unwrap(), oracle.distance(&tree, &p, &q));
        }
    }
}

#[test]
fn edge_list_text_round_trip() {
    let text = "# H\na b 1\na l1 1/2\na l2 0.25\n\nb l3 3\nb l4 1\n";
    let t = mtree_embed::tree::parse_edge_list(text).unwrap();
    let back = mtree_embed::tree::parse_edge_list(&t.to_edge_list_text()).unwrap();
    assert_eq!(t.edge_list(), back.edge_list());
    assert_eq!(t.edge_list()[1].2, ratio(1, 2));
    match mtree_embed::tree::parse_edge_list("a b 1\nc d\n") {
        Err(TreeError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
}

fn tree_and_points(count: usize) -> impl Strategy<Value = (MetricTree, Vec<TreePoint>)> {
    (2usize..9, any::<u64>()).prop_map(move |(leaves, seed)| {
        let mut r = rng(seed);
        let tree = random_tree(&mut r, leaves, 12);
        let points = (0..count).map(|_| random_point(&tree, &mut r)).collect();
        (tree, points)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric((tree, p) in tree_and_points(3)) {
        let d = |a: &TreePoint, b: &TreePoint| tree.distance(a, b).unwrap();
        prop_assert_eq!(d(&p[0], &p[1]), d(&p[1], &p[0]));
        prop_assert_eq!(d(&p[0], &p[0]), int(0));
        prop_assert_eq!(d(&p[0], &p[1]) == int(0), p[0] == p[1]);
        prop_assert!(d(&p[0], &p[2]) <= d(&p[0], &p[1]) + d(&p[1], &p[2]));
    }

    #[test]
    fn path_lengths_sum_to_distance((tree, p) in tree_and_points(2)) {
        let total = tree.path(&p[0], &p[1]).unwrap().iter().fold(int(0), |acc, s| acc + &s.length);
        prop_assert_eq!(total, tree.distance(&p[0], &p[1]).unwrap());
    }

    #[test]
    fn median_identities((tree, p) in tree_and_points(3)) {
        let (x, y, z) = (&p[0], &p[1], &p[2]);
        let w = tree.median(x, y, z).unwrap();
        let d = |a: &TreePoint, b: &TreePoint| tree.distance(a, b).unwrap();
        prop_assert_eq!(d(x, y), d(x, &w) + d(&w, y));
        prop_assert_eq!(d(x, z), d(x, &w) + d(&w, z));
        prop_assert_eq!(d(y, z), d(y, &w) + d(&w, z));
        // The median does not depend on argument order.
        prop_assert_eq!(&tree.median(z, x, y).unwrap(), &w);
    }

    #[test]
    fn betweenness_is_transitive((tree, p) in tree_and_points(2), s1 in 0u32..=8, s2 in 0u32..=8) {
        // a, d random; b and c are chosen on [a, d] in order so that abc and
        // acd hold, and then abd and bcd must too.
        let (a, d) = (&p[0], &p[1]);
        let len = tree.distance(a, d).unwrap();
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        let b = tree.point_along(a, d, &(&len * ratio(lo as i64, 8))).unwrap();
        let c = tree.point_along(a, d, &(&len * ratio(hi as i64, 8))).unwrap();
        prop_assert!(tree.is_between(&a.clone(), &b, &c).unwrap());
        prop_assert!(tree.is_between(a, &c, d).unwrap());
        prop_assert!(tree.is_between(a, &b, d).unwrap());
        prop_assert!(tree.is_between(&b, &c, d).unwrap());
    }

    #[test]
    fn remove_leaf_pair_invariants(leaves in 3usize..9, seed in any::<u64>(), pick in any::<(usize, usize)>()) {
        let mut r = rng(seed);
        let tree = random_tree(&mut r, leaves, 12);
        let ls = tree.leaves();
        let i = pick.0 % ls.len();
        let j = (i + 1 + pick.1 % (ls.len() - 1)) % ls.len();
        let removal = tree.remove_leaf_pair(ls[i], ls[j]).unwrap();
        let y = &removal.tree;
        let shared = tree.attachment(ls[i]).unwrap().0 == tree.attachment(ls[j]).unwrap().0;
        let shared_deg3 = shared && tree.degree(tree.attachment(ls[i]).unwrap().0) == 3;
        if shared_deg3 {
            prop_assert_eq!(y.leaf_count(), leaves - 1);
        } else {
            prop_assert_eq!(y.leaf_count(), leaves - 2);
        }
        // Surviving vertices keep their mutual distances.
        for u in tree.vertices() {
            for v in tree.vertices() {
                if u == ls[i] || u == ls[j] || v == ls[i] || v == ls[j] {
                    continue;
                }
                let pu = y.locate(tree.label(u)).unwrap();
                let pv = y.locate(tree.label(v)).unwrap();
                prop_assert_eq!(&y.distance(&pu, &pv).unwrap(), tree.vertex_distance(u, v));
            }
        }
        let b0 = tree.attachment(ls[i]).unwrap().0;
        prop_assert_eq!(&removal.b0, &y.locate(tree.label(b0)).unwrap());
    }
}
