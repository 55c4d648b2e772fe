//! Randomized invariants: structural laws that must hold on arbitrary
//! inputs, not just the curated fixtures.

use proptest::prelude::*;

use boxcomplex::graph::Graph;
use boxcomplex::homology::{betti_gf2, betti_gf2_direct};
use boxcomplex::{Complex, GraphComplexes, Label, NodeSet};

/// A connected graph on `n` nodes: a spanning path plus whatever extra
/// edges the mask selects.
fn graph_from(n: usize, mask: u64) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut bit = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            // Recycle mask bits when there are more pairs than bits; the
            // correlation is harmless for these properties.
            if mask >> (bit & 63) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges, "random").expect("path keeps it connected")
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>()).prop_map(|(n, mask)| graph_from(n, mask))
}

/// A complex on up to 7 vertices from an arbitrary facet list.
fn arb_complex() -> impl Strategy<Value = Complex> {
    proptest::collection::vec(proptest::collection::vec(0u32..7, 1..=4), 1..=8).prop_map(
        |raw_facets| {
            let labels: Vec<Label> = (0..7)
                .map(|v| Label::unsided(NodeSet::singleton(v)))
                .collect();
            let facets: Vec<Vec<Label>> = raw_facets
                .into_iter()
                .map(|f| f.into_iter().map(|v| labels[v as usize]).collect())
                .collect();
            Complex::from_facets("random", labels, facets).expect("small facets")
        },
    )
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    /// The node-set order is exactly cardinality-then-lexicographic on
    /// ascending member lists; matching a model order makes it total.
    #[test]
    fn nodeset_order_matches_its_model(a in any::<u64>(), b in any::<u64>()) {
        let (sa, sb) = (NodeSet::from_mask(a), NodeSet::from_mask(b));
        let model_a = (sa.len(), sorted(sa.iter().collect()));
        let model_b = (sb.len(), sorted(sb.iter().collect()));
        prop_assert_eq!(sa.cmp(&sb), model_a.cmp(&model_b));
    }

    /// Encoding a graph and parsing it back reproduces it exactly.
    #[test]
    fn graph6_round_trip(g in arb_graph(16)) {
        let text = g.to_graph6();
        let back = Graph::parse_graph6(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.to_graph6(), text);
    }

    /// CN laws hold on arbitrary connected graphs (exhaustively at these
    /// sizes).
    #[test]
    fn cn_laws_hold_on_random_graphs(g in arb_graph(8), seed in any::<u64>()) {
        prop_assert!(g.cn_laws_report(seed).all_pass());
    }

    /// Rebuilding a complex from its own facets is the identity.
    #[test]
    fn canonicalization_is_idempotent(c in arb_complex()) {
        let rebuilt = Complex::from_facets(
            c.name(),
            c.labels().to_vec(),
            c.facet_labels().collect(),
        ).unwrap();
        prop_assert_eq!(&rebuilt, &c);
    }

    /// The collapsing accelerator never changes a Betti profile.
    #[test]
    fn betti_acceleration_is_exact(c in arb_complex()) {
        prop_assert_eq!(betti_gf2(&c), betti_gf2_direct(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    /// Barycentric subdivision preserves the Euler characteristic and the
    /// GF(2) Betti profile.
    #[test]
    fn subdivision_preserves_homology(c in arb_complex()) {
        let sd = c.barycentric_subdivision("sd", &|face: &[Label]| {
            let union: NodeSet = face
                .iter()
                .flat_map(|l| l.payload.iter())
                .collect();
            Label::unsided(union)
        }).unwrap();
        prop_assert_eq!(sd.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(betti_gf2(&sd), betti_gf2(&c));
    }

    /// The full certified pipeline goes through on arbitrary labeled
    /// connected graphs: every certificate it re-checks along the way
    /// (involutions, simpliciality, equivariance, the doubled-complex
    /// cross-build, halving, the isomorphism) holds.
    #[test]
    fn pipeline_certifies_on_random_graphs(g in arb_graph(6)) {
        let suite = GraphComplexes::build(g).unwrap();
        prop_assert_eq!(
            suite.hdl.vertex_count() * 2,
            suite.dl.vertex_count()
        );
        prop_assert_eq!(
            suite.box_z2.euler_characteristic(),
            suite.ssd.euler_characteristic()
        );
    }
}
