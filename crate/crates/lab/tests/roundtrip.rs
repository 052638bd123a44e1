use proptest::prelude::*;
use shimura_core::dualgraph::Graph;
use shimura_core::fuchsian::Signature;
use shimura_lab::formats::{to_json, GraphFile, SignatureFile};

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec(1u64..20, n),
            prop::collection::vec((0..n, 0..n, 1u64..20), 0..16),
        )
            .prop_map(move |(vw, edges)| {
                let mut g = Graph::from_edges(n, &edges).unwrap();
                for (v, w) in g.vertices.iter_mut().zip(vw) {
                    v.w = w;
                }
                g
            })
    })
}

fn signature() -> impl Strategy<Value = Signature> {
    (
        0u64..60,
        prop::collection::btree_map(2u64..64, 1u64..30, 0..5),
    )
        .prop_map(|(g, ell)| {
            let e: Vec<(u64, u64)> = ell.into_iter().collect();
            Signature::new(g, &e).unwrap()
        })
}

proptest! {
    #[test]
    fn graph_payload_round_trips(g in graph()) {
        let text = to_json(&GraphFile::from_graph(&g));
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        let h = back.to_graph().unwrap();
        prop_assert_eq!(&h.vertices, &g.vertices);
        prop_assert_eq!(&h.edges, &g.edges);
        prop_assert_eq!(to_json(&GraphFile::from_graph(&h)), text);
    }

    #[test]
    fn signature_payload_round_trips(s in signature()) {
        let text = to_json(&SignatureFile::from_signature(&s));
        let back: SignatureFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_signature().unwrap(), s.clone());
        let parsed: Signature = s.to_string().parse().unwrap();
        prop_assert_eq!(parsed, s);
    }
}
