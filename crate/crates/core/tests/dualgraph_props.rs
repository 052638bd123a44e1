use proptest::prelude::*;
use shimura_core::dualgraph::*;
use shimura_core::hecke::brandt_over_q;

/// Connected multigraph: random spanning tree plus extra edges (loops and
/// parallels allowed), vertex and edge weights in {1, 2, 3}.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    prop_oneof![
        random_graph(max_n, 3),
        random_graph(max_n, 1),
        symmetric_graph(max_n)
    ]
}

fn random_graph(max_n: usize, wmax: u64) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(1u64..=wmax, n),
            proptest::collection::vec((any::<prop::sample::Index>(), 1u64..=wmax), n - 1),
            proptest::collection::vec((0..n, 0..n, 1u64..=wmax), 0..=n),
        )
            .prop_map(move |(vw, tree, extra)| {
                let mut edges: Vec<(usize, usize, u64)> = tree
                    .iter()
                    .enumerate()
                    .map(|(i, (parent, w))| (parent.index(i + 1), i + 1, *w))
                    .collect();
                edges.extend(extra);
                let mut g = Graph::from_edges(n, &edges).unwrap();
                for (v, w) in g.vertices.iter_mut().zip(vw) {
                    v.w = w;
                }
                g
            })
    })
}

/// Cycles with optional spokes to a hub, and complete bipartite graphs.
fn symmetric_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n, any::<bool>(), 1u64..=3, 1u64..=3).prop_map(|(n, bip, w1, w2)| {
        let mut edges = Vec::new();
        if bip {
            let a = n / 2;
            for i in 0..a {
                for j in a..n {
                    edges.push((i, j, w1));
                }
            }
        } else {
            let m = n - 1;
            for i in 0..m {
                edges.push((i, (i + 1) % m, w1));
                if i % 2 == 0 {
                    edges.push((i, m, w2));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    })
}

fn edge_multiset(g: &Graph, perm: &[usize]) -> Vec<(usize, usize, u64)> {
    let mut v: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.u], perm[e.v]);
            (a.min(b), a.max(b), e.w)
        })
        .collect();
    v.sort_unstable();
    v
}

fn brute_force_order(g: &Graph) -> u64 {
    let n = g.vertex_count();
    let ident: Vec<usize> = (0..n).collect();
    let target = edge_multiset(g, &ident);
    let mut perm = ident.clone();
    let mut count = 0;
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut check = |p: &[usize]| {
        if (0..n).all(|i| g.vertices[i].w == g.vertices[p[i]].w) && edge_multiset(g, p) == target {
            count += 1;
        }
    };
    check(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

/// Betti numbers per component from a fresh union-find pass.
fn betti_from_scratch(g: &Graph) -> Vec<(usize, usize, i64)> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        parent[a] = b;
    }
    let mut comps: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
    for v in 0..n {
        comps.entry(find(&mut parent, v)).or_default().0 += 1;
    }
    for e in &g.edges {
        comps.get_mut(&find(&mut parent, e.u)).unwrap().1 += 1;
    }
    let mut out: Vec<_> = comps
        .values()
        .map(|&(v, e)| (v, e, 1 + e as i64 - v as i64))
        .collect();
    out.sort_unstable();
    out
}

fn sorted(mut v: Vec<(usize, usize, i64)>) -> Vec<(usize, usize, i64)> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn quotient_betti_matches_recomputation(g in connected_graph(9)) {
        let group = automorphism_group(&g).unwrap();
        let mut groups = vec![group.clone()];
        if let Ok(elems) = group.elements() {
            if let Some(inv) = elems.iter().find(|a| a.order() == 2) {
                groups.push(PermGroup::generated_by(&g, vec![inv.clone()]).unwrap());
            }
        }
        for h in groups {
            let q = quotient_by(&g, &h).unwrap();
            let rep = q.betti_report();
            prop_assert_eq!(sorted(rep.components.clone()), betti_from_scratch(&q));
            prop_assert_eq!(rep.total, rep.components.iter().map(|c| c.2).sum::<i64>());
            prop_assert!(q.vertex_count() <= g.vertex_count());
        }
    }

    #[test]
    fn stabilize_preserves_betti_and_is_idempotent(g in connected_graph(10)) {
        let once = stabilize(&g);
        prop_assert_eq!(once.graph.betti(), g.betti());
        let twice = stabilize(&once.graph);
        prop_assert_eq!(&twice.graph.vertices, &once.graph.vertices);
        prop_assert_eq!(&twice.graph.edges, &once.graph.edges);
        prop_assert_eq!(twice.leaves_removed + twice.chains_contracted, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn automorphism_group_matches_brute_force(g in connected_graph(8)) {
        let group = automorphism_group(&g).unwrap();
        prop_assert_eq!(group.order_u64(), Some(brute_force_order(&g)));
        if let Ok(elems) = group.elements() {
            for a in &elems {
                let again = GraphAutomorphism::new(&g, a.vertex.clone()).unwrap();
                prop_assert_eq!(&again, a);
                for (k, e) in g.edges.iter().enumerate() {
                    let img = &g.edges[a.edge[k] as usize];
                    prop_assert_eq!(img.w, e.w);
                    let (x, y) = (a.vertex[e.u] as usize, a.vertex[e.v] as usize);
                    prop_assert_eq!(img.ends(), (x.min(y), x.max(y)));
                }
                let rep = element_admissibility(&g, a);
                prop_assert_eq!(rep.admissibility == Admissibility::NotApplicable, a.is_identity());
            }
        }
    }
}

#[test]
fn identity_is_not_applicable() {
    let g = Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
    let r = element_admissibility(&g, &GraphAutomorphism::identity(&g));
    assert_eq!(r.admissibility, Admissibility::NotApplicable);
}

#[test]
fn doubles_of_brandt_oracle_outputs() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let b = brandt_over_q(p).unwrap();
        let ds = &b.dataset;
        for (label, m) in &ds.matrices {
            let q: u64 = label.parse().unwrap();
            let g = build_double(ds, label).unwrap();
            let n = ds.dim();
            assert_eq!(g.vertex_count(), 2 * n);
            // row-sum law: Σ_{e ∋ v} w(v)/w(e) = q + 1 on every vertex
            for v in 0..2 * n {
                let s: u64 = g
                    .star(v)
                    .iter()
                    .map(|&e| g.vertices[v].w / g.edges[e].w)
                    .sum();
                assert_eq!(s, q + 1, "p={p} q={q} v={v}");
            }
            for (i, row) in m.iter().enumerate() {
                assert_eq!(row.iter().sum::<i64>(), q as i64 + 1);
                let _ = i;
            }
            let swap = atkin_lehner_swap(&g).unwrap();
            let grp = PermGroup::generated_by(&g, vec![swap]).unwrap();
            let quo = quotient_by(&g, &grp).unwrap();
            assert_eq!(quo.vertex_count(), n);
        }
    }
}
