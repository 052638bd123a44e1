//! Graph constructions: bipartite double of a Brandt graph, quotient by a
//! group of automorphisms, and contraction to the stable graph.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::aut::{GraphAutomorphism, PermGroup};
use super::graph::{Edge, Graph, Vertex};
use crate::error::{Error, Result};
use crate::exactalg::poly::{rat, rat_frac};
use crate::hecke::{BrandtDataset, BrandtEdge};

/// Double of the Brandt graph at `label`: classes × {0, 1}, an edge (i,0)–(j,1)
/// per Brandt edge, with b_ij = Σ_{e: i~j} w_i / w(e).
pub fn build_double(ds: &BrandtDataset, label: &str) -> Result<Graph> {
    let b = ds.matrix(label)?;
    let n = ds.dim();
    let unit = ds.weights.iter().all(|&w| w == 1);
    let edges: Vec<BrandtEdge> = match ds.edges.get(label) {
        Some(es) => es.clone(),
        None if unit => {
            let mut es = Vec::new();
            for (i, row) in b.iter().enumerate() {
                for (j, &m) in row.iter().enumerate() {
                    if m < 0 {
                        return Err(Error::EdgeMismatch(format!("negative entry b[{i}][{j}]")));
                    }
                    es.extend((0..m).map(|_| BrandtEdge { i, j, w: 1 }));
                }
            }
            es
        }
        None => {
            return Err(Error::EdgeMismatch(format!(
                "{label}: non-trivial vertex weights need an explicit edge list"
            )))
        }
    };
    let mut sums = vec![vec![rat(0); n]; n];
    for e in &edges {
        sums[e.i][e.j] += rat_frac(ds.weights[e.i] as i64, e.w as i64);
    }
    for i in 0..n {
        for j in 0..n {
            if sums[i][j] != rat(b[i][j]) {
                return Err(Error::EdgeMismatch(format!(
                    "{label}: edges give b[{i}][{j}] = {}, matrix has {}",
                    sums[i][j], b[i][j]
                )));
            }
        }
    }
    // the Atkin-Lehner swap (i,s) -> (i,1-s) must act
    let mut count: BTreeMap<(usize, usize, u64), i64> = BTreeMap::new();
    for e in &edges {
        *count.entry((e.i, e.j, e.w)).or_default() += 1;
        *count.entry((e.j, e.i, e.w)).or_default() -= 1;
    }
    if let Some(((i, j, w), _)) = count.iter().find(|(_, &c)| c != 0) {
        return Err(Error::EdgeMismatch(format!(
            "{label}: edges ({i},{j}) and ({j},{i}) of weight {w} are unbalanced"
        )));
    }
    let mut vertices = Vec::with_capacity(2 * n);
    for side in 0..2 {
        for i in 0..n {
            let id = if side == 0 {
                ds.labels[i].clone()
            } else {
                format!("{}'", ds.labels[i])
            };
            vertices.push(Vertex {
                id,
                w: ds.weights[i],
            });
        }
    }
    let es = edges
        .iter()
        .enumerate()
        .map(|(k, e)| Edge {
            id: format!("e{k}"),
            u: e.i,
            v: n + e.j,
            w: e.w,
        })
        .collect();
    let mut g = Graph::new(vertices, es)?;
    g.bipartition = Some((0..2 * n).map(|v| (v >= n) as u8).collect());
    Ok(g)
}

/// The swap (i,0) <-> (i,1) on a double built by `build_double`.
pub fn atkin_lehner_swap(g: &Graph) -> Result<GraphAutomorphism> {
    let n2 = g.vertex_count();
    if g.bipartition.is_none() || n2 % 2 == 1 {
        return Err(Error::NotAutomorphism("not a bipartite double".into()));
    }
    let n = n2 / 2;
    let p = (0..n2).map(|v| ((v + n) % n2) as u32).collect();
    GraphAutomorphism::new(g, p)
}

/// Orbit graph with loops removed. Orbits with a non-trivial stabilizer
/// have their weight multiplied by the stabilizer order.
pub fn quotient_by(g: &Graph, group: &PermGroup) -> Result<Graph> {
    if group.vertex_count != g.vertex_count() || group.edge_count != g.edge_count() {
        return Err(Error::NotAutomorphism(
            "group acts on a different graph".into(),
        ));
    }
    for a in &group.generators {
        GraphAutomorphism::new(g, a.vertex.clone())?;
    }
    let order = &group.order;
    let stab = |orbit_len: usize| -> Result<u64> {
        (order / BigUint::from(orbit_len))
            .to_u64()
            .ok_or_else(|| Error::OrderOverflow("stabilizer order".into()))
    };
    let vorb = group.vertex_orbits();
    let mut vmap = vec![0usize; g.vertex_count()];
    let mut vertices = Vec::new();
    let mut stabilized = 0usize;
    for (k, o) in vorb.iter().enumerate() {
        let rep = *o.iter().next().unwrap();
        for &v in o {
            vmap[v] = k;
        }
        let s = stab(o.len())?;
        stabilized += (s > 1) as usize;
        vertices.push(Vertex {
            id: g.vertices[rep].id.clone(),
            w: g.vertices[rep].w * s,
        });
    }
    let mut edges = Vec::new();
    let mut loops = 0usize;
    for o in group.edge_orbits() {
        let rep = *o.iter().next().unwrap();
        let e = &g.edges[rep];
        let (u, v) = (vmap[e.u], vmap[e.v]);
        if u == v {
            loops += 1;
            continue;
        }
        let s = stab(o.len())?;
        stabilized += (s > 1) as usize;
        edges.push(Edge {
            id: e.id.clone(),
            u,
            v,
            w: e.w * s,
        });
    }
    let mut q = Graph::new(vertices, edges)?;
    q.notes.push(format!(
        "quotient by a group of order {order}: {loops} loop orbits removed"
    ));
    if stabilized > 0 {
        q.notes.push(format!(
            "{stabilized} orbits with non-trivial stabilizer: weights multiplied by the stabilizer order"
        ));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizeReport {
    pub graph: Graph,
    pub leaves_removed: usize,
    pub chains_contracted: usize,
    /// set when the process ends at a single vertex or a cycle
    pub degenerate: Option<String>,
}

fn remove_vertex(g: &mut Graph, v: usize) {
    g.vertices.remove(v);
    g.edges.retain(|e| e.u != v && e.v != v);
    for e in &mut g.edges {
        if e.u > v {
            e.u -= 1;
        }
        if e.v > v {
            e.v -= 1;
        }
    }
    g.bipartition = None;
}

/// Removes leaves one at a time, contracts 2-valent chains (adding edge
/// weights), and repeats until every vertex has star size at least 3.
pub fn stabilize(g: &Graph) -> StabilizeReport {
    let mut h = g.clone();
    h.bipartition = None;
    let mut leaves = 0;
    let mut chains = 0;
    loop {
        if h.vertex_count() <= 1 {
            break;
        }
        let deg = h.degrees();
        if let Some(v) = deg.iter().position(|&d| d <= 1) {
            remove_vertex(&mut h, v);
            leaves += 1;
            continue;
        }
        if deg.iter().all(|&d| d == 2) && h.is_connected() {
            break;
        }
        let cand = (0..h.vertex_count()).find(|&v| {
            deg[v] == 2 && {
                let st = h.star(v);
                st.len() == 2 && st.iter().all(|&e| !h.edges[e].is_loop())
            }
        });
        let Some(v) = cand else { break };
        let st = h.star(v);
        let (e1, e2) = (h.edges[st[0]].clone(), h.edges[st[1]].clone());
        let a = if e1.u == v { e1.v } else { e1.u };
        let b = if e2.u == v { e2.v } else { e2.u };
        h.edges.push(Edge {
            id: format!("{}+{}", e1.id, e2.id),
            u: a,
            v: b,
            w: e1.w + e2.w,
        });
        remove_vertex(&mut h, v);
        chains += 1;
    }
    let degenerate = if h.vertex_count() <= 1 {
        Some(format!("single vertex with {} loops", h.edge_count()))
    } else if h.degrees().iter().all(|&d| d == 2) {
        Some(format!("cycle of length {}", h.vertex_count()))
    } else {
        None
    };
    let mut graph = h;
    graph.notes.push(format!(
        "{leaves} leaves removed, {chains} chains contracted"
    ));
    StabilizeReport {
        graph,
        leaves_removed: leaves,
        chains_contracted: chains,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::aut::automorphism_group;
    use alloc::string::ToString;

    fn ds(weights: Vec<u64>, m: Vec<Vec<i64>>, edges: Option<Vec<BrandtEdge>>) -> BrandtDataset {
        let labels = (0..weights.len()).map(|i| format!("c{i}")).collect();
        let mut em = BTreeMap::new();
        if let Some(e) = edges {
            em.insert("2".to_string(), e);
        }
        BrandtDataset::new(
            "Q",
            labels,
            weights,
            BTreeMap::from([("2".to_string(), m)]),
            BTreeMap::new(),
            em,
            "t",
        )
        .unwrap()
    }

    #[test]
    fn doubles() {
        let g = build_double(&ds(vec![1], vec![vec![3]], None), "2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.betti()), (2, 3, 2));
        let g = build_double(&ds(vec![1, 1], vec![vec![0, 3], vec![3, 0]], None), "2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
        let w = atkin_lehner_swap(&g).unwrap();
        let grp = PermGroup::generated_by(&g, vec![w]).unwrap();
        assert_eq!(quotient_by(&g, &grp).unwrap().vertex_count(), 2);
        // weighted: b = [[1,2],[3,0]] with weights (2,3)
        let edges = vec![
            BrandtEdge { i: 0, j: 0, w: 2 },
            BrandtEdge { i: 0, j: 1, w: 1 },
            BrandtEdge { i: 1, j: 0, w: 1 },
        ];
        let d = ds(vec![2, 3], vec![vec![1, 2], vec![3, 0]], Some(edges));
        let g = build_double(&d, "2").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(build_double(&ds(vec![2, 3], vec![vec![1, 2], vec![3, 0]], None), "2").is_err());
    }

    #[test]
    fn square_antipodal() {
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let a = GraphAutomorphism::new(&g, vec![2, 3, 0, 1]).unwrap();
        let grp = PermGroup::generated_by(&g, vec![a]).unwrap();
        let q = quotient_by(&g, &grp).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count(), q.betti()), (2, 2, 1));
        let triv = PermGroup::trivial(&g);
        let q = quotient_by(&g, &triv).unwrap();
        assert_eq!(
            (q.vertices.clone(), q.edges.clone()),
            (g.vertices.clone(), g.edges.clone())
        );
        let _ = automorphism_group(&g).unwrap();
    }

    #[test]
    fn stabilization() {
        let path = Graph::from_edges(3, &[(0, 1, 2), (1, 2, 5)]).unwrap();
        let r = stabilize(&path);
        assert_eq!(r.graph.vertex_count(), 1);
        assert!(r.degenerate.is_some());
        let tri = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1)]).unwrap();
        let r = stabilize(&tri);
        assert_eq!(
            (
                r.graph.vertex_count(),
                r.graph.edge_count(),
                r.graph.betti()
            ),
            (3, 3, 1)
        );
        assert_eq!(r.degenerate.as_deref(), Some("cycle of length 3"));
        // theta graph with a subdivided edge: chain weights add
        let th = Graph::from_edges(3, &[(0, 1, 1), (0, 1, 4), (0, 2, 2), (2, 1, 5)]).unwrap();
        let r = stabilize(&th);
        assert_eq!((r.graph.vertex_count(), r.graph.edge_count()), (2, 3));
        let mut ws: Vec<u64> = r.graph.edges.iter().map(|e| e.w).collect();
        ws.sort();
        assert_eq!(ws, [1, 4, 7]);
        assert_eq!(stabilize(&r.graph).graph.edges.len(), r.graph.edges.len());
    }
}
