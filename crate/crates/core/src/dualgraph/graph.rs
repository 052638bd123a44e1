//! Weighted multigraphs with loops.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub w: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
    /// Endpoints with the smaller index first.
    pub fn ends(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// side (0 or 1) of each vertex, for bipartite doubles
    pub bipartition: Option<Vec<u8>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    pub connected: bool,
    /// (vertices, edges, 1 + E - V) per component
    pub components: Vec<(usize, usize, i64)>,
    pub total: i64,
}

impl Graph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let n = vertices.len();
        if let Some(v) = vertices.iter().find(|v| v.w == 0) {
            return Err(invalid(format!("vertex {} has weight 0", v.id)));
        }
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(invalid(format!(
                    "edge {} has an endpoint out of range",
                    e.id
                )));
            }
            if e.w == 0 {
                return Err(invalid(format!("edge {} has weight 0", e.id)));
            }
        }
        Ok(Graph {
            vertices,
            edges,
            bipartition: None,
            notes: Vec::new(),
        })
    }

    /// Unit-weight graph on vertices 0..n with ids "0", "1", ...
    pub fn from_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let vs = (0..n)
            .map(|i| Vertex {
                id: format!("{i}"),
                w: 1,
            })
            .collect();
        let es = edges
            .iter()
            .enumerate()
            .map(|(k, &(u, v, w))| Edge {
                id: format!("e{k}"),
                u,
                v,
                w,
            })
            .collect();
        Graph::new(vs, es)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges incident to v; a loop appears once.
    pub fn star(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&k| self.edges[k].u == v || self.edges[k].v == v)
            .collect()
    }

    /// Loops count twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Component index of every vertex, numbered by smallest member.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[v] = id[r];
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let ids = self.component_ids();
        let k = ids.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); k];
        for (v, &c) in ids.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Σ over components of 1 + E_i - V_i.
    pub fn betti(&self) -> i64 {
        self.betti_report().total
    }

    pub fn betti_report(&self) -> BettiReport {
        let ids = self.component_ids();
        let k = ids.iter().max().map_or(0, |m| m + 1);
        let mut vc = vec![0usize; k];
        let mut ec = vec![0usize; k];
        for &c in &ids {
            vc[c] += 1;
        }
        for e in &self.edges {
            ec[ids[e.u]] += 1;
        }
        let components: Vec<(usize, usize, i64)> = (0..k)
            .map(|c| (vc[c], ec[c], 1 + ec[c] as i64 - vc[c] as i64))
            .collect();
        BettiReport {
            connected: k <= 1,
            total: components.iter().map(|c| c.2).sum(),
            components,
        }
    }

    /// Graphviz source with weights as labels.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "\\\""));
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{} [label=\"{} ({})\"];",
                k,
                v.id.replace('"', "\\\""),
                v.w
            );
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", e.u, e.v, e.w);
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_numbers() {
        let tree = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (1, 3, 1)]).unwrap();
        assert_eq!(tree.betti(), 0);
        let theta = Graph::from_edges(2, &[(0, 1, 1), (0, 1, 1), (0, 1, 1)]).unwrap();
        assert_eq!(theta.betti(), 2);
        let two = Graph::from_edges(4, &[(0, 1, 1), (0, 1, 1), (2, 3, 1)]).unwrap();
        let r = two.betti_report();
        assert!(!r.connected);
        assert_eq!(r.components, [(2, 2, 1), (2, 1, 0)]);
        let lp = Graph::from_edges(1, &[(0, 0, 3)]).unwrap();
        assert_eq!((lp.degree(0), lp.star(0).len(), lp.betti()), (2, 1, 1));
    }

    #[test]
    fn dot() {
        let g = Graph::from_edges(2, &[(0, 1, 5)]).unwrap();
        assert!(g.to_dot("g").contains("n0 -- n1 [label=\"5\"]"));
    }
}
