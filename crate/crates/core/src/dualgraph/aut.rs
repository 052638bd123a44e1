//! Weighted graph automorphisms by colour refinement, individualization
//! and backtracking, with the group order from a stabilizer chain.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::graph::Graph;
use crate::error::{Error, Result};

/// Vertex permutation: `p[i]` is the image of i.
pub type Perm = Vec<u32>;

pub fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

/// First `a`, then `b`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &[u32]) -> Perm {
    let mut r = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

pub fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

pub fn perm_order(a: &[u32]) -> u64 {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut l = 1u64;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
            len += 1;
        }
        l = num_integer::lcm(l, len);
    }
    l
}

/// A vertex permutation together with the edge permutation it induces.
/// Parallel edges of equal weight are matched in index order, so automorphisms
/// that only permute such parallel edges are not distinguished.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphAutomorphism {
    pub vertex: Perm,
    pub edge: Perm,
}

/// Edge classes keyed by (endpoints, weight), each listed in index order.
fn edge_classes(g: &Graph) -> BTreeMap<(usize, usize, u64), Vec<usize>> {
    let mut m: BTreeMap<(usize, usize, u64), Vec<usize>> = BTreeMap::new();
    for (k, e) in g.edges.iter().enumerate() {
        let (a, b) = e.ends();
        m.entry((a, b, e.w)).or_default().push(k);
    }
    m
}

impl GraphAutomorphism {
    /// Checks that `vertex` preserves weights and incidence, and builds the edge map.
    pub fn new(g: &Graph, vertex: Perm) -> Result<Self> {
        let n = g.vertex_count();
        let bad = |why: &str| Error::NotAutomorphism(format!("{vertex:?}: {why}"));
        if vertex.len() != n {
            return Err(bad("wrong degree"));
        }
        let mut seen = vec![false; n];
        for &x in &vertex {
            if x as usize >= n || core::mem::replace(&mut seen[x as usize], true) {
                return Err(bad("not a permutation"));
            }
        }
        if (0..n).any(|i| g.vertices[i].w != g.vertices[vertex[i] as usize].w) {
            return Err(bad("vertex weight changed"));
        }
        let classes = edge_classes(g);
        let mut edge = vec![0u32; g.edge_count()];
        for (&(a, b, w), members) in &classes {
            let (x, y) = (vertex[a] as usize, vertex[b] as usize);
            let key = (x.min(y), x.max(y), w);
            match classes.get(&key) {
                Some(img) if img.len() == members.len() => {
                    for (s, t) in members.iter().zip(img) {
                        edge[*s] = *t as u32;
                    }
                }
                _ => return Err(bad("edges not preserved")),
            }
        }
        Ok(GraphAutomorphism { vertex, edge })
    }

    pub fn identity(g: &Graph) -> Self {
        GraphAutomorphism {
            vertex: identity(g.vertex_count()),
            edge: identity(g.edge_count()),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        GraphAutomorphism {
            vertex: compose(&self.vertex, &other.vertex),
            edge: compose(&self.edge, &other.edge),
        }
    }

    pub fn is_identity(&self) -> bool {
        is_identity(&self.vertex)
    }

    pub fn order(&self) -> u64 {
        perm_order(&self.vertex)
    }

    /// Number of moved vertices.
    pub fn support(&self) -> usize {
        self.vertex
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .count()
    }
}

/// Dense pair codes: 0 for no edges, else rank of the sorted edge-weight multiset.
struct Structure {
    n: usize,
    vw: Vec<u64>,
    code: Vec<u32>,
}

impl Structure {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut pairs: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
        for e in &g.edges {
            pairs.entry(e.ends()).or_default().push(e.w);
        }
        for v in pairs.values_mut() {
            v.sort_unstable();
        }
        let distinct: BTreeSet<&Vec<u64>> = pairs.values().collect();
        let rank: BTreeMap<&Vec<u64>, u32> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, i as u32 + 1))
            .collect();
        let mut code = vec![0u32; n * n];
        for ((a, b), ws) in &pairs {
            let c = rank[ws];
            code[a * n + b] = c;
            code[b * n + a] = c;
        }
        Structure {
            n,
            vw: g.vertices.iter().map(|v| v.w).collect(),
            code,
        }
    }

    fn c(&self, a: usize, b: usize) -> u32 {
        self.code[a * self.n + b]
    }

    fn is_automorphism(&self, p: &[u32]) -> bool {
        let n = self.n;
        (0..n).all(|i| self.vw[i] == self.vw[p[i] as usize])
            && (0..n).all(|a| (a..n).all(|b| self.c(a, b) == self.c(p[a] as usize, p[b] as usize)))
    }

    fn initial(&self) -> Vec<u32> {
        let keys: Vec<(u64, u32)> = (0..self.n).map(|v| (self.vw[v], self.c(v, v))).collect();
        rank(&keys)
    }

    /// Equitable refinement; colours are ranks of sorted signatures, so they
    /// are invariant under relabelling.
    fn refine(&self, mut col: Vec<u32>) -> Vec<u32> {
        let mut k = count(&col);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..self.n)
                        .filter(|&u| u != v && self.c(v, u) != 0)
                        .map(|u| (col[u], self.c(v, u)))
                        .collect();
                    nb.sort_unstable();
                    (col[v], nb)
                })
                .collect();
            col = rank(&sigs);
            let k2 = count(&col);
            if k2 == k {
                return col;
            }
            k = k2;
        }
    }

    fn individualize(&self, col: &[u32], x: usize) -> Vec<u32> {
        let keys: Vec<(u32, bool)> = (0..self.n).map(|v| (col[v], v == x)).collect();
        self.refine(rank(&keys))
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let distinct: BTreeSet<&T> = keys.iter().collect();
    let idx: BTreeMap<&T, u32> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u32))
        .collect();
    keys.iter().map(|k| idx[k]).collect()
}

fn count(col: &[u32]) -> usize {
    col.iter().max().map_or(0, |&m| m as usize + 1)
}

fn cell_sizes(col: &[u32]) -> Vec<usize> {
    let mut s = vec![0usize; count(col)];
    for &c in col {
        s[c as usize] += 1;
    }
    s
}

/// First non-singleton cell (by colour) and its smallest vertex.
fn target(col: &[u32]) -> Option<(u32, usize)> {
    let sizes = cell_sizes(col);
    let c = sizes.iter().position(|&s| s > 1)? as u32;
    let x = col.iter().position(|&y| y == c).unwrap();
    Some((c, x))
}

/// Some automorphism σ with b(σ v) = a(v), if one exists.
fn find_iso(s: &Structure, a: &[u32], b: &[u32]) -> Option<Perm> {
    match target(a) {
        None => {
            let mut where_b = vec![0u32; s.n];
            for (v, &c) in b.iter().enumerate() {
                where_b[c as usize] = v as u32;
            }
            let p: Perm = a.iter().map(|&c| where_b[c as usize]).collect();
            s.is_automorphism(&p).then_some(p)
        }
        Some((c, x)) => {
            let a2 = s.individualize(a, x);
            let sizes = cell_sizes(&a2);
            for y in (0..s.n).filter(|&y| b[y] == c) {
                let b2 = s.individualize(b, y);
                if cell_sizes(&b2) != sizes || b2[y] != a2[x] {
                    continue;
                }
                if let Some(p) = find_iso(s, &a2, &b2) {
                    return Some(p);
                }
            }
            None
        }
    }
}

fn orbit(gens: &[Perm], x: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([x]);
    let mut q = VecDeque::from([x]);
    while let Some(y) = q.pop_front() {
        for g in gens {
            let z = g[y] as usize;
            if seen.insert(z) {
                q.push_back(z);
            }
        }
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub generators: Vec<GraphAutomorphism>,
    pub order: BigUint,
    /// base points of the stabilizer chain and the orbit sizes
    pub base: Vec<(usize, usize)>,
}

pub const ENUMERATION_LIMIT: u64 = 10_000;

impl PermGroup {
    pub fn trivial(g: &Graph) -> Self {
        PermGroup {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            generators: Vec::new(),
            order: BigUint::one(),
            base: Vec::new(),
        }
    }

    /// Group generated by the given automorphisms; the order is found by enumeration.
    pub fn generated_by(g: &Graph, gens: Vec<GraphAutomorphism>) -> Result<Self> {
        let mut grp = PermGroup {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            generators: gens,
            order: BigUint::one(),
            base: Vec::new(),
        };
        for a in &grp.generators {
            GraphAutomorphism::new(g, a.vertex.clone())?;
        }
        grp.order = BigUint::from(grp.closure(ENUMERATION_LIMIT)?.len());
        Ok(grp)
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    fn closure(&self, limit: u64) -> Result<Vec<GraphAutomorphism>> {
        let id = GraphAutomorphism {
            vertex: identity(self.vertex_count),
            edge: identity(self.edge_count),
        };
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id.vertex.clone()]);
        let mut out = vec![id.clone()];
        let mut q = VecDeque::from([id]);
        while let Some(x) = q.pop_front() {
            for g in &self.generators {
                let y = x.compose(g);
                if seen.insert(y.vertex.clone()) {
                    if seen.len() as u64 > limit {
                        return Err(Error::OrderOverflow(format!("group order exceeds {limit}")));
                    }
                    out.push(y.clone());
                    q.push_back(y);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// All elements, identity first, then in lexicographic order of vertex images.
    pub fn elements(&self) -> Result<Vec<GraphAutomorphism>> {
        if self.order > BigUint::from(ENUMERATION_LIMIT) {
            return Err(Error::OrderOverflow(format!(
                "group order {} exceeds {}",
                self.order, ENUMERATION_LIMIT
            )));
        }
        self.closure(ENUMERATION_LIMIT)
    }

    pub fn vertex_orbits(&self) -> Vec<BTreeSet<usize>> {
        let gens: Vec<Perm> = self.generators.iter().map(|a| a.vertex.clone()).collect();
        let mut done = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for v in 0..self.vertex_count {
            if !done[v] {
                let o = orbit(&gens, v);
                for &x in &o {
                    done[x] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn edge_orbits(&self) -> Vec<BTreeSet<usize>> {
        let gens: Vec<Perm> = self.generators.iter().map(|a| a.edge.clone()).collect();
        let mut done = vec![false; self.edge_count];
        let mut out = Vec::new();
        for e in 0..self.edge_count {
            if !done[e] {
                let o = orbit(&gens, e);
                for &x in &o {
                    done[x] = true;
                }
                out.push(o);
            }
        }
        out
    }
}

/// Full weighted automorphism group (on vertices).
pub fn automorphism_group(g: &Graph) -> Result<PermGroup> {
    let s = Structure::new(g);
    let mut pi = s.refine(s.initial());
    let mut gens: Vec<Perm> = Vec::new();
    let mut order = BigUint::one();
    let mut base = Vec::new();
    while let Some((c, x)) = target(&pi) {
        let px = s.individualize(&pi, x);
        let sizes = cell_sizes(&px);
        let mut level: Vec<Perm> = Vec::new();
        for y in (0..s.n).filter(|&y| pi[y] == c && y != x) {
            if orbit(&level, x).contains(&y) {
                continue;
            }
            let py = s.individualize(&pi, y);
            if cell_sizes(&py) != sizes || py[y] != px[x] {
                continue;
            }
            if let Some(p) = find_iso(&s, &px, &py) {
                level.push(p);
            }
        }
        let orb = orbit(&level, x).len();
        order *= orb;
        base.push((x, orb));
        gens.extend(level);
        pi = px;
    }
    let generators = gens
        .into_iter()
        .map(|p| GraphAutomorphism::new(g, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PermGroup {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        generators,
        order,
        base,
    })
}
