//! Congruences between eigenvalue tables modulo ℓ, and the connectivity of
//! the congruence graph on constituents.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::exactalg::field::{FiniteField, FqElem, GaloisField, PolyOps, PrimeField};
use crate::exactalg::poly::IntPoly;

/// Per prime-label: the charpoly over Q of the eigenvalue.
pub type EigenTable = BTreeMap<String, IntPoly>;

/// Root fields larger than F_{ℓ^24} are not searched.
pub const MAX_ROOT_DEGREE: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceVerdict {
    /// common roots exist at every label; witness is the least one per label
    Congruent {
        witness: BTreeMap<String, FqElem>,
    },
    /// the reductions share no root at this label
    NotCongruent {
        label: String,
    },
    Inconclusive {
        degree_needed: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceResult {
    pub ell: u64,
    /// degree m of the field F_{ℓ^m} the roots were sought in
    pub degree: usize,
    pub modulus: Vec<u64>,
    pub verdict: CongruenceVerdict,
}

impl CongruenceResult {
    pub fn is_congruent(&self) -> bool {
        matches!(self.verdict, CongruenceVerdict::Congruent { .. })
    }
}

fn reduce_monic(p: &IntPoly, ell: u64, label: &str) -> Result<Vec<u64>> {
    if !p.is_monic() {
        return Err(invalid(format!("charpoly at {label} is not monic")));
    }
    Ok(p.reduce_mod(ell))
}

/// Decide whether the eigensystems described by `a` and `b` agree modulo a
/// prime above ℓ at every supplied label. The shared roots at each label are
/// the roots of gcd(A_q mod ℓ, B_q mod ℓ); a constant gcd anywhere settles
/// the question negatively.
pub fn congruence_detect(a: &EigenTable, b: &EigenTable, ell: u64) -> Result<CongruenceResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTable);
    }
    if a.keys().ne(b.keys()) {
        return Err(invalid("eigenvalue tables have different prime labels"));
    }
    if !crate::exactalg::arith::is_prime_u64(ell) {
        return Err(invalid(format!("{ell} is not prime")));
    }
    let fp = PrimeField::new(ell);
    let mut gcds = BTreeMap::new();
    let mut degree = 1usize;
    for (label, pa) in a {
        let ra = reduce_monic(pa, ell, label)?;
        let rb = reduce_monic(&b[label], ell, label)?;
        let g = fp.p_gcd(&ra, &rb);
        if g.len() <= 1 {
            return Ok(CongruenceResult {
                ell,
                degree: 1,
                modulus: alloc::vec![0, 1],
                verdict: CongruenceVerdict::NotCongruent {
                    label: label.clone(),
                },
            });
        }
        for (f, _) in fp.factor(&g) {
            degree = degree.lcm(&(f.len() - 1));
        }
        gcds.insert(label.clone(), g);
    }
    if degree > MAX_ROOT_DEGREE {
        return Ok(CongruenceResult {
            ell,
            degree,
            modulus: Vec::new(),
            verdict: CongruenceVerdict::Inconclusive {
                degree_needed: degree,
            },
        });
    }
    let gf = GaloisField::new(ell, degree)?;
    let mut witness = BTreeMap::new();
    for (label, g) in gcds {
        let lifted: Vec<FqElem> = g.iter().map(|&c| gf.from_u64(c)).collect();
        let roots = gf.roots(&lifted);
        let r = roots
            .into_iter()
            .next()
            .ok_or_else(|| invalid(format!("no root found at {label}")))?;
        witness.insert(label, r);
    }
    Ok(CongruenceResult {
        ell,
        degree,
        modulus: gf.modulus().to_vec(),
        verdict: CongruenceVerdict::Congruent { witness },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CongruenceEdge {
    pub a: String,
    pub b: String,
    pub ell: u64,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CongruenceGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<CongruenceEdge>,
}

impl CongruenceGraph {
    pub fn new(nodes: Vec<String>) -> Self {
        CongruenceGraph {
            nodes,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(
        &mut self,
        a: &str,
        b: &str,
        ell: u64,
        witness: impl Into<String>,
    ) -> Result<()> {
        for x in [a, b] {
            if !self.nodes.iter().any(|n| n == x) {
                return Err(invalid(format!("unknown node {x}")));
            }
        }
        self.edges.push(CongruenceEdge {
            a: a.into(),
            b: b.into(),
            ell,
            witness: witness.into(),
        });
        Ok(())
    }

    /// Join every pair in `clique` by an ℓ-edge.
    pub fn add_clique(&mut self, clique: &[&str], ell: u64, witness: &str) -> Result<()> {
        for (i, a) in clique.iter().enumerate() {
            for b in &clique[i + 1..] {
                self.add_edge(a, b, ell, witness)?;
            }
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components, each sorted, listed by least member.
pub fn connectivity(cg: &CongruenceGraph) -> Vec<Vec<String>> {
    let index: BTreeMap<&str, usize> = cg
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut parent: Vec<usize> = (0..cg.nodes.len()).collect();
    for e in &cg.edges {
        if let (Some(&x), Some(&y)) = (index.get(e.a.as_str()), index.get(e.b.as_str())) {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx] = ry;
            }
        }
    }
    let mut comps: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (i, n) in cg.nodes.iter().enumerate() {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().insert(n.clone());
    }
    let mut out: Vec<Vec<String>> = comps
        .into_values()
        .map(|s| s.into_iter().collect())
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn linear(vals: &[(u64, i64)], shift: i64) -> EigenTable {
        vals.iter()
            .map(|&(q, a)| (q.to_string(), IntPoly::from_i64s(&[-(a + shift), 1])))
            .collect()
    }

    #[test]
    fn shifted_tables() {
        let t = [(2, -1), (3, 2), (5, 1), (7, -2)];
        let a = linear(&t, 0);
        let b = linear(&t, 5);
        assert!(congruence_detect(&a, &a, 5).unwrap().is_congruent());
        assert!(congruence_detect(&a, &b, 5).unwrap().is_congruent());
        assert!(!congruence_detect(&a, &b, 3).unwrap().is_congruent());
        assert_eq!(
            congruence_detect(&a, &b, 3).unwrap(),
            congruence_detect(&b, &a, 3).unwrap()
        );
    }

    #[test]
    fn quadratic_witness_lives_in_extension() {
        // x^2 + 1 at label 2 in both tables, irreducible mod 3
        let a: EigenTable = [("2".to_string(), IntPoly::from_i64s(&[1, 0, 1]))].into();
        let b: EigenTable = [("2".to_string(), IntPoly::from_i64s(&[4, 3, 1]))].into();
        // x^2+3x+4 ≡ x^2+1 mod 3
        let r = congruence_detect(&a, &b, 3).unwrap();
        assert_eq!(r.degree, 2);
        assert!(r.is_congruent());
    }

    #[test]
    fn empty_and_mismatched_tables() {
        assert_eq!(
            congruence_detect(&EigenTable::new(), &EigenTable::new(), 5).unwrap_err(),
            Error::EmptyTable
        );
        let a = linear(&[(2, 1)], 0);
        let b = linear(&[(3, 1)], 0);
        assert!(congruence_detect(&a, &b, 5).is_err());
    }

    fn five() -> CongruenceGraph {
        CongruenceGraph::new(
            ["f", "f'", "g", "g'", "h"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }

    #[test]
    fn components() {
        let g = five();
        assert_eq!(connectivity(&g).len(), 5);
        let mut g = five();
        g.add_clique(&["f", "f'", "g", "g'"], 5, "mod 5").unwrap();
        assert_eq!(connectivity(&g).len(), 2);
        g.add_clique(&["f", "f'", "h"], 3, "mod 3").unwrap();
        assert_eq!(connectivity(&g), vec![vec!["f", "f'", "g", "g'", "h"]]);
        let mut g = five();
        g.add_clique(&["f", "g", "h"], 2, "θ").unwrap();
        g.add_clique(&["f'", "g'", "h"], 2, "θ′").unwrap();
        assert_eq!(connectivity(&g).len(), 1);
        assert!(g.add_edge("f", "x", 2, "").is_err());
    }
}
