//! Structure of small permutation groups by full enumeration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::aut::{compose, inverse, is_identity, perm_order, Perm, PermGroup};
use crate::error::{Error, Result};

/// Enumerated group with a multiplication oracle on element indices.
pub struct FiniteGroup {
    pub elements: Vec<Perm>,
    index: BTreeMap<Perm, usize>,
}

const SUBGROUP_LIMIT: usize = 200_000;

impl FiniteGroup {
    pub fn from_group(g: &PermGroup) -> Result<Self> {
        let elements: Vec<Perm> = g.elements()?.into_iter().map(|a| a.vertex).collect();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(FiniteGroup { elements, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn identity(&self) -> usize {
        self.elements.iter().position(|p| is_identity(p)).unwrap()
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.index[&inverse(&self.elements[a])]
    }
    pub fn elem_order(&self, a: usize) -> u64 {
        perm_order(&self.elements[a])
    }
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
    pub fn involutions(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&a| self.elem_order(a) == 2)
            .collect()
    }

    /// Cyclic subgroup generated by a, as a sorted index set.
    pub fn cyclic(&self, a: usize) -> Vec<usize> {
        let e = self.identity();
        let mut out = alloc::vec![e];
        let mut x = a;
        while x != e {
            out.push(x);
            x = self.mul(x, a);
        }
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        (0..self.order()).all(|g| {
            let gi = self.inv(g);
            h.iter()
                .all(|&x| set.contains(&self.mul(self.mul(gi, x), g)))
        })
    }

    /// All elementary abelian 2-subgroups (including the trivial one) whose
    /// involutions satisfy `keep`.
    pub fn elementary_abelian_2_subgroups(
        &self,
        keep: impl Fn(usize) -> bool,
    ) -> Result<Vec<Vec<usize>>> {
        let e = self.identity();
        let invs: Vec<usize> = self
            .involutions()
            .into_iter()
            .filter(|&t| keep(t))
            .collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([alloc::vec![e]]);
        let mut frontier: Vec<Vec<usize>> = alloc::vec![alloc::vec![e]];
        while let Some(h) = frontier.pop() {
            for &t in &invs {
                if h.contains(&t) || !h.iter().all(|&x| self.commute(x, t)) {
                    continue;
                }
                let mut h2: Vec<usize> = h.iter().flat_map(|&x| [x, self.mul(x, t)]).collect();
                h2.sort_unstable();
                h2.dedup();
                if !h2.iter().all(|&x| x == e || keep(x)) {
                    continue;
                }
                if found.insert(h2.clone()) {
                    if found.len() > SUBGROUP_LIMIT {
                        return Err(Error::OrderOverflow(
                            "too many elementary abelian subgroups".into(),
                        ));
                    }
                    frontier.push(h2);
                }
            }
        }
        Ok(found.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupReport {
    pub order: usize,
    pub involutions: usize,
    /// element order -> count
    pub element_orders: BTreeMap<u64, usize>,
    pub abelian: bool,
    /// largest rank r of a normal subgroup isomorphic to (Z/2)^r
    pub normal_ea_rank: u32,
    /// number of normal (Z/2)^r subgroups of that rank
    pub normal_ea_count: usize,
    /// cyclic subgroups of order |G| / 2^r meeting the normal subgroup trivially
    /// (only when that subgroup is unique)
    pub cyclic_complements: usize,
    pub complement_centralizes: Option<bool>,
    pub description: String,
}

pub fn group_structure(g: &PermGroup) -> Result<GroupReport> {
    let fg = FiniteGroup::from_group(g)?;
    let n = fg.order();
    let mut element_orders = BTreeMap::new();
    for a in 0..n {
        *element_orders.entry(fg.elem_order(a)).or_insert(0) += 1;
    }
    let involutions = element_orders.get(&2).copied().unwrap_or(0);
    let abelian = g.generators.iter().enumerate().all(|(i, a)| {
        g.generators[i + 1..]
            .iter()
            .all(|b| compose(&a.vertex, &b.vertex) == compose(&b.vertex, &a.vertex))
    });
    let normal: Vec<Vec<usize>> = fg
        .elementary_abelian_2_subgroups(|_| true)?
        .into_iter()
        .filter(|h| fg.is_normal(h))
        .collect();
    let top = normal.iter().map(Vec::len).max().unwrap_or(1);
    let best: Vec<&Vec<usize>> = normal.iter().filter(|h| h.len() == top).collect();
    let rank = top.trailing_zeros();
    let mut cyclic_complements = 0;
    let mut complement_centralizes = None;
    let mut description = format!("order {n}");
    if n == 1 {
        description = String::from("trivial");
    } else if best.len() == 1 && top > 1 {
        let nsub: BTreeSet<usize> = best[0].iter().copied().collect();
        let k = n / top;
        let e = fg.identity();
        let mut comps: BTreeSet<Vec<usize>> = BTreeSet::new();
        for a in 0..n {
            if fg.elem_order(a) == k as u64 {
                let c = fg.cyclic(a);
                if c.iter().all(|x| *x == e || !nsub.contains(x)) {
                    comps.insert(c);
                }
            }
        }
        cyclic_complements = comps.len();
        let ea = if rank == 1 {
            String::from("Z/2")
        } else {
            format!("(Z/2)^{rank}")
        };
        if let Some(c) = comps.iter().next() {
            let central = c.iter().all(|&x| nsub.iter().all(|&y| fg.commute(x, y)));
            complement_centralizes = Some(central);
            description = if k == 1 {
                ea
            } else if central {
                format!("Z/{k} x {ea}")
            } else {
                format!("Z/{k} ⋉ {ea}")
            };
        }
    } else if abelian && n.is_power_of_two() && involutions + 1 == n {
        description = format!("(Z/2)^{}", n.trailing_zeros());
    }
    Ok(GroupReport {
        order: n,
        involutions,
        element_orders,
        abelian,
        normal_ea_rank: rank,
        normal_ea_count: best.len(),
        cyclic_complements,
        complement_centralizes,
        description,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{automorphism_group, Graph};

    #[test]
    fn dihedral_eight() {
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let r = group_structure(&automorphism_group(&g).unwrap()).unwrap();
        assert_eq!((r.order, r.involutions), (8, 5));
        assert_eq!((r.normal_ea_rank, r.normal_ea_count), (2, 2));
    }

    #[test]
    fn klein_four() {
        // 4-cycle with alternating weights
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]).unwrap();
        let r = group_structure(&automorphism_group(&g).unwrap()).unwrap();
        assert_eq!(
            (r.order, r.involutions, r.normal_ea_rank, r.normal_ea_count),
            (4, 3, 2, 1)
        );
        assert_eq!(r.description, "(Z/2)^2");
    }

    #[test]
    fn elementary_abelian_of_rank_three() {
        // Klein four on the square times the swap of a separate edge
        let g =
            Graph::from_edges(6, &[(0, 1, 2), (1, 2, 3), (2, 3, 2), (3, 0, 3), (4, 5, 7)]).unwrap();
        let r = group_structure(&automorphism_group(&g).unwrap()).unwrap();
        assert_eq!(r.order, 8);
        assert_eq!(r.involutions, 7);
        assert_eq!(r.description, "(Z/2)^3");
    }
}
