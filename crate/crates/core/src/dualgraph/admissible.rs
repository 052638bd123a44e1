//! Admissible automorphisms: no fixed vertex with three or more fixed star edges.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::aut::{GraphAutomorphism, PermGroup};
use super::graph::Graph;
use super::structure::FiniteGroup;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    /// the identity; the definition concerns non-trivial elements
    NotApplicable,
    Admissible,
    NotAdmissible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementReport {
    pub vertex_perm: Vec<u32>,
    pub order: u64,
    pub admissibility: Admissibility,
    /// number of moved vertices
    pub support: usize,
    pub fixed_vertices: Vec<usize>,
    /// (fixed vertex, number of its star edges fixed)
    pub fixed_star_edges: Vec<(usize, usize)>,
}

pub fn element_admissibility(g: &Graph, a: &GraphAutomorphism) -> ElementReport {
    let fixed_vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| a.vertex[v] as usize == v)
        .collect();
    let fixed_star_edges: Vec<(usize, usize)> = fixed_vertices
        .iter()
        .map(|&v| {
            (
                v,
                g.star(v)
                    .into_iter()
                    .filter(|&e| a.edge[e] as usize == e)
                    .count(),
            )
        })
        .collect();
    let admissibility = if a.is_identity() {
        Admissibility::NotApplicable
    } else if fixed_star_edges.iter().any(|&(_, c)| c >= 3) {
        Admissibility::NotAdmissible
    } else {
        Admissibility::Admissible
    };
    ElementReport {
        vertex_perm: a.vertex.clone(),
        order: a.order(),
        admissibility,
        support: a.support(),
        fixed_vertices,
        fixed_star_edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleReport {
    /// non-trivial elements, in enumeration order
    pub elements: Vec<ElementReport>,
    pub admissible_count: usize,
    pub involutions: usize,
    /// indices into `elements` of admissible involutions
    pub admissible_involutions: Vec<usize>,
    /// (i, j, product admissible) for pairs of admissible involutions
    pub pair_products: Vec<(usize, usize, bool)>,
    /// largest exponent-2 subgroup all of whose non-trivial elements are admissible
    pub max_admissible_exponent2_order: usize,
}

pub fn admissible_analysis(g: &Graph, group: &PermGroup) -> Result<AdmissibleReport> {
    let all = group.elements()?;
    let fg = FiniteGroup::from_group(group)?;
    let reports: Vec<ElementReport> = all.iter().map(|a| element_admissibility(g, a)).collect();
    let ok: Vec<bool> = reports
        .iter()
        .map(|r| r.admissibility == Admissibility::Admissible)
        .collect();
    // `all` and `fg.elements` share the same order
    debug_assert!(all.iter().zip(&fg.elements).all(|(a, p)| &a.vertex == p));
    let nontrivial: Vec<usize> = (0..all.len()).filter(|&i| !all[i].is_identity()).collect();
    let pos = |i: usize| nontrivial.iter().position(|&x| x == i).unwrap();
    let inv: Vec<usize> = nontrivial
        .iter()
        .copied()
        .filter(|&i| all[i].order() == 2)
        .collect();
    let adm_inv: Vec<usize> = inv.iter().copied().filter(|&i| ok[i]).collect();
    let mut pair_products = Vec::new();
    for (x, &i) in adm_inv.iter().enumerate() {
        for &j in &adm_inv[x + 1..] {
            let k = fg.mul(i, j);
            pair_products.push((pos(i), pos(j), ok[k]));
        }
    }
    let subgroups = fg.elementary_abelian_2_subgroups(|t| ok[t])?;
    let max_admissible_exponent2_order = subgroups.iter().map(Vec::len).max().unwrap_or(1);
    let adm: BTreeSet<usize> = nontrivial.iter().copied().filter(|&i| ok[i]).collect();
    Ok(AdmissibleReport {
        elements: nontrivial.iter().map(|&i| reports[i].clone()).collect(),
        admissible_count: adm.len(),
        involutions: inv.len(),
        admissible_involutions: adm_inv.iter().map(|&i| pos(i)).collect(),
        pair_products,
        max_admissible_exponent2_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::automorphism_group;

    #[test]
    fn star_examples() {
        let star = Graph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let swap = GraphAutomorphism::new(&star, alloc::vec![0, 2, 1, 3]).unwrap();
        let r = element_admissibility(&star, &swap);
        assert_eq!(r.admissibility, Admissibility::Admissible);
        assert_eq!(r.fixed_star_edges[0], (0, 1));
        assert_eq!(r.support, 2);
        // swapping two leaves of a 5-star fixes the center and three of its edges
        let five =
            Graph::from_edges(6, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1), (0, 5, 1)]).unwrap();
        let sw = GraphAutomorphism::new(&five, alloc::vec![0, 2, 1, 3, 4, 5]).unwrap();
        assert_eq!(
            element_admissibility(&five, &sw).admissibility,
            Admissibility::NotAdmissible
        );
        let id = GraphAutomorphism::identity(&five);
        assert_eq!(
            element_admissibility(&five, &id).admissibility,
            Admissibility::NotApplicable
        );
    }

    #[test]
    fn square_group() {
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let r = admissible_analysis(&g, &automorphism_group(&g).unwrap()).unwrap();
        assert_eq!(r.elements.len(), 7);
        assert_eq!(r.involutions, 5);
        // no vertex of a 4-cycle has 3 star edges
        assert_eq!(r.admissible_count, 7);
        assert_eq!(r.max_admissible_exponent2_order, 4);
    }
}
