//! Index of the ring generated by Hecke eigenvalues inside a maximal order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactalg::linalg::{hnf, inverse, IntMatrix, RatMatrix};
use crate::exactalg::poly::{Int, IntPoly, Rat, UniPoly};

pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCertificate {
    pub degree: usize,
    pub labels: Vec<String>,
    /// rank of the ring generated by the supplied eigenvalues
    pub rank: usize,
    /// [O : Z[a_q]] when the generated ring has full rank
    pub index: Option<Int>,
}

impl IndexCertificate {
    /// The full Hecke ring contains the generated one, so its index divides
    /// `index`; it is exact when that is 1.
    pub fn is_exact(&self) -> bool {
        self.index.as_ref().is_some_and(One::is_one)
    }
}

fn mul_mod(a: &[Rat], b: &[Rat], f: &UniPoly) -> Vec<Rat> {
    let n = f.degree().unwrap_or(0);
    let p = &UniPoly::new(a.to_vec()) * &UniPoly::new(b.to_vec());
    let r = p.rem(f);
    (0..n).map(|i| r.coeff(i)).collect()
}

/// `field_poly` monic of degree n ≤ 8; `order_basis` n rows of power-basis
/// coordinates; `eigenvalues` power-basis coordinates per label.
pub fn order_index_divisor(
    field_poly: &IntPoly,
    order_basis: &RatMatrix,
    eigenvalues: &BTreeMap<String, Vec<Rat>>,
) -> Result<IndexCertificate> {
    let n = field_poly.degree().unwrap_or(0);
    if n > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "coefficient field of degree {n} > {MAX_DEGREE}"
        )));
    }
    if n == 0 || !field_poly.is_monic() {
        return Err(invalid("field polynomial must be monic of positive degree"));
    }
    if order_basis.len() != n || order_basis.iter().any(|r| r.len() != n) {
        return Err(invalid(format!("order basis must be {n} x {n}")));
    }
    let inv = inverse(order_basis).ok_or_else(|| invalid("order basis is singular"))?;
    let f = field_poly.to_rat();
    let to_order = |x: &[Rat]| -> Result<Vec<Int>> {
        (0..n)
            .map(|j| {
                let c: Rat = (0..n).map(|i| &x[i] * &inv[i][j]).sum();
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(invalid("element is not in the supplied order"))
                }
            })
            .collect()
    };
    let from_order = |c: &[Int]| -> Vec<Rat> {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| Rat::from_integer(c[i].clone()) * &order_basis[i][j])
                    .sum()
            })
            .collect()
    };
    let mut gens = Vec::new();
    for (label, v) in eigenvalues {
        if v.len() != n {
            return Err(invalid(format!(
                "eigenvalue {label} has {} coordinates, expected {n}",
                v.len()
            )));
        }
        to_order(v)?;
        gens.push(v.clone());
    }
    let mut one = alloc::vec![Rat::zero(); n];
    one[0] = Rat::one();
    let mut lattice: IntMatrix = hnf(&alloc::vec![to_order(&one)?]);
    loop {
        let mut rows = lattice.clone();
        for row in &lattice {
            let x = from_order(row);
            for g in &gens {
                rows.push(to_order(&mul_mod(&x, g, &f))?);
            }
        }
        let next = hnf(&rows);
        if next == lattice {
            break;
        }
        lattice = next;
    }
    let rank = lattice.len();
    let index = (rank == n).then(|| {
        // square upper-triangular HNF: the index is the product of pivots
        (0..n).map(|i| lattice[i][i].clone()).product()
    });
    Ok(IndexCertificate {
        degree: n,
        labels: eigenvalues.keys().cloned().collect(),
        rank,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;
    use alloc::string::ToString;
    use alloc::vec;

    fn sqrt2(a: Vec<Rat>) -> IndexCertificate {
        let f = IntPoly::from_i64s(&[-2, 0, 1]);
        let basis = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        order_index_divisor(&f, &basis, &[("2".to_string(), a)].into()).unwrap()
    }

    #[test]
    fn sqrt2_indices() {
        let c = sqrt2(vec![rat(0), rat(1)]);
        assert_eq!(c.index, Some(Int::one()));
        assert!(c.is_exact());
        let c = sqrt2(vec![rat(3), rat(2)]);
        assert_eq!(c.index, Some(Int::from(2)));
        assert!(!c.is_exact());
        assert_eq!(sqrt2(vec![rat(5), rat(0)]).rank, 1);
    }

    #[test]
    fn golden_ratio_order() {
        // O = Z[(1+√5)/2] on the power basis of x^2 - 5; √5 generates index 2
        let f = IntPoly::from_i64s(&[-5, 0, 1]);
        let basis = vec![
            vec![rat(1), rat(0)],
            vec![
                crate::exactalg::poly::rat_frac(1, 2),
                crate::exactalg::poly::rat_frac(1, 2),
            ],
        ];
        let c = order_index_divisor(
            &f,
            &basis,
            &[("q".to_string(), vec![rat(0), rat(1)])].into(),
        )
        .unwrap();
        assert_eq!(c.index, Some(Int::from(2)));
    }

    #[test]
    fn rejects_large_degree() {
        let mut coeffs = vec![0i64; 10];
        coeffs[9] = 1;
        coeffs[0] = -2;
        let f = IntPoly::from_i64s(&coeffs);
        assert!(matches!(
            order_index_divisor(&f, &vec![], &BTreeMap::new()),
            Err(Error::Unsupported(_))
        ));
    }
}
