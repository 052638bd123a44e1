//! Decomposition of a commuting family of Hecke matrices into
//! Q-irreducible constituents (row-vector convention: v ↦ v·T).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};
use rand_core::RngCore;

use super::dataset::{BrandtDataset, HeckeMatrix};
use crate::error::{invalid, Result};
use crate::exactalg::field::seeded_rng;
use crate::exactalg::linalg::{
    charpoly_rat, hnf, kernel, mat_mul, rref, solve_row, transpose, IntMatrix, RatMatrix,
};
use crate::exactalg::poly::{Int, IntPoly, Rat, UniPoly};
use crate::exactalg::zfactor::factor_int_poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub label: String,
    pub dimension: usize,
    /// Z-basis of V ∩ Z^n
    pub basis: IntMatrix,
    pub charpolys: BTreeMap<String, IntPoly>,
    /// irreducible factor of largest degree among the restricted charpolys
    pub field_poly: IntPoly,
    pub multiplicity: u32,
    pub al_sign: Option<i8>,
    /// T restricted to `basis`, integral
    pub restrictions: BTreeMap<String, IntMatrix>,
}

fn to_rat(m: &HeckeMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
        .collect()
}

/// Restriction of `m` to the row space of `basis` (rows in RREF, pivots `piv`).
fn restrict(basis: &RatMatrix, piv: &[usize], m: &RatMatrix) -> RatMatrix {
    mat_mul(basis, m)
        .into_iter()
        .map(|row| piv.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

fn eval_poly(p: &UniPoly, m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    let mut acc: RatMatrix = vec![vec![Rat::zero(); n]; n];
    for c in p.coeffs().iter().rev() {
        acc = mat_mul(&acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

fn mat_pow(m: &RatMatrix, mut e: u32) -> RatMatrix {
    let n = m.len();
    let mut r: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut b = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = mat_mul(&r, &b);
        }
        b = mat_mul(&b, &b);
        e >>= 1;
    }
    r
}

/// Subspace in ambient coordinates, rows in RREF.
#[derive(Clone, Debug)]
struct Space {
    rows: RatMatrix,
    piv: Vec<usize>,
}

impl Space {
    fn from_rows(mut rows: RatMatrix) -> Self {
        let piv = rref(&mut rows);
        rows.truncate(piv.len());
        Space { rows, piv }
    }
    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Split `s` by the primary decomposition of `m` restricted to it.
fn split_by(s: &Space, m: &RatMatrix) -> Vec<Space> {
    let r = restrict(&s.rows, &s.piv, m);
    let cp = charpoly_rat(&r)
        .to_int_poly()
        .expect("monic integral charpoly");
    let (_, factors) = factor_int_poly(&cp);
    if factors.len() <= 1 {
        return vec![s.clone()];
    }
    let d = s.dim();
    factors
        .iter()
        .map(|(f, e)| {
            let fe = mat_pow(&eval_poly(&f.to_rat(), &r), *e);
            // left kernel: c · fe = 0
            let ker = kernel(&transpose(&fe), d);
            Space::from_rows(mat_mul(&ker, &s.rows))
        })
        .collect()
}

/// Z-basis of the saturation (row space of `rows`) ∩ Z^n.
fn saturate(rows: &RatMatrix, n: usize) -> IntMatrix {
    let ann = kernel(rows, n);
    if ann.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
            .collect();
    }
    // integer columns spanning the annihilator
    let cols: Vec<Vec<Int>> = ann
        .iter()
        .map(|v| {
            let d = v
                .iter()
                .fold(Int::one(), |a, x| num_integer::Integer::lcm(&a, x.denom()));
            v.iter()
                .map(|x| (x * Rat::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    let k = cols.len();
    let aug: IntMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<Int> = cols.iter().map(|c| c[i].clone()).collect();
            row.extend((0..n).map(|j| Int::from((i == j) as i64)));
            row
        })
        .collect();
    hnf(&aug)
        .into_iter()
        .filter(|r| r[..k].iter().all(Zero::is_zero))
        .map(|r| r[k..].to_vec())
        .collect()
}

fn restrict_int(basis: &IntMatrix, m: &HeckeMatrix) -> Result<IntMatrix> {
    let b: RatMatrix = basis
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let img = mat_mul(&b, &to_rat(m));
    img.iter()
        .map(|row| {
            let x = solve_row(&b, row).ok_or_else(|| invalid("subspace is not invariant"))?;
            x.into_iter()
                .map(|c| {
                    if c.is_integer() {
                        Ok(c.to_integer())
                    } else {
                        Err(invalid("restriction is not integral"))
                    }
                })
                .collect()
        })
        .collect()
}

fn int_charpoly(m: &IntMatrix) -> IntPoly {
    crate::exactalg::linalg::charpoly_int(m)
}

/// Q-irreducible constituents of the Hecke module. A random integral
/// combination of the matrices (seeded) separates most constituents; each
/// matrix then refines the pieces until every restricted charpoly is a
/// power of one irreducible.
pub fn split_constituents(
    ds: &BrandtDataset,
    seed: u64,
    al_label: Option<&str>,
) -> Result<Vec<Constituent>> {
    let n = ds.dim();
    if ds.matrices.is_empty() {
        return Err(invalid("no Hecke matrices"));
    }
    let mats: Vec<(String, RatMatrix)> = ds
        .matrices
        .iter()
        .map(|(k, m)| (k.clone(), to_rat(m)))
        .collect();
    let mut rng = seeded_rng(seed);
    let mut combo: RatMatrix = vec![vec![Rat::zero(); n]; n];
    for (_, m) in &mats {
        let c = Rat::from_integer(Int::from((rng.next_u64() % 21) as i64 - 10));
        for i in 0..n {
            for j in 0..n {
                combo[i][j] += &c * &m[i][j];
            }
        }
    }
    let full = Space::from_rows(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect(),
    );
    let mut spaces = split_by(&full, &combo);
    loop {
        let before = spaces.len();
        for (_, m) in &mats {
            spaces = spaces.iter().flat_map(|s| split_by(s, m)).collect();
        }
        if spaces.len() == before {
            break;
        }
    }
    let total: usize = spaces.iter().map(Space::dim).sum();
    if total != n {
        return Err(invalid(format!(
            "constituent dimensions sum to {total}, expected {n}"
        )));
    }

    let mut out = Vec::new();
    for s in &spaces {
        let basis = saturate(&s.rows, n);
        let mut restrictions = BTreeMap::new();
        let mut charpolys = BTreeMap::new();
        let mut best: Option<(IntPoly, u32)> = None;
        for (label, m) in &ds.matrices {
            let r = restrict_int(&basis, m)?;
            let cp = int_charpoly(&r);
            let (_, fac) = factor_int_poly(&cp);
            let (f, e) = fac.into_iter().next().unwrap_or((IntPoly::x(), 1));
            if best.as_ref().is_none_or(|(g, _)| f.degree() > g.degree()) {
                best = Some((f, e));
            }
            charpolys.insert(label.clone(), cp);
            restrictions.insert(label.clone(), r);
        }
        let (field_poly, multiplicity) = best.unwrap_or((IntPoly::x(), 1));
        let al_sign = match al_label.and_then(|l| restrictions.get(l)) {
            Some(w) => {
                let d = w.len();
                let scalar = |sgn: i64| {
                    (0..d)
                        .all(|i| (0..d).all(|j| w[i][j] == Int::from(if i == j { sgn } else { 0 })))
                };
                if scalar(1) {
                    Some(1)
                } else if scalar(-1) {
                    Some(-1)
                } else {
                    None
                }
            }
            None => None,
        };
        out.push(Constituent {
            label: String::new(),
            dimension: s.dim(),
            basis,
            charpolys,
            field_poly,
            multiplicity,
            al_sign,
            restrictions,
        });
    }
    out.sort_by(|a, b| {
        a.dimension.cmp(&b.dimension).then_with(|| {
            let key = |c: &Constituent| -> Vec<Vec<Int>> {
                c.charpolys.values().map(|p| p.coeffs().to_vec()).collect()
            };
            key(a).cmp(&key(b))
        })
    });
    for (i, c) in out.iter_mut().enumerate() {
        c.label = format!("c{i}");
    }
    Ok(out)
}

/// Dimensions of the constituents over several seeds; `None` if they disagree.
pub fn stable_dimensions(ds: &BrandtDataset, draws: u64) -> Result<Option<Vec<usize>>> {
    let mut first: Option<Vec<usize>> = None;
    for seed in 0..draws {
        let dims: Vec<usize> = split_constituents(ds, seed, None)?
            .iter()
            .map(|c| c.dimension)
            .collect();
        match &first {
            None => first = Some(dims),
            Some(f) if *f != dims => return Ok(None),
            _ => {}
        }
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn single(m: HeckeMatrix, weights: Vec<u64>) -> BrandtDataset {
        let n = m.len();
        BrandtDataset::new(
            "Q",
            (0..n).map(|i| i.to_string()).collect(),
            weights,
            BTreeMap::from([("t".to_string(), m)]),
            BTreeMap::new(),
            BTreeMap::new(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn two_by_two_swap() {
        // eigenvalues ±1, lines (1,1) and (1,-1)
        let cs = split_constituents(
            &single(vec![vec![0, 1], vec![1, 0]], vec![1, 1]),
            1,
            Some("t"),
        )
        .unwrap();
        assert_eq!(cs.len(), 2);
        let signs: Vec<_> = cs.iter().map(|c| c.al_sign).collect();
        assert!(signs.contains(&Some(1)) && signs.contains(&Some(-1)));
        assert!(cs.iter().all(|c| c.dimension == 1));
    }

    #[test]
    fn irreducible_quadratic_piece() {
        // block diag(companion of x^2-2, [3])
        let m = vec![vec![0, 1, 0], vec![2, 0, 0], vec![0, 0, 3]];
        let cs = split_constituents(&single(m, vec![1, 2, 1]), 7, None).unwrap();
        assert_eq!(
            cs.iter().map(|c| c.dimension).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert_eq!(cs[1].field_poly, IntPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(cs[0].charpolys["t"], IntPoly::from_i64s(&[-3, 1]));
    }

    #[test]
    fn saturation_recovers_primitive_lattice() {
        let rows: RatMatrix = vec![vec![
            Rat::from_integer(2.into()),
            Rat::from_integer(4.into()),
        ]];
        let b = saturate(&rows, 2);
        assert_eq!(b, vec![vec![Int::from(1), Int::from(2)]]);
    }

    #[test]
    fn dimensions_stable() {
        let m = vec![vec![0, 1, 0], vec![2, 0, 0], vec![0, 0, 3]];
        assert_eq!(
            stable_dimensions(&single(m, vec![1, 2, 1]), 5).unwrap(),
            Some(vec![1, 2])
        );
    }
}
