//! Simultaneous generalized eigenspaces of Hecke matrices over F_{ℓ^k},
//! Frobenius orbits of the resulting eigensystems.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::constituents::Constituent;
use super::dataset::BrandtDataset;
use crate::error::{invalid, Result};
use crate::exactalg::field::{FiniteField, FqElem, GaloisField, PolyOps, PrimeField};
use crate::exactalg::linalg::{kernel_ff, IntMatrix};

type FMat = Vec<Vec<FqElem>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigensystem {
    /// eigenvalue per matrix label
    pub values: BTreeMap<String, FqElem>,
    /// dimension of the simultaneous generalized eigenspace
    pub generalized_dim: usize,
    /// dimension of the common eigenvectors (socle)
    pub eigen_dim: usize,
}

impl Eigensystem {
    pub fn semisimple(&self) -> bool {
        self.generalized_dim == self.eigen_dim
    }
    fn key(&self) -> Vec<FqElem> {
        self.values.values().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    pub label: String,
    /// indices into `ModEllReport::systems`
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModEllReport {
    pub ell: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
    pub systems: Vec<Eigensystem>,
    pub orbits: Vec<FrobeniusOrbit>,
    /// set when some eigenvalue lies outside F_{ℓ^k}: the degree that suffices
    pub needs_degree: Option<usize>,
}

impl ModEllReport {
    pub fn non_semisimple(&self) -> bool {
        self.systems.iter().any(|s| !s.semisimple())
    }
    pub fn orbit_of(&self, system: usize) -> Option<&FrobeniusOrbit> {
        self.orbits.iter().find(|o| o.members.contains(&system))
    }
}

/// θ, θ′, θ″, then θ_3, θ_4, ...
pub fn theta_label(i: usize) -> String {
    match i {
        0 => "θ".into(),
        1 => "θ′".into(),
        2 => "θ″".into(),
        _ => format!("θ_{i}"),
    }
}

fn reduce(m: &IntMatrix, gf: &GaloisField) -> FMat {
    let l = BigInt::from(gf.characteristic());
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| gf.from_u64(x.mod_floor(&l).to_u64().unwrap()))
                .collect()
        })
        .collect()
}

fn fmul(gf: &GaloisField, a: &FMat, b: &FMat) -> FMat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut c = vec![vec![gf.zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if gf.is_zero(aik) {
                continue;
            }
            for j in 0..m {
                c[i][j] = gf.add(&c[i][j], &gf.mul(aik, &b[k][j]));
            }
        }
    }
    c
}

fn fpow(gf: &GaloisField, m: &FMat, mut e: usize) -> FMat {
    let n = m.len();
    let mut r: FMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { gf.one() } else { gf.zero() })
                .collect()
        })
        .collect();
    let mut b = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = fmul(gf, &r, &b);
        }
        b = fmul(gf, &b, &b);
        e >>= 1;
    }
    r
}

fn transpose(m: &FMat) -> FMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

fn shift(gf: &GaloisField, m: &FMat, lambda: &FqElem) -> FMat {
    let mut a = m.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = gf.sub(&row[i], lambda);
    }
    a
}

/// RREF of a row basis over the field; returns (rows, pivots).
fn rref_rows(gf: &GaloisField, mut a: FMat) -> (FMat, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !gf.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = gf.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = gf.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !gf.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = gf.mul(&f, &a[r][j]);
                    a[i][j] = gf.sub(&a[i][j], &t);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, piv)
}

fn restrict(gf: &GaloisField, basis: &FMat, piv: &[usize], m: &FMat) -> FMat {
    fmul(gf, basis, m)
        .into_iter()
        .map(|row| piv.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

/// Left kernel {c : c·m = 0} of a square or wide matrix.
fn left_kernel(gf: &GaloisField, m: &FMat, rows: usize) -> FMat {
    kernel_ff(gf, &transpose(m), rows)
}

/// Degree over F_ℓ of the splitting field of all charpolys.
fn splitting_degree(ell: u64, mats: &BTreeMap<String, IntMatrix>) -> usize {
    let fp = PrimeField::new(ell);
    let mut m = 1usize;
    for t in mats.values() {
        let cp = crate::exactalg::linalg::charpoly_int(t).reduce_mod(ell);
        for (g, _) in fp.factor(&cp) {
            m = m.lcm(&(g.len() - 1));
        }
    }
    m
}

/// Eigensystems of a commuting family of integer matrices over F_{ℓ^k}.
pub fn eigensystems(
    mats: &BTreeMap<String, IntMatrix>,
    ell: u64,
    k: usize,
) -> Result<ModEllReport> {
    let gf = GaloisField::new(ell, k)?;
    let n = mats.values().next().map_or(0, Vec::len);
    let need = splitting_degree(ell, mats);
    let mut report = ModEllReport {
        ell,
        k,
        modulus: gf.modulus().to_vec(),
        systems: Vec::new(),
        orbits: Vec::new(),
        needs_degree: None,
    };
    if !k.is_multiple_of(need) {
        report.needs_degree = Some(need.lcm(&k));
        return Ok(report);
    }
    let reduced: Vec<(String, FMat)> = mats
        .iter()
        .map(|(l, m)| (l.clone(), reduce(m, &gf)))
        .collect();
    let ident: FMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { gf.one() } else { gf.zero() })
                .collect()
        })
        .collect();
    // (basis rows, pivots, eigenvalues so far)
    let mut spaces: Vec<(FMat, Vec<usize>, BTreeMap<String, FqElem>)> =
        vec![(ident, (0..n).collect(), BTreeMap::new())];
    for (label, m) in &reduced {
        let mut next = Vec::new();
        for (basis, piv, vals) in spaces {
            let d = basis.len();
            let r = restrict(&gf, &basis, &piv, m);
            let cp: Vec<u64> = crate::exactalg::linalg::charpoly_int(&mats[label]).reduce_mod(ell);
            let lifted: Vec<FqElem> = cp.iter().map(|&c| gf.from_u64(c)).collect();
            let mut found = 0;
            for lambda in gf.roots(&lifted) {
                let ker = left_kernel(&gf, &fpow(&gf, &shift(&gf, &r, &lambda), d), d);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let (b, p) = rref_rows(&gf, fmul(&gf, &ker, &basis));
                let mut v = vals.clone();
                v.insert(label.clone(), lambda);
                next.push((b, p, v));
            }
            if found != d {
                return Err(invalid(format!(
                    "generalized eigenspaces of {label} do not fill the space"
                )));
            }
        }
        spaces = next;
    }
    for (basis, piv, values) in spaces {
        let d = basis.len();
        // common kernel of all (R_q - λ_q), stacked side by side
        let mut stacked: FMat = vec![Vec::new(); d];
        for (label, m) in &reduced {
            let r = shift(&gf, &restrict(&gf, &basis, &piv, m), &values[label]);
            for (i, row) in r.into_iter().enumerate() {
                stacked[i].extend(row);
            }
        }
        let eigen_dim = left_kernel(&gf, &stacked, d).len();
        report.systems.push(Eigensystem {
            values,
            generalized_dim: d,
            eigen_dim,
        });
    }
    report.systems.sort_by_key(Eigensystem::key);
    report.orbits = frobenius_orbits(&gf, &report.systems);
    Ok(report)
}

fn frobenius_orbits(gf: &GaloisField, systems: &[Eigensystem]) -> Vec<FrobeniusOrbit> {
    let mut seen = vec![false; systems.len()];
    let mut orbits = Vec::new();
    // systems are sorted, so each orbit is met first at its least member
    for start in 0..systems.len() {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut cur = systems[start].key();
        loop {
            let Some(i) = systems.iter().position(|s| s.key() == cur) else {
                break;
            };
            if seen[i] {
                break;
            }
            seen[i] = true;
            members.push(i);
            cur = cur.iter().map(|x| gf.frobenius(x)).collect();
        }
        members.sort_unstable();
        orbits.push(FrobeniusOrbit {
            label: theta_label(orbits.len()),
            members,
        });
    }
    orbits
}

fn dataset_mats(ds: &BrandtDataset) -> BTreeMap<String, IntMatrix> {
    ds.matrices
        .iter()
        .map(|(l, m)| {
            (
                l.clone(),
                m.iter()
                    .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                    .collect(),
            )
        })
        .collect()
}

pub fn mod_ell_eigensystems(ds: &BrandtDataset, ell: u64, k: usize) -> Result<ModEllReport> {
    eigensystems(&dataset_mats(ds), ell, k)
}

/// Eigensystems of one constituent (its integral restrictions reduced mod ℓ).
pub fn constituent_eigensystems(c: &Constituent, ell: u64, k: usize) -> Result<ModEllReport> {
    eigensystems(&c.restrictions, ell, k)
}

/// For each global orbit, the constituents contributing one of its systems.
pub fn orbit_hits(
    global: &ModEllReport,
    per: &[(String, ModEllReport)],
) -> Vec<(String, Vec<String>)> {
    global
        .orbits
        .iter()
        .map(|o| {
            let keys: Vec<Vec<FqElem>> =
                o.members.iter().map(|&i| global.systems[i].key()).collect();
            let hits = per
                .iter()
                .filter(|(_, r)| r.systems.iter().any(|s| keys.contains(&s.key())))
                .map(|(l, _)| l.clone())
                .collect();
            (o.label.clone(), hits)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn jordan_block_is_not_semisimple() {
        let mats = BTreeMap::from([("t".into(), im(&[&[1, 1], &[0, 1]]))]);
        let r = eigensystems(&mats, 5, 1).unwrap();
        assert_eq!(r.systems.len(), 1);
        assert_eq!(r.systems[0].generalized_dim, 2);
        assert_eq!(r.systems[0].eigen_dim, 1);
        assert!(r.non_semisimple());
    }

    #[test]
    fn quadratic_eigenvalues_form_one_orbit() {
        // x^2 + 1 is irreducible mod 3
        let mats = BTreeMap::from([("t".into(), im(&[&[0, -1], &[1, 0]]))]);
        let r = eigensystems(&mats, 3, 1).unwrap();
        assert_eq!(r.needs_degree, Some(2));
        let r = eigensystems(&mats, 3, 2).unwrap();
        assert_eq!(r.systems.len(), 2);
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].members, vec![0, 1]);
        assert_eq!(r.orbits[0].label, "θ");
        // mod 5 it splits into two rational orbits
        let r = eigensystems(&mats, 5, 1).unwrap();
        assert_eq!(
            r.orbits
                .iter()
                .map(|o| o.label.as_str())
                .collect::<Vec<_>>(),
            vec!["θ", "θ′"]
        );
    }

    #[test]
    fn multiplicities_sum_to_dimension() {
        let mats = BTreeMap::from([
            ("a".into(), im(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 7]])),
            ("b".into(), im(&[&[1, 0, 0], &[0, 3, 0], &[0, 0, 1]])),
        ]);
        let r = eigensystems(&mats, 5, 1).unwrap();
        assert!(r.needs_degree.is_none(), "{r:?}");
        // 7 ≡ 2 mod 5; b separates the first two lines but not the first and third
        assert_eq!(r.systems.len(), 2);
        assert_eq!(
            r.systems.iter().map(|s| s.generalized_dim).sum::<usize>(),
            3
        );
        assert!(!r.non_semisimple());
    }
}
