//! Brandt module data: ideal classes, stabilizer weights, Hecke matrices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

pub type HeckeMatrix = Vec<Vec<i64>>;

/// Edge of the Brandt graph at one prime: from class `i` to class `j`,
/// with edge weight `w` (stabilizer order of the edge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrandtEdge {
    pub i: usize,
    pub j: usize,
    pub w: u64,
}

/// Row convention: `b[i][j]` counts neighbours of class i lying in class j,
/// so rows sum to Nq + 1 and w_j b_ij = w_i b_ji.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrandtDataset {
    pub field: String,
    pub labels: Vec<String>,
    pub weights: Vec<u64>,
    pub matrices: BTreeMap<String, HeckeMatrix>,
    /// Nq per matrix label, when known; enables the row-sum check
    pub norms: BTreeMap<String, u64>,
    pub edges: BTreeMap<String, Vec<BrandtEdge>>,
    pub provenance: String,
}

pub fn mat_mul(a: &HeckeMatrix, b: &HeckeMatrix) -> HeckeMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut c = alloc::vec![alloc::vec![0i64; m]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for j in 0..m {
                    c[i][j] += aik * b[k][j];
                }
            }
        }
    }
    c
}

impl BrandtDataset {
    /// Checks dimensions, commutation, weighted symmetry and row sums.
    pub fn new(
        field: impl Into<String>,
        labels: Vec<String>,
        weights: Vec<u64>,
        matrices: BTreeMap<String, HeckeMatrix>,
        norms: BTreeMap<String, u64>,
        edges: BTreeMap<String, Vec<BrandtEdge>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let ds = BrandtDataset {
            field: field.into(),
            labels,
            weights,
            matrices,
            norms,
            edges,
            provenance: provenance.into(),
        };
        ds.check()?;
        Ok(ds)
    }

    /// As `new`, for matrices given with `b[i][j]` counting neighbours of j in class i.
    pub fn from_columns(
        field: impl Into<String>,
        labels: Vec<String>,
        weights: Vec<u64>,
        matrices: BTreeMap<String, HeckeMatrix>,
        norms: BTreeMap<String, u64>,
        edges: BTreeMap<String, Vec<BrandtEdge>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let t = matrices
            .into_iter()
            .map(|(k, m)| (k, crate::exactalg::linalg::transpose(&m)))
            .collect();
        Self::new(field, labels, weights, t, norms, edges, provenance)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self, label: &str) -> Result<&HeckeMatrix> {
        self.matrices
            .get(label)
            .ok_or_else(|| invalid(format!("no Hecke matrix for {label}")))
    }

    fn check(&self) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        if self.weights.len() != n {
            return Err(invalid(format!(
                "{} weights for {} classes",
                self.weights.len(),
                n
            )));
        }
        if self.weights.contains(&0) {
            return Err(invalid("stabilizer weights must be positive"));
        }
        for (label, m) in &self.matrices {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(invalid(format!("matrix {label} is not {n} x {n}")));
            }
            for i in 0..n {
                for j in 0..n {
                    let (wi, wj) = (self.weights[i] as i64, self.weights[j] as i64);
                    if wj * m[i][j] != wi * m[j][i] {
                        return Err(Error::Symmetry {
                            label: label.clone(),
                            i,
                            j,
                        });
                    }
                }
            }
            if let Some(&nq) = self.norms.get(label) {
                for (i, row) in m.iter().enumerate() {
                    let s: i64 = row.iter().sum();
                    if s != nq as i64 + 1 {
                        return Err(Error::RowSum {
                            label: label.clone(),
                            row: i,
                            expected: format!("{}", nq + 1),
                            got: format!("{s}"),
                        });
                    }
                }
            }
        }
        let keys: Vec<&String> = self.matrices.keys().collect();
        for (x, a) in keys.iter().enumerate() {
            for b in &keys[x + 1..] {
                let (ma, mb) = (&self.matrices[*a], &self.matrices[*b]);
                if mat_mul(ma, mb) != mat_mul(mb, ma) {
                    return Err(Error::NonCommuting((*a).clone(), (*b).clone()));
                }
            }
        }
        for (label, es) in &self.edges {
            if let Some(e) = es.iter().find(|e| e.i >= n || e.j >= n || e.w == 0) {
                return Err(Error::EdgeMismatch(format!("{label}: bad edge {e:?}")));
            }
        }
        Ok(())
    }

    /// Σ 1/w_i as (numerator, denominator) in lowest terms.
    pub fn mass(&self) -> (u64, u64) {
        let mut num = 0u64;
        let mut den = 1u64;
        for &w in &self.weights {
            let l = num_integer::lcm(den, w);
            num = num * (l / den) + l / w;
            den = l;
        }
        let g = num_integer::gcd(num, den);
        (num / g, den / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn ds(weights: Vec<u64>, m: HeckeMatrix, nq: u64) -> Result<BrandtDataset> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        BrandtDataset::new(
            "Q",
            labels,
            weights,
            BTreeMap::from([("2".to_string(), m)]),
            BTreeMap::from([("2".to_string(), nq)]),
            BTreeMap::new(),
            "test",
        )
    }

    #[test]
    fn checks() {
        assert!(ds(vec![1], vec![vec![3]], 2).is_ok());
        assert!(matches!(
            ds(vec![1], vec![vec![4]], 2),
            Err(Error::RowSum { .. })
        ));
        // w_j b_ij = w_i b_ji with weights (2, 3): b_01 = 2, b_10 = 3
        assert!(ds(vec![2, 3], vec![vec![1, 2], vec![3, 0]], 2).is_ok());
        assert!(matches!(
            ds(vec![2, 3], vec![vec![1, 2], vec![2, 1]], 2),
            Err(Error::Symmetry { .. })
        ));
        assert_eq!(
            ds(vec![4, 6], vec![vec![1, 2], vec![3, 0]], 2)
                .unwrap()
                .mass(),
            (5, 12)
        );
    }

    #[test]
    fn non_commuting() {
        let r = BrandtDataset::new(
            "Q",
            vec!["a".into(), "b".into()],
            vec![1, 1],
            BTreeMap::from([
                ("x".to_string(), vec![vec![1, 1], vec![1, 0]]),
                ("y".to_string(), vec![vec![1, 0], vec![0, 0]]),
            ]),
            BTreeMap::new(),
            BTreeMap::new(),
            "test",
        );
        assert!(matches!(r, Err(Error::NonCommuting(_, _))));
    }
}
