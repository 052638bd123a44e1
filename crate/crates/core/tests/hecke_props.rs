use std::collections::BTreeMap;

use proptest::prelude::*;
use shimura_core::exactalg::linalg::charpoly_int;
use shimura_core::exactalg::{FiniteField, GaloisField, IntPoly, PolyOps};
use shimura_core::hecke::*;

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    dataset::mat_mul(&a.to_vec(), &b.to_vec())
}

/// Two commuting symmetric matrices: S and S² - 2S + I.
fn dataset() -> impl Strategy<Value = BrandtDataset> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |tri| {
            let mut s = vec![vec![0i64; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    s[i][j] = tri[k];
                    s[j][i] = tri[k];
                    k += 1;
                }
            }
            let s2 = mul(&s, &s);
            let t: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| s2[i][j] - 2 * s[i][j] + (i == j) as i64)
                        .collect()
                })
                .collect();
            BrandtDataset::new(
                "Q",
                (0..n).map(|i| format!("v{i}")).collect(),
                vec![1; n],
                BTreeMap::from([("a".to_string(), s), ("b".to_string(), t)]),
                BTreeMap::new(),
                BTreeMap::new(),
                "synthetic",
            )
            .unwrap()
        })
    })
}

/// charpoly of `m` mod ℓ equals Π (x - λ)^{dim} over the reported systems.
fn check_reduction(
    mats: &BTreeMap<String, shimura_core::exactalg::linalg::IntMatrix>,
    ell: u64,
) -> Result<(), TestCaseError> {
    let first = eigensystems(mats, ell, 1).unwrap();
    let k = first.needs_degree.unwrap_or(1);
    prop_assume!(k <= 12);
    let rep = eigensystems(mats, ell, k).unwrap();
    prop_assert!(rep.needs_degree.is_none());
    let gf = GaloisField::new(ell, k).unwrap();
    for (label, m) in mats {
        let cp: Vec<_> = charpoly_int(m)
            .reduce_mod(ell)
            .iter()
            .map(|&c| gf.from_u64(c))
            .collect();
        let mut prod = vec![gf.one()];
        for s in &rep.systems {
            let lin = vec![gf.neg(&s.values[label]), gf.one()];
            for _ in 0..s.generalized_dim {
                prod = gf.p_mul(&prod, &lin);
            }
        }
        prop_assert_eq!(prod, cp);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn constituent_dimensions_stable(ds in dataset()) {
        let dims = stable_dimensions(&ds, 5).unwrap();
        prop_assert!(dims.is_some());
        prop_assert_eq!(dims.unwrap().iter().sum::<usize>(), ds.dim());
    }

    #[test]
    fn reduction_compatibility(ds in dataset(), ell in prop::sample::select(vec![2u64, 3, 5])) {
        for c in split_constituents(&ds, 0, None).unwrap() {
            for (label, r) in &c.restrictions {
                prop_assert_eq!(&charpoly_int(r), &c.charpolys[label]);
            }
            check_reduction(&c.restrictions, ell)?;
        }
    }
}

fn table() -> impl Strategy<Value = EigenTable> {
    proptest::collection::btree_map(
        prop::sample::select(vec!["2", "3", "5", "7"]).prop_map(String::from),
        proptest::collection::vec(-6i64..=6, 1..=2).prop_map(|mut c| {
            c.push(1);
            IntPoly::from_i64s(&c)
        }),
        4,
    )
}

proptest! {
    #[test]
    fn congruence_symmetric_and_reflexive(a in table(), b in table(), ell in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(a.keys().eq(b.keys()));
        prop_assert!(congruence_detect(&a, &a, ell).unwrap().is_congruent());
        prop_assert_eq!(congruence_detect(&a, &b, ell).unwrap(), congruence_detect(&b, &a, ell).unwrap());
    }

    #[test]
    fn connectivity_relabel_invariant(
        n in 1usize..9,
        raw in proptest::collection::vec((0usize..9, 0usize..9), 0..10),
        perm in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let edges: Vec<(usize, usize)> = raw.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let build = |label: &dyn Fn(usize) -> String| {
            let mut g = CongruenceGraph::new((0..n).map(label).collect());
            for &(a, b) in &edges {
                g.add_edge(&label(a), &label(b), 3, "w").unwrap();
            }
            connectivity(&g)
        };
        let plain = build(&|i| names[i].clone());
        let renamed = build(&|i| format!("d{}", perm[i]));
        let back: BTreeMap<String, String> = (0..n).map(|i| (format!("d{}", perm[i]), names[i].clone())).collect();
        let mut mapped: Vec<Vec<String>> = renamed
            .iter()
            .map(|c| {
                let mut v: Vec<String> = c.iter().map(|x| back[x].clone()).collect();
                v.sort();
                v
            })
            .collect();
        mapped.sort();
        prop_assert_eq!(mapped, plain);
    }
}

#[test]
fn oracle_datasets_satisfy_brandt_laws() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let b = brandt_over_q(p).unwrap();
        let ds = &b.dataset;
        let keys: Vec<&String> = ds.matrices.keys().collect();
        for x in &keys {
            let m = &ds.matrices[*x];
            for y in &keys {
                let n = &ds.matrices[*y];
                assert_eq!(mul(m, n), mul(n, m));
            }
            for i in 0..ds.dim() {
                for j in 0..ds.dim() {
                    assert_eq!(
                        ds.weights[j] as i64 * m[i][j],
                        ds.weights[i] as i64 * m[j][i]
                    );
                }
            }
        }
        let mats = ds
            .matrices
            .iter()
            .map(|(l, m)| {
                (
                    l.clone(),
                    m.iter()
                        .map(|r| r.iter().map(|&x| x.into()).collect())
                        .collect(),
                )
            })
            .collect();
        for ell in [2u64, 3, 5] {
            check_reduction(&mats, ell).unwrap();
        }
    }
}

#[test]
fn trivial_examples() {
    let single = |m: Vec<Vec<i64>>, w: Vec<u64>| {
        BrandtDataset::new(
            "Q",
            (0..m.len()).map(|i| format!("v{i}")).collect(),
            w,
            BTreeMap::from([("t".to_string(), m)]),
            BTreeMap::new(),
            BTreeMap::new(),
            "t",
        )
        .unwrap()
    };
    let d = split_constituents(
        &single(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]],
            vec![1, 1, 1],
        ),
        3,
        None,
    )
    .unwrap();
    let mut dims: Vec<usize> = d.iter().map(|c| c.dimension).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
    // companion of x^2 - x - 1, symmetric for weights (1, 1)
    let c = split_constituents(&single(vec![vec![0, 1], vec![1, 1]], vec![1, 1]), 3, None).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].charpolys["t"], IntPoly::from_i64s(&[-1, -1, 1]));

    // diag(0,1) and diag(1,1) over F_2
    let mats = BTreeMap::from([
        (
            "a".to_string(),
            vec![vec![0.into(), 0.into()], vec![0.into(), 1.into()]],
        ),
        (
            "b".to_string(),
            vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]],
        ),
    ]);
    let r = eigensystems(&mats, 2, 1).unwrap();
    let vals: Vec<Vec<String>> = r
        .systems
        .iter()
        .map(|s| s.values.values().map(|v| v.to_string()).collect())
        .collect();
    assert_eq!(vals, vec![vec!["0", "1"], vec!["1", "1"]]);
    // companion of x^2 + x + 1 mod 2: one Frobenius orbit over F_4
    let comp = BTreeMap::from([(
        "t".to_string(),
        vec![vec![0.into(), 1.into()], vec![(-1).into(), (-1).into()]],
    )]);
    let r = eigensystems(&comp, 2, 2).unwrap();
    assert_eq!(r.systems.len(), 2);
    assert_eq!(r.orbits.len(), 1);
}
