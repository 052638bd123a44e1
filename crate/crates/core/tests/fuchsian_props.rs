use std::collections::BTreeMap;

use proptest::prelude::*;
use shimura_core::exactalg::{rat, rat_frac};
use shimura_core::fuchsian::{
    elliptic_count, embedding_count, solve_genus, CMOrderRecord, LocalSplitting, Signature,
};
use shimura_core::quatarith::PrimeRecord;

fn record(q: u64, h: u64, s: LocalSplitting) -> CMOrderRecord {
    CMOrderRecord {
        label: format!("E{q}"),
        q,
        h,
        provenance: "synthetic".into(),
        torsion_unit_order: 2 * q,
        splitting_at: BTreeMap::from([("p".to_string(), s)]),
        conductor_note: None,
    }
}

fn sf() -> Vec<PrimeRecord> {
    vec![PrimeRecord::new(2, 1, "p").trusted("synthetic")]
}

proptest! {
    #[test]
    fn signature_volume_round_trips(
        g in 0u64..60,
        elliptic in proptest::collection::vec((2u64..=40, 1u64..=20), 0..5),
    ) {
        let sig = Signature::new(g, &elliptic).unwrap();
        let v = sig.vol_over_2pi();
        // 2g - 2 + Σ m (1 - 1/e)
        let mut direct = rat(2 * g as i64 - 2);
        for &(e, m) in &elliptic {
            direct += rat(m as i64) * (rat(1) - rat_frac(1, e as i64));
        }
        prop_assert_eq!(&v, &direct);
        if v > rat(0) {
            prop_assert_eq!(solve_genus(&v, &elliptic).unwrap(), g);
        }
    }

    #[test]
    fn embedding_numbers_linear_in_h(h in 1u64..500, k in 1u64..5, inert in any::<bool>()) {
        let s = if inert { LocalSplitting::Inert } else { LocalSplitting::Ramified };
        let one = embedding_count(&record(3, h, s), &sf(), 1).unwrap();
        prop_assert_eq!(embedding_count(&record(3, k * h, s), &sf(), 1).unwrap(), k * one);
        prop_assert_eq!(embedding_count(&record(3, h, s), &sf(), 2).unwrap() * 2, one);
    }

    #[test]
    fn split_prime_kills_the_count(h in 1u64..500) {
        let c = elliptic_count(4, &[record(4, h, LocalSplitting::Split)], &sf(), None).unwrap();
        prop_assert_eq!(c.count, 0);
    }
}

#[test]
fn double_cover_volume_law() {
    let small = Signature::new(16, &[(2, 17), (3, 9), (32, 1)]).unwrap();
    let big = Signature::new(40, &[(3, 18), (16, 1)]).unwrap();
    assert_eq!(big.vol_over_2pi(), small.vol_over_2pi() * rat(2));
}
