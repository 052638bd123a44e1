use std::collections::BTreeMap;
use std::sync::Arc;

use shimura_core::exactalg::poly::rat_frac;
use shimura_core::exactalg::{zeta_at_2, IntPoly, NumberField};
use shimura_core::fuchsian::{
    check_cover, elliptic_orders_scan, maximal_signature, CMOrderRecord, LocalSplitting, Signature,
    SplittingTable,
};
use shimura_core::quatarith::PrimeRecord;

fn field_f() -> Arc<NumberField> {
    Arc::new(
        NumberField::new("F", IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1]))
            .unwrap()
            .with_place_order(vec![4, 0, 1, 2, 3, 5, 6, 7])
            .unwrap(),
    )
}

fn record(q: u64, h: u64, s: LocalSplitting) -> CMOrderRecord {
    CMOrderRecord {
        label: format!("order for q={q}"),
        q,
        h,
        provenance: "fixture".into(),
        torsion_unit_order: 2 * q,
        splitting_at: BTreeMap::from([("p".to_string(), s)]),
        conductor_note: None,
    }
}

#[test]
fn signature_of_the_maximal_group() {
    let f = field_f();
    let sf = [PrimeRecord::new(2, 1, "p").trusted("fixture")];
    let recs = [
        record(2, 17, LocalSplitting::Ramified),
        record(3, 9, LocalSplitting::Inert),
        record(32, 1, LocalSplitting::Ramified),
    ];
    let z = zeta_at_2(&f, 200_000).unwrap();
    let run = maximal_signature(&f, &sf, &recs, 2, &z).unwrap();
    assert_eq!(run.signature.to_string(), "(16; 2^17, 3^9, 32^1)");
    assert_eq!(run.volume.exact, Some(rat_frac(1455, 32)));
    assert!(run.volume.contains(1455.0 / 32.0));
    let rel = (run.volume.vol_over_2pi - 1455.0 / 32.0).abs() / (1455.0 / 32.0);
    assert!(rel < 1e-3);

    let unit: Signature = "(40; 3^18, 16^1)".parse().unwrap();
    let v1 = shimura_core::fuchsian::borel_volume(&f, &sf, 1, &z).unwrap();
    let c = check_cover(&unit, &run.signature, 2, Some(&v1)).unwrap();
    assert!(c.numeric_ok);

    let scan = elliptic_orders_scan(&f, &sf, 64, &SplittingTable::default()).unwrap();
    assert_eq!(scan.survivors, [3, 4, 6, 8, 16, 32]);
}
