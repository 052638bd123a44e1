use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use shimura_core::exactalg::{IntPoly, NFElem, NumberField};
use shimura_core::quatarith::{hilbert_symbol_odd, real_ramification, PrimeRecord, QuaternionData};

fn qsqrt2() -> &'static Arc<NumberField> {
    static F: OnceLock<Arc<NumberField>> = OnceLock::new();
    F.get_or_init(|| {
        Arc::new(NumberField::new("Q(sqrt2)", IntPoly::from_i64s(&[-2, 0, 1])).unwrap())
    })
}

fn rationals() -> &'static Arc<NumberField> {
    static F: OnceLock<Arc<NumberField>> = OnceLock::new();
    F.get_or_init(|| Arc::new(NumberField::new("Q", IntPoly::from_i64s(&[0, 1])).unwrap()))
}

fn elem() -> impl Strategy<Value = (i64, i64)> {
    (-12i64..=12, -12i64..=12)
}

fn nz_elem() -> impl Strategy<Value = (i64, i64)> {
    elem().prop_filter("nonzero", |&(x, y)| x != 0 || y != 0)
}

fn nf(c: (i64, i64)) -> NFElem {
    NFElem::from_i64s(qsqrt2(), &[c.0, c.1])
}

fn legendre(a: i64, p: i64) -> i8 {
    let a = a.rem_euclid(p) as u64;
    let r = shimura_core::exactalg::arith::pow_mod(a, (p as u64 - 1) / 2, p as u64);
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Tame symbol (a, b)_p over Q for odd p.
fn hilbert_q(a: i64, b: i64, p: i64) -> i8 {
    let split = |mut x: i64| {
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        (v, x)
    };
    let (al, u) = split(a);
    let (be, w) = split(b);
    let mut s: i8 = if (al * be) % 2 == 1 && p % 4 == 3 {
        -1
    } else {
        1
    };
    if be % 2 == 1 {
        s *= legendre(u, p);
    }
    if al % 2 == 1 {
        s *= legendre(w, p);
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nrd_multiplicative(
        a in nz_elem(), b in nz_elem(),
        x in proptest::collection::vec(elem(), 4), y in proptest::collection::vec(elem(), 4),
    ) {
        let q = QuaternionData::new(nf(a), nf(b), vec![], vec![]).unwrap();
        let qx = q.elem([nf(x[0]), nf(x[1]), nf(x[2]), nf(x[3])]);
        let qy = q.elem([nf(y[0]), nf(y[1]), nf(y[2]), nf(y[3])]);
        prop_assert_eq!(q.nrd(&q.mul(&qx, &qy)), &q.nrd(&qx) * &q.nrd(&qy));
        // x^2 - trd(x) x + nrd(x) = 0
        let sq = q.mul(&qx, &qx);
        let lin = q.scale(&(-&q.trd(&qx)), &qx);
        let z = q.add(&q.add(&sq, &lin), &q.from_base(&q.nrd(&qx)));
        prop_assert!(z.coords.iter().all(NFElem::is_zero));
    }

    #[test]
    fn symbol_over_q_matches_tame_formula(
        a in (-300i64..=300).prop_filter("nonzero", |x| *x != 0),
        b in (-300i64..=300).prop_filter("nonzero", |x| *x != 0),
        p in prop::sample::select(vec![3i64, 5, 7, 11, 13]),
    ) {
        let f = rationals();
        let pr = PrimeRecord::new(p as u64, 1, "p");
        let s = hilbert_symbol_odd(&NFElem::from_i64s(f, &[a]), &NFElem::from_i64s(f, &[b]), &pr).unwrap();
        prop_assert_eq!(s, hilbert_q(a, b, p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_ramification_symmetric_and_square_invariant(a in nz_elem(), b in nz_elem(), c in nz_elem()) {
        let (ea, eb) = (nf(a), nf(b));
        let r = real_ramification(&ea, &eb).unwrap();
        prop_assert_eq!(&r, &real_ramification(&eb, &ea).unwrap());
        let c2 = &nf(c) * &nf(c);
        prop_assert_eq!(&r, &real_ramification(&(&ea * &c2), &eb).unwrap());
        prop_assert_eq!(&r, &real_ramification(&ea, &(&eb * &c2)).unwrap());
    }

    #[test]
    fn symbol_symmetric_and_bimultiplicative(
        a in nz_elem(), a2 in nz_elem(), b in nz_elem(),
        pr in prop::sample::select(vec![(3u64, 2u32), (5, 2), (7, 1), (17, 1)]),
    ) {
        let record = PrimeRecord::new(pr.0, pr.1, "p");
        let (ea, ea2, eb) = (nf(a), nf(a2), nf(b));
        let s = |x: &NFElem, y: &NFElem| hilbert_symbol_odd(x, y, &record).unwrap();
        prop_assert_eq!(s(&ea, &eb), s(&eb, &ea));
        prop_assert_eq!(s(&(&ea * &ea2), &eb), s(&ea, &eb) * s(&ea2, &eb));
    }
}
