//! Candidate orders q of elliptic elements: 2cos(2π/q) ∈ F, no prime of S_f
//! splits in F(ζ_q), and (2 + 2cos(2π/q)) is supported at S_f modulo squares.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use super::cm::LocalSplitting;
use crate::error::{Error, Result};
use crate::exactalg::arith::{factor_bigint, inv_mod, valuation};
use crate::exactalg::cyclotomic::{cyclotomic_membership, dickson_t, real_two_power_conductor};
use crate::exactalg::numfield::{NFElem, NumberField};
use crate::exactalg::splitting::{split_prime, valuation_at};
use crate::quatarith::{square_class_odd, PrimeRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Rational,
    /// Q(ζ_N)^+ with N a power of two
    RealTwoPower(u64),
}

pub fn family(nf: &NumberField) -> Result<Family> {
    if nf.degree() == 1 {
        return Ok(Family::Rational);
    }
    real_two_power_conductor(nf.poly())
        .map(Family::RealTwoPower)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "{}: elliptic scan needs Q or a real 2-power cyclotomic field",
                nf.name()
            ))
        })
}

/// Externally supplied splitting types, keyed by (q, prime label).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplittingTable {
    pub entries: BTreeMap<(u64, String), (LocalSplitting, String)>,
}

impl SplittingTable {
    pub fn insert(&mut self, q: u64, label: &str, s: LocalSplitting, provenance: &str) {
        self.entries
            .insert((q, label.into()), (s, provenance.into()));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingSource {
    Computed(&'static str),
    Table(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBehaviour {
    pub label: String,
    pub splitting: LocalSplitting,
    pub source: SplittingSource,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub q: u64,
    pub in_field: bool,
    /// empty unless `in_field`
    pub behaviour: Vec<PrimeBehaviour>,
    pub no_split: bool,
    /// N_{F/Q}(2 + 2cos(2π/q)) when `in_field`
    pub norm: Option<String>,
    pub norm_ok: bool,
    /// per-prime valuations of 2 + 2cos(2π/q) off S_f all even
    pub strict_ok: Option<bool>,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub field: String,
    pub q_max: u64,
    pub survivors: Vec<u64>,
    pub rows: Vec<ScanRow>,
}

pub fn condition_i(nf: &NumberField, q: u64) -> Result<bool> {
    match family(nf)? {
        Family::Rational => Ok(matches!(q, 3 | 4 | 6)),
        Family::RealTwoPower(n) => cyclotomic_membership(q, n),
    }
}

/// 2cos(2π/q) as an element of F, normalized by its value at the first real place.
pub fn two_cos(nf: &Arc<NumberField>, q: u64) -> Result<NFElem> {
    match q {
        3 => return Ok(NFElem::from_i64s(nf, &[-1])),
        4 => return Ok(NFElem::from_i64s(nf, &[0])),
        6 => return Ok(NFElem::from_i64s(nf, &[1])),
        _ => {}
    }
    let Family::RealTwoPower(n) = family(nf)? else {
        return Err(Error::Unsupported(format!("2cos(2pi/{q}) outside Q")));
    };
    if n % q != 0 || !q.is_power_of_two() {
        return Err(Error::Unsupported(format!(
            "2cos(2pi/{q}) is not in {}",
            nf.name()
        )));
    }
    let a = nf.real_roots_f64()[0];
    let k = libm::round(libm::acos(a / 2.0) * n as f64 / (2.0 * core::f64::consts::PI)) as u64;
    let kinv = inv_mod(k % n, n).expect("odd k");
    let j = (n / q) * kinv % n;
    let c = NFElem::from_poly(nf, &dickson_t(j).to_rat());
    let target = 2.0 * libm::cos(2.0 * core::f64::consts::PI / q as f64);
    debug_assert!(libm::fabs(c.real_values_f64()[0] - target) < 1e-9);
    Ok(c)
}

fn dyadic_rule(fam: Family, q: u64, f: u32) -> Option<(LocalSplitting, &'static str)> {
    match q {
        3 | 6 => Some(if f.is_multiple_of(2) {
            (
                LocalSplitting::Split,
                "residue field F_{2^f} contains zeta_3 (f even)",
            )
        } else {
            (
                LocalSplitting::Inert,
                "x^2+x+1 stays irreducible over F_{2^f} (f odd)",
            )
        }),
        _ if q.is_power_of_two() => match fam {
            Family::Rational if q == 4 => Some((LocalSplitting::Ramified, "2 ramifies in Q(i)")),
            Family::RealTwoPower(_) => Some((
                LocalSplitting::Ramified,
                "F(zeta_q) is 2-power cyclotomic, totally ramified at 2",
            )),
            _ => None,
        },
        _ => None,
    }
}

fn behaviour_at(
    nf: &Arc<NumberField>,
    fam: Family,
    q: u64,
    c: &NFElem,
    prime: &PrimeRecord,
    table: &SplittingTable,
) -> Result<PrimeBehaviour> {
    let i = prime.resolve(nf)?;
    let fac = split_prime(nf, prime.p)?.factors[i].clone();
    let computed = if prime.p == 2 {
        dyadic_rule(fam, q, fac.f)
    } else if fac.e == 1 {
        // E = F(sqrt(c^2 - 4))
        let delta = &(c * c) - &NFElem::from_i64s(nf, &[4]);
        let (v, chi) = square_class_odd(&delta, prime.p, i)?;
        Some(if v.rem_euclid(2) == 1 {
            (LocalSplitting::Ramified, "odd valuation of c^2 - 4")
        } else if chi == 1 {
            (LocalSplitting::Split, "c^2 - 4 is a local square")
        } else {
            (
                LocalSplitting::Inert,
                "c^2 - 4 is a local non-square unit class",
            )
        })
    } else {
        None
    };
    if let Some((s, why)) = computed {
        return Ok(PrimeBehaviour {
            label: prime.label.clone(),
            splitting: s,
            source: SplittingSource::Computed(why),
        });
    }
    match table.entries.get(&(q, prime.label.clone())) {
        Some((s, prov)) => Ok(PrimeBehaviour {
            label: prime.label.clone(),
            splitting: *s,
            source: SplittingSource::Table(prov.clone()),
        }),
        None => Err(Error::MissingSplittingData(q)),
    }
}

fn strict_support(nf: &Arc<NumberField>, x: &NFElem, s_f: &[PrimeRecord]) -> Result<bool> {
    let n = x.norm();
    let listed: Vec<(u64, usize)> = s_f
        .iter()
        .map(|p| p.resolve(nf).map(|i| (p.p, i)))
        .collect::<Result<_>>()?;
    for m in [n.numer().abs(), n.denom().clone()] {
        for (ell, _) in factor_bigint(&m) {
            let ell = ell
                .to_u64()
                .ok_or_else(|| Error::Unsupported("huge prime in norm".into()))?;
            let s = split_prime(nf, ell)?;
            for i in 0..s.factors.len() {
                if listed.contains(&(ell, i)) {
                    continue;
                }
                if valuation_at(nf, x, ell, i)?.rem_euclid(2) == 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn elliptic_orders_scan(
    nf: &Arc<NumberField>,
    s_f: &[PrimeRecord],
    q_max: u64,
    table: &SplittingTable,
) -> Result<ScanReport> {
    let fam = family(nf)?;
    let below: Vec<u64> = s_f.iter().map(|p| p.p).collect();
    let mut rows = Vec::new();
    let mut survivors = Vec::new();
    for q in 3..=q_max {
        let mut row = ScanRow {
            q,
            in_field: condition_i(nf, q)?,
            behaviour: Vec::new(),
            no_split: false,
            norm: None,
            norm_ok: false,
            strict_ok: None,
            survives: false,
        };
        if row.in_field {
            let c = two_cos(nf, q)?;
            for pr in s_f {
                row.behaviour.push(behaviour_at(nf, fam, q, &c, pr, table)?);
            }
            row.no_split = row
                .behaviour
                .iter()
                .all(|b| b.splitting != LocalSplitting::Split);
            let x = &NFElem::from_i64s(nf, &[2]) + &c;
            let norm = x.norm();
            debug_assert!(norm.is_integer() && !norm.is_zero());
            let nz = norm.to_integer();
            row.norm_ok = factor_bigint(&nz)
                .iter()
                .filter_map(|(ell, _)| ell.to_u64())
                .all(|ell| below.contains(&ell) || valuation(&nz, ell).is_multiple_of(2));
            row.norm = Some(format!("{nz}"));
            row.strict_ok = Some(strict_support(nf, &x, s_f)?);
            row.survives = row.no_split && row.norm_ok;
        }
        if row.survives {
            survivors.push(q);
        }
        rows.push(row);
    }
    Ok(ScanReport {
        field: nf.name().into(),
        q_max,
        survivors,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// equals the order attached to a CM record
    Record,
    /// divides a record order (a power of an elliptic element)
    Divides(u64),
    /// q = 2m with m odd: same CM field F(ζ_m) as m
    SameField(u64),
    Uncovered,
}

/// Relates scan survivors to the elliptic orders carried by CM records.
pub fn coverage(survivors: &[u64], record_orders: &[u64]) -> Vec<(u64, Coverage)> {
    let cov = |q: u64| {
        if record_orders.contains(&q) {
            Coverage::Record
        } else if let Some(&r) = record_orders.iter().find(|&&r| r % q == 0) {
            Coverage::Divides(r)
        } else {
            Coverage::Uncovered
        }
    };
    survivors
        .iter()
        .map(|&q| {
            let c = cov(q);
            if c == Coverage::Uncovered && q % 4 == 2 && cov(q / 2) != Coverage::Uncovered {
                (q, Coverage::SameField(q / 2))
            } else {
                (q, c)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::cyclotomic::norm_two_plus_cos;
    use crate::exactalg::poly::IntPoly;

    fn f32() -> Arc<NumberField> {
        Arc::new(
            NumberField::new("F", IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1]))
                .unwrap()
                .with_place_order(alloc::vec![4, 0, 1, 2, 3, 5, 6, 7])
                .unwrap(),
        )
    }

    #[test]
    fn scan_over_f() {
        let f = f32();
        let sf = [PrimeRecord::new(2, 1, "p").trusted("test")];
        let r = elliptic_orders_scan(&f, &sf, 64, &SplittingTable::default()).unwrap();
        assert_eq!(r.survivors, [3, 4, 6, 8, 16, 32]);
        let six = r.rows.iter().find(|x| x.q == 6).unwrap();
        assert_eq!(six.strict_ok, Some(false));
        // norm test agrees with the closed form N(2+2cos) ^ ([F:Q(cos)])
        for row in r.rows.iter().filter(|x| x.in_field) {
            let (n, d) = norm_two_plus_cos(row.q);
            let full = num_traits::pow(n, 8 / d);
            assert_eq!(
                row.norm.as_deref(),
                Some(format!("{full}").as_str()),
                "q = {}",
                row.q
            );
        }
    }

    #[test]
    fn scan_over_q() {
        let q = Arc::new(NumberField::new("Q", IntPoly::from_i64s(&[0, 1])).unwrap());
        let sf = [PrimeRecord::new(2, 1, "2"), PrimeRecord::new(3, 1, "3")];
        let r = elliptic_orders_scan(&q, &sf, 64, &SplittingTable::default()).unwrap();
        assert_eq!(r.survivors, [3, 4, 6]);
        // 3 ramifies in Q(sqrt -3); 2 + 2cos(pi/2) = 2 is not supported at {3}
        let sf3 = [PrimeRecord::new(3, 1, "3")];
        let r = elliptic_orders_scan(&q, &sf3, 64, &SplittingTable::default()).unwrap();
        assert_eq!(r.survivors, [3, 6]);
        // 7 splits in Q(sqrt -3)
        let sf7 = [PrimeRecord::new(7, 1, "7")];
        let r = elliptic_orders_scan(&q, &sf7, 64, &SplittingTable::default()).unwrap();
        assert!(r.survivors.is_empty());
        let row3 = &r.rows[0];
        assert_eq!(row3.behaviour[0].splitting, LocalSplitting::Split);
    }

    #[test]
    fn two_cos_values() {
        let f = f32();
        for q in [3u64, 4, 6, 8, 16, 32] {
            let c = two_cos(&f, q).unwrap();
            let v = c.real_values_f64()[0];
            assert!((v - 2.0 * libm::cos(2.0 * core::f64::consts::PI / q as f64)).abs() < 1e-9);
        }
    }

    #[test]
    fn coverage_of_survivors() {
        let c = coverage(&[3, 4, 6, 8, 16, 32], &[2, 3, 32]);
        assert_eq!(c[0].1, Coverage::Record);
        assert_eq!(c[1].1, Coverage::Divides(32));
        assert_eq!(c[2].1, Coverage::SameField(3));
    }
}
