//! CM order records, optimal embedding numbers and elliptic counts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::quatarith::PrimeRecord;

/// Behaviour of a prime of the base field in the CM extension E.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocalSplitting {
    Split,
    Inert,
    Ramified,
}

impl LocalSplitting {
    /// Eichler symbol {E/q}.
    pub fn eichler_symbol(self) -> i8 {
        match self {
            LocalSplitting::Split => 1,
            LocalSplitting::Inert => -1,
            LocalSplitting::Ramified => 0,
        }
    }
    /// Local embedding number 1 - {E/q} at a prime ramified in the algebra.
    pub fn local_embedding_number(self) -> u64 {
        (1 - self.eichler_symbol()) as u64
    }
    pub fn as_str(self) -> &'static str {
        match self {
            LocalSplitting::Split => "split",
            LocalSplitting::Inert => "inert",
            LocalSplitting::Ramified => "ramified",
        }
    }
}

impl fmt::Display for LocalSplitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LocalSplitting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(LocalSplitting::Split),
            "inert" => Ok(LocalSplitting::Inert),
            "ramified" => Ok(LocalSplitting::Ramified),
            _ => Err(invalid(format!("unknown splitting type {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMOrderRecord {
    pub label: String,
    /// elliptic order this record contributes to
    pub q: u64,
    /// class number, input data
    pub h: u64,
    pub provenance: String,
    pub torsion_unit_order: u64,
    /// keyed by the labels of the primes in S_f
    pub splitting_at: BTreeMap<String, LocalSplitting>,
    pub conductor_note: Option<String>,
}

impl CMOrderRecord {
    pub fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(invalid(format!(
                "{}: class number must be at least 1",
                self.label
            )));
        }
        if self.q < 2 {
            return Err(invalid(format!(
                "{}: elliptic order must be at least 2",
                self.label
            )));
        }
        Ok(())
    }

    /// [H : F^x] for the Hilbert class field H of E over F when F has class
    /// number one: the degree of the Galois closure of a CM point.
    pub fn galois_degree(&self) -> u64 {
        2 * self.h
    }

    fn splitting(&self, prime: &PrimeRecord) -> Result<LocalSplitting> {
        self.splitting_at.get(&prime.label).copied().ok_or_else(|| {
            invalid(format!(
                "{}: no splitting entry for {}",
                self.label, prime.label
            ))
        })
    }

    pub fn has_split_prime(&self, s_f: &[PrimeRecord]) -> Result<bool> {
        for pr in s_f {
            if self.splitting(pr)? == LocalSplitting::Split {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// [H : H ∩ N(E^x) O_F^{x+}] with narrow class number one and a single
/// ramified finite prime: 2 if it is inert in E, 1 if ramified.
pub fn norm_index(rec: &CMOrderRecord, s_f: &[PrimeRecord]) -> Result<u64> {
    match s_f {
        [p] => match rec.splitting(p)? {
            LocalSplitting::Inert => Ok(2),
            LocalSplitting::Ramified => Ok(1),
            LocalSplitting::Split => Err(Error::Unsupported(format!(
                "{}: {} splits in E, supply the norm index",
                rec.label, p.label
            ))),
        },
        _ => Err(Error::Unsupported(format!(
            "{}: norm index with {} ramified finite primes, supply the index",
            rec.label,
            s_f.len()
        ))),
    }
}

/// m(O, O_D; G) = 2h Π_{q ∈ S_f} (1 - {E/q}) / index.
pub fn embedding_count(rec: &CMOrderRecord, s_f: &[PrimeRecord], index_h: u64) -> Result<u64> {
    rec.validate()?;
    if index_h == 0 {
        return Err(invalid("norm index must be positive"));
    }
    let mut local = 1u64;
    for pr in s_f {
        local *= rec.splitting(pr)?.local_embedding_number();
    }
    let total = 2 * rec.h * local;
    if !total.is_multiple_of(index_h) {
        return Err(Error::InconsistentSignature(format!(
            "{}: 2h * local = {} is not divisible by the norm index {}",
            rec.label, total, index_h
        )));
    }
    Ok(total / index_h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCount {
    pub q: u64,
    pub count: u64,
    /// (record label, norm index, embedding number)
    pub terms: Vec<(String, u64, u64)>,
}

/// e_q = ½ Σ m over the records attached to q. A record whose CM field is
/// split at some prime of S_f contributes nothing and needs no norm index.
pub fn elliptic_count(
    q: u64,
    records: &[CMOrderRecord],
    s_f: &[PrimeRecord],
    index_override: Option<u64>,
) -> Result<EllipticCount> {
    if q == 2 && s_f.len() > 1 {
        return Err(Error::Unsupported(
            "q = 2 with several ramified finite primes needs several norm representatives".into(),
        ));
    }
    let mut sum = 0u64;
    let mut terms = Vec::new();
    for rec in records.iter().filter(|r| r.q == q) {
        if rec.has_split_prime(s_f)? {
            terms.push((rec.label.clone(), 1, 0));
            continue;
        }
        let idx = match index_override {
            Some(i) => i,
            None => norm_index(rec, s_f)?,
        };
        let m = embedding_count(rec, s_f, idx)?;
        sum += m;
        terms.push((rec.label.clone(), idx, m));
    }
    if sum % 2 == 1 {
        return Err(Error::InconsistentSignature(format!(
            "sum of embedding numbers for q = {q} is odd ({sum})"
        )));
    }
    Ok(EllipticCount {
        q,
        count: sum / 2,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn sf() -> Vec<PrimeRecord> {
        alloc::vec![PrimeRecord::new(2, 1, "p").trusted("test")]
    }

    fn rec(q: u64, h: u64, s: LocalSplitting) -> CMOrderRecord {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), s);
        CMOrderRecord {
            label: format!("q{q}"),
            q,
            h,
            provenance: "test".into(),
            torsion_unit_order: 2 * q,
            splitting_at: m,
            conductor_note: None,
        }
    }

    #[test]
    fn embedding_numbers() {
        let s = sf();
        assert_eq!(
            embedding_count(&rec(2, 17, LocalSplitting::Ramified), &s, 1).unwrap(),
            34
        );
        assert_eq!(
            embedding_count(&rec(3, 9, LocalSplitting::Inert), &s, 2).unwrap(),
            18
        );
        assert_eq!(
            embedding_count(&rec(32, 1, LocalSplitting::Ramified), &s, 1).unwrap(),
            2
        );
        assert_eq!(
            embedding_count(&rec(3, 9, LocalSplitting::Split), &s, 1).unwrap(),
            0
        );
    }

    #[test]
    fn counts_with_index_rule() {
        let s = sf();
        let recs = [
            rec(2, 17, LocalSplitting::Ramified),
            rec(3, 9, LocalSplitting::Inert),
            rec(32, 1, LocalSplitting::Ramified),
        ];
        let e: Vec<u64> = [2, 3, 32]
            .iter()
            .map(|&q| elliptic_count(q, &recs, &s, None).unwrap().count)
            .collect();
        assert_eq!(e, [17, 9, 1]);
        let split = [rec(3, 9, LocalSplitting::Split)];
        assert_eq!(elliptic_count(3, &split, &s, None).unwrap().count, 0);
    }

    #[test]
    fn missing_entry_and_unsupported_index() {
        let s = alloc::vec![PrimeRecord::new(3, 1, "q3")];
        assert!(embedding_count(&rec(3, 1, LocalSplitting::Inert), &s, 1).is_err());
        let two = alloc::vec![PrimeRecord::new(2, 1, "p"), PrimeRecord::new(3, 1, "q3")];
        let mut r = rec(3, 1, LocalSplitting::Inert);
        r.splitting_at.insert("q3".into(), LocalSplitting::Ramified);
        assert!(matches!(norm_index(&r, &two), Err(Error::Unsupported(_))));
    }
}
