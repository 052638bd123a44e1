//! Signatures, the genus from a volume, and Weierstrass point arithmetic.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::volume::VolumeResult;
use crate::error::{invalid, Error, Result};
use crate::exactalg::poly::{rat, rat_frac, Rat};

/// (g; e_1^{m_1}, ..., e_r^{m_r})
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub genus: u64,
    /// (order, multiplicity), sorted by order, multiplicities positive
    pub elliptic: Vec<(u64, u64)>,
}

impl Signature {
    pub fn new(genus: u64, elliptic: &[(u64, u64)]) -> Result<Self> {
        Ok(Signature {
            genus,
            elliptic: normalize(elliptic)?,
        })
    }

    /// 2g - 2 + Σ m (1 - 1/e)
    pub fn vol_over_2pi(&self) -> Rat {
        rat(2 * self.genus as i64 - 2) + elliptic_defect(&self.elliptic)
    }
}

fn normalize(elliptic: &[(u64, u64)]) -> Result<Vec<(u64, u64)>> {
    let mut v: Vec<(u64, u64)> = Vec::new();
    for &(e, m) in elliptic {
        if e < 2 {
            return Err(invalid(format!("elliptic order {e} must be at least 2")));
        }
        if m == 0 {
            continue;
        }
        match v.iter_mut().find(|x| x.0 == e) {
            Some(x) => x.1 += m,
            None => v.push((e, m)),
        }
    }
    v.sort_unstable();
    Ok(v)
}

fn elliptic_defect(elliptic: &[(u64, u64)]) -> Rat {
    elliptic
        .iter()
        .map(|&(e, m)| rat(m as i64) * (rat(1) - rat_frac(1, e as i64)))
        .sum()
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.genus)?;
        for (i, (e, m)) in self.elliptic.iter().enumerate() {
            write!(f, "{}{}^{}", if i == 0 { "; " } else { ", " }, e, m)?;
        }
        write!(f, ")")
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("cannot parse signature {s:?}"));
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (g, rest) = match body.split_once(';') {
            Some((g, r)) => (g, r),
            None => (body, ""),
        };
        let genus = g.trim().parse::<u64>().map_err(|_| bad())?;
        let mut ell = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (e, m) = match part.split_once('^') {
                Some((e, m)) => (e.trim(), m.trim()),
                None => (part, "1"),
            };
            ell.push((e.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?));
        }
        Signature::new(genus, &ell)
    }
}

/// The unique g >= 0 with 2g - 2 + Σ(1 - 1/e_i) = vol.
pub fn solve_genus(vol_over_2pi: &Rat, elliptic: &[(u64, u64)]) -> Result<u64> {
    let ell = normalize(elliptic)?;
    let two_g = vol_over_2pi + rat(2) - elliptic_defect(&ell);
    if !two_g.is_integer() || two_g.to_integer().is_odd() || two_g.is_negative() {
        return Err(Error::InconsistentSignature(format!(
            "2g = {two_g} from volume {vol_over_2pi} and {}",
            Signature {
                genus: 0,
                elliptic: ell
            }
        )));
    }
    (two_g.to_integer() / crate::exactalg::poly::Int::from(2))
        .to_u64()
        .ok_or_else(|| Error::InconsistentSignature("genus out of range".into()))
}

/// Genus from a numerical volume: the integer g whose exact volume lies
/// within the reported error bound. Returns g and the exact volume.
pub fn genus_from_volume(v: &VolumeResult, elliptic: &[(u64, u64)]) -> Result<(u64, Rat)> {
    let ell = normalize(elliptic)?;
    let defect = elliptic_defect(&ell);
    let d = defect.numer().to_f64().unwrap() / defect.denom().to_f64().unwrap();
    let lo = libm::ceil((v.vol_over_2pi - v.error_bound + 2.0 - d) / 2.0).max(0.0) as u64;
    let hi = libm::floor((v.vol_over_2pi + v.error_bound + 2.0 - d) / 2.0);
    if hi < lo as f64 {
        return Err(Error::InconsistentSignature(format!(
            "no integral genus within {:e} of volume {} with {}",
            v.error_bound,
            v.vol_over_2pi,
            Signature {
                genus: 0,
                elliptic: ell
            }
        )));
    }
    if hi > lo as f64 {
        return Err(Error::InconsistentSignature(format!(
            "genus ambiguous: error bound {:e} admits {}..={}",
            v.error_bound, lo, hi
        )));
    }
    let exact = rat(2 * lo as i64 - 2) + defect;
    Ok((lo, exact))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassReport {
    pub genus: u64,
    pub min_count: u64,
    pub max_count: u64,
    pub weight_budget: u64,
    /// the curve is hyperelliptic iff #W equals this
    pub hyperelliptic_count: u64,
}

pub fn weierstrass_report(g: u64) -> Result<WeierstrassReport> {
    if g < 2 {
        return Err(invalid(format!(
            "Weierstrass points need genus at least 2, got {g}"
        )));
    }
    Ok(WeierstrassReport {
        genus: g,
        min_count: 2 * g + 2,
        max_count: g * g * g - g,
        weight_budget: g * (g * g - 1),
        hyperelliptic_count: 2 * g + 2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Hyperelliptic { weierstrass_count: u64 },
    NotHyperelliptic { at_least: u64 },
    NoVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub genus: u64,
    pub verdict: Verdict,
    pub steps: Vec<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Hyperelliptic { weierstrass_count } => {
                write!(f, "hyperelliptic, #W = {weierstrass_count}")
            }
            Verdict::NotHyperelliptic { at_least } => {
                write!(f, "not hyperelliptic, #W >= {at_least}")
            }
            Verdict::NoVerdict => f.write_str("no verdict"),
        }
    }
}

/// Counting argument: `cm_count` CM points are Weierstrass points forming
/// one Galois orbit of size `galois_degree`, so #W >= galois_degree.
pub fn hyperelliptic_certificate(
    g: u64,
    cm_count: u64,
    galois_degree: u64,
) -> Result<CertificateReport> {
    let w = weierstrass_report(g)?;
    let mut steps = Vec::new();
    let done = |verdict, steps| {
        Ok(CertificateReport {
            genus: g,
            verdict,
            steps,
        })
    };
    if g == 2 {
        steps.push("every genus 2 curve is hyperelliptic; #W = 6".to_string());
        return done(
            Verdict::Hyperelliptic {
                weierstrass_count: 6,
            },
            steps,
        );
    }
    steps.push(format!(
        "genus {g}: {} <= #W <= {}, total weight {}",
        w.min_count, w.max_count, w.weight_budget
    ));
    if cm_count == 0 {
        steps.push("no CM Weierstrass points supplied; criterion does not apply".to_string());
        return done(Verdict::NoVerdict, steps);
    }
    if !galois_degree.is_multiple_of(cm_count) {
        steps.push(format!(
            "{cm_count} CM points do not divide the Galois orbit size {galois_degree}; inputs inconsistent"
        ));
        return done(Verdict::NoVerdict, steps);
    }
    steps.push(format!(
        "{cm_count} CM points generate a Galois orbit of {galois_degree} Weierstrass points, so #W >= {galois_degree}"
    ));
    let forced = galois_degree;
    if forced > w.max_count {
        steps.push(format!(
            "forced count {forced} exceeds g^3 - g = {}; inputs inconsistent",
            w.max_count
        ));
        return done(Verdict::NoVerdict, steps);
    }
    if forced < w.min_count {
        steps.push(format!(
            "forced count {forced} is below 2g + 2 = {}; nothing follows",
            w.min_count
        ));
        return done(Verdict::NoVerdict, steps);
    }
    if forced == w.hyperelliptic_count {
        steps.push(format!(
            "forced count equals 2g + 2 = {forced}: the curve is hyperelliptic"
        ));
        return done(
            Verdict::Hyperelliptic {
                weierstrass_count: forced,
            },
            steps,
        );
    }
    steps.push(format!(
        "#W >= {forced} > 2g + 2 = {}: not hyperelliptic",
        w.min_count
    ));
    done(Verdict::NotHyperelliptic { at_least: forced }, steps)
}
