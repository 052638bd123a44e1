//! Signatures of maximal arithmetic Fuchsian groups from Borel's volume
//! formula and elliptic counts, plus Weierstrass point arithmetic.

pub mod cm;
pub mod scan;
pub mod signature;
pub mod volume;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use cm::{
    elliptic_count, embedding_count, norm_index, CMOrderRecord, EllipticCount, LocalSplitting,
};
pub use scan::{coverage, elliptic_orders_scan, Coverage, ScanReport, SplittingTable};
pub use signature::{
    genus_from_volume, hyperelliptic_certificate, solve_genus, weierstrass_report,
    CertificateReport, Signature, Verdict, WeierstrassReport,
};
pub use volume::{borel_volume, default_borel_index, VolumeComponents, VolumeResult};

use crate::error::{Error, Result};
use crate::exactalg::numfield::NumberField;
use crate::exactalg::poly::{rat, rat_to_f64, Rat};
use crate::exactalg::zeta::ZetaValue;
use crate::quatarith::PrimeRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct SignatureRun {
    pub signature: Signature,
    pub volume: VolumeResult,
    pub counts: Vec<EllipticCount>,
}

/// Signature of the normalizer of a maximal order: elliptic counts from the
/// CM records, genus from the Borel volume.
pub fn maximal_signature(
    nf: &Arc<NumberField>,
    s_f: &[PrimeRecord],
    records: &[CMOrderRecord],
    borel_index: u64,
    zeta: &ZetaValue,
) -> Result<SignatureRun> {
    let mut orders: Vec<u64> = records.iter().map(|r| r.q).collect();
    orders.sort_unstable();
    orders.dedup();
    let counts: Vec<EllipticCount> = orders
        .iter()
        .map(|&q| elliptic_count(q, records, s_f, None))
        .collect::<Result<_>>()?;
    let elliptic: Vec<(u64, u64)> = counts.iter().map(|c| (c.q, c.count)).collect();
    let mut volume = borel_volume(nf, s_f, borel_index, zeta)?;
    let (g, exact) = genus_from_volume(&volume, &elliptic)?;
    volume.exact = Some(exact);
    Ok(SignatureRun {
        signature: Signature::new(g, &elliptic)?,
        volume,
        counts,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverCheck {
    pub claimed: Signature,
    pub claimed_vol: Rat,
    pub base_vol: Rat,
    pub ratio: Rat,
    pub numeric_ok: bool,
}

/// A claimed signature for a subgroup of index `degree` must have exactly
/// `degree` times the volume of the base signature, and match the Borel
/// volume computed at the corresponding index.
pub fn check_cover(
    claimed: &Signature,
    base: &Signature,
    degree: u64,
    volume: Option<&VolumeResult>,
) -> Result<CoverCheck> {
    let claimed_vol = claimed.vol_over_2pi();
    let base_vol = base.vol_over_2pi();
    let ratio = &claimed_vol / &base_vol;
    if ratio != rat(degree as i64) {
        return Err(Error::InconsistentSignature(format!(
            "{claimed} has volume {claimed_vol}, expected {degree} x {base_vol}"
        )));
    }
    let numeric_ok = match volume {
        Some(v) => v.contains(rat_to_f64(&claimed_vol)),
        None => true,
    };
    Ok(CoverCheck {
        claimed: claimed.clone(),
        claimed_vol,
        base_vol,
        ratio,
        numeric_ok,
    })
}
