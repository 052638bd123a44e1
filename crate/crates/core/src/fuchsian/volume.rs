//! Borel's covolume formula for the normalizer of a maximal order.

use alloc::format;
use alloc::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{invalid, Error, Result};
use crate::exactalg::numfield::NumberField;
use crate::exactalg::poly::{Int, Rat};
use crate::exactalg::splitting::field_discriminant;
use crate::exactalg::zeta::ZetaValue;
use crate::quatarith::PrimeRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeComponents {
    pub degree: usize,
    pub discriminant: Int,
    pub disc_pow_three_halves: f64,
    pub zeta: f64,
    pub zeta_error: f64,
    pub four_pi_sq_pow_n: f64,
    /// [H : F^{x2}]
    pub index_h: u64,
    /// Π_{q ∈ S_f} (Nq - 1)
    pub norm_product: Int,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeResult {
    pub vol_over_2pi: f64,
    pub error_bound: f64,
    /// set once a signature has pinned the value
    pub exact: Option<Rat>,
    pub components: VolumeComponents,
}

impl VolumeResult {
    /// 8π D^{3/2} ζ Π(Nq - 1) / ((4π²)^n [H : F^{x2}]) / 2π, from the components.
    pub fn reassemble(&self) -> f64 {
        let c = &self.components;
        4.0 * c.disc_pow_three_halves * c.zeta * c.norm_product.to_f64().unwrap_or(f64::INFINITY)
            / (c.four_pi_sq_pow_n * c.index_h as f64)
    }

    pub fn contains(&self, x: f64) -> bool {
        libm::fabs(self.vol_over_2pi - x) <= self.error_bound
    }
}

/// Default [H : F^{x2}] under narrow class number one.
pub fn default_borel_index(s_f: &[PrimeRecord]) -> u64 {
    1u64 << s_f.len()
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return libm::log(x.to_f64().unwrap());
    }
    let shift = bits - 60;
    libm::log((x >> shift as usize).to_f64().unwrap()) + shift as f64 * core::f64::consts::LN_2
}

pub fn borel_volume(
    nf: &Arc<NumberField>,
    s_f: &[PrimeRecord],
    index_h: u64,
    zeta: &ZetaValue,
) -> Result<VolumeResult> {
    if !nf.is_totally_real() {
        return Err(invalid("Borel volume needs a totally real field"));
    }
    if index_h == 0 {
        return Err(invalid("[H : F^x2] must be positive"));
    }
    let disc = match nf.supplied_discriminant() {
        Some(d) => d.clone(),
        None => field_discriminant(nf)?.ok_or_else(|| {
            Error::Unsupported(format!("{}: field discriminant not certified", nf.name()))
        })?,
    };
    let mut norm_product = Int::one();
    for pr in s_f {
        let nq = BigInt::from(pr.p).pow(pr.f);
        norm_product *= nq - 1;
    }
    let n = nf.degree();
    let pi = core::f64::consts::PI;
    let ln_four_pi_sq = libm::log(4.0 * pi * pi);
    let ln_d = ln_big(&disc);
    let ln_v = libm::log(4.0) + 1.5 * ln_d + libm::log(zeta.value) + ln_big(&norm_product)
        - n as f64 * ln_four_pi_sq
        - libm::log(index_h as f64);
    let v = libm::exp(ln_v);
    let rel = zeta.error_bound / zeta.value + 1e-12;
    Ok(VolumeResult {
        vol_over_2pi: v,
        error_bound: v * rel,
        exact: None,
        components: VolumeComponents {
            degree: n,
            discriminant: disc,
            disc_pow_three_halves: libm::exp(1.5 * ln_d),
            zeta: zeta.value,
            zeta_error: zeta.error_bound,
            four_pi_sq_pow_n: libm::exp(n as f64 * ln_four_pi_sq),
            index_h,
            norm_product,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::IntPoly;
    use crate::exactalg::zeta::zeta_at_2;

    #[test]
    fn triangle_group_2_4_6() {
        let q = Arc::new(NumberField::new("Q", IntPoly::from_i64s(&[0, 1])).unwrap());
        let z = zeta_at_2(&q, 100_000).unwrap();
        let sf = [PrimeRecord::new(2, 1, "2"), PrimeRecord::new(3, 1, "3")];
        let v = borel_volume(&q, &sf, default_borel_index(&sf), &z).unwrap();
        // 1 - (1/2 + 1/4 + 1/6)
        assert!(v.contains(1.0 / 12.0));
        assert!(libm::fabs(v.vol_over_2pi - 1.0 / 12.0) < 1e-4);
        assert!(libm::fabs(v.reassemble() - v.vol_over_2pi) <= 1e-12 * v.vol_over_2pi);
    }

    #[test]
    fn positive_without_ramification() {
        let q = Arc::new(NumberField::new("Q", IntPoly::from_i64s(&[0, 1])).unwrap());
        let z = zeta_at_2(&q, 1000).unwrap();
        let v = borel_volume(&q, &[], 1, &z).unwrap();
        assert!(v.vol_over_2pi > 0.0 && v.components.norm_product == Int::one());
        // PSL_2(Z): 2 * 0 - 2 + 1/2 + 2/3 + 1
        assert!(v.contains(1.0 / 6.0));
    }
}
