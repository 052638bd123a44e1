//! ζ_F(2) by a truncated Euler product with a rigorous tail bound.

use alloc::string::ToString;
use alloc::sync::Arc;
use num_bigint::BigInt;
use num_traits::Zero;

use super::arith::primes_up_to;
use super::field::{PolyOps, PrimeField};
use super::numfield::NumberField;
use super::splitting::split_prime;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaValue {
    /// Euler product over p <= prime_bound (a lower bound for totally real fields).
    pub value: f64,
    /// The true value lies in [value, value + error_bound].
    pub error_bound: f64,
    pub prime_bound: u64,
    pub primes_used: usize,
}

/// Σ_{p > B} Σ_{P | p} -log(1 - Np^{-2}) <= n Σ_{p > B} 2 p^{-2} < 2n / B.
pub fn tail_log_bound(degree: usize, prime_bound: u64) -> f64 {
    2.0 * degree as f64 / prime_bound as f64
}

pub fn zeta_at_2(nf: &Arc<NumberField>, prime_bound: u64) -> Result<ZetaValue> {
    if prime_bound < 100 {
        return Err(invalid("prime bound must be at least 100"));
    }
    let f = nf.poly();
    let disc = nf.poly_discriminant().clone();
    let mut log_sum = 0.0f64;
    let primes = primes_up_to(prime_bound);
    for &p in &primes {
        let residue_degrees: alloc::vec::Vec<u32> = if !(&disc % BigInt::from(p)).is_zero() {
            let fp = PrimeField::new(p);
            fp.factor_degrees(&f.reduce_mod(p))
                .into_iter()
                .map(|d| d as u32)
                .collect()
        } else {
            split_prime(nf, p)
                .map_err(|e| Error::SplittingFailed {
                    p,
                    reason: e.to_string(),
                })?
                .factors
                .iter()
                .map(|x| x.f)
                .collect()
        };
        for fdeg in residue_degrees {
            let x = libm::pow(p as f64, -2.0 * fdeg as f64);
            log_sum -= libm::log1p(-x);
        }
    }
    let value = libm::exp(log_sum);
    let tail = libm::expm1(tail_log_bound(nf.degree(), prime_bound));
    let rounding = value * 1e-12;
    Ok(ZetaValue {
        value,
        error_bound: value * tail + rounding,
        prime_bound,
        primes_used: primes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::IntPoly;

    #[test]
    fn riemann_zeta_two() {
        let q = Arc::new(NumberField::new("Q", IntPoly::from_i64s(&[0, 1])).unwrap());
        let z = zeta_at_2(&q, 100_000).unwrap();
        let pi2_6 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
        assert!(z.value <= pi2_6 + 1e-12);
        assert!(z.value + z.error_bound >= pi2_6);
        assert!(z.error_bound < 1e-4);
    }

    #[test]
    fn monotone_in_bound() {
        let k = Arc::new(NumberField::new("Q(sqrt2)", IntPoly::from_i64s(&[-2, 0, 1])).unwrap());
        let a = zeta_at_2(&k, 200).unwrap();
        let b = zeta_at_2(&k, 2000).unwrap();
        assert!(b.value >= a.value);
        assert!(b.error_bound < a.error_bound);
    }

    #[test]
    fn real_quadratic_closed_form() {
        // ζ(2) L(2, χ_8) = π^4 / (48 √2)
        let k = Arc::new(NumberField::new("Q(sqrt2)", IntPoly::from_i64s(&[-2, 0, 1])).unwrap());
        let z = zeta_at_2(&k, 100_000).unwrap();
        let pi = core::f64::consts::PI;
        let exact = pi * pi * pi * pi / (48.0 * libm::sqrt(2.0));
        assert!(z.value <= exact + 1e-12 && z.value + z.error_bound >= exact);
    }

    /// Product of L(2, χ) over even characters mod 32, via Hurwitz sums.
    fn even_character_product() -> f64 {
        let hurwitz = |a: f64| -> f64 {
            // Σ_{k>=0} (32k + a)^{-2} with an Euler-Maclaurin tail
            let n = 2000;
            let mut s = 0.0;
            for k in 0..n {
                let t = 32.0 * k as f64 + a;
                s += 1.0 / (t * t);
            }
            let x = 32.0 * n as f64 + a;
            s + 1.0 / (32.0 * x) + 1.0 / (2.0 * x * x) + 32.0 / (6.0 * x * x * x)
        };
        // (Z/32)^* = <-1> x <5>; even characters factor through <5> of order 8
        let mut log5 = [0usize; 32];
        let mut g = 1u64;
        for e in 0..8 {
            log5[g as usize] = e;
            log5[(32 - g) as usize] = e;
            g = g * 5 % 32;
        }
        let mut prod = 1.0;
        for j in 0..8 {
            let (mut re, mut im) = (0.0, 0.0);
            for a in (1..32).step_by(2) {
                let ang = 2.0 * core::f64::consts::PI * (j * log5[a]) as f64 / 8.0;
                let h = hurwitz(a as f64);
                re += libm::cos(ang) * h;
                im += libm::sin(ang) * h;
            }
            prod *= libm::sqrt(re * re + im * im);
        }
        // the trivial character mod 32 misses its Euler factor at 2
        prod * 4.0 / 3.0
    }

    #[test]
    fn real_cyclotomic_32() {
        let oracle = even_character_product();
        let f = Arc::new(
            NumberField::new("F", IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1])).unwrap(),
        );
        let z = zeta_at_2(&f, 200_000).unwrap();
        assert!(z.value <= oracle + 1e-10, "{} vs {}", z.value, oracle);
        assert!(z.value + z.error_bound >= oracle);
        assert!((oracle - 1.347926199381398).abs() < 1e-9);
    }
}
