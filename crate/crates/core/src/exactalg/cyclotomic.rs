//! Cyclotomic and real-cyclotomic polynomials, and membership of
//! 2cos(2π/q) in real 2-power cyclotomic fields.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Int, IntPoly};
use crate::error::{invalid, Result};

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut r = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> IntPoly {
    let mut num = vec![Int::zero(); m as usize + 1];
    num[0] = -Int::one();
    num[m as usize] = Int::one();
    let mut f = IntPoly::new(num);
    for d in divisors(m) {
        if d < m {
            f = f
                .div_exact(&cyclotomic_poly(d))
                .expect("cyclotomic divisibility");
        }
    }
    f
}

/// Minimal polynomial of 2cos(2π/m).
pub fn real_cyclotomic_minpoly(m: u64) -> IntPoly {
    match m {
        1 => return IntPoly::from_i64s(&[-2, 1]),
        2 => return IntPoly::from_i64s(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic_poly(m);
    let d = phi.degree().unwrap() / 2;
    // T_j(z) with x^j + x^{-j} = T_j(x + 1/x)
    let mut t: Vec<IntPoly> = vec![IntPoly::from_i64s(&[2]), IntPoly::x()];
    for j in 2..=d {
        let next = &(&IntPoly::x() * &t[j - 1]) - &t[j - 2];
        t.push(next);
    }
    let mut psi = IntPoly::new(vec![phi.coeff(d)]);
    for j in 1..=d {
        psi = &psi + &t[j].scale(&phi.coeff(d + j));
    }
    psi
}

/// Chebyshev-type polynomial with x^j + x^{-j} = T_j(x + x^{-1}).
pub fn dickson_t(j: u64) -> IntPoly {
    let mut a = IntPoly::from_i64s(&[2]);
    if j == 0 {
        return a;
    }
    let mut b = IntPoly::x();
    for _ in 1..j {
        let next = &(&IntPoly::x() * &b) - &a;
        a = b;
        b = next;
    }
    b
}

/// Reduces q ≡ 2 (mod 4) to q/2, which leaves 2cos(2π/q) generating the same field.
fn reduce_q(q: u64) -> u64 {
    if q % 4 == 2 {
        q / 2
    } else {
        q
    }
}

/// Is 2cos(2π/q) in Q(ζ_n)^+ for n a power of two at least 8?
pub fn cyclotomic_membership(q: u64, n: u64) -> Result<bool> {
    if q < 3 {
        return Err(invalid("q must be at least 3"));
    }
    if n < 8 || !n.is_power_of_two() {
        return Err(invalid("n must be a power of two, at least 8"));
    }
    let q = reduce_q(q);
    Ok(matches!(q, 1 | 2 | 3 | 4 | 6) || n.is_multiple_of(q))
}

/// If the defining polynomial is that of Q(ζ_{2^k})^+ (k ≥ 3), returns 2^k.
pub fn real_two_power_conductor(poly: &IntPoly) -> Option<u64> {
    let n = poly.degree()? as u64;
    if !n.is_power_of_two() {
        return None;
    }
    let m = 4 * n;
    if m < 8 {
        return None;
    }
    if *poly == real_cyclotomic_minpoly(m) {
        Some(m)
    } else {
        None
    }
}

/// N_{Q(ζ_q)^+/Q}(2 + 2cos(2π/q)), together with [Q(ζ_q)^+ : Q].
pub fn norm_two_plus_cos(q: u64) -> (Int, usize) {
    let psi = real_cyclotomic_minpoly(q);
    let d = psi.degree().unwrap();
    let v = psi.eval(&BigInt::from(-2));
    (if d % 2 == 1 { -v } else { v }, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_minpolys() {
        assert_eq!(real_cyclotomic_minpoly(8), IntPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(real_cyclotomic_minpoly(5), IntPoly::from_i64s(&[-1, 1, 1]));
        assert_eq!(real_cyclotomic_minpoly(3), IntPoly::from_i64s(&[1, 1]));
        assert_eq!(
            real_cyclotomic_minpoly(32),
            IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1])
        );
        assert_eq!(
            real_two_power_conductor(&real_cyclotomic_minpoly(32)),
            Some(32)
        );
        assert_eq!(
            real_two_power_conductor(&IntPoly::from_i64s(&[-3, 0, 1])),
            None
        );
    }

    #[test]
    fn membership_rule() {
        assert!(cyclotomic_membership(3, 32).unwrap());
        assert!(cyclotomic_membership(32, 32).unwrap());
        assert!(!cyclotomic_membership(5, 32).unwrap());
        assert!(!cyclotomic_membership(64, 32).unwrap());
        assert!(cyclotomic_membership(6, 32).unwrap());
        assert!(!cyclotomic_membership(10, 32).unwrap());
        assert!(cyclotomic_membership(3, 7).is_err());
    }

    #[test]
    fn membership_matches_galois_fixing_oracle() {
        // Gal(Q(ζ_32)^+/Q) is (Z/32)^*/±1; 2cos(2π/q) lies in the field iff every
        // a ≡ ±1 (mod 32) prime to lcm(32, q) fixes it numerically.
        for q in 3..=64u64 {
            let c = 2.0 * libm::cos(2.0 * core::f64::consts::PI / q as f64);
            let l = num_integer::lcm(32u64, q);
            let fixed = (1..l)
                .filter(|a| num_integer::gcd(*a, l) == 1 && (a % 32 == 1 || a % 32 == 31))
                .all(|a| {
                    let ca = 2.0 * libm::cos(2.0 * core::f64::consts::PI * a as f64 / q as f64);
                    libm::fabs(ca - c) < 1e-9
                });
            assert_eq!(cyclotomic_membership(q, 32).unwrap(), fixed, "q = {q}");
        }
    }

    #[test]
    fn five_excluded_by_discriminants() {
        // Q(2cos(2π/5)) = Q(√5) ⊂ F would force 5 | disc(F) = 2^31
        let d5 = real_cyclotomic_minpoly(5).discriminant();
        let df = real_cyclotomic_minpoly(32).discriminant();
        assert_eq!(d5, Int::from(5));
        assert!(!(df % Int::from(5)).is_zero());
        assert!(!cyclotomic_membership(5, 32).unwrap());
    }
}
