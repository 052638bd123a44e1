//! Factorisation over Z and Q: squarefree decomposition, Hensel lifting of a
//! modular factorisation, and subset recombination (Zassenhaus).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::arith::{is_prime_u64, primes_up_to};
use super::field::{FiniteField, PolyOps, PrimeField};
use super::poly::{Int, IntPoly, Rat, UniPoly};

/// Squarefree decomposition over Q (Yun): monic factors with multiplicities.
pub fn squarefree_q(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = UniPoly::gcd(&f, &df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = UniPoly::gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn to_fp(f: &IntPoly, p: u64) -> Vec<u64> {
    f.reduce_mod(p)
}

fn from_fp(v: &[u64]) -> IntPoly {
    IntPoly::from_residues(v)
}

/// Lift `f = lc * g * h (mod p)` with `g, h` monic and coprime mod p to the
/// same identity modulo `p^a`. Returns the lifted monic `(g, h)`.
pub fn hensel_lift_pair(f: &IntPoly, g: &[u64], h: &[u64], p: u64, a: u32) -> (IntPoly, IntPoly) {
    let fp = PrimeField::new(p);
    let lc = f.lc().unwrap().clone();
    let lc_inv = fp
        .inv(&super::arith::to_residue(&lc, p))
        .expect("lc invertible mod p");
    let (gg, s, t) = fp.p_xgcd(g, h);
    debug_assert!(fp.p_is_one(&gg), "factors not coprime mod p");
    let mut gz = from_fp(g);
    let mut hz = from_fp(h);
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    for _ in 1..a {
        let prod = &(&gz * &hz).scale(&lc);
        let err = f - prod;
        let e: Vec<Int> = err.coeffs().iter().map(|c| c / &pk).collect();
        let e = IntPoly::new(e);
        let e1 = fp.p_scale(&to_fp(&e, p), &lc_inv);
        let gm = to_fp(&gz, p);
        let hm = to_fp(&hz, p);
        let (q, dg) = fp.p_divrem(&fp.p_mul(&t, &e1), &gm);
        let dh = fp.p_add(&fp.p_mul(&s, &e1), &fp.p_mul(&q, &hm));
        gz = &gz + &from_fp(&dg).scale(&pk);
        hz = &hz + &from_fp(&dh).scale(&pk);
        pk *= &pb;
    }
    (gz, hz)
}

/// Lift a full modular factorisation `f = lc * prod(factors) (mod p)` of pairwise
/// coprime monic factors to monic factors modulo `p^a` (binary tree).
pub fn hensel_lift_multi(f: &IntPoly, factors: &[Vec<u64>], p: u64, a: u32) -> Vec<IntPoly> {
    let fp = PrimeField::new(p);
    if factors.len() == 1 {
        // monic lift: lc^{-1} f mod p^a
        let m = BigInt::from(p).pow(a);
        let lc = f.lc().unwrap();
        let inv = lc.modinv(&m).expect("lc invertible");
        return vec![f.scale(&inv).mod_floor(&m)];
    }
    let mid = factors.len() / 2;
    let g: Vec<u64> = factors[..mid]
        .iter()
        .fold(vec![1], |acc, x| fp.p_mul(&acc, x));
    let h: Vec<u64> = factors[mid..]
        .iter()
        .fold(vec![1], |acc, x| fp.p_mul(&acc, x));
    let (gz, hz) = hensel_lift_pair(f, &g, &h, p, a);
    let m = BigInt::from(p).pow(a);
    let gz = gz.mod_floor(&m);
    let hz = hz.mod_floor(&m);
    let mut out = hensel_lift_multi(&gz, &factors[..mid], p, a);
    out.extend(hensel_lift_multi(&hz, &factors[mid..], p, a));
    out
}

fn choose_prime(f: &IntPoly) -> (u64, Vec<Vec<u64>>) {
    let lc = f.lc().unwrap().clone();
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in primes_up_to(20_000).into_iter().skip(1) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = PrimeField::new(p);
        let fbar = to_fp(f, p);
        if fp.p_gcd(&fbar, &fp.p_deriv(&fbar)).len() != 1 {
            continue;
        }
        let facs: Vec<Vec<u64>> = fp.factor(&fbar).into_iter().map(|(g, _)| g).collect();
        let better = best.as_ref().is_none_or(|(_, b)| facs.len() < b.len());
        if better {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("a good prime exists below 20000")
}

/// Factor a squarefree primitive integer polynomial of positive degree.
fn factor_squarefree_primitive(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // coefficient bound for lc * (any factor)
    let lc = f.lc().unwrap().abs();
    let bound: Int = (Int::one() << n) * f.norm2_ceil() * &lc;
    let target = bound * 2 + 1;
    let mut a = 1u32;
    let mut pa = BigInt::from(p);
    while pa <= target {
        pa *= p;
        a += 1;
    }
    let lifted = hensel_lift_multi(f, &modular, p, a);
    recombine(f, lifted, &pa)
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &Int) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let r = lifted.len();
        let mut found = None;
        let mut idx: Vec<usize> = (0..s).collect();
        'subsets: loop {
            let lc = rest.lc().unwrap().clone();
            let mut cand = IntPoly::new(vec![lc.clone()]);
            for &i in &idx {
                cand = (&cand * &lifted[i]).sym_mod(m);
            }
            // cheap constant-term test before the full division
            let c0 = cand.coeff(0);
            let r0 = rest.coeff(0) * &lc;
            let plausible = if c0.is_zero() {
                r0.is_zero()
            } else {
                (&r0 % &c0).is_zero()
            };
            if plausible {
                let g = cand.primitive();
                if let Some(q) = rest.div_exact(&g) {
                    found = Some((g, q, idx.clone()));
                    break 'subsets;
                }
            }
            // next combination
            let mut k = s;
            loop {
                if k == 0 {
                    break 'subsets;
                }
                k -= 1;
                if idx[k] < r - s + k {
                    idx[k] += 1;
                    for j in k + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
        match found {
            Some((g, q, used)) => {
                out.push(g);
                rest = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !used.contains(i))
                    .map(|(_, x)| x)
                    .collect();
            }
            None => s += 1,
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest.primitive());
    }
    out
}

/// Factorisation of an integer polynomial: content (with sign) and primitive
/// irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor_int_poly(f: &IntPoly) -> (Int, Vec<(IntPoly, u32)>) {
    if f.is_zero() {
        return (Int::zero(), Vec::new());
    }
    let mut c = f.content();
    if f.lc().unwrap().is_negative() {
        c = -c;
    }
    let prim = f.div_scalar_exact(&c);
    let mut out: Vec<(IntPoly, u32)> = Vec::new();
    for (g, m) in squarefree_q(&prim.to_rat()) {
        let (_, gz) = g.primitive_part();
        for h in factor_squarefree_primitive(&gz) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    (c, out)
}

/// Irreducible factors over Q, monic, with multiplicities.
pub fn factor_over_q(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let (_, p) = f.primitive_part();
    factor_int_poly(&p)
        .1
        .into_iter()
        .map(|(g, m)| (g.to_rat().monic(), m))
        .collect()
}

pub fn is_irreducible_over_q(f: &IntPoly) -> bool {
    let (_, fs) = factor_int_poly(f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Largest primes below 2^31, used by multimodular routines.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

pub fn rat_poly_from_roots(roots: &[i64]) -> UniPoly {
    roots.iter().fold(UniPoly::one(), |acc, &r| {
        &acc * &UniPoly::new(vec![-Rat::from_integer(BigInt::from(r)), Rat::one()])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(IntPoly, u32)]) -> IntPoly {
        fs.iter().fold(IntPoly::one(), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| &a * g)
        })
    }

    #[test]
    fn swinnerton_dyer_like_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        let f = IntPoly::from_i64s(&[1, 0, -10, 0, 1]);
        let (_, fs) = factor_int_poly(&f);
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn products_recombine() {
        let a = IntPoly::from_i64s(&[1, -4, -4, 1, 1]);
        let b = IntPoly::from_i64s(&[167, -229, 1, 1]);
        let c = IntPoly::from_i64s(&[-2, 0, 1]);
        let f = &(&(&a * &b) * &c) * &c;
        let (cont, fs) = factor_int_poly(&f.scale(&Int::from(-6)));
        assert_eq!(cont, Int::from(-6));
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
        assert_eq!(fs[0], (c, 2));
    }

    #[test]
    fn nonmonic_factors() {
        let a = IntPoly::from_i64s(&[1, 0, 3]);
        let b = IntPoly::from_i64s(&[-5, 2]);
        let c = IntPoly::from_i64s(&[7, 1, 0, 4]);
        let f = &(&a * &b) * &c;
        let (_, fs) = factor_int_poly(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn cyclotomic_64_factors() {
        // x^32 - 1 = prod_{d | 32} Phi_d
        let mut v = vec![0i64; 33];
        v[0] = -1;
        v[32] = 1;
        let (_, fs) = factor_int_poly(&IntPoly::from_i64s(&v));
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2, 4, 8, 16]);
    }

    #[test]
    fn harbater_polynomial_is_irreducible() {
        let h = IntPoly::from_i64s(&[
            68, -2, -128, 16, 80, 40, 32, -80, -32, 64, 0, -16, 16, 8, 0, 0, -2, 1,
        ]);
        assert!(is_irreducible_over_q(&h));
    }
}
