//! Finite fields F_p and F_{p^k}, dense polynomials over them, and
//! factorisation (squarefree, distinct-degree, Cantor-Zassenhaus).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::arith::{inv_mod, mul_mod};
use crate::error::{invalid, Error, Result};

/// Field interface shared by prime fields and their extensions.
pub trait FiniteField {
    type Elem: Clone + PartialEq + Eq + Ord + fmt::Debug;

    fn characteristic(&self) -> u64;
    fn ext_degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.ext_degree() as u32)
    }
    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, &BigUint::from(self.characteristic()))
    }
    /// Inverse Frobenius.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut r = a.clone();
        for _ in 1..self.ext_degree() {
            r = self.frobenius(&r);
        }
        r
    }
}

/// The prime field F_p, elements as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(super::arith::is_prime_u64(p));
        PrimeField { p }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn ext_degree(&self) -> usize {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            inv_mod(*a, self.p)
        }
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.next_u64() % self.p
    }
    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// Element of F_{p^k}: coordinates on the power basis of the field modulus.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub Vec<u64>);

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// F_{p^k} = F_p[y]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    base: PrimeField,
    k: usize,
    modulus: Vec<u64>,
}

impl GaloisField {
    /// The field with the fixed modulus for `(p, k)`: a Conway-style table for
    /// small cases, else the lexicographically smallest monic irreducible.
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !super::arith::is_prime_u64(p) {
            return Err(invalid(alloc::format!("{} is not prime", p)));
        }
        if k == 0 {
            return Err(invalid("extension degree must be positive"));
        }
        let modulus = match super::conway::conway_modulus(p, k) {
            Some(m) => m,
            None => smallest_irreducible(PrimeField::new(p), k),
        };
        Ok(GaloisField {
            base: PrimeField::new(p),
            k,
            modulus,
        })
    }
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p);
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 {
            return Err(invalid("modulus must be monic of positive degree"));
        }
        if !base.is_irreducible(&modulus) {
            return Err(invalid("field modulus is reducible"));
        }
        Ok(GaloisField { base, k, modulus })
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn base(&self) -> PrimeField {
        self.base
    }
    /// The class of y, a root of the modulus.
    pub fn generator(&self) -> FqElem {
        let mut c = vec![0; self.k];
        if self.k == 1 {
            c[0] = self.base.neg(&self.modulus[0]);
        } else {
            c[1] = 1;
        }
        FqElem(c)
    }
    pub fn elem_from_poly(&self, poly: &[u64]) -> FqElem {
        let r = self.base.p_rem(poly, &self.modulus);
        let mut c = vec![0; self.k];
        for (i, x) in r.into_iter().enumerate() {
            c[i] = x;
        }
        FqElem(c)
    }
    /// Multiplicative order of `a` (nonzero).
    pub fn mult_order(&self, a: &FqElem) -> BigUint {
        let n = self.order() - BigUint::one();
        let mut ord = n.clone();
        for (q, _) in super::arith::factor_biguint(&n) {
            while (&ord % &q).is_zero() {
                let cand = &ord / &q;
                if self.pow(a, &cand) == self.one() {
                    ord = cand;
                } else {
                    break;
                }
            }
        }
        ord
    }
    /// Every element, in lexicographic coordinate order (small fields only).
    pub fn elements(&self) -> Vec<FqElem> {
        let p = self.base.p;
        let total = p.pow(self.k as u32);
        (0..total)
            .map(|mut n| {
                let mut c = vec![0; self.k];
                for x in c.iter_mut() {
                    *x = n % p;
                    n /= p;
                }
                FqElem(c)
            })
            .collect()
    }
}

impl FiniteField for GaloisField {
    type Elem = FqElem;
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn ext_degree(&self) -> usize {
        self.k
    }
    fn zero(&self) -> FqElem {
        FqElem(vec![0; self.k])
    }
    fn one(&self) -> FqElem {
        let mut c = vec![0; self.k];
        c[0] = 1 % self.base.p;
        FqElem(c)
    }
    fn from_u64(&self, n: u64) -> FqElem {
        let mut c = vec![0; self.k];
        c[0] = n % self.base.p;
        FqElem(c)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        )
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.base.sub(x, y))
                .collect(),
        )
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let k = self.k;
        let p = self.base.p;
        let mut t = vec![0u128; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                t[i + j] = (t[i + j] + x as u128 * y as u128) % p as u128;
            }
        }
        let mut t: Vec<u64> = t.into_iter().map(|x| x as u64).collect();
        for i in (k..2 * k - 1).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let s = mul_mod(c, self.modulus[j], p);
                t[i - k + j] = self.base.sub(&t[i - k + j], &s);
            }
            t[i] = 0;
        }
        t.truncate(k);
        FqElem(t)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let mut av = a.0.clone();
        self.base.p_trim(&mut av);
        let (g, s, _) = self.base.p_xgcd(&av, &self.modulus);
        if g.len() != 1 {
            return None;
        }
        Some(self.elem_from_poly(&s))
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> FqElem {
        FqElem((0..self.k).map(|_| rng.next_u64() % self.base.p).collect())
    }
}

/// Lexicographically smallest monic irreducible of degree `k`, comparing the
/// coefficient vector from the top non-leading coefficient down.
pub fn smallest_irreducible(base: PrimeField, k: usize) -> Vec<u64> {
    let p = base.p();
    let mut c = vec![0u64; k];
    loop {
        let mut f: Vec<u64> = c.iter().rev().copied().collect();
        f.push(1);
        if f[0] != 0 && base.is_irreducible(&f) {
            return f;
        }
        // increment c as a base-p number, c[k-1] least significant
        let mut i = k;
        loop {
            if i == 0 {
                unreachable!("irreducible polynomials exist in every degree");
            }
            i -= 1;
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
        }
    }
}

/// Deterministic RNG used by every randomised routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial arithmetic and factorisation over any [`FiniteField`].
/// Polynomials are coefficient vectors, low-to-high, without trailing zeros.
pub trait PolyOps: FiniteField {
    fn p_trim(&self, v: &mut Vec<Self::Elem>) {
        while v.last().is_some_and(|c| self.is_zero(c)) {
            v.pop();
        }
    }
    fn p_add(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut v: Vec<Self::Elem> = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.p_trim(&mut v);
        v
    }
    fn p_sub(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut v: Vec<Self::Elem> = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.p_trim(&mut v);
        v
    }
    fn p_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = self.add(&v[i + j], &self.mul(x, y));
            }
        }
        self.p_trim(&mut v);
        v
    }
    fn p_scale(&self, a: &[Self::Elem], c: &Self::Elem) -> Vec<Self::Elem> {
        let mut v: Vec<Self::Elem> = a.iter().map(|x| self.mul(x, c)).collect();
        self.p_trim(&mut v);
        v
    }
    fn p_monic(&self, a: &[Self::Elem]) -> Vec<Self::Elem> {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let inv = self.inv(l).expect("nonzero leading coefficient");
                self.p_scale(a, &inv)
            }
        }
    }
    fn p_is_one(&self, a: &[Self::Elem]) -> bool {
        a.len() == 1 && a[0] == self.one()
    }
    fn p_divrem(&self, a: &[Self::Elem], d: &[Self::Elem]) -> (Vec<Self::Elem>, Vec<Self::Elem>) {
        assert!(!d.is_empty(), "division by zero polynomial");
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(&d[dd]).expect("invertible leading coefficient");
        let mut r = a.to_vec();
        let mut q = vec![self.zero(); a.len() - dd];
        for i in (dd..a.len()).rev() {
            if self.is_zero(&r[i]) {
                continue;
            }
            let c = self.mul(&r[i], &inv);
            for (j, dc) in d.iter().enumerate() {
                let t = self.mul(&c, dc);
                r[i - dd + j] = self.sub(&r[i - dd + j], &t);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        self.p_trim(&mut r);
        self.p_trim(&mut q);
        (q, r)
    }
    fn p_rem(&self, a: &[Self::Elem], d: &[Self::Elem]) -> Vec<Self::Elem> {
        self.p_divrem(a, d).1
    }
    fn p_div_exact(&self, a: &[Self::Elem], d: &[Self::Elem]) -> Vec<Self::Elem> {
        let (q, r) = self.p_divrem(a, d);
        debug_assert!(r.is_empty());
        q
    }
    /// Monic gcd.
    fn p_gcd(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        self.p_trim(&mut x);
        self.p_trim(&mut y);
        while !y.is_empty() {
            let r = self.p_rem(&x, &y);
            x = y;
            y = r;
        }
        self.p_monic(&x)
    }
    /// (g, s, t) with s*a + t*b = g monic.
    fn p_xgcd(
        &self,
        a: &[Self::Elem],
        b: &[Self::Elem],
    ) -> (Vec<Self::Elem>, Vec<Self::Elem>, Vec<Self::Elem>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![self.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![self.one()]);
        while !r1.is_empty() {
            let (q, r) = self.p_divrem(&r0, &r1);
            let s2 = self.p_sub(&s0, &self.p_mul(&q, &s1));
            let t2 = self.p_sub(&t0, &self.p_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.inv(&l).unwrap();
                (
                    self.p_scale(&r0, &inv),
                    self.p_scale(&s0, &inv),
                    self.p_scale(&t0, &inv),
                )
            }
        }
    }
    fn p_mulmod(&self, a: &[Self::Elem], b: &[Self::Elem], m: &[Self::Elem]) -> Vec<Self::Elem> {
        self.p_rem(&self.p_mul(a, b), m)
    }
    fn p_powmod(&self, base: &[Self::Elem], e: &BigUint, m: &[Self::Elem]) -> Vec<Self::Elem> {
        let mut r = self.p_rem(&[self.one()], m);
        let b = self.p_rem(base, m);
        for i in (0..e.bits()).rev() {
            r = self.p_mulmod(&r, &r, m);
            if e.bit(i) {
                r = self.p_mulmod(&r, &b, m);
            }
        }
        r
    }
    fn p_deriv(&self, a: &[Self::Elem]) -> Vec<Self::Elem> {
        let mut v: Vec<Self::Elem> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(c, &self.from_u64(i as u64)))
            .collect();
        self.p_trim(&mut v);
        v
    }
    fn p_eval(&self, a: &[Self::Elem], x: &Self::Elem) -> Self::Elem {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }
    fn p_pow(&self, a: &[Self::Elem], e: u32) -> Vec<Self::Elem> {
        let mut r = vec![self.one()];
        for _ in 0..e {
            r = self.p_mul(&r, a);
        }
        r
    }

    /// Squarefree factorisation of a monic polynomial: pairs (g, m), g squarefree
    /// and pairwise coprime, product of g^m equal to the input.
    fn squarefree_factorization(&self, f: &[Self::Elem]) -> Vec<(Vec<Self::Elem>, u32)> {
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let p = self.characteristic() as u32;
        let df = self.p_deriv(f);
        let mut c = self.p_gcd(f, &df);
        let mut w = self.p_div_exact(f, &c);
        let mut i = 1u32;
        while !self.p_is_one(&w) {
            let y = self.p_gcd(&w, &c);
            let fac = self.p_div_exact(&w, &y);
            if fac.len() > 1 {
                out.push((fac, i));
            }
            w = y;
            c = self.p_div_exact(&c, &w);
            i += 1;
        }
        if c.len() > 1 {
            // c is a p-th power
            let root: Vec<Self::Elem> = c
                .iter()
                .step_by(p as usize)
                .map(|x| self.pth_root(x))
                .collect();
            for (g, m) in self.squarefree_factorization(&root) {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial.
    fn distinct_degree(&self, f: &[Self::Elem]) -> Vec<(Vec<Self::Elem>, usize)> {
        let q = self.order();
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let x = vec![self.zero(), self.one()];
        let mut h = self.p_rem(&x, &rest);
        let mut i = 1;
        while rest.len() > 2 * i {
            h = self.p_powmod(&h, &q, &rest);
            let g = self.p_gcd(&rest, &self.p_sub(&h, &x));
            if g.len() > 1 {
                rest = self.p_div_exact(&rest, &g);
                h = self.p_rem(&h, &rest);
                out.push((g, i));
            }
            i += 1;
        }
        if rest.len() > 1 {
            let d = rest.len() - 1;
            out.push((rest, d));
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    fn equal_degree(
        &self,
        f: &[Self::Elem],
        d: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<Vec<Self::Elem>> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let p = self.characteristic();
        loop {
            let mut a: Vec<Self::Elem> = (0..n).map(|_| self.random(rng)).collect();
            self.p_trim(&mut a);
            if a.len() <= 1 {
                continue;
            }
            let b = if p == 2 {
                // absolute trace to F_2
                let steps = self.ext_degree() * d;
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..steps {
                    t = self.p_mulmod(&t, &t, f);
                    s = self.p_add(&s, &t);
                }
                s
            } else {
                let e = (self.order().pow(d as u32) - BigUint::one()) >> 1;
                let t = self.p_powmod(&a, &e, f);
                self.p_sub(&t, &[self.one()])
            };
            let g = self.p_gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.p_div_exact(f, &g);
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorisation into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients). The leading coefficient is dropped.
    fn factor(&self, f: &[Self::Elem]) -> Vec<(Vec<Self::Elem>, u32)> {
        let mut rng = seeded_rng(0x5eed_f00d);
        let mut out = Vec::new();
        let mut f = f.to_vec();
        self.p_trim(&mut f);
        if f.len() <= 1 {
            return out;
        }
        let f = self.p_monic(&f);
        for (g, m) in self.squarefree_factorization(&f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        // merge equal factors (can only arise from distinct squarefree layers)
        let mut merged: Vec<(Vec<Self::Elem>, u32)> = Vec::new();
        for (g, m) in out {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        merged
    }

    fn is_irreducible(&self, f: &[Self::Elem]) -> bool {
        if f.len() < 2 {
            return false;
        }
        let f = self.p_monic(f);
        let sq = self.p_gcd(&f, &self.p_deriv(&f));
        if sq.len() > 1 {
            return false;
        }
        let dd = self.distinct_degree(&f);
        dd.len() == 1 && dd[0].1 == f.len() - 1
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, ascending.
    fn factor_degrees(&self, f: &[Self::Elem]) -> Vec<usize> {
        let f = self.p_monic(f);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(&f) {
            for _ in 0..(g.len() - 1) / d {
                out.push(d);
            }
        }
        out.sort_unstable();
        out
    }

    /// Distinct roots in the field, sorted.
    fn roots(&self, f: &[Self::Elem]) -> Vec<Self::Elem> {
        let mut r: Vec<Self::Elem> = self
            .factor(f)
            .into_iter()
            .filter(|(g, _)| g.len() == 2)
            .map(|(g, _)| self.neg(&g[0]))
            .collect();
        r.sort();
        r
    }
}

impl<F: FiniteField> PolyOps for F {}

/// Reduction of a rational polynomial modulo `ell` into F_ell.
pub fn reduce_rat_poly(poly: &super::poly::UniPoly, ell: u64) -> Result<Vec<u64>> {
    use num_traits::ToPrimitive;
    let fp = PrimeField::new(ell);
    let m = num_bigint::BigInt::from(ell);
    let mut out = Vec::with_capacity(poly.coeffs().len());
    for c in poly.coeffs() {
        let num = super::arith::to_residue(c.numer(), ell);
        let den = num_integer::Integer::mod_floor(c.denom(), &m);
        let den = den.to_u64().unwrap_or(0);
        let inv = fp
            .inv(&den)
            .ok_or_else(|| invalid(alloc::format!("denominator divisible by {}", ell)))?;
        out.push(fp.mul(&num, &inv));
    }
    fp.p_trim(&mut out);
    Ok(out)
}

/// An irreducible factor over F_{ell^k} with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqFactor {
    pub coeffs: Vec<FqElem>,
    pub multiplicity: u32,
}

impl FqFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Factor a rational polynomial over F_{ell^k}.
pub fn factor_poly_mod(
    poly: &super::poly::UniPoly,
    ell: u64,
    k: usize,
) -> Result<(GaloisField, Vec<FqFactor>)> {
    if poly.is_zero() {
        return Err(invalid("cannot factor the zero polynomial"));
    }
    let reduced = reduce_rat_poly(poly, ell)?;
    if reduced.len() != poly.coeffs().len() {
        return Err(Error::LeadingCoefficientVanishes(ell));
    }
    let gf = GaloisField::new(ell, k)?;
    let lifted: Vec<FqElem> = reduced.iter().map(|&c| gf.from_u64(c)).collect();
    let factors = gf
        .factor(&lifted)
        .into_iter()
        .map(|(coeffs, multiplicity)| FqFactor {
            coeffs,
            multiplicity,
        })
        .collect();
    Ok((gf, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::UniPoly;

    #[test]
    fn lf_inert_mod_2() {
        let lf = UniPoly::from_i64s(&[1, -4, -4, 1, 1]);
        let (_, f) = factor_poly_mod(&lf, 2, 1).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].degree(), 4);
        assert_eq!(f[0].multiplicity, 1);
    }

    #[test]
    fn trivial_factorizations() {
        let (_, f) = factor_poly_mod(&UniPoly::x(), 2, 1).unwrap();
        assert_eq!(
            f,
            vec![FqFactor {
                coeffs: vec![FqElem(vec![0]), FqElem(vec![1])],
                multiplicity: 1
            }]
        );
        let (_, f) = factor_poly_mod(&UniPoly::from_i64s(&[-1, 0, 1]), 2, 1).unwrap();
        assert_eq!(
            f,
            vec![FqFactor {
                coeffs: vec![FqElem(vec![1]), FqElem(vec![1])],
                multiplicity: 2
            }]
        );
    }

    #[test]
    fn leading_coefficient_rejected() {
        let f = UniPoly::from_i64s(&[1, 1, 2]);
        assert_eq!(
            factor_poly_mod(&f, 2, 1).unwrap_err(),
            Error::LeadingCoefficientVanishes(2)
        );
    }

    #[test]
    fn x2_x_1_splits_over_f4() {
        let f = UniPoly::from_i64s(&[1, 1, 1]);
        let (gf, fs) = factor_poly_mod(&f, 2, 2).unwrap();
        assert_eq!(fs.len(), 2);
        let roots = gf.roots(&[gf.one(), gf.one(), gf.one()]);
        assert_eq!(roots.len(), 2);
        assert_eq!(gf.frobenius(&roots[0]), roots[1]);
    }

    #[test]
    fn extension_inverse_and_order() {
        for (p, k) in [(2u64, 4usize), (3, 2), (5, 3), (2, 11), (3, 9)] {
            let gf = GaloisField::new(p, k).unwrap();
            assert!(gf.base().is_irreducible(gf.modulus()));
            let g = gf.generator();
            let inv = gf.inv(&g).unwrap();
            assert_eq!(gf.mul(&g, &inv), gf.one());
            assert_eq!(gf.pow(&g, &gf.order()), g);
        }
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        // (x+1)^4 (x^2+x+1)^3 over F_2 has zero-derivative parts
        let fp = PrimeField::new(2);
        let a = fp.p_pow(&[1, 1], 4);
        let b = fp.p_pow(&[1, 1, 1], 3);
        let f = fp.p_mul(&a, &b);
        let fac = fp.factor(&f);
        assert_eq!(fac, vec![(vec![1, 1], 4), (vec![1, 1, 1], 3)]);
    }
}
