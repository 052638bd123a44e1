//! Absolute number fields Q[x]/(f) with f monic integral irreducible.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::linalg::{charpoly_rat, det, RatMatrix};
use super::poly::{rat_to_f64, Int, IntPoly, Rat, UniPoly};
use crate::error::{invalid, Error, Result};

/// Default ceiling for real-embedding precision (bits).
pub const MAX_PRECISION_BITS: u32 = 512;
const START_PRECISION_BITS: u32 = 64;

/// An isolating interval `[lo, hi]` for a real root; `lo == hi` means exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn times(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    poly: IntPoly,
    qpoly: UniPoly,
    r1: usize,
    r2: usize,
    /// Isolating intervals of the real roots in ascending order.
    real_roots: Vec<RootInterval>,
    /// `place_order[v]` is the index into `real_roots` of place `v`.
    place_order: Vec<usize>,
    /// `real_roots` narrowed to START_PRECISION_BITS, reused by sign evaluation
    narrowed: Vec<RootInterval>,
    poly_disc: Int,
    supplied_disc: Option<Int>,
}

impl NumberField {
    /// Builds the field, checking monicity and irreducibility and isolating real roots.
    pub fn new(name: impl Into<String>, poly: IntPoly) -> Result<Self> {
        let n = poly
            .degree()
            .ok_or_else(|| invalid("defining polynomial is zero"))?;
        if n == 0 {
            return Err(invalid("defining polynomial must have positive degree"));
        }
        if !poly.is_monic() {
            return Err(invalid("defining polynomial must be monic"));
        }
        if n > 1 && !super::zfactor::is_irreducible_over_q(&poly) {
            return Err(invalid("defining polynomial is reducible over Q"));
        }
        let qpoly = poly.to_rat();
        let real_roots = isolate_real_roots(&qpoly);
        let r1 = real_roots.len();
        if !(n - r1).is_multiple_of(2) {
            return Err(invalid("root count parity mismatch"));
        }
        let poly_disc = poly.discriminant();
        let narrowed = real_roots
            .iter()
            .map(|iv| refine(&qpoly, iv, START_PRECISION_BITS))
            .collect();
        Ok(NumberField {
            name: name.into(),
            poly,
            qpoly,
            r1,
            r2: (n - r1) / 2,
            place_order: (0..r1).collect(),
            real_roots,
            narrowed,
            poly_disc,
            supplied_disc: None,
        })
    }

    /// Attach a discriminant from input data; checked against the computed one
    /// where the computation is certified.
    pub fn with_discriminant(mut self, d: Int) -> Result<Self> {
        if let Some(c) = super::splitting::field_discriminant(&self)? {
            if c != d {
                return Err(invalid(alloc::format!(
                    "supplied discriminant {} disagrees with computed {}",
                    d,
                    c
                )));
            }
        }
        self.supplied_disc = Some(d);
        Ok(self)
    }

    /// Reorder real places: `order[v]` is the ascending-root index of place `v`.
    pub fn with_place_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..self.r1).collect::<Vec<_>>() {
            return Err(invalid(
                "place order must be a permutation of the real roots",
            ));
        }
        self.place_order = order;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }
    pub fn qpoly(&self) -> &UniPoly {
        &self.qpoly
    }
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }
    pub fn is_totally_real(&self) -> bool {
        self.r1 == self.degree()
    }
    pub fn poly_discriminant(&self) -> &Int {
        &self.poly_disc
    }
    pub fn supplied_discriminant(&self) -> Option<&Int> {
        self.supplied_disc.as_ref()
    }
    pub fn place_order(&self) -> &[usize] {
        &self.place_order
    }
    /// Isolating interval of the root attached to real place `v`.
    pub fn real_place(&self, v: usize) -> &RootInterval {
        &self.real_roots[self.place_order[v]]
    }
    /// Floating approximations of the real roots in place order.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        (0..self.r1)
            .map(|v| {
                let iv = refine(&self.qpoly, self.real_place(v), 64);
                iv.midpoint_f64()
            })
            .collect()
    }
}

/// Element of a number field: coordinates on the power basis 1, θ, …, θ^{n-1}.
#[derive(Clone, PartialEq, Eq)]
pub struct NFElem {
    field: Arc<NumberField>,
    coords: Vec<Rat>,
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NFElem({})", self.as_poly())
    }
}

impl NFElem {
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rat>) -> Result<Self> {
        let n = field.degree();
        if coords.len() > n {
            return Err(invalid(alloc::format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                n
            )));
        }
        let mut c = coords;
        c.resize(n, Rat::zero());
        Ok(NFElem {
            field: field.clone(),
            coords: c,
        })
    }
    pub fn from_poly(field: &Arc<NumberField>, p: &UniPoly) -> Self {
        let r = p.rem(field.qpoly());
        let mut c = r.coeffs().to_vec();
        c.resize(field.degree(), Rat::zero());
        NFElem {
            field: field.clone(),
            coords: c,
        }
    }
    pub fn from_i64s(field: &Arc<NumberField>, c: &[i64]) -> Self {
        NFElem::from_poly(field, &UniPoly::from_i64s(c))
    }
    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> Self {
        NFElem::from_poly(field, &UniPoly::constant(r))
    }
    pub fn generator(field: &Arc<NumberField>) -> Self {
        NFElem::from_poly(field, &UniPoly::x())
    }
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
    pub fn as_poly(&self) -> UniPoly {
        UniPoly::new(self.coords.clone())
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }
    pub fn inverse(&self) -> Option<NFElem> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = UniPoly::xgcd(&self.as_poly(), self.field.qpoly());
        debug_assert_eq!(g.degree(), Some(0));
        Some(NFElem::from_poly(&self.field, &s))
    }
    pub fn pow(&self, e: u32) -> NFElem {
        let mut r = NFElem::from_i64s(&self.field, &[1]);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
    /// Matrix of multiplication by `self` acting on row vectors of coordinates.
    pub fn mult_matrix(&self) -> RatMatrix {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(n);
        let mut b = NFElem::from_i64s(&self.field, &[1]);
        let theta = NFElem::generator(&self.field);
        for _ in 0..n {
            rows.push((&b * self).coords.clone());
            b = &b * &theta;
        }
        rows
    }
    pub fn norm(&self) -> Rat {
        det(&self.mult_matrix())
    }
    pub fn trace(&self) -> Rat {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }
    pub fn charpoly(&self) -> UniPoly {
        charpoly_rat(&self.mult_matrix())
    }
    /// Integral iff the characteristic polynomial has integer coefficients.
    pub fn is_integral(&self) -> bool {
        self.charpoly().coeffs().iter().all(|c| c.is_integer())
    }

    /// Signs under the real embeddings in place order, escalating precision
    /// from 64 bits by doubling up to `max_bits`.
    pub fn real_signs_with(&self, max_bits: u32) -> Result<Vec<Sign>> {
        let nf = &self.field;
        let r1 = nf.r1;
        if self.is_zero() {
            return Err(Error::PossibleZeroEmbedding {
                place: 0,
                bits: START_PRECISION_BITS,
            });
        }
        let h = self.as_poly();
        let mut out = vec![None; r1];
        let mut bits = START_PRECISION_BITS;
        loop {
            let threshold = Rat::new(Int::one(), Int::one() << (bits / 2) as usize);
            for v in 0..r1 {
                if out[v].is_some() {
                    continue;
                }
                let iv = refine(&nf.qpoly, &nf.narrowed[nf.place_order[v]], bits);
                let (lo, hi) = eval_interval(&h, &iv.lo, &iv.hi);
                if lo > threshold {
                    out[v] = Some(Sign::Plus);
                } else if hi < -threshold.clone() {
                    out[v] = Some(Sign::Minus);
                }
            }
            if let Some(v) = out.iter().position(|s| s.is_none()) {
                if bits >= max_bits {
                    return Err(Error::PossibleZeroEmbedding { place: v, bits });
                }
                bits = (bits * 2).min(max_bits.max(START_PRECISION_BITS));
            } else {
                return Ok(out.into_iter().map(|s| s.unwrap()).collect());
            }
        }
    }
    pub fn real_signs(&self) -> Result<Vec<Sign>> {
        self.real_signs_with(MAX_PRECISION_BITS)
    }
    /// Floating values under the real embeddings in place order.
    pub fn real_values_f64(&self) -> Vec<f64> {
        let h = self.as_poly();
        self.field
            .real_roots_f64()
            .iter()
            .map(|&x| h.eval_f64(x))
            .collect()
    }
}

impl<'a> Add<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn add(self, o: &NFElem) -> NFElem {
        NFElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}
impl<'a> Sub<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn sub(self, o: &NFElem) -> NFElem {
        NFElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}
impl<'a> Mul<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn mul(self, o: &NFElem) -> NFElem {
        NFElem::from_poly(&self.field, &(&self.as_poly() * &o.as_poly()))
    }
}
impl Neg for &NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        NFElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

fn sturm_sequence(f: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let k = seq.len();
        if seq[k - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[k - 2].rem(&seq[k - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[UniPoly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Isolating intervals for the real roots of a squarefree polynomial, ascending.
pub fn isolate_real_roots(f: &UniPoly) -> Vec<RootInterval> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let lc = f.lc().unwrap().abs();
    let m = f.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let mut bound = Rat::one();
    while bound <= &m + Rat::one() {
        bound *= Rat::from_integer(BigInt::from(2));
    }
    let seq = sturm_sequence(f);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&seq, &a) as i64 - sign_changes(&seq, &b) as i64;
        if count == 0 {
            continue;
        }
        if count == 1 {
            // root in (a, b]
            if f.eval(&b).is_zero() {
                out.push(RootInterval {
                    lo: b.clone(),
                    hi: b,
                });
            } else {
                out.push(RootInterval { lo: a, hi: b });
            }
            continue;
        }
        let mid = (&a + &b) / Rat::from_integer(BigInt::from(2));
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Bisect an isolating interval until its width is at most 2^{-bits}.
pub fn refine(f: &UniPoly, iv: &RootInterval, bits: u32) -> RootInterval {
    if iv.lo == iv.hi {
        return iv.clone();
    }
    let eps = Rat::new(Int::one(), Int::one() << bits as usize);
    let two = Rat::from_integer(BigInt::from(2));
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    let mut flo = f.eval(&lo);
    if flo.is_zero() {
        return RootInterval {
            lo: lo.clone(),
            hi: lo,
        };
    }
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / &two;
        let fm = f.eval(&mid);
        if fm.is_zero() {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if fm.is_positive() == flo.is_positive() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    RootInterval { lo, hi }
}

/// Interval Horner evaluation of `h` over `[lo, hi]`.
pub fn eval_interval(h: &UniPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut a = Rat::zero();
    let mut b = Rat::zero();
    for c in h.coeffs().iter().rev() {
        let p = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = p.iter().min().unwrap().clone();
        let mx = p.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn field_f() -> Arc<NumberField> {
        Arc::new(
            NumberField::new("F", IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1])).unwrap(),
        )
    }

    #[test]
    fn f_is_totally_real() {
        let f = field_f();
        assert_eq!(f.signature(), (8, 0));
        let roots = f.real_roots_f64();
        // roots are 2cos((2j+1) pi / 16)
        let expect = libm::cos(7.0 * core::f64::consts::PI / 16.0) * 2.0;
        assert!(roots.iter().any(|r| libm::fabs(r - expect) < 1e-12));
    }

    #[test]
    fn signature_of_imaginary_quadratic() {
        let k = NumberField::new("K", IntPoly::from_i64s(&[1, 1, 1])).unwrap();
        assert_eq!(k.signature(), (0, 1));
    }

    #[test]
    fn reducible_rejected() {
        assert!(NumberField::new("bad", IntPoly::from_i64s(&[-1, 0, 1])).is_err());
        assert!(NumberField::new("bad", IntPoly::from_i64s(&[1, 0, 2])).is_err());
    }

    #[test]
    fn unit_signs() {
        let f = field_f();
        let one = NFElem::from_i64s(&f, &[1]);
        assert!(one.real_signs().unwrap().iter().all(|&s| s == Sign::Plus));
        let m1 = NFElem::from_i64s(&f, &[-1]);
        assert!(m1.real_signs().unwrap().iter().all(|&s| s == Sign::Minus));
        assert!(NFElem::from_i64s(&f, &[0]).real_signs().is_err());
    }

    #[test]
    fn inverse_and_norm() {
        let f = field_f();
        let a = NFElem::from_i64s(&f, &[2, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, NFElem::from_i64s(&f, &[1]));
        // N(2 + alpha) = f(-2) = 2
        assert_eq!(a.norm(), Rat::from_integer(BigInt::from(2)));
        assert_eq!(NFElem::generator(&f).trace(), Rat::zero());
    }
}
