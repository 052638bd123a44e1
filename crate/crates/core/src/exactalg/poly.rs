//! Dense univariate polynomials over Q and Z, coefficients low-to-high.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial over Q. Leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(
            f,
            self.coeffs
                .iter()
                .map(|c| (c.is_zero(), c.is_negative(), c.abs())),
        )
    }
}

fn write_poly<T: fmt::Display + PartialEq + One>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (bool, bool, T)> + ExactSizeIterator,
) -> fmt::Result {
    if terms.len() == 0 {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, (zero, neg, mag)) in terms.enumerate().rev() {
        if zero {
            continue;
        }
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let unit = mag.is_one();
        match i {
            0 => write!(f, "{}", mag)?,
            1 if unit => write!(f, "x")?,
            1 => write!(f, "{}*x", mag)?,
            _ if unit => write!(f, "x^{}", i)?,
            _ => write!(f, "{}*x^{}", mag, i)?,
        }
    }
    Ok(())
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }
    pub fn x() -> Self {
        UniPoly::new(vec![Rat::zero(), Rat::one()])
    }
    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }
    pub fn monomial(c: Rat, d: usize) -> Self {
        let mut v = vec![Rat::zero(); d + 1];
        v[d] = c;
        UniPoly::new(v)
    }
    pub fn from_i64s(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| rat(x)).collect())
    }
    pub fn from_ints(c: &[Int]) -> Self {
        UniPoly::new(c.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lc(&self) -> Option<&Rat> {
        self.coeffs.last()
    }
    pub fn scale(&self, c: &Rat) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: v }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().unwrap().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                r[i - dd + j] -= t;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }
    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }
    /// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
    pub fn xgcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lc().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }
    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }
    /// self(g(x))
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UniPoly::constant(c.clone());
        }
        acc
    }
    pub fn pow(&self, e: u32) -> UniPoly {
        let mut r = UniPoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
    pub fn is_squarefree(&self) -> bool {
        UniPoly::gcd(self, &self.derivative()).degree() == Some(0)
    }
    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> Int {
        self.coeffs
            .iter()
            .fold(Int::one(), |acc, c| acc.lcm(c.denom()))
    }
    /// Writes `self = c * P` with `P` primitive integral, positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, IntPoly) {
        if self.is_zero() {
            return (Rat::zero(), IntPoly::zero());
        }
        let d = self.denominator();
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(d.clone())).to_integer())
            .collect();
        let p = IntPoly::new(ints);
        let mut cont = p.content();
        if p.lc().unwrap().is_negative() {
            cont = -cont;
        }
        let prim = p.div_scalar_exact(&cont);
        (Rat::new(cont, d), prim)
    }
    /// Integer polynomial if every coefficient is integral.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(
                self.coeffs.iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }
    /// Resultant via the Euclidean recursion over Q.
    pub fn resultant(f: &UniPoly, g: &UniPoly) -> Rat {
        if f.is_zero() || g.is_zero() {
            return Rat::zero();
        }
        let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
        if n == 0 {
            return pow_rat(g.lc().unwrap(), m);
        }
        if m == 0 {
            return pow_rat(f.lc().unwrap(), n);
        }
        let r = f.rem(g);
        if r.is_zero() {
            return Rat::zero();
        }
        let k = r.degree().unwrap();
        // Res(f,g) = (-1)^{mn} lc(g)^{m-k} Res(g, r)
        let mut val = pow_rat(g.lc().unwrap(), m - k) * UniPoly::resultant(g, &r);
        if (m * n) % 2 == 1 {
            val = -val;
        }
        val
    }
    pub fn discriminant(&self) -> Rat {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Rat::one();
        }
        let r = UniPoly::resultant(self, &self.derivative()) / self.lc().unwrap();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }
}

pub fn pow_rat(a: &Rat, e: usize) -> Rat {
    let mut r = Rat::one();
    for _ in 0..e {
        r *= a;
    }
    r
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    // scale to keep precision for huge numerators/denominators
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = nb - db - 60;
    let q: BigInt = if shift > 0 {
        n / (d << (shift as usize))
    } else {
        (n << ((-shift) as usize)) / d
    };
    let qf = q.to_f64().unwrap_or(0.0);
    qf * libm::pow(2.0, shift as f64)
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}
impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}
impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}
impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Polynomial over Z.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(
            f,
            self.coeffs
                .iter()
                .map(|c| (c.is_zero(), c.is_negative(), c.abs())),
        )
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }
    pub fn one() -> Self {
        IntPoly::new(vec![Int::one()])
    }
    pub fn x() -> Self {
        IntPoly::new(vec![Int::zero(), Int::one()])
    }
    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| Int::from(x)).collect())
    }
    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lc(&self) -> Option<&Int> {
        self.coeffs.last()
    }
    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }
    pub fn to_rat(&self) -> UniPoly {
        UniPoly::from_ints(&self.coeffs)
    }
    pub fn content(&self) -> Int {
        self.coeffs.iter().fold(Int::zero(), |acc, c| acc.gcd(c))
    }
    pub fn scale(&self, c: &Int) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
    pub fn div_scalar_exact(&self, c: &Int) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a / c).collect())
    }
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }
    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Int::from(i))
                .collect(),
        )
    }
    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| super::arith::to_residue(c, p))
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
    pub fn from_residues(c: &[u64]) -> Self {
        IntPoly::new(c.iter().map(|&x| Int::from(x)).collect())
    }
    /// Coefficientwise symmetric reduction modulo `m`.
    pub fn sym_mod(&self, m: &Int) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| super::arith::symmetric_mod(c, m))
                .collect(),
        )
    }
    pub fn mod_floor(&self, m: &Int) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }
    /// Exact division by `d` over Z if it divides, else `None`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let lc = d.lc().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![Int::zero(); n - dd + 1];
        for i in (dd..=n).rev() {
            if r[i].is_zero() {
                continue;
            }
            let (c, rem) = r[i].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            q[i - dd] = c;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }
    /// Division by a monic polynomial over Z.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("zero divisor");
        assert!(d.is_monic());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut q = vec![Int::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = r[i].clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (IntPoly::new(q), IntPoly::new(r))
    }
    pub fn resultant(f: &IntPoly, g: &IntPoly) -> Int {
        UniPoly::resultant(&f.to_rat(), &g.to_rat()).to_integer()
    }
    pub fn discriminant(&self) -> Int {
        self.to_rat().discriminant().to_integer()
    }
    /// Sum of absolute values of coefficients squared, rounded up: the 2-norm bound.
    pub fn norm2_ceil(&self) -> Int {
        let s: Int = self.coeffs.iter().map(|c| c * c).sum();
        s.sqrt() + Int::one()
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}
impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}
impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![Int::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let f = UniPoly::from_i64s(&[1, -4, -4, 1, 1]);
        let g = UniPoly::from_i64s(&[3, 0, 2]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(&(&q * &g) + &r, f);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn discriminants_of_fixtures() {
        // x^2 - 2 -> 8
        assert_eq!(IntPoly::from_i64s(&[-2, 0, 1]).discriminant(), Int::from(8));
        // L_f has discriminant 1125
        assert_eq!(
            IntPoly::from_i64s(&[1, -4, -4, 1, 1]).discriminant(),
            Int::from(1125)
        );
        // F = x^8-8x^6+20x^4-16x^2+2 -> 2^31
        let f = IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1]);
        assert_eq!(f.discriminant(), Int::from(1u64 << 31));
    }

    #[test]
    fn display_is_readable() {
        let f = IntPoly::from_i64s(&[1, -4, 0, 1]);
        assert_eq!(alloc::format!("{}", f), "x^3 - 4*x + 1");
    }

    #[test]
    fn primitive_part_roundtrip() {
        let f = UniPoly::new(vec![rat_frac(1, 2), rat_frac(-3, 4), rat(3)]);
        let (c, p) = f.primitive_part();
        assert_eq!(p.to_rat().scale(&c), f);
        assert_eq!(p.content(), Int::one());
    }

    #[test]
    fn xgcd_bezout() {
        let a = UniPoly::from_i64s(&[-1, 0, 1]);
        let b = UniPoly::from_i64s(&[1, 1]);
        let (g, s, t) = UniPoly::xgcd(&a, &b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, b);
    }
}
