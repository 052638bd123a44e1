//! Quaternion algebras (a, b / F) over a number field: element arithmetic,
//! ramification checks and Atkin-Lehner ranks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{invalid, Error, Result};
use crate::exactalg::arith::factor_bigint;
use crate::exactalg::field::{PolyOps, PrimeField};
use crate::exactalg::numfield::{NFElem, NumberField, Sign};
use crate::exactalg::splitting::{split_prime, valuation_at, LocalData};

/// A finite prime of the base field, named by the rational prime below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub p: u64,
    /// residue degree
    pub f: u32,
    pub label: String,
    pub trusted: bool,
    pub provenance: Option<String>,
    /// position among the primes above p (ordered as in `split_prime`);
    /// when absent the first prime with residue degree `f` is meant
    pub index: Option<usize>,
}

impl PrimeRecord {
    pub fn new(p: u64, f: u32, label: impl Into<String>) -> Self {
        PrimeRecord {
            p,
            f,
            label: label.into(),
            trusted: false,
            provenance: None,
            index: None,
        }
    }
    pub fn trusted(mut self, provenance: impl Into<String>) -> Self {
        self.trusted = true;
        self.provenance = Some(provenance.into());
        self
    }

    /// Index of this prime among those above p.
    pub fn resolve(&self, nf: &Arc<NumberField>) -> Result<usize> {
        let s = split_prime(nf, self.p)?;
        match self.index {
            Some(i) => match s.factors.get(i) {
                Some(fac) if fac.f == self.f => Ok(i),
                Some(fac) => Err(Error::RamificationMismatch(format!(
                    "{}: prime {} above {} has residue degree {}, record says {}",
                    self.label, i, self.p, fac.f, self.f
                ))),
                None => Err(invalid(format!(
                    "{}: no prime {} above {}",
                    self.label, i, self.p
                ))),
            },
            None => s
                .factors
                .iter()
                .position(|fac| fac.f == self.f)
                .ok_or_else(|| {
                    Error::RamificationMismatch(format!(
                        "{}: no prime above {} with residue degree {}",
                        self.label, self.p, self.f
                    ))
                }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuaternionData {
    base: Arc<NumberField>,
    a: NFElem,
    b: NFElem,
    pub ramified_finite: Vec<PrimeRecord>,
    pub ramified_real: Vec<usize>,
}

/// x0 + x1 i + x2 j + x3 k
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElem {
    pub coords: [NFElem; 4],
}

impl QuaternionData {
    pub fn new(
        a: NFElem,
        b: NFElem,
        ramified_finite: Vec<PrimeRecord>,
        mut ramified_real: Vec<usize>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(a.field(), b.field()) && a.field().poly() != b.field().poly() {
            return Err(invalid("a and b live in different fields"));
        }
        if a.is_zero() || b.is_zero() {
            return Err(invalid("a and b must be nonzero"));
        }
        let base = a.field().clone();
        ramified_real.sort_unstable();
        ramified_real.dedup();
        if let Some(&v) = ramified_real.iter().find(|&&v| v >= base.signature().0) {
            return Err(invalid(format!("real place index {v} out of range")));
        }
        Ok(QuaternionData {
            base,
            a,
            b,
            ramified_finite,
            ramified_real,
        })
    }

    pub fn base(&self) -> &Arc<NumberField> {
        &self.base
    }
    pub fn a(&self) -> &NFElem {
        &self.a
    }
    pub fn b(&self) -> &NFElem {
        &self.b
    }

    pub fn elem(&self, c: [NFElem; 4]) -> QuatElem {
        QuatElem { coords: c }
    }
    pub fn from_base(&self, x: &NFElem) -> QuatElem {
        let z = NFElem::from_i64s(&self.base, &[0]);
        QuatElem {
            coords: [x.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let [x0, x1, x2, x3] = &x.coords;
        let [y0, y1, y2, y3] = &y.coords;
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let r0 = &(&(&(x0 * y0) + &(a * &(x1 * y1))) + &(b * &(x2 * y2))) - &(&ab * &(x3 * y3));
        let r1 = &(&(&(x0 * y1) + &(x1 * y0)) - &(b * &(x2 * y3))) + &(b * &(x3 * y2));
        let r2 = &(&(&(x0 * y2) + &(x2 * y0)) + &(a * &(x1 * y3))) - &(a * &(x3 * y1));
        let r3 = &(&(&(x0 * y3) + &(x3 * y0)) + &(x1 * y2)) - &(x2 * y1);
        QuatElem {
            coords: [r0, r1, r2, r3],
        }
    }

    pub fn add(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        QuatElem {
            coords: core::array::from_fn(|t| &x.coords[t] + &y.coords[t]),
        }
    }

    pub fn scale(&self, c: &NFElem, x: &QuatElem) -> QuatElem {
        QuatElem {
            coords: core::array::from_fn(|t| c * &x.coords[t]),
        }
    }

    pub fn conj(&self, x: &QuatElem) -> QuatElem {
        let [x0, x1, x2, x3] = &x.coords;
        QuatElem {
            coords: [x0.clone(), -x1, -x2, -x3],
        }
    }

    pub fn nrd(&self, x: &QuatElem) -> NFElem {
        let [x0, x1, x2, x3] = &x.coords;
        let ab = &self.a * &self.b;
        &(&(&(x0 * x0) - &(&self.a * &(x1 * x1))) - &(&self.b * &(x2 * x2))) + &(&ab * &(x3 * x3))
    }

    pub fn trd(&self, x: &QuatElem) -> NFElem {
        &x.coords[0] + &x.coords[0]
    }

    /// Real places (in place order) where the algebra ramifies.
    pub fn real_ramification(&self) -> Result<Vec<usize>> {
        real_ramification(&self.a, &self.b)
    }
}

/// v ramifies iff a and b are both negative under v.
pub fn real_ramification(a: &NFElem, b: &NFElem) -> Result<Vec<usize>> {
    let sa = a.real_signs()?;
    let sb = b.real_signs()?;
    Ok((0..sa.len())
        .filter(|&v| sa[v] == Sign::Minus && sb[v] == Sign::Minus)
        .collect())
}

const SYMBOL_PRECISIONS: [u32; 5] = [64, 256, 1024, 2048, 4096];

/// Quadratic character of the residue field F_p[y]/(g).
fn residue_char(p: u64, g: &[u64], u: &[u64]) -> i8 {
    let fp = PrimeField::new(p);
    let f = g.len() - 1;
    let q = BigUint::from(p).pow(f as u32);
    let e = (q - 1u32) >> 1;
    let r = fp.p_powmod(u, &e, g);
    if fp.p_is_one(&r) {
        1
    } else {
        debug_assert!(r.len() == 1 && r[0] == p - 1);
        -1
    }
}

/// (v_P(x), quadratic character of the unit part of x) at the `i`-th prime
/// above the odd rational prime p, which must be unramified in the base field.
pub fn square_class_odd(x: &NFElem, p: u64, i: usize) -> Result<(i64, i8)> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenResidueCharacteristic(format!(
            "prime above {p}: use trusted input"
        )));
    }
    let nf = x.field();
    for &prec in &SYMBOL_PRECISIONS {
        let ld = LocalData::new(nf, p, prec)?;
        let fac = ld
            .splitting
            .factors
            .get(i)
            .ok_or_else(|| invalid(format!("no prime {i} above {p}")))?;
        if let Some((v, u)) = ld.unit_part_unramified(x, i)? {
            return Ok((v, residue_char(p, &fac.residue_poly, &u)));
        }
    }
    Err(Error::SplittingFailed {
        p,
        reason: "valuation exceeds working precision".into(),
    })
}

/// Tame symbol (a, b) at the `i`-th prime above the odd rational prime p.
pub fn hilbert_symbol_at(a: &NFElem, b: &NFElem, p: u64, i: usize) -> Result<i8> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenResidueCharacteristic(format!(
            "prime above {p}: use trusted input"
        )));
    }
    if a.is_zero() || b.is_zero() {
        return Err(invalid("Hilbert symbol of zero"));
    }
    let nf = a.field();
    let s = split_prime(nf, p)?;
    let fac = s
        .factors
        .get(i)
        .ok_or_else(|| invalid(format!("no prime {i} above {p}")))?;
    if fac.e != 1 {
        let va = valuation_at(nf, a, p, i)?;
        let vb = valuation_at(nf, b, p, i)?;
        if va == 0 && vb == 0 {
            return Ok(1);
        }
        return Err(Error::Unsupported(format!(
            "Hilbert symbol at a ramified prime above {p}"
        )));
    }
    let (alpha, ca) = square_class_odd(a, p, i)?;
    let (beta, cb) = square_class_odd(b, p, i)?;
    let (alpha, beta) = (alpha.rem_euclid(2) == 1, beta.rem_euclid(2) == 1);
    let mut sym = 1i8;
    if alpha && beta {
        sym *= residue_char(p, &fac.residue_poly, &[p - 1]);
    }
    if beta {
        sym *= ca;
    }
    if alpha {
        sym *= cb;
    }
    Ok(sym)
}

/// Local Hilbert symbol at an odd prime; +1 iff (a, b) splits there.
pub fn hilbert_symbol_odd(a: &NFElem, b: &NFElem, prime: &PrimeRecord) -> Result<i8> {
    if prime.p.is_multiple_of(2) {
        return Err(Error::EvenResidueCharacteristic(format!(
            "{} lies over 2: use trusted input",
            prime.label
        )));
    }
    let i = prime.resolve(a.field())?;
    hilbert_symbol_at(a, b, prime.p, i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolCheck {
    pub label: String,
    pub p: u64,
    pub index: usize,
    pub symbol: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub finite_count: usize,
    pub real_count: usize,
    pub parity_ok: bool,
    /// real places computed from the signs of a and b
    pub real_computed: Vec<usize>,
    pub real_agree: bool,
    /// listed odd primes confirmed by the symbol
    pub confirmed: Vec<SymbolCheck>,
    /// listed primes accepted on trust, with provenance
    pub trusted: Vec<(String, String)>,
    /// unlisted odd primes dividing a or b where the symbol is +1
    pub unlisted_split: Vec<SymbolCheck>,
    /// primes that could not be examined (dyadic, or ramified in F)
    pub unchecked: Vec<String>,
}

/// Rational primes at which a or b can have nonzero valuation.
fn support_primes(x: &NFElem) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let n = x.norm();
    let mut d = BigInt::one();
    for c in x.coords() {
        d = num_integer::Integer::lcm(&d, c.denom());
    }
    for m in [n.numer().abs(), n.denom().clone(), d] {
        for (p, _) in factor_bigint(&m) {
            if let Some(p) = p.to_u64() {
                out.insert(p);
            }
        }
    }
    out
}

pub fn validate_ramification(q: &QuaternionData) -> Result<ValidationReport> {
    let finite_count = q.ramified_finite.len();
    let real_count = q.ramified_real.len();
    if (finite_count + real_count) % 2 == 1 {
        return Err(Error::Parity {
            finite: finite_count,
            real: real_count,
        });
    }
    let real_computed = q.real_ramification()?;
    if real_computed != q.ramified_real {
        return Err(Error::RamificationMismatch(format!(
            "real places: claimed {:?}, signs of a and b give {:?}",
            q.ramified_real, real_computed
        )));
    }
    let nf = q.base();
    let mut listed: BTreeSet<(u64, usize)> = BTreeSet::new();
    let mut confirmed = Vec::new();
    let mut trusted = Vec::new();
    for rec in &q.ramified_finite {
        let i = rec.resolve(nf)?;
        if !listed.insert((rec.p, i)) {
            return Err(invalid(format!("{} listed twice", rec.label)));
        }
        if rec.trusted {
            trusted.push((
                rec.label.clone(),
                rec.provenance.clone().unwrap_or_default(),
            ));
            continue;
        }
        let s = hilbert_symbol_odd(&q.a, &q.b, rec)?;
        if s != -1 {
            return Err(Error::RamificationMismatch(format!(
                "{}: local symbol is +1, algebra splits there",
                rec.label
            )));
        }
        confirmed.push(SymbolCheck {
            label: rec.label.clone(),
            p: rec.p,
            index: i,
            symbol: s,
        });
    }
    let mut unlisted_split = Vec::new();
    let mut unchecked = Vec::new();
    let mut support = support_primes(&q.a);
    support.extend(support_primes(&q.b));
    for p in support {
        let s = split_prime(nf, p)?;
        for i in 0..s.factors.len() {
            if listed.contains(&(p, i)) {
                continue;
            }
            let label = format!("P{}_{}", p, i);
            if p == 2 {
                unchecked.push(label);
                continue;
            }
            match hilbert_symbol_at(&q.a, &q.b, p, i) {
                Ok(1) => unlisted_split.push(SymbolCheck {
                    label,
                    p,
                    index: i,
                    symbol: 1,
                }),
                Ok(_) => {
                    return Err(Error::RamificationMismatch(format!(
                        "{label}: local symbol is -1 but the prime is not listed"
                    )))
                }
                Err(Error::Unsupported(_)) => unchecked.push(label),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(ValidationReport {
        finite_count,
        real_count,
        parity_ok: true,
        real_agree: true,
        real_computed,
        confirmed,
        trusted,
        unlisted_split,
        unchecked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtkinLehnerRanks {
    /// rank of W
    pub r: usize,
    /// rank of W^1
    pub s: usize,
    /// rank of W_+
    pub r_plus: usize,
    /// the n in s <= (n - 1) + r, taken to be [F:Q]
    pub n_assumed: usize,
    pub s_bound: usize,
}

pub fn atkin_lehner_ranks(
    q: &QuaternionData,
    narrow_class_number_one: bool,
) -> Result<AtkinLehnerRanks> {
    if !narrow_class_number_one {
        return Err(Error::Unsupported(
            "Atkin-Lehner ranks without narrow class number one".into(),
        ));
    }
    let r = q.ramified_finite.len();
    let n = q.base().degree();
    Ok(AtkinLehnerRanks {
        r,
        s: r,
        r_plus: r,
        n_assumed: n,
        s_bound: n - 1 + r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::IntPoly;

    fn field(c: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new("K", IntPoly::from_i64s(c)).unwrap())
    }

    /// Is a x^2 + b y^2 = z^2 solvable mod p^k with (x, y, z) not all divisible by p?
    fn primitive_solution(a: i64, b: i64, p: i64, k: u32) -> bool {
        let m = p.pow(k);
        for x in 0..m {
            for y in 0..m {
                let lhs = (a * x % m * x % m + b * y % m * y % m).rem_euclid(m);
                for z in 0..m {
                    if (x % p != 0 || y % p != 0 || z % p != 0) && z * z % m == lhs {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn symbol_over_q_matches_search() {
        let q = field(&[0, 1]);
        let e = |v: i64| NFElem::from_i64s(&q, &[v]);
        for (a, b, expect) in [(3, 5, -1), (-1, -1, 1), (1, 7, 1)] {
            let oracle = if primitive_solution(a, b, 3, 3) {
                1
            } else {
                -1
            };
            assert_eq!(oracle, expect);
            assert_eq!(hilbert_symbol_at(&e(a), &e(b), 3, 0).unwrap(), expect);
        }
    }

    #[test]
    fn even_prime_needs_trust() {
        let q = field(&[0, 1]);
        let m1 = NFElem::from_i64s(&q, &[-1]);
        let rec = PrimeRecord::new(2, 1, "P2");
        assert!(matches!(
            hilbert_symbol_odd(&m1, &m1, &rec),
            Err(Error::EvenResidueCharacteristic(_))
        ));
    }

    #[test]
    fn hamilton_quaternions() {
        let q = field(&[0, 1]);
        let m1 = NFElem::from_i64s(&q, &[-1]);
        assert_eq!(real_ramification(&m1, &m1).unwrap(), [0]);
        let h = QuaternionData::new(
            m1.clone(),
            m1.clone(),
            alloc::vec![PrimeRecord::new(2, 1, "2").trusted("definite at infinity, parity")],
            alloc::vec![0],
        )
        .unwrap();
        let rep = validate_ramification(&h).unwrap();
        assert_eq!(rep.trusted.len(), 1);
        let one = NFElem::from_i64s(&q, &[1]);
        let b = NFElem::from_i64s(&q, &[-7]);
        assert!(real_ramification(&one, &b).unwrap().is_empty());
    }

    #[test]
    fn parity_violation() {
        let k = field(&[-2, 0, 1]);
        let m1 = NFElem::from_i64s(&k, &[-1]);
        let one = NFElem::from_i64s(&k, &[1]);
        let q = QuaternionData::new(m1, one, alloc::vec![], alloc::vec![0]).unwrap();
        assert!(matches!(
            validate_ramification(&q),
            Err(Error::Parity { finite: 0, real: 1 })
        ));
    }

    #[test]
    fn odd_ramification_detected() {
        // (-1, -3 / Q) ramifies at 3 and infinity
        let q = field(&[0, 1]);
        let a = NFElem::from_i64s(&q, &[-1]);
        let b = NFElem::from_i64s(&q, &[-3]);
        let good = QuaternionData::new(
            a.clone(),
            b.clone(),
            alloc::vec![PrimeRecord::new(3, 1, "3")],
            alloc::vec![0],
        )
        .unwrap();
        let rep = validate_ramification(&good).unwrap();
        assert_eq!(rep.confirmed.len(), 1);
        // wrongly listing 5 while omitting 3
        let bad = QuaternionData::new(
            a,
            b,
            alloc::vec![PrimeRecord::new(5, 1, "5")],
            alloc::vec![0],
        )
        .unwrap();
        assert!(matches!(
            validate_ramification(&bad),
            Err(Error::RamificationMismatch(_))
        ));
    }

    #[test]
    fn inert_prime_over_quadratic() {
        // 3 is inert in Q(sqrt2); every element of F_3 is a square in F_9
        let k = field(&[-2, 0, 1]);
        let a = NFElem::from_i64s(&k, &[3]);
        let b = NFElem::from_i64s(&k, &[5]);
        assert_eq!(hilbert_symbol_at(&a, &b, 3, 0).unwrap(), 1);
        // 7 splits: both local symbols agree with the rational one
        let a = NFElem::from_i64s(&k, &[7]);
        let b = NFElem::from_i64s(&k, &[3]);
        let expect = if primitive_solution(7, 3, 7, 3) {
            1
        } else {
            -1
        };
        assert_eq!(hilbert_symbol_at(&a, &b, 7, 0).unwrap(), expect);
        assert_eq!(hilbert_symbol_at(&a, &b, 7, 1).unwrap(), expect);
    }

    #[test]
    fn atkin_lehner() {
        let q = field(&[0, 1]);
        let a = NFElem::from_i64s(&q, &[-1]);
        let b = NFElem::from_i64s(&q, &[-3]);
        let d = QuaternionData::new(
            a,
            b,
            alloc::vec![PrimeRecord::new(3, 1, "3")],
            alloc::vec![0],
        )
        .unwrap();
        let r = atkin_lehner_ranks(&d, true).unwrap();
        assert_eq!((r.r, r.s, r.r_plus), (1, 1, 1));
        assert!(matches!(
            atkin_lehner_ranks(&d, false),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quaternion_identities() {
        let k = field(&[-2, 0, 1]);
        let e = |c: &[i64]| NFElem::from_i64s(&k, c);
        let q = QuaternionData::new(e(&[-1]), e(&[-3, 1]), alloc::vec![], alloc::vec![]).unwrap();
        let x = q.elem([e(&[1, 2]), e(&[0, -1]), e(&[3]), e(&[1, 1])]);
        let y = q.elem([e(&[2]), e(&[1, 1]), e(&[-1, 2]), e(&[0, 5])]);
        assert_eq!(q.nrd(&q.mul(&x, &y)), &q.nrd(&x) * &q.nrd(&y));
        let x2 = q.mul(&x, &x);
        let lhs = q.add(
            &q.add(&x2, &q.scale(&-&q.trd(&x), &x)),
            &q.from_base(&q.nrd(&x)),
        );
        assert!(lhs.coords.iter().all(|c| c.is_zero()));
        assert_eq!(q.mul(&x, &q.conj(&x)), q.from_base(&q.nrd(&x)));
    }

    #[test]
    fn algebra_d_over_real_cyclotomic_32() {
        let f = Arc::new(
            NumberField::new("F", IntPoly::from_i64s(&[2, 0, -16, 0, 20, 0, -8, 0, 1]))
                .unwrap()
                .with_place_order(alloc::vec![4, 0, 1, 2, 3, 5, 6, 7])
                .unwrap(),
        );
        let u = NFElem::from_i64s(&f, &[0, 1, -1]);
        let m1 = NFElem::from_i64s(&f, &[-1]);
        let ram = real_ramification(&u, &m1).unwrap();
        assert_eq!(ram, (1..8).collect::<Vec<_>>());
        assert_eq!(real_ramification(&m1, &u).unwrap(), ram);
        let d = QuaternionData::new(
            u,
            m1.clone(),
            alloc::vec![PrimeRecord::new(2, 1, "p").trusted("unique prime above 2")],
            ram,
        )
        .unwrap();
        let rep = validate_ramification(&d).unwrap();
        assert_eq!((rep.finite_count, rep.real_count), (1, 7));
        let w = atkin_lehner_ranks(&d, true).unwrap();
        assert_eq!((w.r, w.s, w.r_plus), (1, 1, 1));
        assert_eq!(w.s_bound, 8);
        let b = QuaternionData::new(m1.clone(), m1, alloc::vec![], (0..8).collect()).unwrap();
        assert_eq!(validate_ramification(&b).unwrap().real_count, 8);
    }
}
