//! Prime decomposition via Dedekind's criterion, with one enlargement round
//! when the power basis is not p-maximal, and P-adic valuations.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{factor_bigint, is_probable_prime, valuation};
use super::field::{FiniteField, PolyOps, PrimeField};
use super::linalg::{inverse, RatMatrix};
use super::numfield::{NFElem, NumberField};
use super::poly::{Int, IntPoly, Rat, UniPoly};
use super::zfactor::hensel_lift_multi;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactor {
    /// Ramification index.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
    /// Monic irreducible factor mod p of the certifying generator's minimal polynomial.
    pub residue_poly: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Dedekind's criterion holds for the defining polynomial.
    PowerBasis,
    /// Dedekind's criterion holds for `minpoly`, the minimal polynomial of an
    /// integral generator found by one enlargement step.
    Enlarged {
        generator: Vec<Rat>,
        minpoly: IntPoly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    pub factors: Vec<PrimeFactor>,
    /// True when the power basis itself passed Dedekind's criterion at p.
    pub monogenic: bool,
    pub certificate: Certificate,
}

impl PrimeSplitting {
    pub fn ef(&self) -> Vec<(u32, u32)> {
        self.factors.iter().map(|f| (f.e, f.f)).collect()
    }
    pub fn is_unramified(&self) -> bool {
        self.factors.iter().all(|f| f.e == 1)
    }
}

struct Dedekind {
    factors: Vec<(Vec<u64>, u32)>,
    obstruction: Vec<u64>,
}

impl Dedekind {
    fn passes(&self) -> bool {
        self.obstruction.len() == 1
    }
}

fn dedekind(f: &IntPoly, p: u64) -> Dedekind {
    let fp = PrimeField::new(p);
    let fbar = f.reduce_mod(p);
    let factors = fp.factor(&fbar);
    let mut g = vec_one();
    let mut h = vec_one();
    for (gi, ei) in &factors {
        g = fp.p_mul(&g, gi);
        h = fp.p_mul(&h, &fp.p_pow(gi, ei - 1));
    }
    let gz = IntPoly::from_residues(&g);
    let hz = IntPoly::from_residues(&h);
    let diff = f - &(&gz * &hz);
    let pb = BigInt::from(p);
    let big_f = IntPoly::new(diff.coeffs().iter().map(|c| c / &pb).collect());
    let fbar2 = big_f.reduce_mod(p);
    let t = fp.p_gcd(&fp.p_gcd(&fbar2, &g), &h);
    Dedekind {
        factors,
        obstruction: t,
    }
}

fn vec_one() -> Vec<u64> {
    alloc::vec![1]
}

fn factors_from(d: &Dedekind) -> Vec<PrimeFactor> {
    let mut v: Vec<PrimeFactor> = d
        .factors
        .iter()
        .map(|(g, e)| PrimeFactor {
            e: *e,
            f: (g.len() - 1) as u32,
            residue_poly: g.clone(),
        })
        .collect();
    v.sort_by(|a, b| (a.f, a.e, &a.residue_poly).cmp(&(b.f, b.e, &b.residue_poly)));
    v
}

/// Generator and minimal polynomial certifying p-maximality at `p`.
fn certify(nf: &Arc<NumberField>, p: u64) -> Result<(NFElem, IntPoly, Dedekind, bool)> {
    let f = nf.poly();
    let d = dedekind(f, p);
    let theta = NFElem::generator(nf);
    if d.passes() {
        return Ok((theta, f.clone(), d, true));
    }
    let fp = PrimeField::new(p);
    let fbar = f.reduce_mod(p);
    let u = fp.p_div_exact(&fbar, &d.obstruction);
    let uz = IntPoly::from_residues(&u).to_rat();
    let gamma0 = NFElem::from_poly(nf, &uz.scale(&Rat::new(Int::one(), BigInt::from(p))));
    let limit = 2 * p as i64 + 8;
    for k in 0..=limit {
        let shift = NFElem::from_i64s(nf, &[0, k]);
        let cand = &gamma0 + &shift;
        let cp = cand.charpoly();
        let Some(g) = cp.to_int_poly() else { continue };
        if !cp.is_squarefree() {
            continue;
        }
        let dg = dedekind(&g, p);
        if dg.passes() {
            return Ok((cand, g, dg, false));
        }
    }
    Err(Error::NonMonogenic { p })
}

/// Decomposition of `p` in the field.
pub fn split_prime(nf: &Arc<NumberField>, p: u64) -> Result<PrimeSplitting> {
    if !super::arith::is_prime_u64(p) {
        return Err(crate::error::invalid(format!("{} is not prime", p)));
    }
    let (gen, minpoly, d, monogenic) = certify(nf, p)?;
    let factors = factors_from(&d);
    let total: u32 = factors.iter().map(|f| f.e * f.f).sum();
    debug_assert_eq!(total as usize, nf.degree());
    let certificate = if monogenic {
        Certificate::PowerBasis
    } else {
        Certificate::Enlarged {
            generator: gen.coords().to_vec(),
            minpoly,
        }
    };
    Ok(PrimeSplitting {
        p,
        factors,
        monogenic,
        certificate,
    })
}

/// Field discriminant when every prime whose square divides the polynomial
/// discriminant is certified; `None` otherwise.
pub fn field_discriminant(nf: &NumberField) -> Result<Option<Int>> {
    let pd = nf.poly_discriminant().clone();
    let nf = Arc::new(nf.clone());
    let mut d = if pd.is_negative() {
        -Int::one()
    } else {
        Int::one()
    };
    for (p, e) in factor_bigint(&pd) {
        if !is_probable_prime(&p) {
            return Ok(None);
        }
        if e == 1 {
            d *= BigInt::from(p);
            continue;
        }
        let Some(p64) = p.to_u64() else {
            return Ok(None);
        };
        let v = match split_prime(&nf, p64) {
            Ok(s) => match s.certificate {
                Certificate::PowerBasis => e,
                Certificate::Enlarged { minpoly, .. } => valuation(&minpoly.discriminant(), p64),
            },
            Err(Error::NonMonogenic { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        d *= BigInt::from(p).pow(v);
    }
    Ok(Some(d))
}

/// Local data at p: a p-maximal generator, its minimal polynomial, and
/// Hensel-lifted local factors, one per prime above p.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub p: u64,
    pub splitting: PrimeSplitting,
    generator: NFElem,
    minpoly: IntPoly,
    to_gen: RatMatrix,
    precision: u32,
    lifted: Vec<IntPoly>,
}

impl LocalData {
    pub fn new(nf: &Arc<NumberField>, p: u64, precision: u32) -> Result<Self> {
        let splitting = split_prime(nf, p)?;
        let (generator, minpoly, d, _) = certify(nf, p)?;
        let n = nf.degree();
        let mut rows = Vec::with_capacity(n);
        let mut acc = NFElem::from_i64s(nf, &[1]);
        for _ in 0..n {
            rows.push(acc.coords().to_vec());
            acc = &acc * &generator;
        }
        let to_gen = inverse(&rows).expect("generator spans the field");
        let fp = PrimeField::new(p);
        // order the local factors like splitting.factors
        let mut parts: Vec<(Vec<u64>, u32)> = d.factors.clone();
        parts.sort_by(|a, b| {
            ((a.0.len() - 1) as u32, a.1, &a.0).cmp(&((b.0.len() - 1) as u32, b.1, &b.0))
        });
        let powers: Vec<Vec<u64>> = parts.iter().map(|(g, e)| fp.p_pow(g, *e)).collect();
        let lifted = if powers.len() == 1 {
            alloc::vec![minpoly.clone()]
        } else {
            hensel_lift_multi(&minpoly, &powers, p, precision)
        };
        Ok(LocalData {
            p,
            splitting,
            generator,
            minpoly,
            to_gen,
            precision,
            lifted,
        })
    }

    pub fn generator(&self) -> &NFElem {
        &self.generator
    }
    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    /// x = N(gamma) / d with N integral.
    fn integral_form(&self, x: &NFElem) -> (IntPoly, Int) {
        let c: Vec<Rat> = (0..self.to_gen.len())
            .map(|j| {
                x.coords()
                    .iter()
                    .zip(&self.to_gen)
                    .map(|(a, row)| a * &row[j])
                    .sum()
            })
            .collect();
        let poly = UniPoly::new(c);
        let d = poly.denominator();
        let n = poly
            .scale(&Rat::from_integer(d.clone()))
            .to_int_poly()
            .expect("scaled to integers");
        (n, d)
    }

    /// v_P(x) at the i-th prime above p; `Ok(None)` when the working precision
    /// cannot decide, so that callers can retry with a larger precision.
    pub fn valuation(&self, x: &NFElem, i: usize) -> Result<Option<i64>> {
        if x.is_zero() {
            return Err(crate::error::invalid("valuation of zero"));
        }
        let fac = &self.splitting.factors[i];
        let (n, d) = self.integral_form(x);
        let r = IntPoly::resultant(&self.lifted[i], &n);
        if r.is_zero() {
            return Ok(None);
        }
        let v = valuation(&r, self.p);
        if v >= self.precision {
            return Ok(None);
        }
        debug_assert_eq!(v % fac.f, 0);
        let vd = if d.is_one() { 0 } else { valuation(&d, self.p) };
        Ok(Some((v / fac.f) as i64 - (fac.e * vd) as i64))
    }

    /// For an unramified prime: (v_P(x), residue of x / p^{v_P(x)} in F_p[y]/(g)).
    pub fn unit_part_unramified(&self, x: &NFElem, i: usize) -> Result<Option<(i64, Vec<u64>)>> {
        let fac = &self.splitting.factors[i];
        if fac.e != 1 {
            return Err(Error::Unsupported(format!(
                "residue map at a ramified prime above {}",
                self.p
            )));
        }
        if x.is_zero() {
            return Err(crate::error::invalid("valuation of zero"));
        }
        let (n, d) = self.integral_form(x);
        let (_, r) = n.div_rem_monic(&self.lifted[i]);
        if r.is_zero() {
            return Ok(None);
        }
        let pb = BigInt::from(self.p);
        let a = r
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| valuation(c, self.p))
            .min()
            .unwrap();
        if a >= self.precision {
            return Ok(None);
        }
        let pa = pb.pow(a);
        let unit_num = IntPoly::new(r.coeffs().iter().map(|c| c / &pa).collect());
        let b = valuation(&d, self.p);
        let d_unit = &d / pb.pow(b);
        let fp = PrimeField::new(self.p);
        let dinv = fp
            .inv(&d_unit.mod_floor(&pb).to_u64().unwrap())
            .expect("unit denominator");
        let res = fp.p_rem(
            &fp.p_scale(&unit_num.reduce_mod(self.p), &dinv),
            &fac.residue_poly,
        );
        Ok(Some((a as i64 - b as i64, res)))
    }
}

/// Valuation with automatic precision escalation.
pub fn valuation_at(nf: &Arc<NumberField>, x: &NFElem, p: u64, i: usize) -> Result<i64> {
    let mut prec = 64;
    loop {
        let ld = LocalData::new(nf, p, prec)?;
        if let Some(v) = ld.valuation(x, i)? {
            return Ok(v);
        }
        if prec >= 4096 {
            return Err(Error::SplittingFailed {
                p,
                reason: "valuation exceeds working precision".into(),
            });
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(c: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new("t", IntPoly::from_i64s(c)).unwrap())
    }

    #[test]
    fn fixture_splittings() {
        let lf = nf(&[1, -4, -4, 1, 1]);
        assert_eq!(split_prime(&lf, 2).unwrap().ef(), [(1, 4)]);
        assert_eq!(split_prime(&lf, 5).unwrap().ef(), [(4, 1)]);
        assert_eq!(split_prime(&lf, 3).unwrap().ef(), [(2, 2)]);
        let kh = nf(&[167, -229, 1, 1]);
        let s2 = split_prime(&kh, 2).unwrap();
        assert_eq!(s2.ef(), [(3, 1)]);
        assert!(!s2.monogenic);
        let s3 = split_prime(&kh, 3).unwrap();
        assert_eq!(s3.ef(), [(1, 1), (1, 2)]);
        let f = nf(&[2, 0, -16, 0, 20, 0, -8, 0, 1]);
        let s = split_prime(&f, 2).unwrap();
        assert_eq!(s.ef(), [(8, 1)]);
        assert!(s.monogenic);
    }

    #[test]
    fn discriminants() {
        let lf = nf(&[1, -4, -4, 1, 1]);
        assert_eq!(field_discriminant(&lf).unwrap(), Some(Int::from(1125)));
        let kh = nf(&[167, -229, 1, 1]);
        // 2 tamely totally ramified (v_2 = e - 1), 3 unramified
        assert_eq!(
            kh.poly_discriminant(),
            &(Int::from(144) * Int::from(323_933))
        );
        assert_eq!(
            field_discriminant(&kh).unwrap(),
            Some(Int::from(4) * Int::from(323_933))
        );
        let f = nf(&[2, 0, -16, 0, 20, 0, -8, 0, 1]);
        assert_eq!(field_discriminant(&f).unwrap(), Some(Int::from(1u64 << 31)));
    }

    #[test]
    fn valuations_in_f() {
        let f = nf(&[2, 0, -16, 0, 20, 0, -8, 0, 1]);
        let two = NFElem::from_i64s(&f, &[2]);
        assert_eq!(valuation_at(&f, &two, 2, 0).unwrap(), 8);
        let pi = NFElem::from_i64s(&f, &[2, 1]);
        assert_eq!(valuation_at(&f, &pi, 2, 0).unwrap(), 1);
        let alpha = NFElem::generator(&f);
        assert_eq!(valuation_at(&f, &alpha, 2, 0).unwrap(), 1);
        let half = NFElem::from_rat(&f, Rat::new(Int::one(), Int::from(2)));
        assert_eq!(valuation_at(&f, &half, 2, 0).unwrap(), -8);
    }

    #[test]
    fn valuations_after_enlargement() {
        let kh = nf(&[167, -229, 1, 1]);
        let s = split_prime(&kh, 3).unwrap();
        let three = NFElem::from_i64s(&kh, &[3]);
        for i in 0..s.factors.len() {
            assert_eq!(valuation_at(&kh, &three, 3, i).unwrap(), 1);
        }
        let two = NFElem::from_i64s(&kh, &[2]);
        assert_eq!(valuation_at(&kh, &two, 2, 0).unwrap(), 3);
    }
}
