//! Frobenius cycle-type census of an integer polynomial.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use shimura_core::exactalg::arith::primes_up_to;
use shimura_core::exactalg::{IntPoly, PolyOps, PrimeField};

/// Cycle type written as `1+2^8`: part sizes ascending, exponent for repeats.
pub fn pattern_text(parts: &[usize]) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in parts {
        *counts.entry(d).or_default() += 1;
    }
    counts
        .iter()
        .map(|(d, c)| {
            if *c == 1 {
                d.to_string()
            } else {
                format!("{d}^{c}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            parts.push(len);
        }
    }
    parts.sort_unstable();
    parts
}

/// Cycle types of the affine group x -> ax + b acting on Z/p.
pub fn affine_cycle_types(p: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in 1..p {
        for b in 0..p {
            let perm: Vec<usize> = (0..p).map(|x| (a * x + b) % p).collect();
            out.insert(pattern_text(&cycle_type(&perm)));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub bound: u64,
    pub degree: usize,
    pub tested: usize,
    /// primes where the reduction is not squarefree (bad reduction)
    pub skipped: Vec<u64>,
    /// pattern -> number of primes
    pub counts: BTreeMap<String, usize>,
    /// pattern -> least prime exhibiting it
    pub first_prime: BTreeMap<String, u64>,
    pub allowed: Vec<String>,
    pub outside: Vec<(u64, String)>,
    pub all_allowed: bool,
}

impl Census {
    pub fn seen(&self, pattern: &str) -> Option<u64> {
        self.first_prime.get(pattern).copied()
    }
}

/// Factorization pattern of `poly` mod every prime p <= bound with squarefree
/// reduction, checked against the cycle types of the affine group of degree
/// deg(poly) (which must be prime).
pub fn frobenius_census(poly: &IntPoly, bound: u64) -> Census {
    let degree = poly.degree().unwrap_or(0);
    let allowed = affine_cycle_types(degree);
    let mut census = Census {
        bound,
        degree,
        tested: 0,
        skipped: Vec::new(),
        counts: BTreeMap::new(),
        first_prime: BTreeMap::new(),
        allowed: allowed.iter().cloned().collect(),
        outside: Vec::new(),
        all_allowed: true,
    };
    for p in primes_up_to(bound) {
        let fp = PrimeField::new(p);
        let f = poly.reduce_mod(p);
        if f.len() != degree + 1 {
            census.skipped.push(p);
            continue;
        }
        let d = fp.p_deriv(&f);
        if fp.p_gcd(&f, &d).len() > 1 {
            census.skipped.push(p);
            continue;
        }
        census.tested += 1;
        let pat = pattern_text(&fp.factor_degrees(&f));
        *census.counts.entry(pat.clone()).or_default() += 1;
        census.first_prime.entry(pat.clone()).or_insert(p);
        if !allowed.contains(&pat) {
            census.all_allowed = false;
            census.outside.push((p, pat));
        }
    }
    census
}
