//! Dense exact linear algebra over Q, Z and finite fields.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{inv_mod, mul_mod};
use super::field::FiniteField;
use super::poly::{Int, IntPoly, Rat, UniPoly};
use super::zfactor::large_primes;

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntMatrix = Vec<Vec<Int>>;

pub fn int_to_rat_matrix(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut c = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    c
}

pub fn int_mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut c = vec![vec![Int::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    c
}

pub fn mat_vec(a: &RatMatrix, v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel {v : m v = 0}.
pub fn kernel(m: &RatMatrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &RatMatrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `x * a = b` for a row vector x, where the rows of `a` are independent.
pub fn solve_row(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    // columns of a^T are the rows of a
    let at = transpose(a);
    let k = a.len();
    let mut aug: RatMatrix = at
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (r, &pc) in piv.iter().enumerate() {
        x[pc] = aug[r][k].clone();
    }
    Some(x)
}

fn charpoly_mod_p(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    let sub = |a: u64, b: u64| if a >= b { a - b } else { a + p - b };
    let add = |a: u64, b: u64| {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if i != j + 1 {
            h.swap(i, j + 1);
            for r in h.iter_mut() {
                r.swap(i, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p).unwrap();
        for r in j + 2..n {
            if h[r][j] == 0 {
                continue;
            }
            let u = mul_mod(h[r][j], inv, p);
            for c in 0..n {
                let t = mul_mod(u, h[j + 1][c], p);
                h[r][c] = sub(h[r][c], t);
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[r], p);
                row[j + 1] = add(row[j + 1], t);
            }
        }
    }
    // Hessenberg recurrence
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m_ in 1..=n {
        let prev = &polys[m_ - 1];
        let mut next = vec![0u64; m_ + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = add(next[k + 1], c);
            next[k] = sub(next[k], mul_mod(h[m_ - 1][m_ - 1], c, p));
        }
        let mut t = 1u64;
        for i in (1..m_).rev() {
            t = mul_mod(t, h[i][i - 1], p);
            let coef = mul_mod(t, h[i - 1][m_ - 1], p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i - 1].iter().enumerate() {
                next[k] = sub(next[k], mul_mod(coef, c, p));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Characteristic polynomial det(xI - m) of an integer matrix (multimodular).
pub fn charpoly_int(m: &IntMatrix) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    // sum |c_k| <= prod_i (1 + ||row_i||_2)
    let mut bound = Int::one();
    for r in m {
        let s: Int = r.iter().map(|x| x * x).sum();
        bound *= s.sqrt() + Int::from(2);
    }
    let target = bound * 2 + 1;
    let mut modulus = Int::one();
    let mut acc: Vec<Int> = vec![Int::zero(); n + 1];
    let mut count = 8;
    loop {
        for p in large_primes(count).into_iter().skip(count - 8) {
            let pb = BigInt::from(p);
            let mp: Vec<Vec<u64>> = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.mod_floor(&pb).to_u64().unwrap())
                        .collect()
                })
                .collect();
            let cp = charpoly_mod_p(&mp, p);
            // CRT merge
            let minv = (&modulus % &pb).to_u64().unwrap();
            let minv = inv_mod(minv, p).unwrap();
            for k in 0..=n {
                let a = (&acc[k] % &pb).to_u64().unwrap();
                let diff = (cp[k] + p - a) % p;
                let t = mul_mod(diff, minv, p);
                acc[k] += &modulus * BigInt::from(t);
            }
            modulus *= &pb;
            if modulus > target {
                let coeffs = acc
                    .iter()
                    .map(|c| super::arith::symmetric_mod(c, &modulus))
                    .collect();
                return IntPoly::new(coeffs);
            }
        }
        count += 8;
    }
}

/// Characteristic polynomial of a rational matrix.
pub fn charpoly_rat(m: &RatMatrix) -> UniPoly {
    let n = m.len();
    let d = m
        .iter()
        .flatten()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let dm: IntMatrix = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| (x * Rat::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    let cp = charpoly_int(&dm);
    // charpoly(m)(x) = d^{-n} charpoly(dm)(d x)
    let coeffs = (0..=n)
        .map(|k| Rat::new(cp.coeff(k), d.pow((n - k) as u32)))
        .collect();
    UniPoly::new(coeffs)
}

/// Row-style Hermite normal form of an integer lattice given by generators;
/// returns the nonzero rows (upper triangular, positive pivots).
pub fn hnf(gens: &IntMatrix) -> IntMatrix {
    let mut a = gens.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine column c over rows r..
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, piv);
            let mut done = true;
            let pivot_row = a[r].clone();
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&pivot_row[c]);
                for j in c..cols {
                    a[i][j] -= &q * &pivot_row[j];
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).is_some_and(|row| !row[c].is_zero()) {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = a[r].clone();
            for i in 0..r {
                let q = a[i][c].div_floor(&pivot_row[c]);
                if q.is_zero() {
                    continue;
                }
                for j in c..cols {
                    a[i][j] -= &q * &pivot_row[j];
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// Generic Gaussian elimination over a finite field: basis of {v : m v = 0}.
pub fn kernel_ff<F: FiniteField>(f: &F, m: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&a[i][c]) {
                let fac = a[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&fac, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[ri][fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    fn im(v: &[&[i64]]) -> IntMatrix {
        v.iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect()
    }

    #[test]
    fn charpoly_companion() {
        // companion of x^2 - x - 1
        let m = im(&[&[0, 1], &[1, 1]]);
        assert_eq!(charpoly_int(&m), IntPoly::from_i64s(&[-1, -1, 1]));
    }

    #[test]
    fn charpoly_agrees_with_det() {
        let m = im(&[
            &[3, -1, 4, 1],
            &[5, 9, -2, 6],
            &[5, 3, 5, -8],
            &[9, 7, 9, 3],
        ]);
        let cp = charpoly_int(&m);
        // constant term = det(-m) = det(m) for even n
        let d = det(&int_to_rat_matrix(&m));
        assert_eq!(Rat::from_integer(cp.coeff(0)), d);
        assert_eq!(cp.coeff(3), Int::from(-20));
    }

    #[test]
    fn hnf_index() {
        let m = im(&[&[2, 0], &[0, 3], &[4, 6]]);
        let h = hnf(&m);
        assert_eq!(h, im(&[&[2, 0], &[0, 3]]));
        let m = im(&[&[1, 1], &[1, -1]]);
        let h = hnf(&m);
        assert_eq!(&h[0][0] * &h[1][1], Int::from(2));
    }

    #[test]
    fn kernel_and_inverse() {
        let m: RatMatrix = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
        let a: RatMatrix = vec![vec![rat(2), rat(1)], vec![rat(7), rat(4)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }
}
