//! Brandt matrices for the definite quaternion algebra over Q ramified at
//! {p, ∞}, p ≤ 13, by enumerating left ideal classes of a maximal order.
//! Used as a test oracle.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, ToPrimitive};

use super::dataset::{BrandtDataset, BrandtEdge, HeckeMatrix};
use crate::error::{invalid, Error, Result};
use crate::exactalg::linalg::{hnf, inverse, IntMatrix, RatMatrix};
use crate::exactalg::poly::{rat, rat_frac, Int, Rat};

pub const SUPPORTED: [u64; 6] = [2, 3, 5, 7, 11, 13];
const HECKE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

type V4 = [i64; 4];
type Lat = [V4; 4];

/// Quaternion coordinates on 1, i, j, k with i² = a, j² = b, k = ij.
fn qmul(a: i64, b: i64, x: &[Rat; 4], y: &[Rat; 4]) -> [Rat; 4] {
    let (ra, rb) = (rat(a), rat(b));
    let rab = &ra * &rb;
    [
        &x[0] * &y[0] + &ra * &x[1] * &y[1] + &rb * &x[2] * &y[2] - &rab * &x[3] * &y[3],
        &x[0] * &y[1] + &x[1] * &y[0] - &rb * &x[2] * &y[3] + &rb * &x[3] * &y[2],
        &x[0] * &y[2] + &x[2] * &y[0] + &ra * &x[1] * &y[3] - &ra * &x[3] * &y[1],
        &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
    ]
}

/// A maximal order with its multiplication table on the Z-basis.
#[derive(Clone, Debug)]
pub struct MaximalOrder {
    pub p: u64,
    pub a: i64,
    pub b: i64,
    pub basis: [[Rat; 4]; 4],
    mult: [[V4; 4]; 4],
    conj: [V4; 4],
    /// trd(e_i ē_j)
    gram: [V4; 4],
}

impl MaximalOrder {
    pub fn new(p: u64) -> Result<Self> {
        let h = |n, d| rat_frac(n, d);
        let (a, b, basis) = match p {
            // Hurwitz order
            2 => (
                -1,
                -1,
                [
                    [h(1, 2), h(1, 2), h(1, 2), h(1, 2)],
                    [rat(0), rat(1), rat(0), rat(0)],
                    [rat(0), rat(0), rat(1), rat(0)],
                    [rat(0), rat(0), rat(0), rat(1)],
                ],
            ),
            // p ≡ 3 mod 4: (-1,-p), Z<(1+j)/2, (i+k)/2, j, k>
            3 | 7 | 11 => (
                -1,
                -(p as i64),
                [
                    [h(1, 2), rat(0), h(1, 2), rat(0)],
                    [rat(0), h(1, 2), rat(0), h(1, 2)],
                    [rat(0), rat(0), rat(1), rat(0)],
                    [rat(0), rat(0), rat(0), rat(1)],
                ],
            ),
            // p ≡ 5 mod 8: (-2,-p), Z<(1+j+k)/2, (i+2j+k)/4, j, k>
            5 | 13 => (
                -2,
                -(p as i64),
                [
                    [h(1, 2), rat(0), h(1, 2), h(1, 2)],
                    [rat(0), h(1, 4), h(1, 2), h(1, 4)],
                    [rat(0), rat(0), rat(1), rat(0)],
                    [rat(0), rat(0), rat(0), rat(1)],
                ],
            ),
            _ => {
                return Err(Error::Unsupported(format!(
                    "brandt_over_Q supports p in {SUPPORTED:?}, got {p}"
                )))
            }
        };
        let bm: RatMatrix = basis.iter().map(|r| r.to_vec()).collect();
        let inv = inverse(&bm).ok_or_else(|| invalid("singular order basis"))?;
        let coords = |x: &[Rat; 4]| -> Result<V4> {
            let mut out = [0i64; 4];
            for (j, o) in out.iter_mut().enumerate() {
                let c: Rat = (0..4).map(|i| &x[i] * &inv[i][j]).sum();
                if !c.is_integer() {
                    return Err(invalid(format!("order basis for p={p} is not closed")));
                }
                *o = c.to_integer().to_i64().unwrap();
            }
            Ok(out)
        };
        let mut mult = [[[0i64; 4]; 4]; 4];
        let mut gram = [[0i64; 4]; 4];
        let mut conj = [[0i64; 4]; 4];
        for i in 0..4 {
            let ci = [
                basis[i][0].clone(),
                -&basis[i][1],
                -&basis[i][2],
                -&basis[i][3],
            ];
            conj[i] = coords(&ci)?;
            for j in 0..4 {
                mult[i][j] = coords(&qmul(a, b, &basis[i], &basis[j]))?;
                let cj = [
                    basis[j][0].clone(),
                    -&basis[j][1],
                    -&basis[j][2],
                    -&basis[j][3],
                ];
                let t = &qmul(a, b, &basis[i], &cj)[0] * rat(2);
                if !t.is_integer() {
                    return Err(invalid("non-integral trace form"));
                }
                gram[i][j] = t.to_integer().to_i64().unwrap();
            }
        }
        Ok(MaximalOrder {
            p,
            a,
            b,
            basis,
            mult,
            conj,
            gram,
        })
    }

    pub fn mul(&self, x: &V4, y: &V4) -> V4 {
        let mut z = [0i64; 4];
        for i in 0..4 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..4 {
                if y[j] == 0 {
                    continue;
                }
                for k in 0..4 {
                    z[k] += x[i] * y[j] * self.mult[i][j][k];
                }
            }
        }
        z
    }

    pub fn conj(&self, x: &V4) -> V4 {
        let mut z = [0i64; 4];
        for i in 0..4 {
            for k in 0..4 {
                z[k] += x[i] * self.conj[i][k];
            }
        }
        z
    }

    pub fn nrd(&self, x: &V4) -> i64 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += x[i] * self.gram[i][j] * x[j];
            }
        }
        s / 2
    }

    /// |det trd(e_i e_j)|, which is p² for a maximal order of discriminant p.
    pub fn discriminant_sq(&self) -> Int {
        let m: RatMatrix = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| Rat::from_integer(Int::from(self.gram[i][j])))
                    .collect()
            })
            .collect();
        crate::exactalg::linalg::det(&m).to_integer().abs()
    }
}

fn hnf4(rows: &[V4]) -> Lat {
    let m: IntMatrix = rows
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    let h = hnf(&m);
    assert_eq!(h.len(), 4, "lattice of rank < 4");
    let mut out = [[0i64; 4]; 4];
    for (i, r) in h.iter().enumerate() {
        for j in 0..4 {
            out[i][j] = r[j].to_i64().expect("lattice entry overflow");
        }
    }
    out
}

fn det(l: &Lat) -> i64 {
    (0..4).map(|i| l[i][i]).product()
}

fn combo(l: &Lat, t: &V4) -> V4 {
    let mut x = [0i64; 4];
    for i in 0..4 {
        for k in 0..4 {
            x[k] += t[i] * l[i][k];
        }
    }
    x
}

/// Membership in an upper-triangular HNF lattice.
fn contains(l: &Lat, x: &V4) -> bool {
    let mut r = *x;
    for i in 0..4 {
        if r[i] % l[i][i] != 0 {
            return false;
        }
        let c = r[i] / l[i][i];
        for k in i..4 {
            r[k] -= c * l[i][k];
        }
    }
    true
}

/// Left O-ideal inside O, stored as an HNF lattice in O-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ideal {
    lat: Lat,
    norm: i64,
}

impl Ideal {
    fn new(lat: Lat) -> Self {
        let d = det(&lat);
        let norm = (d as f64).sqrt().round() as i64;
        assert_eq!(norm * norm, d, "ideal index is not a square");
        Ideal { lat, norm }
    }
}

/// All x with x^T (A/2) x == target, A even positive definite.
fn vectors_of_norm(a: &Lat, target: i64, first_only: bool) -> Vec<V4> {
    let n = 4;
    // Cholesky-type decomposition of A/2
    let mut q = [[0f64; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = a[i][j] as f64 / 2.0;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = target as f64 + 1e-6;
    let mut out = Vec::new();
    let mut x = [0i64; 4];
    fn rec(
        i: usize,
        q: &[[f64; 4]; 4],
        rem: f64,
        x: &mut [i64; 4],
        a: &Lat,
        target: i64,
        first_only: bool,
        out: &mut Vec<V4>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let c: f64 = -(i + 1..4).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let r = (rem.max(0.0) / q[i][i]).sqrt();
        let lo = (c - r - 1e-9).ceil() as i64;
        let hi = (c + r + 1e-9).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - c;
            let left = rem - q[i][i] * d * d;
            if left < -1e-6 {
                continue;
            }
            if i == 0 {
                let mut s = 0i64;
                for u in 0..4 {
                    for w in 0..4 {
                        s += x[u] * a[u][w] * x[w];
                    }
                }
                if s == 2 * target {
                    out.push(*x);
                }
            } else {
                rec(i - 1, q, left, x, a, target, first_only, out);
            }
        }
        x[i] = 0;
    }
    rec(3, &q, bound, &mut x, a, target, first_only, &mut out);
    out
}

struct Engine {
    o: MaximalOrder,
}

impl Engine {
    fn gram_of(&self, l: &Lat) -> Lat {
        let mut g = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0;
                for u in 0..4 {
                    for v in 0..4 {
                        s += l[i][u] * self.o.gram[u][v] * l[j][v];
                    }
                }
                g[i][j] = s;
            }
        }
        g
    }

    /// Lattice spanned by conj(x)·y for x in I, y in J.
    fn conj_product(&self, i: &Ideal, j: &Ideal) -> Lat {
        let mut rows = Vec::with_capacity(16);
        for x in &i.lat {
            let cx = self.o.conj(x);
            for y in &j.lat {
                rows.push(self.o.mul(&cx, y));
            }
        }
        hnf4(&rows)
    }

    fn isomorphic(&self, i: &Ideal, j: &Ideal) -> bool {
        let l = self.conj_product(i, j);
        !vectors_of_norm(&self.gram_of(&l), i.norm * j.norm, true).is_empty()
    }

    /// Units of the right order, as N(I)·u in O-coordinates.
    fn right_units(&self, i: &Ideal) -> Vec<V4> {
        let l = self.conj_product(i, i);
        vectors_of_norm(&self.gram_of(&l), i.norm * i.norm, false)
            .iter()
            .map(|t| combo(&l, t))
            .collect()
    }

    /// J·u where `y` = N(I)·u.
    fn act(&self, j: &Ideal, y: &V4, n: i64) -> Ideal {
        let rows: Vec<V4> = j
            .lat
            .iter()
            .map(|r| {
                let mut z = self.o.mul(r, y);
                for c in z.iter_mut() {
                    debug_assert_eq!(*c % n, 0);
                    *c /= n;
                }
                z
            })
            .collect();
        Ideal::new(hnf4(&rows))
    }

    /// The q+1 left ideals J ⊂ I with I/J of order q².
    fn neighbors(&self, i: &Ideal, q: u64) -> Vec<Ideal> {
        let q = q as i64;
        let target = det(&i.lat) * q * q;
        let mut found: Vec<Ideal> = Vec::new();
        let mut t = [0i64; 4];
        let total = q.pow(4);
        for code in 1..total {
            let mut c = code;
            for s in t.iter_mut() {
                *s = c % q;
                c /= q;
            }
            let x = combo(&i.lat, &t);
            if self.o.nrd(&x) % (q * i.norm) != 0 {
                continue;
            }
            if found.iter().any(|j| contains(&j.lat, &x)) {
                continue;
            }
            let mut rows: Vec<V4> = (0..4)
                .map(|m| {
                    let mut e = [0i64; 4];
                    e[m] = 1;
                    self.o.mul(&e, &x)
                })
                .collect();
            rows.extend(i.lat.iter().map(|r| r.map(|v| v * q)));
            let lat = hnf4(&rows);
            if det(&lat) == target {
                found.push(Ideal::new(lat));
            }
        }
        found
    }
}

/// Brandt data over Q with both weight conventions.
#[derive(Clone, Debug)]
pub struct BrandtOverQ {
    pub dataset: BrandtDataset,
    /// |O_R(I)^×| per class; the stabilizer weights are half of these
    pub unit_orders: Vec<u64>,
    /// Σ 1/|O_R^×| = (p-1)/24
    pub unit_mass: Rat,
}

pub fn brandt_over_q(p: u64) -> Result<BrandtOverQ> {
    let eng = Engine {
        o: MaximalOrder::new(p)?,
    };
    let one: Lat = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    let mut reps = vec![Ideal::new(one)];
    let expected = rat_frac(p as i64 - 1, 24);
    let mut units: Vec<Vec<V4>> = vec![eng.right_units(&reps[0])];
    let mass =
        |units: &[Vec<V4>]| -> Rat { units.iter().map(|u| rat_frac(1, u.len() as i64)).sum() };
    let explore: Vec<u64> = HECKE_PRIMES.iter().copied().filter(|&q| q != p).collect();
    for &q in &explore {
        let mut k = 0;
        while k < reps.len() {
            for j in eng.neighbors(&reps[k].clone(), q) {
                if !reps.iter().any(|r| eng.isomorphic(r, &j)) {
                    units.push(eng.right_units(&j));
                    reps.push(j);
                }
            }
            k += 1;
        }
        if mass(&units) == expected {
            break;
        }
    }
    let unit_mass = mass(&units);
    if unit_mass != expected {
        return Err(invalid(format!(
            "mass {unit_mass} differs from (p-1)/24 = {expected}"
        )));
    }
    let h = reps.len();
    let unit_orders: Vec<u64> = units.iter().map(|u| u.len() as u64).collect();
    let weights: Vec<u64> = unit_orders.iter().map(|u| u / 2).collect();
    let classify = |j: &Ideal| -> Result<usize> {
        reps.iter()
            .position(|r| eng.isomorphic(r, j))
            .ok_or_else(|| invalid("neighbour outside the known classes"))
    };
    let mut matrices = BTreeMap::new();
    let mut norms = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for &q in &explore {
        let mut m: HeckeMatrix = vec![vec![0; h]; h];
        let mut es = Vec::new();
        for (i, rep) in reps.iter().enumerate() {
            let nbrs = eng.neighbors(rep, q);
            if nbrs.len() as u64 != q + 1 {
                return Err(invalid(format!(
                    "class {i} has {} neighbours at {q}",
                    nbrs.len()
                )));
            }
            let mut seen = vec![false; nbrs.len()];
            for s in 0..nbrs.len() {
                if seen[s] {
                    continue;
                }
                let mut orbit = 0u64;
                for y in &units[i] {
                    let img = eng.act(&nbrs[s], y, rep.norm);
                    let t = nbrs
                        .iter()
                        .position(|x| *x == img)
                        .ok_or_else(|| invalid("unit action leaves the neighbours"))?;
                    if !seen[t] {
                        seen[t] = true;
                        orbit += 1;
                    }
                }
                let j = classify(&nbrs[s])?;
                m[i][j] += orbit as i64;
                es.push(BrandtEdge {
                    i,
                    j,
                    w: weights[i] / orbit,
                });
            }
        }
        es.sort();
        matrices.insert(q.to_string(), m);
        norms.insert(q.to_string(), q);
        edges.insert(q.to_string(), es);
    }
    let labels: Vec<String> = (0..h).map(|i| format!("I{i}")).collect();
    let dataset = BrandtDataset::new(
        "Q",
        labels,
        weights,
        matrices,
        norms,
        edges,
        format!("brandt_over_Q({p}): left ideal classes of a maximal order in the quaternion algebra ramified at {{{p}, oo}}"),
    )?;
    Ok(BrandtOverQ {
        dataset,
        unit_orders,
        unit_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_are_maximal() {
        for p in SUPPORTED {
            let o = MaximalOrder::new(p).unwrap();
            assert_eq!(o.discriminant_sq(), Int::from(p * p), "p = {p}");
            // Nrd is multiplicative on the basis
            for x in 0..4 {
                for y in 0..4 {
                    let (mut ex, mut ey) = ([0i64; 4], [0i64; 4]);
                    ex[x] = 1;
                    ey[y] = 1;
                    assert_eq!(o.nrd(&o.mul(&ex, &ey)), o.nrd(&ex) * o.nrd(&ey));
                }
            }
        }
        assert!(MaximalOrder::new(17).is_err());
    }

    #[test]
    fn hurwitz_units() {
        let b = brandt_over_q(2).unwrap();
        assert_eq!(b.dataset.weights, vec![12]);
        assert_eq!(b.unit_orders, vec![24]);
        assert_eq!(b.dataset.matrices["3"], vec![vec![4]]);
    }

    #[test]
    fn eleven_has_two_classes() {
        let b = brandt_over_q(11).unwrap();
        let mut u = b.unit_orders.clone();
        u.sort();
        assert_eq!(u, vec![4, 6]);
        assert_eq!(b.unit_mass, rat_frac(10, 24));
        for (q, m) in &b.dataset.matrices {
            let q: i64 = q.parse().unwrap();
            assert!(m.iter().all(|r| r.iter().sum::<i64>() == q + 1));
        }
    }
}
