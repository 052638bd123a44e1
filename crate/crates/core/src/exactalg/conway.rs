//! Fixed field moduli for F_{l^k}, l in {2,3,5}, k <= 8 (Conway polynomials,
//! coefficients low-to-high).

use alloc::vec::Vec;

const TABLE: &[(u64, &[u64])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (3, &[1, 0, 2, 0, 0, 0, 0, 1]),
    (3, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (5, &[3, 4, 0, 0, 0, 1]),
    (5, &[2, 0, 1, 4, 1, 0, 1]),
    (5, &[3, 3, 0, 0, 0, 0, 0, 1]),
    (5, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
];

pub fn conway_modulus(p: u64, k: usize) -> Option<Vec<u64>> {
    TABLE
        .iter()
        .find(|(q, m)| *q == p && m.len() == k + 1)
        .map(|(_, m)| m.to_vec())
}
