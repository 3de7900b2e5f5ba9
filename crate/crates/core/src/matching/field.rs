//! Arithmetic in GF(q) for a prime `q < 2^63`.

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit integer.
pub fn is_prime(q: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if q < 2 {
        return false;
    }
    for &p in &BASES {
        if q.is_multiple_of(p) {
            return q == p;
        }
    }
    let s = (q - 1).trailing_zeros();
    let d = (q - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, q);
        if x == 1 || x == q - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, q);
            if x == q - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Inverse of a nonzero element via Fermat's little theorem.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Determinant over GF(q) by Gaussian elimination. Entries must be `< q`.
pub fn determinant_mod(mut m: Vec<Vec<u64>>, q: u64) -> Result<u64> {
    let size = m.len();
    if m.iter().any(|row| row.len() != size) {
        return Err(Error::Parameter("matrix is not square".into()));
    }
    let mut det = 1 % q;
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| m[r][col] != 0) else {
            return Ok(0);
        };
        if pivot != col {
            m.swap(pivot, col);
            det = (q - det) % q;
        }
        let p = m[col][col];
        det = mul_mod(det, p, q);
        let p_inv = inv_mod(p, q);
        for r in col + 1..size {
            if m[r][col] == 0 {
                continue;
            }
            let factor = mul_mod(m[r][col], p_inv, q);
            for c in col..size {
                let sub = mul_mod(factor, m[col][c], q);
                m[r][c] = (m[r][c] + q - sub) % q;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes = [2u64, 3, 5, 7, 97, 2_147_483_647, 1_000_000_007, 18_446_744_073_709_551_557];
        for p in primes {
            assert!(is_prime(p), "{p}");
        }
        for c in [0u64, 1, 4, 561, 1_000_000_008, 2_147_483_649, 3_215_031_751] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn small_determinants() {
        let q = 101;
        assert_eq!(determinant_mod(vec![vec![2, 3], vec![4, 5]], q).unwrap(), (10 + q - 12) % q);
        assert_eq!(determinant_mod(vec![vec![0, 1], vec![1, 0]], q).unwrap(), q - 1);
        assert_eq!(determinant_mod(vec![vec![1, 2], vec![2, 4]], q).unwrap(), 0);
        assert_eq!(determinant_mod(Vec::new(), q).unwrap(), 1);
        assert_eq!(inv_mod(7, q) * 7 % q, 1);
    }

    #[test]
    fn determinant_matches_permutation_expansion() {
        let q = 1_000_000_007u64;
        let m: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..4).map(|j| ((i * 7 + j * 13 + i * j * 5) % 17) as u64).collect())
            .collect();
        let mut perm = [0usize, 1, 2, 3];
        let mut expected: i128 = 0;
        loop {
            let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            let term: i128 = (0..4).map(|i| m[i][perm[i]] as i128).product();
            expected += if inversions % 2 == 0 { term } else { -term };
            // next permutation
            let Some(i) = (0..3).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..4).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        let expected = expected.rem_euclid(q as i128) as u64;
        assert_eq!(determinant_mod(m, q).unwrap(), expected);
    }
}
