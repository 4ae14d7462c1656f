//! Small integer helpers shared by the modules.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("integer power overflow")
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All `k`-subsets of `{0, .., n-1}` as bitmasks, in lexicographic order of
/// their sorted index lists.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, 0, &mut out);
    out
}

/// Sorted indices of the set bits.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of the wedge `e_a ∧ e_b` of two basis monomials, or `None` if they
/// share an index.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // count pairs (i in a, j in b) with j < i
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> (j + 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Solve `e ≡ r1 (mod m1)`, `e ≡ r2 (mod m2)` for coprime moduli.
pub fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let inv = mod_inv(m1 % m2, m2).expect("moduli must be coprime");
    let k = ((r2 + m2 - r1 % m2) % m2) as u128 * inv as u128 % m2 as u128;
    ((r1 as u128 + m1 as u128 * k) % (m1 as u128 * m2 as u128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        let s = subsets(4, 2);
        let idx: Vec<_> = s.iter().map(|&m| mask_indices(m)).collect();
        assert_eq!(
            idx,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets(3, 0), vec![0]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn wedge_signs() {
        // e1 ∧ e0 = -e0 ∧ e1
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b11, 0b10), None);
        // e2 ∧ (e0 ∧ e1): two transpositions
        assert_eq!(wedge_sign(0b100, 0b011), Some(1));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inv(2, 9), Some(5));
        assert_eq!(mod_inv(3, 9), None);
        assert_eq!(mod_pow(2, 6, 9), 1);
        assert_eq!(valuation(18, 3), 2);
        assert_eq!(crt(0, 2, 1, 9), 10);
        assert!(is_prime(5) && !is_prime(9) && !is_prime(1));
        assert_eq!(binomial(5, 2), 10);
    }
}
