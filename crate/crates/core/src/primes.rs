//! Small number-theoretic helpers on machine integers.

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime { value: p })
    }
}

/// `v_p(j!)` by Legendre's formula.
pub fn factorial_valuation(j: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = j;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// `p^k` if it fits in a `u64`.
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

/// Inverse of `a` modulo `m` for `gcd(a, m) = 1`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// `floor(log_p(d))` for `d >= 1`.
pub fn floor_log(d: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut acc = p;
    while acc <= d {
        k += 1;
        match acc.checked_mul(p) {
            Some(next) => acc = next,
            None => break,
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751));
        assert!(ensure_prime(4).is_err());
    }

    #[test]
    fn legendre() {
        assert_eq!(factorial_valuation(26, 3), 10);
        assert_eq!(factorial_valuation(4, 2), 3);
        assert_eq!(factorial_valuation(9, 5), 1);
    }

    #[test]
    fn logs_and_inverses() {
        assert_eq!(floor_log(27, 3), 3);
        assert_eq!(floor_log(26, 3), 2);
        assert_eq!(floor_log(1, 7), 0);
        assert_eq!(inverse_mod(4, 25), Some(19));
        assert_eq!(inverse_mod(5, 25), None);
    }
}
