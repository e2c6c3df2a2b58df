//! Small exact-integer helpers shared by the decision engines.
//!
//! The brute-force reference in [`crate::oracle`] deliberately does not use
//! anything from here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Least non-negative residue of `a` modulo `m` (`m > 0`).
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// `m | a`, with the convention that only `0` is divisible by `0`.
pub fn divides(m: &BigInt, a: &BigInt) -> bool {
    if m.is_zero() {
        return a.is_zero();
    }
    (a % m).is_zero()
}

pub fn congruent(a: &BigInt, b: &BigInt, m: &BigInt) -> bool {
    divides(m, &(a - b))
}

pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c)
}

/// Inverse of `a` modulo `m`, normalised into `[0, m)`. `None` when not a unit.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // quadratic residues mod 64 reject most non-squares before the Newton root
    let low = (n % 64u8).to_usize().unwrap_or(0);
    if !SQUARE_MOD_64[low] {
        return None;
    }
    let root = n.sqrt();
    if &(&root * &root) == n {
        Some(root)
    } else {
        None
    }
}

const SQUARE_MOD_64: [bool; 64] = {
    let mut table = [false; 64];
    let mut i = 0;
    while i < 64 {
        table[(i * i) % 64] = true;
        i += 1;
    }
    table
};

/// Distinct prime divisors of `n` in increasing order (`n = 0, 1` give none).
pub fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct prime divisors of `|n|` by trial division.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u8);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            while (&n % &p).is_zero() {
                n /= &p;
            }
            out.push(p.clone());
        }
        p += if p == BigInt::from(2u8) { 1u8 } else { 2u8 };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Primes `l` with `l^2 | n`.
pub fn square_prime_divisors(n: u64) -> Vec<u64> {
    prime_divisors_u64(n)
        .into_iter()
        .filter(|l| n % (l * l) == 0)
        .collect()
}

pub fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_residues() {
        assert_eq!(mod_inverse(&big(3), &big(8)), Some(big(3)));
        assert_eq!(mod_inverse(&big(2), &big(8)), None);
        assert_eq!(mod_inverse(&BigInt::from(-3), &big(8)), Some(big(5)));
        assert_eq!(modulo(&BigInt::from(-21), &big(17)), big(13));
    }

    #[test]
    fn squares() {
        assert_eq!(exact_sqrt(&big(0)), Some(big(0)));
        assert_eq!(exact_sqrt(&big(441)), Some(big(21)));
        assert_eq!(exact_sqrt(&big(442)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        let huge = BigInt::from(3u8).pow(301);
        assert_eq!(exact_sqrt(&(&huge * &huge)), Some(huge.clone()));
        assert_eq!(exact_sqrt(&(&huge * &huge + 1u8)), None);
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_divisors_u64(360), vec![2, 3, 5]);
        assert_eq!(prime_divisors_u64(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(&BigInt::from(-98)), vec![big(2), big(7)]);
        assert_eq!(square_prime_divisors(360), vec![2, 3]);
        assert_eq!(square_prime_divisors(30), Vec::<u64>::new());
    }
}
