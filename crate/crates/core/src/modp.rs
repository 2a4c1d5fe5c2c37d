//! Base-p digit manipulation and binomial coefficients reduced modulo a prime.
//!
//! Digits are always least-significant first.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModpError {
    #[error("{n} does not fit in {width} base-{p} digits")]
    Overflow { n: u64, p: u32, width: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// Digits of an integer in base `p`, least-significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    pub digits: Vec<u32>,
    pub p: u32,
}

impl DigitVector {
    pub fn width(&self) -> usize {
        self.digits.len()
    }

    /// Reassembles `Σ digits[i]·p^i`.
    pub fn value(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<u32, ModpError> {
    if p > 2 && p < u32::MAX as u64 && is_prime(p) {
        Ok(p as u32)
    } else {
        Err(ModpError::NotOddPrime(p))
    }
}

/// `p^e`, or `None` on overflow.
pub fn checked_pow(p: u32, e: usize) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p as u64))
}

pub fn base_p_digits(n: u64, p: u32, width: usize) -> Result<DigitVector, ModpError> {
    match checked_pow(p, width) {
        Some(bound) if n < bound => Ok(DigitVector { digits: digits(n, p, width), p }),
        // p^width beyond u64 always exceeds n
        None => Ok(DigitVector { digits: digits(n, p, width), p }),
        _ => Err(ModpError::Overflow { n, p, width }),
    }
}

/// Unchecked digit split: the top digit absorbs anything above `p^(width-1)`.
pub fn digits(mut n: u64, p: u32, width: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        if i + 1 == width {
            out.push(n as u32);
        } else {
            out.push((n % p as u64) as u32);
            n /= p as u64;
        }
    }
    out
}

pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
///
/// # Panics
/// Panics if `a ≡ 0 (mod p)`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse mod {p}");
    pow_mod(a, p as u64 - 2, p)
}

pub fn reduce(n: i64, p: u32) -> u32 {
    n.rem_euclid(p as i64) as u32
}

/// `n! mod p` for `n < p`.
pub fn small_factorial(n: u32, p: u32) -> u32 {
    debug_assert!(n < p);
    (1..=n).fold(1 % p, |acc, i| mul_mod(acc, i, p))
}

/// `binom(n, k) mod p` for digits `n, k < p`.
fn small_binom(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let num = ((n - k + 1)..=n).fold(1 % p, |acc, i| mul_mod(acc, i, p));
    mul_mod(num, inv_mod(small_factorial(k, p), p), p)
}

/// Generalized binomial coefficient `binom(n, k)` reduced mod `p`.
///
/// Negative `n` goes through the reflection `(-1)^k·binom(-n+k-1, k)`.
pub fn binom_mod_p(n: i64, k: u64, p: u32) -> u32 {
    if k == 0 {
        return 1 % p;
    }
    if n < 0 {
        let m = (-(n as i128) + k as i128 - 1) as u128;
        let v = lucas(m, k as u128, p);
        return if k % 2 == 1 { (p - v) % p } else { v };
    }
    lucas(n as u128, k as u128, p)
}

fn lucas(mut n: u128, mut k: u128, p: u32) -> u32 {
    let pp = p as u128;
    let mut acc = 1 % p;
    while k > 0 {
        let (nd, kd) = ((n % pp) as u32, (k % pp) as u32);
        if kd > nd {
            return 0;
        }
        acc = mul_mod(acc, small_binom(nd, kd, p), p);
        n /= pp;
        k /= pp;
    }
    acc
}

/// True iff adding `a` and `b` in base `p` carries at least once.
pub fn kummer_carry_vanishes(a: u64, b: u64, p: u32) -> bool {
    let (mut a, mut b) = (a, b);
    let pp = p as u64;
    let mut carry = 0;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % pp + b % pp + carry;
        if s >= pp {
            return true;
        }
        carry = 0;
        a /= pp;
        b /= pp;
    }
    false
}

/// p-adic valuation of `n!` (Legendre).
pub fn factorial_valuation(n: u64, p: u32) -> u64 {
    let mut v = 0;
    let mut q = n / p as u64;
    while q > 0 {
        v += q;
        q /= p as u64;
    }
    v
}

/// `n! / p^{v_p(n!)} mod p`.
pub fn factorial_unit(n: u64, p: u32) -> u32 {
    // n! = p^{n/p} (n/p)! · (product of non-multiples); the latter is
    // (-1)^{n/p} · (n mod p)! by Wilson.
    if n < p as u64 {
        return small_factorial(n as u32, p);
    }
    let q = n / p as u64;
    let rest = mul_mod(small_factorial((n % p as u64) as u32, p), factorial_unit(q, p), p);
    if q % 2 == 1 {
        (p - rest) % p
    } else {
        rest
    }
}

/// `(Σ parts)! / Π parts!` mod `p`, by valuation bookkeeping.
pub fn multinomial_mod_p(parts: &[u64], p: u32) -> u32 {
    let n: u64 = parts.iter().sum();
    let num_v = factorial_valuation(n, p);
    let den_v: u64 = parts.iter().map(|&k| factorial_valuation(k, p)).sum();
    assert!(num_v >= den_v, "negative valuation in a multinomial");
    if num_v > den_v {
        return 0;
    }
    let den = parts
        .iter()
        .fold(1 % p, |acc, &k| mul_mod(acc, factorial_unit(k, p), p));
    mul_mod(factorial_unit(n, p), inv_mod(den, p), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn integer_binom(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    #[test]
    fn digit_examples() {
        assert_eq!(base_p_digits(0, 3, 2).unwrap().digits, vec![0, 0]);
        assert_eq!(base_p_digits(5, 3, 2).unwrap().digits, vec![2, 1]);
        assert_eq!(base_p_digits(9, 3, 3).unwrap().digits, vec![0, 0, 1]);
        assert!(base_p_digits(9, 3, 2).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_mod_p(-17, 0, 5), 1);
        assert_eq!(binom_mod_p(3, 1, 3), 0);
        // oracle: (-1)^2 * binom(7, 2) = 21
        assert_eq!(binom_mod_p(-6, 2, 3), (integer_binom(7, 2) % 3) as u32);
        assert_eq!(binom_mod_p(-6, 2, 3), 0);
        // the top digit does not matter below p^r
        for z in 0..9u64 {
            for l in 0..9u64 {
                for a in 0..3u64 {
                    assert_eq!(binom_mod_p((a * 9 + z) as i64, l, 3), binom_mod_p(z as i64, l, 3));
                }
            }
        }
    }

    #[test]
    fn kummer_examples() {
        assert!(!kummer_carry_vanishes(1, 1, 3));
        assert!(!kummer_carry_vanishes(3, 3, 3));
        assert!(kummer_carry_vanishes(3, 6, 3));
        assert!(kummer_carry_vanishes(6, 6, 3));
        assert!(kummer_carry_vanishes(3, 7, 3));
    }

    #[test]
    fn kummer_matches_binomial_exhaustively() {
        for p in [3u32, 5] {
            let bound = (p * p * p) as u64;
            for a in 0..bound {
                for b in 0..bound {
                    assert_eq!(
                        kummer_carry_vanishes(a, b, p),
                        binom_mod_p((a + b) as i64, a, p) == 0,
                        "a={a} b={b} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn multinomial_against_integers() {
        for p in [3u32, 5, 7] {
            for a in 0..12u64 {
                for b in 0..12u64 {
                    for c in 0..6u64 {
                        let n = a + b + c;
                        let exact = integer_binom(n, a) * integer_binom(n - a, b);
                        assert_eq!(multinomial_mod_p(&[a, b, c], p) as u128, exact % p as u128);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn digits_roundtrip(n in 0u64..6561, p in prop::sample::select(vec![3u32, 5, 7])) {
            let d = base_p_digits(n, p, 8).unwrap();
            prop_assert!(d.digits.iter().all(|&x| x < p));
            prop_assert_eq!(d.value(), n);
        }

        #[test]
        fn lucas_matches_integer_binomial(n in 0u64..81, k in 0u64..81,
                                          p in prop::sample::select(vec![3u32, 5, 7])) {
            prop_assert_eq!(binom_mod_p(n as i64, k, p) as u128, integer_binom(n, k) % p as u128);
        }

        #[test]
        fn pascal_rule(n in -200i64..200, k in 1u64..60, p in prop::sample::select(vec![3u32, 5, 7])) {
            let lhs = binom_mod_p(n, k, p);
            let rhs = (binom_mod_p(n - 1, k, p) + binom_mod_p(n - 1, k - 1, p)) % p;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
