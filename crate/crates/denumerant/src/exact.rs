//! Arbitrary-precision rational arithmetic, combinatorics helpers, primality
//! and p-adic valuations: the scalar layer everything else is built on.
//!
//! Rationals are [`num_rational::BigRational`], which stores values reduced
//! with a positive denominator, so equality is structural and zero has the
//! unique form `0/1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// The universal exact scalar.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("multinomial parts sum to {got}, expected {expected}")]
    PartsMismatch { expected: u64, got: u64 },
}

/// Shorthand for small rationals in tests and constructions.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Division that reports a zero divisor instead of panicking.
pub fn checked_div(lhs: &Rat, rhs: &Rat) -> Result<Rat, ExactError> {
    if rhs.is_zero() {
        return Err(ExactError::DivisionByZero);
    }
    Ok(lhs / rhs)
}

/// A p-adic order: an integer, or infinite exactly for the input zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Multinomial coefficient j! / (i_1! ... i_r!); the parts must sum to j.
pub fn multinomial(j: u64, parts: &[u64]) -> Result<BigInt, ExactError> {
    let got: u64 = parts.iter().sum();
    if got != j {
        return Err(ExactError::PartsMismatch { expected: j, got });
    }
    let mut rem = j;
    let mut c = BigInt::one();
    for &part in parts {
        c *= binomial(rem, part);
        rem -= part;
    }
    Ok(c)
}

/// Exponent of p in a nonzero integer; infinite for zero.
pub fn int_valuation(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        cur = q;
    }
}

/// p-adic order of a rational: v_p(numerator) - v_p(denominator), with
/// v_p(0) infinite. The modulus must be prime.
pub fn padic_val(q: &Rat, p: u64) -> Result<Valuation, ExactError> {
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = int_valuation(q.numer(), p)
        .finite()
        .expect("nonzero numerator");
    let vd = int_valuation(q.denom(), p)
        .finite()
        .expect("nonzero denominator");
    Ok(Valuation::Finite(vn - vd))
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// base^exp mod m by binary exponentiation, with u128 intermediates.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for the full u64 range.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than n.
pub fn next_prime(n: u64) -> u64 {
    prime_at_least(n + 1)
}

fn prime_at_least(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// Greedy smallest-first scan for primes q_1 < ... < q_count with
/// q_1 >= min_value and q_{j+1} - q_j > min_gap.
///
/// The gap constraint applies to consecutive pairs, of which a sequence of
/// length `count` has `count - 1`; a single prime carries no gap constraint.
pub fn gapped_primes(count: usize, min_value: u64, min_gap: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(prime_at_least(min_value));
    while out.len() < count {
        let last = *out.last().expect("nonempty");
        out.push(prime_at_least(last + min_gap + 1));
    }
    out
}

/// lcm of a nonempty slice of positive integers.
pub fn lcm_all(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, &v| acc.lcm(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_arithmetic_examples() {
        assert_eq!(rat(1, 6) + rat(1, 2), rat(2, 3));
        assert_eq!(rat(1, 3) * rat(3, 1), rat_int(1));
        let z = rat(5, 6) - rat(5, 6);
        assert!(z.is_zero());
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(
            checked_div(&rat(1, 2), &rat_int(0)),
            Err(ExactError::DivisionByZero)
        );
        assert_eq!(checked_div(&rat(1, 2), &rat(1, 4)).unwrap(), rat_int(2));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(9, 0), BigInt::from(1));
        assert_eq!(binomial(5, 7), BigInt::from(0));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), BigInt::from(6));
        assert_eq!(multinomial(2, &[2, 0]).unwrap(), BigInt::from(1));
        assert_eq!(multinomial(4, &[2, 2]).unwrap(), BigInt::from(6));
        assert!(matches!(
            multinomial(4, &[2, 1]),
            Err(ExactError::PartsMismatch {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_val(&rat_int(8), 2).unwrap(), Valuation::Finite(3));
        assert_eq!(padic_val(&rat_int(0), 5).unwrap(), Valuation::Infinite);
        assert_eq!(padic_val(&rat(-1, 30), 5).unwrap(), Valuation::Finite(-1));
        assert_eq!(padic_val(&rat(1, 2), 4), Err(ExactError::NotPrime(4)));
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2503));
        assert!(is_prime(2521));
        assert!(!is_prime(2519)); // 11 * 229
        assert_eq!(next_prime(8), 11);
        assert_eq!(next_prime(2), 3);
    }

    #[test]
    fn gapped_primes_examples() {
        assert_eq!(gapped_primes(2, 3, 2), vec![3, 7]);
        assert_eq!(gapped_primes(1, 3, 5), vec![3]);
        assert_eq!(gapped_primes(3, 11, 3), vec![11, 17, 23]);
        assert_eq!(gapped_primes(3, 3, 3), vec![3, 7, 11]);
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert!(Valuation::Finite(-1) < Valuation::Finite(0));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-200i64..200, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    fn val_add(a: Valuation, b: Valuation) -> Valuation {
        match (a.finite(), b.finite()) {
            (Some(x), Some(y)) => Valuation::Finite(x + y),
            _ => Valuation::Infinite,
        }
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(q1 in small_rat(), q2 in small_rat(), pidx in 0usize..4) {
            let p = [2u64, 3, 5, 7][pidx];
            let lhs = padic_val(&(&q1 * &q2), p).unwrap();
            let rhs = val_add(padic_val(&q1, p).unwrap(), padic_val(&q2, p).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn valuation_ultrametric(q1 in small_rat(), q2 in small_rat(), pidx in 0usize..4) {
            let p = [2u64, 3, 5, 7][pidx];
            let v1 = padic_val(&q1, p).unwrap();
            let v2 = padic_val(&q2, p).unwrap();
            let vsum = padic_val(&(&q1 + &q2), p).unwrap();
            prop_assert!(vsum >= v1.min(v2));
            if v1 != v2 {
                prop_assert_eq!(vsum, v1.min(v2));
            }
        }

        #[test]
        fn pascal_recurrence(n in 1u64..40, k in 0u64..40) {
            if k >= 1 && k < n {
                prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }

        #[test]
        fn gapped_primes_contract(count in 1usize..6, minv in 2u64..50, gap in 0u64..10) {
            let ps = gapped_primes(count, minv, gap);
            prop_assert_eq!(ps.len(), count);
            prop_assert!(ps[0] >= minv);
            for w in ps.windows(2) {
                prop_assert!(w[1] - w[0] > gap);
            }
            for &p in &ps {
                prop_assert!(is_prime(p));
            }
        }
    }
}
