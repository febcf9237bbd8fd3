//! Exact Bernoulli numbers and polynomials, the integer-valued scalings
//! `D^n (B_n(v/D) - B_n)`, the Clausen-von Staudt decomposition, and the
//! congruence checks built on them.
//!
//! Conventions: `B_0 = 1`, `B_1 = -1/2`, `B_n = 0` for odd `n >= 3`, and
//! `B_n(x) = sum_k C(n,k) B_{n-k} x^k`.

use crate::exact::{self, is_prime, mod_pow, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BernoulliError {
    /// The scaled polynomial value came out non-integral, which would
    /// falsify the integrality theorem it relies on.
    #[error("D^n(B_n(v/D) - B_n) non-integral for n={n}, v={v}, D={d}")]
    NonIntegralTilde { n: u64, v: u64, d: u64 },
    /// The von Staudt integer part came out non-integral.
    #[error("B_{two_n} + sum of 1/p non-integral")]
    NonIntegralStaudt { two_n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} divides the period {d}")]
    PrimeDividesPeriod { p: u64, d: u64 },
}

/// Memoized table of Bernoulli numbers B_0, B_1, ...
///
/// Entries are produced from the tangent-number triangle, an integer-only
/// O(n^2) recurrence that stays fast well past index 2500. The defining
/// recurrence sum_{k<=n} C(n+1,k) B_k = 0 is kept as an independent check
/// in the tests.
pub struct BernoulliCache {
    table: Vec<Rat>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { table: Vec::new() }
    }

    /// Number of cached entries.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Extend the table so index n is available.
    pub fn ensure(&mut self, n: usize) {
        if self.table.len() > n {
            return;
        }
        // Recompute with headroom so repeated small extensions stay cheap.
        let target = (n + 1).max(self.table.len() * 2).max(64);
        self.table = build_table(target);
    }

    pub fn get(&mut self, n: usize) -> &Rat {
        self.ensure(n);
        &self.table[n]
    }

    pub fn table(&self) -> &[Rat] {
        &self.table
    }
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Tangent numbers T_1..T_m: integer triangle recurrence.
fn tangent_numbers(m: usize) -> Vec<BigInt> {
    if m == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); m + 1];
    t[1] = BigInt::one();
    for k in 2..=m {
        t[k] = &t[k - 1] * BigInt::from(k as u64 - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            let left = &t[j - 1] * BigInt::from((j - k) as u64);
            let right = &t[j] * BigInt::from((j - k + 2) as u64);
            t[j] = left + right;
        }
    }
    t.remove(0);
    t
}

fn build_table(upto: usize) -> Vec<Rat> {
    let m = upto / 2;
    let tangents = tangent_numbers(m);
    let mut table = Vec::with_capacity(upto + 1);
    table.push(Rat::one());
    if upto >= 1 {
        table.push(exact::rat(-1, 2));
    }
    let mut four_pow = BigInt::from(4); // 4^i
    for i in 1..=m {
        // B_{2i} = (-1)^{i-1} * 2i * T_i / (4^i (4^i - 1))
        let num = BigInt::from(2 * i as u64) * &tangents[i - 1];
        let num = if i % 2 == 0 { -num } else { num };
        let den = &four_pow * (&four_pow - BigInt::one());
        table.push(Rat::new(num, den));
        if table.len() <= upto {
            table.push(Rat::zero());
        }
        four_pow *= 4;
    }
    table.truncate(upto + 1);
    table
}

static CACHE: OnceLock<Mutex<BernoulliCache>> = OnceLock::new();

/// Run a closure against the shared table, grown to cover index `n`.
///
/// The closure must not call back into this module, since it runs under the
/// cache lock.
pub(crate) fn with_table<T>(n: usize, f: impl FnOnce(&[Rat]) -> T) -> T {
    let mut guard = CACHE
        .get_or_init(|| Mutex::new(BernoulliCache::new()))
        .lock()
        .expect("bernoulli cache poisoned");
    guard.ensure(n);
    f(guard.table())
}

/// Exact Bernoulli number B_n.
pub fn bernoulli_number(n: u64) -> Rat {
    with_table(n as usize, |t| t[n as usize].clone())
}

/// Exact value of the Bernoulli polynomial B_n(x) for rational x.
///
/// The sum over C(n,k) B_{n-k} x^k is accumulated as a single integer
/// numerator over the common denominator lcm(den B_j) * den(x)^n, so no
/// intermediate reduction is needed.
pub fn bernoulli_poly(n: u64, x: &Rat) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    if x.is_zero() {
        return bernoulli_number(n);
    }
    if x.is_one() {
        // B_n(1) = B_n for n >= 2; B_1(1) = 1/2.
        return if n == 1 {
            exact::rat(1, 2)
        } else {
            bernoulli_number(n)
        };
    }
    let nn = n as usize;
    let a = x.numer().clone();
    let b = x.denom().clone();
    with_table(nn, |table| {
        let lcm = denominator_lcm(&table[..=nn]);
        let mut acc = BigInt::zero();
        let mut binom = BigInt::one(); // C(n, k)
        let mut apow = BigInt::one(); // a^k
        let mut bpow = b.pow(n as u32); // b^{n-k}
        for k in 0..=nn {
            let bern = &table[nn - k];
            if !bern.is_zero() {
                let scale = &lcm / bern.denom();
                let term = &binom * &apow * &bpow * scale * bern.numer();
                acc += term;
            }
            if k < nn {
                binom = binom * BigInt::from((n as usize - k) as u64) / BigInt::from(k as u64 + 1);
                apow *= &a;
                bpow /= &b;
            }
        }
        Rat::new(acc, lcm * b.pow(n as u32))
    })
}

fn denominator_lcm(table: &[Rat]) -> BigInt {
    let mut lcm = BigInt::one();
    for b in table {
        if !b.is_zero() {
            lcm = lcm.lcm(b.denom());
        }
    }
    lcm
}

/// The integer D^n (B_n(v/D) - B_n) for 1 <= v <= D.
///
/// Integrality is a theorem; a non-integral result is reported as an
/// internal-consistency error rather than silently truncated.
pub fn tilde_b(n: u64, v: u64, d: u64) -> Result<BigInt, BernoulliError> {
    assert!(n >= 1, "tilde_b needs n >= 1");
    assert!(d >= 1 && v >= 1 && v <= d, "tilde_b needs 1 <= v <= D");
    let x = Rat::new(BigInt::from(v), BigInt::from(d));
    let scaled = BigInt::from(d).pow(n as u32);
    let value = (bernoulli_poly(n, &x) - bernoulli_number(n)) * Rat::from_integer(scaled);
    if !value.is_integer() {
        return Err(BernoulliError::NonIntegralTilde { n, v, d });
    }
    Ok(value.to_integer())
}

/// Clausen-von Staudt decomposition of an even-index Bernoulli number:
/// B_{2n} = A_{2n} - sum over primes p with (p-1) | 2n of 1/p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaudtDecomposition {
    pub index: u64,
    pub integer_part: BigInt,
    pub primes: Vec<u64>,
}

impl StaudtDecomposition {
    /// Reassemble B_{2n} from the stored parts.
    pub fn reassemble(&self) -> Rat {
        let sum: Rat = self
            .primes
            .iter()
            .map(|&p| Rat::new(BigInt::one(), BigInt::from(p)))
            .sum();
        Rat::from_integer(self.integer_part.clone()) - sum
    }
}

pub fn staudt_decompose(two_n: u64) -> Result<StaudtDecomposition, BernoulliError> {
    assert!(
        two_n >= 2 && two_n % 2 == 0,
        "staudt_decompose needs an even index >= 2"
    );
    let primes: Vec<u64> = (2..=two_n + 1)
        .filter(|&p| is_prime(p) && two_n % (p - 1) == 0)
        .collect();
    let sum: Rat = primes
        .iter()
        .map(|&p| Rat::new(BigInt::one(), BigInt::from(p)))
        .sum();
    let a = bernoulli_number(two_n) + sum;
    if !a.is_integer() {
        return Err(BernoulliError::NonIntegralStaudt { two_n });
    }
    Ok(StaudtDecomposition {
        index: two_n,
        integer_part: a.to_integer(),
        primes,
    })
}

/// Does p^n(B_n(v/p) - B_n) = v^n hold mod p? (True by a congruence lemma;
/// exposed as a checker so suites can exercise the claim. At p = 2 the
/// congruence only holds for even n and n = 1.)
pub fn residue_congruence_holds(n: u64, p: u64, v: u64) -> Result<bool, BernoulliError> {
    if !is_prime(p) {
        return Err(BernoulliError::NotPrime(p));
    }
    assert!(v >= 1 && v < p, "need 1 <= v <= p-1");
    let t = tilde_b(n, v, p)?;
    let lhs = t.mod_floor(&BigInt::from(p));
    let rhs = BigInt::from(mod_pow(v, n, p));
    Ok(lhs == rhs)
}

/// Does p divide D^p(B_p(v/D) - B_p) for p coprime to D? (Again a lemma,
/// exposed as a checker.)
pub fn prime_index_divisibility_holds(p: u64, d: u64, v: u64) -> Result<bool, BernoulliError> {
    if !is_prime(p) {
        return Err(BernoulliError::NotPrime(p));
    }
    if d % p == 0 {
        return Err(BernoulliError::PrimeDividesPeriod { p, d });
    }
    assert!(v >= 1 && v < d, "need 1 <= v <= D-1");
    let t = tilde_b(p, v, d)?;
    Ok(t.mod_floor(&BigInt::from(p)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{padic_val, rat, rat_int, Valuation};

    /// Independent oracle: the defining recurrence
    /// sum_{k=0}^{n} C(n+1, k) B_k = 0, solved for B_n.
    fn bernoulli_by_recurrence(upto: usize) -> Vec<Rat> {
        let mut b: Vec<Rat> = vec![Rat::one()];
        for n in 1..=upto {
            let mut sum = Rat::zero();
            for (k, bk) in b.iter().enumerate() {
                sum += Rat::from_integer(exact::binomial(n as u64 + 1, k as u64)) * bk;
            }
            let coeff = Rat::from_integer(exact::binomial(n as u64 + 1, n as u64));
            b.push(-sum / coeff);
        }
        b
    }

    #[test]
    fn production_table_matches_defining_recurrence() {
        let oracle = bernoulli_by_recurrence(160);
        let mut cache = BernoulliCache::new();
        cache.ensure(160);
        assert_eq!(&oracle[..], &cache.table()[..=160]);
    }

    #[test]
    fn bernoulli_number_examples() {
        assert_eq!(bernoulli_number(0), rat_int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(7), rat_int(0));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn cache_invariants() {
        let mut cache = BernoulliCache::new();
        cache.ensure(61);
        let t = cache.table();
        assert_eq!(t[0], rat_int(1));
        assert_eq!(t[1], rat(-1, 2));
        for n in (3..=61).step_by(2) {
            assert!(t[n].is_zero(), "B_{n} should vanish");
        }
    }

    #[test]
    fn poly_examples() {
        assert_eq!(bernoulli_poly(6, &rat_int(0)), bernoulli_number(6));
        assert_eq!(bernoulli_poly(2, &rat(1, 2)), rat(-1, 12));
        assert_eq!(bernoulli_poly(2, &rat_int(1)), rat(1, 6));
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_poly(2, &rat(1, 3)), rat(-1, 18));
        assert_eq!(bernoulli_poly(1, &rat_int(1)), rat(1, 2));
        assert_eq!(bernoulli_poly(0, &rat(7, 3)), rat_int(1));
    }

    #[test]
    fn poly_integer_shortcuts_match_general_path() {
        // x = 0 and x = 1 take dedicated branches; pin them to the sum.
        for n in [1u64, 2, 3, 8, 15] {
            let direct: Rat = (0..=n)
                .map(|k| Rat::from_integer(exact::binomial(n, k)) * bernoulli_number(n - k))
                .sum();
            assert_eq!(bernoulli_poly(n, &rat_int(1)), direct, "B_{n}(1)");
        }
    }

    /// Independent oracle for the common-denominator accumulation: the
    /// defining sum, term by term in plain rational arithmetic.
    fn poly_naive(n: u64, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut xpow = Rat::one();
        for k in 0..=n {
            acc += Rat::from_integer(exact::binomial(n, k)) * bernoulli_number(n - k) * &xpow;
            xpow *= x;
        }
        acc
    }

    #[test]
    fn poly_matches_naive_sum() {
        let points = [
            rat(1, 2),
            rat(2, 3),
            rat(5, 7),
            rat(-3, 4),
            rat(9, 5),
            rat_int(-2),
        ];
        for n in 0..=25u64 {
            for x in &points {
                assert_eq!(bernoulli_poly(n, x), poly_naive(n, x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn reflection_small_range() {
        // B_n(1-x) = (-1)^n B_n(x); the acceptance suite covers the full range.
        for n in 0..=12u64 {
            for q in 1..=6u64 {
                for a in 0..=q {
                    let x = Rat::new(BigInt::from(a), BigInt::from(q));
                    let lhs = bernoulli_poly(n, &(Rat::one() - &x));
                    let rhs = if n % 2 == 0 {
                        bernoulli_poly(n, &x)
                    } else {
                        -bernoulli_poly(n, &x)
                    };
                    assert_eq!(lhs, rhs, "n={n} x={a}/{q}");
                }
            }
        }
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(tilde_b(3, 1, 2).unwrap(), BigInt::from(0));
        assert_eq!(tilde_b(2, 1, 3).unwrap(), BigInt::from(-2));
        assert_eq!(tilde_b(2, 1, 2).unwrap(), BigInt::from(-1));
        // top of the range: D^n(B_n(1) - B_n) = 0 for n >= 2
        assert_eq!(tilde_b(9, 4, 4).unwrap(), BigInt::from(0));
    }

    #[test]
    fn tilde_parity_at_one_half() {
        // Odd-index vanishing needs n >= 3: it rests on B_n = 0, and B_1 != 0
        // (indeed 2(B_1(1/2) - B_1) = 1).
        assert_eq!(tilde_b(1, 1, 2).unwrap(), BigInt::from(1));
        for n in 2..=30u64 {
            let t = tilde_b(n, 1, 2).unwrap();
            if n % 2 == 1 {
                assert!(t.is_zero(), "odd n={n}");
            } else {
                assert!(t.is_odd(), "even n={n}");
            }
        }
    }

    #[test]
    fn staudt_examples() {
        let s2 = staudt_decompose(2).unwrap();
        assert_eq!(s2.integer_part, BigInt::from(1));
        assert_eq!(s2.primes, vec![2, 3]);
        let s4 = staudt_decompose(4).unwrap();
        assert_eq!(s4.integer_part, BigInt::from(1));
        assert_eq!(s4.primes, vec![2, 3, 5]);
        let s12 = staudt_decompose(12).unwrap();
        assert_eq!(s12.integer_part, BigInt::from(1));
        assert_eq!(s12.primes, vec![2, 3, 5, 7, 13]);
        assert_eq!(s12.reassemble(), bernoulli_number(12));
    }

    #[test]
    fn staudt_primes_always_contain_2_and_3() {
        for two_n in (2..=40u64).step_by(2) {
            let s = staudt_decompose(two_n).unwrap();
            assert!(s.primes.contains(&2) && s.primes.contains(&3));
            assert_eq!(s.reassemble(), bernoulli_number(two_n));
        }
    }

    #[test]
    fn valuation_dichotomy_small() {
        for two_n in (2..=24u64).step_by(2) {
            for p in [2u64, 3, 5, 7, 11, 13] {
                let v = padic_val(&bernoulli_number(two_n), p).unwrap();
                if two_n % (p - 1) == 0 {
                    assert_eq!(v, Valuation::Finite(-1), "2n={two_n} p={p}");
                } else {
                    assert!(v >= Valuation::Finite(0), "2n={two_n} p={p}");
                }
            }
        }
    }

    #[test]
    fn congruence_checker_examples() {
        assert!(residue_congruence_holds(2, 3, 1).unwrap());
        assert!(residue_congruence_holds(5, 5, 2).unwrap());
        assert!(residue_congruence_holds(4, 2, 1).unwrap());
        assert!(prime_index_divisibility_holds(3, 2, 1).unwrap());
        assert!(prime_index_divisibility_holds(5, 3, 2).unwrap());
        assert!(prime_index_divisibility_holds(3, 4, 3).unwrap());
        assert_eq!(
            prime_index_divisibility_holds(3, 6, 1),
            Err(BernoulliError::PrimeDividesPeriod { p: 3, d: 6 })
        );
        assert_eq!(
            residue_congruence_holds(2, 4, 1),
            Err(BernoulliError::NotPrime(4))
        );
    }
}
