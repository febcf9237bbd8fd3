//! Bernoulli-Barnes numbers: the right-hand side of the linear system.
//!
//! `B_j(a) = sum over compositions i_1+...+i_r = j of
//! multinomial(j; i) * prod B_{i_t} * prod a_t^{i_t - 1}`.

use crate::bernoulli;
use crate::exact::{lcm_all, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("a part must be a positive integer")]
    ZeroPart,
    #[error("the part list must be nonempty")]
    Empty,
    #[error("part {part} does not divide the period {period}")]
    BadPeriod { part: u64, period: u64 },
}

/// The input vector `a` together with its derived length `r` and a common
/// multiple `D` of the parts (the quasi-polynomial period).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    parts: Vec<u64>,
    period: u64,
}

impl PartitionInstance {
    /// Instance with the minimal period D = lcm(a).
    pub fn new(parts: Vec<u64>) -> Result<Self, InstanceError> {
        if parts.is_empty() {
            return Err(InstanceError::Empty);
        }
        if parts.contains(&0) {
            return Err(InstanceError::ZeroPart);
        }
        let period = lcm_all(&parts);
        Ok(PartitionInstance { parts, period })
    }

    /// Instance with an explicit period, any common multiple of the parts.
    pub fn with_period(parts: Vec<u64>, period: u64) -> Result<Self, InstanceError> {
        let inst = Self::new(parts)?;
        if period % inst.period != 0 {
            let bad = inst
                .parts
                .iter()
                .copied()
                .find(|&p| period % p != 0)
                .unwrap_or(inst.period);
            return Err(InstanceError::BadPeriod { part: bad, period });
        }
        Ok(PartitionInstance { period, ..inst })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts r.
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// The period D.
    pub fn period(&self) -> u64 {
        self.period
    }
}

/// Exact Bernoulli-Barnes number B_j(a).
///
/// Compositions with a part that is odd and >= 3 contribute nothing
/// (the Bernoulli factor vanishes) and are pruned. The sum is accumulated
/// as one integer over the common denominator L^r * prod(a_t), where L is
/// the lcm of the Bernoulli denominators up to j.
pub fn barnes_number(j: u64, inst: &PartitionInstance) -> Rat {
    let r = inst.r();
    let j = j as usize;
    let (lcm, scaled) = bernoulli::with_table(j, |table| {
        let mut lcm = BigInt::one();
        for b in &table[..=j] {
            if !b.is_zero() {
                lcm = lcm.lcm(b.denom());
            }
        }
        // scaled[i] = numer(B_i) * (L / denom(B_i)); zero exactly when B_i = 0
        let scaled: Vec<BigInt> = table[..=j]
            .iter()
            .map(|b| b.numer() * (&lcm / b.denom()))
            .collect();
        (lcm, scaled)
    });
    // pows[t][i] = a_t^i
    let pows: Vec<Vec<BigInt>> = inst
        .parts
        .iter()
        .map(|&a| {
            let mut row = Vec::with_capacity(j + 1);
            let mut acc = BigInt::one();
            for _ in 0..=j {
                row.push(acc.clone());
                acc *= a;
            }
            row
        })
        .collect();

    let mut acc = BigInt::zero();
    compose(j, 0, r, &BigInt::one(), &scaled, &pows, &mut acc);

    let mut den = BigInt::one();
    for _ in 0..r {
        den *= &lcm;
    }
    for &a in &inst.parts {
        den *= a;
    }
    Rat::new(acc, den)
}

fn usable(i: usize) -> bool {
    i < 3 || i % 2 == 0
}

/// Walk compositions of `rem` into parts for levels `level..r`, carrying the
/// running multinomial * scaled-Bernoulli * power product in `partial`.
fn compose(
    rem: usize,
    level: usize,
    r: usize,
    partial: &BigInt,
    scaled: &[BigInt],
    pows: &[Vec<BigInt>],
    acc: &mut BigInt,
) {
    if level == r - 1 {
        if usable(rem) {
            *acc += partial * &scaled[rem] * &pows[level][rem];
        }
        return;
    }
    let mut binom = BigInt::one(); // C(rem, i), updated incrementally
    for i in 0..=rem {
        if usable(i) {
            let next = partial * &binom * &scaled[i] * &pows[level][i];
            if !next.is_zero() {
                compose(rem - i, level + 1, r, &next, scaled, pows, acc);
            }
        }
        if i < rem {
            binom = binom * BigInt::from((rem - i) as u64) / BigInt::from(i as u64 + 1);
        }
    }
}
