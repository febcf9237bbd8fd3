//! Constructions of the exponent sequences `alpha_1 < ... < alpha_{rD}`,
//! `alpha_1 >= 2`, that make the coefficient system nonsingular.
//!
//! Three constructions are implemented, one per period class:
//!
//! - `D = 1`: `alpha_j = p_j - j` from primes with `p_1 > 2` and consecutive
//!   gaps `> r`. The gap condition applies to the `r - 1` consecutive pairs.
//! - `D = 2`: `alpha_j = 2^(t+j-1) - j + 1` with the smallest positive `t`
//!   such that `2^t >= r`, so the 2-adic order of `alpha_j + j - 1` is
//!   exactly `t + j - 1`; then a prime tail as below.
//! - `D = p` an odd prime: an odd block of `r(p-1)/2` entries built from
//!   powers `p^(t_s)`, a mirrored even block from fresh powers `p^(u_s)`
//!   with `u_s > t_r`, then a prime tail.
//!
//! The prime tail shared by the `D >= 2` constructions takes primes
//! `q_1 < ... < q_r` with `q_1 >= alpha_{r(D-1)} + r` and gaps `> r` and
//! appends `q_j - j`, advancing the starting prime when the first tail entry
//! would collide with the block before it.
//!
//! For composite D no construction is known; [`search_alpha`] enumerates
//! increasing sequences deterministically and keeps the first one whose
//! determinant is exactly nonzero.

use crate::exact::{gapped_primes, is_prime};
use crate::linsys;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// Which construction produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    D1Primes,
    D2Powers,
    PrimeD,
    Search,
    User,
}

/// Construction parameters, kept for reporting and for the valuation checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionParams {
    None,
    D1 {
        primes: Vec<u64>,
    },
    D2 {
        t: u32,
        tail_primes: Vec<u64>,
    },
    PrimeD {
        t_exps: Vec<u32>,
        u_exps: Vec<u32>,
        tail_primes: Vec<u64>,
    },
}

/// A strictly increasing exponent sequence of length `r * D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSequence {
    values: Vec<u64>,
    r: usize,
    d: u64,
    provenance: Provenance,
    params: ConstructionParams,
}

/// Block sizes of the parity split for `D >= 2`:
/// `k = floor((D-1)/2)`, `k_bar = ceil((D-1)/2)`, `n_odd = floor((D-1)r/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub k: usize,
    pub k_bar: usize,
    pub n_odd: usize,
}

impl SplitSpec {
    pub fn new(r: usize, d: u64) -> Self {
        let dm1 = (d - 1) as usize;
        SplitSpec {
            k: dm1 / 2,
            k_bar: dm1 - dm1 / 2,
            n_odd: dm1 * r / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, got: usize },
    NotIncreasing { index: usize },
    FloorViolation { first: u64 },
    ParityViolation { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { expected, got } => {
                write!(f, "length {got}, expected {expected}")
            }
            Violation::NotIncreasing { index } => {
                write!(f, "not strictly increasing at index {index}")
            }
            Violation::FloorViolation { first } => {
                write!(f, "first entry {first} is below 2")
            }
            Violation::ParityViolation { index } => {
                write!(f, "odd/even block parity broken at index {index}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphaError {
    #[error("no construction covers composite period {0}; pass an explicit sequence or search")]
    CompositePeriod(u64),
    #[error("construction kept degenerating for r={r}, D={d}")]
    Degenerate { r: usize, d: u64 },
    #[error("construction for r={r}, D={d} exceeds the 64-bit exponent range")]
    OutOfRange { r: usize, d: u64 },
}

impl AlphaSequence {
    /// Wrap an externally supplied sequence, rejecting structural violations.
    pub fn user(values: Vec<u64>, r: usize, d: u64) -> Result<Self, Vec<Violation>> {
        let seq = AlphaSequence {
            values,
            r,
            d,
            provenance: Provenance::User,
            params: ConstructionParams::None,
        };
        let violations = seq.validate();
        if violations.is_empty() {
            Ok(seq)
        } else {
            Err(violations)
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The period D this sequence is built for.
    pub fn period(&self) -> u64 {
        self.d
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    /// Structural checks: length `rD`, strictly increasing, first entry
    /// at least 2, and for the odd-prime construction the odd/even block
    /// parity. Violations are data, not errors.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let expected = self.r * self.d as usize;
        if self.values.len() != expected {
            out.push(Violation::WrongLength {
                expected,
                got: self.values.len(),
            });
        }
        if let Some(&first) = self.values.first() {
            if first < 2 {
                out.push(Violation::FloorViolation { first });
            }
        }
        for (i, w) in self.values.windows(2).enumerate() {
            if w[1] <= w[0] {
                out.push(Violation::NotIncreasing { index: i + 1 });
            }
        }
        // Parity is a property of the D >= 3 construction, not of arbitrary
        // sequences: searched or user-supplied ones may break it freely.
        if self.d >= 3 && self.provenance == Provenance::PrimeD {
            let spec = SplitSpec::new(self.r, self.d);
            let block_len = self.r * (self.d - 1) as usize;
            for (i, &v) in self.values.iter().take(block_len).enumerate() {
                let want_odd = i < spec.n_odd;
                if (v % 2 == 1) != want_odd {
                    out.push(Violation::ParityViolation { index: i });
                }
            }
        }
        out
    }
}

/// Tail entries `q_j - j` from gapped primes starting at or above
/// `start_min`; the start advances until the first entry exceeds `floor`.
fn prime_tail(r: usize, start_min: u64, floor: u64) -> (Vec<u64>, Vec<u64>) {
    let mut start = start_min;
    loop {
        let qs = gapped_primes(r, start, r as u64);
        let tail: Vec<u64> = qs
            .iter()
            .enumerate()
            .map(|(i, &q)| q - (i as u64 + 1))
            .collect();
        if tail[0] > floor {
            return (tail, qs);
        }
        start = qs[0] + 1;
    }
}

/// D = 1 construction: `alpha_j = p_j - j`.
pub fn alpha_d1(r: usize) -> AlphaSequence {
    assert!(r >= 1);
    let primes = gapped_primes(r, 3, r as u64);
    let values: Vec<u64> = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| p - (i as u64 + 1))
        .collect();
    AlphaSequence {
        values,
        r,
        d: 1,
        provenance: Provenance::D1Primes,
        params: ConstructionParams::D1 { primes },
    }
}

/// D = 2 construction: power-of-two head `2^(t+j-1) - j + 1`, prime tail.
pub fn alpha_d2(r: usize) -> AlphaSequence {
    assert!(r >= 1);
    let mut t = 1u32;
    while (1u64 << t) < r as u64 {
        t += 1;
    }
    assert!(
        t as usize + r - 1 < 64,
        "construction for r={r} exceeds the 64-bit exponent range"
    );
    let head: Vec<u64> = (1..=r as u64)
        .map(|j| (1u64 << (t as u64 + j - 1)) - j + 1)
        .collect();
    let last = head[r - 1];
    let (tail, tail_primes) = prime_tail(r, last + r as u64, last);
    let mut values = head;
    values.extend(tail);
    AlphaSequence {
        values,
        r,
        d: 2,
        provenance: Provenance::D2Powers,
        params: ConstructionParams::D2 { t, tail_primes },
    }
}

/// Odd prime D construction with minimal exponents.
pub fn alpha_prime_d(p: u64, r: usize) -> AlphaSequence {
    alpha_prime_d_shifted(p, r, 0)
}

/// Same construction with the even-block exponents shifted up, used to
/// escalate when the even-block determinant happens to vanish.
///
/// Panics if the powers leave the 64-bit range; [`alpha_for`] screens for
/// that and reports it as an error instead.
pub(crate) fn alpha_prime_d_shifted(p: u64, r: usize, u_shift: u32) -> AlphaSequence {
    assert!(r >= 1);
    assert!(
        p >= 3 && p % 2 == 1 && is_prime(p),
        "period must be an odd prime"
    );
    assert!(
        prime_construction_fits(p, r, u_shift),
        "construction for r={r}, D={p} exceeds the 64-bit exponent range"
    );
    let k = ((p - 1) / 2) as usize;

    let t1 = minimal_t1(p, r);
    let t_exps: Vec<u32> = (0..r as u32).map(|s| t1 + s).collect();
    let u_exps: Vec<u32> = (1..=r as u32)
        .map(|s| t_exps[r - 1] + s + u_shift)
        .collect();

    let mut values = Vec::with_capacity(r * p as usize);
    let mut push_block = |exps: &[u32], shift: u64| {
        for s in 1..=r {
            let pw = p.pow(exps[s - 1]);
            for j in 1..=k as u64 {
                let lead = if s % 2 == 0 {
                    2 * j * pw
                } else {
                    (2 * j - 1) * pw
                };
                values.push(lead - s as u64 + shift);
            }
        }
    };
    push_block(&t_exps, 1);
    push_block(&u_exps, 2);

    let last = *values.last().expect("nonempty block");
    let (tail, tail_primes) = prime_tail(r, last + r as u64, last);
    values.extend(tail);

    AlphaSequence {
        values,
        r,
        d: p,
        provenance: Provenance::PrimeD,
        params: ConstructionParams::PrimeD {
            t_exps,
            u_exps,
            tail_primes,
        },
    }
}

/// Smallest positive t_1 with p^(t_1) > r - 1; for r = 1 the bound is
/// vacuous and t_1 = 1.
fn minimal_t1(p: u64, r: usize) -> u32 {
    let mut t1 = 1u32;
    while p.checked_pow(t1).is_some_and(|pw| pw <= (r - 1) as u64) {
        t1 += 1;
    }
    t1
}

/// Does the largest value of the construction, about (p-1) p^(t_r + r),
/// stay within u64?
fn prime_construction_fits(p: u64, r: usize, u_shift: u32) -> bool {
    let top_exp = minimal_t1(p, r) + 2 * (r as u32 - 1) + 1 + u_shift;
    p.checked_pow(top_exp)
        .and_then(|pw| pw.checked_mul(p - 1))
        .and_then(|v| v.checked_add(2 * r as u64))
        .is_some()
}

const MAX_ESCALATIONS: u32 = 8;

/// Construct a sequence for (r, D) in the covered period classes, verifying
/// for odd prime D that both split determinants are nonzero and escalating
/// the even-block exponents otherwise.
pub fn alpha_for(r: usize, d: u64) -> Result<AlphaSequence, AlphaError> {
    assert!(r >= 1 && d >= 1);
    match d {
        1 => Ok(alpha_d1(r)),
        2 => Ok(alpha_d2(r)),
        p if is_prime(p) => {
            if !prime_construction_fits(p, r, 0) {
                return Err(AlphaError::OutOfRange { r, d });
            }
            for shift in 0..MAX_ESCALATIONS {
                if !prime_construction_fits(p, r, shift) {
                    break;
                }
                let cand = alpha_prime_d_shifted(p, r, shift);
                if !cand.validate().is_empty() {
                    continue;
                }
                match linsys::split_deltas(&cand) {
                    Ok((dp, dpp)) if !dp.is_zero() && !dpp.is_zero() => return Ok(cand),
                    _ => continue,
                }
            }
            Err(AlphaError::Degenerate { r, d })
        }
        _ => Err(AlphaError::CompositePeriod(d)),
    }
}

/// Outcome of the deterministic search.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found(AlphaSequence),
    NotFound { tried: u64 },
}

/// Deterministic enumeration of candidate sequences: combinations of size
/// `rD` listed by growing largest element, lexicographic within, starting
/// from (2, 3, ..., rD + 1). The first candidate whose determinant is
/// exactly nonzero wins.
pub fn search_alpha(r: usize, d: u64, budget: u64) -> SearchOutcome {
    let size = r * d as usize;
    let mut tried = 0u64;
    for values in Candidates::new(size) {
        if tried == budget {
            return SearchOutcome::NotFound { tried };
        }
        tried += 1;
        let cand = AlphaSequence {
            values,
            r,
            d,
            provenance: Provenance::Search,
            params: ConstructionParams::None,
        };
        debug_assert!(cand.validate().is_empty());
        if let Ok(det) = linsys::delta(&cand) {
            if !det.is_zero() {
                return SearchOutcome::Found(cand);
            }
        }
    }
    SearchOutcome::NotFound { tried }
}

/// Iterator over candidate value vectors; never exhausts.
struct Candidates {
    size: usize,
    hi: u64,
    /// Lexicographic combination of `size - 1` values over [2, hi).
    combo: Vec<u64>,
    fresh: bool,
}

impl Candidates {
    fn new(size: usize) -> Self {
        assert!(size >= 1);
        Candidates {
            size,
            hi: size as u64 + 1,
            combo: (2..size as u64 + 1).collect(),
            fresh: true,
        }
    }

    fn advance(&mut self) {
        let m = self.combo.len();
        let mut i = m;
        while i > 0 {
            i -= 1;
            let max_here = self.hi - (m - i) as u64;
            if self.combo[i] < max_here {
                self.combo[i] += 1;
                for l in i + 1..m {
                    self.combo[l] = self.combo[l - 1] + 1;
                }
                return;
            }
        }
        self.hi += 1;
        self.combo = (2..self.size as u64 + 1).collect();
    }
}

impl Iterator for Candidates {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.fresh {
            self.fresh = false;
        } else {
            self.advance();
        }
        let mut out = self.combo.clone();
        out.push(self.hi);
        Some(out)
    }
}
