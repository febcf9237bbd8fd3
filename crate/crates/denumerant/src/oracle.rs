//! Independent ground truth: dynamic-programming counts of p_a(n) and
//! interpolation-based recovery of the quasi-polynomial, used to certify the
//! linear-system pipeline.

use crate::barnes::PartitionInstance;
use crate::exact::Rat;
use crate::linsys::QuasiPolynomial;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Table of p_a(0..=upto) computed by the coin-counting recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    inst: PartitionInstance,
    counts: Vec<BigInt>,
}

impl CountTable {
    pub fn instance(&self) -> &PartitionInstance {
        &self.inst
    }

    pub fn upto(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn count(&self, n: u64) -> &BigInt {
        &self.counts[n as usize]
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }
}

/// Count solutions of sum a_i x_i = n for all n <= upto, one denomination at
/// a time: c[n] += c[n - a_i].
pub fn count_dp(inst: &PartitionInstance, upto: u64) -> CountTable {
    let upto = upto as usize;
    let mut counts = vec![BigInt::zero(); upto + 1];
    counts[0] = BigInt::one();
    for &a in inst.parts() {
        let a = a as usize;
        for n in a..=upto {
            let prev = counts[n - a].clone();
            counts[n] += prev;
        }
    }
    CountTable {
        inst: inst.clone(),
        counts,
    }
}

/// Recover the quasi-polynomial by exact Lagrange interpolation: for each
/// residue class v in [1, D], fit the degree <= r-1 polynomial through the
/// r nodes n = v, v + D, ..., v + (r-1)D (all >= 1).
pub fn quasipoly_fit(inst: &PartitionInstance) -> QuasiPolynomial {
    let r = inst.r();
    let d = inst.period();
    let table = count_dp(inst, d * r as u64);
    let mut coeffs = vec![vec![Rat::zero(); d as usize]; r];
    for v in 1..=d {
        let nodes: Vec<u64> = (0..r as u64).map(|i| v + i * d).collect();
        let poly = lagrange(&nodes, &table);
        for (m, c) in poly.into_iter().enumerate() {
            coeffs[m][v as usize - 1] = c;
        }
    }
    QuasiPolynomial::new(r, d, coeffs)
}

/// Monomial coefficients (constant first) of the unique polynomial through
/// (x_i, counts[x_i]).
fn lagrange(xs: &[u64], table: &CountTable) -> Vec<Rat> {
    let r = xs.len();
    let mut acc = vec![Rat::zero(); r];
    for (i, &xi) in xs.iter().enumerate() {
        // numerator polynomial prod_{j != i} (X - x_j), built coefficient-wise
        let mut basis = vec![Rat::zero(); r];
        basis[0] = Rat::one();
        let mut deg = 0;
        let mut denom = Rat::one();
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let root = Rat::from_integer(BigInt::from(xj));
            for k in (0..=deg).rev() {
                let old = basis[k].clone();
                let lifted = &basis[k + 1] + &old;
                basis[k + 1] = lifted;
                basis[k] = -(old * &root);
            }
            deg += 1;
            denom *= Rat::from_integer(BigInt::from(xi)) - root;
        }
        let y = Rat::from_integer(table.count(xi).clone());
        let scale = y / denom;
        for k in 0..r {
            let bumped = &acc[k] + &basis[k] * &scale;
            acc[k] = bumped;
        }
    }
    acc
}

/// One disagreement between the table and the polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub expected: BigInt,
    /// None when evaluation itself failed (non-integral or negative value).
    pub got: Option<BigInt>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.got {
            Some(got) => write!(
                f,
                "n={}: counted {}, evaluated {}",
                self.n, self.expected, got
            ),
            None => write!(
                f,
                "n={}: counted {}, evaluation failed",
                self.n, self.expected
            ),
        }
    }
}

/// Comparison of a quasi-polynomial against brute-force counts on 0..=n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    pub n_max: u64,
    pub mismatches: Vec<Mismatch>,
}

impl CertifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluate the polynomial on 0..=n_max and record every disagreement with
/// the count table. Evaluation failures count as mismatches.
pub fn certify(inst: &PartitionInstance, qp: &QuasiPolynomial, n_max: u64) -> CertifyReport {
    let table = count_dp(inst, n_max);
    let mut mismatches = Vec::new();
    for n in 0..=n_max {
        let expected = table.count(n).clone();
        match qp.eval(n) {
            Ok(got) if got == expected => {}
            Ok(got) => mismatches.push(Mismatch {
                n,
                expected,
                got: Some(got),
            }),
            Err(_) => mismatches.push(Mismatch {
                n,
                expected,
                got: None,
            }),
        }
    }
    CertifyReport { n_max, mismatches }
}
