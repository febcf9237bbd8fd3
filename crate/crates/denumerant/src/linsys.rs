//! The coefficient linear system, exact fraction-free determinants, and the
//! solver that turns an instance plus exponent sequence into the
//! quasi-polynomial.
//!
//! Row `j` of the system (1-based) evaluates, for every column pair `(m, v)`
//! with `0 <= m <= r-1` and `1 <= v <= D` at column index `mD + v`:
//!
//! ```text
//! D^(alpha_j + m) * B_{alpha_j + m}(v / D) / (alpha_j + m)
//! ```
//!
//! with right-hand side
//! `(-1)^(r-1) * (alpha_j - 1)! * D / (alpha_j + r - 1)! * B_{alpha_j+r-1}(a)`.
//! The solution vector, read in the same column order, is the coefficient
//! table `d_{a,m}(v)`.

use crate::alpha::{AlphaSequence, SplitSpec};
use crate::barnes::{barnes_number, PartitionInstance};
use crate::bernoulli::{self, tilde_b};
use crate::exact::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinsysError {
    #[error("matrix is {rows}x{cols}, need square")]
    NotSquare { rows: usize, cols: usize },
    #[error(
        "alpha built for (r={alpha_r}, D={alpha_d}) but instance has (r={inst_r}, D={inst_d})"
    )]
    ShapeMismatch {
        alpha_r: usize,
        alpha_d: u64,
        inst_r: usize,
        inst_d: u64,
    },
    #[error("singular system: the determinant vanishes for this alpha")]
    Singular { delta: Rat },
    #[error("period {d} is too small for this determinant family")]
    PeriodTooSmall { d: u64 },
    #[error("alpha breaks the odd/even block parity required by the split")]
    ParityViolation,
    #[error("block index {s} outside 1..={r}")]
    BlockOutOfRange { s: usize, r: usize },
    #[error("quasi-polynomial produced a non-integer at n={n}")]
    NonIntegral { n: u64 },
    #[error("quasi-polynomial produced a negative value at n={n}")]
    Negative { n: u64 },
    #[error(transparent)]
    Bernoulli(#[from] bernoulli::BernoulliError),
}

/// Dense exact matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RationalMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RationalMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Multiply one row by a factor; the determinant scales by the same
    /// factor.
    pub fn scale_row(&mut self, i: usize, factor: &Rat) {
        for j in 0..self.cols {
            let v = self.get(i, j) * factor;
            self.set(i, j, v);
        }
    }

    /// Matrix-vector product; panics on shape mismatch.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }
}

/// Scale each row to integers by the lcm of its denominators.
/// Returns the integer rows and the product of the scaling factors, so that
/// det(original) = det(integer) / scale.
fn clear_denominators(rows: &[Vec<Rat>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut l = BigInt::one();
        for e in row {
            l = l.lcm(e.denom());
        }
        out.push(row.iter().map(|e| e.numer() * (&l / e.denom())).collect());
        scale *= l;
    }
    (out, scale)
}

/// Fraction-free elimination on an integer matrix; every division is exact.
/// Returns the determinant.
fn bareiss_int(mat: &mut [Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(swap) => {
                    mat.swap(k, swap);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        if k + 1 == n {
            break;
        }
        let pivot_row = mat[k].clone();
        let pivot = pivot_row[k].clone();
        for row in mat.iter_mut().skip(k + 1) {
            let lead = std::mem::replace(&mut row[k], BigInt::zero());
            for j in k + 1..n {
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "bareiss division not exact");
                row[j] = num / &prev;
            }
        }
        prev = pivot;
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact determinant by denominator clearing plus fraction-free elimination.
pub fn bareiss_det(m: &RationalMatrix) -> Result<Rat, LinsysError> {
    if !m.is_square() {
        return Err(LinsysError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let rows: Vec<Vec<Rat>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let (mut int_rows, scale) = clear_denominators(&rows);
    let det = bareiss_int(&mut int_rows);
    Ok(Rat::new(det, scale))
}

/// The assembled system for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemBundle {
    pub matrix: RationalMatrix,
    pub rhs: Vec<Rat>,
    pub alpha: AlphaSequence,
    pub inst: PartitionInstance,
}

/// Coefficient matrix of the system; depends only on (r, D, alpha).
pub fn system_matrix(alpha: &AlphaSequence) -> RationalMatrix {
    let d = alpha.period();
    let n = alpha.len();
    RationalMatrix::from_fn(n, n, |row, col| {
        let m = col as u64 / d;
        let v = col as u64 % d + 1;
        let idx = alpha.values()[row] + m;
        let x = Rat::new(BigInt::from(v), BigInt::from(d));
        let poly = bernoulli::bernoulli_poly(idx, &x);
        let scale = Rat::new(BigInt::from(d).pow(idx as u32), BigInt::from(idx));
        scale * poly
    })
}

pub fn build_system(
    inst: &PartitionInstance,
    alpha: &AlphaSequence,
) -> Result<SystemBundle, LinsysError> {
    if alpha.r() != inst.r() || alpha.period() != inst.period() {
        return Err(LinsysError::ShapeMismatch {
            alpha_r: alpha.r(),
            alpha_d: alpha.period(),
            inst_r: inst.r(),
            inst_d: inst.period(),
        });
    }
    let r = inst.r() as u64;
    let d = inst.period();
    let matrix = system_matrix(alpha);
    let rhs = alpha
        .values()
        .iter()
        .map(|&aj| {
            // (alpha_j - 1)! / (alpha_j + r - 1)! collapses to one rising
            // factorial in the denominator.
            let mut rising = BigInt::one();
            for i in 0..r {
                rising *= aj + i;
            }
            let sign = if r % 2 == 1 { 1 } else { -1 };
            Rat::new(BigInt::from(sign) * d, rising) * barnes_number(aj + r - 1, inst)
        })
        .collect();
    Ok(SystemBundle {
        matrix,
        rhs,
        alpha: alpha.clone(),
        inst: inst.clone(),
    })
}

/// Exact solution of the bundled system by fraction-free forward elimination
/// on the augmented matrix and rational back-substitution.
pub fn solve_exact(bundle: &SystemBundle) -> Result<Vec<Rat>, LinsysError> {
    let n = bundle.matrix.rows();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n).map(|j| bundle.matrix.get(i, j).clone()).collect();
            row.push(bundle.rhs[i].clone());
            row
        })
        .collect();
    let (mut aug, _) = clear_denominators(&rows);

    let mut prev = BigInt::one();
    for k in 0..n {
        if aug[k][k].is_zero() {
            match (k + 1..n).find(|&i| !aug[i][k].is_zero()) {
                Some(swap) => aug.swap(k, swap),
                None => {
                    return Err(LinsysError::Singular { delta: Rat::zero() });
                }
            }
        }
        if k + 1 == n {
            break;
        }
        let pivot_row = aug[k].clone();
        let pivot = pivot_row[k].clone();
        for row in aug.iter_mut().skip(k + 1) {
            let lead = std::mem::replace(&mut row[k], BigInt::zero());
            for j in k + 1..=n {
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
        }
        prev = pivot;
    }

    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_integer(aug[i][n].clone());
        for j in i + 1..n {
            acc -= Rat::from_integer(aug[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rat::from_integer(aug[i][i].clone());
    }
    Ok(x)
}

/// The full rD x rD determinant for (r, D, alpha).
pub fn delta(alpha: &AlphaSequence) -> Result<Rat, LinsysError> {
    bareiss_det(&system_matrix(alpha))
}

/// The reduced r(D-1) square determinant over the integer-scaled values
/// `tilde B_n(v/D) = D^n(B_n(v/D) - B_n)`, columns v = 1..D-1, built from
/// the first r(D-1) entries of alpha. Needs D >= 2.
pub fn tilde_delta(alpha: &AlphaSequence) -> Result<Rat, LinsysError> {
    let d = alpha.period();
    if d < 2 {
        return Err(LinsysError::PeriodTooSmall { d });
    }
    let size = alpha.r() * (d - 1) as usize;
    let dm1 = (d - 1) as usize;
    let mut entries = Vec::with_capacity(size * size);
    for row in 0..size {
        for col in 0..size {
            let m = (col / dm1) as u64;
            let v = (col % dm1) as u64 + 1;
            let idx = alpha.values()[row] + m;
            let t = tilde_b(idx, v, d)?;
            entries.push(Rat::new(t, BigInt::from(idx)));
        }
    }
    let m = RationalMatrix {
        rows: size,
        cols: size,
        entries,
    };
    bareiss_det(&m)
}

/// Column layout of the two parity-split determinants: for the odd-row
/// block, even m contributes columns v = 1..k and odd m columns v = 1..k_bar;
/// the even-row block swaps the two limits.
fn split_columns(r: usize, spec: &SplitSpec, odd_block: bool) -> Vec<(u64, u64)> {
    let mut cols = Vec::new();
    for m in 0..r as u64 {
        let lim = if (m % 2 == 0) == odd_block {
            spec.k
        } else {
            spec.k_bar
        };
        for v in 1..=lim as u64 {
            cols.push((m, v));
        }
    }
    cols
}

/// The two block determinants of the parity split. Requires D >= 3 and the
/// odd/even block structure on the first r(D-1) entries of alpha.
pub fn split_deltas(alpha: &AlphaSequence) -> Result<(Rat, Rat), LinsysError> {
    let d = alpha.period();
    if d < 3 {
        return Err(LinsysError::PeriodTooSmall { d });
    }
    let r = alpha.r();
    let spec = SplitSpec::new(r, d);
    let block_len = r * (d - 1) as usize;
    for (i, &v) in alpha.values().iter().take(block_len).enumerate() {
        if (v % 2 == 1) != (i < spec.n_odd) {
            return Err(LinsysError::ParityViolation);
        }
    }

    let build = |rows: std::ops::Range<usize>,
                 cols: &[(u64, u64)]|
     -> Result<RationalMatrix, LinsysError> {
        let size = rows.len();
        debug_assert_eq!(size, cols.len());
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            let at = alpha.values()[row];
            for &(m, v) in cols {
                let idx = at + m;
                let t = tilde_b(idx, v, d)?;
                entries.push(Rat::new(t, BigInt::from(idx)));
            }
        }
        Ok(RationalMatrix {
            rows: size,
            cols: size,
            entries,
        })
    };

    let odd_cols = split_columns(r, &spec, true);
    let even_cols = split_columns(r, &spec, false);
    let odd = build(0..spec.n_odd, &odd_cols)?;
    let even = build(spec.n_odd..block_len, &even_cols)?;
    Ok((bareiss_det(&odd)?, bareiss_det(&even)?))
}

/// The k x k block determinant `M_s = det(tilde B_{alpha_{j+(s-1)k}+s-1}(v/p))`
/// over the s-th odd-block slice of a prime-period construction.
pub fn ms_block_det(s: usize, alpha: &AlphaSequence) -> Result<Rat, LinsysError> {
    let p = alpha.period();
    if p < 3 {
        return Err(LinsysError::PeriodTooSmall { d: p });
    }
    let r = alpha.r();
    if s == 0 || s > r {
        return Err(LinsysError::BlockOutOfRange { s, r });
    }
    let k = ((p - 1) / 2) as usize;
    let mut entries = Vec::with_capacity(k * k);
    for j in 1..=k {
        let aj = alpha.values()[(s - 1) * k + j - 1];
        for v in 1..=k as u64 {
            let t = tilde_b(aj + s as u64 - 1, v, p)?;
            entries.push(Rat::from_integer(t));
        }
    }
    let m = RationalMatrix {
        rows: k,
        cols: k,
        entries,
    };
    bareiss_det(&m)
}

/// The quasi-polynomial coefficient table `d[m][v]`, periodic in n with
/// period D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    r: usize,
    period: u64,
    coeffs: Vec<Vec<Rat>>,
}

impl QuasiPolynomial {
    /// Assemble from a coefficient table `coeffs[m][v-1]`.
    pub fn new(r: usize, period: u64, coeffs: Vec<Vec<Rat>>) -> Self {
        assert_eq!(coeffs.len(), r);
        assert!(coeffs.iter().all(|row| row.len() == period as usize));
        QuasiPolynomial { r, period, coeffs }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Coefficient of n^m on the residue class of v, 1-based v in [1, D].
    pub fn coeff(&self, m: usize, v: u64) -> &Rat {
        &self.coeffs[m][v as usize - 1]
    }

    /// The representative of n's residue class in [1, D]; n = 0 mod D maps
    /// to D.
    pub fn residue(&self, n: u64) -> u64 {
        let v = n % self.period;
        if v == 0 {
            self.period
        } else {
            v
        }
    }

    /// Evaluate at n. The value is asserted integral and nonnegative; a
    /// violation means the coefficient table is not a counting function.
    pub fn eval(&self, n: u64) -> Result<BigInt, LinsysError> {
        let v = self.residue(n);
        let nq = Rat::from_integer(BigInt::from(n));
        let mut acc = Rat::zero();
        for m in (0..self.r).rev() {
            acc = acc * &nq + self.coeff(m, v);
        }
        if !acc.is_integer() {
            return Err(LinsysError::NonIntegral { n });
        }
        let value = acc.to_integer();
        if value.is_negative() {
            return Err(LinsysError::Negative { n });
        }
        Ok(value)
    }
}

/// Solve the system once and repack the solution as d[m][v].
pub fn quasipoly_from_system(
    inst: &PartitionInstance,
    alpha: &AlphaSequence,
) -> Result<QuasiPolynomial, LinsysError> {
    let bundle = build_system(inst, alpha)?;
    let x = solve_exact(&bundle)?;
    let d = inst.period() as usize;
    let coeffs: Vec<Vec<Rat>> = (0..inst.r())
        .map(|m| x[m * d..(m + 1) * d].to_vec())
        .collect();
    Ok(QuasiPolynomial::new(inst.r(), inst.period(), coeffs))
}

/// Evaluate p_a(n) from a coefficient table.
pub fn eval_quasipoly(qp: &QuasiPolynomial, n: u64) -> Result<BigInt, LinsysError> {
    qp.eval(n)
}
