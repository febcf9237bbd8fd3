//! Serialization of results. Every rational is rendered as an exact
//! fraction string ("-691/2730", or "1" when the denominator is one);
//! floats never appear. JSON output is byte-deterministic: struct fields
//! serialize in declaration order and coefficient keys are sorted.

use denumerant::{QuasiPolynomial, Rat};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Wire form of a computed quasi-polynomial plus its certification summary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuasiPolyDoc {
    pub a: Vec<u64>,
    pub r: usize,
    #[serde(rename = "D")]
    pub d: u64,
    pub alpha: Vec<u64>,
    pub delta: String,
    /// Keyed "m,v" with 0 <= m <= r-1 and 1 <= v <= D.
    pub coeffs: BTreeMap<String, String>,
    pub certified_up_to: u64,
}

impl QuasiPolyDoc {
    pub fn new(
        a: &[u64],
        alpha: &[u64],
        delta: &Rat,
        qp: &QuasiPolynomial,
        certified_up_to: u64,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        for m in 0..qp.r() {
            for v in 1..=qp.period() {
                coeffs.insert(format!("{m},{v}"), qp.coeff(m, v).to_string());
            }
        }
        QuasiPolyDoc {
            a: a.to_vec(),
            r: qp.r(),
            d: qp.period(),
            alpha: alpha.to_vec(),
            delta: delta.to_string(),
            coeffs,
            certified_up_to,
        }
    }

    /// Rebuild the coefficient table from the wire form. Every "m,v" key in
    /// the r x D grid must be present exactly once.
    pub fn to_quasipoly(&self) -> Result<QuasiPolynomial, String> {
        let expected = self.r * self.d as usize;
        if self.coeffs.len() != expected {
            return Err(format!(
                "expected {expected} coefficients, found {}",
                self.coeffs.len()
            ));
        }
        let mut coeffs = vec![vec![Rat::default(); self.d as usize]; self.r];
        for (key, value) in &self.coeffs {
            let (m, v) = key
                .split_once(',')
                .ok_or_else(|| format!("bad coefficient key {key:?}"))?;
            let m: usize = m.parse().map_err(|e| format!("bad m in {key:?}: {e}"))?;
            let v: usize = v.parse().map_err(|e| format!("bad v in {key:?}: {e}"))?;
            if m >= self.r || v == 0 || v > self.d as usize {
                return Err(format!("coefficient key {key:?} out of range"));
            }
            coeffs[m][v - 1] = parse_fraction(value)?;
        }
        Ok(QuasiPolynomial::new(self.r, self.d, coeffs))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,v,coeff\n");
        for (key, value) in &self.coeffs {
            out.push_str(&format!("{key},{value}\n"));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "a = {:?}  r = {}  D = {}\n",
            self.a, self.r, self.d
        ));
        out.push_str(&format!("alpha = {:?}\n", self.alpha));
        out.push_str(&format!("delta = {}\n", self.delta));
        for (key, value) in &self.coeffs {
            let (m, v) = key.split_once(',').unwrap_or(("?", "?"));
            out.push_str(&format!("d[m={m}][v={v}] = {value}\n"));
        }
        out.push_str(&format!(
            "certified against counts for n <= {}\n",
            self.certified_up_to
        ));
        out
    }
}

pub fn parse_fraction(s: &str) -> Result<Rat, String> {
    BigRational::from_str(s).map_err(|e| format!("bad fraction {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use denumerant::exact::rat;

    #[test]
    fn doc_roundtrip_preserves_coefficients() {
        let qp = QuasiPolynomial::new(
            2,
            2,
            vec![vec![rat(1, 2), rat(1, 1)], vec![rat(1, 2), rat(1, 2)]],
        );
        let doc = QuasiPolyDoc::new(&[1, 2], &[2, 3, 4, 9], &rat(-7, 8640), &qp, 200);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: QuasiPolyDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_quasipoly().unwrap(), qp);
    }

    #[test]
    fn fraction_strings_are_exact() {
        assert_eq!(parse_fraction("-691/2730").unwrap(), rat(-691, 2730));
        assert_eq!(parse_fraction("1").unwrap(), rat(1, 1));
        assert!(parse_fraction("0.5").is_err());
    }
}
