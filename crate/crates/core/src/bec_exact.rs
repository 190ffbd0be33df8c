//! Exact ML error probability on the binary erasure channel.
//!
//! With `d_I` the r-wise distance of message subset `I`,
//!
//! ```text
//! P_e = (1/M) sum_{|I| >= 2} (-1)^|I| delta^(d_I)
//! ```
//!
//! Subsets with equal distance are pooled first, so a code is summarized by
//! the integer coefficients `c_d` of `M P_e = sum_d c_d delta^d`. Equivalent
//! codes get identical coefficient vectors and therefore bit-identical
//! probabilities.

use serde::Serialize;

use crate::code_model::{check_m, Codebook, TypeVector};
use crate::distances::{match_for_mask, MatchTable};
use crate::error::{Error, Result};
use crate::math::CompensatedSum;

/// Largest blocklength accepted by [`oracle_error_probability`].
pub const ORACLE_MAX_N: usize = 14;

/// A BEC with erasure probability `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    delta: f64,
}

impl Channel {
    pub fn new(delta: f64) -> Result<Self> {
        if (0.0..1.0).contains(&delta) {
            Ok(Channel { delta })
        } else {
            Err(Error::Delta(delta))
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub delta: f64,
    pub p_error: f64,
    #[serde(skip)]
    pub p_success: f64,
    /// Per-message error probabilities, only from the oracle.
    #[serde(rename = "lambda", skip_serializing_if = "Option::is_none")]
    pub per_message: Option<Vec<f64>>,
}

impl EvalResult {
    fn new(delta: f64, p_error: f64, per_message: Option<Vec<f64>>) -> Self {
        let p_error = p_error.clamp(0.0, 1.0);
        EvalResult { delta, p_error, p_success: 1.0 - p_error, per_message }
    }
}

/// `M P_e` as a polynomial in `delta` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErrorPolynomial {
    m: usize,
    coefficients: Vec<i64>,
}

impl ErrorPolynomial {
    pub fn new(t: &TypeVector) -> Self {
        Self::from_table(&MatchTable::new(t))
    }

    pub fn from_table(table: &MatchTable) -> Self {
        let n = table.n() as usize;
        let mut coefficients = vec![0i64; n + 1];
        for (mask, &a) in table.matches().iter().enumerate() {
            let r = mask.count_ones();
            if r >= 2 {
                coefficients[n - a as usize] += if r % 2 == 0 { 1 } else { -1 };
            }
        }
        ErrorPolynomial { m: table.m(), coefficients }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `c_d` for `d = 0..=n`.
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// `P_e` at erasure probability `delta`.
    pub fn evaluate(&self, delta: f64) -> f64 {
        weighted_sum(&self.coefficients, |d| delta.powf(d as f64)) / self.m as f64
    }

    /// `P_e` given a table of `delta^d`, `d >= 0`, at least `n + 1` long.
    pub fn evaluate_with_powers(&self, powers: &[f64]) -> f64 {
        weighted_sum(&self.coefficients, |d| powers[d]) / self.m as f64
    }
}

fn weighted_sum(coefficients: &[i64], power: impl Fn(usize) -> f64) -> f64 {
    let mut s = CompensatedSum::new();
    for (d, &c) in coefficients.iter().enumerate() {
        if c != 0 {
            s.add(c as f64 * power(d));
        }
    }
    s.value()
}

/// Exact average error probability of a code of type `t`.
pub fn error_probability(t: &TypeVector, ch: Channel) -> EvalResult {
    let p = ErrorPolynomial::new(t).evaluate(ch.delta);
    EvalResult::new(ch.delta, p, None)
}

/// The same sum evaluated term by term over every subset, without pooling.
pub fn error_probability_direct(t: &TypeVector, ch: Channel) -> f64 {
    let m = t.m();
    let n = t.n() as u32;
    let mut s = CompensatedSum::new();
    for mask in 1u32..(1 << m) {
        let r = mask.count_ones();
        if r < 2 {
            continue;
        }
        let d = n - match_for_mask(t, mask);
        let term = ch.delta.powf(f64::from(d));
        s.add(if r % 2 == 0 { term } else { -term });
    }
    s.value() / m as f64
}

/// Which of several equally likely codewords the ML decoder outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Cycles through the tied messages, advancing once per tied output.
    RoundRobin,
}

/// Brute-force ML decoding over all `3^n` channel outputs.
///
/// A codeword is compatible with an output when it agrees on every
/// unerased position; all compatible codewords share the likelihood
/// `(1 - delta)^(n - e) delta^e` for `e` erasures.
pub fn oracle_error_probability(cb: &Codebook, ch: Channel, tie_break: TieBreak) -> Result<EvalResult> {
    let n = cb.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge { n, max: ORACLE_MAX_N });
    }
    let m = cb.m();
    check_m(m)?;
    let rows: Vec<u64> = (1..=m).map(|i| cb.row_word(i)).collect();
    let all = (1u64 << n) - 1;
    let likelihood: Vec<f64> = (0..=n)
        .map(|e| (1.0 - ch.delta).powi((n - e) as i32) * ch.delta.powi(e as i32))
        .collect();
    let mut lambda = vec![CompensatedSum::new(); m];
    let mut compatible = Vec::with_capacity(m);
    let mut turn = 0usize;
    // every output y is an erasure pattern plus values on the unerased positions
    for erased in 0..=all {
        let kept = all & !erased;
        let p = likelihood[erased.count_ones() as usize];
        let mut values = 0u64;
        loop {
            compatible.clear();
            compatible.extend((0..m).filter(|&i| rows[i] & kept == values));
            if compatible.len() > 1 {
                let chosen = match tie_break {
                    TieBreak::LowestIndex => compatible[0],
                    TieBreak::HighestIndex => compatible[compatible.len() - 1],
                    TieBreak::RoundRobin => {
                        let c = compatible[turn % compatible.len()];
                        turn += 1;
                        c
                    }
                };
                for &i in &compatible {
                    if i != chosen {
                        lambda[i].add(p);
                    }
                }
            }
            if values == kept {
                break;
            }
            values = (values.wrapping_sub(kept)) & kept;
        }
    }
    let per_message: Vec<f64> = lambda.iter().map(|s| s.value()).collect();
    let avg: CompensatedSum = per_message.iter().copied().collect();
    Ok(EvalResult::new(ch.delta, avg.value() / m as f64, Some(per_message)))
}

/// `M (P_c(t + e_j) - P_c(t))`: the unnormalized success gain of appending column `j`.
pub fn append_gain(t: &TypeVector, j: u32, ch: Channel) -> Result<f64> {
    let before = ErrorPolynomial::new(t);
    let after = ErrorPolynomial::new(&t.appended(j)?);
    let len = after.coefficients.len();
    let mut diff = vec![0i64; len];
    for (d, &c) in before.coefficients.iter().enumerate() {
        diff[d] += c;
    }
    for (d, &c) in after.coefficients.iter().enumerate() {
        diff[d] -= c;
    }
    Ok(weighted_sum(&diff, |d| ch.delta.powf(d as f64)))
}

/// Evaluates one polynomial at many erasure probabilities.
pub fn error_probabilities(t: &TypeVector, channels: &[Channel]) -> Vec<EvalResult> {
    let poly = ErrorPolynomial::new(t);
    channels.iter().map(|ch| EvalResult::new(ch.delta, poly.evaluate(ch.delta), None)).collect()
}

impl ErrorPolynomial {
    /// `P_e` from signed subset counts indexed by distance.
    pub(crate) fn evaluate_histogram(m: usize, histogram: &[i64], powers: &[f64]) -> f64 {
        weighted_sum(histogram, |d| powers[d]) / m as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{candidate_count, codebook_from_type};
    use proptest::prelude::*;

    fn ch(d: f64) -> Channel {
        Channel::new(d).unwrap()
    }

    #[test]
    fn channel_range() {
        assert!(Channel::new(0.0).is_ok());
        assert!(Channel::new(1.0).is_err());
        assert!(Channel::new(-0.1).is_err());
    }

    #[test]
    fn repetition_code() {
        for n in 1..6 {
            let t = TypeVector::from_entries(2, &[(1, n)]).unwrap();
            let p = error_probability(&t, ch(0.3)).p_error;
            assert!((p - 0.3f64.powi(n as i32) / 2.0).abs() < 1e-16);
        }
    }

    #[test]
    fn small_examples() {
        let t = TypeVector::from_counts(3, vec![1, 1, 1]).unwrap();
        let r = error_probability(&t, ch(0.5));
        assert!((r.p_error - (3.0 * 0.25 - 0.125) / 3.0).abs() < 1e-15);
        assert!((r.p_error + r.p_success - 1.0).abs() < 1e-15);
        let t = TypeVector::from_entries(4, &[(3, 1), (5, 1), (6, 1)]).unwrap();
        assert!((error_probability(&t, ch(0.5)).p_error - 0.28125).abs() < 1e-15);
    }

    #[test]
    fn oracle_examples() {
        let cb = Codebook::from_row_strings(&["0", "1"]).unwrap();
        for d in [0.0, 0.2, 0.7] {
            let r = oracle_error_probability(&cb, ch(d), TieBreak::LowestIndex).unwrap();
            assert!((r.p_error - d / 2.0).abs() < 1e-15);
        }
        let cb = Codebook::from_row_strings(&["0110", "0110"]).unwrap();
        let r = oracle_error_probability(&cb, ch(0.4), TieBreak::LowestIndex).unwrap();
        assert!((r.p_error - 0.5).abs() < 1e-15);
        let t = TypeVector::from_counts(3, vec![1, 1, 1]).unwrap();
        let r = oracle_error_probability(&codebook_from_type(&t), ch(0.5), TieBreak::LowestIndex)
            .unwrap();
        assert!((r.p_error - 0.208_333_333_333_333_3).abs() < 1e-15);
        let lambda = r.per_message.unwrap();
        let mean = lambda.iter().sum::<f64>() / 3.0;
        assert!((mean - r.p_error).abs() < 1e-15);
    }

    #[test]
    fn oracle_size_guard() {
        let cb = Codebook::from_columns(2, vec![1; 15]).unwrap();
        assert!(matches!(
            oracle_error_probability(&cb, ch(0.1), TieBreak::LowestIndex),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn duplicate_codewords_at_zero_erasure() {
        let t = TypeVector::from_entries(3, &[(1, 2)]).unwrap();
        // rows 1 and 2 coincide, so one of them is always lost
        let p = error_probability(&t, ch(0.0)).p_error;
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn append_gain_examples() {
        let t = TypeVector::from_entries(4, &[(3, 1), (5, 1)]).unwrap();
        assert!((append_gain(&t, 6, ch(0.5)).unwrap() - 0.625).abs() < 1e-15);
        assert!((append_gain(&t, 7, ch(0.5)).unwrap() - 0.375).abs() < 1e-15);
        let t = TypeVector::from_entries(4, &[(3, 2), (5, 1), (6, 1)]).unwrap();
        assert!(append_gain(&t, 1, ch(1e-9)).unwrap().abs() < 1e-12);
    }

    fn arb_type(max_n: u32) -> impl Strategy<Value = TypeVector> {
        (2usize..=5).prop_flat_map(move |m| {
            prop::collection::vec((1..=candidate_count(m) as u32, 1..=2u32), 0..4)
                .prop_filter_map("blocklength", move |entries| {
                    let t = TypeVector::from_entries(m, &entries).unwrap();
                    (t.n() as u32 <= max_n).then_some(t)
                })
        })
    }

    proptest! {
        #[test]
        fn pooled_equals_direct(t in arb_type(8), d in 0.0f64..0.99) {
            let a = error_probability(&t, ch(d)).p_error;
            let b = error_probability_direct(&t, ch(d));
            prop_assert!((a - b).abs() <= 1e-13);
        }

        #[test]
        fn tie_break_invariance(t in arb_type(6), d in 0.0f64..0.99) {
            let cb = codebook_from_type(&t);
            let lo = oracle_error_probability(&cb, ch(d), TieBreak::LowestIndex).unwrap().p_error;
            let hi = oracle_error_probability(&cb, ch(d), TieBreak::HighestIndex).unwrap().p_error;
            let rr = oracle_error_probability(&cb, ch(d), TieBreak::RoundRobin).unwrap().p_error;
            prop_assert!((lo - hi).abs() <= 1e-15);
            prop_assert!((lo - rr).abs() <= 1e-15);
        }

        #[test]
        fn complemented_columns_evaluate_equally(t in arb_type(6), flip in any::<u8>(), d in 0.0f64..0.99) {
            let cb = codebook_from_type(&t);
            let mut other = cb.clone();
            for l in 0..cb.n() {
                if flip >> (l % 8) & 1 == 1 {
                    other = other.complement_column(l);
                }
            }
            let a = oracle_error_probability(&cb, ch(d), TieBreak::LowestIndex).unwrap().p_error;
            let b = oracle_error_probability(&other, ch(d), TieBreak::LowestIndex).unwrap().p_error;
            prop_assert!((a - b).abs() <= 1e-14);
        }

        #[test]
        fn monotone_in_delta(t in arb_type(10)) {
            let poly = ErrorPolynomial::new(&t);
            let mut prev = poly.evaluate(0.0);
            for i in 1..100 {
                let p = poly.evaluate(i as f64 / 100.0);
                prop_assert!(p >= prev - 1e-14);
                prev = p;
            }
        }

        #[test]
        fn appending_never_hurts(t in arb_type(8), j in 1u32..16, d in 0.0f64..0.99) {
            let j = (j - 1) % candidate_count(t.m()) as u32 + 1;
            prop_assert!(append_gain(&t, j, ch(d)).unwrap() >= -1e-14);
        }
    }
}
