//! r-wise Hamming matches and distances, distance profiles and Plotkin bounds.
//!
//! A subset of messages is an `M`-bit mask using the same bit layout as
//! columns: message `i` is bit `M - i`. A column is constant on a subset when
//! `column & mask` is `0` or `mask`.

use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::code_model::{check_m, ell_bar, full_mask, row_bit, weak_flip_count, TypeVector};
use crate::error::{Error, Result};
use crate::math::{binomial, gcd};

/// Mask of a set of 1-based message indices.
pub fn subset_mask(m: usize, subset: &[usize]) -> Result<u32> {
    check_m(m)?;
    let mut mask = 0;
    for &i in subset {
        if i == 0 || i > m {
            return Err(Error::MessageIndex { index: i, m });
        }
        mask |= row_bit(m, i);
    }
    Ok(mask)
}

fn checked_mask(t: &TypeVector, subset: &[usize]) -> Result<u32> {
    let mask = subset_mask(t.m(), subset)?;
    let size = mask.count_ones() as usize;
    if size < 2 {
        return Err(Error::SubsetSize { size, m: t.m() });
    }
    Ok(mask)
}

pub(crate) fn constant_on(column: u32, mask: u32) -> bool {
    let x = column & mask;
    x == 0 || x == mask
}

/// Match count for a subset mask, summing over the support of `t`.
pub fn match_for_mask(t: &TypeVector, mask: u32) -> u32 {
    t.zero_columns()
        + t.support().filter(|&(j, _)| constant_on(j, mask)).map(|(_, c)| c).sum::<u32>()
}

/// `a_I`: number of columns whose entries agree on every message of `subset`.
pub fn rwise_match(t: &TypeVector, subset: &[usize]) -> Result<u32> {
    Ok(match_for_mask(t, checked_mask(t, subset)?))
}

/// `d_I = n - a_I`.
pub fn rwise_distance(t: &TypeVector, subset: &[usize]) -> Result<u32> {
    Ok(t.n() as u32 - rwise_match(t, subset)?)
}

/// Match counts of every subset mask at once.
///
/// Columns constant on `I` either avoid `I` or contain it, so the table is
/// a subset-sum transform evaluated at the complement of `I` plus a
/// superset-sum transform evaluated at `I`, `O(M 2^M)` in total.
#[derive(Clone, Debug)]
pub struct MatchTable {
    m: usize,
    n: u32,
    matches: Vec<u32>,
}

impl MatchTable {
    pub fn new(t: &TypeVector) -> Self {
        let m = t.m();
        let size = 1usize << m;
        let mut subset_sum = vec![0u32; size];
        for (j, c) in t.support() {
            subset_sum[j as usize] += c;
        }
        subset_sum[0] += t.zero_columns();
        let mut superset_sum = subset_sum.clone();
        for bit in 0..m {
            let b = 1usize << bit;
            for s in 0..size {
                if s & b != 0 {
                    subset_sum[s] += subset_sum[s ^ b];
                } else {
                    superset_sum[s] += superset_sum[s | b];
                }
            }
        }
        let full = full_mask(m) as usize;
        let n = t.n() as u32;
        let mut matches = vec![0u32; size];
        matches[0] = n;
        for mask in 1..size {
            matches[mask] = subset_sum[full ^ mask] + superset_sum[mask];
        }
        MatchTable { m, n, matches }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, mask: u32) -> u32 {
        self.matches[mask as usize]
    }

    pub fn distance(&self, mask: u32) -> u32 {
        self.n - self.matches[mask as usize]
    }

    pub(crate) fn matches(&self) -> &[u32] {
        &self.matches
    }

    /// Largest match over all subsets of size `r`.
    pub fn max_match(&self, r: usize) -> u32 {
        self.matches
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask.count_ones() as usize == r)
            .map(|(_, &a)| a)
            .max()
            .unwrap_or(0)
    }
}

fn check_r(m: usize, r: usize) -> Result<()> {
    if (2..=m).contains(&r) {
        Ok(())
    } else {
        Err(Error::SubsetSize { size: r, m })
    }
}

/// `d_min;r`, the smallest r-wise distance over all `C(M, r)` subsets.
pub fn min_rwise_distance(t: &TypeVector, r: usize) -> Result<u32> {
    check_r(t.m(), r)?;
    Ok(t.n() as u32 - max_rwise_match(t, r)?)
}

/// `a_max;r = n - d_min;r`.
pub fn max_rwise_match(t: &TypeVector, r: usize) -> Result<u32> {
    check_r(t.m(), r)?;
    Ok(MatchTable::new(t).max_match(r))
}

/// Sum of `a_I` over all subsets of size `r`.
pub fn summed_rwise_match(t: &TypeVector, r: usize) -> Result<u64> {
    check_r(t.m(), r)?;
    let table = MatchTable::new(t);
    Ok(table
        .matches()
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask.count_ones() as usize == r)
        .map(|(_, &a)| u64::from(a))
        .sum())
}

/// Minimum r-wise distances and the pairwise distance vector of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    pub m: usize,
    pub n: usize,
    /// `min_rwise[r - 2]` is `d_min;r` for `r = 2..=⌈M/2⌉`.
    pub min_rwise: Vec<u32>,
    /// `d_12, d_13, d_23, d_14, d_24, d_34, ...`
    pub pairwise: Vec<u32>,
}

impl DistanceProfile {
    pub fn from_table(table: &MatchTable) -> Self {
        let m = table.m();
        let rmax = ell_bar(m).max(2);
        let mut best = vec![0u32; rmax + 1];
        for (mask, &a) in table.matches().iter().enumerate() {
            let r = mask.count_ones() as usize;
            if (2..=rmax).contains(&r) && a > best[r] {
                best[r] = a;
            }
        }
        let n = table.n();
        let min_rwise = (2..=rmax).map(|r| n - best[r]).collect();
        let mut pairwise = Vec::with_capacity(m * (m - 1) / 2);
        for j in 2..=m {
            for i in 1..j {
                pairwise.push(table.distance(row_bit(m, i) | row_bit(m, j)));
            }
        }
        DistanceProfile { m, n: n as usize, min_rwise, pairwise }
    }

    /// `d_min;r`, for `2 <= r <= ⌈M/2⌉`.
    pub fn min_rwise(&self, r: usize) -> u32 {
        self.min_rwise[r - 2]
    }
}

impl fmt::Display for DistanceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.min_rwise.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

struct MinRwise<'a>(&'a [u32]);

impl Serialize for MinRwise<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, d) in self.0.iter().enumerate() {
            map.serialize_entry(&(i + 2).to_string(), d)?;
        }
        map.end()
    }
}

impl Serialize for DistanceProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DistanceProfile", 2)?;
        s.serialize_field("min_rwise", &MinRwise(&self.min_rwise))?;
        s.serialize_field("pairwise", &self.pairwise)?;
        s.end()
    }
}

pub fn distance_profile(t: &TypeVector) -> DistanceProfile {
    DistanceProfile::from_table(&MatchTable::new(t))
}

/// Upper bound on `d_min;r`, kept as the exact fraction `numerator / denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlotkinBound {
    pub numerator: u128,
    pub denominator: u128,
}

impl PlotkinBound {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Largest integer distance allowed by the bound.
    pub fn floor(&self) -> u64 {
        (self.numerator / self.denominator) as u64
    }

    /// `d <= bound`.
    pub fn admits(&self, d: u64) -> bool {
        u128::from(d) * self.denominator <= self.numerator
    }

    /// `d == bound`, exactly.
    pub fn is_met_by(&self, d: u64) -> bool {
        u128::from(d) * self.denominator == self.numerator
    }
}

/// Generalized Plotkin bound on the minimum r-wise distance of any `(M, n)` code:
/// `n (1 - C(⌈M/2⌉-1, r-1) / C(2⌈M/2⌉-1, r-1))` for `r <= ⌈M/2⌉`, `n` above.
pub fn plotkin_bound(m: usize, n: usize, r: usize) -> Result<PlotkinBound> {
    check_m(m)?;
    check_r(m, r)?;
    let lb = ell_bar(m) as u64;
    let n = n as u128;
    if r as u64 > lb {
        return Ok(PlotkinBound { numerator: n, denominator: 1 });
    }
    let den = binomial(2 * lb - 1, r as u64 - 1);
    let num = n * (den - binomial(lb - 1, r as u64 - 1));
    let g = gcd(num, den).max(1);
    Ok(PlotkinBound { numerator: num / g, denominator: den / g })
}

/// Common r-wise distance of the fair weak flip code, `(n/L)(L - C(2⌈M/2⌉-r, ⌈M/2⌉))`.
pub fn fair_weak_flip_distance(m: usize, n: usize, r: usize) -> Result<u64> {
    check_m(m)?;
    check_r(m, r)?;
    let l = weak_flip_count(m);
    if n % l != 0 {
        return Err(Error::NotMultiple { n, modulus: l });
    }
    let lb = ell_bar(m) as u64;
    let missing = binomial((2 * lb).saturating_sub(r as u64), lb) as u64;
    Ok((n / l) as u64 * (l as u64 - missing))
}
