//! Finite-blocklength bounds for the BEC: the Shannon-Gallager-Berlekamp
//! pair for three and four codewords, and the Polyanskiy-Poor-Verdu
//! random-coding upper bound and converse lower bound.

use serde::Serialize;

use crate::bec_exact::Channel;
use crate::error::{Error, Result};
use crate::math::{ln_factorials, CompensatedSum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SgbBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Minimum discrepancy of the optimal three- or four-codeword code.
fn min_discrepancy(n: usize, delta: f64) -> f64 {
    let c = if n % 3 == 0 {
        2.0 / 3.0
    } else {
        ((n / 3) + (n + 1) / 3) as f64 / n as f64
    };
    -c * delta.ln()
}

/// SGB bounds for `M` in `{3, 4}`. The lower bound is clamped at 0; the
/// upper bound `(M - 1) e^(-n D_min)` is returned as is and can exceed 1.
pub fn sgb_bounds(m: usize, n: usize, ch: Channel) -> Result<SgbBounds> {
    if m != 3 && m != 4 {
        return Err(Error::UnsupportedCodewordCount { m, expected: "3 or 4" });
    }
    if n == 0 {
        return Err(Error::Blocklength { n, reason: "must be at least 1" });
    }
    let delta = ch.delta();
    if delta == 0.0 {
        return Err(Error::Delta(delta));
    }
    let nf = n as f64;
    let d = min_discrepancy(n, delta);
    let p_min = delta.min(1.0 - delta);
    let lower = (-nf * (d + (2.0 / nf).sqrt() * (1.0 / p_min).ln())).exp() / (4.0 * m as f64);
    let upper = (m as f64 - 1.0) * (-nf * d).exp();
    Ok(SgbBounds { lower: lower.max(0.0), upper })
}

/// `k ln x`, with `0 ln 0 = 0`.
fn ln_pow(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

struct LnBinomial(Vec<f64>);

impl LnBinomial {
    fn new(max: usize) -> Self {
        LnBinomial(ln_factorials(max))
    }

    fn get(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// Random-coding upper bound on the average error probability, averaged
/// over codebooks drawn uniformly with ties broken at random.
///
/// With `w_j` the probability of `j` unerased positions and `p = 2^-j` the
/// chance that another codeword agrees on them, the bound is
/// `1 - sum_j w_j sum_k C(M-1, k) p^k (1-p)^(M-1-k) / (k+1)`. Both weight
/// families sum to one, so it is evaluated as the sum of the positive terms
/// `w_j C(M-1, k) p^k (1-p)^(M-1-k) k / (k+1)`, which keeps small values accurate.
pub fn ppv_upper(m: usize, n: usize, ch: Channel) -> Result<f64> {
    if m == 0 {
        return Err(Error::CodewordCount(m));
    }
    let delta = ch.delta();
    let lnb = LnBinomial::new(n.max(m));
    let mut total = CompensatedSum::new();
    for j in 0..=n {
        if delta == 0.0 && j < n {
            continue;
        }
        let ln_w = lnb.get(n, j) + ln_pow(1.0 - delta, j) + ln_pow(delta, n - j);
        let ln_p = -(j as f64) * std::f64::consts::LN_2;
        let ln_q = if j == 0 { f64::NEG_INFINITY } else { (-(ln_p.exp())).ln_1p() };
        for k in 1..m {
            let rest = m - 1 - k;
            let lq = if rest == 0 { 0.0 } else { rest as f64 * ln_q };
            let ln_term = ln_w + lnb.get(m - 1, k) + k as f64 * ln_p + lq;
            total.add(ln_term.exp() * k as f64 / (k + 1) as f64);
        }
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// Converse lower bound valid for every `(M, n)` code.
pub fn ppv_lower(m: usize, n: usize, ch: Channel) -> Result<f64> {
    if m < 2 {
        return Err(Error::CodewordCount(m));
    }
    let delta = ch.delta();
    let floor = if m.is_power_of_two() {
        n as i64 - i64::from(m.trailing_zeros())
    } else {
        (n as f64 - (m as f64).log2() - 1e-9).floor() as i64
    };
    let start = (floor + 1).max(0) as usize;
    let lnb = LnBinomial::new(n);
    let mut total = 0.0;
    for e in start..=n {
        if delta == 0.0 {
            break;
        }
        let w = (lnb.get(n, e) + ln_pow(delta, e) + ln_pow(1.0 - delta, n - e)).exp();
        total += w * (1.0 - 2f64.powi((n - e) as i32) / m as f64);
    }
    Ok(total.clamp(0.0, 1.0))
}

/// All bounds at one `(M, n, delta)`; SGB values only for `M` in `{3, 4}`
/// and `delta > 0`. Every value is clamped into `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSet {
    pub m: usize,
    pub n: usize,
    pub delta: f64,
    pub sgb_lower: Option<f64>,
    pub sgb_upper: Option<f64>,
    pub ppv_lower: f64,
    pub ppv_upper: f64,
}

pub fn bound_set(m: usize, n: usize, ch: Channel) -> Result<BoundSet> {
    let sgb = if (m == 3 || m == 4) && ch.delta() > 0.0 && n > 0 {
        Some(sgb_bounds(m, n, ch)?)
    } else {
        None
    };
    Ok(BoundSet {
        m,
        n,
        delta: ch.delta(),
        sgb_lower: sgb.map(|b| b.lower.clamp(0.0, 1.0)),
        sgb_upper: sgb.map(|b| b.upper.clamp(0.0, 1.0)),
        ppv_lower: ppv_lower(m, n, ch)?,
        ppv_upper: ppv_upper(m, n, ch)?,
    })
}
