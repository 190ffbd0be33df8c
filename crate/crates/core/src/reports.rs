//! Named code families, error-probability sweeps, distance tables, and the
//! self-check suites behind `weakflip verify`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bec_exact::{
    append_gain, error_probability, oracle_error_probability, Channel, TieBreak,
};
use crate::bounds::bound_set;
use crate::code_model::{
    candidate_count, canonicalize, check_m, ell_bar, weak_flip_count, Codebook, FamilyTag,
    TypeVector,
};
use crate::constructions::{
    bsc_optimal_type, conjectured_m5m6, fair_linear, fair_weak_flip,
    generalized_fair_weak_flip_m8, hadamard_code, optimal_m3m4, recursive_m3m4, repetition,
    HadamardVariant,
};
use crate::distances::{
    distance_profile, fair_weak_flip_distance, min_rwise_distance, plotkin_bound,
};
use crate::error::{Error, Result};
use crate::formats::CodeFile;
use crate::search::{
    exhaustive_linear_search, exhaustive_search_multi, permuted_concatenation_search,
    punctured_linear_search, punctured_search, simulated_annealing, Restrict, SearchConfig,
    SearchReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Code families that can be built by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Best known code for the given size: repetition, optimal, conjectured or fair weak flip.
    Optimal,
    FairWeakFlip,
    OptimalM3M4,
    RecursiveM3M4,
    ConjecturedM5M6,
    FairLinear,
    Repetition,
    Hadamard(HadamardVariant),
    GeneralizedFairWeakFlipM8,
    BscOptimal,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "optimal" => Family::Optimal,
            "fair-weak-flip" => Family::FairWeakFlip,
            "optimal-m3" | "optimal-m4" | "optimal-m3m4" => Family::OptimalM3M4,
            "recursive-m3m4" => Family::RecursiveM3M4,
            "conjectured-m5" | "conjectured-m6" | "conjectured-m5m6" => Family::ConjecturedM5M6,
            "fair-linear" => Family::FairLinear,
            "repetition" => Family::Repetition,
            "hadamard-h1" => Family::Hadamard(HadamardVariant::H1),
            "hadamard-h1p" => Family::Hadamard(HadamardVariant::H1Prime),
            "hadamard-h2" => Family::Hadamard(HadamardVariant::H2),
            "hadamard-h3" => Family::Hadamard(HadamardVariant::H3),
            "generalized-fair-weak-flip" | "gfwf-m8" => Family::GeneralizedFairWeakFlipM8,
            "bsc-optimal" => Family::BscOptimal,
            _ => return Err(Error::Unknown { kind: "family", name: s.to_owned() }),
        })
    }
}

impl Family {
    pub const NAMES: &'static [&'static str] = &[
        "optimal",
        "fair-weak-flip",
        "optimal-m3",
        "optimal-m4",
        "recursive-m3m4",
        "conjectured-m5",
        "conjectured-m6",
        "fair-linear",
        "repetition",
        "hadamard-h1",
        "hadamard-h1p",
        "hadamard-h2",
        "hadamard-h3",
        "gfwf-m8",
        "bsc-optimal",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Optimal => "optimal",
            Family::FairWeakFlip => "fair-weak-flip",
            Family::OptimalM3M4 => "optimal-m3m4",
            Family::RecursiveM3M4 => "recursive-m3m4",
            Family::ConjecturedM5M6 => "conjectured-m5m6",
            Family::FairLinear => "fair-linear",
            Family::Repetition => "repetition",
            Family::Hadamard(HadamardVariant::H1) => "hadamard-h1",
            Family::Hadamard(HadamardVariant::H1Prime) => "hadamard-h1p",
            Family::Hadamard(HadamardVariant::H2) => "hadamard-h2",
            Family::Hadamard(HadamardVariant::H3) => "hadamard-h3",
            Family::GeneralizedFairWeakFlipM8 => "gfwf-m8",
            Family::BscOptimal => "bsc-optimal",
        }
    }

    /// Builds a code. `m` may be implied by the family name (`optimal-m4`),
    /// Hadamard codes take `order` instead of `m` and `n`.
    pub fn build(&self, m: Option<usize>, n: Option<usize>, order: Option<usize>) -> Result<CodeFile> {
        let need_m = || m.ok_or_else(|| Error::Config(format!("{} needs M", self.name())));
        let need_n = || n.ok_or_else(|| Error::Config(format!("{} needs n", self.name())));
        let named = |t: TypeVector| Ok(CodeFile::from_type(&t, Some(self.name())));
        match self {
            Family::Optimal => named(best_known(need_m()?, need_n()?)?),
            Family::FairWeakFlip => named(fair_weak_flip(need_m()?, need_n()?)?),
            Family::OptimalM3M4 => named(optimal_m3m4(need_m()?, need_n()?)?),
            Family::RecursiveM3M4 => named(recursive_m3m4(need_m()?, need_n()?)?),
            Family::ConjecturedM5M6 => named(conjectured_m5m6(need_m()?, need_n()?)?),
            Family::Repetition => {
                if m.is_some_and(|m| m != 2) {
                    return Err(Error::UnsupportedCodewordCount { m: m.unwrap_or(0), expected: "2" });
                }
                named(repetition(need_n()?))
            }
            Family::GeneralizedFairWeakFlipM8 => {
                if m.is_some_and(|m| m != 8) {
                    return Err(Error::UnsupportedCodewordCount { m: m.unwrap_or(0), expected: "8" });
                }
                named(generalized_fair_weak_flip_m8(need_n()?)?)
            }
            Family::BscOptimal => named(bsc_optimal_type(need_m()?, need_n()?)?),
            Family::FairLinear => {
                let m = need_m()?;
                if !m.is_power_of_two() || m < 2 {
                    return Err(Error::UnsupportedCodewordCount { m, expected: "a power of two" });
                }
                let cb = fair_linear(m.trailing_zeros() as usize, need_n()?)?;
                Ok(CodeFile::from_codebook(&cb, Some(self.name())))
            }
            Family::Hadamard(v) => {
                let order = order
                    .or(m.map(|m| match v {
                        HadamardVariant::H1 => m,
                        HadamardVariant::H1Prime => 2 * m,
                        HadamardVariant::H2 | HadamardVariant::H3 => m / 2,
                    }))
                    .ok_or_else(|| Error::Config(format!("{} needs an order", self.name())))?;
                let cb = hadamard_code(*v, order)?;
                Ok(CodeFile::from_codebook(&cb, Some(self.name())))
            }
        }
    }
}

/// Best code known for `(m, n)`: provably optimal for `m <= 4`, the
/// conjectured optimum for `m = 5, 6`, and the fair weak flip code otherwise.
pub fn best_known(m: usize, n: usize) -> Result<TypeVector> {
    check_m(m)?;
    match m {
        2 => Ok(repetition(n)),
        3 | 4 => optimal_m3m4(m, n),
        5 | 6 => conjectured_m5m6(m, n),
        _ => fair_weak_flip(m, n),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub delta: f64,
    pub p_error_exact: f64,
    pub sgb_lower: Option<f64>,
    pub sgb_upper: Option<f64>,
    pub ppv_lower: f64,
    pub ppv_upper: f64,
    pub family: String,
}

pub const SWEEP_HEADER: &str = "n,delta,exact,sgb_lower,sgb_upper,ppv_lower,ppv_upper,family";

impl SweepRow {
    pub fn csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.delta,
            self.p_error_exact,
            opt(self.sgb_lower),
            opt(self.sgb_upper),
            self.ppv_lower,
            self.ppv_upper,
            self.family
        )
    }
}

/// Exact error probability of `family` and the bounds for every `n`, in order.
pub fn sweep(m: usize, ch: Channel, ns: &[usize], family: Family) -> Result<Vec<SweepRow>> {
    ns.par_iter()
        .map(|&n| {
            let code = family.build(Some(m), Some(n), None)?;
            let t = code.type_vector()?;
            if t.m() != m {
                return Err(Error::Config(format!("{} does not produce M = {m}", family.name())));
            }
            let bounds = bound_set(m, n, ch)?;
            Ok(SweepRow {
                n,
                delta: ch.delta(),
                p_error_exact: error_probability(&t, ch).p_error,
                sgb_lower: bounds.sgb_lower,
                sgb_upper: bounds.sgb_upper,
                ppv_lower: bounds.ppv_lower,
                ppv_upper: bounds.ppv_upper,
                family: FamilyTag::classify(&t).name().to_owned(),
            })
        })
        .collect()
}

/// CSV text with `#` metadata lines.
pub fn sweep_csv(m: usize, ch: Channel, family: Family, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# weakflip {VERSION}");
    let _ = writeln!(s, "# sweep m={m} delta={} code={}", ch.delta(), family.name());
    let _ = writeln!(s, "{SWEEP_HEADER}");
    for r in rows {
        let _ = writeln!(s, "{}", r.csv());
    }
    s
}

/// One row of a weak-flip-versus-linear comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub delta: f64,
    pub weak: SearchReport,
    pub linear: SearchReport,
}

impl TableRow {
    pub fn weak_better(&self) -> bool {
        self.weak.best_p_error < self.linear.best_p_error
    }
}

/// Weak flip search results against the best linear codes, for `m = 8`
/// (annealing against exhaustive linear search) or `m = 16` (permuted
/// concatenation against the fair linear code for `n = 15 kappa >= 30`,
/// deletion annealing from the length-30 codes for `n < 30`).
pub fn distance_table(m: usize, ns: &[usize], ch: Channel, cfg: &SearchConfig) -> Result<Vec<TableRow>> {
    cfg.validate()?;
    match m {
        8 => ns
            .iter()
            .map(|&n| {
                Ok(TableRow {
                    n,
                    delta: ch.delta(),
                    weak: simulated_annealing(8, n, ch, cfg)?,
                    linear: exhaustive_linear_search(3, n, ch)?,
                })
            })
            .collect(),
        16 => {
            let mut base: Option<Codebook> = None;
            let mut rows = Vec::with_capacity(ns.len());
            for &n in ns {
                let row = if n >= 30 && n % 15 == 0 {
                    let weak = permuted_concatenation_search(4, n / 15, ch, cfg)?;
                    let lin = fair_linear(4, n)?;
                    let linear = linear_report(&lin, ch);
                    TableRow { n, delta: ch.delta(), weak, linear }
                } else if (1..30).contains(&n) {
                    if base.is_none() {
                        let r = permuted_concatenation_search(4, 2, ch, cfg)?;
                        base = r.best_codebook;
                    }
                    let base = base.as_ref().expect("set above");
                    TableRow {
                        n,
                        delta: ch.delta(),
                        weak: punctured_search(base, n, ch, cfg)?,
                        linear: punctured_linear_search(4, n, ch, cfg)?,
                    }
                } else {
                    return Err(Error::Blocklength {
                        n,
                        reason: "sixteen-codeword tables need n < 30 or n = 15 kappa with kappa >= 2",
                    });
                };
                rows.push(row);
            }
            Ok(rows)
        }
        _ => Err(Error::UnsupportedCodewordCount { m, expected: "8 or 16" }),
    }
}

fn linear_report(cb: &Codebook, ch: Channel) -> SearchReport {
    let t = canonicalize(cb);
    SearchReport {
        method: "fair-linear".into(),
        delta: ch.delta(),
        best_p_error: error_probability(&t, ch).p_error,
        profile: distance_profile(&t),
        best_type: t,
        best_codebook: Some(cb.clone()),
        iterations: 0,
        seed: None,
    }
}

pub fn table_csv(m: usize, ch: Channel, cfg: &SearchConfig, rows: &[TableRow]) -> String {
    let rmax = ell_bar(m);
    let mut s = String::new();
    let _ = writeln!(s, "# weakflip {VERSION}");
    let _ = writeln!(
        s,
        "# table m={m} delta={} seed={} restarts={} alpha={} t_start={} t_freeze={} max_iterations={}",
        ch.delta(),
        cfg.seed,
        cfg.restarts,
        cfg.alpha,
        cfg.t_start,
        cfg.t_freeze,
        cfg.max_iterations
    );
    let mut header = vec!["n".to_owned(), "delta".to_owned()];
    for side in ["weak", "lin"] {
        for r in 2..=rmax {
            header.push(format!("{side}_d{r}"));
        }
    }
    header.extend(["weak_p_error", "lin_p_error", "weak_better"].map(String::from));
    let _ = writeln!(s, "{}", header.join(","));
    for row in rows {
        let mut fields = vec![row.n.to_string(), row.delta.to_string()];
        for rep in [&row.weak, &row.linear] {
            fields.extend(rep.profile.min_rwise.iter().map(|d| d.to_string()));
        }
        fields.push(row.weak.best_p_error.to_string());
        fields.push(row.linear.best_p_error.to_string());
        fields.push(row.weak_better().to_string());
        let _ = writeln!(s, "{}", fields.join(","));
    }
    s
}

/// One named check inside a suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(s, "{} {}", self.suite, if self.passed() { "passed" } else { "FAILED" });
        s
    }
}

pub const SUITES: &[&str] = &[
    "oracle-equivalence",
    "plotkin",
    "optimality-m34",
    "conjecture-m5",
    "appendix-a",
    "bounds-sandwich",
];

const DELTAS: [f64; 4] = [0.1, 0.3, 0.5, 0.9];

fn channels() -> Vec<Channel> {
    DELTAS.iter().map(|&d| Channel::new(d).expect("grid values are valid")).collect()
}

/// Random type of blocklength `n`; zero columns are drawn like any other column.
pub fn random_type(m: usize, n: usize, rng: &mut impl Rng) -> Result<TypeVector> {
    let mut t = TypeVector::zeros(m)?;
    let j_max = candidate_count(m) as u32;
    for _ in 0..n {
        match rng.gen_range(0..=j_max) {
            0 => t.add_zero_columns(1),
            j => t.add(j, 1)?,
        }
    }
    Ok(t)
}

pub fn verify(suite: &str) -> Result<VerifyReport> {
    let checks = match suite {
        "oracle-equivalence" => verify_oracle()?,
        "plotkin" => verify_plotkin()?,
        "optimality-m34" => verify_optimality()?,
        "conjecture-m5" => verify_conjecture()?,
        "appendix-a" => verify_appendix_a()?,
        "bounds-sandwich" => verify_bounds()?,
        _ => return Err(Error::Unknown { kind: "suite", name: suite.to_owned() }),
    };
    Ok(VerifyReport { suite: suite.to_owned(), checks })
}

fn verify_oracle() -> Result<Vec<Check>> {
    let chs = channels();
    (2..=5usize)
        .map(|m| {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            let codes: Vec<TypeVector> = (0..100)
                .map(|_| {
                    let n = rng.gen_range(1..=6);
                    random_type(m, n, &mut rng)
                })
                .collect::<Result<_>>()?;
            let mut worst = 0f64;
            for t in &codes {
                let cb = crate::code_model::codebook_from_type(t);
                for &ch in &chs {
                    let exact = error_probability(t, ch).p_error;
                    let oracle = oracle_error_probability(&cb, ch, TieBreak::LowestIndex)?.p_error;
                    worst = worst.max((exact - oracle).abs());
                }
            }
            Ok(Check {
                name: format!("M={m}"),
                passed: worst <= 1e-12,
                detail: format!("100 random codes with n <= 6, max |diff| = {worst:e}"),
            })
        })
        .collect()
}

fn verify_plotkin() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 2..=8usize {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + m as u64);
        let mut violations = 0;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=24);
            let t = random_type(m, n, &mut rng)?;
            for r in 2..=ell_bar(m).max(2) {
                let d = min_rwise_distance(&t, r)?;
                if !plotkin_bound(m, n, r)?.admits(u64::from(d)) {
                    violations += 1;
                }
            }
        }
        checks.push(Check {
            name: format!("bound M={m}"),
            passed: violations == 0,
            detail: format!("1000 random codes, {violations} violations"),
        });
    }
    for m in 3..=8usize {
        let n = weak_flip_count(m);
        let t = fair_weak_flip(m, n)?;
        let mut ok = true;
        let mut ds = Vec::new();
        for r in 2..=ell_bar(m) {
            let d = u64::from(min_rwise_distance(&t, r)?);
            ok &= plotkin_bound(m, n, r)?.is_met_by(d) && d == fair_weak_flip_distance(m, n, r)?;
            ds.push(d);
        }
        checks.push(Check {
            name: format!("fair weak flip M={m} n={n}"),
            passed: ok,
            detail: format!("d_min = {ds:?} meets the bound exactly"),
        });
    }
    Ok(checks)
}

fn optimality_check(m: usize, n: usize, t: &TypeVector, restrict: Restrict) -> Result<Check> {
    let chs = channels();
    let reports = exhaustive_search_multi(m, n, &chs, restrict)?;
    let mut worst = f64::NEG_INFINITY;
    let mut passed = true;
    for (r, &ch) in reports.iter().zip(&chs) {
        let p = error_probability(t, ch).p_error;
        passed &= p <= r.best_p_error * (1.0 + 1e-14);
        worst = worst.max(p - r.best_p_error);
    }
    Ok(Check {
        name: format!("M={m} n={n}"),
        passed,
        detail: format!("largest excess over the enumerated minimum = {worst:e}"),
    })
}

fn verify_optimality() -> Result<Vec<Check>> {
    let cases: Vec<(usize, usize)> =
        (1..=20).map(|n| (3, n)).chain((1..=9).map(|n| (4, n))).collect();
    cases
        .par_iter()
        .map(|&(m, n)| optimality_check(m, n, &optimal_m3m4(m, n)?, Restrict::All))
        .collect()
}

fn verify_conjecture() -> Result<Vec<Check>> {
    let cases: Vec<(usize, usize)> =
        (3..=6).map(|n| (5, n)).chain((3..=5).map(|n| (6, n))).collect();
    cases
        .iter()
        .map(|&(m, n)| optimality_check(m, n, &conjectured_m5m6(m, n)?, Restrict::All))
        .collect()
}

/// Closed-form gains of appending each candidate column to the four-codeword
/// seed `t3 = t5 = k, t6 = k - 1` of length `3k - 1`.
pub fn appendix_a_gain(column: u32, k: u32, delta: f64) -> f64 {
    let a = delta.powi(2 * k as i32 - 1);
    let b = delta.powi(2 * k as i32);
    let c = delta.powi(3 * k as i32 - 1);
    let inner = match column {
        1 | 2 | 4 | 7 => 2.0 * a + b - 2.0 * c,
        3 | 5 => 2.0 * a + 2.0 * b - 3.0 * c,
        6 => 4.0 * a - 3.0 * c,
        _ => f64::NAN,
    };
    inner * (1.0 - delta)
}

fn verify_appendix_a() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in 1..=3u32 {
        let seed = TypeVector::from_entries(4, &[(3, k), (5, k), (6, k - 1)])?;
        let mut worst = 0f64;
        let mut argmax_ok = true;
        for ch in channels() {
            let gains: Vec<f64> =
                (1..=7).map(|j| append_gain(&seed, j, ch)).collect::<Result<_>>()?;
            for (j, g) in (1..=7u32).zip(&gains) {
                worst = worst.max((g - appendix_a_gain(j, k, ch.delta())).abs());
            }
            let best = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            argmax_ok &= gains[5] == best && gains.iter().filter(|&&g| g == best).count() == 1;
        }
        checks.push(Check {
            name: format!("k={k}"),
            passed: worst <= 1e-12 && argmax_ok,
            detail: format!("max |gain - closed form| = {worst:e}, column 6 is the unique argmax: {argmax_ok}"),
        });
    }
    Ok(checks)
}

fn verify_bounds() -> Result<Vec<Check>> {
    let ch = Channel::new(0.3)?;
    let mut checks = Vec::new();
    for m in [3usize, 4] {
        let mut bad = Vec::new();
        for n in 2..=40 {
            let p = error_probability(&optimal_m3m4(m, n)?, ch).p_error;
            let b = bound_set(m, n, ch)?;
            let sgb_u = b.sgb_upper.unwrap_or(1.0);
            let sgb_l = b.sgb_lower.unwrap_or(0.0);
            if !(b.ppv_lower <= p && p <= b.ppv_upper.min(sgb_u) && sgb_l <= p) {
                bad.push(n);
            }
        }
        checks.push(Check {
            name: format!("M={m} delta=0.3"),
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "all n in 2..=40 sandwiched".into()
            } else {
                format!("violations at n = {bad:?}")
            },
        });
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_parse() {
        for name in Family::NAMES {
            let f: Family = name.parse().unwrap();
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn construct_examples() {
        let f: Family = "optimal-m4".parse().unwrap();
        let code = f.build(Some(4), Some(7), None).unwrap();
        assert_eq!(code.type_vector().unwrap().project(&[3, 5, 6]), vec![3, 2, 2]);
        let code = Family::Hadamard(HadamardVariant::H1).build(None, None, Some(8)).unwrap();
        let cb = code.codebook().unwrap();
        assert_eq!((cb.m(), cb.n()), (8, 7));
        let code = Family::FairWeakFlip.build(Some(8), Some(35), None).unwrap();
        let p = distance_profile(&code.type_vector().unwrap());
        assert_eq!(p.min_rwise, vec![20, 30, 34]);
        assert!(Family::FairWeakFlip.build(Some(8), None, None).is_err());
    }

    #[test]
    fn sweep_rows_in_order() {
        let ch = Channel::new(0.3).unwrap();
        let ns: Vec<usize> = (2..=12).collect();
        let rows = sweep(3, ch, &ns, Family::Optimal).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), ns);
        assert!(rows.windows(2).all(|w| w[1].p_error_exact < w[0].p_error_exact));
        let csv = sweep_csv(3, ch, Family::Optimal, &rows);
        assert_eq!(csv.lines().nth(2), Some(SWEEP_HEADER));
        assert_eq!(csv.lines().count(), 3 + ns.len());
    }

    #[test]
    fn sweep_at_zero_erasure() {
        let ch = Channel::new(0.0).unwrap();
        let rows = sweep(4, ch, &[2, 3, 4], Family::Optimal).unwrap();
        for r in rows {
            assert_eq!(r.p_error_exact, 0.0);
            assert_eq!(r.ppv_lower, 0.0);
        }
    }

    #[test]
    fn quick_suites_pass() {
        for suite in ["appendix-a", "bounds-sandwich", "conjecture-m5"] {
            let r = verify(suite).unwrap();
            assert!(r.passed(), "{}", r.text());
        }
        assert!(verify("missing").is_err());
    }

    #[test]
    fn table_for_eight_codewords() {
        let cfg = SearchConfig::with_seed(1);
        let ch = Channel::new(0.3).unwrap();
        let rows = distance_table(8, &[8], ch, &cfg).unwrap();
        assert_eq!(rows[0].weak.profile.min_rwise, vec![4, 6, 7]);
        assert_eq!(rows[0].linear.profile.min_rwise, vec![4, 6, 6]);
        assert!(rows[0].weak_better());
        let csv = table_csv(8, ch, &cfg, &rows);
        let mut lines = csv.lines().skip(2);
        assert_eq!(
            lines.next(),
            Some("n,delta,weak_d2,weak_d3,weak_d4,lin_d2,lin_d3,lin_d4,weak_p_error,lin_p_error,weak_better")
        );
        assert!(lines.next().unwrap().starts_with("8,0.3,4,6,7,4,6,6,"));
    }
}
