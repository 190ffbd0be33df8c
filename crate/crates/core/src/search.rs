//! Code searches: exhaustive enumeration of types, exhaustive search over
//! linear types, simulated annealing over a column pool, and the permuted
//! concatenation of simplex codes for sixteen codewords.
//!
//! All randomness comes from `ChaCha8Rng`. Restart `r` (or trial `r`) of a run
//! with seed `s` uses `ChaCha8Rng::seed_from_u64(s)` on stream `r`, so results
//! do not depend on the number of worker threads.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bec_exact::{error_probability, Channel, ErrorPolynomial};
use crate::code_model::{
    canonicalize, check_m, codebook_from_type, full_mask, Codebook, TypeVector,
};
use crate::constructions::{fair_linear, linear_columns, weak_flip_columns};
use crate::distances::{constant_on, distance_profile, DistanceProfile};
use crate::error::{Error, Result};
use crate::formats::CodeFile;
use crate::math::powers;

/// Largest number of compositions an exhaustive search will visit.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// Largest `pool size * subsets per column` table the annealer will build.
const ANNEAL_TABLE_LIMIT: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub t_start: f64,
    pub t_freeze: f64,
    pub alpha: f64,
    /// Defaults to `200 n` when unset.
    pub moves_per_temp: Option<usize>,
    /// Trial budget of the concatenation search.
    pub max_iterations: usize,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 1,
            t_start: 1.0,
            t_freeze: 1e-4,
            alpha: 0.95,
            moves_per_temp: None,
            max_iterations: 2000,
            restarts: 8,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if !(self.t_freeze > 0.0 && self.t_freeze < self.t_start) {
            return Err(Error::Config(format!(
                "need 0 < t_freeze < t_start, got t_freeze = {} and t_start = {}",
                self.t_freeze, self.t_start
            )));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be positive".into()));
        }
        if self.moves_per_temp == Some(0) {
            return Err(Error::Config("moves_per_temp must be positive".into()));
        }
        Ok(())
    }

    fn moves(&self, n: usize) -> usize {
        self.moves_per_temp.unwrap_or(200 * n.max(1))
    }
}

/// Which candidate columns an exhaustive search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restrict {
    All,
    WeakFlip,
}

impl Restrict {
    pub fn columns(self, m: usize) -> Result<Vec<u32>> {
        check_m(m)?;
        Ok(match self {
            Restrict::All => (1..=crate::code_model::candidate_count(m) as u32).collect(),
            Restrict::WeakFlip => weak_flip_columns(m)?.indices,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub method: String,
    pub delta: f64,
    #[serde(serialize_with = "serialize_type")]
    pub best_type: TypeVector,
    /// Explicit codebook, for searches whose column order matters.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_codebook")]
    pub best_codebook: Option<Codebook>,
    pub best_p_error: f64,
    pub profile: DistanceProfile,
    pub iterations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn serialize_type<S: serde::Serializer>(t: &TypeVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    CodeFile::from_type(t, None).serialize(s)
}

fn serialize_codebook<S: serde::Serializer>(
    cb: &Option<Codebook>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    cb.as_ref().map(|cb| CodeFile::from_codebook(cb, None)).serialize(s)
}

impl SearchReport {
    fn new(
        method: &str,
        ch: Channel,
        best_type: TypeVector,
        best_codebook: Option<Codebook>,
        iterations: u64,
        seed: Option<u64>,
    ) -> Self {
        let best_p_error = error_probability(&best_type, ch).p_error;
        let profile = distance_profile(&best_type);
        SearchReport {
            method: method.to_owned(),
            delta: ch.delta(),
            best_type,
            best_codebook,
            best_p_error,
            profile,
            iterations,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Number of ways to write `n` as an ordered sum of `parts` nonnegative integers,
/// saturating at `u128::MAX`.
pub fn composition_count(n: usize, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(n == 0);
    }
    let top = (n + parts - 1) as u128;
    let k = (parts - 1).min(n) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc is C(top, i) here, so the division is exact
        acc = match acc.checked_mul(top - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Subsets of size at least 2 grouped by which allowed columns are constant
/// on them, with their signed multiplicity.
struct GroupedSubsets {
    groups: Vec<(Vec<usize>, i64)>,
}

impl GroupedSubsets {
    fn new(m: usize, allowed: &[u32]) -> Self {
        let mut map: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for mask in 1..=full_mask(m) {
            let r = mask.count_ones();
            if r < 2 {
                continue;
            }
            let key: Vec<usize> = allowed
                .iter()
                .enumerate()
                .filter(|(_, &c)| constant_on(c, mask))
                .map(|(p, _)| p)
                .collect();
            *map.entry(key).or_insert(0) += if r % 2 == 0 { 1 } else { -1 };
        }
        GroupedSubsets { groups: map.into_iter().filter(|(_, w)| *w != 0).collect() }
    }

    fn histogram(&self, t: &[u32], n: usize, hist: &mut [i64]) {
        hist.iter_mut().for_each(|h| *h = 0);
        for (positions, w) in &self.groups {
            let a: u32 = positions.iter().map(|&p| t[p]).sum();
            hist[n - a as usize] += w;
        }
    }
}

struct Best {
    p: Vec<f64>,
    t: Vec<Option<Vec<u32>>>,
}

impl Best {
    fn new(k: usize) -> Self {
        Best { p: vec![f64::INFINITY; k], t: vec![None; k] }
    }

    fn offer(&mut self, i: usize, p: f64, t: &[u32]) {
        // strict: an earlier composition in colex order wins ties
        if p < self.p[i] {
            self.p[i] = p;
            self.t[i] = Some(t.to_vec());
        }
    }

    fn merge(mut self, later: Best) -> Best {
        for i in 0..self.p.len() {
            if later.p[i] < self.p[i] {
                self.p[i] = later.p[i];
                self.t[i] = later.t[i].clone();
            }
        }
        self
    }
}

/// Visits every composition of `n` over `allowed` (in colex order) and keeps
/// the minimizer for each channel.
fn exhaustive_core(
    m: usize,
    allowed: &[u32],
    n: usize,
    channels: &[Channel],
) -> Result<(Vec<TypeVector>, u64)> {
    if allowed.is_empty() {
        return Err(Error::Config("no allowed columns".into()));
    }
    let count = composition_count(n, allowed.len());
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::SearchTooLarge { count, limit: EXHAUSTIVE_LIMIT });
    }
    let j = allowed.len();
    let grouped = GroupedSubsets::new(m, allowed);
    let pows: Vec<Vec<f64>> = channels.iter().map(|ch| powers(ch.delta(), n)).collect();

    // shards fix the last one or two components
    let fixed = (j - 1).min(2);
    let mut shards: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..fixed {
        let mut next = Vec::new();
        for s in &shards {
            let used: u32 = s.iter().sum();
            for v in 0..=(n as u32 - used) {
                let mut s2 = s.clone();
                s2.push(v);
                next.push(s2);
            }
        }
        shards = next;
    }
    // colex order: compare the last component first
    shards.sort_by(|a, b| a.iter().cmp(b.iter()));

    let results: Vec<Best> = shards
        .par_iter()
        .map(|shard| {
            let mut best = Best::new(channels.len());
            let mut t = vec![0u32; j];
            for (i, &v) in shard.iter().enumerate() {
                t[j - 1 - i] = v;
            }
            let used: u32 = shard.iter().sum();
            let mut hist = vec![0i64; n + 1];
            let mut visit = |t: &[u32]| {
                grouped.histogram(t, n, &mut hist);
                for (i, p) in pows.iter().enumerate() {
                    let pe = ErrorPolynomial::evaluate_histogram(m, &hist, p);
                    best.offer(i, pe, t);
                }
            };
            enumerate_colex(&mut t, j - fixed, n as u32 - used, &mut visit);
            best
        })
        .collect();

    let best = results.into_iter().reduce(Best::merge).expect("at least one shard");
    let types = best
        .t
        .into_iter()
        .map(|t| {
            let t = t.expect("every search visits at least one composition");
            let entries: Vec<(u32, u32)> = allowed.iter().copied().zip(t).collect();
            TypeVector::from_entries(m, &entries).expect("allowed columns are candidates")
        })
        .collect();
    Ok((types, count as u64))
}

/// Fills `t[0..free]` with every composition of `remaining`, last component
/// outermost and ascending.
fn enumerate_colex(t: &mut [u32], free: usize, remaining: u32, visit: &mut impl FnMut(&[u32])) {
    if free == 0 {
        if remaining == 0 {
            visit(t);
        }
        return;
    }
    if free == 1 {
        t[0] = remaining;
        visit(t);
        return;
    }
    for v in 0..=remaining {
        t[free - 1] = v;
        enumerate_colex(t, free - 1, remaining - v, visit);
    }
    t[free - 1] = 0;
}

/// Global minimizer of the error probability among all types of blocklength
/// `n` over the allowed columns.
pub fn exhaustive_search(m: usize, n: usize, ch: Channel, restrict: Restrict) -> Result<SearchReport> {
    Ok(exhaustive_search_multi(m, n, &[ch], restrict)?.pop().expect("one channel"))
}

/// One enumeration shared by several erasure probabilities.
pub fn exhaustive_search_multi(
    m: usize,
    n: usize,
    channels: &[Channel],
    restrict: Restrict,
) -> Result<Vec<SearchReport>> {
    let allowed = restrict.columns(m)?;
    let method = match restrict {
        Restrict::All => "exhaustive",
        Restrict::WeakFlip => "exhaustive-weak-flip",
    };
    let (types, count) = exhaustive_core(m, &allowed, n, channels)?;
    Ok(types
        .into_iter()
        .zip(channels)
        .map(|(t, &ch)| SearchReport::new(method, ch, t, None, count, None))
        .collect())
}

/// Best linear `(2^k, n)` code.
pub fn exhaustive_linear_search(k: usize, n: usize, ch: Channel) -> Result<SearchReport> {
    let cols = linear_columns(k)?;
    let (mut types, count) = exhaustive_core(1 << k, &cols, n, &[ch])?;
    Ok(SearchReport::new("exhaustive-linear", ch, types.pop().expect("one channel"), None, count, None))
}

/// Incremental error-probability bookkeeping for codes drawn from a column pool.
struct Annealer {
    m: usize,
    n: usize,
    pool: Vec<u32>,
    /// Per pool entry: subsets it is constant on, with their sign.
    constant: Vec<Vec<(u32, i8)>>,
    allow_repeats: bool,
    powers: Vec<f64>,
}

struct AnnealState {
    slots: Vec<usize>,
    in_use: Vec<u32>,
    matches: Vec<u32>,
    hist: Vec<i64>,
}

struct AnnealOutcome {
    slots: Vec<usize>,
    p: f64,
    moves: u64,
}

impl Annealer {
    fn new(m: usize, n: usize, pool: Vec<u32>, allow_repeats: bool, ch: Channel) -> Result<Self> {
        check_m(m)?;
        if n == 0 {
            return Err(Error::Blocklength { n, reason: "annealing needs at least one column" });
        }
        if pool.is_empty() || (!allow_repeats && pool.len() < n) {
            return Err(Error::Config(format!(
                "a pool of {} columns cannot fill {n} positions",
                pool.len()
            )));
        }
        let table: usize = pool
            .iter()
            .map(|c| (1usize << c.count_ones()) + (1usize << (m as u32 - c.count_ones())))
            .sum();
        if table > ANNEAL_TABLE_LIMIT {
            return Err(Error::SearchTooLarge {
                count: table as u128,
                limit: ANNEAL_TABLE_LIMIT as u128,
            });
        }
        let constant = pool
            .iter()
            .map(|&c| {
                (1..=full_mask(m))
                    .filter(|&mask| mask.count_ones() >= 2 && constant_on(c, mask))
                    .map(|mask| (mask, if mask.count_ones() % 2 == 0 { 1 } else { -1 }))
                    .collect()
            })
            .collect();
        Ok(Annealer { m, n, pool, constant, allow_repeats, powers: powers(ch.delta(), n) })
    }

    fn state(&self, slots: Vec<usize>) -> AnnealState {
        let mut in_use = vec![0u32; self.pool.len()];
        let mut matches = vec![0u32; 1 << self.m];
        for &s in &slots {
            in_use[s] += 1;
            for &(mask, _) in &self.constant[s] {
                matches[mask as usize] += 1;
            }
        }
        let mut hist = vec![0i64; self.n + 1];
        for mask in 1..=full_mask(self.m) {
            let r = mask.count_ones();
            if r >= 2 {
                hist[self.n - matches[mask as usize] as usize] += if r % 2 == 0 { 1 } else { -1 };
            }
        }
        AnnealState { slots, in_use, matches, hist }
    }

    fn remove(&self, st: &mut AnnealState, item: usize) {
        st.in_use[item] -= 1;
        for &(mask, sign) in &self.constant[item] {
            let a = &mut st.matches[mask as usize];
            st.hist[self.n - *a as usize] -= i64::from(sign);
            *a -= 1;
            st.hist[self.n - *a as usize] += i64::from(sign);
        }
    }

    fn insert(&self, st: &mut AnnealState, item: usize) {
        st.in_use[item] += 1;
        for &(mask, sign) in &self.constant[item] {
            let a = &mut st.matches[mask as usize];
            st.hist[self.n - *a as usize] -= i64::from(sign);
            *a += 1;
            st.hist[self.n - *a as usize] += i64::from(sign);
        }
    }

    fn energy(&self, st: &AnnealState) -> f64 {
        ErrorPolynomial::evaluate_histogram(self.m, &st.hist, &self.powers)
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        if self.allow_repeats {
            (0..self.n).map(|_| rng.gen_range(0..self.pool.len())).collect()
        } else {
            let mut all: Vec<usize> = (0..self.pool.len()).collect();
            all.shuffle(rng);
            all.truncate(self.n);
            all
        }
    }

    fn proposal(&self, st: &AnnealState, rng: &mut ChaCha8Rng) -> Option<(usize, usize)> {
        let w = rng.gen_range(0..self.n);
        let old = st.slots[w];
        let free = if self.allow_repeats { self.pool.len() - 1 } else { self.pool.len() - self.n };
        if free == 0 {
            return None;
        }
        loop {
            let p = rng.gen_range(0..self.pool.len());
            let ok = if self.allow_repeats { p != old } else { st.in_use[p] == 0 };
            if ok {
                return Some((w, p));
            }
        }
    }

    fn run(&self, cfg: &SearchConfig, rng: &mut ChaCha8Rng, start: Vec<usize>) -> AnnealOutcome {
        let mut st = self.state(start);
        let mut cur = self.energy(&st);
        let mut best = AnnealOutcome { slots: st.slots.clone(), p: cur, moves: 0 };
        let moves = cfg.moves(self.n);
        let mut temp = cfg.t_start;
        let mut total = 0u64;
        while temp >= cfg.t_freeze {
            let mut changed = false;
            for _ in 0..moves {
                let Some((w, new)) = self.proposal(&st, rng) else {
                    break;
                };
                total += 1;
                let old = st.slots[w];
                self.remove(&mut st, old);
                self.insert(&mut st, new);
                let p = self.energy(&st);
                let delta_e = if cur > 0.0 { (p - cur) / cur } else { p - cur };
                if delta_e < 0.0 || rng.gen::<f64>() < (-delta_e / temp).exp() {
                    st.slots[w] = new;
                    changed |= p != cur;
                    cur = p;
                    if cur < best.p {
                        best.p = cur;
                        best.slots.clone_from(&st.slots);
                    }
                } else {
                    self.remove(&mut st, new);
                    self.insert(&mut st, old);
                }
            }
            if !changed {
                break;
            }
            temp *= cfg.alpha;
        }
        best.moves = total;
        best
    }

    fn columns(&self, slots: &[usize]) -> Vec<u32> {
        slots.iter().map(|&s| self.pool[s]).collect()
    }
}

/// Runs the annealer from independent restarts and keeps the best code;
/// ties go to the lowest restart.
fn anneal_restarts(
    annealer: &Annealer,
    cfg: &SearchConfig,
    starts: impl Fn(&mut ChaCha8Rng) -> Vec<usize> + Sync,
) -> (Vec<u32>, u64) {
    let outcomes: Vec<AnnealOutcome> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r);
            let start = starts(&mut rng);
            annealer.run(cfg, &mut rng, start)
        })
        .collect();
    let total = outcomes.iter().map(|o| o.moves).sum();
    let best = outcomes
        .into_iter()
        .reduce(|a, b| if b.p < a.p { b } else { a })
        .expect("at least one restart");
    (annealer.columns(&best.slots), total)
}

/// Simulated annealing over codes built from `pool`.
///
/// With `allow_repeats` a move replaces one position by any other pool column;
/// without it the code is a selection of `n` distinct pool entries (pool
/// entries may themselves repeat), which amounts to deleting coordinates from
/// the pool code.
pub fn anneal_columns(
    m: usize,
    n: usize,
    pool: &[u32],
    allow_repeats: bool,
    ch: Channel,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    cfg.validate()?;
    let annealer = Annealer::new(m, n, pool.to_vec(), allow_repeats, ch)?;
    let (columns, moves) = anneal_restarts(&annealer, cfg, |rng| annealer.random_start(rng));
    let cb = Codebook::from_columns(m, columns)?;
    let method = if allow_repeats { "annealing" } else { "deletion-annealing" };
    Ok(SearchReport::new(method, ch, canonicalize(&cb), Some(cb), moves, Some(cfg.seed)))
}

/// Simulated annealing over weak flip codes of blocklength `n`.
pub fn simulated_annealing(m: usize, n: usize, ch: Channel, cfg: &SearchConfig) -> Result<SearchReport> {
    let pool = weak_flip_columns(m)?.indices;
    let mut report = anneal_columns(m, n, &pool, true, ch, cfg)?;
    report.best_codebook = None;
    Ok(report)
}

/// Best code obtained by deleting coordinates from the fair linear
/// `(2^k, 2(2^k - 1))` code.
pub fn punctured_linear_search(k: usize, n: usize, ch: Channel, cfg: &SearchConfig) -> Result<SearchReport> {
    let base = fair_linear(k, 2 * ((1 << k) - 1))?;
    let mut report = anneal_columns(base.m(), n, base.columns(), false, ch, cfg)?;
    report.method = "punctured-linear".into();
    Ok(report)
}

/// Best code obtained by deleting coordinates from `base`.
pub fn punctured_search(base: &Codebook, n: usize, ch: Channel, cfg: &SearchConfig) -> Result<SearchReport> {
    let pool: Vec<u32> = codebook_from_type(&canonicalize(base))
        .columns()
        .iter()
        .copied()
        .filter(|&c| c != 0)
        .collect();
    anneal_columns(base.m(), n, &pool, false, ch, cfg)
}

/// Concatenates the fair linear `(2^k, K)` code with `kappa - 1` copies whose
/// rows 2..M are randomly permuted, keeping the best of `max_iterations` trials.
pub fn permuted_concatenation_search(
    k: usize,
    kappa: usize,
    ch: Channel,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    cfg.validate()?;
    if kappa < 2 {
        return Err(Error::Config(format!("kappa = {kappa} must be at least 2")));
    }
    if !(2..=4).contains(&k) {
        return Err(Error::Dimension(k));
    }
    if cfg.max_iterations == 0 {
        return Err(Error::Config("max_iterations must be positive".into()));
    }
    let m = 1usize << k;
    let big_k = m - 1;
    let base = fair_linear(k, big_k)?;
    let pw = powers(ch.delta(), kappa * big_k);

    let trial = |i: u64| -> (f64, Codebook) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i);
        let mut cb = base.clone();
        for _ in 1..kappa {
            let mut order: Vec<usize> = (2..=m).collect();
            order.shuffle(&mut rng);
            order.insert(0, 1);
            let block = base.permute_rows(&order).expect("a permutation of 1..=M");
            cb = cb.concat(&block).expect("same M");
        }
        let p = ErrorPolynomial::new(&canonicalize(&cb)).evaluate_with_powers(&pw);
        (p, cb)
    };

    let best = (0..cfg.max_iterations as u64)
        .into_par_iter()
        .map(|i| {
            let (p, cb) = trial(i);
            (p, i, cb)
        })
        .reduce_with(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one trial");
    let cb = best.2;
    Ok(SearchReport::new(
        "permuted-concatenation",
        ch,
        canonicalize(&cb),
        Some(cb),
        cfg.max_iterations as u64,
        Some(cfg.seed),
    ))
}
