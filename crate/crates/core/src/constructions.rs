//! Code families: weak flip, fair weak flip, optimal and conjectured small
//! codes, fair linear (simplex) codes, Sylvester-Hadamard codes and the
//! generalized fair weak flip code for eight codewords.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::code_model::{
    candidate_count, canonicalize, check_m, is_weak_flip, is_weak_weight, row_bit,
    weak_flip_count, Codebook, TypeVector,
};
use crate::error::{Error, Result};

/// Weak flip candidate columns of an `M`-codeword code, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakFlipColumnSet {
    pub m: usize,
    pub indices: Vec<u32>,
}

impl WeakFlipColumnSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.indices.binary_search(&j).is_ok()
    }
}

pub fn weak_flip_columns(m: usize) -> Result<WeakFlipColumnSet> {
    check_m(m)?;
    let indices = (1..=candidate_count(m) as u32)
        .filter(|j| is_weak_weight(m, j.count_ones()))
        .collect();
    Ok(WeakFlipColumnSet { m, indices })
}

/// Every weak flip column used `n / L` times.
pub fn fair_weak_flip(m: usize, n: usize) -> Result<TypeVector> {
    check_m(m)?;
    let l = weak_flip_count(m);
    if n % l != 0 {
        return Err(Error::NotMultiple { n, modulus: l });
    }
    let each = (n / l) as u32;
    let mut t = TypeVector::zeros(m)?;
    for j in weak_flip_columns(m)?.indices {
        t.add(j, each)?;
    }
    Ok(t)
}

/// The two-codeword repetition code.
pub fn repetition(n: usize) -> TypeVector {
    TypeVector::from_entries(2, &[(1, n as u32)]).expect("M = 2 is valid")
}

fn three_columns(m: usize) -> Result<[u32; 3]> {
    match m {
        3 => Ok([1, 2, 3]),
        4 => Ok([3, 5, 6]),
        _ => Err(Error::UnsupportedCodewordCount { m, expected: "3 or 4" }),
    }
}

fn with_counts(m: usize, columns: &[u32], counts: &[u32]) -> Result<TypeVector> {
    let entries: Vec<(u32, u32)> = columns.iter().copied().zip(counts.iter().copied()).collect();
    TypeVector::from_entries(m, &entries)
}

/// Optimal BEC code for three or four codewords.
pub fn optimal_m3m4(m: usize, n: usize) -> Result<TypeVector> {
    let cols = three_columns(m)?;
    if n == 0 {
        return Err(Error::Blocklength { n, reason: "must be at least 1" });
    }
    let n = n as u32;
    with_counts(m, &cols, &[n.div_ceil(3), (n + 1) / 3, n / 3])
}

/// Builds the optimal three- or four-codeword code column by column from a
/// two-column seed, appending the gain-maximizing column for each new length.
pub fn recursive_m3m4(m: usize, n: usize) -> Result<TypeVector> {
    let cols = three_columns(m)?;
    if n < 2 {
        return Err(Error::Blocklength { n, reason: "the recursion starts at n = 2" });
    }
    let mut t = with_counts(m, &cols[..2], &[1, 1])?;
    for len in 3..=n {
        let next = match len % 3 {
            0 => cols[2],
            1 => cols[0],
            _ => cols[1],
        };
        t.add(next, 1)?;
    }
    Ok(t)
}

/// Extra columns for `n mod 10 = rho` on top of `floor(n/10)` copies of every
/// weak flip column; index `rho - 1`. Residue 7 with six codewords is handled
/// separately because its optimum leaves the weak flip family.
const CONJECTURE_M5: [&[u32]; 9] = [
    &[3],
    &[3, 5],
    &[3, 5, 9],
    &[3, 5, 9, 14],
    &[3, 5, 6, 9, 10],
    &[3, 5, 6, 9, 10, 12],
    &[3, 5, 6, 9, 10, 13, 14],
    &[3, 5, 6, 7, 9, 10, 11, 12],
    &[3, 5, 6, 7, 9, 10, 11, 12, 13],
];

const CONJECTURE_M6: [&[u32]; 9] = [
    &[7],
    &[7, 11],
    &[7, 11, 21],
    &[7, 11, 21, 25],
    &[7, 11, 13, 19, 21],
    &[7, 11, 13, 19, 21, 25],
    &[],
    &[7, 11, 13, 14, 19, 21, 22, 25],
    &[7, 11, 13, 14, 19, 21, 22, 25, 26],
];

const M6_RESIDUE7_LOW: [u32; 4] = [14, 22, 26, 28];
const M6_RESIDUE7_HIGH: [u32; 6] = [7, 11, 13, 19, 21, 25];
const M6_RESIDUE7_EXTRA: u32 = 30;

fn conjecture_row(m: usize, rho: usize) -> &'static [u32] {
    if m == 5 {
        CONJECTURE_M5[rho - 1]
    } else {
        CONJECTURE_M6[rho - 1]
    }
}

fn conjectured_unchecked(m: usize, n: usize) -> Result<TypeVector> {
    let tau = (n / 10) as u32;
    let rho = n % 10;
    if rho == 0 {
        return fair_weak_flip(m, n);
    }
    if m == 6 && rho == 7 {
        let mut t = TypeVector::zeros(6)?;
        for j in M6_RESIDUE7_LOW {
            t.add(j, tau)?;
        }
        for j in M6_RESIDUE7_HIGH {
            t.add(j, tau + 1)?;
        }
        t.add(M6_RESIDUE7_EXTRA, 1)?;
        return Ok(t);
    }
    let mut t = TypeVector::zeros(m)?;
    for j in weak_flip_columns(m)?.indices {
        t.add(j, tau)?;
    }
    for &j in conjecture_row(m, rho) {
        t.add(j, 1)?;
    }
    Ok(t)
}

/// Checks the residue tables: every row lists distinct weak flip columns, and
/// each resulting type has the requested blocklength and is weak flip except
/// for six codewords at residue 7.
pub fn conjecture_tables_self_check() -> Result<()> {
    for m in [5, 6] {
        let weak = weak_flip_columns(m)?;
        for rho in 1..=9 {
            if m == 6 && rho == 7 {
                continue;
            }
            let row = conjecture_row(m, rho);
            let distinct: BTreeSet<u32> = row.iter().copied().collect();
            if row.len() != rho || distinct.len() != rho || !row.iter().all(|&j| weak.contains(j)) {
                return Err(Error::Config(format!("conjecture table row M = {m}, rho = {rho} is malformed")));
            }
        }
        for n in 3..=40 {
            let t = conjectured_unchecked(m, n)?;
            let expect_weak = !(m == 6 && n % 10 == 7);
            if t.n() != n || is_weak_flip(&t) != expect_weak {
                return Err(Error::Config(format!("conjectured type for M = {m}, n = {n} is malformed")));
            }
        }
    }
    Ok(())
}

/// Conjectured optimal BEC code for five or six codewords: the fair weak flip
/// code when `10 | n`, otherwise a residue-indexed near-fair type.
///
/// The residue rows were obtained by minimizing the error probability over
/// all ways of adding `n mod 10` distinct weak flip columns to the fair code
/// of length `10 floor(n/10)`, keeping the lexicographically first set that
/// is optimal for every tested `floor(n/10)` and erasure probability.
pub fn conjectured_m5m6(m: usize, n: usize) -> Result<TypeVector> {
    static CHECK: OnceLock<Result<()>> = OnceLock::new();
    if m != 5 && m != 6 {
        return Err(Error::UnsupportedCodewordCount { m, expected: "5 or 6" });
    }
    if n < 3 {
        return Err(Error::Blocklength { n, reason: "must be at least 3" });
    }
    CHECK.get_or_init(conjecture_tables_self_check).clone()?;
    conjectured_unchecked(m, n)
}

fn parity(x: u32) -> bool {
    x.count_ones() % 2 == 1
}

fn check_dimension(k: usize) -> Result<()> {
    if (1..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::Dimension(k))
    }
}

/// The `2^k - 1` columns of the simplex code: column `l` holds `<i, l> mod 2`
/// in row `i + 1`, where `i` and `l` are read as `k`-bit vectors.
pub fn linear_columns(k: usize) -> Result<Vec<u32>> {
    check_dimension(k)?;
    let m = 1usize << k;
    Ok((1..m as u32)
        .map(|l| {
            (0..m as u32)
                .filter(|&i| parity(i & l))
                .fold(0u32, |acc, i| acc | row_bit(m, i as usize + 1))
        })
        .collect())
}

/// Fair linear `(2^k, n)` code: `n / (2^k - 1)` copies of the simplex code.
pub fn fair_linear(k: usize, n: usize) -> Result<Codebook> {
    let cols = linear_columns(k)?;
    if n % cols.len() != 0 {
        return Err(Error::NotMultiple { n, modulus: cols.len() });
    }
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n / cols.len() {
        columns.extend_from_slice(&cols);
    }
    Codebook::from_columns(1 << k, columns)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HadamardVariant {
    /// Rows of the binary Hadamard matrix without its first column: `(m, m - 1)`.
    H1,
    /// Rows of `H1` that start with 0, first entry removed: `(m / 2, m - 2)`.
    H1Prime,
    /// `H1` together with the complements of its rows: `(2m, m - 1)`.
    H2,
    /// The binary Hadamard matrix and its row complements: `(2m, m)`.
    H3,
}

impl HadamardVariant {
    pub fn name(&self) -> &'static str {
        match self {
            HadamardVariant::H1 => "h1",
            HadamardVariant::H1Prime => "h1p",
            HadamardVariant::H2 => "h2",
            HadamardVariant::H3 => "h3",
        }
    }
}

/// Sylvester-Hadamard codes; `+1` maps to 0 and `-1` to 1, so entry
/// `(i, j)` of the order-`m` matrix is the parity of `i & j`.
pub fn hadamard_code(variant: HadamardVariant, order: usize) -> Result<Codebook> {
    if order < 4 || !order.is_power_of_two() {
        return Err(Error::HadamardOrder(order));
    }
    let entry = |i: usize, j: usize| u8::from(parity((i & j) as u32));
    let matrix: Vec<Vec<u8>> = (0..order).map(|i| (0..order).map(|j| entry(i, j)).collect()).collect();
    let complement = |row: &Vec<u8>| row.iter().map(|b| 1 - b).collect::<Vec<u8>>();
    let h1: Vec<Vec<u8>> = matrix.iter().map(|r| r[1..].to_vec()).collect();
    let rows: Vec<Vec<u8>> = match variant {
        HadamardVariant::H1 => h1,
        HadamardVariant::H1Prime => {
            h1.iter().filter(|r| r[0] == 0).map(|r| r[1..].to_vec()).collect()
        }
        HadamardVariant::H2 => {
            let mut rows = h1.clone();
            rows.extend(h1.iter().map(complement));
            rows
        }
        HadamardVariant::H3 => {
            let mut rows = matrix.clone();
            rows.extend(matrix.iter().map(complement));
            rows
        }
    };
    if check_m(rows.len()).is_err() {
        return Err(Error::HadamardOrder(order));
    }
    Codebook::from_rows(&rows)
}

/// Column sets of all `(8, 7)` Hadamard codes up to row relabeling, each
/// sorted, in ascending lexicographic order.
pub fn hadamard_column_sets_m8() -> &'static [[u32; 7]] {
    static SETS: OnceLock<Vec<[u32; 7]>> = OnceLock::new();
    SETS.get_or_init(|| {
        let base = hadamard_code(HadamardVariant::H1, 8).expect("order 8 is valid");
        let mut sets = BTreeSet::new();
        let mut order: Vec<usize> = (1..=8).collect();
        permutations(&mut order, 0, &mut |p| {
            let t = canonicalize(&base.permute_rows(p).expect("valid permutation"));
            let mut set = [0u32; 7];
            for (slot, (j, _)) in set.iter_mut().zip(t.support()) {
                *slot = j;
            }
            sets.insert(set);
        });
        sets.into_iter().collect()
    })
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Weak flip columns that receive one extra copy in the generalized fair
/// weak flip code with `n mod 35 = 7 eta`.
///
/// The extra columns must form a self-complementary 3-design on the eight
/// codewords so that pairwise and three-wise matches stay uniform. With `A`
/// the Sylvester block and `B` the first Hadamard block disjoint from it,
/// the choices are `A`, `A + B`, the complement of `A + B`, and the
/// complement of `A`. At most two Hadamard blocks are pairwise disjoint, so
/// `eta = 3, 4` cannot be a union of Hadamard blocks.
pub fn gfwf_extra_columns(eta: usize) -> Result<Vec<u32>> {
    let sets = hadamard_column_sets_m8();
    let mut a: Vec<u32> = linear_columns(3)?;
    a.sort_unstable();
    let b = sets
        .iter()
        .find(|s| s.iter().all(|j| !a.contains(j)))
        .expect("a disjoint Hadamard block exists");
    let weak = weak_flip_columns(8)?.indices;
    let ab: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
    let mut out = match eta {
        0 => Vec::new(),
        1 => a.clone(),
        2 => ab,
        3 => weak.iter().copied().filter(|j| !ab.contains(j)).collect(),
        4 => weak.iter().copied().filter(|j| !a.contains(j)).collect(),
        _ => return Err(Error::Blocklength { n: 7 * eta, reason: "eta must be at most 4" }),
    };
    out.sort_unstable();
    Ok(out)
}

/// Generalized fair weak flip `(8, n)` code for `n = 35 tau + 7 eta`, `n >= 14`.
pub fn generalized_fair_weak_flip_m8(n: usize) -> Result<TypeVector> {
    if n % 7 != 0 {
        return Err(Error::NotMultiple { n, modulus: 7 });
    }
    if n < 14 {
        return Err(Error::Blocklength { n, reason: "needs n = 7 kappa with kappa >= 2" });
    }
    let tau = (n / 35) as u32;
    let eta = (n % 35) / 7;
    let mut t = TypeVector::zeros(8)?;
    for j in weak_flip_columns(8)?.indices {
        t.add(j, tau)?;
    }
    for j in gfwf_extra_columns(eta)? {
        t.add(j, 1)?;
    }
    Ok(t)
}

/// Types that are optimal on the binary symmetric channel for three or four
/// codewords; only their distance structure is of interest here.
pub fn bsc_optimal_type(m: usize, n: usize) -> Result<TypeVector> {
    let cols = three_columns(m)?;
    if n < 2 {
        return Err(Error::Blocklength { n, reason: "must be at least 2" });
    }
    let k = (n / 3) as u32;
    let counts = match n % 3 {
        0 => [k + 1, k, k - 1],
        1 => [k + 1, k, k],
        _ => [k + 1, k + 1, k],
    };
    with_counts(m, &cols, &counts)
}
