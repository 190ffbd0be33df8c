//! Columns, type vectors and codebooks.
//!
//! A column of an `M`-codeword code is stored as an `M`-bit word with row 1
//! in the most significant position, so the word read as an integer is the
//! column's index `j = sum b_m 2^(M-m)`. Candidate columns have `b_1 = 0`
//! and are nonzero, which gives indices `1..=2^(M-1) - 1`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of codewords.
pub const MAX_CODEWORDS: usize = 20;

pub(crate) fn check_m(m: usize) -> Result<()> {
    if (2..=MAX_CODEWORDS).contains(&m) {
        Ok(())
    } else {
        Err(Error::CodewordCount(m))
    }
}

/// Number of candidate columns `J = 2^(M-1) - 1`.
pub fn candidate_count(m: usize) -> usize {
    (1usize << (m - 1)) - 1
}

pub(crate) fn full_mask(m: usize) -> u32 {
    ((1u64 << m) - 1) as u32
}

/// The bit holding row `row` (1-based) of an `m`-bit column word.
pub(crate) fn row_bit(m: usize, row: usize) -> u32 {
    1 << (m - row)
}

/// `⌈M/2⌉`.
pub fn ell_bar(m: usize) -> usize {
    m.div_ceil(2)
}

/// `⌊M/2⌋`.
pub fn ell(m: usize) -> usize {
    m / 2
}

/// Number of weak flip candidate columns, `L = C(2⌈M/2⌉ - 1, ⌈M/2⌉)`.
pub fn weak_flip_count(m: usize) -> usize {
    let lb = ell_bar(m) as u64;
    crate::math::binomial(2 * lb - 1, lb) as usize
}

pub(crate) fn is_weak_weight(m: usize, weight: u32) -> bool {
    weight as usize == ell(m) || weight as usize == ell_bar(m)
}

/// One codebook column.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    m: u8,
    bits: u32,
}

impl Column {
    pub fn new(m: usize, bits: u32) -> Result<Self> {
        check_m(m)?;
        if bits > full_mask(m) {
            return Err(Error::Codebook(format!("column word {bits:#b} has more than {m} bits")));
        }
        Ok(Column { m: m as u8, bits })
    }

    /// Builds a column from its entries `b_1, ..., b_M`.
    pub fn from_entries(entries: &[u8]) -> Result<Self> {
        let m = entries.len();
        check_m(m)?;
        let mut bits = 0;
        for &b in entries {
            if b > 1 {
                return Err(Error::Codebook(format!("entry {b} is not binary")));
            }
            bits = (bits << 1) | u32::from(b);
        }
        Ok(Column { m: m as u8, bits })
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Entry in row `row`, 1-based.
    pub fn bit(&self, row: usize) -> bool {
        assert!((1..=self.m()).contains(&row), "row {row} out of range");
        self.bits & row_bit(self.m(), row) != 0
    }

    /// Entries `b_1, ..., b_M`.
    pub fn entries(&self) -> Vec<u8> {
        (1..=self.m()).map(|r| u8::from(self.bit(r))).collect()
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> Column {
        Column { m: self.m, bits: self.bits ^ full_mask(self.m()) }
    }

    pub fn is_candidate(&self) -> bool {
        self.bits != 0 && !self.bit(1)
    }

    /// Candidate index after complementing a column that starts with 1,
    /// or `None` for a constant column.
    pub fn canonical_index(&self) -> Option<u32> {
        let c = if self.bit(1) { self.complement().bits } else { self.bits };
        (c != 0).then_some(c)
    }

    pub fn is_weak_flip(&self) -> bool {
        self.is_candidate() && is_weak_weight(self.m(), self.weight())
    }
}

impl fmt::Debug for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Column({:0width$b})", self.bits, width = self.m())
    }
}

/// The candidate column with index `j`.
pub fn column_from_index(j: u32, m: usize) -> Result<Column> {
    check_m(m)?;
    let max = candidate_count(m) as u32;
    if j == 0 || j > max {
        return Err(Error::ColumnIndex { j, m, max });
    }
    Ok(Column { m: m as u8, bits: j })
}

/// Inverse of [`column_from_index`].
pub fn index_from_column(col: Column) -> Result<u32> {
    if col.is_candidate() {
        Ok(col.bits)
    } else {
        Err(Error::NotCandidate { bits: col.bits, m: col.m() })
    }
}

/// Column multiplicities of a code, the canonical representation on the BEC.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TypeVector {
    m: usize,
    counts: Vec<u32>,
    zero_columns: u32,
}

impl TypeVector {
    /// The empty code of blocklength zero.
    pub fn zeros(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(TypeVector { m, counts: vec![0; candidate_count(m)], zero_columns: 0 })
    }

    /// `counts[j - 1]` is the multiplicity of candidate column `j`.
    pub fn new(m: usize, counts: Vec<u32>, zero_columns: u32) -> Result<Self> {
        check_m(m)?;
        if counts.len() != candidate_count(m) {
            return Err(Error::Parse(format!(
                "type vector for M = {m} needs {} entries, got {}",
                candidate_count(m),
                counts.len()
            )));
        }
        Ok(TypeVector { m, counts, zero_columns })
    }

    pub fn from_counts(m: usize, counts: Vec<u32>) -> Result<Self> {
        Self::new(m, counts, 0)
    }

    /// Builds a type from `(index, multiplicity)` pairs; repeated indices add up.
    pub fn from_entries(m: usize, entries: &[(u32, u32)]) -> Result<Self> {
        let mut t = Self::zeros(m)?;
        for &(j, k) in entries {
            t.add(j, k)?;
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Blocklength, including all-zero columns.
    pub fn n(&self) -> usize {
        self.zero_columns as usize + self.counts.iter().map(|&c| c as usize).sum::<usize>()
    }

    pub fn zero_columns(&self) -> u32 {
        self.zero_columns
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Multiplicity `t_j`, 1-based.
    pub fn count(&self, j: u32) -> u32 {
        self.counts[j as usize - 1]
    }

    pub fn add(&mut self, j: u32, k: u32) -> Result<()> {
        let col = column_from_index(j, self.m)?;
        self.counts[col.bits as usize - 1] += k;
        Ok(())
    }

    pub fn add_zero_columns(&mut self, k: u32) {
        self.zero_columns += k;
    }

    /// Copy with `t_j` incremented by one.
    pub fn appended(&self, j: u32) -> Result<Self> {
        let mut t = self.clone();
        t.add(j, 1)?;
        Ok(t)
    }

    /// Nonzero entries as `(index, multiplicity)`.
    pub fn support(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u32 + 1, c))
    }

    /// Multiplicities of the listed indices, in order.
    pub fn project(&self, indices: &[u32]) -> Vec<u32> {
        indices.iter().map(|&j| self.count(j)).collect()
    }
}

impl fmt::Debug for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<_> = self.support().collect();
        f.debug_struct("TypeVector")
            .field("m", &self.m)
            .field("n", &self.n())
            .field("support", &support)
            .field("zero_columns", &self.zero_columns)
            .finish()
    }
}

/// An explicit `M x n` binary matrix, stored column by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Codebook {
    m: usize,
    columns: Vec<u32>,
}

impl Codebook {
    /// Column words, row 1 in the most significant of the `m` bits.
    pub fn from_columns(m: usize, columns: Vec<u32>) -> Result<Self> {
        check_m(m)?;
        if let Some(c) = columns.iter().find(|&&c| c > full_mask(m)) {
            return Err(Error::Codebook(format!("column word {c:#b} has more than {m} bits")));
        }
        Ok(Codebook { m, columns })
    }

    /// Rows of 0/1 entries, all of the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        check_m(m)?;
        let n = rows[0].as_ref().len();
        let mut columns = vec![0u32; n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Codebook(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (l, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => columns[l] |= row_bit(m, i + 1),
                    _ => return Err(Error::Codebook(format!("entry {b} is not binary"))),
                }
            }
        }
        Ok(Codebook { m, columns })
    }

    /// Rows written as strings of `'0'` and `'1'`.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::Codebook(format!("unexpected character {other:?}"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<_>>()?;
        if parsed.is_empty() {
            return Err(Error::Codebook("no rows".into()));
        }
        Self::from_rows(&parsed)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    pub fn column(&self, l: usize) -> Column {
        Column { m: self.m as u8, bits: self.columns[l] }
    }

    /// Codeword `i`, 1-based.
    pub fn row(&self, i: usize) -> Vec<u8> {
        let bit = row_bit(self.m, i);
        self.columns.iter().map(|&c| u8::from(c & bit != 0)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (1..=self.m).map(|i| self.row(i)).collect()
    }

    pub fn row_string(&self, i: usize) -> String {
        self.row(i).iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    /// Codeword `i` packed into a word, column `l` at bit `l`.
    pub(crate) fn row_word(&self, i: usize) -> u64 {
        let bit = row_bit(self.m, i);
        self.columns
            .iter()
            .enumerate()
            .fold(0u64, |acc, (l, &c)| if c & bit != 0 { acc | 1 << l } else { acc })
    }

    /// Horizontal concatenation.
    pub fn concat(&self, other: &Codebook) -> Result<Codebook> {
        if self.m != other.m {
            return Err(Error::Codebook(format!(
                "cannot concatenate codes with {} and {} codewords",
                self.m, other.m
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend_from_slice(&other.columns);
        Ok(Codebook { m: self.m, columns })
    }

    /// Reorders codewords: new row `i` is old row `order[i - 1]` (1-based).
    pub fn permute_rows(&self, order: &[usize]) -> Result<Codebook> {
        let m = self.m;
        let mut seen = vec![false; m + 1];
        if order.len() != m {
            return Err(Error::Codebook(format!("row order has {} entries, need {m}", order.len())));
        }
        for &o in order {
            if o == 0 || o > m || seen[o] {
                return Err(Error::Codebook(format!("row order {order:?} is not a permutation")));
            }
            seen[o] = true;
        }
        let columns = self
            .columns
            .iter()
            .map(|&c| {
                order.iter().enumerate().fold(0u32, |acc, (i, &o)| {
                    if c & row_bit(m, o) != 0 {
                        acc | row_bit(m, i + 1)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Ok(Codebook { m, columns })
    }

    /// Drops codeword `i` (1-based).
    pub fn remove_row(&self, i: usize) -> Result<Codebook> {
        if i == 0 || i > self.m {
            return Err(Error::MessageIndex { index: i, m: self.m });
        }
        let m = self.m - 1;
        check_m(m)?;
        let low = row_bit(self.m, i) - 1;
        let columns =
            self.columns.iter().map(|&c| ((c >> 1) & !low) | (c & low)).collect();
        Ok(Codebook { m, columns })
    }

    /// Complements column `l` (0-based).
    pub fn complement_column(&self, l: usize) -> Codebook {
        let mut out = self.clone();
        out.columns[l] ^= full_mask(self.m);
        out
    }
}

impl fmt::Debug for Codebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.m).map(|i| self.row_string(i)).collect();
        f.debug_struct("Codebook").field("m", &self.m).field("rows", &rows).finish()
    }
}

/// Reduces a codebook to its type: columns starting with 1 are complemented,
/// constant columns are counted in `zero_columns`.
pub fn canonicalize(cb: &Codebook) -> TypeVector {
    let mut t = TypeVector::zeros(cb.m).expect("codebook has a valid M");
    for l in 0..cb.n() {
        match cb.column(l).canonical_index() {
            Some(j) => t.counts[j as usize - 1] += 1,
            None => t.zero_columns += 1,
        }
    }
    t
}

/// Codebook of a type: columns in ascending index, all-zero columns last.
pub fn codebook_from_type(t: &TypeVector) -> Codebook {
    let mut columns = Vec::with_capacity(t.n());
    for (j, c) in t.support() {
        columns.extend(std::iter::repeat(j).take(c as usize));
    }
    columns.extend(std::iter::repeat(0).take(t.zero_columns as usize));
    Codebook { m: t.m, columns }
}

/// XORs every codeword with codeword `m` (1-based).
pub fn translate(cb: &Codebook, m: usize) -> Result<Codebook> {
    if m == 0 || m > cb.m {
        return Err(Error::MessageIndex { index: m, m: cb.m });
    }
    let bit = row_bit(cb.m, m);
    let all = full_mask(cb.m);
    let columns = cb.columns.iter().map(|&c| if c & bit != 0 { c ^ all } else { c }).collect();
    Ok(Codebook { m: cb.m, columns })
}

/// True when only weak flip columns are used.
pub fn is_weak_flip(t: &TypeVector) -> bool {
    t.zero_columns == 0 && t.support().all(|(j, _)| is_weak_weight(t.m, j.count_ones()))
}

/// Weak flip code using every weak flip column equally often.
pub fn is_fair_weak_flip(t: &TypeVector) -> bool {
    if !is_weak_flip(t) || t.n() == 0 {
        return false;
    }
    let mut support = t.support();
    let (_, first) = support.next().expect("nonempty code");
    let mut used = 1;
    for (_, c) in support {
        if c != first {
            return false;
        }
        used += 1;
    }
    used == weak_flip_count(t.m)
}

/// True when the codewords form a linear subspace (requires `M` a power of two).
pub fn is_linear(t: &TypeVector) -> bool {
    if !t.m.is_power_of_two() {
        return false;
    }
    let cb = codebook_from_type(t);
    let n = cb.n();
    let words = n.div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = (1..=cb.m)
        .map(|i| {
            let mut w = vec![0u64; words];
            for (l, &c) in cb.columns.iter().enumerate() {
                if c & row_bit(cb.m, i) != 0 {
                    w[l / 64] |= 1 << (l % 64);
                }
            }
            w
        })
        .collect();
    let set: HashSet<&Vec<u64>> = rows.iter().collect();
    if set.len() != rows.len() {
        return false;
    }
    for a in &rows {
        for b in &rows {
            let x: Vec<u64> = a.iter().zip(b).map(|(p, q)| p ^ q).collect();
            if !set.contains(&x) {
                return false;
            }
        }
    }
    true
}

/// Linear code using each of its `M - 1` nonzero column functionals equally often.
pub fn is_fair_linear(t: &TypeVector) -> bool {
    if t.zero_columns != 0 || !is_linear(t) {
        return false;
    }
    let counts: Vec<u32> = t.support().map(|(_, c)| c).collect();
    counts.len() == t.m - 1 && counts.iter().all(|&c| c == counts[0])
}

/// Code family label. `Hadamard` is only attached by the Hadamard constructors;
/// [`FamilyTag::classify`] reports the most specific of the other tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    WeakFlip,
    FairWeakFlip,
    Linear,
    FairLinear,
    Hadamard,
    General,
}

impl FamilyTag {
    pub fn classify(t: &TypeVector) -> FamilyTag {
        if is_fair_linear(t) {
            FamilyTag::FairLinear
        } else if is_linear(t) {
            FamilyTag::Linear
        } else if is_fair_weak_flip(t) {
            FamilyTag::FairWeakFlip
        } else if is_weak_flip(t) {
            FamilyTag::WeakFlip
        } else {
            FamilyTag::General
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::WeakFlip => "weak-flip",
            FamilyTag::FairWeakFlip => "fair-weak-flip",
            FamilyTag::Linear => "linear",
            FamilyTag::FairLinear => "fair-linear",
            FamilyTag::Hadamard => "hadamard",
            FamilyTag::General => "general",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
