//! Code files: a JSON form holding a type vector and optionally the rows,
//! and a plain-text form with one codeword per line.
//!
//! ```json
//! {"m":4,"n":7,"family":"optimal-m3m4","type":{"3":3,"5":2,"6":2},"zero_columns":0,
//!  "rows":["0000000","0001111","1110011","1111100"]}
//! ```
//!
//! When `rows` is present it takes precedence and `type` is checked against it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code_model::{canonicalize, codebook_from_type, Codebook, TypeVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Candidate index (as a decimal string) to multiplicity.
    #[serde(rename = "type")]
    pub type_entries: BTreeMap<u32, u32>,
    #[serde(default)]
    pub zero_columns: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
}

impl CodeFile {
    pub fn from_type(t: &TypeVector, family: Option<&str>) -> Self {
        CodeFile {
            m: t.m(),
            n: t.n(),
            family: family.map(str::to_owned),
            type_entries: t.support().collect(),
            zero_columns: t.zero_columns(),
            rows: None,
        }
    }

    /// Keeps the explicit rows, so the column order survives a round trip.
    pub fn from_codebook(cb: &Codebook, family: Option<&str>) -> Self {
        let mut file = Self::from_type(&canonicalize(cb), family);
        file.rows = Some((1..=cb.m()).map(|i| cb.row_string(i)).collect());
        file
    }

    pub fn with_rows(mut self) -> Self {
        if self.rows.is_none() {
            if let Ok(cb) = self.codebook() {
                self.rows = Some((1..=cb.m()).map(|i| cb.row_string(i)).collect());
            }
        }
        self
    }

    pub fn type_vector(&self) -> Result<TypeVector> {
        let entries: Vec<(u32, u32)> = self.type_entries.iter().map(|(&j, &c)| (j, c)).collect();
        let mut t = TypeVector::from_entries(self.m, &entries)?;
        t.add_zero_columns(self.zero_columns);
        if let Some(rows) = &self.rows {
            let from_rows = canonicalize(&Codebook::from_row_strings(rows)?);
            if from_rows != t {
                return Err(Error::Parse("`type` does not match `rows`".into()));
            }
        }
        if t.n() != self.n {
            return Err(Error::Parse(format!("declared n = {} but the code has {}", self.n, t.n())));
        }
        Ok(t)
    }

    pub fn codebook(&self) -> Result<Codebook> {
        match &self.rows {
            Some(rows) => {
                let cb = Codebook::from_row_strings(rows)?;
                if cb.m() != self.m || cb.n() != self.n {
                    return Err(Error::Parse(format!(
                        "rows form a {}x{} codebook, declared {}x{}",
                        cb.m(),
                        cb.n(),
                        self.m,
                        self.n
                    )));
                }
                Ok(cb)
            }
            None => Ok(codebook_from_type(&self.type_vector()?)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code files always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.type_vector()?;
        Ok(file)
    }
}

/// One codeword per line.
pub fn codebook_to_text(cb: &Codebook) -> String {
    let mut s = String::with_capacity(cb.m() * (cb.n() + 1));
    for i in 1..=cb.m() {
        s.push_str(&cb.row_string(i));
        s.push('\n');
    }
    s
}

/// Inverse of [`codebook_to_text`]; blank lines and `#` comments are skipped.
pub fn codebook_from_text(s: &str) -> Result<Codebook> {
    let rows: Vec<&str> = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    Codebook::from_row_strings(&rows)
}

/// Reads either format, deciding by the first non-blank character.
pub fn parse_code(s: &str) -> Result<CodeFile> {
    if s.trim_start().starts_with('{') {
        CodeFile::from_json(s)
    } else {
        Ok(CodeFile::from_codebook(&codebook_from_text(s)?, None))
    }
}
