//! Small binary block codes on the binary erasure channel.
//!
//! A code with `M` codewords and blocklength `n` is described up to
//! equivalence by its [type](code_model::TypeVector): how often each of the
//! `2^(M-1) - 1` nonconstant columns appears. Everything here works on types.
//!
//! - [`code_model`]: columns, types, codebooks and canonical forms.
//! - [`distances`]: pairwise and r-wise Hamming distances.
//! - [`bec_exact`]: exact ML error probability under erasures, plus a
//!   brute-force oracle.
//! - [`constructions`]: weak flip, fair linear, repetition, Hadamard and the
//!   optimal small-`M` families.
//! - [`bounds`]: Shannon-Gallager-Berlekamp and Polyanskiy-Poor-Verdu bounds.
//! - [`search`]: exhaustive, annealing and concatenation searches.
//! - [`reports`]: sweeps, distance tables and self-check suites.

pub mod bec_exact;
pub mod bounds;
pub mod code_model;
pub mod constructions;
pub mod distances;
mod error;
pub mod formats;
pub mod math;
pub mod reports;
pub mod search;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/distances.md")]
    mod distances {}
    #[doc = include_str!("../../../book/src/error_probability.md")]
    mod error_probability {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
