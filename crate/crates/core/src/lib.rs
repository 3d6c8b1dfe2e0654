//! Visibly pushdown transducers over well-nested words.
//!
//! The crate executes VPAs, VPTs and finite-state transducers, decides
//! functionality of FSTs and VPTs, decides equivalence of functional VPTs,
//! and exposes the pumping construction and the word-combinatorics kernel
//! used to bound witnesses.

pub mod alphabet;
pub mod error;
pub mod format;
pub mod fst_check;
pub mod machine;
pub mod nested;
pub mod oracle;
pub mod pumping;
pub mod semantics;
pub mod square;
pub mod strategy;
pub mod summary;
pub mod vpt_check;
pub mod wordcomb;

#[cfg(test)]
mod testing;

pub use alphabet::{out_string, InputWord, OutWord, StructuredAlphabet, Sym};
pub use error::{
    AlphabetError, CheckError, NestingError, OracleError, ParseError, ParseErrorKind, PumpingError,
    SemanticsError, WordError,
};
pub use format::{parse_fst, parse_machine, parse_vpa, parse_vpt, serialize};
pub use machine::{Fst, Machine, StackSym, StateId, ValidationReport, Violation, Vpa, Vpt};
