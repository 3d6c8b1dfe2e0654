use thiserror::Error;

use crate::alphabet::Sym;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("symbol `{0}` is not a nonempty whitespace-free token")]
    BadToken(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("unknown input symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is a call in one alphabet and a return in the other")]
    ClassConflict(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("word is not well nested (first violation at position {position})")]
pub struct NestingError {
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("symbol {0:?} is not in the machine's alphabet")]
    UnknownSymbol(Sym),
    #[error("more than {limit} live configurations while reading the input")]
    ResourceLimit { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("arithmetic overflow while sizing the comparison window")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("height cap must be at least 1")]
    ZeroHeightCap,
    #[error("node budget must be at least 1")]
    ZeroBudget,
    #[error("height bound is undefined for a machine with no states")]
    NoStates,
    #[error("height bound overflows")]
    BoundOverflow,
    #[error("input machine {which} is not functional")]
    NonFunctionalInput { which: usize },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("search produced a witness that does not re-verify: {0}")]
    UnverifiedWitness(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PumpingError {
    #[error("pump count must be at least 1")]
    ZeroPumps,
    #[error("word height {height} does not exceed the required {required}")]
    HeightTooSmall { height: usize, required: usize },
    #[error("machine has no states")]
    NoStates,
    #[error("run is not an accepting run on the word: {0}")]
    InvalidRun(String),
    #[error(transparent)]
    NotWellNested(#[from] NestingError),
    #[error("pump scheme entry {entry} is outside 1..={n}")]
    SchemeOutOfRange { entry: usize, n: usize },
    #[error("word has fewer than two distinct outputs")]
    NotAWitness,
    #[error("no shorter witness found among pump schemes (this is a bug)")]
    NoShorterWitness,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("undeclared {what} `{name}`")]
    Undeclared { what: &'static str, name: String },
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}
