//! Named, interchangeable decision procedures.

use crate::error::CheckError;
use crate::fst_check::{fst_functional, fst_functional_bounded, FunctionalityVerdict};
use crate::machine::{Fst, Vpt};
use crate::oracle::{brute_functional, OracleVerdict};
use crate::vpt_check::{check_functional, CheckOptions, CheckOutcome, Scope};

pub trait Named {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
}

pub trait VptChecker: Named + Send + Sync {
    fn check(&self, t: &Vpt, opts: &CheckOptions) -> Result<CheckOutcome, CheckError>;
}

pub trait FstChecker: Named + Send + Sync {
    fn check(&self, f: &Fst) -> FunctionalityVerdict;
}

/// Delay search over the bounded-height expansion.
pub struct ExpansionChecker;

impl Named for ExpansionChecker {
    fn name(&self) -> &'static str {
        "expansion"
    }

    fn describe(&self) -> &'static str {
        "delay search over the on-demand expansion of height at most the cap"
    }
}

impl VptChecker for ExpansionChecker {
    fn check(&self, t: &Vpt, opts: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        check_functional(t, opts)
    }
}

/// Enumeration of all domain words up to a length bound.
pub struct OracleChecker {
    pub max_len: usize,
}

impl Named for OracleChecker {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn describe(&self) -> &'static str {
        "enumerates the domain up to a length bound and compares output sets"
    }
}

impl VptChecker for OracleChecker {
    fn check(&self, t: &Vpt, _opts: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let report = brute_functional(t, self.max_len)?;
        Ok(match report.verdict {
            OracleVerdict::NonFunctional(w) => CheckOutcome::NonFunctional(w),
            _ => CheckOutcome::Functional { exact: false, scope: Scope::InputLength(self.max_len) },
        })
    }
}

/// Delay uniqueness on the trimmed square.
pub struct DelayChecker;

impl Named for DelayChecker {
    fn name(&self) -> &'static str {
        "delay"
    }

    fn describe(&self) -> &'static str {
        "breadth-first delay search on the trimmed square"
    }
}

impl FstChecker for DelayChecker {
    fn check(&self, f: &Fst) -> FunctionalityVerdict {
        fst_functional(f)
    }
}

/// Search for diverging output positions on inputs up to a length bound,
/// `3m²` when unset.
pub struct BoundedChecker {
    pub max_len: Option<usize>,
}

impl Named for BoundedChecker {
    fn name(&self) -> &'static str {
        "bounded"
    }

    fn describe(&self) -> &'static str {
        "per-position divergence search on inputs up to a length bound"
    }
}

impl FstChecker for BoundedChecker {
    fn check(&self, f: &Fst) -> FunctionalityVerdict {
        let m = f.state_count();
        fst_functional_bounded(f, self.max_len.unwrap_or(3 * m * m))
    }
}

/// An ordered collection of strategies; the first one is the default.
pub struct Registry<T: ?Sized> {
    entries: Vec<Box<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: Vec::new() }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    /// Adds `strategy`, replacing any strategy of the same name.
    pub fn register(&mut self, strategy: Box<T>) {
        self.entries.retain(|s| s.name() != strategy.name());
        self.entries.push(strategy);
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn default_strategy(&self) -> Option<&T> {
        self.entries.first().map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries.iter().map(|s| s.as_ref())
    }
}

pub fn vpt_checkers(oracle_max_len: usize) -> Registry<dyn VptChecker> {
    let mut r: Registry<dyn VptChecker> = Registry::default();
    r.register(Box::new(ExpansionChecker));
    r.register(Box::new(OracleChecker { max_len: oracle_max_len }));
    r
}

pub fn fst_checkers(bounded_max_len: Option<usize>) -> Registry<dyn FstChecker> {
    let mut r: Registry<dyn FstChecker> = Registry::default();
    r.register(Box::new(DelayChecker));
    r.register(Box::new(BoundedChecker { max_len: bounded_max_len }));
    r
}
