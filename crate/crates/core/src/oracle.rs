//! Brute-force ground truth: enumerate every input up to a length bound
//! and compare output sets directly.
//!
//! Words are visited in length-lexicographic order, so the first witness
//! found is a shortest one.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::alphabet::{InputWord, OutWord, Sym};
use crate::error::{OracleError, SemanticsError};
use crate::machine::{Fst, Label, Pushdown, StateId};
use crate::semantics::{fst_transduce, step, transduce, transduce_limited, Configuration};
use crate::square::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Generate every word and test it, instead of pruning prefixes that
    /// cannot be extended into the domain.
    pub naive: bool,
    /// Largest number of live (configuration, output) pairs per prefix.
    pub config_limit: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { naive: false, config_limit: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// No input up to the bound has two outputs.
    Functional,
    NonFunctional(Witness),
    /// Same domain and outputs on every input up to the bound.
    EquivUpTo(usize),
    Differ { input: InputWord, outputs1: Vec<OutWord>, outputs2: Vec<OutWord> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of domain words examined.
    pub checked_count: usize,
    pub verdict: OracleVerdict,
    pub max_len: usize,
}

trait Walker {
    type Item: Ord + Clone;
    fn symbols(&self) -> Vec<Sym>;
    fn initial(&self) -> BTreeSet<Self::Item>;
    /// Successor items on `a`, dropping those that cannot finish within
    /// `remaining` more symbols.
    fn advance(&self, items: &BTreeSet<Self::Item>, a: Sym, remaining: usize) -> BTreeSet<Self::Item>;
    /// Outputs if the word read so far is accepted.
    fn outputs(&self, items: &BTreeSet<Self::Item>) -> Option<BTreeSet<OutWord>>;
}

struct PushdownWalker<'m, L> {
    m: &'m Pushdown<L>,
    track_outputs: bool,
}

impl<L: Label> Walker for PushdownWalker<'_, L> {
    type Item = (Configuration, OutWord);

    fn symbols(&self) -> Vec<Sym> {
        self.m.alphabet().symbols().collect()
    }

    fn initial(&self) -> BTreeSet<Self::Item> {
        let m = self.m;
        m.initial()
            .iter()
            .filter(|q| q.index() < m.state_count())
            .map(|&q| (Configuration::initial(q), Vec::new()))
            .collect()
    }

    fn advance(&self, items: &BTreeSet<Self::Item>, a: Sym, remaining: usize) -> BTreeSet<Self::Item> {
        let mut next = BTreeSet::new();
        for (config, produced) in items {
            for (succ, out) in step(self.m, config, a).expect("symbol of the alphabet") {
                if succ.stack.len() > remaining {
                    continue;
                }
                let word = if self.track_outputs { [produced.as_slice(), &out].concat() } else { Vec::new() };
                next.insert((succ, word));
            }
        }
        next
    }

    fn outputs(&self, items: &BTreeSet<Self::Item>) -> Option<BTreeSet<OutWord>> {
        let outs: BTreeSet<OutWord> = items
            .iter()
            .filter(|(c, _)| c.stack.is_empty() && self.m.is_final(c.state))
            .map(|(_, o)| o.clone())
            .collect();
        (!outs.is_empty()).then_some(outs)
    }
}

struct FstWalker<'f>(&'f Fst);

impl Walker for FstWalker<'_> {
    type Item = (StateId, OutWord);

    fn symbols(&self) -> Vec<Sym> {
        self.0.alphabet().symbols().collect()
    }

    fn initial(&self) -> BTreeSet<Self::Item> {
        let f = self.0;
        f.initial().iter().filter(|q| q.index() < f.state_count()).map(|&q| (q, Vec::new())).collect()
    }

    fn advance(&self, items: &BTreeSet<Self::Item>, a: Sym, _remaining: usize) -> BTreeSet<Self::Item> {
        let mut next = BTreeSet::new();
        for (q, produced) in items {
            for t in self.0.transitions_from(*q).filter(|t| t.input == a) {
                next.insert((t.to, [produced.as_slice(), &t.output].concat()));
            }
        }
        next
    }

    fn outputs(&self, items: &BTreeSet<Self::Item>) -> Option<BTreeSet<OutWord>> {
        let outs: BTreeSet<OutWord> = items.iter().filter(|(q, _)| self.0.is_final(*q)).map(|(_, o)| o.clone()).collect();
        (!outs.is_empty()).then_some(outs)
    }
}

/// Depth-first walk of prefixes, one length at a time.
struct Walk<W: Walker> {
    walker: W,
    symbols: Vec<Sym>,
    max_len: usize,
    limit: usize,
    target: usize,
    stack: Vec<(BTreeSet<W::Item>, usize)>,
    prefix: InputWord,
    done: bool,
}

impl<W: Walker> Walk<W> {
    fn new(walker: W, max_len: usize, limit: usize) -> Self {
        let initial = walker.initial();
        let done = initial.is_empty();
        Walk {
            symbols: walker.symbols(),
            walker,
            max_len,
            limit,
            target: 0,
            stack: vec![(initial, 0)],
            prefix: Vec::new(),
            done,
        }
    }
}

impl<W: Walker> Iterator for Walk<W> {
    type Item = Result<(InputWord, BTreeSet<OutWord>), OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            if self.stack.is_empty() {
                self.target += 1;
                if self.target > self.max_len {
                    self.done = true;
                    break;
                }
                self.stack.push((self.walker.initial(), 0));
                continue;
            }
            let depth = self.stack.len() - 1;
            if depth == self.target {
                let (items, _) = self.stack.pop().expect("nonempty");
                let word = self.prefix.clone();
                self.prefix.pop();
                if let Some(outs) = self.walker.outputs(&items) {
                    return Some(Ok((word, outs)));
                }
                continue;
            }
            let (items, next) = self.stack.last_mut().expect("nonempty");
            if *next == self.symbols.len() {
                self.stack.pop();
                self.prefix.pop();
                continue;
            }
            let a = self.symbols[*next];
            *next += 1;
            let succ = self.walker.advance(items, a, self.target - depth - 1);
            if succ.len() > self.limit {
                self.done = true;
                return Some(Err(SemanticsError::ResourceLimit { limit: self.limit }.into()));
            }
            if !succ.is_empty() {
                self.stack.push((succ, 0));
                self.prefix.push(a);
            }
        }
        None
    }
}

/// Every word over `symbols` up to `max_len`, in length-lexicographic order.
struct AllWords {
    symbols: Vec<Sym>,
    max_len: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for AllWords {
    type Item = InputWord;

    fn next(&mut self) -> Option<InputWord> {
        if self.done {
            return None;
        }
        let word = self.digits.iter().map(|&d| self.symbols[d]).collect();
        let k = self.symbols.len();
        match self.digits.iter().rposition(|&d| d + 1 < k) {
            Some(i) => {
                self.digits[i] += 1;
                self.digits[i + 1..].fill(0);
            }
            None if self.digits.len() < self.max_len && k > 0 => self.digits = vec![0; self.digits.len() + 1],
            None => self.done = true,
        }
        Some(word)
    }
}

type Stream<'m> = Box<dyn Iterator<Item = Result<(InputWord, BTreeSet<OutWord>), OracleError>> + 'm>;

fn domain_with_outputs<'m, L: Label>(
    m: &'m Pushdown<L>,
    max_len: usize,
    opts: &OracleOptions,
    track_outputs: bool,
) -> Stream<'m> {
    if opts.naive {
        let limit = opts.config_limit;
        let words = AllWords { symbols: m.alphabet().symbols().collect(), max_len, digits: Vec::new(), done: false };
        Box::new(words.filter_map(move |u| match transduce_limited(m, &u, limit) {
            Ok(outs) if outs.is_empty() => None,
            Ok(outs) => Some(Ok((u, if track_outputs { outs } else { [Vec::new()].into() }))),
            Err(e) => Some(Err(e.into())),
        }))
    } else {
        Box::new(Walk::new(PushdownWalker { m, track_outputs }, max_len, opts.config_limit))
    }
}

/// The words of the domain of `m` of length at most `max_len`, in
/// length-lexicographic order.
pub fn enumerate_domain<L: Label>(m: &Pushdown<L>, max_len: usize) -> impl Iterator<Item = InputWord> + '_ {
    enumerate_domain_with(m, max_len, &OracleOptions { config_limit: usize::MAX, ..OracleOptions::default() })
        .map(|r| r.expect("no limit"))
}

pub fn enumerate_domain_with<'m, L: Label>(
    m: &'m Pushdown<L>,
    max_len: usize,
    opts: &OracleOptions,
) -> impl Iterator<Item = Result<InputWord, OracleError>> + 'm {
    domain_with_outputs(m, max_len, opts, false).map(|r| r.map(|(u, _)| u))
}

fn witness_from(u: InputWord, outs: BTreeSet<OutWord>) -> Witness {
    let mut it = outs.into_iter();
    let out1 = it.next().expect("two outputs");
    let out2 = it.next().expect("two outputs");
    Witness { input: u, out1, out2 }
}

fn functional_report(
    stream: impl Iterator<Item = Result<(InputWord, BTreeSet<OutWord>), OracleError>>,
    max_len: usize,
    confirm: impl Fn(&[Sym]) -> BTreeSet<OutWord>,
) -> Result<OracleReport, OracleError> {
    let mut checked_count = 0;
    for item in stream {
        let (u, outs) = item?;
        checked_count += 1;
        if outs.len() >= 2 {
            let w = witness_from(u, outs);
            let again = confirm(&w.input);
            assert!(again.contains(&w.out1) && again.contains(&w.out2), "oracle witness does not re-verify");
            return Ok(OracleReport { checked_count, verdict: OracleVerdict::NonFunctional(w), max_len });
        }
    }
    Ok(OracleReport { checked_count, verdict: OracleVerdict::Functional, max_len })
}

/// Looks for a shortest input of length at most `max_len` with two outputs.
pub fn brute_functional<L: Label>(m: &Pushdown<L>, max_len: usize) -> Result<OracleReport, OracleError> {
    brute_functional_with(m, max_len, &OracleOptions::default())
}

pub fn brute_functional_with<L: Label>(
    m: &Pushdown<L>,
    max_len: usize,
    opts: &OracleOptions,
) -> Result<OracleReport, OracleError> {
    functional_report(domain_with_outputs(m, max_len, opts, true), max_len, |u| transduce(m, u))
}

/// The finite-state counterpart of [`brute_functional`].
pub fn brute_fst_functional(f: &Fst, max_len: usize) -> Result<OracleReport, OracleError> {
    let stream = Walk::new(FstWalker(f), max_len, OracleOptions::default().config_limit);
    functional_report(stream, max_len, |u| fst_transduce(f, u))
}

fn length_lex(a: &[Sym], b: &[Sym]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Compares domains and outputs of two machines on all inputs up to
/// `max_len`. Witnesses are over the merged alphabet.
pub fn brute_equiv<L: Label>(t1: &Pushdown<L>, t2: &Pushdown<L>, max_len: usize) -> Result<OracleReport, OracleError> {
    brute_equiv_with(t1, t2, max_len, &OracleOptions::default())
}

pub fn brute_equiv_with<L: Label>(
    t1: &Pushdown<L>,
    t2: &Pushdown<L>,
    max_len: usize,
    opts: &OracleOptions,
) -> Result<OracleReport, OracleError> {
    let alphabet = t1.alphabet().merge(t2.alphabet())?;
    let a = t1.over_alphabet(&alphabet)?;
    let b = t2.over_alphabet(&alphabet)?;
    let mut s1 = domain_with_outputs(&a, max_len, opts, true).peekable();
    let mut s2 = domain_with_outputs(&b, max_len, opts, true).peekable();
    let mut checked_count = 0;
    loop {
        let order = match (s1.peek(), s2.peek()) {
            (None, None) => break,
            (Some(Err(_)), _) => return Err(s1.next().expect("peeked").unwrap_err()),
            (_, Some(Err(_))) => return Err(s2.next().expect("peeked").unwrap_err()),
            (Some(Ok((u1, _))), Some(Ok((u2, _)))) => length_lex(u1, u2),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
        };
        checked_count += 1;
        let (input, o1, o2) = match order {
            Ordering::Equal => {
                let (u, o1) = s1.next().expect("peeked").expect("checked");
                let (_, o2) = s2.next().expect("peeked").expect("checked");
                if o1 == o2 {
                    continue;
                }
                (u, o1, o2)
            }
            Ordering::Less => {
                let (u, o1) = s1.next().expect("peeked").expect("checked");
                (u, o1, BTreeSet::new())
            }
            Ordering::Greater => {
                let (u, o2) = s2.next().expect("peeked").expect("checked");
                (u, BTreeSet::new(), o2)
            }
        };
        assert_eq!((transduce(&a, &input), transduce(&b, &input)), (o1.clone(), o2.clone()), "oracle witness does not re-verify");
        let verdict = OracleVerdict::Differ { input, outputs1: o1.into_iter().collect(), outputs2: o2.into_iter().collect() };
        return Ok(OracleReport { checked_count, verdict, max_len });
    }
    Ok(OracleReport { checked_count, verdict: OracleVerdict::EquivUpTo(max_len), max_len })
}
