//! Vertical pumping of pairs of runs on tall words, and shrinking of
//! non-functionality witnesses.
//!
//! For a word `u` of height `h` and a position `j` of maximal depth, let
//! `α(k)` be the last position before `j` at depth `k` and `β(k)` the first
//! position after `j` at depth `k`. Recording the states of two runs at
//! `α(k)` and `β(k)` gives a quadruple per height; heights sharing a
//! quadruple cut `u` into call loops `uᵢ` and matching return loops `ūᵢ`
//! that can be repeated, dropped or permuted in both runs at once.

use crate::alphabet::{InputWord, OutWord, Sym};
use crate::error::PumpingError;
use crate::machine::{StateId, Vpt};
use crate::nested::{depth_profile, height};
use crate::semantics::{accepting_runs, step, transduce, RunTrace};

/// A word cut as `prefix · loops[0] ⋯ loops[n-1] · middle · co_loops[n-1] ⋯ co_loops[0] · suffix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factors<T> {
    pub prefix: Vec<T>,
    pub loops: Vec<Vec<T>>,
    pub middle: Vec<T>,
    pub co_loops: Vec<Vec<T>>,
    pub suffix: Vec<T>,
}

impl<T: Clone> Factors<T> {
    /// `prefix · loops[π₁] ⋯ loops[πₖ] · middle · co_loops[πₖ] ⋯ co_loops[π₁] · suffix`
    /// with 1-based entries, which must be in range.
    fn assemble(&self, scheme: &[usize]) -> Vec<T> {
        let mut out = self.prefix.clone();
        for &i in scheme {
            out.extend_from_slice(&self.loops[i - 1]);
        }
        out.extend_from_slice(&self.middle);
        for &i in scheme.iter().rev() {
            out.extend_from_slice(&self.co_loops[i - 1]);
        }
        out.extend_from_slice(&self.suffix);
        out
    }

    fn assembled_len(&self, scheme: &[usize]) -> usize {
        let pumped: usize = scheme.iter().map(|&i| self.loops[i - 1].len() + self.co_loops[i - 1].len()).sum();
        self.prefix.len() + self.middle.len() + self.suffix.len() + pumped
    }
}

/// A sequence over `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PumpScheme(pub Vec<usize>);

impl PumpScheme {
    pub fn identity(n: usize) -> Self {
        PumpScheme((1..=n).collect())
    }

    pub fn empty() -> Self {
        PumpScheme(Vec::new())
    }

    pub fn check(&self, n: usize) -> Result<(), PumpingError> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(&entry) => Err(PumpingError::SchemeOutOfRange { entry, n }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub n: usize,
    /// The heights `k₁ < … < kₙ₊₁` the word is cut at.
    pub heights: Vec<usize>,
    /// States of the first run at `α(k)`, `β(k)` and of the second run at
    /// `α(k)`, `β(k)`, shared by all chosen heights.
    pub quadruple: (StateId, StateId, StateId, StateId),
    pub input: Factors<Sym>,
    pub out1: Factors<char>,
    pub out2: Factors<char>,
}

impl Decomposition {
    pub fn pump(&self, scheme: &PumpScheme) -> Result<(InputWord, OutWord, OutWord), PumpingError> {
        scheme.check(self.n)?;
        Ok((self.input.assemble(&scheme.0), self.out1.assemble(&scheme.0), self.out2.assemble(&scheme.0)))
    }

    pub fn pumped_len(&self, scheme: &PumpScheme) -> Result<usize, PumpingError> {
        scheme.check(self.n)?;
        Ok(self.input.assembled_len(&scheme.0))
    }
}

pub fn pump(d: &Decomposition, scheme: &PumpScheme) -> Result<(InputWord, OutWord, OutWord), PumpingError> {
    d.pump(scheme)
}

fn check_run(t: &Vpt, u: &[Sym], run: &RunTrace) -> Result<(), PumpingError> {
    let invalid = |why: String| Err(PumpingError::InvalidRun(why));
    if run.configs.len() != u.len() + 1 || run.outputs.len() != u.len() {
        return invalid(format!("run has {} configurations for a word of length {}", run.configs.len(), u.len()));
    }
    let first = &run.configs[0];
    if !first.stack.is_empty() || !t.initial().contains(&first.state) {
        return invalid("run does not start in an initial configuration".into());
    }
    for (k, &a) in u.iter().enumerate() {
        let next = (run.configs[k + 1].clone(), run.outputs[k].clone());
        if !step(t, &run.configs[k], a)?.contains(&next) {
            return invalid(format!("no transition at position {k}"));
        }
    }
    let last = &run.configs[u.len()];
    if !last.stack.is_empty() || !t.is_final(last.state) {
        return invalid("run does not end in an accepting configuration".into());
    }
    Ok(())
}

fn cut<T: Clone>(word: &[T], at: impl Fn(usize) -> usize, alpha: &[usize], beta: &[usize]) -> Factors<T> {
    let n = alpha.len() - 1;
    let slice = |from: usize, to: usize| word[at(from)..at(to)].to_vec();
    Factors {
        prefix: slice(0, alpha[0]),
        loops: (0..n).map(|i| slice(alpha[i], alpha[i + 1])).collect(),
        middle: slice(alpha[n], beta[n]),
        co_loops: (0..n).map(|i| slice(beta[i + 1], beta[i])).collect(),
        suffix: word[at(beta[0])..].to_vec(),
    }
}

/// Cuts `u` and the two accepting runs into `n` synchronized loop pairs.
/// Requires `h(u) > n·N⁴` for `N` states.
pub fn decompose(t: &Vpt, u: &[Sym], run1: &RunTrace, run2: &RunTrace, n: usize) -> Result<Decomposition, PumpingError> {
    if n == 0 {
        return Err(PumpingError::ZeroPumps);
    }
    let states = t.state_count();
    if states == 0 {
        return Err(PumpingError::NoStates);
    }
    let profile = depth_profile(u)?;
    let height = profile.iter().copied().max().unwrap_or(0);
    let required = states
        .checked_pow(4)
        .and_then(|n4| n4.checked_mul(n))
        .unwrap_or(usize::MAX);
    if height <= required {
        return Err(PumpingError::HeightTooSmall { height, required });
    }
    check_run(t, u, run1)?;
    check_run(t, u, run2)?;

    let j = profile.iter().position(|&d| d == height).expect("height attained");
    let alpha: Vec<usize> = (0..=height)
        .map(|k| (0..=j).rev().find(|&d| profile[d] == k).expect("depth changes by one"))
        .collect();
    let beta: Vec<usize> = (0..=height)
        .map(|k| (j..profile.len()).find(|&d| profile[d] == k).expect("depth changes by one"))
        .collect();
    let quad = |k: usize| {
        (run1.state_at(alpha[k]), run1.state_at(beta[k]), run2.state_at(alpha[k]), run2.state_at(beta[k]))
    };

    let mut by_quad: std::collections::BTreeMap<_, Vec<usize>> = std::collections::BTreeMap::new();
    for k in 0..=height {
        by_quad.entry(quad(k)).or_default().push(k);
    }
    let (quadruple, heights) = by_quad
        .into_iter()
        .filter(|(_, ks)| ks.len() > n)
        .min_by_key(|(q, ks)| (ks[n], *q))
        .map(|(q, ks)| (q, ks[..=n].to_vec()))
        .expect("pigeonhole");

    let a: Vec<usize> = heights.iter().map(|&k| alpha[k]).collect();
    let b: Vec<usize> = heights.iter().map(|&k| beta[k]).collect();
    let out_cut = |run: &RunTrace| {
        let word = run.output();
        let mut offsets = vec![0];
        for o in &run.outputs {
            offsets.push(offsets.last().unwrap() + o.len());
        }
        cut(&word, |p| offsets[p], &a, &b)
    };
    Ok(Decomposition {
        n,
        heights,
        quadruple,
        input: cut(u, |p| p, &a, &b),
        out1: out_cut(run1),
        out2: out_cut(run2),
    })
}

/// Schemes visited per length when no witness shows up among `|π| ≤ 7`.
const EXTRA_SCHEME_LIMIT: usize = 1_000_000;

/// Given `u` with two outputs and `h(u) > 8N⁴`, returns a strictly shorter
/// word that still has two outputs.
pub fn shrink_witness(t: &Vpt, u: &[Sym]) -> Result<InputWord, PumpingError> {
    let states = t.state_count();
    if states == 0 {
        return Err(PumpingError::NoStates);
    }
    let height = height(u)?;
    let required = states.checked_pow(4).and_then(|n4| n4.checked_mul(8)).unwrap_or(usize::MAX);
    if height <= required {
        return Err(PumpingError::HeightTooSmall { height, required });
    }
    if transduce(t, u).len() < 2 {
        return Err(PumpingError::NotAWitness);
    }
    let mut runs = accepting_runs(t, u);
    let run1 = runs.next().ok_or(PumpingError::NotAWitness)?;
    let out1 = run1.output();
    let run2 = runs.find(|r| r.output() != out1).ok_or(PumpingError::NotAWitness)?;
    let d = decompose(t, u, &run1, &run2, 8)?;

    let mut visited = 0usize;
    for k in 0.. {
        if k > 7 && d.input.assembled_len(&vec![shortest_loop(&d); k]) >= u.len() {
            break;
        }
        let mut scheme = vec![1usize; k];
        loop {
            if d.input.assembled_len(&scheme) < u.len() && d.out1.assemble(&scheme) != d.out2.assemble(&scheme) {
                let (candidate, ..) = d.pump(&PumpScheme(scheme))?;
                return Ok(candidate);
            }
            if k > 7 {
                visited += 1;
                if visited > EXTRA_SCHEME_LIMIT {
                    return Err(PumpingError::NoShorterWitness);
                }
            }
            if !next_scheme(&mut scheme, d.n) {
                break;
            }
        }
    }
    Err(PumpingError::NoShorterWitness)
}

fn shortest_loop(d: &Decomposition) -> usize {
    (1..=d.n).min_by_key(|&i| d.input.loops[i - 1].len() + d.input.co_loops[i - 1].len()).unwrap_or(1)
}

/// Advances `scheme` to the next sequence over `{1..n}` in lexicographic
/// order, returning false after the last one.
fn next_scheme(scheme: &mut [usize], n: usize) -> bool {
    for i in (0..scheme.len()).rev() {
        if scheme[i] < n {
            scheme[i] += 1;
            scheme[i + 1..].fill(1);
            return true;
        }
    }
    false
}
