//! Runs, acceptance and the transduction relation of visibly pushdown
//! machines and finite-state transducers.

use std::collections::{BTreeSet, HashSet};

use crate::alphabet::{InputWord, OutWord, Sym};
use crate::error::SemanticsError;
use crate::machine::{Fst, Label, Pushdown, StackSym, StateId};
use crate::summary::{self, NestedSystem, SearchOutcome};

/// A state together with the stack content, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackSym>,
}

impl Configuration {
    pub fn initial(state: StateId) -> Self {
        Configuration { state, stack: Vec::new() }
    }
}

/// One run: `configs[k]` is the configuration after `k` symbols and
/// `outputs[k]` the word produced by step `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub configs: Vec<Configuration>,
    pub outputs: Vec<OutWord>,
}

impl RunTrace {
    pub fn output(&self) -> OutWord {
        self.outputs.concat()
    }

    /// Output produced while reading positions `from..to`.
    pub fn output_between(&self, from: usize, to: usize) -> OutWord {
        self.outputs[from..to].concat()
    }

    pub fn state_at(&self, position: usize) -> StateId {
        self.configs[position].state
    }
}

/// Successors of `config` on `symbol`, with the produced output. Duplicate
/// pairs are collapsed; the order follows transition declaration order.
pub fn step<L: Label>(
    m: &Pushdown<L>,
    config: &Configuration,
    symbol: Sym,
) -> Result<Vec<(Configuration, OutWord)>, SemanticsError> {
    if !m.alphabet().contains(symbol) {
        return Err(SemanticsError::UnknownSymbol(symbol));
    }
    let mut out: Vec<(Configuration, OutWord)> = Vec::new();
    let mut push = |c: Configuration, o: &[char]| {
        if !out.iter().any(|(c2, o2)| *c2 == c && o2 == o) {
            out.push((c, o.to_vec()));
        }
    };
    match symbol {
        Sym::Call(c) => {
            for t in m.calls_from(config.state, c) {
                let mut stack = config.stack.clone();
                stack.push(t.push);
                push(Configuration { state: t.to, stack }, t.output.output());
            }
        }
        Sym::Return(r) => {
            if let Some((&top, rest)) = config.stack.split_last() {
                for t in m.returns_from(config.state, r).filter(|t| t.pop == top) {
                    push(Configuration { state: t.to, stack: rest.to_vec() }, t.output.output());
                }
            }
        }
    }
    Ok(out)
}

/// All outputs of accepting runs on `u`.
pub fn transduce<L: Label>(m: &Pushdown<L>, u: &[Sym]) -> BTreeSet<OutWord> {
    transduce_limited(m, u, usize::MAX).expect("unbounded")
}

/// Like [`transduce`], but fails once more than `limit` (configuration,
/// output) pairs are live at some position.
pub fn transduce_limited<L: Label>(
    m: &Pushdown<L>,
    u: &[Sym],
    limit: usize,
) -> Result<BTreeSet<OutWord>, SemanticsError> {
    if u.iter().any(|&s| !m.alphabet().contains(s)) {
        return Ok(BTreeSet::new());
    }
    let mut frontier: HashSet<(Configuration, OutWord)> = m
        .initial()
        .iter()
        .filter(|q| q.index() < m.state_count())
        .map(|&q| (Configuration::initial(q), Vec::new()))
        .collect();
    for &a in u {
        let mut next = HashSet::new();
        for (config, produced) in &frontier {
            for (succ, out) in step(m, config, a)? {
                let mut word = produced.clone();
                word.extend(out);
                next.insert((succ, word));
                if next.len() > limit {
                    return Err(SemanticsError::ResourceLimit { limit });
                }
            }
        }
        if next.is_empty() {
            return Ok(BTreeSet::new());
        }
        frontier = next;
    }
    Ok(frontier
        .into_iter()
        .filter(|(c, _)| c.stack.is_empty() && m.is_final(c.state))
        .map(|(_, o)| o)
        .collect())
}

/// Configurations reachable from the initial ones after reading `u`.
pub fn reachable<L: Label>(m: &Pushdown<L>, u: &[Sym]) -> BTreeSet<Configuration> {
    let mut frontier: BTreeSet<Configuration> = m
        .initial()
        .iter()
        .filter(|q| q.index() < m.state_count())
        .map(|&q| Configuration::initial(q))
        .collect();
    for &a in u {
        frontier = advance(m, &frontier, a);
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

pub(crate) fn advance<L: Label>(
    m: &Pushdown<L>,
    from: &BTreeSet<Configuration>,
    a: Sym,
) -> BTreeSet<Configuration> {
    let mut next = BTreeSet::new();
    if !m.alphabet().contains(a) {
        return next;
    }
    for config in from {
        for (succ, _) in step(m, config, a).expect("symbol checked") {
            next.insert(succ);
        }
    }
    next
}

pub fn accepts<L: Label>(m: &Pushdown<L>, u: &[Sym]) -> bool {
    reachable(m, u)
        .iter()
        .any(|c| c.stack.is_empty() && m.is_final(c.state))
}

/// Enumerates the accepting runs on `u` in lexicographic order of the
/// transitions taken (declaration order at each step).
pub fn accepting_runs<'m, L: Label>(m: &'m Pushdown<L>, u: &[Sym]) -> AcceptingRuns<'m, L> {
    // live[k]: configurations after k symbols that are reachable and can
    // still complete an accepting run
    let mut forward: Vec<BTreeSet<Configuration>> = Vec::with_capacity(u.len() + 1);
    forward.push(
        m.initial()
            .iter()
            .filter(|q| q.index() < m.state_count())
            .map(|&q| Configuration::initial(q))
            .collect(),
    );
    for &a in u {
        let next = advance(m, forward.last().unwrap(), a);
        forward.push(next);
    }
    let mut live = vec![BTreeSet::new(); u.len() + 1];
    live[u.len()] = forward[u.len()]
        .iter()
        .filter(|c| c.stack.is_empty() && m.is_final(c.state))
        .cloned()
        .collect();
    for k in (0..u.len()).rev() {
        let keep: BTreeSet<Configuration> = forward[k]
            .iter()
            .filter(|c| {
                step(m, c, u[k])
                    .expect("symbol checked")
                    .iter()
                    .any(|(s, _)| live[k + 1].contains(s))
            })
            .cloned()
            .collect();
        live[k] = keep;
    }
    let roots: Vec<Configuration> = m
        .initial()
        .iter()
        .map(|&q| Configuration::initial(q))
        .filter(|c| live[0].contains(c))
        .collect();
    AcceptingRuns {
        m,
        word: u.to_vec(),
        live,
        stack: vec![Frame { options: roots.into_iter().map(|c| (c, Vec::new())).collect(), next: 0 }],
        path: Vec::new(),
    }
}

struct Frame {
    options: Vec<(Configuration, OutWord)>,
    next: usize,
}

pub struct AcceptingRuns<'m, L> {
    m: &'m Pushdown<L>,
    word: InputWord,
    live: Vec<BTreeSet<Configuration>>,
    stack: Vec<Frame>,
    // (configuration, output of the step that produced it)
    path: Vec<(Configuration, OutWord)>,
}

impl<L: Label> Iterator for AcceptingRuns<'_, L> {
    type Item = RunTrace;

    fn next(&mut self) -> Option<RunTrace> {
        loop {
            let depth = self.stack.len();
            let frame = self.stack.last_mut()?;
            if frame.next >= frame.options.len() {
                self.stack.pop();
                self.path.truncate(depth - 1);
                continue;
            }
            let choice = frame.options[frame.next].clone();
            frame.next += 1;
            // path holds one entry per frame below the current one
            self.path.truncate(depth - 1);
            self.path.push(choice);
            let k = depth - 1;
            if k == self.word.len() {
                let configs = self.path.iter().map(|(c, _)| c.clone()).collect();
                let outputs = self.path[1..].iter().map(|(_, o)| o.clone()).collect();
                return Some(RunTrace { configs, outputs });
            }
            let current = &self.path[k].0;
            let options: Vec<_> = step(self.m, current, self.word[k])
                .expect("symbol checked")
                .into_iter()
                .filter(|(c, _)| self.live[k + 1].contains(c))
                .collect();
            self.stack.push(Frame { options, next: 0 });
        }
    }
}

impl<L: Label> NestedSystem for &Pushdown<L> {
    type State = StateId;
    type Frame = StackSym;

    fn initial_states(&mut self) -> Vec<StateId> {
        self.initial().iter().copied().filter(|q| q.index() < self.state_count()).collect()
    }

    fn is_accepting(&mut self, state: &StateId) -> bool {
        self.is_final(*state)
    }

    fn call_successors(&mut self, state: &StateId) -> Vec<(u32, StackSym, StateId)> {
        let mut out = Vec::new();
        for c in 0..self.alphabet().call_count() as u32 {
            out.extend(self.calls_from(*state, c).map(|t| (c, t.push, t.to)));
        }
        out
    }

    fn return_successors(&mut self, state: &StateId, frame: &StackSym) -> Vec<(u32, StateId)> {
        let mut out = Vec::new();
        for r in 0..self.alphabet().return_count() as u32 {
            out.extend(self.returns_from(*state, r).filter(|t| t.pop == *frame).map(|t| (r, t.to)));
        }
        out
    }
}

/// A word of the domain, or `None` if the domain is empty.
pub fn domain_nonempty<L: Label>(m: &Pushdown<L>) -> Option<InputWord> {
    let mut system = m;
    match summary::find_accepted(&mut system, usize::MAX) {
        SearchOutcome::Found(w) => Some(w),
        SearchOutcome::Empty => None,
        SearchOutcome::BudgetExhausted { .. } => unreachable!("unbounded search"),
    }
}

/// All outputs of accepting runs of a finite-state transducer on `u`.
pub fn fst_transduce(f: &Fst, u: &[Sym]) -> BTreeSet<OutWord> {
    let mut frontier: HashSet<(StateId, OutWord)> = f
        .initial()
        .iter()
        .filter(|q| q.index() < f.state_count())
        .map(|&q| (q, Vec::new()))
        .collect();
    for &a in u {
        let mut next = HashSet::new();
        for (q, produced) in &frontier {
            for t in f.transitions_from(*q).filter(|t| t.input == a) {
                let mut word = produced.clone();
                word.extend(&t.output);
                next.insert((t.to, word));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    frontier.into_iter().filter(|(q, _)| f.is_final(*q)).map(|(_, o)| o).collect()
}

pub fn fst_accepts(f: &Fst, u: &[Sym]) -> bool {
    let mut states: BTreeSet<StateId> = f.initial().iter().copied().collect();
    for &a in u {
        states = states
            .iter()
            .flat_map(|&q| f.transitions_from(q).filter(move |t| t.input == a).map(|t| t.to))
            .collect();
    }
    states.iter().any(|&q| f.is_final(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_vpt;
    use crate::nested::is_well_nested;
    use crate::testing::fig1;

    fn w(m: &crate::machine::Vpt, s: &str) -> InputWord {
        m.alphabet().parse_word(s).unwrap()
    }

    fn o(s: &str) -> OutWord {
        s.chars().collect()
    }

    #[test]
    fn step_from_initial_on_c1() {
        let m = fig1();
        let i = StateId(0);
        let succ = step(&m, &Configuration::initial(i), w(&m, "c1")[0]).unwrap();
        let named: BTreeSet<(String, Vec<String>, String)> = succ
            .iter()
            .map(|(c, out)| {
                let stack = c.stack.iter().map(|&g| m.stack_name(g).to_string()).collect();
                (m.state_name(c.state).to_string(), stack, out.iter().collect())
            })
            .collect();
        let expected: BTreeSet<_> = [
            ("q1".to_string(), vec!["g1".to_string()], "dfc".to_string()),
            ("p1".to_string(), vec!["g1".to_string()], "d".to_string()),
        ]
        .into_iter()
        .collect();
        assert_eq!(named, expected);
    }

    #[test]
    fn returns_on_empty_stack_have_no_successors() {
        let m = fig1();
        for q in 0..m.state_count() as u32 {
            for r in 0..3 {
                assert!(step(&m, &Configuration::initial(StateId(q)), Sym::Return(r)).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn step_without_transition_is_empty() {
        let m = fig1();
        let c2 = w(&m, "c2")[0];
        assert!(step(&m, &Configuration::initial(StateId(0)), c2).unwrap().is_empty());
        assert_eq!(
            step(&m, &Configuration::initial(StateId(0)), Sym::Call(9)),
            Err(SemanticsError::UnknownSymbol(Sym::Call(9)))
        );
    }

    #[test]
    fn fig1_outputs() {
        let m = fig1();
        assert_eq!(transduce(&m, &w(&m, "c1 c3 r3 r1")), [o("dfcabgh")].into());
        assert_eq!(transduce(&m, &w(&m, "c1 c2 c3 r3 r2 r1")), [o("dfcabcabcabgh")].into());
        assert!(transduce(&m, &w(&m, "c2 r2")).is_empty());
    }

    #[test]
    fn fig1_acceptance() {
        let m = fig1();
        assert!(accepts(&m, &w(&m, "c1 c2 c2 c3 r3 r2 r2 r1")));
        assert!(!accepts(&m, &w(&m, "c1 r2")));
        assert!(!accepts(&m, &[]));
    }

    #[test]
    fn runs_enumerate_both_branches() {
        let m = fig1();
        let u = w(&m, "c1 c2 c3 r3 r2 r1");
        let runs: Vec<RunTrace> = accepting_runs(&m, &u).collect();
        assert_eq!(runs.len(), 2);
        for r in &runs {
            assert_eq!(r.configs.len(), u.len() + 1);
            assert_eq!(r.output(), o("dfcabcabcabgh"));
            assert!(r.configs.last().unwrap().stack.is_empty());
        }
        // declaration order: i -c1-> q1 is declared first
        assert_eq!(m.state_name(runs[0].state_at(1)), "q1");
        assert_eq!(m.state_name(runs[1].state_at(1)), "p1");
    }

    #[test]
    fn domain_witnesses() {
        let m = fig1();
        let u = domain_nonempty(&m).unwrap();
        assert!(accepts(&m, &u));
        assert_eq!(u, w(&m, "c1 c3 r3 r1"));

        let no_final = parse_vpt(
            "vpt\nalphabet calls c\nalphabet returns r\nstack g\nstates q\ninitial q\n\
             call q c / eps push g -> q\nreturn q r / eps pop g -> q\n",
        )
        .unwrap();
        assert_eq!(domain_nonempty(&no_final), None);

        let unpoppable = parse_vpt(
            "vpt\nalphabet calls c\nalphabet returns r\nstack g h\nstates q\ninitial q\nfinal q\n\
             call q c / eps push g -> q\nreturn q r / eps pop h -> q\n",
        )
        .unwrap();
        // only ε is accepted
        assert_eq!(domain_nonempty(&unpoppable), Some(vec![]));
        let unpoppable_nonempty = parse_vpt(
            "vpt\nalphabet calls c\nalphabet returns r\nstack g h\nstates q p\ninitial q\nfinal p\n\
             call q c / eps push g -> q\nreturn q r / eps pop h -> p\n",
        )
        .unwrap();
        assert_eq!(domain_nonempty(&unpoppable_nonempty), None);
    }

    #[test]
    fn accepted_words_are_well_nested() {
        let m = fig1();
        let syms: Vec<Sym> = m.alphabet().symbols().collect();
        // all words up to length 6
        let mut words: Vec<InputWord> = vec![vec![]];
        for _ in 0..6 {
            let mut next = Vec::new();
            for u in &words {
                for &s in &syms {
                    let mut v = u.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            for u in &next {
                if accepts(&m, u) {
                    assert!(is_well_nested(u));
                }
                assert_eq!(transduce(&m, u).is_empty(), !accepts(&m, u));
            }
            words = next;
        }
    }
}
