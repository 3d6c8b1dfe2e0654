//! Emptiness of visibly pushdown systems by well-nested summaries.
//!
//! A summary fact `(entry, state)` records that some well-nested word leads
//! from `entry` to `state` without touching the stack below. Facts are
//! saturated with a FIFO worklist; a fact whose entry is initial and whose
//! state accepts witnesses a word of the language. Each fact keeps the
//! derivation it was first found with, so the witness is rebuilt from
//! parent pointers.
//!
//! The system is explored lazily, which lets the same engine decide
//! emptiness of an explicit machine and of an on-the-fly product of
//! determinized machines.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::alphabet::{InputWord, Sym};

/// A visibly pushdown system explored on demand.
pub trait NestedSystem {
    type State: Clone + Eq + Hash;
    type Frame: Clone + Eq + Hash;

    fn initial_states(&mut self) -> Vec<Self::State>;

    /// Whether `state` accepts when reached at top level with an empty stack.
    fn is_accepting(&mut self, state: &Self::State) -> bool;

    /// `(call symbol, pushed frame, target)` for every call move.
    fn call_successors(&mut self, state: &Self::State) -> Vec<(u32, Self::Frame, Self::State)>;

    /// `(return symbol, target)` for every return move popping `frame`.
    fn return_successors(&mut self, state: &Self::State, frame: &Self::Frame) -> Vec<(u32, Self::State)>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(InputWord),
    Empty,
    BudgetExhausted { explored: usize },
}

#[derive(Clone, Copy)]
enum Derivation {
    Root,
    Nest { outer: u32, call: u32, inner: u32, ret: u32 },
}

struct Fact {
    entry: u32,
    state: u32,
    derivation: Derivation,
}

struct Saturation<S: NestedSystem> {
    ids: HashMap<S::State, u32>,
    states: Vec<S::State>,
    facts: Vec<Fact>,
    fact_ids: HashMap<(u32, u32), u32>,
    callers: HashMap<u32, Vec<(u32, u32, S::Frame)>>,
    inner: HashMap<u32, Vec<u32>>,
    queue: VecDeque<u32>,
    budget: usize,
}

impl<S: NestedSystem> Saturation<S> {
    fn intern(&mut self, s: S::State) -> u32 {
        match self.ids.entry(s) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = self.states.len() as u32;
                self.states.push(e.key().clone());
                e.insert(id);
                id
            }
        }
    }

    fn explored(&self) -> usize {
        self.facts.len() + self.states.len()
    }

    /// Returns false once the budget is exhausted.
    fn add(&mut self, entry: u32, state: u32, derivation: Derivation) -> bool {
        if let Entry::Vacant(e) = self.fact_ids.entry((entry, state)) {
            let id = self.facts.len() as u32;
            e.insert(id);
            self.facts.push(Fact { entry, state, derivation });
            self.queue.push_back(id);
        }
        self.explored() <= self.budget
    }

    fn word(&self, fact: u32) -> InputWord {
        enum Task {
            Fact(u32),
            Emit(Sym),
        }
        let mut out = Vec::new();
        let mut tasks = vec![Task::Fact(fact)];
        while let Some(task) = tasks.pop() {
            match task {
                Task::Emit(s) => out.push(s),
                Task::Fact(id) => {
                    if let Derivation::Nest { outer, call, inner, ret } = self.facts[id as usize].derivation {
                        tasks.push(Task::Emit(Sym::Return(ret)));
                        tasks.push(Task::Fact(inner));
                        tasks.push(Task::Emit(Sym::Call(call)));
                        tasks.push(Task::Fact(outer));
                    }
                }
            }
        }
        out
    }
}

/// Searches for a word accepted by `system`, exploring at most `budget`
/// states plus summary facts.
pub fn find_accepted<S: NestedSystem>(system: &mut S, budget: usize) -> SearchOutcome {
    let mut sat: Saturation<S> = Saturation {
        ids: HashMap::new(),
        states: Vec::new(),
        facts: Vec::new(),
        fact_ids: HashMap::new(),
        callers: HashMap::new(),
        inner: HashMap::new(),
        queue: VecDeque::new(),
        budget,
    };
    let mut top_level = HashSet::new();
    for s in system.initial_states() {
        let id = sat.intern(s);
        top_level.insert(id);
        if !sat.add(id, id, Derivation::Root) {
            return SearchOutcome::BudgetExhausted { explored: sat.explored() };
        }
    }

    while let Some(f) = sat.queue.pop_front() {
        let Fact { entry, state, .. } = sat.facts[f as usize];
        let current = sat.states[state as usize].clone();
        if top_level.contains(&entry) && system.is_accepting(&current) {
            return SearchOutcome::Found(sat.word(f));
        }

        // f as the body of a call made by a registered caller of `entry`
        sat.inner.entry(entry).or_default().push(f);
        let callers = sat.callers.get(&entry).cloned().unwrap_or_default();
        for (caller, call, frame) in callers {
            for (ret, target) in system.return_successors(&current, &frame) {
                let target = sat.intern(target);
                let outer_entry = sat.facts[caller as usize].entry;
                let d = Derivation::Nest { outer: caller, call, inner: f, ret };
                if !sat.add(outer_entry, target, d) {
                    return SearchOutcome::BudgetExhausted { explored: sat.explored() };
                }
            }
        }

        // f as a caller
        for (call, frame, callee) in system.call_successors(&current) {
            let callee = sat.intern(callee);
            sat.callers.entry(callee).or_default().push((f, call, frame.clone()));
            if !sat.add(callee, callee, Derivation::Root) {
                return SearchOutcome::BudgetExhausted { explored: sat.explored() };
            }
            let bodies = sat.inner.get(&callee).cloned().unwrap_or_default();
            for body in bodies {
                let exit = sat.states[sat.facts[body as usize].state as usize].clone();
                for (ret, target) in system.return_successors(&exit, &frame) {
                    let target = sat.intern(target);
                    let d = Derivation::Nest { outer: f, call, inner: body, ret };
                    if !sat.add(entry, target, d) {
                        return SearchOutcome::BudgetExhausted { explored: sat.explored() };
                    }
                }
            }
        }
    }
    SearchOutcome::Empty
}
