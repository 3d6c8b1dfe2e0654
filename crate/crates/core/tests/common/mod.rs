//! Seeded random machines and an independent evaluator used as ground
//! truth by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vpt_core::machine::{CallTransition, FstParts, FstTransition, PushdownParts, ReturnTransition};
use vpt_core::{format, Fst, OutWord, StackSym, StateId, StructuredAlphabet, Sym, Vpt};

pub const OUTPUT_LETTERS: [char; 2] = ['a', 'b'];

#[derive(Clone, Copy, Debug)]
pub struct VptShape {
    pub states: usize,
    pub stack: usize,
    pub calls: usize,
    pub returns: usize,
    pub max_output: usize,
    /// Probability that a given transition is present.
    pub density: f64,
}

impl Default for VptShape {
    fn default() -> Self {
        VptShape { states: 3, stack: 2, calls: 2, returns: 2, max_output: 2, density: 0.2 }
    }
}

fn random_output(rng: &mut ChaCha8Rng, max: usize) -> OutWord {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| OUTPUT_LETTERS[rng.gen_range(0..OUTPUT_LETTERS.len())]).collect()
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A VPT with up to the given sizes; every size is drawn from `1..=max`.
pub fn random_vpt(seed: u64, shape: VptShape) -> Vpt {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=shape.states);
    let ns = rng.gen_range(1..=shape.stack);
    let nc = rng.gen_range(1..=shape.calls);
    let nr = rng.gen_range(1..=shape.returns);
    let alphabet = StructuredAlphabet::new(names("c", nc), names("r", nr), &OUTPUT_LETTERS).unwrap();
    let mut calls = Vec::new();
    let mut returns = Vec::new();
    for from in 0..n as u32 {
        for to in 0..n as u32 {
            for g in 0..ns as u32 {
                for c in 0..nc as u32 {
                    if rng.gen_bool(shape.density) {
                        let output = random_output(rng, shape.max_output);
                        calls.push(CallTransition { from: StateId(from), call: c, output, push: StackSym(g), to: StateId(to) });
                    }
                }
                for r in 0..nr as u32 {
                    if rng.gen_bool(shape.density) {
                        let output = random_output(rng, shape.max_output);
                        returns.push(ReturnTransition { from: StateId(from), ret: r, output, pop: StackSym(g), to: StateId(to) });
                    }
                }
            }
        }
    }
    let mut initial = vec![StateId(0)];
    let mut finals = Vec::new();
    for q in 0..n as u32 {
        if q > 0 && rng.gen_bool(0.2) {
            initial.push(StateId(q));
        }
        if rng.gen_bool(0.5) {
            finals.push(StateId(q));
        }
    }
    Vpt::new(PushdownParts { alphabet, states: names("q", n), stack: names("g", ns), initial, finals, calls, returns })
}

/// An FST with at most `max_states` states over at most two input letters.
pub fn random_fst(seed: u64, max_states: usize) -> Fst {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let ni = rng.gen_range(1..=2);
    let alphabet = StructuredAlphabet::new(names("i", ni), Vec::<String>::new(), &OUTPUT_LETTERS).unwrap();
    let mut transitions = Vec::new();
    for from in 0..n as u32 {
        for to in 0..n as u32 {
            for i in 0..ni as u32 {
                if rng.gen_bool(0.3) {
                    let output = random_output(rng, 2);
                    transitions.push(FstTransition { from: StateId(from), input: Sym::Call(i), output, to: StateId(to) });
                }
            }
        }
    }
    let mut initial = vec![StateId(0)];
    let mut finals = Vec::new();
    for q in 0..n as u32 {
        if q > 0 && rng.gen_bool(0.2) {
            initial.push(StateId(q));
        }
        if rng.gen_bool(0.5) {
            finals.push(StateId(q));
        }
    }
    Fst::new(FstParts { alphabet, states: names("s", n), initial, finals, transitions })
}

/// Outputs by recursion on the nesting structure: a well-nested word is
/// either empty or `c v r w`, and a call transition is matched with a
/// return transition popping the same symbol. No stack is simulated.
pub fn run_tree_outputs(t: &Vpt, u: &[Sym]) -> BTreeSet<OutWord> {
    let mut out = BTreeSet::new();
    for &q in t.initial() {
        for (p, o) in summaries(t, q, u) {
            if t.is_final(p) {
                out.insert(o);
            }
        }
    }
    out
}

fn summaries(t: &Vpt, q: StateId, u: &[Sym]) -> BTreeSet<(StateId, OutWord)> {
    let mut out = BTreeSet::new();
    let Some(&first) = u.first() else {
        out.insert((q, Vec::new()));
        return out;
    };
    let Sym::Call(c) = first else { return out };
    // position of the return matching u[0]
    let mut depth = 0usize;
    let mut close = None;
    for (i, s) in u.iter().enumerate() {
        match s {
            Sym::Call(_) => depth += 1,
            Sym::Return(_) => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
        }
    }
    let Some(close) = close else { return out };
    let Sym::Return(r) = u[close] else { unreachable!() };
    let (inner, rest) = (&u[1..close], &u[close + 1..]);
    for tc in t.call_transitions().iter().filter(|tc| tc.from == q && tc.call == c) {
        for (p, o_inner) in summaries(t, tc.to, inner) {
            for tr in t.return_transitions().iter().filter(|tr| tr.from == p && tr.ret == r && tr.pop == tc.push) {
                for (s, o_rest) in summaries(t, tr.to, rest) {
                    out.insert((s, [tc.output.as_slice(), &o_inner, &tr.output, &o_rest].concat()));
                }
            }
        }
    }
    out
}

/// Every well-nested word of length at most `max_len` over the alphabet.
pub fn well_nested_words(alphabet: &StructuredAlphabet, max_len: usize) -> Vec<Vec<Sym>> {
    let calls: Vec<Sym> = (0..alphabet.call_count() as u32).map(Sym::Call).collect();
    let returns: Vec<Sym> = (0..alphabet.return_count() as u32).map(Sym::Return).collect();
    let mut all = Vec::new();
    let mut prefix = Vec::new();
    fn go(prefix: &mut Vec<Sym>, open: usize, max_len: usize, calls: &[Sym], returns: &[Sym], all: &mut Vec<Vec<Sym>>) {
        if open == 0 {
            all.push(prefix.clone());
        }
        if prefix.len() + open + 2 <= max_len {
            for &c in calls {
                prefix.push(c);
                go(prefix, open + 1, max_len, calls, returns, all);
                prefix.pop();
            }
        }
        if open > 0 {
            for &r in returns {
                prefix.push(r);
                go(prefix, open - 1, max_len, calls, returns, all);
                prefix.pop();
            }
        }
    }
    go(&mut prefix, 0, max_len, &calls, &returns, &mut all);
    all
}

pub fn fixture(name: &str) -> Vpt {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    format::parse_vpt(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub const VPT_FIXTURES: [&str; 8] = [
    "fig1.vpt",
    "fig1_lower.vpt",
    "fig1_upper.vpt",
    "fig1_n0.vpt",
    "fig1_mutated.vpt",
    "pump_loop.vpt",
    "pump_branch.vpt",
    "shrink_two_letters.vpt",
];

/// `c1 c2ⁿ c3 r3 r2ⁿ r1` over the alphabet of the fig1 fixtures.
pub fn family(t: &Vpt, n: usize) -> Vec<Sym> {
    let s = format!("c1 {}c3 r3 {}r1", "c2 ".repeat(n), "r2 ".repeat(n));
    t.alphabet().parse_word(&s).unwrap()
}
