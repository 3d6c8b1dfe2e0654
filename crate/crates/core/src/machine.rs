//! Machine descriptions: visibly pushdown automata and transducers, and
//! finite-state transducers.
//!
//! A machine is built from its `*Parts` description and is immutable
//! afterwards. Construction never fails; structural problems (undeclared
//! states, stack symbols, output letters) are reported by `validate` and
//! the offending transitions are left out of the lookup indices. Decision
//! procedures assume a machine whose report is clean.

use std::fmt;
use std::hash::Hash;

use crate::alphabet::{OutWord, StructuredAlphabet, Sym};
use crate::error::AlphabetError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackSym(pub u32);

impl StackSym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Transition label: an output word for transducers, nothing for automata.
pub trait Label: Clone + Eq + Hash + fmt::Debug {
    fn output(&self) -> &[char];
}

impl Label for () {
    fn output(&self) -> &[char] {
        &[]
    }
}

impl Label for OutWord {
    fn output(&self) -> &[char] {
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CallTransition<L> {
    pub from: StateId,
    pub call: u32,
    pub output: L,
    pub push: StackSym,
    pub to: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReturnTransition<L> {
    pub from: StateId,
    pub ret: u32,
    pub output: L,
    pub pop: StackSym,
    pub to: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushdownParts<L> {
    pub alphabet: StructuredAlphabet,
    pub states: Vec<String>,
    pub stack: Vec<String>,
    pub initial: Vec<StateId>,
    pub finals: Vec<StateId>,
    pub calls: Vec<CallTransition<L>>,
    pub returns: Vec<ReturnTransition<L>>,
}

/// A visibly pushdown machine. Calls push exactly one stack symbol, returns
/// pop exactly one; there are no transitions on the empty stack.
#[derive(Clone, Debug)]
pub struct Pushdown<L> {
    parts: PushdownParts<L>,
    is_final: Vec<bool>,
    // (state, call) -> call transition ids, declaration order
    call_index: Vec<Vec<u32>>,
    // (state, return) -> return transition ids, declaration order
    ret_index: Vec<Vec<u32>>,
}

pub type Vpt = Pushdown<OutWord>;
pub type Vpa = Pushdown<()>;

impl<L: Label> PartialEq for Pushdown<L> {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl<L: Label> Eq for Pushdown<L> {}

impl<L: Label> Pushdown<L> {
    pub fn new(parts: PushdownParts<L>) -> Self {
        let n = parts.states.len();
        let nc = parts.alphabet.call_count();
        let nr = parts.alphabet.return_count();
        let ns = parts.stack.len();
        let mut is_final = vec![false; n];
        for f in &parts.finals {
            if f.index() < n {
                is_final[f.index()] = true;
            }
        }
        let mut call_index = vec![Vec::new(); n * nc];
        for (i, t) in parts.calls.iter().enumerate() {
            if t.from.index() < n && t.to.index() < n && (t.call as usize) < nc && t.push.index() < ns
            {
                call_index[t.from.index() * nc + t.call as usize].push(i as u32);
            }
        }
        let mut ret_index = vec![Vec::new(); n * nr];
        for (i, t) in parts.returns.iter().enumerate() {
            if t.from.index() < n && t.to.index() < n && (t.ret as usize) < nr && t.pop.index() < ns {
                ret_index[t.from.index() * nr + t.ret as usize].push(i as u32);
            }
        }
        Pushdown {
            parts,
            is_final,
            call_index,
            ret_index,
        }
    }

    pub fn parts(&self) -> &PushdownParts<L> {
        &self.parts
    }

    pub fn into_parts(self) -> PushdownParts<L> {
        self.parts
    }

    pub fn alphabet(&self) -> &StructuredAlphabet {
        &self.parts.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.parts.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.parts.states[q.index()]
    }

    pub fn stack_name(&self, g: StackSym) -> &str {
        &self.parts.stack[g.index()]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.parts.initial
    }

    pub fn finals(&self) -> &[StateId] {
        &self.parts.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.is_final.get(q.index()).copied().unwrap_or(false)
    }

    pub fn call_transitions(&self) -> &[CallTransition<L>] {
        &self.parts.calls
    }

    pub fn return_transitions(&self) -> &[ReturnTransition<L>] {
        &self.parts.returns
    }

    /// Call transitions leaving `q` on call `c`, in declaration order.
    pub fn calls_from(&self, q: StateId, c: u32) -> impl Iterator<Item = &CallTransition<L>> + '_ {
        let nc = self.parts.alphabet.call_count();
        let slot = if q.index() < self.state_count() && (c as usize) < nc {
            &self.call_index[q.index() * nc + c as usize][..]
        } else {
            &[]
        };
        slot.iter().map(move |&i| &self.parts.calls[i as usize])
    }

    /// Return transitions leaving `q` on return `r`, in declaration order.
    pub fn returns_from(
        &self,
        q: StateId,
        r: u32,
    ) -> impl Iterator<Item = &ReturnTransition<L>> + '_ {
        let nr = self.parts.alphabet.return_count();
        let slot = if q.index() < self.state_count() && (r as usize) < nr {
            &self.ret_index[q.index() * nr + r as usize][..]
        } else {
            &[]
        };
        slot.iter().map(move |&i| &self.parts.returns[i as usize])
    }

    /// Longest output word carried by any transition.
    pub fn max_output_len(&self) -> usize {
        let c = self.parts.calls.iter().map(|t| t.output.output().len());
        let r = self.parts.returns.iter().map(|t| t.output.output().len());
        c.chain(r).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let p = &self.parts;
        let mut report = ValidationReport::default();
        report.check_names("state", &p.states);
        report.check_names("stack symbol", &p.stack);
        let n = p.states.len();
        report.check_state_sets(n, &p.initial, &p.finals);
        for (i, t) in p.calls.iter().enumerate() {
            let at = TransitionRef::Call(i);
            report.check_state(at, t.from, n);
            report.check_state(at, t.to, n);
            if t.call as usize >= p.alphabet.call_count() {
                report.push(Violation::UndeclaredSymbol { at, symbol: Sym::Call(t.call) });
            }
            if t.push.index() >= p.stack.len() {
                report.push(Violation::UndeclaredStackSymbol { at, stack: t.push });
            }
            report.check_output(at, t.output.output(), &p.alphabet);
        }
        for (i, t) in p.returns.iter().enumerate() {
            let at = TransitionRef::Return(i);
            report.check_state(at, t.from, n);
            report.check_state(at, t.to, n);
            if t.ret as usize >= p.alphabet.return_count() {
                report.push(Violation::UndeclaredSymbol { at, symbol: Sym::Return(t.ret) });
            }
            if t.pop.index() >= p.stack.len() {
                report.push(Violation::UndeclaredStackSymbol { at, stack: t.pop });
            }
            report.check_output(at, t.output.output(), &p.alphabet);
        }
        report
    }

    /// The same machine over a larger alphabet. Symbols are matched by name.
    pub fn over_alphabet(&self, alphabet: &StructuredAlphabet) -> Result<Self, AlphabetError> {
        let src = &self.parts.alphabet;
        let tr = |sym: Sym| {
            src.translate(sym, alphabet)
                .ok_or_else(|| AlphabetError::UnknownSymbol(src.name(sym).to_string()))
        };
        let mut parts = self.parts.clone();
        parts.alphabet = alphabet.clone();
        for t in &mut parts.calls {
            match tr(Sym::Call(t.call))? {
                Sym::Call(c) => t.call = c,
                Sym::Return(_) => return Err(AlphabetError::ClassConflict(src.name(Sym::Call(t.call)).into())),
            }
        }
        for t in &mut parts.returns {
            match tr(Sym::Return(t.ret))? {
                Sym::Return(r) => t.ret = r,
                Sym::Call(_) => return Err(AlphabetError::ClassConflict(src.name(Sym::Return(t.ret)).into())),
            }
        }
        Ok(Pushdown::new(parts))
    }

    /// The machine recognising the union of both languages (relations),
    /// over the merged alphabet. States and stack symbols of the operands
    /// are kept apart by `1.`/`2.` prefixes.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, AlphabetError> {
        let alphabet = self.alphabet().merge(other.alphabet())?;
        let a = self.over_alphabet(&alphabet)?.into_parts();
        let b = other.over_alphabet(&alphabet)?.into_parts();
        let (qs, gs) = (a.states.len() as u32, a.stack.len() as u32);
        let shift_q = |q: StateId| StateId(q.0 + qs);
        let shift_g = |g: StackSym| StackSym(g.0 + gs);
        let prefix = |p: &str, names: &[String]| -> Vec<String> {
            names.iter().map(|s| format!("{p}{s}")).collect()
        };
        let mut parts = PushdownParts {
            alphabet,
            states: prefix("1.", &a.states),
            stack: prefix("1.", &a.stack),
            initial: a.initial,
            finals: a.finals,
            calls: a.calls,
            returns: a.returns,
        };
        parts.states.extend(prefix("2.", &b.states));
        parts.stack.extend(prefix("2.", &b.stack));
        parts.initial.extend(b.initial.iter().map(|&q| shift_q(q)));
        parts.finals.extend(b.finals.iter().map(|&q| shift_q(q)));
        parts.calls.extend(b.calls.into_iter().map(|t| CallTransition {
            from: shift_q(t.from),
            to: shift_q(t.to),
            push: shift_g(t.push),
            ..t
        }));
        parts.returns.extend(b.returns.into_iter().map(|t| ReturnTransition {
            from: shift_q(t.from),
            to: shift_q(t.to),
            pop: shift_g(t.pop),
            ..t
        }));
        Ok(Pushdown::new(parts))
    }
}

impl Vpt {
    /// The underlying automaton recognising the domain.
    pub fn domain_automaton(&self) -> Vpa {
        let p = &self.parts;
        Pushdown::new(PushdownParts {
            alphabet: p.alphabet.clone(),
            states: p.states.clone(),
            stack: p.stack.clone(),
            initial: p.initial.clone(),
            finals: p.finals.clone(),
            calls: p
                .calls
                .iter()
                .map(|t| CallTransition { from: t.from, call: t.call, output: (), push: t.push, to: t.to })
                .collect(),
            returns: p
                .returns
                .iter()
                .map(|t| ReturnTransition { from: t.from, ret: t.ret, output: (), pop: t.pop, to: t.to })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FstTransition {
    pub from: StateId,
    pub input: Sym,
    pub output: OutWord,
    pub to: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FstParts {
    pub alphabet: StructuredAlphabet,
    pub states: Vec<String>,
    pub initial: Vec<StateId>,
    pub finals: Vec<StateId>,
    pub transitions: Vec<FstTransition>,
}

/// A finite-state transducer over the (unstructured) input symbols of a
/// structured alphabet.
#[derive(Clone, Debug)]
pub struct Fst {
    parts: FstParts,
    is_final: Vec<bool>,
    // state -> outgoing transition ids, declaration order
    out_index: Vec<Vec<u32>>,
}

impl PartialEq for Fst {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for Fst {}

impl Fst {
    pub fn new(parts: FstParts) -> Self {
        let n = parts.states.len();
        let mut is_final = vec![false; n];
        for f in &parts.finals {
            if f.index() < n {
                is_final[f.index()] = true;
            }
        }
        let mut out_index = vec![Vec::new(); n];
        for (i, t) in parts.transitions.iter().enumerate() {
            if t.from.index() < n && t.to.index() < n && parts.alphabet.contains(t.input) {
                out_index[t.from.index()].push(i as u32);
            }
        }
        Fst {
            parts,
            is_final,
            out_index,
        }
    }

    pub fn parts(&self) -> &FstParts {
        &self.parts
    }

    pub fn into_parts(self) -> FstParts {
        self.parts
    }

    pub fn alphabet(&self) -> &StructuredAlphabet {
        &self.parts.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.parts.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.parts.states[q.index()]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.parts.initial
    }

    pub fn finals(&self) -> &[StateId] {
        &self.parts.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.is_final.get(q.index()).copied().unwrap_or(false)
    }

    pub fn transitions(&self) -> &[FstTransition] {
        &self.parts.transitions
    }

    /// Outgoing transitions of `q`, in declaration order.
    pub fn transitions_from(&self, q: StateId) -> impl Iterator<Item = &FstTransition> + '_ {
        let slot = self.out_index.get(q.index()).map(|v| &v[..]).unwrap_or(&[]);
        slot.iter().map(move |&i| &self.parts.transitions[i as usize])
    }

    pub fn max_output_len(&self) -> usize {
        self.parts.transitions.iter().map(|t| t.output.len()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let p = &self.parts;
        let mut report = ValidationReport::default();
        report.check_names("state", &p.states);
        let n = p.states.len();
        report.check_state_sets(n, &p.initial, &p.finals);
        for (i, t) in p.transitions.iter().enumerate() {
            let at = TransitionRef::Fst(i);
            report.check_state(at, t.from, n);
            report.check_state(at, t.to, n);
            if !p.alphabet.contains(t.input) {
                report.push(Violation::UndeclaredSymbol { at, symbol: t.input });
            }
            report.check_output(at, &t.output, &p.alphabet);
        }
        report
    }
}

/// Any machine a file can describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Vpa(Vpa),
    Vpt(Vpt),
    Fst(Fst),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Vpa(_) => "vpa",
            Machine::Vpt(_) => "vpt",
            Machine::Fst(_) => "fst",
        }
    }

    pub fn alphabet(&self) -> &StructuredAlphabet {
        match self {
            Machine::Vpa(m) => m.alphabet(),
            Machine::Vpt(m) => m.alphabet(),
            Machine::Fst(m) => m.alphabet(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            Machine::Vpa(m) => m.validate(),
            Machine::Vpt(m) => m.validate(),
            Machine::Fst(m) => m.validate(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionRef {
    Call(usize),
    Return(usize),
    Fst(usize),
}

impl fmt::Display for TransitionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionRef::Call(i) => write!(f, "call transition #{i}"),
            TransitionRef::Return(i) => write!(f, "return transition #{i}"),
            TransitionRef::Fst(i) => write!(f, "transition #{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName { what: &'static str, name: String },
    InitialNotState(StateId),
    FinalNotState(StateId),
    UndeclaredState { at: TransitionRef, state: StateId },
    UndeclaredSymbol { at: TransitionRef, symbol: Sym },
    UndeclaredStackSymbol { at: TransitionRef, stack: StackSym },
    UndeclaredOutput { at: TransitionRef, letter: char },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { what, name } => write!(f, "{what} `{name}` declared twice"),
            Violation::InitialNotState(q) => write!(f, "initial state #{} is not a state", q.0),
            Violation::FinalNotState(q) => write!(f, "final state #{} is not a state", q.0),
            Violation::UndeclaredState { at, state } => {
                write!(f, "{at} uses undeclared state #{}", state.0)
            }
            Violation::UndeclaredSymbol { at, symbol } => {
                write!(f, "{at} reads undeclared symbol {symbol:?}")
            }
            Violation::UndeclaredStackSymbol { at, stack } => {
                write!(f, "{at} uses undeclared stack symbol #{}", stack.0)
            }
            Violation::UndeclaredOutput { at, letter } => {
                write!(f, "{at} outputs undeclared letter `{letter}`")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    fn check_names(&mut self, what: &'static str, names: &[String]) {
        let mut seen = std::collections::HashSet::new();
        for name in names {
            if !seen.insert(name) {
                self.push(Violation::DuplicateName { what, name: name.clone() });
            }
        }
    }

    fn check_state_sets(&mut self, n: usize, initial: &[StateId], finals: &[StateId]) {
        for &q in initial {
            if q.index() >= n {
                self.push(Violation::InitialNotState(q));
            }
        }
        for &q in finals {
            if q.index() >= n {
                self.push(Violation::FinalNotState(q));
            }
        }
    }

    fn check_state(&mut self, at: TransitionRef, q: StateId, n: usize) {
        if q.index() >= n {
            self.push(Violation::UndeclaredState { at, state: q });
        }
    }

    fn check_output(&mut self, at: TransitionRef, word: &[char], alphabet: &StructuredAlphabet) {
        for &letter in word {
            if !alphabet.has_output(letter) {
                self.push(Violation::UndeclaredOutput { at, letter });
            }
        }
    }
}
