//! Functionality and equivalence of visibly pushdown transducers.
//!
//! A VPT is functional iff its expansion into a finite-state transducer
//! over stacks of height at most `8N⁴` is functional. The expansion is
//! never built: the delay search walks the square of the expansion, whose
//! nodes are a pair of states and one stack of symbol pairs (both runs read
//! the same input, so their stacks always have the same height).

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{InputWord, OutWord, Sym};
use crate::error::CheckError;
use crate::machine::{Fst, FstParts, FstTransition, Label, Pushdown, StackSym, StateId, Vpt};
use crate::semantics::{accepts, transduce};
use crate::square::{delay_search, SquareEdge, SquareOutcome, SquareSystem, LazyFst, Witness};
use crate::summary::{self, NestedSystem, SearchOutcome};

pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// `8N⁴`: stacks higher than this are never needed to witness
/// non-functionality of a VPT with `N` states.
pub fn height_bound(states: usize) -> Result<usize, CheckError> {
    if states == 0 {
        return Err(CheckError::NoStates);
    }
    states
        .checked_mul(states)
        .and_then(|n2| n2.checked_mul(n2))
        .and_then(|n4| n4.checked_mul(8))
        .ok_or(CheckError::BoundOverflow)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// `None` selects the exact bound `8N⁴`.
    pub height_cap: Option<usize>,
    pub node_budget: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { height_cap: None, node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl CheckOptions {
    pub fn with_height_cap(cap: usize) -> Self {
        CheckOptions { height_cap: Some(cap), ..Self::default() }
    }

    fn validate(&self) -> Result<(), CheckError> {
        if self.height_cap == Some(0) {
            return Err(CheckError::ZeroHeightCap);
        }
        if self.node_budget == 0 {
            return Err(CheckError::ZeroBudget);
        }
        Ok(())
    }

    /// The cap to search with and whether it reaches the exact bound.
    pub fn resolve<L: Label>(&self, m: &Pushdown<L>) -> Result<(usize, bool), CheckError> {
        self.validate()?;
        if m.state_count() == 0 {
            return Ok((self.height_cap.unwrap_or(1), true));
        }
        let bound = height_bound(m.state_count())?;
        let cap = self.height_cap.unwrap_or(bound);
        Ok((cap, cap >= bound))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpandedState {
    pub state: StateId,
    pub stack: Vec<StackSym>,
}

/// The finite-state transducer obtained by bounding the stack height of a
/// VPT. It accepts exactly the words of the domain of height at most `cap`
/// and produces the same outputs on them.
#[derive(Clone, Copy, Debug)]
pub struct Expansion<'m> {
    vpt: &'m Vpt,
    cap: usize,
}

pub fn expand_on_demand(vpt: &Vpt, cap: usize) -> Result<Expansion<'_>, CheckError> {
    if cap == 0 {
        return Err(CheckError::ZeroHeightCap);
    }
    Ok(Expansion { vpt, cap })
}

impl<'m> Expansion<'m> {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vpt(&self) -> &'m Vpt {
        self.vpt
    }

    fn step(&self, s: &ExpandedState, a: Sym) -> Vec<(OutWord, ExpandedState)> {
        let m = self.vpt;
        match a {
            Sym::Call(c) if s.stack.len() < self.cap => m
                .calls_from(s.state, c)
                .map(|t| {
                    let mut stack = s.stack.clone();
                    stack.push(t.push);
                    (t.output.clone(), ExpandedState { state: t.to, stack })
                })
                .collect(),
            Sym::Call(_) => Vec::new(),
            Sym::Return(r) => match s.stack.split_last() {
                Some((&top, rest)) => m
                    .returns_from(s.state, r)
                    .filter(|t| t.pop == top)
                    .map(|t| (t.output.clone(), ExpandedState { state: t.to, stack: rest.to_vec() }))
                    .collect(),
                None => Vec::new(),
            },
        }
    }

    /// Outputs of the expansion on `u`.
    pub fn outputs_on(&self, u: &[Sym]) -> BTreeSet<OutWord> {
        let mut me = *self;
        let mut frontier: BTreeSet<(ExpandedState, OutWord)> =
            me.initial_states().into_iter().map(|s| (s, Vec::new())).collect();
        for &a in u {
            let mut next = BTreeSet::new();
            for (s, produced) in &frontier {
                for (out, t) in self.step(s, a) {
                    let mut word = produced.clone();
                    word.extend(out);
                    next.insert((t, word));
                }
            }
            frontier = next;
        }
        frontier.into_iter().filter(|(s, _)| me.is_final(s)).map(|(_, o)| o).collect()
    }

    /// Builds the expansion explicitly, restricted to reachable states, or
    /// `None` if that takes more than `budget` states and transitions.
    pub fn materialize(&self, budget: usize) -> Option<Fst> {
        let mut me = *self;
        let mut ids: HashMap<ExpandedState, u32> = HashMap::new();
        let mut states: Vec<ExpandedState> = Vec::new();
        let mut queue = VecDeque::new();
        let mut initial = Vec::new();
        for s in me.initial_states() {
            if let Entry::Vacant(e) = ids.entry(s.clone()) {
                e.insert(states.len() as u32);
                initial.push(StateId(states.len() as u32));
                states.push(s);
                queue.push_back(states.len() - 1);
            }
        }
        let mut transitions = Vec::new();
        while let Some(i) = queue.pop_front() {
            let s = states[i].clone();
            for (input, output, t) in me.successors(&s) {
                let to = match ids.entry(t) {
                    Entry::Occupied(e) => *e.get(),
                    Entry::Vacant(e) => {
                        let id = states.len() as u32;
                        states.push(e.key().clone());
                        e.insert(id);
                        queue.push_back(id as usize);
                        id
                    }
                };
                transitions.push(FstTransition { from: StateId(i as u32), input, output, to: StateId(to) });
            }
            if states.len() + transitions.len() > budget {
                return None;
            }
        }
        let finals = (0..states.len()).filter(|&i| me.is_final(&states[i])).map(|i| StateId(i as u32)).collect();
        let names = states
            .iter()
            .map(|s| {
                let stack: Vec<&str> = s.stack.iter().map(|&g| self.vpt.stack_name(g)).collect();
                format!("{}[{}]", self.vpt.state_name(s.state), stack.join(","))
            })
            .collect();
        Some(Fst::new(FstParts { alphabet: self.vpt.alphabet().clone(), states: names, initial, finals, transitions }))
    }
}

impl LazyFst for Expansion<'_> {
    type State = ExpandedState;

    fn initial_states(&mut self) -> Vec<ExpandedState> {
        let mut out: Vec<ExpandedState> = Vec::new();
        for &q in self.vpt.initial() {
            let s = ExpandedState { state: q, stack: Vec::new() };
            if q.index() < self.vpt.state_count() && !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    fn is_final(&mut self, s: &ExpandedState) -> bool {
        s.stack.is_empty() && self.vpt.is_final(s.state)
    }

    fn successors(&mut self, s: &ExpandedState) -> Vec<(Sym, OutWord, ExpandedState)> {
        let mut out = Vec::new();
        for a in self.vpt.alphabet().symbols() {
            out.extend(self.step(s, a).into_iter().map(|(o, t)| (a, o, t)));
        }
        out
    }
}

/// The square of an expansion with the paired stack interned in a trie:
/// node `(q1, q2, id)` where `id` names a stack of symbol pairs.
struct ExpansionSquare<'m> {
    vpt: &'m Vpt,
    cap: usize,
    // id -> (parent id, top pair, height); id 0 is the empty stack
    arena: Vec<(u32, StackSym, StackSym, usize)>,
    index: HashMap<(u32, StackSym, StackSym), u32>,
}

impl<'m> ExpansionSquare<'m> {
    fn new(vpt: &'m Vpt, cap: usize) -> Self {
        ExpansionSquare { vpt, cap, arena: vec![(0, StackSym(0), StackSym(0), 0)], index: HashMap::new() }
    }

    fn push(&mut self, parent: u32, g1: StackSym, g2: StackSym) -> u32 {
        let height = self.arena[parent as usize].3 + 1;
        let arena = &mut self.arena;
        *self.index.entry((parent, g1, g2)).or_insert_with(|| {
            arena.push((parent, g1, g2, height));
            (arena.len() - 1) as u32
        })
    }
}

impl SquareSystem for ExpansionSquare<'_> {
    type Node = (StateId, StateId, u32);

    fn initial_nodes(&mut self) -> Vec<Self::Node> {
        let m = self.vpt;
        let mut init: Vec<StateId> = Vec::new();
        for &q in m.initial() {
            if q.index() < m.state_count() && !init.contains(&q) {
                init.push(q);
            }
        }
        init.iter().flat_map(|&p| init.iter().map(move |&q| (p, q, 0))).collect()
    }

    fn is_accepting(&mut self, &(p, q, id): &Self::Node) -> bool {
        id == 0 && self.vpt.is_final(p) && self.vpt.is_final(q)
    }

    fn successors(&mut self, &(p, q, id): &Self::Node) -> Vec<SquareEdge<Self::Node>> {
        let m = self.vpt;
        let mut out = Vec::new();
        if self.arena[id as usize].3 < self.cap {
            for c in 0..m.alphabet().call_count() as u32 {
                for t1 in m.calls_from(p, c) {
                    for t2 in m.calls_from(q, c) {
                        let child = self.push(id, t1.push, t2.push);
                        out.push(SquareEdge {
                            input: Sym::Call(c),
                            out1: t1.output.clone(),
                            out2: t2.output.clone(),
                            target: (t1.to, t2.to, child),
                        });
                    }
                }
            }
        }
        if id != 0 {
            let (parent, g1, g2, _) = self.arena[id as usize];
            for r in 0..m.alphabet().return_count() as u32 {
                for t1 in m.returns_from(p, r).filter(|t| t.pop == g1) {
                    for t2 in m.returns_from(q, r).filter(|t| t.pop == g2) {
                        out.push(SquareEdge {
                            input: Sym::Return(r),
                            out1: t1.output.clone(),
                            out2: t2.output.clone(),
                            target: (t1.to, t2.to, parent),
                        });
                    }
                }
            }
        }
        out
    }
}

/// The inputs a "functional" verdict covers when it is not exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    HeightCap(usize),
    InputLength(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    /// No two distinct outputs on any input within `scope`; `exact` when the
    /// scope reaches `8N⁴`, so the verdict covers all inputs.
    Functional { exact: bool, scope: Scope },
    NonFunctional(Witness),
    /// The node budget ran out. `functional_up_to` is the largest cap for
    /// which a complete search found no witness.
    Inconclusive { explored: usize, functional_up_to: Option<usize> },
}

fn verify(vpt: &Vpt, w: Witness) -> Result<Witness, CheckError> {
    let outs = transduce(vpt, &w.input);
    if w.out1 != w.out2 && outs.contains(&w.out1) && outs.contains(&w.out2) {
        Ok(w)
    } else {
        Err(CheckError::UnverifiedWitness(vpt.alphabet().display_word(&w.input).to_string()))
    }
}

/// One delay search over the expansion at a fixed cap.
pub fn check_at_cap(vpt: &Vpt, cap: usize, budget: usize) -> Result<SquareOutcome, CheckError> {
    if cap == 0 {
        return Err(CheckError::ZeroHeightCap);
    }
    if budget == 0 {
        return Err(CheckError::ZeroBudget);
    }
    Ok(match delay_search(&mut ExpansionSquare::new(vpt, cap), budget) {
        SquareOutcome::NonFunctional(w) => SquareOutcome::NonFunctional(verify(vpt, w)?),
        other => other,
    })
}

/// Decides functionality of `vpt`. Caps are tried in doubling order up to
/// the requested one, so short witnesses are found without exploring tall
/// stacks; a witness at a smaller cap is a witness at every larger cap.
pub fn check_functional(vpt: &Vpt, opts: &CheckOptions) -> Result<CheckOutcome, CheckError> {
    let (cap, exact) = opts.resolve(vpt)?;
    let mut caps = Vec::new();
    let mut c = 1usize;
    while c < cap {
        caps.push(c);
        c = c.saturating_mul(2);
    }
    caps.push(cap);
    let mut up_to = None;
    for c in caps {
        match check_at_cap(vpt, c, opts.node_budget)? {
            SquareOutcome::Functional => up_to = Some(c),
            SquareOutcome::NonFunctional(w) => return Ok(CheckOutcome::NonFunctional(w)),
            SquareOutcome::Inconclusive { explored } => {
                return Ok(CheckOutcome::Inconclusive { explored, functional_up_to: up_to })
            }
        }
    }
    Ok(CheckOutcome::Functional { exact, scope: Scope::HeightCap(cap) })
}

/// A state of the determinized automaton: summary pairs `(entry, current)`
/// relative to the innermost pending call, sorted.
type Summary = Vec<(StateId, StateId)>;

fn det_initial<L: Label>(m: &Pushdown<L>) -> Summary {
    let mut s: Summary = m.initial().iter().filter(|q| q.index() < m.state_count()).map(|&q| (q, q)).collect();
    s.sort();
    s.dedup();
    s
}

fn det_call<L: Label>(m: &Pushdown<L>, s: &Summary, c: u32) -> Summary {
    let mut out: Summary = s.iter().flat_map(|&(_, p)| m.calls_from(p, c).map(|t| (t.to, t.to))).collect();
    out.sort();
    out.dedup();
    out
}

fn det_return<L: Label>(m: &Pushdown<L>, outer: &Summary, c: u32, inner: &Summary, r: u32) -> Summary {
    let mut out = Summary::new();
    for &(q, p) in outer {
        for t1 in m.calls_from(p, c) {
            for &(p1, p2) in inner.iter().filter(|(p1, _)| *p1 == t1.to) {
                debug_assert_eq!(p1, t1.to);
                for t2 in m.returns_from(p2, r).filter(|t| t.pop == t1.push) {
                    out.push((q, t2.to));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn det_accepts<L: Label>(m: &Pushdown<L>, s: &Summary) -> bool {
    s.iter().any(|&(_, f)| m.is_final(f))
}

/// Product of two determinized machines over a common alphabet; accepting
/// states are those where exactly one side accepts.
struct DomainDifference<'a, L1, L2> {
    a: &'a Pushdown<L1>,
    b: &'a Pushdown<L2>,
}

impl<L1: Label, L2: Label> NestedSystem for DomainDifference<'_, L1, L2> {
    type State = (Summary, Summary);
    type Frame = (Summary, Summary, u32);

    fn initial_states(&mut self) -> Vec<Self::State> {
        vec![(det_initial(self.a), det_initial(self.b))]
    }

    fn is_accepting(&mut self, (s1, s2): &Self::State) -> bool {
        det_accepts(self.a, s1) != det_accepts(self.b, s2)
    }

    fn call_successors(&mut self, (s1, s2): &Self::State) -> Vec<(u32, Self::Frame, Self::State)> {
        let mut out = Vec::new();
        for c in 0..self.a.alphabet().call_count() as u32 {
            let (t1, t2) = (det_call(self.a, s1, c), det_call(self.b, s2, c));
            if !t1.is_empty() || !t2.is_empty() {
                out.push((c, (s1.clone(), s2.clone(), c), (t1, t2)));
            }
        }
        out
    }

    fn return_successors(&mut self, (s1, s2): &Self::State, (o1, o2, c): &Self::Frame) -> Vec<(u32, Self::State)> {
        let mut out = Vec::new();
        for r in 0..self.a.alphabet().return_count() as u32 {
            let (t1, t2) = (det_return(self.a, o1, *c, s1, r), det_return(self.b, o2, *c, s2, r));
            if !t1.is_empty() || !t2.is_empty() {
                out.push((r, (t1, t2)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainComparison {
    Equal,
    /// A word accepted by exactly one machine, over the merged alphabet.
    Differ(InputWord),
    Inconclusive { explored: usize },
}

/// Compares the domains of two machines by determinization and emptiness
/// of the symmetric difference. Words are over `a`'s alphabet merged with
/// `b`'s (symbols of `a` keep their ids).
pub fn domain_equiv<L1: Label, L2: Label>(
    a: &Pushdown<L1>,
    b: &Pushdown<L2>,
    opts: &CheckOptions,
) -> Result<DomainComparison, CheckError> {
    opts.validate()?;
    let alphabet = a.alphabet().merge(b.alphabet())?;
    let a = a.over_alphabet(&alphabet)?;
    let b = b.over_alphabet(&alphabet)?;
    let mut sys = DomainDifference { a: &a, b: &b };
    Ok(match summary::find_accepted(&mut sys, opts.node_budget) {
        SearchOutcome::Found(u) => {
            if accepts(&a, &u) == accepts(&b, &u) {
                return Err(CheckError::UnverifiedWitness(alphabet.display_word(&u).to_string()));
            }
            DomainComparison::Differ(u)
        }
        SearchOutcome::Empty => DomainComparison::Equal,
        SearchOutcome::BudgetExhausted { explored } => DomainComparison::Inconclusive { explored },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivWitness {
    Domain(InputWord),
    Output { input: InputWord, out1: OutWord, out2: OutWord },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivOutcome {
    /// `exact` when every functionality check involved reached `8N⁴`.
    Equivalent { exact: bool },
    NotEquivalent(EquivWitness),
    Inconclusive { explored: usize },
}

/// Decides equivalence of two functional VPTs: equal domains, and a
/// functional union. Words in witnesses are over the merged alphabet.
pub fn check_equiv_functional(t1: &Vpt, t2: &Vpt, opts: &CheckOptions) -> Result<EquivOutcome, CheckError> {
    let mut exact = true;
    for (which, t) in [(1, t1), (2, t2)] {
        match check_functional(t, opts)? {
            CheckOutcome::Functional { exact: e, .. } => exact &= e,
            CheckOutcome::NonFunctional(_) => return Err(CheckError::NonFunctionalInput { which }),
            CheckOutcome::Inconclusive { explored, .. } => return Ok(EquivOutcome::Inconclusive { explored }),
        }
    }
    match domain_equiv(t1, t2, opts)? {
        DomainComparison::Equal => {}
        DomainComparison::Differ(u) => return Ok(EquivOutcome::NotEquivalent(EquivWitness::Domain(u))),
        DomainComparison::Inconclusive { explored } => return Ok(EquivOutcome::Inconclusive { explored }),
    }
    let union = t1.disjoint_union(t2)?;
    match check_functional(&union, opts)? {
        CheckOutcome::Functional { exact: e, .. } => Ok(EquivOutcome::Equivalent { exact: exact && e }),
        CheckOutcome::Inconclusive { explored, .. } => Ok(EquivOutcome::Inconclusive { explored }),
        CheckOutcome::NonFunctional(w) => {
            let a = t1.over_alphabet(union.alphabet())?;
            let b = t2.over_alphabet(union.alphabet())?;
            let (o1, o2) = (transduce(&a, &w.input), transduce(&b, &w.input));
            if o1.len() > 1 {
                return Err(CheckError::NonFunctionalInput { which: 1 });
            }
            if o2.len() > 1 {
                return Err(CheckError::NonFunctionalInput { which: 2 });
            }
            match (o1.into_iter().next(), o2.into_iter().next()) {
                (Some(out1), Some(out2)) if out1 != out2 => {
                    Ok(EquivOutcome::NotEquivalent(EquivWitness::Output { input: w.input, out1, out2 }))
                }
                _ => Err(CheckError::UnverifiedWitness(union.alphabet().display_word(&w.input).to_string())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_vpt;
    use crate::nested::height;
    use crate::testing::fig1;

    fn w(m: &Vpt, s: &str) -> InputWord {
        m.alphabet().parse_word(s).unwrap()
    }

    fn family(m: &Vpt, n: usize) -> InputWord {
        let mut s = "c1 ".to_string();
        s += &"c2 ".repeat(n);
        s += "c3 r3 ";
        s += &"r2 ".repeat(n);
        s += "r1";
        w(m, &s)
    }

    #[test]
    fn bounds() {
        assert_eq!(height_bound(1), Ok(8));
        assert_eq!(height_bound(2), Ok(128));
        assert_eq!(height_bound(3), Ok(648));
        assert_eq!(height_bound(0), Err(CheckError::NoStates));
        assert_eq!(height_bound(usize::MAX / 2), Err(CheckError::BoundOverflow));
    }

    #[test]
    fn expansion_of_fig1() {
        let m = fig1();
        let e = expand_on_demand(&m, 2).unwrap();
        assert_eq!(e.outputs_on(&family(&m, 0)), [vec!['d', 'f', 'c', 'a', 'b', 'g', 'h']].into());
        assert!(e.outputs_on(&family(&m, 1)).is_empty());
        let e = expand_on_demand(&m, 5).unwrap();
        for n in 0..6 {
            let u = family(&m, n);
            let expected = if height(&u).unwrap() <= 5 { transduce(&m, &u) } else { BTreeSet::new() };
            assert_eq!(e.outputs_on(&u), expected);
        }
        assert!(expand_on_demand(&m, 0).is_err());
    }

    #[test]
    fn materialized_expansion_agrees() {
        let m = fig1();
        let e = expand_on_demand(&m, 4).unwrap();
        let f = e.materialize(10_000).unwrap();
        assert!(f.validate().is_clean());
        for n in 0..4 {
            let u = family(&m, n);
            assert_eq!(crate::semantics::fst_transduce(&f, &u), e.outputs_on(&u));
        }
        assert!(e.materialize(3).is_none());
    }

    #[test]
    fn fig1_is_functional_up_to_cap() {
        let m = fig1();
        let v = check_functional(&m, &CheckOptions::with_height_cap(12)).unwrap();
        assert_eq!(v, CheckOutcome::Functional { exact: false, scope: Scope::HeightCap(12) });
    }

    #[test]
    fn mutated_fig1_is_not_functional() {
        let m = parse_vpt(include_str!("../../../fixtures/fig1_mutated.vpt")).unwrap();
        let CheckOutcome::NonFunctional(wit) = check_functional(&m, &CheckOptions::default()).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(wit.input, family(&m, 0));
        let outs: BTreeSet<String> = [&wit.out1, &wit.out2].iter().map(|o| o.iter().collect()).collect();
        assert_eq!(outs, ["dfcabgh".to_string(), "dfcabgx".to_string()].into());
    }

    #[test]
    fn deterministic_machine_is_exactly_functional() {
        let m = parse_vpt(
            "vpt\nalphabet calls c\nalphabet returns r\nalphabet outputs x y\nstack g\nstates q\ninitial q\nfinal q\n\
             call q c / x push g -> q\nreturn q r / y pop g -> q\n",
        )
        .unwrap();
        assert_eq!(check_functional(&m, &CheckOptions::default()).unwrap(), CheckOutcome::Functional { exact: true, scope: Scope::HeightCap(8) });
    }

    #[test]
    fn options_are_validated() {
        let m = fig1();
        assert_eq!(check_functional(&m, &CheckOptions::with_height_cap(0)), Err(CheckError::ZeroHeightCap));
        let zero = CheckOptions { height_cap: Some(3), node_budget: 0 };
        assert_eq!(check_functional(&m, &zero), Err(CheckError::ZeroBudget));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let m = fig1();
        let opts = CheckOptions { height_cap: Some(64), node_budget: 200 };
        assert!(matches!(check_functional(&m, &opts).unwrap(), CheckOutcome::Inconclusive { .. }));
    }

    #[test]
    fn domain_comparisons() {
        let m = fig1();
        let n0 = parse_vpt(include_str!("../../../fixtures/fig1_n0.vpt")).unwrap();
        let opts = CheckOptions::default();
        assert_eq!(domain_equiv(&m, &m, &opts).unwrap(), DomainComparison::Equal);
        assert_eq!(domain_equiv(&m, &n0, &opts).unwrap(), DomainComparison::Differ(family(&m, 1)));
        let empty = parse_vpt("vpt\nalphabet calls c\nalphabet returns r\nstack g\nstates q\ninitial q\n").unwrap();
        assert_eq!(domain_equiv(&empty, &empty, &opts).unwrap(), DomainComparison::Equal);
    }

    #[test]
    fn equivalence_of_the_two_branches() {
        let upper = parse_vpt(include_str!("../../../fixtures/fig1_upper.vpt")).unwrap();
        let lower = parse_vpt(include_str!("../../../fixtures/fig1_lower.vpt")).unwrap();
        let opts = CheckOptions::with_height_cap(16);
        assert_eq!(check_equiv_functional(&upper, &lower, &opts).unwrap(), EquivOutcome::Equivalent { exact: false });
        assert_eq!(check_equiv_functional(&upper, &upper, &opts).unwrap(), EquivOutcome::Equivalent { exact: false });
    }

    #[test]
    fn equivalence_witnesses() {
        let cr = parse_vpt(
            "vpt\nalphabet calls c\nalphabet returns r\nalphabet outputs x\nstack g\nstates q f\ninitial q\nfinal f\n\
             call q c / x push g -> q\nreturn q r / eps pop g -> f\n",
        )
        .unwrap();
        let empty = parse_vpt("vpt\nalphabet calls c\nalphabet returns r\nstack g\nstates q\ninitial q\n").unwrap();
        let opts = CheckOptions::default();
        assert_eq!(
            check_equiv_functional(&cr, &empty, &opts).unwrap(),
            EquivOutcome::NotEquivalent(EquivWitness::Domain(w(&cr, "c r")))
        );
        let other = parse_vpt(&include_str!("../../../fixtures/fig1.vpt").replace("/ gh", "/ hg")).unwrap();
        let m = fig1();
        let EquivOutcome::NotEquivalent(EquivWitness::Output { input, out1, out2 }) =
            check_equiv_functional(&m, &other, &CheckOptions::with_height_cap(4)).unwrap()
        else {
            panic!("expected an output witness");
        };
        assert_eq!(transduce(&m, &input), [out1].into());
        assert_eq!(transduce(&other, &input), [out2].into());

        let mutated = parse_vpt(include_str!("../../../fixtures/fig1_mutated.vpt")).unwrap();
        assert_eq!(
            check_equiv_functional(&mutated, &m, &opts),
            Err(CheckError::NonFunctionalInput { which: 1 })
        );
    }
}
