//! Square products and the delay search.
//!
//! A square system pairs two runs of a transducer on the same input. The
//! search explores it in three phases: forward reachability, backward
//! co-accessibility (which also yields a shortest completion from every
//! node), then a breadth-first search over (node, delay) keys restricted to
//! co-accessible nodes. The transducer is non-functional iff one of:
//!
//! - a mismatched delay is produced,
//! - an accepting node is reached with a nonempty delay,
//! - a node is reached with two distinct delays.
//!
//! In the last case one of the two prefixes, completed by the same suffix,
//! yields two distinct outputs. Without it every node carries one delay, so
//! the search is finite.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::alphabet::{InputWord, OutWord, Sym};

/// A finite-state transducer given by its successor function.
pub trait LazyFst {
    type State: Clone + Eq + Hash;

    fn initial_states(&mut self) -> Vec<Self::State>;
    fn is_final(&mut self, state: &Self::State) -> bool;
    /// `(input, output, target)` in a deterministic order.
    fn successors(&mut self, state: &Self::State) -> Vec<(Sym, OutWord, Self::State)>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareEdge<N> {
    pub input: Sym,
    pub out1: OutWord,
    pub out2: OutWord,
    pub target: N,
}

/// Pairs of runs on a common input, explored on demand.
pub trait SquareSystem {
    type Node: Clone + Eq + Hash;

    fn initial_nodes(&mut self) -> Vec<Self::Node>;
    fn is_accepting(&mut self, node: &Self::Node) -> bool;
    fn successors(&mut self, node: &Self::Node) -> Vec<SquareEdge<Self::Node>>;
}

/// The square of a lazy transducer: nodes are pairs of its states.
pub struct LazySquare<L>(pub L);

impl<L: LazyFst> SquareSystem for LazySquare<L> {
    type Node = (L::State, L::State);

    fn initial_nodes(&mut self) -> Vec<Self::Node> {
        let init = self.0.initial_states();
        let mut out = Vec::with_capacity(init.len() * init.len());
        for p in &init {
            for q in &init {
                out.push((p.clone(), q.clone()));
            }
        }
        out
    }

    fn is_accepting(&mut self, (p, q): &Self::Node) -> bool {
        self.0.is_final(p) && self.0.is_final(q)
    }

    fn successors(&mut self, (p, q): &Self::Node) -> Vec<SquareEdge<Self::Node>> {
        let left = self.0.successors(p);
        let right = self.0.successors(q);
        let mut out = Vec::new();
        for (a, o1, p2) in &left {
            for (b, o2, q2) in &right {
                if a == b {
                    out.push(SquareEdge {
                        input: *a,
                        out1: o1.clone(),
                        out2: o2.clone(),
                        target: (p2.clone(), q2.clone()),
                    });
                }
            }
        }
        out
    }
}

/// Pending output of two synchronized runs after removing their longest
/// common prefix. Unless mismatched, one side is empty; a mismatched pair
/// keeps only the first differing letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DelayPair {
    left: OutWord,
    right: OutWord,
    mismatched: bool,
}

impl DelayPair {
    pub fn new() -> Self {
        DelayPair::default()
    }

    pub fn left(&self) -> &[char] {
        &self.left
    }

    pub fn right(&self) -> &[char] {
        &self.right
    }

    pub fn is_mismatched(&self) -> bool {
        self.mismatched
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// The delay after the runs produce `o1` and `o2` respectively.
    pub fn extend(&self, o1: &[char], o2: &[char]) -> DelayPair {
        if self.mismatched {
            return self.clone();
        }
        let l = self.left.iter().chain(o1);
        let r = self.right.iter().chain(o2);
        let common = l.clone().zip(r.clone()).take_while(|(a, b)| a == b).count();
        let left: OutWord = l.skip(common).copied().collect();
        let right: OutWord = r.skip(common).copied().collect();
        if !left.is_empty() && !right.is_empty() {
            DelayPair { left: vec![left[0]], right: vec![right[0]], mismatched: true }
        } else {
            DelayPair { left, right, mismatched: false }
        }
    }
}

/// An input with two distinct outputs of accepting runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub input: InputWord,
    pub out1: OutWord,
    pub out2: OutWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareOutcome {
    Functional,
    NonFunctional(Witness),
    Inconclusive { explored: usize },
}

struct Edge {
    input: Sym,
    out1: OutWord,
    out2: OutWord,
    to: u32,
}

struct PairGraph<N> {
    nodes: Vec<N>,
    edges: Vec<Vec<Edge>>,
    initial: Vec<u32>,
    accepting: Vec<bool>,
}

fn explore<S: SquareSystem>(sys: &mut S, budget: usize) -> Result<PairGraph<S::Node>, usize> {
    let mut ids: HashMap<S::Node, u32> = HashMap::new();
    let mut g = PairGraph { nodes: Vec::new(), edges: Vec::new(), initial: Vec::new(), accepting: Vec::new() };
    let mut queue = VecDeque::new();
    let mut edge_count = 0usize;
    let mut intern = |n: S::Node, g: &mut PairGraph<S::Node>, queue: &mut VecDeque<u32>| match ids.entry(n) {
        Entry::Occupied(e) => *e.get(),
        Entry::Vacant(e) => {
            let id = g.nodes.len() as u32;
            g.nodes.push(e.key().clone());
            g.edges.push(Vec::new());
            e.insert(id);
            queue.push_back(id);
            id
        }
    };
    for n in sys.initial_nodes() {
        let id = intern(n, &mut g, &mut queue);
        if !g.initial.contains(&id) {
            g.initial.push(id);
        }
    }
    while let Some(id) = queue.pop_front() {
        let node = g.nodes[id as usize].clone();
        let accepting = sys.is_accepting(&node);
        g.accepting.resize(g.nodes.len(), false);
        g.accepting[id as usize] = accepting;
        let mut out = Vec::new();
        for e in sys.successors(&node) {
            let to = intern(e.target, &mut g, &mut queue);
            out.push(Edge { input: e.input, out1: e.out1, out2: e.out2, to });
        }
        edge_count += out.len();
        g.edges[id as usize] = out;
        let explored = g.nodes.len() + edge_count;
        if explored > budget {
            return Err(explored);
        }
    }
    g.accepting.resize(g.nodes.len(), false);
    Ok(g)
}

/// Distance to an accepting node and the first edge of a shortest path
/// there; `u32::MAX` marks nodes that are not co-accessible.
fn co_accessible<N>(g: &PairGraph<N>) -> (Vec<u32>, Vec<u32>) {
    let n = g.nodes.len();
    let mut rev: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (from, edges) in g.edges.iter().enumerate() {
        for (i, e) in edges.iter().enumerate() {
            rev[e.to as usize].push((from as u32, i as u32));
        }
    }
    let mut dist = vec![u32::MAX; n];
    let mut next = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for (id, &acc) in g.accepting.iter().enumerate() {
        if acc {
            dist[id] = 0;
            queue.push_back(id as u32);
        }
    }
    while let Some(id) = queue.pop_front() {
        for &(from, edge) in &rev[id as usize] {
            if dist[from as usize] == u32::MAX {
                dist[from as usize] = dist[id as usize] + 1;
                next[from as usize] = edge;
                queue.push_back(from);
            }
        }
    }
    (dist, next)
}

struct Key {
    node: u32,
    delay: DelayPair,
    parent: Option<(u32, u32)>,
    depth: u32,
}

struct Search<'g, N> {
    g: &'g PairGraph<N>,
    dist: Vec<u32>,
    next: Vec<u32>,
    keys: Vec<Key>,
}

impl<N> Search<'_, N> {
    /// Edges `(node, edge index)` from an initial node to `key`.
    fn path(&self, key: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut k = key;
        while let Some((parent, edge)) = self.keys[k as usize].parent {
            out.push((self.keys[parent as usize].node, edge));
            k = parent;
        }
        out.reverse();
        out
    }

    fn suffix(&self, mut node: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        while self.dist[node as usize] > 0 {
            let edge = self.next[node as usize];
            out.push((node, edge));
            node = self.g.edges[node as usize][edge as usize].to;
        }
        out
    }

    fn witness(&self, steps: impl IntoIterator<Item = (u32, u32)>) -> Witness {
        let mut w = Witness { input: Vec::new(), out1: Vec::new(), out2: Vec::new() };
        for (node, edge) in steps {
            let e = &self.g.edges[node as usize][edge as usize];
            w.input.push(e.input);
            w.out1.extend(&e.out1);
            w.out2.extend(&e.out2);
        }
        w
    }

    /// The prefix to `key` followed by `(from, edge)` and a shortest
    /// completion.
    fn completed(&self, key: u32, step: Option<(u32, u32)>, end: u32) -> Witness {
        let mut steps = self.path(key);
        steps.extend(step);
        steps.extend(self.suffix(end));
        self.witness(steps)
    }
}

/// Decides whether the paired runs can disagree, exploring at most `budget`
/// units (nodes, edges, search keys and stored delay letters). A witness
/// found before the budget runs out is returned even if it may not be the
/// shortest one.
pub fn delay_search<S: SquareSystem>(sys: &mut S, budget: usize) -> SquareOutcome {
    let g = match explore(sys, budget) {
        Ok(g) => g,
        Err(explored) => return SquareOutcome::Inconclusive { explored },
    };
    let (dist, next) = co_accessible(&g);
    let mut s = Search { g: &g, dist, next, keys: Vec::new() };
    let mut seen: HashMap<(u32, DelayPair), u32> = HashMap::new();
    let mut first_delay: HashMap<u32, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut explored = g.nodes.len() + g.edges.iter().map(Vec::len).sum::<usize>();
    let mut best: Option<Witness> = None;
    let offer = |best: &mut Option<Witness>, w: Witness| {
        debug_assert!(w.out1 != w.out2);
        if best.as_ref().is_none_or(|b| w.input.len() < b.input.len()) {
            *best = Some(w);
        }
    };

    for &n in &g.initial {
        if s.dist[n as usize] == u32::MAX {
            continue;
        }
        let id = s.keys.len() as u32;
        s.keys.push(Key { node: n, delay: DelayPair::new(), parent: None, depth: 0 });
        seen.insert((n, DelayPair::new()), id);
        first_delay.insert(n, id);
        queue.push_back(id);
    }

    while let Some(k) = queue.pop_front() {
        let (node, depth) = (s.keys[k as usize].node, s.keys[k as usize].depth);
        if best.as_ref().is_some_and(|b| b.input.len() <= depth as usize + 1) {
            break;
        }
        for (i, e) in g.edges[node as usize].iter().enumerate() {
            let to = e.to;
            if s.dist[to as usize] == u32::MAX {
                continue;
            }
            let delay = s.keys[k as usize].delay.extend(&e.out1, &e.out2);
            let step = (node, i as u32);
            if delay.is_mismatched() {
                offer(&mut best, s.completed(k, Some(step), to));
                continue;
            }
            if g.accepting[to as usize] && !delay.is_empty() {
                offer(&mut best, s.completed(k, Some(step), to));
                continue;
            }
            if seen.contains_key(&(to, delay.clone())) {
                continue;
            }
            explored += 1 + delay.len();
            if explored > budget {
                return match best {
                    Some(w) => SquareOutcome::NonFunctional(w),
                    None => SquareOutcome::Inconclusive { explored },
                };
            }
            let id = s.keys.len() as u32;
            match first_delay.entry(to) {
                Entry::Vacant(e) => {
                    e.insert(id);
                }
                Entry::Occupied(e) => {
                    // same node, different delay: one of the two prefixes
                    // disagrees once completed by the same suffix
                    let earlier = *e.get();
                    let a = s.completed(earlier, None, to);
                    let b = s.completed(k, Some(step), to);
                    let mut pair = [a, b];
                    pair.sort_by_key(|w| w.input.len());
                    let w = pair.into_iter().find(|w| w.out1 != w.out2).expect("delays differ");
                    offer(&mut best, w);
                }
            }
            s.keys.push(Key { node: to, delay: delay.clone(), parent: Some((k, i as u32)), depth: depth + 1 });
            seen.insert((to, delay), id);
            queue.push_back(id);
        }
    }
    match best {
        Some(w) => SquareOutcome::NonFunctional(w),
        None => SquareOutcome::Functional,
    }
}

/// A square product trimmed to nodes that are both reachable and
/// co-accessible. Indices in `initial` and `edges` refer to `nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square<N> {
    pub nodes: Vec<N>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    pub edges: Vec<(usize, SquareEdge<usize>)>,
}

/// Builds the trimmed square, or `None` if exploring it exceeds `budget`.
pub fn trimmed_square<S: SquareSystem>(sys: &mut S, budget: usize) -> Option<Square<S::Node>> {
    let g = explore(sys, budget).ok()?;
    let (dist, _) = co_accessible(&g);
    let mut index = vec![usize::MAX; g.nodes.len()];
    let mut sq = Square { nodes: Vec::new(), initial: Vec::new(), accepting: Vec::new(), edges: Vec::new() };
    for (id, node) in g.nodes.iter().enumerate() {
        if dist[id] != u32::MAX {
            index[id] = sq.nodes.len();
            sq.nodes.push(node.clone());
            sq.accepting.push(g.accepting[id]);
        }
    }
    sq.initial = g.initial.iter().filter_map(|&n| Some(index[n as usize]).filter(|&i| i != usize::MAX)).collect();
    for (from, edges) in g.edges.iter().enumerate() {
        for e in edges {
            let (a, b) = (index[from], index[e.to as usize]);
            if a != usize::MAX && b != usize::MAX {
                sq.edges.push((a, SquareEdge { input: e.input, out1: e.out1.clone(), out2: e.out2.clone(), target: b }));
            }
        }
    }
    Some(sq)
}
