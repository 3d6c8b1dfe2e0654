//! Functionality of finite-state transducers.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{OutWord, Sym};
use crate::error::AlphabetError;
use crate::machine::{Fst, FstTransition, StateId};
use crate::square::{delay_search, trimmed_square, LazyFst, LazySquare, Square, SquareOutcome, Witness};

impl LazyFst for &Fst {
    type State = StateId;

    fn initial_states(&mut self) -> Vec<StateId> {
        let mut out: Vec<StateId> = Vec::new();
        for &q in self.initial() {
            if q.index() < self.state_count() && !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    fn is_final(&mut self, state: &StateId) -> bool {
        Fst::is_final(self, *state)
    }

    fn successors(&mut self, state: &StateId) -> Vec<(Sym, OutWord, StateId)> {
        self.transitions_from(*state).map(|t| (t.input, t.output.clone(), t.to)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalityVerdict {
    pub functional: bool,
    /// False when a "functional" answer only covers bounded inputs.
    pub exact: bool,
    pub witness: Option<Witness>,
}

impl FunctionalityVerdict {
    fn from_witness(witness: Option<Witness>, exact: bool) -> Self {
        FunctionalityVerdict { functional: witness.is_none(), exact: exact || witness.is_some(), witness }
    }
}

/// The square of `f` trimmed to reachable, co-accessible state pairs.
pub fn square(f: &Fst) -> Square<(StateId, StateId)> {
    trimmed_square(&mut LazySquare(f), usize::MAX).expect("unbounded")
}

/// Decides functionality by delay uniqueness on the trimmed square. The
/// witness is a shortest non-functional input.
pub fn fst_functional(f: &Fst) -> FunctionalityVerdict {
    match delay_search(&mut LazySquare(f), usize::MAX) {
        SquareOutcome::Functional => FunctionalityVerdict::from_witness(None, true),
        SquareOutcome::NonFunctional(w) => FunctionalityVerdict::from_witness(Some(w), true),
        SquareOutcome::Inconclusive { .. } => unreachable!("unbounded search"),
    }
}

/// Appends a fresh input `marker` that moves every final state, emitting
/// `letter`, into a single new final state. The result is functional iff
/// `f` is, and two outputs on an accepted input now differ at some position
/// present in both.
pub fn with_end_marker(f: &Fst, marker: &str, letter: char) -> Result<Fst, AlphabetError> {
    let mut parts = f.parts().clone();
    let sym = parts.alphabet.add_call(marker.to_string())?;
    parts.alphabet.add_output(letter)?;
    let end = StateId(parts.states.len() as u32);
    let mut name = "end".to_string();
    while parts.states.contains(&name) {
        name.push('\'');
    }
    parts.states.push(name);
    for &q in f.finals() {
        parts.transitions.push(FstTransition { from: q, input: sym, output: vec![letter], to: end });
    }
    parts.finals = vec![end];
    Ok(Fst::new(parts))
}

fn fresh_marker(f: &Fst) -> (String, char) {
    let mut marker = "$end".to_string();
    while f.alphabet().lookup(&marker).is_some() {
        marker.push('$');
    }
    let letter = ['$', '#', '|']
        .into_iter()
        .chain((0xE000u32..0xF8FF).filter_map(char::from_u32))
        .find(|c| !f.alphabet().has_output(*c))
        .expect("a free output letter");
    (marker, letter)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Track {
    Count(u32),
    Letter(char),
}

impl Track {
    fn advance(self, output: &[char], position: u32) -> Track {
        match self {
            Track::Letter(_) => self,
            Track::Count(n) => {
                let after = n + output.len() as u32;
                if after > position {
                    Track::Letter(output[(position - n) as usize])
                } else {
                    Track::Count(after)
                }
            }
        }
    }
}

/// Searches, for every output position, for two runs on a common input of
/// length at most `max_len` whose outputs differ at that position. The
/// verdict is exact when `max_len ≥ 3m²` for `m` states; below that bound a
/// "functional" answer only covers inputs up to `max_len`.
pub fn fst_functional_bounded(f: &Fst, max_len: usize) -> FunctionalityVerdict {
    let m = f.state_count();
    let exact = max_len >= 3 * m * m;
    let (marker, letter) = fresh_marker(f);
    let g = with_end_marker(f, &marker, letter).expect("fresh marker");
    let trans = g.transitions();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.state_count()];
    for (i, t) in trans.iter().enumerate() {
        out[t.from.index()].push(i);
    }
    let depth_limit = max_len + 1;
    let positions = depth_limit * g.max_output_len();

    let mut best: Option<Witness> = None;
    for position in 0..positions as u32 {
        type Node = (StateId, StateId, Track, Track);
        let mut parent: HashMap<Node, Option<(Node, usize, usize)>> = HashMap::new();
        let mut queue: VecDeque<(Node, usize)> = VecDeque::new();
        for &p in g.initial() {
            for &q in g.initial() {
                let n = (p, q, Track::Count(0), Track::Count(0));
                if parent.insert(n, None).is_none() {
                    queue.push_back((n, 0));
                }
            }
        }
        let mut found = None;
        'bfs: while let Some((node, depth)) = queue.pop_front() {
            if depth >= depth_limit || best.as_ref().is_some_and(|b| b.input.len() <= depth) {
                continue;
            }
            let (p, q, s1, s2) = node;
            for &i in &out[p.index()] {
                for &j in &out[q.index()] {
                    let (t1, t2) = (&trans[i], &trans[j]);
                    if t1.input != t2.input {
                        continue;
                    }
                    let n = (t1.to, t2.to, s1.advance(&t1.output, position), s2.advance(&t2.output, position));
                    if parent.contains_key(&n) {
                        continue;
                    }
                    parent.insert(n, Some((node, i, j)));
                    if let (Track::Letter(a), Track::Letter(b)) = (n.2, n.3) {
                        if a != b && g.is_final(n.0) && g.is_final(n.1) {
                            found = Some(n);
                            break 'bfs;
                        }
                    }
                    queue.push_back((n, depth + 1));
                }
            }
        }
        if let Some(mut n) = found {
            let mut steps = Vec::new();
            while let Some(Some((prev, i, j))) = parent.get(&n) {
                steps.push((*i, *j));
                n = *prev;
            }
            steps.reverse();
            let mut w = Witness { input: Vec::new(), out1: Vec::new(), out2: Vec::new() };
            for &(i, j) in &steps[..steps.len() - 1] {
                w.input.push(trans[i].input);
                w.out1.extend(&trans[i].output);
                w.out2.extend(&trans[j].output);
            }
            if best.as_ref().is_none_or(|b| w.input.len() < b.input.len()) {
                best = Some(w);
            }
        }
    }
    FunctionalityVerdict::from_witness(best, exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_fst;
    use crate::semantics::fst_transduce;

    const XY: &str = "fst\nalphabet inputs a\nalphabet outputs x y\nstates q\ninitial q\nfinal q\n\
                      trans q a / x -> q\ntrans q a / y -> q\n";
    const IDENTITY: &str = "fst\nalphabet inputs a b\nalphabet outputs a b\nstates q\ninitial q\nfinal q\n\
                            trans q a / a -> q\ntrans q b / b -> q\n";
    // two branches producing xy on ab, split differently
    const SPLIT: &str = "fst\nalphabet inputs a b\nalphabet outputs x y\nstates s p1 p2 q1 q2\ninitial s\nfinal p2 q2\n\
                         trans s a / x -> p1\ntrans p1 b / y -> p2\ntrans s a / xy -> q1\ntrans q1 b / eps -> q2\n";

    fn word(f: &Fst, s: &str) -> Vec<Sym> {
        f.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn immediate_mismatch() {
        let f = parse_fst(XY).unwrap();
        let v = fst_functional(&f);
        assert!(!v.functional);
        let w = v.witness.unwrap();
        assert_eq!(w.input, word(&f, "a"));
        let outs = [w.out1, w.out2];
        assert!(outs.contains(&vec!['x']) && outs.contains(&vec!['y']));
    }

    #[test]
    fn identity_and_split_branches_are_functional() {
        for text in [IDENTITY, SPLIT] {
            let f = parse_fst(text).unwrap();
            assert_eq!(fst_functional(&f), FunctionalityVerdict { functional: true, exact: true, witness: None });
        }
    }

    #[test]
    fn prefix_outputs_are_caught() {
        // on "a" one run outputs x, the other xx
        let f = parse_fst(
            "fst\nalphabet inputs a\nalphabet outputs x\nstates q p\ninitial q\nfinal p\n\
             trans q a / x -> p\ntrans q a / xx -> p\n",
        )
        .unwrap();
        let w = fst_functional(&f).witness.unwrap();
        let outs = fst_transduce(&f, &w.input);
        assert!(outs.contains(&w.out1) && outs.contains(&w.out2) && w.out1 != w.out2);
    }

    #[test]
    fn lagging_runs_are_caught() {
        // a^n b yields x^n on one branch and xx on the other
        let f = parse_fst(
            "fst\nalphabet inputs a b\nalphabet outputs x\nstates s p q f\ninitial s\nfinal f\n\
             trans s a / x -> p\ntrans p a / x -> p\ntrans p b / eps -> f\n\
             trans s a / eps -> q\ntrans q a / eps -> q\ntrans q b / xx -> f\n",
        )
        .unwrap();
        let w = fst_functional(&f).witness.unwrap();
        assert_eq!(w.input, word(&f, "a b"));
        let outs = fst_transduce(&f, &w.input);
        assert!(outs.contains(&w.out1) && outs.contains(&w.out2) && w.out1 != w.out2);
    }

    #[test]
    fn square_is_trimmed() {
        let f = parse_fst(
            "fst\nalphabet inputs a\nalphabet outputs x\nstates q s\ninitial q\nfinal q\n\
             trans q a / x -> q\ntrans s a / x -> q\n",
        )
        .unwrap();
        let sq = square(&f);
        assert_eq!(sq.nodes, vec![(StateId(0), StateId(0))]);
        assert_eq!(sq.edges.len(), 1);
    }

    #[test]
    fn end_marker_preserves_functionality() {
        for text in [XY, IDENTITY, SPLIT] {
            let f = parse_fst(text).unwrap();
            let g = with_end_marker(&f, "$", '$').unwrap();
            assert_eq!(fst_functional(&f).functional, fst_functional(&g).functional);
        }
    }

    #[test]
    fn bounded_variant() {
        let xy = parse_fst(XY).unwrap();
        let v = fst_functional_bounded(&xy, 3);
        assert!(!v.functional);
        let w = v.witness.unwrap();
        assert_eq!(w.input.len(), 1);
        assert_ne!(w.out1, w.out2);

        let id = parse_fst("fst\nalphabet inputs a\nalphabet outputs a\nstates q\ninitial q\nfinal q\ntrans q a / a -> q\n").unwrap();
        assert_eq!(fst_functional_bounded(&id, 3), FunctionalityVerdict { functional: true, exact: true, witness: None });
        assert!(!fst_functional_bounded(&id, 2).exact);

        let empty = parse_fst("fst\nalphabet inputs a\nalphabet outputs x\nstates q\ninitial q\ntrans q a / x -> q\n").unwrap();
        assert!(fst_functional_bounded(&empty, 3).functional);
        assert!(fst_functional(&empty).functional);

        let split = parse_fst(SPLIT).unwrap();
        assert!(fst_functional_bounded(&split, 75).functional);
    }
}
