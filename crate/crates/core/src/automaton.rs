//! Deterministic finite automata with partial transition functions.
//!
//! States and labels are generic so the same structure houses the plant,
//! the supervisor, observers over estimation sets and the attack structure.
//! An undefined transition is simply absent; there are no sink states.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("label `{0}` is not in the alphabet")]
    UnknownLabel(String),
    #[error("nondeterministic transition: `{from}` on `{label}` already leads to `{existing}`, not `{target}`")]
    Nondeterministic { from: String, label: String, existing: String, target: String },
}

/// A DFA `(X, E, Δ, x_0)` with states kept in insertion order.
#[derive(Clone, PartialEq, Eq)]
pub struct Automaton<S, L> {
    states: Vec<S>,
    index: BTreeMap<S, usize>,
    alphabet: BTreeSet<L>,
    edges: Vec<BTreeMap<L, usize>>,
    initial: usize,
}

impl<S, L> Automaton<S, L>
where
    S: Ord + Clone,
    L: Ord + Clone,
{
    pub fn new(initial: S, alphabet: impl IntoIterator<Item = L>) -> Self {
        let mut aut = Automaton {
            states: Vec::new(),
            index: BTreeMap::new(),
            alphabet: alphabet.into_iter().collect(),
            edges: Vec::new(),
            initial: 0,
        };
        aut.add_state(initial);
        aut
    }

    /// Adds `state` if missing and returns its index.
    pub fn add_state(&mut self, state: S) -> usize {
        if let Some(&i) = self.index.get(&state) {
            return i;
        }
        let i = self.states.len();
        self.index.insert(state.clone(), i);
        self.states.push(state);
        self.edges.push(BTreeMap::new());
        i
    }

    /// Adds `(source, label, target)`, creating missing endpoints.
    pub fn add_transition(&mut self, source: S, label: L, target: S) -> Result<(), AutomatonError>
    where
        S: fmt::Debug,
        L: fmt::Debug,
    {
        if !self.alphabet.contains(&label) {
            return Err(AutomatonError::UnknownLabel(format!("{label:?}")));
        }
        let src = self.add_state(source);
        let dst = self.add_state(target);
        self.link(src, label, dst)
    }

    fn link(&mut self, src: usize, label: L, dst: usize) -> Result<(), AutomatonError>
    where
        S: fmt::Debug,
        L: fmt::Debug,
    {
        match self.edges[src].get(&label) {
            Some(&existing) if existing != dst => Err(AutomatonError::Nondeterministic {
                from: format!("{:?}", self.states[src]),
                label: format!("{label:?}"),
                existing: format!("{:?}", self.states[existing]),
                target: format!("{:?}", self.states[dst]),
            }),
            _ => {
                self.edges[src].insert(label, dst);
                Ok(())
            }
        }
    }

    pub fn initial(&self) -> &S {
        &self.states[self.initial]
    }

    pub fn alphabet(&self) -> &BTreeSet<L> {
        &self.alphabet
    }

    /// States in insertion order. Constructions insert in breadth-first
    /// discovery order, so the initial state comes first.
    pub fn states(&self) -> impl ExactSizeIterator<Item = &S> + '_ {
        self.states.iter()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(BTreeMap::len).sum()
    }

    pub fn contains_state(&self, state: &S) -> bool {
        self.index.contains_key(state)
    }

    pub fn index_of(&self, state: &S) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn state_at(&self, index: usize) -> &S {
        &self.states[index]
    }

    pub fn initial_index(&self) -> usize {
        self.initial
    }

    /// Outgoing edges of the state at `index`, keyed by label.
    pub fn edges_at(&self, index: usize) -> &BTreeMap<L, usize> {
        &self.edges[index]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&S, &L, &S)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(move |(src, out)| out.iter().map(move |(l, &dst)| (&self.states[src], l, &self.states[dst])))
    }

    /// Outgoing `(label, target)` pairs, or `None` for an unknown state.
    pub fn outgoing<'a>(&'a self, state: &S) -> Option<impl Iterator<Item = (&'a L, &'a S)> + 'a> {
        let i = self.index_of(state)?;
        Some(self.edges[i].iter().map(move |(l, &d)| (l, &self.states[d])))
    }

    pub fn successor(&self, state: &S, label: &L) -> Option<&S> {
        let i = self.index_of(state)?;
        self.edges[i].get(label).map(|&d| &self.states[d])
    }

    /// `Γ(x)`: labels with a defined transition at `state`.
    pub fn active_events(&self, state: &S) -> Result<BTreeSet<L>, AutomatonError>
    where
        S: fmt::Debug,
    {
        let i = self.index_of(state).ok_or_else(|| AutomatonError::UnknownState(format!("{state:?}")))?;
        Ok(self.edges[i].keys().cloned().collect())
    }

    /// `Δ*(x, σ)`, or `None` when some step is undefined.
    pub fn extended_reach<'a>(&'a self, state: &S, word: &[L]) -> Result<Option<&'a S>, AutomatonError>
    where
        S: fmt::Debug,
    {
        let start = self.index_of(state).ok_or_else(|| AutomatonError::UnknownState(format!("{state:?}")))?;
        Ok(self.run_from(start, word).map(|i| &self.states[i]))
    }

    pub(crate) fn run_from(&self, start: usize, word: &[L]) -> Option<usize> {
        word.iter().try_fold(start, |cur, l| self.edges[cur].get(l).copied())
    }

    /// Runs `word` from the initial state.
    pub fn run(&self, word: &[L]) -> Option<&S> {
        self.run_from(self.initial, word).map(|i| &self.states[i])
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        self.run_from(self.initial, word).is_some()
    }

    /// All words of `L(aut)` of length at most `max_len`.
    pub fn enumerate_language(&self, max_len: usize) -> BTreeSet<Vec<L>> {
        let mut words = BTreeSet::new();
        let mut frontier = vec![(Vec::new(), self.initial)];
        words.insert(Vec::new());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (word, state) in &frontier {
                for (l, &d) in &self.edges[*state] {
                    let mut w = word.clone();
                    w.push(l.clone());
                    words.insert(w.clone());
                    next.push((w, d));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        words
    }

    /// Indices of states reachable from the initial state, in BFS order.
    pub fn reachable_indices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &d in self.edges[i].values() {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        order
    }

    /// Drops states unreachable from the initial state.
    pub fn reachable_trim(&self) -> Self {
        self.retain_reachable(|_| true, |_, _, _| true).expect("initial state is always kept")
    }

    /// Keeps the states satisfying `keep_state` and the edges satisfying
    /// `keep_edge`, then trims to the part reachable from the initial
    /// state. Returns `None` when the initial state itself is dropped.
    pub fn retain_reachable(
        &self,
        keep_state: impl Fn(&S) -> bool,
        keep_edge: impl Fn(&S, &L, &S) -> bool,
    ) -> Option<Self> {
        if !keep_state(&self.states[self.initial]) {
            return None;
        }
        let mut out = Automaton::new(self.states[self.initial].clone(), self.alphabet.iter().cloned());
        let mut remap = vec![None; self.states.len()];
        remap[self.initial] = Some(0);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(i) = queue.pop_front() {
            let src = remap[i].expect("queued states are mapped");
            for (l, &d) in &self.edges[i] {
                let (s, t) = (&self.states[i], &self.states[d]);
                if !keep_state(t) || !keep_edge(s, l, t) {
                    continue;
                }
                let dst = match remap[d] {
                    Some(j) => j,
                    None => {
                        let j = out.add_state(t.clone());
                        remap[d] = Some(j);
                        queue.push_back(d);
                        j
                    }
                };
                out.edges[src].insert(l.clone(), dst);
            }
        }
        Some(out)
    }

    /// Relabels states through an injective map.
    pub fn map_states<T: Ord + Clone>(&self, mut f: impl FnMut(&S) -> T) -> Automaton<T, L> {
        let states: Vec<T> = self.states.iter().map(&mut f).collect();
        let index: BTreeMap<T, usize> = states.iter().cloned().zip(0..).collect();
        assert_eq!(index.len(), states.len(), "state map must be injective");
        Automaton { states, index, alphabet: self.alphabet.clone(), edges: self.edges.clone(), initial: self.initial }
    }

    /// Same states, alphabet replaced by `alphabet`; edges with labels
    /// outside it are dropped.
    pub fn restrict_alphabet(&self, alphabet: &BTreeSet<L>) -> Self {
        Automaton {
            states: self.states.clone(),
            index: self.index.clone(),
            alphabet: alphabet.clone(),
            edges: self
                .edges
                .iter()
                .map(|out| out.iter().filter(|(l, _)| alphabet.contains(*l)).map(|(l, &d)| (l.clone(), d)).collect())
                .collect(),
            initial: self.initial,
        }
    }
}

impl<S: fmt::Debug, L: fmt::Debug> fmt::Debug for Automaton<S, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(l, &d)| (s, l, d)))
            .map(|(s, l, d)| (&self.states[s], l, &self.states[d]))
            .collect();
        f.debug_struct("Automaton")
            .field("initial", &self.states[self.initial])
            .field("states", &self.states)
            .field("transitions", &edges)
            .finish()
    }
}

/// `P(σ)`: deletes every symbol not in `keep`, preserving order.
pub fn natural_projection<L: Ord + Clone>(word: &[L], keep: &BTreeSet<L>) -> Vec<L> {
    word.iter().filter(|l| keep.contains(*l)).cloned().collect()
}

/// `G1 ∥ G2`: synchronizes on shared labels and interleaves private ones.
/// Only pairs reachable from `(x01, x02)` are emitted.
pub fn parallel_compose<S1, S2, L>(g1: &Automaton<S1, L>, g2: &Automaton<S2, L>) -> Automaton<(S1, S2), L>
where
    S1: Ord + Clone,
    S2: Ord + Clone,
    L: Ord + Clone,
{
    let alphabet: BTreeSet<L> = g1.alphabet.union(&g2.alphabet).cloned().collect();
    let init = (g1.initial, g2.initial);
    let pair = |(i, j): (usize, usize)| (g1.states[i].clone(), g2.states[j].clone());
    let mut out = Automaton::new(pair(init), alphabet.iter().cloned());
    let mut seen = BTreeMap::from([(init, 0usize)]);
    let mut queue = VecDeque::from([init]);
    while let Some((i, j)) = queue.pop_front() {
        let src = seen[&(i, j)];
        for l in &alphabet {
            let step1 = if g1.alphabet.contains(l) { g1.edges[i].get(l).copied() } else { Some(i) };
            let step2 = if g2.alphabet.contains(l) { g2.edges[j].get(l).copied() } else { Some(j) };
            let (Some(ni), Some(nj)) = (step1, step2) else {
                continue;
            };
            let dst = *seen.entry((ni, nj)).or_insert_with(|| {
                queue.push_back((ni, nj));
                out.add_state(pair((ni, nj)))
            });
            out.edges[src].insert(l.clone(), dst);
        }
    }
    out
}
