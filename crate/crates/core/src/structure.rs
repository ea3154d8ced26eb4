//! The attack structure `A = Obs_att(G) ∥ S_Pa`, its target/exposing
//! classification, the weakly exposing region and the supremal stealthy
//! attack substructure `A^ss`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{AttackKind, AttackLabel, AttackWord};
use crate::attacker_observer::from_observer;
use crate::automaton::{parallel_compose, Automaton};
use crate::event::{EventUniverse, StateId};
use crate::observer::{build_observer, EstimationState, Plant};
use crate::supervisor::{check_realization, consistent_pairs, from_parts, RealizationError, SupState};

/// A node `(b, y_a)` of the attack structure.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttackNode {
    pub estimate: EstimationState,
    pub sup: SupState,
}

impl AttackNode {
    pub fn is_exposing(&self) -> bool {
        self.sup.is_dummy()
    }
}

impl fmt::Display for AttackNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.estimate, self.sup)
    }
}

impl fmt::Debug for AttackNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type AttackGraph = Automaton<AttackNode, AttackLabel>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error("unsafe state `{0}` is not a plant state")]
    UnknownUnsafe(StateId),
    #[error("plant uses undeclared event `{0}`")]
    UndeclaredPlantEvent(crate::event::EventId),
}

/// An attack structure together with its node classification.
///
/// The graph is absent for the empty structure, which arises when pruning
/// removes the initial node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackStructure {
    graph: Option<AttackGraph>,
    unsafe_states: BTreeSet<StateId>,
    targets: BTreeSet<AttackNode>,
    exposing: BTreeSet<AttackNode>,
    weakly_exposing: BTreeSet<AttackNode>,
}

/// Builds `A` and computes `R_t` and `R_e`. The weakly exposing region is
/// left empty; see [`AttackStructure::with_weakly_exposing`].
pub fn build_attack_structure(
    plant: &Plant,
    sup: &Plant,
    universe: &EventUniverse,
    unsafe_states: &BTreeSet<StateId>,
) -> Result<AttackStructure, AnalysisError> {
    if let Some(x) = unsafe_states.iter().find(|x| !plant.contains_state(x)) {
        return Err(AnalysisError::UnknownUnsafe(x.clone()));
    }
    if let Some(e) = plant.alphabet().iter().find(|e| !universe.contains(e)) {
        return Err(AnalysisError::UndeclaredPlantEvent(e.clone()));
    }
    check_realization(sup, universe)?;
    let observer = build_observer(plant, universe);
    let att_obs = from_observer(&observer, universe);
    let pairs = consistent_pairs(&observer, sup, universe);
    let sup_att = from_parts(sup, universe, &pairs);
    let graph =
        parallel_compose(&att_obs, &sup_att).map_states(|(b, y)| AttackNode { estimate: b.clone(), sup: y.clone() });
    Ok(AttackStructure::classify(Some(graph), unsafe_states.clone()))
}

impl AttackStructure {
    fn classify(graph: Option<AttackGraph>, unsafe_states: BTreeSet<StateId>) -> Self {
        let nodes: Vec<AttackNode> = graph.iter().flat_map(|g| g.states().cloned()).collect();
        let targets = nodes.iter().filter(|r| r.estimate.meets(&unsafe_states)).cloned().collect();
        let exposing = nodes.iter().filter(|r| r.is_exposing()).cloned().collect();
        AttackStructure { graph, unsafe_states, targets, exposing, weakly_exposing: BTreeSet::new() }
    }

    pub fn graph(&self) -> Option<&AttackGraph> {
        self.graph.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_none()
    }

    pub fn initial(&self) -> Option<&AttackNode> {
        self.graph.as_ref().map(Automaton::initial)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &AttackNode> {
        self.graph.iter().flat_map(|g| g.states())
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.as_ref().map_or(0, Automaton::num_states)
    }

    pub fn unsafe_states(&self) -> &BTreeSet<StateId> {
        &self.unsafe_states
    }

    /// `R_t`: nodes whose estimate meets the unsafe states.
    pub fn target_states(&self) -> &BTreeSet<AttackNode> {
        &self.targets
    }

    /// `R_e`: nodes whose supervisor component is `y_∅`.
    pub fn exposing_states(&self) -> &BTreeSet<AttackNode> {
        &self.exposing
    }

    /// The stored weakly exposing region (empty until computed).
    pub fn weakly_exposing(&self) -> &BTreeSet<AttackNode> {
        &self.weakly_exposing
    }

    /// Least fixpoint `R̄_e ⊇ R_e` of nodes from which the plant can force
    /// exposure.
    ///
    /// A node joins when some observable event `e` is spontaneous there and
    /// every `e`/`e-` edge leads into the region, and every insertion edge
    /// leads into the region too. `e` is spontaneous when a genuine `e` edge
    /// exists, or an `e-` edge exists without an `e!` edge. Enablement edges
    /// neither force nor escape.
    pub fn weakly_exposing_region(&self) -> BTreeSet<AttackNode> {
        let Some(g) = &self.graph else {
            return BTreeSet::new();
        };
        let n = g.num_states();
        let mut region: Vec<bool> = (0..n).map(|i| g.state_at(i).is_exposing()).collect();
        let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for i in 0..n {
            for &d in g.edges_at(i).values() {
                preds[d].insert(i);
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| !region[i]).collect();
        let mut queued: Vec<bool> = (0..n).map(|i| !region[i]).collect();
        while let Some(i) = queue.pop_front() {
            queued[i] = false;
            if region[i] || !forced_into(g, i, &region) {
                continue;
            }
            region[i] = true;
            for &p in &preds[i] {
                if !region[p] && !queued[p] {
                    queued[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..n).filter(|&i| region[i]).map(|i| g.state_at(i).clone()).collect()
    }

    /// Computes and stores `R̄_e`.
    pub fn with_weakly_exposing(mut self) -> Self {
        self.weakly_exposing = self.weakly_exposing_region();
        self
    }

    /// `A^ss`: removes `R̄_e` (computing it when not yet stored) with all
    /// incident edges, then trims to the reachable part.
    pub fn supremal_substructure(&self) -> AttackStructure {
        let region =
            if self.weakly_exposing.is_empty() { self.weakly_exposing_region() } else { self.weakly_exposing.clone() };
        let graph = self.graph.as_ref().and_then(|g| g.retain_reachable(|r| !region.contains(r), |_, _, _| true));
        AttackStructure::classify(graph, self.unsafe_states.clone())
    }

    /// A shortest word reaching a target node, ties broken by comparing
    /// rendered labels lexicographically.
    pub fn shortest_target_word(&self) -> Option<AttackWord> {
        let g = self.graph.as_ref()?;
        let mut parent: BTreeMap<usize, (usize, &AttackLabel)> = BTreeMap::new();
        let mut seen = vec![false; g.num_states()];
        let start = g.initial_index();
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            if self.targets.contains(g.state_at(i)) {
                let mut labels = Vec::new();
                let mut cur = i;
                while let Some(&(p, l)) = parent.get(&cur) {
                    labels.push(l.clone());
                    cur = p;
                }
                labels.reverse();
                return Some(AttackWord(labels));
            }
            let mut out: Vec<(String, &AttackLabel, usize)> =
                g.edges_at(i).iter().map(|(l, &d)| (l.to_string(), l, d)).collect();
            out.sort();
            for (_, l, d) in out {
                if !seen[d] {
                    seen[d] = true;
                    parent.insert(d, (i, l));
                    queue.push_back(d);
                }
            }
        }
        None
    }
}

/// Searches `A^ss` breadth first, up to `max_len` labels, for a word whose
/// perceived observation `P̂(w)` leaves the observed attack-free closed
/// loop `Obs(G ∥ S_P)`. Returns the first such word.
pub fn stealth_counterexample(
    supremal: &AttackStructure,
    plant: &Plant,
    sup: &Plant,
    universe: &EventUniverse,
    max_len: usize,
) -> Option<AttackWord> {
    let g = supremal.graph.as_ref()?;
    let product = parallel_compose(plant, sup);
    let closed = product.map_states(|q| {
        let i = product.index_of(q).expect("own state");
        StateId::new(format!("q{i}")).expect("valid token")
    });
    let observed = build_observer(&closed, universe);
    type Pair = (usize, usize);
    let start: Pair = (g.initial_index(), observed.initial_index());
    let mut parent: BTreeMap<Pair, Option<(Pair, &AttackLabel)>> = BTreeMap::from([(start, None)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let path = |parent: &BTreeMap<Pair, Option<(Pair, &AttackLabel)>>, mut cur: Pair, last: &AttackLabel| {
        let mut labels = vec![last.clone()];
        while let Some(Some((p, l))) = parent.get(&cur) {
            labels.push((*l).clone());
            cur = *p;
        }
        labels.reverse();
        AttackWord(labels)
    };
    while let Some(((r, q), d)) = queue.pop_front() {
        if d == max_len {
            continue;
        }
        for (l, &nr) in g.edges_at(r) {
            let nq = if l.kind == AttackKind::Erased { Some(q) } else { observed.edges_at(q).get(&l.event).copied() };
            let Some(nq) = nq else {
                return Some(path(&parent, (r, q), l));
            };
            if let Entry::Vacant(slot) = parent.entry((nr, nq)) {
                slot.insert(Some(((r, q), l)));
                queue.push_back(((nr, nq), d + 1));
            }
        }
    }
    None
}

fn forced_into(g: &AttackGraph, i: usize, region: &[bool]) -> bool {
    let edges = g.edges_at(i);
    let escapes = edges.iter().any(|(l, &d)| l.kind == AttackKind::Inserted && !region[d]);
    if escapes {
        return false;
    }
    let spontaneous: BTreeSet<_> = edges
        .keys()
        .filter(|l| match l.kind {
            AttackKind::Genuine => true,
            AttackKind::Erased => !edges.contains_key(&AttackLabel::enabled(l.event.clone())),
            _ => false,
        })
        .map(|l| &l.event)
        .collect();
    spontaneous.into_iter().any(|e| {
        [AttackLabel::genuine(e.clone()), AttackLabel::erased(e.clone())]
            .iter()
            .filter_map(|l| edges.get(l))
            .all(|&d| region[d])
    })
}

/// Outcome of the attack analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// Some target node is reachable in `A`.
    pub effective: bool,
    /// Some target node is reachable in `A^ss`.
    pub stealthy_effective: bool,
    /// Shortest attack word reaching a target node in `A^ss`.
    pub witness: Option<AttackWord>,
    /// No stealthy effective attack exists.
    pub robust: bool,
}

/// The full pipeline result: `A` with its region, `A^ss` and the verdict.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub structure: AttackStructure,
    pub supremal: AttackStructure,
    pub verdict: Verdict,
}

pub fn analyze_full(
    plant: &Plant,
    sup: &Plant,
    universe: &EventUniverse,
    unsafe_states: &BTreeSet<StateId>,
) -> Result<Analysis, AnalysisError> {
    let structure = build_attack_structure(plant, sup, universe, unsafe_states)?.with_weakly_exposing();
    let supremal = structure.supremal_substructure();
    let witness = supremal.shortest_target_word();
    let stealthy_effective = witness.is_some();
    let verdict =
        Verdict { effective: !structure.targets.is_empty(), stealthy_effective, witness, robust: !stealthy_effective };
    Ok(Analysis { structure, supremal, verdict })
}

/// Decides whether a stealthy attack can drive the plant into an unsafe
/// state.
pub fn analyze(
    plant: &Plant,
    sup: &Plant,
    universe: &EventUniverse,
    unsafe_states: &BTreeSet<StateId>,
) -> Result<Verdict, AnalysisError> {
    analyze_full(plant, sup, universe, unsafe_states).map(|a| a.verdict)
}
