//! Fixtures, random instance generators and brute-force oracles shared by
//! the test suites. Oracles here deliberately avoid the library's own
//! constructions (subset construction, composition, fixpoints).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use desattack_core::{
    AttackKind, AttackLabel, AttackNode, AttackStructure, Automaton, EstimationState, EventId, EventUniverse,
    ModelFile, Plant, StateId,
};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// The reference model used throughout the tests.
pub const F1: &str = "\
[events]            # one per line: NAME FLAGS…  flags: o|uo, c|uc
a o c
g o c
b o c
d uo uc
[compromised]
ins: a
era: g b
ena: b
[plant]
initial: 0
unsafe: 3
0 a 1
1 g 2
1 d 2
2 b 3
[supervisor]        # optional section; unobservable events must self-loop
initial: y0
y0 a y1
y1 g y2
y0 d y0
y1 d y1
y2 d y2
";

pub fn f1() -> ModelFile {
    desattack_core::parse_model(F1).expect("reference model parses")
}

pub fn ev(name: &str) -> EventId {
    EventId::new(name).unwrap()
}

pub fn st(name: &str) -> StateId {
    StateId::new(name).unwrap()
}

pub fn est(members: &[&str]) -> EstimationState {
    EstimationState::new(members.iter().map(|m| st(m))).unwrap()
}

/// Parses a node written as `({1,2},y1)` or `({3},y_∅)`.
pub fn node(text: &str) -> AttackNode {
    let inner = text.strip_prefix("({").and_then(|t| t.strip_suffix(')')).expect("node syntax");
    let (members, sup) = inner.split_once("},").expect("node syntax");
    let estimate = est(&members.split(',').collect::<Vec<_>>());
    let sup = if sup == "y_∅" { desattack_core::SupState::Dummy } else { desattack_core::SupState::Named(st(sup)) };
    AttackNode { estimate, sup }
}

pub fn label(text: &str) -> AttackLabel {
    text.parse().unwrap()
}

#[derive(Debug, Clone, Copy)]
pub struct InstanceParams {
    pub max_states: usize,
    pub min_states: usize,
    pub events: usize,
    pub max_unobservable: usize,
    pub edge_probability: f64,
    pub disable_probability: f64,
    pub compromise_probability: f64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_states: 6,
            min_states: 2,
            events: 4,
            max_unobservable: 2,
            edge_probability: 0.35,
            disable_probability: 0.3,
            compromise_probability: 0.4,
        }
    }
}

const NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// A random plant with its universe, without supervisor.
pub fn random_plant(rng: &mut StdRng, p: &InstanceParams) -> (Plant, EventUniverse) {
    let n = rng.random_range(p.min_states..=p.max_states);
    let events: Vec<EventId> = NAMES[..p.events].iter().map(|e| ev(e)).collect();
    let unobs = rng.random_range(0..=p.max_unobservable.min(p.events - 1));
    let observable: Vec<EventId> = events[..p.events - unobs].to_vec();
    let controllable: Vec<EventId> = observable.iter().filter(|_| rng.random_bool(0.6)).cloned().collect();
    let mut pick = |set: &[EventId]| -> Vec<EventId> {
        set.iter().filter(|_| rng.random_bool(p.compromise_probability)).cloned().collect()
    };
    let ins = pick(&observable);
    let era = pick(&observable);
    let ena = pick(&controllable);
    let universe =
        EventUniverse::new(events.clone(), observable, controllable).unwrap().with_compromised(ins, era, ena).unwrap();
    let mut plant = Plant::new(st("0"), events.iter().cloned());
    for x in 0..n {
        plant.add_state(st(&x.to_string()));
    }
    for x in 0..n {
        for e in &events {
            if rng.random_bool(p.edge_probability) {
                let y = rng.random_range(0..n);
                plant.add_transition(st(&x.to_string()), e.clone(), st(&y.to_string())).unwrap();
            }
        }
    }
    (plant, universe)
}

/// Observation-consistent sets computed by searching plant runs directly:
/// `C(s) = { x | ∃σ ∈ L(G): P(σ) = s, x_0 -σ-> x }`.
pub fn consistent_set(plant: &Plant, universe: &EventUniverse, observation: &[EventId]) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<(usize, StateId)> = BTreeSet::new();
    let mut queue = VecDeque::from([(0usize, plant.initial().clone())]);
    seen.insert((0, plant.initial().clone()));
    let mut out = BTreeSet::new();
    while let Some((pos, x)) = queue.pop_front() {
        if pos == observation.len() {
            out.insert(x.clone());
        }
        for (e, next) in plant.outgoing(&x).unwrap() {
            let npos = if !universe.is_observable(e) {
                pos
            } else if observation.get(pos) == Some(e) {
                pos + 1
            } else {
                continue;
            };
            if seen.insert((npos, next.clone())) {
                queue.push_back((npos, next.clone()));
            }
        }
    }
    out
}

/// All observation strings of length `≤ max_len` with a non-empty
/// consistent set, each mapped to that set.
pub fn brute_force_observations(
    plant: &Plant,
    universe: &EventUniverse,
    max_len: usize,
) -> BTreeMap<Vec<EventId>, BTreeSet<StateId>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![Vec::new()];
    while let Some(s) = stack.pop() {
        let c = consistent_set(plant, universe, &s);
        if c.is_empty() {
            continue;
        }
        if s.len() < max_len {
            for e in universe.observable() {
                let mut t = s.clone();
                t.push(e.clone());
                stack.push(t);
            }
        }
        out.insert(s, c);
    }
    out
}

/// A supervisor realized as a controlled observer: at each reachable
/// estimate some controllable events are disabled at random; unobservable
/// events self-loop everywhere. Every supervisor move is then feasible in
/// the closed loop.
pub fn random_supervisor(rng: &mut StdRng, plant: &Plant, universe: &EventUniverse, disable: f64) -> Plant {
    let obs = desattack_core::build_observer(plant, universe);
    let mut names: BTreeMap<EstimationState, StateId> = BTreeMap::new();
    names.insert(obs.initial().clone(), st("y0"));
    let mut sup = Plant::new(st("y0"), universe.events().iter().cloned());
    let mut queue = VecDeque::from([obs.initial().clone()]);
    while let Some(b) = queue.pop_front() {
        let y = names[&b].clone();
        for e in universe.unobservable() {
            sup.add_transition(y.clone(), e, y.clone()).unwrap();
        }
        let moves: Vec<(EventId, EstimationState)> =
            obs.outgoing(&b).unwrap().map(|(e, n)| (e.clone(), n.clone())).collect();
        for (e, next) in moves {
            if universe.is_controllable(&e) && rng.random_bool(disable) {
                continue;
            }
            let fresh = StateId::new(format!("y{}", names.len())).unwrap();
            let target = names.entry(next.clone()).or_insert_with(|| {
                queue.push_back(next.clone());
                fresh
            });
            sup.add_transition(y.clone(), e, target.clone()).unwrap();
        }
    }
    sup
}

/// A complete random model with supervisor and unsafe states.
pub fn random_model(seed: u64, p: &InstanceParams) -> ModelFile {
    let mut rng = StdRng::seed_from_u64(seed);
    let (plant, universe) = random_plant(&mut rng, p);
    let supervisor = random_supervisor(&mut rng, &plant, &universe, p.disable_probability);
    let states: Vec<StateId> = plant.states().cloned().collect();
    let unsafe_states: BTreeSet<StateId> = states.iter().skip(1).filter(|_| rng.random_bool(0.3)).cloned().collect();
    ModelFile { universe, plant, supervisor: Some(supervisor), unsafe_states }
}

/// The attack-free closed loop `S_P/G`, built directly from the control
/// input semantics: `e` may fire when the plant allows it and
/// `e ∈ Γ(y) ∪ E_uc`; the supervisor moves on `e` when it has an edge.
pub fn closed_loop(plant: &Plant, sup: &Plant, universe: &EventUniverse) -> Automaton<(StateId, StateId), EventId> {
    let init = (plant.initial().clone(), sup.initial().clone());
    let mut out = Automaton::new(init.clone(), universe.events().iter().cloned());
    let mut queue = VecDeque::from([init.clone()]);
    let mut seen = BTreeSet::from([init]);
    while let Some((x, y)) = queue.pop_front() {
        for (e, nx) in plant.outgoing(&x).unwrap() {
            let ny = match sup.successor(&y, e) {
                Some(ny) => ny.clone(),
                None if !universe.is_controllable(e) => y.clone(),
                None => continue,
            };
            let next = (nx.clone(), ny);
            out.add_transition((x.clone(), y.clone()), e.clone(), next.clone()).unwrap();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}

/// Whether `observation ∈ P[L(S_P/G)]`, by searching closed-loop runs.
pub fn in_observed_closed_loop(
    closed: &Automaton<(StateId, StateId), EventId>,
    universe: &EventUniverse,
    observation: &[EventId],
) -> bool {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([(0usize, closed.initial().clone())]);
    while let Some((pos, q)) = queue.pop_front() {
        if pos == observation.len() {
            return true;
        }
        for (e, next) in closed.outgoing(&q).unwrap() {
            let npos = if !universe.is_observable(e) {
                pos
            } else if observation[pos] == *e {
                pos + 1
            } else {
                continue;
            };
            if seen.insert((npos, next.clone())) {
                queue.push_back((npos, next.clone()));
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Vertex {
    /// Attacker to move: insert, or let the plant move.
    Node(usize),
    /// Plant to move: pick a spontaneous event.
    Plant(usize),
    /// Attacker to move: pick how the chosen event is observed.
    Choice(usize, EventId),
}

/// Solves the exposure game on an explicit game graph by repeated sweeps
/// until nothing changes, returning the nodes from which the plant forces
/// a visit to an exposing node.
pub fn exposure_game_losing_region(a: &AttackStructure) -> BTreeSet<AttackNode> {
    let Some(g) = a.graph() else {
        return BTreeSet::new();
    };
    let mut succ: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for i in 0..g.num_states() {
        let edges = g.edges_at(i);
        let mut node_moves = vec![Vertex::Plant(i)];
        let mut plant_moves = Vec::new();
        for (l, &d) in edges {
            if l.kind == AttackKind::Inserted {
                node_moves.push(Vertex::Node(d));
            }
        }
        let events: BTreeSet<&EventId> = edges.keys().map(|l| &l.event).collect();
        for e in events {
            let genuine = edges.get(&AttackLabel::genuine(e.clone()));
            let erased = edges.get(&AttackLabel::erased(e.clone()));
            let enabled = edges.get(&AttackLabel::enabled(e.clone()));
            let spontaneous = genuine.is_some() || (erased.is_some() && enabled.is_none());
            if !spontaneous {
                continue;
            }
            let variants: Vec<Vertex> = genuine.into_iter().chain(erased).map(|&d| Vertex::Node(d)).collect();
            plant_moves.push(Vertex::Choice(i, e.clone()));
            succ.insert(Vertex::Choice(i, e.clone()), variants);
        }
        succ.insert(Vertex::Node(i), node_moves);
        succ.insert(Vertex::Plant(i), plant_moves);
    }
    let mut losing: BTreeSet<Vertex> =
        (0..g.num_states()).filter(|&i| g.state_at(i).is_exposing()).map(Vertex::Node).collect();
    loop {
        let mut changed = false;
        for (v, next) in &succ {
            if losing.contains(v) {
                continue;
            }
            let lost = match v {
                Vertex::Plant(_) => next.iter().any(|n| losing.contains(n)),
                Vertex::Node(_) | Vertex::Choice(..) => !next.is_empty() && next.iter().all(|n| losing.contains(n)),
            };
            if lost {
                losing.insert(v.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    losing
        .into_iter()
        .filter_map(|v| match v {
            Vertex::Node(i) => Some(g.state_at(i).clone()),
            _ => None,
        })
        .collect()
}

/// Calls `visit` on every word of `aut` up to `max_len` along with the
/// state it reaches, depth first, without materializing the language.
pub fn for_each_word<S: Ord + Clone, L: Ord + Clone>(
    aut: &Automaton<S, L>,
    max_len: usize,
    mut visit: impl FnMut(&[L], &S),
) {
    fn go<S: Ord + Clone, L: Ord + Clone>(
        aut: &Automaton<S, L>,
        i: usize,
        word: &mut Vec<L>,
        max_len: usize,
        visit: &mut impl FnMut(&[L], &S),
    ) {
        visit(word, aut.state_at(i));
        if word.len() == max_len {
            return;
        }
        for (l, &d) in aut.edges_at(i) {
            word.push(l.clone());
            go(aut, d, word, max_len, visit);
            word.pop();
        }
    }
    go(aut, aut.initial_index(), &mut Vec::new(), max_len, &mut visit);
}
