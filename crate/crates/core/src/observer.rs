//! Unobservable reach and the observer `Obs(G)` of a plant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, AutomatonError};
use crate::event::{EventId, EventUniverse, StateId};

/// A plant or supervisor: states are opaque ids, labels are events.
pub type Plant = Automaton<StateId, EventId>;

/// `Obs(G)` over `E_o` with estimation-set states.
pub type Observer = Automaton<EstimationState, EventId>;

/// A non-empty set of plant states consistent with an observation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EstimationState(BTreeSet<StateId>);

impl EstimationState {
    /// Returns `None` for an empty set.
    pub fn new(members: impl IntoIterator<Item = StateId>) -> Option<Self> {
        let set: BTreeSet<StateId> = members.into_iter().collect();
        (!set.is_empty()).then_some(EstimationState(set))
    }

    pub fn members(&self) -> &BTreeSet<StateId> {
        &self.0
    }

    pub fn contains(&self, x: &StateId) -> bool {
        self.0.contains(x)
    }

    pub fn meets(&self, other: &BTreeSet<StateId>) -> bool {
        !self.0.is_disjoint(other)
    }
}

impl fmt::Display for EstimationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for EstimationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `UR(x)`: states reachable from `x` through unobservable events only.
pub fn unobservable_reach(
    plant: &Plant,
    universe: &EventUniverse,
    x: &StateId,
) -> Result<EstimationState, AutomatonError> {
    let start = plant.index_of(x).ok_or_else(|| AutomatonError::UnknownState(x.to_string()))?;
    let closure = ur_indices(plant, universe, [start]);
    Ok(EstimationState(closure.into_iter().map(|i| plant.state_at(i).clone()).collect()))
}

fn ur_indices(plant: &Plant, universe: &EventUniverse, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut closure: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    for s in seeds {
        if closure.insert(s) {
            stack.push(s);
        }
    }
    while let Some(i) = stack.pop() {
        for (e, &d) in plant.edges_at(i) {
            if !universe.is_observable(e) && closure.insert(d) {
                stack.push(d);
            }
        }
    }
    closure
}

/// Builds `Obs(G)` by subset construction restricted to `E_o`, emitting
/// only estimation sets reachable from `b_0 = UR(x_0)`.
pub fn build_observer(plant: &Plant, universe: &EventUniverse) -> Observer {
    let to_state = |set: &BTreeSet<usize>| EstimationState(set.iter().map(|&i| plant.state_at(i).clone()).collect());
    let b0 = ur_indices(plant, universe, [plant.initial_index()]);
    let mut obs = Automaton::new(to_state(&b0), universe.observable().iter().cloned());
    let mut seen: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(b0.clone(), 0)]);
    let mut queue = VecDeque::from([b0]);
    while let Some(b) = queue.pop_front() {
        let mut moves: BTreeMap<&EventId, BTreeSet<usize>> = BTreeMap::new();
        for &x in &b {
            for (e, &d) in plant.edges_at(x) {
                if universe.is_observable(e) {
                    moves.entry(e).or_default().insert(d);
                }
            }
        }
        for (e, targets) in moves {
            let next = ur_indices(plant, universe, targets);
            if !seen.contains_key(&next) {
                obs.add_state(to_state(&next));
                seen.insert(next.clone(), seen.len());
                queue.push_back(next.clone());
            }
            obs.add_transition(to_state(&b), e.clone(), to_state(&next))
                .expect("subset construction is deterministic over E_o");
        }
    }
    obs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> EventId {
        EventId::new(s).unwrap()
    }

    fn st(s: &str) -> StateId {
        StateId::new(s).unwrap()
    }

    fn est(xs: &[&str]) -> EstimationState {
        EstimationState::new(xs.iter().map(|x| st(x))).unwrap()
    }

    /// The plant from the reference model: 0-a->1, 1-g->2, 1-d->2, 2-b->3.
    fn f1() -> (Plant, EventUniverse) {
        let u = EventUniverse::new(
            [ev("a"), ev("g"), ev("b"), ev("d")],
            [ev("a"), ev("g"), ev("b")],
            [ev("a"), ev("g"), ev("b")],
        )
        .unwrap();
        let mut p = Plant::new(st("0"), u.events().iter().cloned());
        for (s, e, t) in [("0", "a", "1"), ("1", "g", "2"), ("1", "d", "2"), ("2", "b", "3")] {
            p.add_transition(st(s), ev(e), st(t)).unwrap();
        }
        (p, u)
    }

    #[test]
    fn unobservable_reach_examples() {
        let (p, u) = f1();
        assert_eq!(unobservable_reach(&p, &u, &st("1")).unwrap(), est(&["1", "2"]));
        assert_eq!(unobservable_reach(&p, &u, &st("0")).unwrap(), est(&["0"]));
        assert!(unobservable_reach(&p, &u, &st("9")).is_err());
    }

    #[test]
    fn observer_of_f1() {
        let (p, u) = f1();
        let obs = build_observer(&p, &u);
        let states: Vec<_> = obs.states().cloned().collect();
        assert_eq!(states, vec![est(&["0"]), est(&["1", "2"]), est(&["3"]), est(&["2"])]);
        let edges: BTreeSet<_> =
            obs.transitions().map(|(s, e, t)| (s.to_string(), e.to_string(), t.to_string())).collect();
        let expected: BTreeSet<_> =
            [("{0}", "a", "{1,2}"), ("{1,2}", "g", "{2}"), ("{1,2}", "b", "{3}"), ("{2}", "b", "{3}")]
                .iter()
                .map(|(s, e, t)| (s.to_string(), e.to_string(), t.to_string()))
                .collect();
        assert_eq!(edges, expected);
    }

    #[test]
    fn single_state_unobservable_loop() {
        let u = EventUniverse::new([ev("d")], [], []).unwrap();
        let mut p = Plant::new(st("0"), [ev("d")]);
        p.add_transition(st("0"), ev("d"), st("0")).unwrap();
        let obs = build_observer(&p, &u);
        assert_eq!(obs.num_states(), 1);
        assert_eq!(obs.num_transitions(), 0);
        assert_eq!(obs.initial(), &est(&["0"]));
    }

    #[test]
    fn fully_observable_plant_gives_isomorphic_copy() {
        let u = EventUniverse::new([ev("a"), ev("b")], [ev("a"), ev("b")], []).unwrap();
        let mut p = Plant::new(st("0"), [ev("a"), ev("b")]);
        p.add_transition(st("0"), ev("a"), st("1")).unwrap();
        p.add_transition(st("1"), ev("b"), st("0")).unwrap();
        p.add_transition(st("5"), ev("a"), st("0")).unwrap();
        let obs = build_observer(&p, &u);
        assert_eq!(obs.num_states(), 2);
        assert_eq!(obs.num_transitions(), 2);
        assert_eq!(obs.successor(&est(&["1"]), &ev("b")), Some(&est(&["0"])));
    }

    #[test]
    fn estimation_state_rejects_empty() {
        assert!(EstimationState::new(Vec::<StateId>::new()).is_none());
    }
}
