//! The supervisor under attack `S_Pa`: the supervisor's own state estimate
//! driven by corrupted observations, plus a dummy state `y_∅` reached
//! exactly when the perceived observation cannot occur without an attack.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{attack_alphabet, AttackLabel, ControlInput};
use crate::automaton::{parallel_compose, Automaton};
use crate::event::{EventId, EventUniverse, StateId};
use crate::observer::{build_observer, EstimationState, Observer, Plant};

/// A state of `S_Pa`: a supervisor state or the exposure state `y_∅`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SupState {
    Named(StateId),
    Dummy,
}

impl SupState {
    pub fn is_dummy(&self) -> bool {
        matches!(self, SupState::Dummy)
    }

    pub fn named(&self) -> Option<&StateId> {
        match self {
            SupState::Named(y) => Some(y),
            SupState::Dummy => None,
        }
    }
}

impl fmt::Display for SupState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupState::Named(y) => write!(f, "{y}"),
            SupState::Dummy => f.write_str("y_∅"),
        }
    }
}

impl fmt::Debug for SupState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type SupervisorUnderAttack = Automaton<SupState, AttackLabel>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("supervisor uses undeclared event `{0}`")]
    UndeclaredEvent(EventId),
    #[error("unobservable event `{event}` must self-loop in the supervisor, but `{from}` moves to `{target}`")]
    UnobservableMove { from: StateId, event: EventId, target: StateId },
}

/// Checks the supervisor realization convention: every event is declared,
/// and unobservable events only label self-loops. `Γ(y)` then defines the
/// control input at `y`.
pub fn check_realization(sup: &Plant, universe: &EventUniverse) -> Result<(), RealizationError> {
    if let Some(e) = sup.alphabet().iter().find(|e| !universe.contains(e)) {
        return Err(RealizationError::UndeclaredEvent(e.clone()));
    }
    for (y, e, next) in sup.transitions() {
        if !universe.is_observable(e) && y != next {
            return Err(RealizationError::UnobservableMove { from: y.clone(), event: e.clone(), target: next.clone() });
        }
    }
    Ok(())
}

/// The control input `ξ = Γ(y) ∪ E_uc` issued at supervisor state `y`.
pub fn control_input(sup: &Plant, universe: &EventUniverse, y: &StateId) -> Option<ControlInput> {
    let active = sup.outgoing(y)?.map(|(e, _)| e.clone());
    Some(ControlInput::new(active, universe))
}

/// Observer/supervisor pairs reached by a common observation `s ∈ E_o*`,
/// each with its disabled-but-active set `D(b, y) = Γ(b) \ Γ(y)`
/// restricted to `E_o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistentPairs {
    pairs: BTreeMap<(EstimationState, StateId), BTreeSet<EventId>>,
}

impl ConsistentPairs {
    pub fn contains(&self, b: &EstimationState, y: &StateId) -> bool {
        self.pairs.contains_key(&(b.clone(), y.clone()))
    }

    pub fn disabled_active(&self, b: &EstimationState, y: &StateId) -> Option<&BTreeSet<EventId>> {
        self.pairs.get(&(b.clone(), y.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EstimationState, &StateId, &BTreeSet<EventId>)> {
        self.pairs.iter().map(|((b, y), d)| (b, y, d))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `∪_b D(b, y)` over the consistent pairs with supervisor state `y`.
    pub fn disabled_active_at(&self, y: &StateId) -> BTreeSet<EventId> {
        self.pairs.iter().filter(|((_, yy), _)| yy == y).flat_map(|(_, d)| d.iter().cloned()).collect()
    }
}

/// Computes the consistent pairs as the reachable part of
/// `Obs(G) ∥ S_P|E_o`.
pub fn consistent_pairs(observer: &Observer, sup: &Plant, universe: &EventUniverse) -> ConsistentPairs {
    let observable = universe.observable();
    let product = parallel_compose(&observer.restrict_alphabet(observable), &sup.restrict_alphabet(observable));
    let pairs = product
        .states()
        .map(|(b, y)| {
            let gamma_b = observer.active_events(b).expect("product state from observer");
            let xi = control_input(sup, universe, y).expect("product state from supervisor");
            let d = gamma_b.into_iter().filter(|e| observable.contains(e) && !xi.contains(e)).collect();
            ((b.clone(), y.clone()), d)
        })
        .collect();
    ConsistentPairs { pairs }
}

/// Builds `S_Pa` from a supervisor satisfying the realization convention.
pub fn build_supervisor_under_attack(
    plant: &Plant,
    sup: &Plant,
    universe: &EventUniverse,
) -> Result<SupervisorUnderAttack, RealizationError> {
    check_realization(sup, universe)?;
    let observer = build_observer(plant, universe);
    let pairs = consistent_pairs(&observer, sup, universe);
    Ok(from_parts(sup, universe, &pairs))
}

pub(crate) fn from_parts(sup: &Plant, universe: &EventUniverse, pairs: &ConsistentPairs) -> SupervisorUnderAttack {
    let named = |y: &StateId| SupState::Named(y.clone());
    let mut sa = Automaton::new(named(sup.initial()), attack_alphabet(universe));
    for y in sup.states() {
        sa.add_state(named(y));
    }
    sa.add_state(SupState::Dummy);
    let add = |sa: &mut SupervisorUnderAttack, from: SupState, label: AttackLabel, to: SupState| {
        sa.add_transition(from, label, to).expect("S_Pa construction is deterministic");
    };

    // Observable part of Δ_s.
    for (y, e, next) in sup.transitions() {
        if universe.is_observable(e) {
            add(&mut sa, named(y), AttackLabel::genuine(e.clone()), named(next));
        }
    }

    let disabled: BTreeMap<&StateId, BTreeSet<EventId>> =
        sup.states().map(|y| (y, pairs.disabled_active_at(y))).collect();

    // Enablement of an event the supervisor disabled while the plant could
    // execute it; optionally masked by insertion or erasure.
    for e in universe.enableable() {
        for y in sup.states() {
            if !disabled[y].contains(e) {
                continue;
            }
            add(&mut sa, named(y), AttackLabel::enabled(e.clone()), SupState::Dummy);
            if universe.insertable().contains(e) {
                add(&mut sa, named(y), AttackLabel::inserted(e.clone()), SupState::Dummy);
            }
            if universe.erasable().contains(e) {
                add(&mut sa, named(y), AttackLabel::erased(e.clone()), named(y));
            }
        }
    }

    // Observations impossible without an attack expose it.
    for e in universe.observable() {
        for y in sup.states() {
            let genuine = AttackLabel::genuine(e.clone());
            if sa.successor(&named(y), &genuine).is_none() && !disabled[y].contains(e) {
                add(&mut sa, named(y), genuine, SupState::Dummy);
            }
        }
    }

    // The supervisor cannot tell e+ from e and does not see e-.
    let genuine_edges: Vec<(SupState, EventId, SupState)> = sa
        .transitions()
        .filter(|(_, l, _)| l.kind == crate::alphabet::AttackKind::Genuine)
        .map(|(y, l, next)| (y.clone(), l.event.clone(), next.clone()))
        .collect();
    for (y, e, next) in &genuine_edges {
        if universe.insertable().contains(e) {
            add(&mut sa, y.clone(), AttackLabel::inserted(e.clone()), next.clone());
        }
    }
    for (y, e, _) in &genuine_edges {
        if universe.erasable().contains(e) {
            add(&mut sa, y.clone(), AttackLabel::erased(e.clone()), y.clone());
        }
    }
    sa
}
