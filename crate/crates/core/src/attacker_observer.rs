//! The attacker observer `Obs_att(G)`: the true-state estimator driven by
//! attack strings.

use crate::alphabet::{attack_alphabet, AttackKind, AttackLabel};
use crate::automaton::Automaton;
use crate::event::EventUniverse;
use crate::observer::{build_observer, EstimationState, Observer, Plant};

pub type AttackerObserver = Automaton<EstimationState, AttackLabel>;

/// Builds `Obs_att(G)` from the observer of `plant`.
///
/// Genuine edges copy `Obs(G)`. Every state gets an `e+` self-loop for each
/// insertable `e`. Each genuine `e` edge is doubled by `e-` when `e` is
/// erasable and by `e!` when `e` is attacker-enableable.
pub fn build_attacker_observer(plant: &Plant, universe: &EventUniverse) -> AttackerObserver {
    from_observer(&build_observer(plant, universe), universe)
}

pub(crate) fn from_observer(obs: &Observer, universe: &EventUniverse) -> AttackerObserver {
    let mut att = Automaton::new(obs.initial().clone(), attack_alphabet(universe));
    for b in obs.states() {
        att.add_state(b.clone());
    }
    for (b, e, next) in obs.transitions() {
        let mut variants = vec![AttackKind::Genuine];
        if universe.erasable().contains(e) {
            variants.push(AttackKind::Erased);
        }
        if universe.enableable().contains(e) {
            variants.push(AttackKind::Enabled);
        }
        for kind in variants {
            let label = AttackLabel { kind, event: e.clone() };
            att.add_transition(b.clone(), label, next.clone()).expect("copies of a deterministic observer edge");
        }
    }
    for e in universe.insertable() {
        for b in obs.states() {
            att.add_transition(b.clone(), AttackLabel::inserted(e.clone()), b.clone())
                .expect("insertion self-loops are unique per state");
        }
    }
    att
}
