//! Stealthy sensor/actuator attack analysis for discrete event systems
//! under partially observed supervisory control.
//!
//! The pipeline builds the observer of a plant, the attacker observer
//! `Obs_att(G)`, the supervisor under attack `S_Pa`, their composition (the
//! attack structure `A`) and finally the supremal stealthy attack
//! substructure `A^ss`. A target node reachable in `A^ss` witnesses an
//! attack that drives the plant unsafe without the supervisor noticing.

pub mod alphabet;
pub mod attacker_observer;
pub mod automaton;
pub mod desfile;
pub mod dot;
pub mod event;
pub mod observer;
pub mod replay;
pub mod structure;
pub mod supervisor;

pub use alphabet::{
    attack_alphabet, attacker_projection, corrupt_control_input, supervisor_projection, validate_attack_word,
    AttackKind, AttackLabel, AttackWord, ControlInput, IllegalEnable, InvalidAttackWord, Violation,
};
pub use attacker_observer::{build_attacker_observer, AttackerObserver};
pub use automaton::{natural_projection, parallel_compose, Automaton, AutomatonError};
pub use desfile::{parse_attack_word, parse_model, serialize_model, ModelFile, ParseError, ParseErrorKind};
pub use dot::{export_attack_structure_dot, export_dot};
pub use event::{EventId, EventUniverse, IdError, StateId, UniverseError};
pub use observer::{build_observer, unobservable_reach, EstimationState, Observer, Plant};
pub use replay::{replay, replay_on, ReplayError, ReplayStep, ReplayTrace};
pub use structure::{
    analyze, analyze_full, build_attack_structure, stealth_counterexample, Analysis, AnalysisError, AttackGraph,
    AttackNode, AttackStructure, Verdict,
};
pub use supervisor::{
    build_supervisor_under_attack, check_realization, consistent_pairs, control_input, ConsistentPairs,
    RealizationError, SupState, SupervisorUnderAttack,
};
