//! Batch replay of an attack word through the attack structure.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::alphabet::{corrupt_control_input, AttackKind, AttackLabel, AttackWord, ControlInput};
use crate::desfile::ModelFile;
use crate::structure::{build_attack_structure, AnalysisError, AttackNode, AttackStructure};
use crate::supervisor::control_input;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayStep {
    pub label: AttackLabel,
    /// Node reached after consuming `label`.
    pub node: AttackNode,
    /// `Γ(y)` in force when `label` occurred; `None` once exposed.
    pub control: Option<ControlInput>,
    /// `control` plus the event enabled by `label`, if any.
    pub corrupted: Option<ControlInput>,
    pub target: bool,
    pub exposing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayTrace {
    pub start: AttackNode,
    pub steps: Vec<ReplayStep>,
}

impl ReplayTrace {
    pub fn last_node(&self) -> &AttackNode {
        self.steps.last().map_or(&self.start, |s| &s.node)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("model has no supervisor section")]
    NoSupervisor,
    #[error("attack structure is empty")]
    EmptyStructure,
    #[error("word rejected at position {position}: no `{label}` edge from {node}; available: {}", render(.available))]
    Rejected { position: usize, label: AttackLabel, node: AttackNode, available: Vec<AttackLabel> },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn render(labels: &[AttackLabel]) -> String {
    if labels.is_empty() {
        return "none".to_owned();
    }
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Walks `w` edge by edge through the attack structure of `m`.
pub fn replay(m: &ModelFile, w: &AttackWord) -> Result<ReplayTrace, ReplayError> {
    let sup = m.supervisor.as_ref().ok_or(ReplayError::NoSupervisor)?;
    let structure = build_attack_structure(&m.plant, sup, &m.universe, &m.unsafe_states)?;
    replay_on(&structure, m, w)
}

/// Replays `w` through an already built structure of `m` (either `A` or
/// `A^ss`).
pub fn replay_on(structure: &AttackStructure, m: &ModelFile, w: &AttackWord) -> Result<ReplayTrace, ReplayError> {
    let sup = m.supervisor.as_ref().ok_or(ReplayError::NoSupervisor)?;
    let graph = structure.graph().ok_or(ReplayError::EmptyStructure)?;
    let mut node = graph.initial().clone();
    let start = node.clone();
    let mut steps = Vec::with_capacity(w.len());
    for (i, label) in w.labels().iter().enumerate() {
        let Some(next) = graph.successor(&node, label) else {
            let available = graph.outgoing(&node).map(|out| out.map(|(l, _)| l.clone()).collect()).unwrap_or_default();
            return Err(ReplayError::Rejected { position: i + 1, label: label.clone(), node, available });
        };
        let control = node.sup.named().and_then(|y| control_input(sup, &m.universe, y));
        let corrupted = control.as_ref().map(|xi| {
            let enable: BTreeSet<_> =
                (label.kind == AttackKind::Enabled).then(|| label.event.clone()).into_iter().collect();
            corrupt_control_input(xi, &enable, &m.universe).expect("enablement edges only exist for E_ena")
        });
        steps.push(ReplayStep {
            label: label.clone(),
            node: next.clone(),
            control,
            corrupted,
            target: structure.target_states().contains(next),
            exposing: next.is_exposing(),
        });
        node = next.clone();
    }
    Ok(ReplayTrace { start, steps })
}
