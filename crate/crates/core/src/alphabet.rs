//! The attack alphabet `E_a = E_o ∪ E_+ ∪ E_- ∪ E_S`, the supervisor and
//! attacker projections, and control inputs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::event::{EventId, EventUniverse, IdError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttackKind {
    /// Observation of an event that really occurred.
    Genuine,
    /// Fake observation inserted by the attacker (`e+`).
    Inserted,
    /// Real occurrence whose observation the attacker erased (`e-`).
    Erased,
    /// Occurrence of an event the supervisor disabled and the attacker
    /// enabled (`e!`).
    Enabled,
}

/// One symbol of `E_a`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttackLabel {
    pub kind: AttackKind,
    pub event: EventId,
}

impl AttackLabel {
    pub fn genuine(event: EventId) -> Self {
        AttackLabel { kind: AttackKind::Genuine, event }
    }

    pub fn inserted(event: EventId) -> Self {
        AttackLabel { kind: AttackKind::Inserted, event }
    }

    pub fn erased(event: EventId) -> Self {
        AttackLabel { kind: AttackKind::Erased, event }
    }

    pub fn enabled(event: EventId) -> Self {
        AttackLabel { kind: AttackKind::Enabled, event }
    }

    /// Checks the label against the compromised sets of `universe`.
    pub fn check(&self, universe: &EventUniverse) -> Result<(), Violation> {
        let ok = match self.kind {
            AttackKind::Genuine => universe.is_observable(&self.event),
            AttackKind::Inserted => universe.insertable().contains(&self.event),
            AttackKind::Erased => universe.erasable().contains(&self.event),
            AttackKind::Enabled => universe.enableable().contains(&self.event),
        };
        if ok {
            Ok(())
        } else {
            Err(match self.kind {
                AttackKind::Genuine => Violation::BadGenuine,
                AttackKind::Inserted => Violation::BadInsert,
                AttackKind::Erased => Violation::BadErase,
                AttackKind::Enabled => Violation::BadEnable,
            })
        }
    }
}

impl fmt::Display for AttackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.kind {
            AttackKind::Genuine => "",
            AttackKind::Inserted => "+",
            AttackKind::Erased => "-",
            AttackKind::Enabled => "!",
        };
        write!(f, "{}{suffix}", self.event)
    }
}

impl fmt::Debug for AttackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AttackLabel {
    type Err = IdError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let (name, kind) = match token.as_bytes().last() {
            Some(b'+') => (&token[..token.len() - 1], AttackKind::Inserted),
            Some(b'-') => (&token[..token.len() - 1], AttackKind::Erased),
            Some(b'!') => (&token[..token.len() - 1], AttackKind::Enabled),
            _ => (token, AttackKind::Genuine),
        };
        Ok(AttackLabel { kind, event: EventId::new(name)? })
    }
}

/// The full attack alphabet generated by `universe`.
pub fn attack_alphabet(universe: &EventUniverse) -> BTreeSet<AttackLabel> {
    let genuine = universe.observable().iter().cloned().map(AttackLabel::genuine);
    let ins = universe.insertable().iter().cloned().map(AttackLabel::inserted);
    let era = universe.erasable().iter().cloned().map(AttackLabel::erased);
    let ena = universe.enableable().iter().cloned().map(AttackLabel::enabled);
    genuine.chain(ins).chain(era).chain(ena).collect()
}

/// An attack string `w ∈ E_a*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AttackWord(pub Vec<AttackLabel>);

impl AttackWord {
    pub fn labels(&self) -> &[AttackLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses whitespace-separated tokens `e`, `e+`, `e-`, `e!`.
    pub fn parse(text: &str) -> Result<Self, IdError> {
        text.split_whitespace().map(str::parse).collect::<Result<Vec<_>, _>>().map(AttackWord)
    }
}

impl From<Vec<AttackLabel>> for AttackWord {
    fn from(labels: Vec<AttackLabel>) -> Self {
        AttackWord(labels)
    }
}

impl fmt::Display for AttackWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AttackWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AttackWord({self})")
    }
}

/// `P̂(w)`: what the supervisor perceives. Erasures vanish; insertions and
/// enablements read as the plain event.
pub fn supervisor_projection(w: &[AttackLabel]) -> Vec<EventId> {
    w.iter().filter(|l| l.kind != AttackKind::Erased).map(|l| l.event.clone()).collect()
}

/// `P̃(w)`: the real observation. Insertions vanish; erasures and
/// enablements read as the plain event.
pub fn attacker_projection(w: &[AttackLabel]) -> Vec<EventId> {
    w.iter().filter(|l| l.kind != AttackKind::Inserted).map(|l| l.event.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("bad-insert: event is not insertable")]
    BadInsert,
    #[error("bad-erase: event is not erasable")]
    BadErase,
    #[error("bad-enable: event cannot be enabled by the attacker")]
    BadEnable,
    #[error("bad-genuine: event is not observable")]
    BadGenuine,
}

impl Violation {
    pub fn code(self) -> &'static str {
        match self {
            Violation::BadInsert => "bad-insert",
            Violation::BadErase => "bad-erase",
            Violation::BadEnable => "bad-enable",
            Violation::BadGenuine => "bad-genuine",
        }
    }
}

/// Why an attack word is not an admissible attack output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("label {position} rejected: {reason}")]
pub struct InvalidAttackWord {
    /// 1-based position of the first offending label.
    pub position: usize,
    pub reason: Violation,
}

/// Checks that `w` has the shape `E_+* (v E_+*)*`, where each `v` is a
/// genuine observable event, an erasable event or an enableable event and
/// every insertion is of an insertable event.
pub fn validate_attack_word(w: &[AttackLabel], universe: &EventUniverse) -> Result<(), InvalidAttackWord> {
    for (i, label) in w.iter().enumerate() {
        label.check(universe).map_err(|reason| InvalidAttackWord { position: i + 1, reason })?;
    }
    Ok(())
}

/// A control input `ξ`: the events the supervisor currently enables.
/// Always contains every uncontrollable event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlInput(BTreeSet<EventId>);

impl ControlInput {
    /// Builds `ξ` from the events explicitly enabled, closed under `E_uc`.
    pub fn new(enabled: impl IntoIterator<Item = EventId>, universe: &EventUniverse) -> Self {
        let mut set: BTreeSet<EventId> = enabled.into_iter().collect();
        set.extend(universe.uncontrollable());
        ControlInput(set)
    }

    pub fn enabled(&self) -> &BTreeSet<EventId> {
        &self.0
    }

    pub fn contains(&self, e: &EventId) -> bool {
        self.0.contains(e)
    }
}

impl fmt::Display for ControlInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("event `{0}` cannot be enabled by the attacker")]
pub struct IllegalEnable(pub EventId);

/// `ξ' = ξ ∪ enable`, which is a subset of `ξ ∪ E_ena` by construction.
pub fn corrupt_control_input(
    xi: &ControlInput,
    enable: &BTreeSet<EventId>,
    universe: &EventUniverse,
) -> Result<ControlInput, IllegalEnable> {
    if let Some(e) = enable.difference(universe.enableable()).next() {
        return Err(IllegalEnable(e.clone()));
    }
    Ok(ControlInput(xi.0.union(enable).cloned().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> EventId {
        EventId::new(s).unwrap()
    }

    fn w(text: &str) -> Vec<AttackLabel> {
        AttackWord::parse(text).unwrap().0
    }

    fn f1_universe() -> EventUniverse {
        EventUniverse::new(
            [ev("a"), ev("g"), ev("b"), ev("d")],
            [ev("a"), ev("g"), ev("b")],
            [ev("a"), ev("g"), ev("b")],
        )
        .unwrap()
        .with_compromised([ev("a")], [ev("g"), ev("b")], [ev("b")])
        .unwrap()
    }

    #[test]
    fn label_rendering_round_trips() {
        for t in ["a", "a+", "a-", "a!"] {
            assert_eq!(t.parse::<AttackLabel>().unwrap().to_string(), t);
        }
        assert!("+".parse::<AttackLabel>().is_err());
        assert_eq!(AttackWord::parse("a  b-\tg+").unwrap().to_string(), "a b- g+");
    }

    #[test]
    fn supervisor_projection_examples() {
        assert!(supervisor_projection(&[]).is_empty());
        assert_eq!(supervisor_projection(&w("a g- b!")), vec![ev("a"), ev("b")]);
        assert_eq!(supervisor_projection(&w("a+")), vec![ev("a")]);
    }

    #[test]
    fn attacker_projection_examples() {
        assert!(attacker_projection(&w("a+")).is_empty());
        assert_eq!(attacker_projection(&w("a g- b!")), vec![ev("a"), ev("g"), ev("b")]);
        assert!(attacker_projection(&[]).is_empty());
    }

    #[test]
    fn validate_examples() {
        let u = f1_universe();
        assert!(validate_attack_word(&w("a+ a+"), &u).is_ok());
        assert!(validate_attack_word(&w("a b-"), &u).is_ok());

        let other = EventUniverse::new([ev("c")], [ev("c")], []).unwrap();
        let err = validate_attack_word(&w("c-"), &other).unwrap_err();
        assert_eq!(err.reason.code(), "bad-erase");
        assert_eq!(err.position, 1);

        assert_eq!(validate_attack_word(&w("a g+"), &u).unwrap_err().reason, Violation::BadInsert);
        assert_eq!(validate_attack_word(&w("g!"), &u).unwrap_err().reason, Violation::BadEnable);
        assert_eq!(validate_attack_word(&w("a d"), &u).unwrap_err().position, 2);
    }

    #[test]
    fn alphabet_of_f1() {
        let rendered: Vec<String> = attack_alphabet(&f1_universe()).iter().map(|l| l.to_string()).collect();
        assert_eq!(rendered, ["a", "b", "g", "a+", "b-", "g-", "b!"]);
    }

    #[test]
    fn control_input_contains_uncontrollable() {
        let u = f1_universe();
        let xi = ControlInput::new([ev("a")], &u);
        assert_eq!(xi.enabled(), &BTreeSet::from([ev("a"), ev("d")]));
    }

    #[test]
    fn corrupt_control_input_examples() {
        let u = f1_universe();
        let xi = ControlInput::new([ev("a"), ev("d")], &u);
        assert_eq!(corrupt_control_input(&xi, &BTreeSet::new(), &u).unwrap(), xi);

        let xi = ControlInput::new([ev("g"), ev("d")], &u);
        let out = corrupt_control_input(&xi, &BTreeSet::from([ev("b")]), &u).unwrap();
        assert_eq!(out.enabled(), &BTreeSet::from([ev("g"), ev("d"), ev("b")]));

        let xi = ControlInput::new([ev("a")], &u);
        assert_eq!(corrupt_control_input(&xi, &BTreeSet::from([ev("a")]), &u), Err(IllegalEnable(ev("a"))));
    }
}
