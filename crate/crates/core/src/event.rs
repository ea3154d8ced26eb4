//! Event and state identifiers, and the event universe with its
//! observability, controllability and compromise partitions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Name of a plant event.
///
/// Names are printable tokens without whitespace. The suffix characters
/// `+`, `-` and `!` are reserved for the attack-label rendering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(String);

impl EventId {
    pub fn new(name: impl Into<String>) -> Result<Self, IdError> {
        let name = name.into();
        validate_token(&name)?;
        if name.ends_with(['+', '-', '!']) {
            return Err(IdError::ReservedSuffix(name));
        }
        Ok(EventId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque state token of a plant or supervisor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Result<Self, IdError> {
        let name = name.into();
        validate_token(&name)?;
        Ok(StateId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn validate_token(name: &str) -> Result<(), IdError> {
    if name.is_empty() {
        return Err(IdError::Empty);
    }
    if name.chars().any(|c| c.is_whitespace() || c.is_control() || c == '#') {
        return Err(IdError::BadCharacter(name.to_owned()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("identifier must not be empty")]
    Empty,
    #[error("identifier `{0}` contains whitespace, a control character or `#`")]
    BadCharacter(String),
    #[error("event name `{0}` ends with a reserved attack suffix (+, -, !)")]
    ReservedSuffix(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("event `{0}` is referenced but not declared")]
    Undeclared(EventId),
    #[error("controllable event `{0}` must be observable")]
    UnobservableControllable(EventId),
    #[error("insertable event `{0}` must be observable")]
    UnobservableInsert(EventId),
    #[error("erasable event `{0}` must be observable")]
    UnobservableErase(EventId),
    #[error("attacker-enabled event `{0}` must be controllable")]
    UncontrollableEnable(EventId),
}

/// The event alphabet `E` with its partitions.
///
/// Invariants checked on construction: `E_c ⊆ E_o`, `E_ins ⊆ E_o`,
/// `E_era ⊆ E_o` and `E_ena ⊆ E_c`. The three compromised sets may overlap.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventUniverse {
    events: BTreeSet<EventId>,
    observable: BTreeSet<EventId>,
    controllable: BTreeSet<EventId>,
    insertable: BTreeSet<EventId>,
    erasable: BTreeSet<EventId>,
    enableable: BTreeSet<EventId>,
}

impl EventUniverse {
    pub fn new(
        events: impl IntoIterator<Item = EventId>,
        observable: impl IntoIterator<Item = EventId>,
        controllable: impl IntoIterator<Item = EventId>,
    ) -> Result<Self, UniverseError> {
        let universe = EventUniverse {
            events: events.into_iter().collect(),
            observable: observable.into_iter().collect(),
            controllable: controllable.into_iter().collect(),
            ..Default::default()
        };
        universe.check()?;
        Ok(universe)
    }

    /// Replaces the compromised sets `E_ins`, `E_era` and `E_ena`.
    pub fn with_compromised(
        mut self,
        insertable: impl IntoIterator<Item = EventId>,
        erasable: impl IntoIterator<Item = EventId>,
        enableable: impl IntoIterator<Item = EventId>,
    ) -> Result<Self, UniverseError> {
        self.insertable = insertable.into_iter().collect();
        self.erasable = erasable.into_iter().collect();
        self.enableable = enableable.into_iter().collect();
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), UniverseError> {
        for e in self
            .observable
            .iter()
            .chain(&self.controllable)
            .chain(&self.insertable)
            .chain(&self.erasable)
            .chain(&self.enableable)
        {
            if !self.events.contains(e) {
                return Err(UniverseError::Undeclared(e.clone()));
            }
        }
        if let Some(e) = self.controllable.difference(&self.observable).next() {
            return Err(UniverseError::UnobservableControllable(e.clone()));
        }
        if let Some(e) = self.insertable.difference(&self.observable).next() {
            return Err(UniverseError::UnobservableInsert(e.clone()));
        }
        if let Some(e) = self.erasable.difference(&self.observable).next() {
            return Err(UniverseError::UnobservableErase(e.clone()));
        }
        if let Some(e) = self.enableable.difference(&self.controllable).next() {
            return Err(UniverseError::UncontrollableEnable(e.clone()));
        }
        Ok(())
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn observable(&self) -> &BTreeSet<EventId> {
        &self.observable
    }

    pub fn unobservable(&self) -> BTreeSet<EventId> {
        self.events.difference(&self.observable).cloned().collect()
    }

    pub fn controllable(&self) -> &BTreeSet<EventId> {
        &self.controllable
    }

    pub fn uncontrollable(&self) -> BTreeSet<EventId> {
        self.events.difference(&self.controllable).cloned().collect()
    }

    pub fn insertable(&self) -> &BTreeSet<EventId> {
        &self.insertable
    }

    pub fn erasable(&self) -> &BTreeSet<EventId> {
        &self.erasable
    }

    pub fn enableable(&self) -> &BTreeSet<EventId> {
        &self.enableable
    }

    /// `E_com = E_ins ∪ E_era ∪ E_ena`.
    pub fn compromised(&self) -> BTreeSet<EventId> {
        self.insertable.iter().chain(&self.erasable).chain(&self.enableable).cloned().collect()
    }

    pub fn contains(&self, e: &EventId) -> bool {
        self.events.contains(e)
    }

    pub fn is_observable(&self, e: &EventId) -> bool {
        self.observable.contains(e)
    }

    pub fn is_controllable(&self, e: &EventId) -> bool {
        self.controllable.contains(e)
    }

    pub fn lookup(&self, name: &str) -> Option<&EventId> {
        self.events.iter().find(|e| e.as_str() == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> EventId {
        EventId::new(s).unwrap()
    }

    #[test]
    fn rejects_reserved_suffix_and_whitespace() {
        assert!(matches!(EventId::new("a+"), Err(IdError::ReservedSuffix(_))));
        assert!(matches!(EventId::new("a b"), Err(IdError::BadCharacter(_))));
        assert_eq!(EventId::new(""), Err(IdError::Empty));
        assert!(StateId::new("y_0").is_ok());
    }

    #[test]
    fn set_inclusions_are_enforced() {
        let all = [ev("a"), ev("d")];
        let err = EventUniverse::new(all.clone(), [ev("a")], [ev("d")]).unwrap_err();
        assert_eq!(err, UniverseError::UnobservableControllable(ev("d")));

        let u = EventUniverse::new(all.clone(), [ev("a")], [ev("a")]).unwrap();
        let err = u.clone().with_compromised([], [ev("d")], []).unwrap_err();
        assert_eq!(err, UniverseError::UnobservableErase(ev("d")));
        let err = u.clone().with_compromised([ev("d")], [], []).unwrap_err();
        assert_eq!(err, UniverseError::UnobservableInsert(ev("d")));

        let u2 = EventUniverse::new(all, [ev("a"), ev("d")], [ev("a")]).unwrap();
        let err = u2.with_compromised([], [], [ev("d")]).unwrap_err();
        assert_eq!(err, UniverseError::UncontrollableEnable(ev("d")));

        let err = u.with_compromised([ev("z")], [], []).unwrap_err();
        assert_eq!(err, UniverseError::Undeclared(ev("z")));
    }

    #[test]
    fn compromised_sets_may_overlap() {
        let u = EventUniverse::new([ev("b")], [ev("b")], [ev("b")])
            .unwrap()
            .with_compromised([ev("b")], [ev("b")], [ev("b")])
            .unwrap();
        assert_eq!(u.compromised().len(), 1);
        assert!(u.unobservable().is_empty());
        assert!(u.uncontrollable().is_empty());
    }
}
