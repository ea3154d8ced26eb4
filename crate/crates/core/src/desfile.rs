//! The line-oriented model file format.
//!
//! ```text
//! [events]            # NAME o|uo c|uc
//! a o c
//! d uo uc
//! [compromised]
//! ins: a
//! era: a
//! ena: a
//! [plant]
//! initial: 0
//! unsafe: 1
//! 0 a 1
//! 0 d 0
//! [supervisor]        # optional; unobservable events must self-loop
//! initial: y0
//! y0 a y1
//! y0 d y0
//! ```
//!
//! `#` starts a comment. Sections may appear in any order; the serializer
//! writes them in the order above with events, states and transitions
//! sorted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::AttackWord;
use crate::automaton::{Automaton, AutomatonError};
use crate::event::{EventId, EventUniverse, IdError, StateId, UniverseError};
use crate::observer::Plant;
use crate::supervisor::{check_realization, RealizationError};

/// A parsed model: universe, plant, optional supervisor and unsafe states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub universe: EventUniverse,
    pub plant: Plant,
    pub supervisor: Option<Plant>,
    pub unsafe_states: BTreeSet<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown section `[{0}]`")]
    UnknownSection(String),
    #[error("section `[{0}]` appears twice")]
    DuplicateSection(String),
    #[error("content outside of any section")]
    OutsideSection,
    #[error("event `{0}` declared twice")]
    DuplicateEvent(String),
    #[error("undeclared event `{0}`")]
    UndeclaredEvent(String),
    #[error("`{0}` given twice")]
    DuplicateKey(String),
    #[error("missing `[{0}]` section")]
    MissingSection(&'static str),
    #[error("missing `initial:` line in `[{0}]`")]
    MissingInitial(&'static str),
    #[error(transparent)]
    Id(#[from] IdError),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based line number, when the problem is tied to a line.
    pub line: Option<usize>,
    pub kind: ParseErrorKind,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

fn at(line: usize) -> impl Fn(ParseErrorKind) -> ParseError {
    move |kind| ParseError { line: Some(line), kind }
}

fn err<T>(line: usize, kind: impl Into<ParseErrorKind>) -> Result<T, ParseError> {
    Err(at(line)(kind.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Events,
    Compromised,
    Plant,
    Supervisor,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Events => "events",
            Section::Compromised => "compromised",
            Section::Plant => "plant",
            Section::Supervisor => "supervisor",
        }
    }
}

#[derive(Default)]
struct RawAutomaton {
    initial: Option<(usize, String)>,
    unsafe_states: Option<(usize, Vec<String>)>,
    transitions: Vec<(usize, String, String, String)>,
}

struct EventDecl {
    line: usize,
    name: String,
    observable: bool,
    controllable: bool,
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut section: Option<Section> = None;
    let mut seen: BTreeMap<Section, usize> = BTreeMap::new();
    let mut decls: Vec<EventDecl> = Vec::new();
    let mut compromised: BTreeMap<&'static str, (usize, Vec<String>)> = BTreeMap::new();
    let mut plant = RawAutomaton::default();
    let mut sup = RawAutomaton::default();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(line, ParseErrorKind::Syntax("unterminated section header".into()));
            };
            let s = match name.trim() {
                "events" => Section::Events,
                "compromised" => Section::Compromised,
                "plant" => Section::Plant,
                "supervisor" => Section::Supervisor,
                other => return err(line, ParseErrorKind::UnknownSection(other.to_owned())),
            };
            if seen.insert(s, line).is_some() {
                return err(line, ParseErrorKind::DuplicateSection(s.name().to_owned()));
            }
            section = Some(s);
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match section {
            None => return err(line, ParseErrorKind::OutsideSection),
            Some(Section::Events) => decls.push(parse_event_decl(line, &tokens)?),
            Some(Section::Compromised) => {
                let (key, values) = split_key(line, content)?;
                let key = match key {
                    "ins" => "ins",
                    "era" => "era",
                    "ena" => "ena",
                    other => {
                        return err(
                            line,
                            ParseErrorKind::Syntax(format!("expected `ins:`, `era:` or `ena:`, found `{other}:`")),
                        )
                    }
                };
                if compromised.insert(key, (line, values)).is_some() {
                    return err(line, ParseErrorKind::DuplicateKey(format!("{key}:")));
                }
            }
            Some(s @ (Section::Plant | Section::Supervisor)) => {
                let raw_aut = if s == Section::Plant { &mut plant } else { &mut sup };
                if content.contains(':') {
                    let (key, values) = split_key(line, content)?;
                    match (key, values.as_slice()) {
                        ("initial", [x]) => {
                            if raw_aut.initial.is_some() {
                                return err(line, ParseErrorKind::DuplicateKey("initial:".into()));
                            }
                            raw_aut.initial = Some((line, x.clone()));
                        }
                        ("initial", _) => {
                            return err(line, ParseErrorKind::Syntax("`initial:` takes exactly one state".into()))
                        }
                        ("unsafe", _) if s == Section::Plant => {
                            if raw_aut.unsafe_states.is_some() {
                                return err(line, ParseErrorKind::DuplicateKey("unsafe:".into()));
                            }
                            raw_aut.unsafe_states = Some((line, values));
                        }
                        (other, _) => return err(line, ParseErrorKind::Syntax(format!("unexpected key `{other}:`"))),
                    }
                } else if let [src, e, dst] = tokens.as_slice() {
                    raw_aut.transitions.push((line, src.to_string(), e.to_string(), dst.to_string()));
                } else {
                    return err(line, ParseErrorKind::Syntax("expected a transition `SOURCE EVENT TARGET`".into()));
                }
            }
        }
    }

    // Universe.
    let mut names: BTreeMap<String, EventId> = BTreeMap::new();
    for d in &decls {
        let id = EventId::new(d.name.as_str()).map_err(|e| at(d.line)(e.into()))?;
        if names.insert(d.name.clone(), id).is_some() {
            return err(d.line, ParseErrorKind::DuplicateEvent(d.name.clone()));
        }
    }
    let lookup = |line: usize, name: &str| -> Result<EventId, ParseError> {
        names.get(name).cloned().ok_or_else(|| at(line)(ParseErrorKind::UndeclaredEvent(name.to_owned())))
    };
    for d in &decls {
        if d.controllable && !d.observable {
            let e = names[&d.name].clone();
            return err(d.line, UniverseError::UnobservableControllable(e));
        }
    }
    let pick = |f: fn(&EventDecl) -> bool| decls.iter().filter(move |d| f(d)).map(|d| names[&d.name].clone());
    let base = EventUniverse::new(names.values().cloned(), pick(|d| d.observable), pick(|d| d.controllable))
        .map_err(|e| ParseError { line: None, kind: e.into() })?;
    let mut sets: BTreeMap<&str, (usize, BTreeSet<EventId>)> = BTreeMap::new();
    for (key, (line, values)) in &compromised {
        let set = values.iter().map(|v| lookup(*line, v)).collect::<Result<BTreeSet<_>, _>>()?;
        sets.insert(key, (*line, set));
    }
    let get = |k: &str| sets.get(k).map(|(_, s)| s.clone()).unwrap_or_default();
    let universe = base.with_compromised(get("ins"), get("era"), get("ena")).map_err(|e| {
        let line = match &e {
            UniverseError::UnobservableInsert(_) => sets.get("ins").map(|(l, _)| *l),
            UniverseError::UnobservableErase(_) => sets.get("era").map(|(l, _)| *l),
            UniverseError::UncontrollableEnable(_) => sets.get("ena").map(|(l, _)| *l),
            _ => None,
        };
        ParseError { line, kind: e.into() }
    })?;

    // Automata.
    if !seen.contains_key(&Section::Plant) {
        return Err(ParseError { line: None, kind: ParseErrorKind::MissingSection("plant") });
    }
    let plant_header = seen[&Section::Plant];
    let plant_aut = build_raw(&plant, &universe, &lookup, "plant", plant_header)?;
    let mut unsafe_states = BTreeSet::new();
    let mut plant_aut = plant_aut;
    if let Some((line, xs)) = &plant.unsafe_states {
        for x in xs {
            let id = StateId::new(x.as_str()).map_err(|e| at(*line)(e.into()))?;
            plant_aut.add_state(id.clone());
            unsafe_states.insert(id);
        }
    }
    let supervisor = match seen.get(&Section::Supervisor) {
        None => None,
        Some(&header) => {
            let s = build_raw(&sup, &universe, &lookup, "supervisor", header)?;
            if let Err(e) = check_realization(&s, &universe) {
                let line = match &e {
                    RealizationError::UnobservableMove { from, event, target } => sup
                        .transitions
                        .iter()
                        .find(|(_, a, b, c)| a == from.as_str() && b == event.as_str() && c == target.as_str())
                        .map(|t| t.0),
                    RealizationError::UndeclaredEvent(_) => None,
                };
                return Err(ParseError { line, kind: e.into() });
            }
            Some(s)
        }
    };
    Ok(ModelFile { universe, plant: plant_aut, supervisor, unsafe_states })
}

fn parse_event_decl(line: usize, tokens: &[&str]) -> Result<EventDecl, ParseError> {
    let Some((name, flags)) = tokens.split_first() else {
        return err(line, ParseErrorKind::Syntax("empty event declaration".into()));
    };
    let mut observable = None;
    let mut controllable = None;
    for flag in flags {
        let (slot, value) = match *flag {
            "o" => (&mut observable, true),
            "uo" => (&mut observable, false),
            "c" => (&mut controllable, true),
            "uc" => (&mut controllable, false),
            other => return err(line, ParseErrorKind::Syntax(format!("unknown event flag `{other}`"))),
        };
        if slot.replace(value).is_some() {
            return err(line, ParseErrorKind::Syntax(format!("conflicting flags for event `{name}`")));
        }
    }
    match (observable, controllable) {
        (Some(observable), Some(controllable)) => {
            Ok(EventDecl { line, name: name.to_string(), observable, controllable })
        }
        _ => err(line, ParseErrorKind::Syntax(format!("event `{name}` needs one of o|uo and one of c|uc"))),
    }
}

fn split_key(line: usize, content: &str) -> Result<(&str, Vec<String>), ParseError> {
    let Some((key, rest)) = content.split_once(':') else {
        return err(line, ParseErrorKind::Syntax("expected `key: values`".into()));
    };
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return err(line, ParseErrorKind::Syntax("malformed key".into()));
    }
    Ok((key, rest.split_whitespace().map(str::to_owned).collect()))
}

fn build_raw(
    raw: &RawAutomaton,
    universe: &EventUniverse,
    lookup: &impl Fn(usize, &str) -> Result<EventId, ParseError>,
    section: &'static str,
    header: usize,
) -> Result<Plant, ParseError> {
    let Some((line, initial)) = &raw.initial else {
        return err(header, ParseErrorKind::MissingInitial(section));
    };
    let initial = StateId::new(initial.as_str()).map_err(|e| at(*line)(e.into()))?;
    let mut aut = Plant::new(initial, universe.events().iter().cloned());
    for (line, src, e, dst) in &raw.transitions {
        let src = StateId::new(src.as_str()).map_err(|e| at(*line)(e.into()))?;
        let dst = StateId::new(dst.as_str()).map_err(|e| at(*line)(e.into()))?;
        let e = lookup(*line, e)?;
        aut.add_transition(src, e, dst).map_err(|e| at(*line)(e.into()))?;
    }
    Ok(aut)
}

/// Writes the canonical form of `m`.
pub fn serialize_model(m: &ModelFile) -> String {
    let mut out = String::new();
    let u = &m.universe;
    out.push_str("[events]\n");
    for e in u.events() {
        let o = if u.is_observable(e) { "o" } else { "uo" };
        let c = if u.is_controllable(e) { "c" } else { "uc" };
        writeln!(out, "{e} {o} {c}").unwrap();
    }
    out.push_str("\n[compromised]\n");
    for (key, set) in [("ins", u.insertable()), ("era", u.erasable()), ("ena", u.enableable())] {
        write_list(&mut out, key, set.iter().map(EventId::as_str));
    }
    out.push_str("\n[plant]\n");
    writeln!(out, "initial: {}", m.plant.initial()).unwrap();
    if !m.unsafe_states.is_empty() {
        write_list(&mut out, "unsafe", m.unsafe_states.iter().map(StateId::as_str));
    }
    write_transitions(&mut out, &m.plant);
    if let Some(sup) = &m.supervisor {
        out.push_str("\n[supervisor]\n");
        writeln!(out, "initial: {}", sup.initial()).unwrap();
        write_transitions(&mut out, sup);
    }
    out
}

fn write_list<'a>(out: &mut String, key: &str, items: impl Iterator<Item = &'a str>) {
    out.push_str(key);
    out.push(':');
    for item in items {
        out.push(' ');
        out.push_str(item);
    }
    out.push('\n');
}

fn write_transitions(out: &mut String, aut: &Plant) {
    let mut edges: Vec<(&str, &str, &str)> =
        aut.transitions().map(|(s, e, t)| (s.as_str(), e.as_str(), t.as_str())).collect();
    edges.sort_unstable();
    for (s, e, t) in edges {
        writeln!(out, "{s} {e} {t}").unwrap();
    }
}

impl ModelFile {
    /// Structural equality: same universe, unsafe set, and automata with
    /// the same initial state, state set and transition set.
    pub fn same_structure(&self, other: &ModelFile) -> bool {
        fn same(a: &Plant, b: &Plant) -> bool {
            a.initial() == b.initial()
                && a.alphabet() == b.alphabet()
                && a.states().collect::<BTreeSet<_>>() == b.states().collect::<BTreeSet<_>>()
                && a.transitions().collect::<BTreeSet<_>>() == b.transitions().collect::<BTreeSet<_>>()
        }
        self.universe == other.universe
            && self.unsafe_states == other.unsafe_states
            && same(&self.plant, &other.plant)
            && match (&self.supervisor, &other.supervisor) {
                (Some(a), Some(b)) => same(a, b),
                (None, None) => true,
                _ => false,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed attack label: {0}")]
    Malformed(#[from] IdError),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
}

/// Parses a whitespace-separated attack word, checking every event is
/// declared in `universe`.
pub fn parse_attack_word(text: &str, universe: &EventUniverse) -> Result<AttackWord, WordError> {
    let w = AttackWord::parse(text)?;
    if let Some(l) = w.labels().iter().find(|l| !universe.contains(&l.event)) {
        return Err(WordError::UnknownEvent(l.event.to_string()));
    }
    Ok(w)
}

/// Empty automaton helper used by tests and callers building models by hand.
pub fn plant_over(universe: &EventUniverse, initial: StateId) -> Plant {
    Automaton::new(initial, universe.events().iter().cloned())
}
