//! Expected values for the reference model, derived by hand from its
//! transition lists and frozen here.

use std::collections::BTreeSet;

use desattack_core::*;
use desattack_testkit::{est, ev, f1, label, node, st};

fn edge_set<S: std::fmt::Display + Ord + Clone, L: std::fmt::Display + Ord + Clone>(
    aut: &Automaton<S, L>,
) -> BTreeSet<(String, String, String)> {
    aut.transitions().map(|(s, l, t)| (s.to_string(), l.to_string(), t.to_string())).collect()
}

fn expected(edges: &[(&str, &str, &str)]) -> BTreeSet<(String, String, String)> {
    edges.iter().map(|(s, l, t)| (s.to_string(), l.to_string(), t.to_string())).collect()
}

fn nodes(texts: &[&str]) -> BTreeSet<AttackNode> {
    texts.iter().map(|t| node(t)).collect()
}

#[test]
fn active_events_and_extended_reach() {
    let m = f1();
    assert_eq!(m.plant.active_events(&st("0")).unwrap(), BTreeSet::from([ev("a")]));
    assert_eq!(m.plant.active_events(&st("1")).unwrap(), BTreeSet::from([ev("g"), ev("d")]));
    assert!(m.plant.active_events(&st("3")).unwrap().is_empty());
    assert_eq!(m.plant.extended_reach(&st("0"), &[]).unwrap(), Some(&st("0")));
    assert_eq!(m.plant.extended_reach(&st("0"), &[ev("a"), ev("g"), ev("b")]).unwrap(), Some(&st("3")));
    assert_eq!(m.plant.extended_reach(&st("0"), &[ev("b")]).unwrap(), None);
}

#[test]
fn language_enumeration() {
    let m = f1();
    assert_eq!(m.plant.enumerate_language(1), BTreeSet::from([vec![], vec![ev("a")]]));
    assert_eq!(m.plant.enumerate_language(0), BTreeSet::from([vec![]]));
    let closed = parallel_compose(&m.plant, m.supervisor.as_ref().unwrap());
    assert_eq!(
        closed.enumerate_language(3),
        BTreeSet::from([vec![], vec![ev("a")], vec![ev("a"), ev("g")], vec![ev("a"), ev("d")]])
    );
}

#[test]
fn attacker_observer_edges() {
    let m = f1();
    let att = build_attacker_observer(&m.plant, &m.universe);
    assert_eq!(att.num_states(), 4);
    assert_eq!(
        edge_set(&att),
        expected(&[
            ("{0}", "a", "{1,2}"),
            ("{0}", "a+", "{0}"),
            ("{1,2}", "g", "{2}"),
            ("{1,2}", "g-", "{2}"),
            ("{1,2}", "b", "{3}"),
            ("{1,2}", "b-", "{3}"),
            ("{1,2}", "b!", "{3}"),
            ("{1,2}", "a+", "{1,2}"),
            ("{2}", "b", "{3}"),
            ("{2}", "b-", "{3}"),
            ("{2}", "b!", "{3}"),
            ("{2}", "a+", "{2}"),
            ("{3}", "a+", "{3}"),
        ])
    );
}

#[test]
fn consistent_pairs_and_disabled_sets() {
    let m = f1();
    let sup = m.supervisor.as_ref().unwrap();
    let obs = build_observer(&m.plant, &m.universe);
    let pairs = consistent_pairs(&obs, sup, &m.universe);
    let got: BTreeSet<(String, String)> = pairs.iter().map(|(b, y, _)| (b.to_string(), y.to_string())).collect();
    let want: BTreeSet<(String, String)> =
        [("{0}", "y0"), ("{1,2}", "y1"), ("{2}", "y2")].iter().map(|(b, y)| (b.to_string(), y.to_string())).collect();
    assert_eq!(got, want);
    assert_eq!(pairs.disabled_active(&est(&["1", "2"]), &st("y1")), Some(&BTreeSet::from([ev("b")])));
    assert_eq!(pairs.disabled_active(&est(&["2"]), &st("y2")), Some(&BTreeSet::from([ev("b")])));
    assert_eq!(pairs.disabled_active(&est(&["0"]), &st("y0")), Some(&BTreeSet::new()));
}

#[test]
fn permissive_supervisor_has_no_disabled_events() {
    let m = f1();
    let obs = build_observer(&m.plant, &m.universe);
    // The observer itself, renamed and with unobservable self-loops, is the
    // most permissive supervisor.
    let mut sup = Plant::new(st("q0"), m.universe.events().iter().cloned());
    let name = |b: &EstimationState| st(&format!("q{}", obs.index_of(b).unwrap()));
    for b in obs.states() {
        sup.add_transition(name(b), ev("d"), name(b)).unwrap();
    }
    for (b, e, n) in obs.transitions() {
        sup.add_transition(name(b), e.clone(), name(n)).unwrap();
    }
    let pairs = consistent_pairs(&obs, &sup, &m.universe);
    assert_eq!(pairs.len(), obs.num_states());
    assert!(pairs.iter().all(|(_, _, d)| d.is_empty()));
}

#[test]
fn supervisor_under_attack_edges() {
    let m = f1();
    let sa = build_supervisor_under_attack(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe).unwrap();
    assert_eq!(sa.num_states(), 4);
    assert_eq!(
        edge_set(&sa),
        expected(&[
            ("y0", "a", "y1"),
            ("y0", "a+", "y1"),
            ("y0", "g", "y_∅"),
            ("y0", "g-", "y0"),
            ("y0", "b", "y_∅"),
            ("y0", "b-", "y0"),
            ("y1", "g", "y2"),
            ("y1", "g-", "y1"),
            ("y1", "b!", "y_∅"),
            ("y1", "b-", "y1"),
            ("y1", "a", "y_∅"),
            ("y1", "a+", "y_∅"),
            ("y2", "b!", "y_∅"),
            ("y2", "b-", "y2"),
            ("y2", "a", "y_∅"),
            ("y2", "a+", "y_∅"),
            ("y2", "g", "y_∅"),
            ("y2", "g-", "y2"),
        ])
    );
    assert!(sa.outgoing(&SupState::Dummy).unwrap().next().is_none());
}

#[test]
fn supervisor_with_moving_unobservable_is_rejected() {
    let m = f1();
    let mut sup = m.supervisor.clone().unwrap();
    sup.add_transition(st("y2"), ev("a"), st("y3")).unwrap();
    sup.add_transition(st("y3"), ev("d"), st("y0")).unwrap();
    let err = build_supervisor_under_attack(&m.plant, &sup, &m.universe).unwrap_err();
    assert!(matches!(err, RealizationError::UnobservableMove { .. }));
}

const F1_A_EDGES: &[(&str, &str, &str)] = &[
    ("({0},y0)", "a", "({1,2},y1)"),
    ("({0},y0)", "a+", "({0},y1)"),
    ("({1,2},y1)", "g", "({2},y2)"),
    ("({1,2},y1)", "g-", "({2},y1)"),
    ("({1,2},y1)", "b-", "({3},y1)"),
    ("({1,2},y1)", "b!", "({3},y_∅)"),
    ("({1,2},y1)", "a+", "({1,2},y_∅)"),
    ("({0},y1)", "a", "({1,2},y_∅)"),
    ("({0},y1)", "a+", "({0},y_∅)"),
    ("({2},y2)", "b-", "({3},y2)"),
    ("({2},y2)", "b!", "({3},y_∅)"),
    ("({2},y2)", "a+", "({2},y_∅)"),
    ("({2},y1)", "b-", "({3},y1)"),
    ("({2},y1)", "b!", "({3},y_∅)"),
    ("({2},y1)", "a+", "({2},y_∅)"),
    ("({3},y1)", "a+", "({3},y_∅)"),
    ("({3},y2)", "a+", "({3},y_∅)"),
];

#[test]
fn attack_structure_of_f1() {
    let m = f1();
    let a = build_attack_structure(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe, &m.unsafe_states).unwrap();
    assert_eq!(a.num_nodes(), 11);
    assert_eq!(a.initial(), Some(&node("({0},y0)")));
    assert_eq!(edge_set(a.graph().unwrap()), expected(F1_A_EDGES));
    assert_eq!(a.target_states(), &nodes(&["({3},y1)", "({3},y2)", "({3},y_∅)"]));
    assert_eq!(a.exposing_states(), &nodes(&["({3},y_∅)", "({1,2},y_∅)", "({2},y_∅)", "({0},y_∅)"]));
    assert!(a.weakly_exposing().is_empty());
}

#[test]
fn weakly_exposing_region_and_supremal_of_f1() {
    let m = f1();
    let a = build_attack_structure(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe, &m.unsafe_states).unwrap();
    let region = a.weakly_exposing_region();
    let mut want = a.exposing_states().clone();
    want.insert(node("({0},y1)"));
    assert_eq!(region, want);

    let ss = a.with_weakly_exposing().supremal_substructure();
    assert_eq!(
        ss.nodes().cloned().collect::<BTreeSet<_>>(),
        nodes(&["({0},y0)", "({1,2},y1)", "({2},y2)", "({2},y1)", "({3},y1)", "({3},y2)"])
    );
    assert!(ss.exposing_states().is_empty());
    assert_eq!(ss.target_states(), &nodes(&["({3},y1)", "({3},y2)"]));
    let g = ss.graph().unwrap();
    assert_eq!(g.successor(&node("({2},y2)"), &label("b-")), Some(&node("({3},y2)")));
    assert_eq!(g.successor(&node("({2},y2)"), &label("b!")), None);
}

#[test]
fn verdict_of_f1() {
    let m = f1();
    let v = analyze(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe, &m.unsafe_states).unwrap();
    assert!(v.effective);
    assert!(v.stealthy_effective);
    assert!(!v.robust);
    assert_eq!(v.witness.unwrap().to_string(), "a b-");
}

#[test]
fn replay_examples() {
    let m = f1();
    let t = replay(&m, &AttackWord::parse("a b-").unwrap()).unwrap();
    assert_eq!(t.steps.len(), 2);
    let last = t.steps.last().unwrap();
    assert_eq!(last.node, node("({3},y1)"));
    assert!(last.target && !last.exposing);
    assert_eq!(t.steps[0].control.as_ref().unwrap().enabled(), &BTreeSet::from([ev("a"), ev("d")]));

    let empty = replay(&m, &AttackWord::default()).unwrap();
    assert!(empty.steps.is_empty());
    assert_eq!(empty.start, node("({0},y0)"));

    match replay(&m, &AttackWord::parse("b").unwrap()) {
        Err(ReplayError::Rejected { position, available, .. }) => {
            assert_eq!(position, 1);
            assert_eq!(available, vec![label("a"), label("a+")]);
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn replay_reports_corrupted_control_input() {
    let m = f1();
    let t = replay(&m, &AttackWord::parse("a g b!").unwrap()).unwrap();
    let step = &t.steps[2];
    assert_eq!(step.node, node("({3},y_∅)"));
    assert!(step.exposing && step.target);
    assert_eq!(step.control.as_ref().unwrap().enabled(), &BTreeSet::from([ev("d")]));
    assert_eq!(step.corrupted.as_ref().unwrap().enabled(), &BTreeSet::from([ev("b"), ev("d")]));
}

#[test]
fn dot_colors_follow_precedence() {
    let m = f1();
    let a = build_attack_structure(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe, &m.unsafe_states)
        .unwrap()
        .with_weakly_exposing();
    let dot = export_attack_structure_dot(&a);
    let line_of = |n: &str| {
        dot.lines().find(|l| l.contains(&format!("label=\"{n}\""))).unwrap_or_else(|| panic!("no node {n}")).to_owned()
    };
    assert!(line_of("({3},y_∅)").contains("fillcolor=gray"));
    assert!(line_of("({0},y1)").contains("fillcolor=yellow"));
    assert!(line_of("({3},y1)").contains("fillcolor=green"));
    assert!(line_of("({0},y0)").contains("fillcolor=white"));

    let plain = export_dot(&build_observer(&m.plant, &m.universe));
    assert!(!plain.contains("fillcolor"));
}

#[test]
fn unsafe_outside_plant_is_rejected() {
    let m = f1();
    let err = build_attack_structure(&m.plant, m.supervisor.as_ref().unwrap(), &m.universe, &BTreeSet::from([st("9")]))
        .unwrap_err();
    assert_eq!(err, AnalysisError::UnknownUnsafe(st("9")));
}

#[test]
fn supremal_passes_bounded_stealth_check() {
    let m = f1();
    let sup = m.supervisor.as_ref().unwrap();
    let analysis = analyze_full(&m.plant, sup, &m.universe, &m.unsafe_states).unwrap();
    assert_eq!(stealth_counterexample(&analysis.supremal, &m.plant, sup, &m.universe, 8), None);
    // The unpruned structure is not stealthy: `a a` is never observed.
    let w = stealth_counterexample(&analysis.structure, &m.plant, sup, &m.universe, 8).unwrap();
    assert_eq!(w.to_string(), "a a+");
}
