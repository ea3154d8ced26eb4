use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_desattack")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_reports_f1_verdict() {
    let o = run(&["verify", &fixture("f1.des")]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("stealthy_effective=true"));
    assert!(out.contains("witness=a b-"));
    assert!(out.contains("stealth-check=ok (words up to 8)"));
}

#[test]
fn verify_honours_max_enum() {
    let o = run(&["--max-enum", "3", "verify", &fixture("safe.des")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("robust=true"));
    assert!(stdout(&o).contains("words up to 3"));
}

#[test]
fn malformed_file_reports_line() {
    let o = run(&["observe", &fixture("malformed.des")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5"));
}

#[test]
fn missing_file_and_usage_errors_exit_one() {
    assert_eq!(run(&["verify", "/nonexistent.des"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["export", &fixture("f1.des"), "--what", "B", "--dot", "-"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn replay_unknown_event_exits_one() {
    let o = run(&["replay", &fixture("f1.des"), "--word", "a x-"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown event `x`"));
}

#[test]
fn replay_prints_each_step() {
    let o = run(&["replay", &fixture("f1.des"), "--word", "a b-"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "start ({0},y0)\n\
         1 a -> ({1,2},y1) control={a,d} corrupted={a,d} target=false exposing=false\n\
         2 b- -> ({3},y1) control={d,g} corrupted={d,g} target=true exposing=false\n"
    );
}

#[test]
fn replay_shows_corrupted_control_input() {
    let o = run(&["replay", &fixture("f1.des"), "--word", "a b!"]);
    let out = stdout(&o);
    assert!(out.contains("2 b! -> ({3},y_∅) control={d,g} corrupted={b,d,g} target=true exposing=true"), "{out}");
}

#[test]
fn replay_rejection_names_position() {
    let o = run(&["replay", &fixture("f1.des"), "--word", "b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("position 1"));
    assert!(stderr(&o).contains("available: a a+"));
}

#[test]
fn empty_word_replays_to_initial_node() {
    let o = run(&["replay", &fixture("f1.des"), "--word", ""]);
    assert_eq!(stdout(&o), "start ({0},y0)\n");
}

#[test]
fn witness_prints_word_or_none() {
    assert_eq!(stdout(&run(&["witness", &fixture("f1.des")])), "a b-\n");
    assert_eq!(stdout(&run(&["witness", &fixture("safe.des")])), "no stealthy effective attack\n");
}

#[test]
fn listings_have_expected_sizes() {
    let obs = stdout(&run(&["observe", &fixture("f1.des")]));
    assert!(obs.starts_with("initial: {0}\nstates: 4\ntransitions: 4\n"), "{obs}");
    let a = stdout(&run(&["attack-structure", &fixture("f1.des")]));
    assert!(a.contains("states: 11\ntransitions: 17\n"));
    assert!(a.contains("weakly-exposing: ({0},y1) ({0},y_∅) ({1,2},y_∅) ({2},y_∅) ({3},y_∅)\n"));
    let ss = stdout(&run(&["supremal", &fixture("f1.des")]));
    assert!(ss.contains("states: 6\n"));
    let sa = stdout(&run(&["sup-attack", &fixture("f1.des")]));
    assert!(sa.contains("y1 b! y_∅\n"));
}

#[test]
fn canonical_listing_is_sorted() {
    let out = stdout(&run(&["--canonical", "attacker-observer", &fixture("f1.des")]));
    let rows: Vec<&str> = out.lines().skip(3).collect();
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
}

#[test]
fn fmt_canonicalizes() {
    let canonical = std::fs::read_to_string(fixture("f1-canonical.des")).unwrap();
    assert_eq!(stdout(&run(&["fmt", &fixture("f1.des")])), canonical);
}

#[test]
fn export_writes_file() {
    let dir = std::env::temp_dir().join(format!("desattack-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ass.dot");
    let o = run(&["export", &fixture("f1.des"), "--what", "Ass", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("digraph automaton {"));
    assert!(text.contains("fillcolor=green"));
    assert!(!text.contains("fillcolor=gray"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn supervisor_required_for_attack_commands() {
    let dir = std::env::temp_dir().join(format!("desattack-nosup-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plant.des");
    std::fs::write(&path, "[events]\na o c\n[plant]\ninitial: 0\n0 a 1\n").unwrap();
    assert_eq!(run(&["observe", path.to_str().unwrap()]).status.code(), Some(0));
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no [supervisor] section"));
    std::fs::remove_dir_all(&dir).unwrap();
}
