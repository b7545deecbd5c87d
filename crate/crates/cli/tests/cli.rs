//! End-to-end runs of the binary.

mod common;

use common::{fixture, fixture_args, run, FIXTURE_COMMANDS};

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_the_endogenous_solution() {
    let o = run(&["solve", &fixture("example1.scm.txt"), "M", "--context", "U_C=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "C=1 E=2\n");
}

#[test]
fn query_evaluates_an_intervention() {
    let o = run(&["query", &fixture("example1.scm.txt"), "M", "[C<-0] E=0", "--context", "U_C=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
    let o = run(&["query", &fixture("example1.scm.txt"), "M", "[C<-0] E=2", "--context", "U_C=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn usage_errors_exit_with_two() {
    let ex1 = fixture("example1.scm.txt");
    for args in [
        vec!["solve", ex1.as_str(), "M"],
        vec!["solve", ex1.as_str(), "Nope", "--context", "U_C=1"],
        vec!["solve", ex1.as_str(), "M", "--context", "U_X=1"],
        vec!["relation", "potential-joint-parents", ex1.as_str(), "M", "C=1 vs C=1", "E=2 vs E=0"],
        vec!["relation", "parent", ex1.as_str(), "M", "C", "Q"],
        vec!["validate", "/nonexistent/file.scm.txt"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn two_step_network_in_the_extension() {
    let o = run(&[
        "relation",
        "potential-joint-ancestors",
        &fixture("example1.scm.txt"),
        "Mprime",
        "C=1 vs C=0",
        "E=2 vs E=0",
        "--witness",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("true\nnetwork: "), "{out}");
    assert_eq!(out.matches(" ~> ").count(), 2 + 2, "{out}");
}

#[test]
fn relation_verdicts_set_the_exit_code() {
    let o = run(&["relation", "sufficient", &fixture("example_cons.scm.txt"), "Mprime", "A=1", "E=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
    let o = run(&["relation", "sufficient", &fixture("example_cons.scm.txt"), "M", "A=1", "E=1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["relation", "parent", &fixture("example4.scm.txt"), "M", "A", "E"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn equivalence_verdicts() {
    let cases = [
        ("example1.scm.txt", "causal", 0),
        ("example_cons.scm.txt", "conservative", 0),
        ("example_cons.scm.txt", "functional", 1),
        ("example_final.scm.txt", "functional", 0),
        ("example_final.scm.txt", "structural", 1),
    ];
    for (file, kind, code) in cases {
        let o = run(&["equiv", kind, &fixture(file), "M", "Mprime"]);
        assert_eq!(o.status.code(), Some(code), "{file} {kind}: {}", stdout(&o));
    }
}

#[test]
fn functional_counterexample_as_json() {
    let o = run(&["equiv", "functional", &fixture("example_struc.scm.txt"), "M", "Mprime", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], false);
    assert_eq!(v["kind"], "functional");
    let cx = &v["counterexample"];
    assert_eq!(cx["relation"], "sufficiency");
    assert_eq!(cx["holds_in"], "base");
    assert!(cx["antecedent"].is_object() && cx["consequent"].is_object(), "{cx}");
}

#[test]
fn reversed_models_are_swapped_with_a_note() {
    let o = run(&["equiv", "causal", &fixture("example1.scm.txt"), "Mprime", "M"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).starts_with("note: "), "{}", stderr(&o));
}

#[test]
fn evaluation_guard_from_the_environment() {
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_causalq"))
        .args(["equiv", "structural", &fixture("example_struc.scm.txt"), "M", "Mprime"])
        .env("CAUSALQ_MAX_EVALS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn fixture_commands_exit_cleanly_and_json_parses() {
    for cmd in FIXTURE_COMMANDS {
        let text = run(&fixture_args(cmd, false).iter().map(String::as_str).collect::<Vec<_>>());
        assert!(matches!(text.status.code(), Some(0 | 1)), "{cmd:?}: {}", stderr(&text));
        let json = run(&fixture_args(cmd, true).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(json.status.code(), text.status.code(), "{cmd:?}");
        serde_json::from_slice::<serde_json::Value>(&json.stdout).unwrap_or_else(|e| panic!("{cmd:?}: {e}"));
    }
}

#[test]
fn output_is_deterministic() {
    for cmd in FIXTURE_COMMANDS {
        for json in [false, true] {
            let args = fixture_args(cmd, json);
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let a = run(&args);
            let b = run(&args);
            assert_eq!(a.stdout, b.stdout, "{cmd:?} json={json}");
            assert_eq!(a.stderr, b.stderr, "{cmd:?} json={json}");
        }
    }
}
