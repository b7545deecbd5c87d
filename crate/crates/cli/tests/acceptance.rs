//! Acceptance report: one line per criterion.
//!
//! Sizes and time limits are pinned below. The run fails only on an
//! unexpected failure: a criterion that fails solely on the documented
//! fixture disagreements (see `KNOWN_DISAGREEMENTS`) is reported as FAIL
//! but does not fail the build.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use causalq_testkit::fixtures::{fixture_dir, run as run_fixture, sidecars, KNOWN_DISAGREEMENTS};
use causalq_testkit::suites::{
    conservative_preserves_ancestry, functional_implies_conservative, identical_signature, oracles_agree,
    parent_checks_agree, strength_ordering, SuiteResult,
};
use common::{fixture_args, run, FIXTURE_COMMANDS};

const SEED: u64 = 1;
const FIXTURE_LIMIT: Duration = Duration::from_secs(30);
const PAIRS: usize = 600;
const MIN_PAIRS: usize = 200;
const MIN_PARENT_INSTANCES: usize = 1000;
const PARENT_INSTANCES: usize = 2000;
const ORACLE_MODELS: usize = 600;
const MIN_ORACLE_MODELS: usize = 200;
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const STRENGTH_MODELS: usize = 600;
const SAME_SIGNATURE_PAIRS: usize = 300;
const MIN_SAME_SIGNATURE_PAIRS: usize = 100;
const DETERMINISM_RUNS: usize = 3;

/// The worked examples; `sanity` is an extra.
const EXAMPLE_FIXTURES: &[&str] = &[
    "example1",
    "example2",
    "example4",
    "example_struc",
    "example_final",
    "example_cons",
    "footnote",
];

enum Outcome {
    Pass,
    /// Fails only on documented disagreements.
    KnownFail,
    Fail,
}

struct Line {
    id: u8,
    name: &'static str,
    outcome: Outcome,
    detail: String,
}

fn fixtures() -> Line {
    let start = Instant::now();
    let dir = fixture_dir();
    let mut passed = Vec::new();
    let mut failed = Vec::new();
    let mut unexpected = false;
    for (name, sidecar) in sidecars(&dir) {
        if !EXAMPLE_FIXTURES.contains(&name.as_str()) {
            continue;
        }
        let out = run_fixture(&dir, &name, &sidecar);
        if out.passed() {
            passed.push(name);
        } else {
            unexpected |= out
                .failures()
                .any(|c| !KNOWN_DISAGREEMENTS.contains(&(name.as_str(), c.what.as_str())));
            let what: Vec<&str> = out.failures().map(|c| c.what.as_str()).collect();
            failed.push(format!("{name} ({})", what.join("; ")));
        }
    }
    let elapsed = start.elapsed();
    let all = passed.len() == EXAMPLE_FIXTURES.len();
    let in_time = elapsed < FIXTURE_LIMIT;
    let mut detail = format!(
        "{}/{} fixtures in {:.2?} (limit {:?})",
        passed.len(),
        EXAMPLE_FIXTURES.len(),
        elapsed,
        FIXTURE_LIMIT
    );
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    let outcome = match (all, in_time, unexpected) {
        (true, true, _) => Outcome::Pass,
        (false, true, false) => Outcome::KnownFail,
        _ => Outcome::Fail,
    };
    Line {
        id: 1,
        name: "worked-example fixtures",
        outcome,
        detail,
    }
}

/// `min` bounds the generated cases and the cases exercising the property.
fn suite(id: u8, name: &'static str, r: SuiteResult, min: (usize, usize), limit: Option<Duration>, what: &str) -> Line {
    let in_time = limit.is_none_or(|l| r.elapsed < l);
    let enough = r.generated >= min.0 && r.cases >= min.1;
    let mut detail = format!(
        "{} {what} ({} positive, {} generated), {} failures, {:.2?}",
        r.cases,
        r.positives,
        r.generated,
        r.failures.len(),
        r.elapsed
    );
    if let Some(l) = limit {
        detail.push_str(&format!(" (limit {l:?})"));
    }
    if !enough {
        detail.push_str(&format!("; needs {} generated and {} exercised", min.0, min.1));
    }
    if let Some(first) = r.failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Line {
        id,
        name,
        outcome: if r.passed() && enough && in_time {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        detail,
    }
}

fn determinism() -> Line {
    let mut mismatches = Vec::new();
    for cmd in FIXTURE_COMMANDS {
        for json in [false, true] {
            let args = fixture_args(cmd, json);
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let first = run(&args);
            for _ in 1..DETERMINISM_RUNS {
                let again = run(&args);
                if again.stdout != first.stdout || again.stderr != first.stderr || again.status != first.status {
                    mismatches.push(format!("{} {}{}", cmd.0, cmd.1, if json { " --json" } else { "" }));
                }
            }
        }
    }
    Line {
        id: 8,
        name: "deterministic output",
        outcome: if mismatches.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        detail: format!(
            "{} commands x text/json x {DETERMINISM_RUNS} runs, {} mismatches{}",
            FIXTURE_COMMANDS.len(),
            mismatches.len(),
            if mismatches.is_empty() {
                String::new()
            } else {
                format!(": {}", mismatches.join(", "))
            }
        ),
    }
}

fn main() -> ExitCode {
    // The harness passes libtest flags; listing must not run the suites.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let lines = vec![
        fixtures(),
        suite(
            2,
            "functional implies conservative",
            functional_implies_conservative(PAIRS, SEED),
            (MIN_PAIRS, 1),
            None,
            "functionally equivalent pairs",
        ),
        suite(
            3,
            "conservative preserves ancestry",
            conservative_preserves_ancestry(PAIRS, SEED),
            (MIN_PAIRS, 1),
            None,
            "conservatively equivalent pairs",
        ),
        suite(
            4,
            "parent checks agree",
            parent_checks_agree(PARENT_INSTANCES, SEED),
            (MIN_PARENT_INSTANCES, MIN_PARENT_INSTANCES),
            None,
            "instances",
        ),
        suite(
            5,
            "oracles agree",
            oracles_agree(ORACLE_MODELS, SEED),
            (MIN_ORACLE_MODELS, MIN_ORACLE_MODELS),
            Some(ORACLE_LIMIT),
            "models",
        ),
        suite(
            6,
            "sufficiency strength ordering",
            strength_ordering(STRENGTH_MODELS, SEED),
            (STRENGTH_MODELS, 1),
            None,
            "sufficient cases",
        ),
        suite(
            7,
            "identical-signature degeneration",
            identical_signature(SAME_SIGNATURE_PAIRS, SEED),
            (MIN_SAME_SIGNATURE_PAIRS, MIN_SAME_SIGNATURE_PAIRS),
            None,
            "pairs",
        ),
        determinism(),
    ];
    let mut unexpected = false;
    let mut passing = 0;
    for l in &lines {
        let tag = match l.outcome {
            Outcome::Pass => {
                passing += 1;
                "PASS"
            }
            Outcome::KnownFail => "FAIL",
            Outcome::Fail => {
                unexpected = true;
                "FAIL"
            }
        };
        println!("criterion {}: {tag} {}: {}", l.id, l.name, l.detail);
    }
    println!("{passing}/{} criteria pass", lines.len());
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
