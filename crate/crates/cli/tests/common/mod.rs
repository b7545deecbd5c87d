//! Running the binary against the worked-example fixtures.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "paper", name].iter().collect();
    p.to_string_lossy().into_owned()
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalq"))
        .args(args)
        .env_remove("CAUSALQ_MAX_EVALS")
        .output()
        .expect("binary runs")
}

/// One command per fixture fact, as `(fixture file, arguments after it)`
/// with the subcommand first.
pub const FIXTURE_COMMANDS: &[(&str, &str, &[&str])] = &[
    ("validate", "example1.scm.txt", &[]),
    ("solve", "example1.scm.txt", &["M", "--context", "U_C=1"]),
    ("query", "example1.scm.txt", &["M", "[C<-0] E=0", "--context", "U_C=1"]),
    ("equiv", "example1.scm.txt", &["causal", "M", "Mprime"]),
    ("relation", "example1.scm.txt", &["potential-joint-ancestors", "Mprime", "C=1 vs C=0", "E=2 vs E=0", "--witness"]),
    ("equiv", "example2.scm.txt", &["causal", "M", "Mprime"]),
    ("equiv", "example4.scm.txt", &["structural", "M", "Mprime"]),
    ("relation", "example4.scm.txt", &["parent", "M", "A", "E"]),
    ("relation", "example4.scm.txt", &["potential-joint-parents", "Mprime", "A=1 vs A=0", "E=1 vs E=0", "--witness"]),
    ("equiv", "example_struc.scm.txt", &["functional", "M", "Mprime"]),
    ("equiv", "example_struc.scm.txt", &["structural", "M", "Mprime"]),
    ("equiv", "example_final.scm.txt", &["functional", "M", "Mprime"]),
    ("equiv", "example_final.scm.txt", &["structural", "M", "Mprime"]),
    ("equiv", "example_cons.scm.txt", &["conservative", "M", "Mprime"]),
    ("equiv", "example_cons.scm.txt", &["functional", "M", "Mprime"]),
    ("relation", "example_cons.scm.txt", &["sufficient", "Mprime", "A=1", "E=1"]),
    ("relation", "footnote.scm.txt", &["actual-joint-ancestors", "Overdetermined", "A=1,C=1 vs A=0,C=0", "E=1 vs E=0", "--context", "U_A=1,U_C=1", "--witness"]),
    ("relation", "footnote.scm.txt", &["actual-joint-ancestors", "Switch", "A=1,C=1 vs A=0,C=0", "E=1 vs E=0", "--context", "U_A=1,U_B=1,U_C=1", "--witness"]),
];

/// The full argument list for a fixture command, with or without `--json`.
pub fn fixture_args(cmd: &(&str, &str, &[&str]), json: bool) -> Vec<String> {
    let (sub, file, rest) = cmd;
    let mut args = vec![sub.to_string()];
    // `equiv` and `relation` take their kind before the file.
    let kind_first = matches!(*sub, "equiv" | "relation");
    let mut rest = rest.iter().map(|s| s.to_string());
    if kind_first {
        args.push(rest.next().expect("a kind"));
    }
    args.push(fixture(file));
    args.extend(rest);
    if json {
        args.push("--json".into());
    }
    args
}
