//! Parser and printer over the fixtures, generated models and noise.

use causalq_core::dsl::{parse_file, parse_model, print_model};
use causalq_testkit::{generate_model, Profile};
use proptest::prelude::*;

fn fixture_texts() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/paper");
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            let name = p.file_name()?.to_str()?.to_string();
            name.ends_with(".scm.txt").then(|| (name, std::fs::read_to_string(&p).unwrap()))
        })
        .collect();
    out.sort();
    out
}

#[test]
fn fixtures_round_trip() {
    let texts = fixture_texts();
    assert_eq!(texts.len(), 8);
    for (name, text) in texts {
        for def in parse_file(&text).unwrap() {
            let printed = print_model(&def);
            let again = parse_model(&printed).unwrap_or_else(|d| panic!("{name}: {d}"));
            assert_eq!(again, def, "{name}");
            assert_eq!(print_model(&again), printed, "{name}: printing is idempotent");
        }
    }
}

#[test]
fn fixtures_compile() {
    for (name, text) in fixture_texts() {
        for def in parse_file(&text).unwrap() {
            def.compile().unwrap_or_else(|e| panic!("{name}/{}: {e}", def.name));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn generated_models_round_trip(seed in any::<u64>(), n_endo in 1usize..6, n_exo in 0usize..3, range in 2usize..4) {
        let profile = Profile { max_range: range, ..Profile::binary(n_endo, n_exo) };
        let m = generate_model(seed, &profile).unwrap();
        let def = m.definition();
        prop_assert_eq!(&parse_model(&print_model(def)).unwrap(), def);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_file(&text);
    }

    #[test]
    fn mangled_fixtures_never_panic(cut in 0usize..2000, junk in "[{}()=:,!&|<>\\-\"a-zA-Z0-9 \n]{0,12}") {
        for (_, text) in fixture_texts() {
            let at = text.char_indices().map(|(i, _)| i).nth(cut % text.chars().count().max(1)).unwrap_or(0);
            let mangled = format!("{}{}{}", &text[..at], junk, &text[at..]);
            if let Ok(defs) = parse_file(&mangled) {
                for d in defs {
                    let _ = d.compile();
                }
            }
        }
    }
}
