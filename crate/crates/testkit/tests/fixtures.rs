//! Replays the worked-example fixtures against their sidecars.

use causalq_testkit::fixtures::{fixture_dir, run, sidecars, KNOWN_DISAGREEMENTS};

#[test]
fn fixtures_match_their_sidecars() {
    let dir = fixture_dir();
    let all = sidecars(&dir);
    assert_eq!(all.len(), 8);
    let mut unexpected = Vec::new();
    let mut known_seen = Vec::new();
    for (name, sidecar) in &all {
        for c in run(&dir, name, sidecar).checks {
            let known = KNOWN_DISAGREEMENTS.contains(&(name.as_str(), c.what.as_str()));
            match (c.passed, known) {
                (true, false) => {}
                (false, true) => known_seen.push((name.clone(), c.what)),
                (true, true) => unexpected.push(format!("{name}: `{}` now passes; drop it from the known list", c.what)),
                (false, false) => unexpected.push(format!("{name}: `{}` failed: {}", c.what, c.detail)),
            }
        }
    }
    assert!(unexpected.is_empty(), "{}", unexpected.join("\n"));
    assert_eq!(known_seen.len(), KNOWN_DISAGREEMENTS.len());
}
