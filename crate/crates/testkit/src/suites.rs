//! Seeded randomized suites that cross-check the decision procedures
//! against the oracles and against each other. Each returns how many cases
//! it ran and every disagreement it found.

use std::time::{Duration, Instant};

use causalq_core::equivalence::{ancestry_preservation_check, check, EquivConfig, EquivKind, ModelPair};
use causalq_core::relations::potential_parent_contrast;
use causalq_core::sufficiency::{closure, directly_sufficient, sufficient, weakly_sufficient};
use causalq_core::{Context, Contrast, Model, PartialAssignment, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::{generate_extension, generate_model, same_signature_variant, ExtProfile, Profile};
use crate::oracle::{
    oracle_directly_sufficient, oracle_potential_parent, oracle_sufficient, oracle_weakly_sufficient,
    solve_by_search, OracleError, OracleGuard,
};

#[derive(Debug, Clone, Default)]
pub struct SuiteResult {
    /// Cases that exercised the property (for implications, those where
    /// the premise held).
    pub cases: usize,
    /// Cases generated in total.
    pub generated: usize,
    /// Cases where the relation under test held, to show both outcomes
    /// are exercised.
    pub positives: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        // Keep reports short; the count is what matters past a handful.
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("…".into());
        }
    }
}

fn timed(f: impl FnOnce(&mut SuiteResult)) -> SuiteResult {
    let start = Instant::now();
    let mut r = SuiteResult::default();
    f(&mut r);
    r.elapsed = start.elapsed();
    r
}

/// A partial endogenous assignment binding each variable with probability `p`.
fn partial(rng: &mut ChaCha8Rng, m: &Model, p: f64) -> PartialAssignment {
    let sig = m.signature();
    let mut out = PartialAssignment::empty(sig);
    for v in sig.endogenous() {
        if rng.random_bool(p) {
            out.set(v, rng.random_range(0..sig.range_len(v)));
        }
    }
    out
}

/// A consequent that `x` reaches half of the time.
fn consequent(rng: &mut ChaCha8Rng, m: &Model, x: &PartialAssignment) -> PartialAssignment {
    if rng.random_bool(0.5) {
        let c = closure(m, x).restrict_kind(m.signature(), causalq_core::VarKind::Endogenous);
        let picked = c.restrict(|_| rng.random_bool(0.5));
        if !picked.is_empty() {
            return picked;
        }
    }
    let mut y = partial(rng, m, 0.3);
    if y.is_empty() {
        let endo: Vec<VarId> = m.signature().endogenous().collect();
        let v = endo[rng.random_range(0..endo.len())];
        y.set(v, rng.random_range(0..m.signature().range_len(v)));
    }
    y
}

/// A base model with at most four endogenous binary variables and one
/// exogenous one, and an extension adding one variable, so pairs stay
/// within five endogenous and two exogenous variables. Every third
/// extension only subdivides an edge, which keeps functionally
/// equivalent pairs common.
pub fn random_pair(seed: u64) -> ModelPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_endo = rng.random_range(2..=4);
    let base = generate_model(seed, &Profile::binary(n_endo, 1)).expect("valid profile");
    let profile = if seed % 3 == 0 {
        ExtProfile::subdivisions(1)
    } else {
        ExtProfile::mixed(1)
    };
    let ext = generate_extension(seed.wrapping_mul(31).wrapping_add(7), &base, &profile);
    ModelPair::new(base, ext).expect("extensions nest")
}

/// Functional equivalence implies conservative equivalence with the same
/// witness.
pub fn functional_implies_conservative(pairs: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        let config = EquivConfig::default();
        for i in 0..pairs as u64 {
            let pair = random_pair(seed + i);
            r.generated += 1;
            let f = check(&pair, EquivKind::Functional, &config).expect("pair");
            if !f.verdict {
                continue;
            }
            r.cases += 1;
            r.positives += 1;
            let c = check(&pair, EquivKind::Conservative, &config).expect("pair");
            if !c.verdict {
                r.fail(format!("seed {}: functional but not conservative: {:?}", seed + i, c.counterexample));
            } else if c.witness != f.witness {
                r.fail(format!("seed {}: witnesses differ: {:?} vs {:?}", seed + i, f.witness, c.witness));
            }
        }
    })
}

/// Conservative equivalence implies that the base's ancestor relation over
/// common variables embeds in the extension's.
pub fn conservative_preserves_ancestry(pairs: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        let config = EquivConfig::default();
        for i in 0..pairs as u64 {
            let pair = random_pair(seed + i);
            r.generated += 1;
            if !check(&pair, EquivKind::Conservative, &config).expect("pair").verdict {
                continue;
            }
            r.cases += 1;
            r.positives += 1;
            let violations = ancestry_preservation_check(&pair);
            if !violations.is_empty() {
                r.fail(format!("seed {}: {:?}", seed + i, violations));
            }
        }
    })
}

/// The witness-based parent check agrees with the formula-based one.
pub fn parent_checks_agree(instances: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        let guard = OracleGuard::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut model_seed = seed;
        while r.cases < instances {
            model_seed += 1;
            let profile = Profile {
                max_range: 3,
                ..Profile::binary(rng.random_range(2..=4), rng.random_range(0..=2))
            };
            let m = generate_model(model_seed, &profile).expect("valid profile");
            let sig = m.signature();
            let endo: Vec<VarId> = sig.endogenous().collect();
            for _ in 0..8 {
                r.generated += 1;
                let y = endo[rng.random_range(0..endo.len())];
                // Drawing X among Y's parents half of the time keeps
                // positive instances common.
                let parents: Vec<VarId> = m.parents(y).iter().copied().filter(|&p| !sig.is_exogenous(p)).collect();
                let x = if !parents.is_empty() && rng.random_bool(0.5) {
                    parents[rng.random_range(0..parents.len())]
                } else {
                    endo[rng.random_range(0..endo.len())]
                };
                if x == y {
                    continue;
                }
                let pick = |v: VarId, rng: &mut ChaCha8Rng| {
                    let n = sig.range_len(v);
                    let l = rng.random_range(0..n);
                    (v, l, (l + rng.random_range(1..n)) % n)
                };
                let xs = pick(x, &mut rng);
                let ys = pick(y, &mut rng);
                let src = Contrast::singleton(xs.0, xs.1, xs.2).expect("distinct");
                let tgt = Contrast::singleton(ys.0, ys.1, ys.2).expect("distinct");
                let fast = potential_parent_contrast(&m, &src, &tgt).expect("endogenous pair");
                let slow = match oracle_potential_parent(&m, xs, ys, &guard) {
                    Ok(w) => w,
                    Err(_) => continue,
                };
                r.cases += 1;
                r.positives += usize::from(slow.is_some());
                if fast.is_some() != slow.is_some() {
                    r.fail(format!(
                        "model seed {model_seed}: ({}) ~> ({}): witness-based {}, formula-based {}",
                        src.display(sig),
                        tgt.display(sig),
                        fast.is_some(),
                        slow.is_some()
                    ));
                }
            }
        }
    })
}

fn models_for_oracles(count: usize, seed: u64) -> impl Iterator<Item = (u64, Model)> {
    (0..count as u64).map(move |i| {
        let s = seed + i;
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x9e37_79b9);
        let profile = Profile {
            max_range: if i % 4 == 0 { 3 } else { 2 },
            ..Profile::binary(rng.random_range(1..=5), rng.random_range(0..=2))
        };
        (s, generate_model(s, &profile).expect("valid profile"))
    })
}

/// The optimized sufficiency procedures and the solver agree with the
/// oracles. Counts models; comparisons beyond the guard are skipped.
pub fn oracles_agree(models: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        let guard = OracleGuard::default();
        for (s, m) in models_for_oracles(models, seed) {
            r.generated += 1;
            let sig = m.signature();
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut compared = false;
            let mut positives = 0;
            let ctxs = Context::enumerate(sig);
            for _ in 0..6 {
                let x = if rng.random_bool(0.3) {
                    // Exogenous bindings restrict the contexts quantified over.
                    let mut x = partial(&mut rng, &m, 0.4);
                    if let Some(u) = sig.exogenous().next() {
                        x.set(u, rng.random_range(0..sig.range_len(u)));
                    }
                    x
                } else {
                    partial(&mut rng, &m, 0.4)
                };
                let y = consequent(&mut rng, &m, &x);
                let mut cmp = |what: &str, fast: bool, slow: Result<bool, OracleError>| match slow {
                    Ok(slow) => {
                        compared = true;
                        positives += usize::from(slow);
                        if fast != slow {
                            r.fail(format!(
                                "model seed {s}: {what}({} ; {}): optimized {fast}, oracle {slow}",
                                x.display(sig),
                                y.display(sig)
                            ));
                        }
                    }
                    Err(_) => {}
                };
                cmp("direct", directly_sufficient(&m, &x, &y), oracle_directly_sufficient(&m, &x, &y, &guard));
                cmp("sufficient", sufficient(&m, &x, &y).is_some(), oracle_sufficient(&m, &x, &y, &guard));
                let x_endo = x.restrict_kind(sig, causalq_core::VarKind::Endogenous);
                let ctx = &ctxs[rng.random_range(0..ctxs.len())];
                let fast = weakly_sufficient(&m, ctx, &x_endo, &y).expect("endogenous antecedent");
                cmp("weak", fast, oracle_weakly_sufficient(&m, ctx, &x_endo, &y, &guard));
                let world = m.intervene(&x_endo).expect("endogenous setting").world(ctx);
                if world != solve_by_search(&m, ctx, &x_endo) {
                    r.fail(format!("model seed {s}: solver disagrees under ({})", x_endo.display(sig)));
                }
            }
            r.cases += usize::from(compared);
            r.positives += positives;
        }
    })
}

/// Direct sufficiency implies sufficiency, which implies weak sufficiency
/// in every context.
pub fn strength_ordering(models: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        for (s, m) in models_for_oracles(models, seed) {
            let sig = m.signature();
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x51de);
            for _ in 0..6 {
                r.generated += 1;
                let x = partial(&mut rng, &m, 0.4);
                let y = consequent(&mut rng, &m, &x);
                let direct = directly_sufficient(&m, &x, &y);
                let chain = sufficient(&m, &x, &y).is_some();
                if direct || chain {
                    r.cases += 1;
                    r.positives += usize::from(direct);
                }
                if direct && !chain {
                    r.fail(format!("model seed {s}: direct but not sufficient: {} ; {}", x.display(sig), y.display(sig)));
                }
                if chain {
                    for ctx in Context::enumerate(sig) {
                        if !weakly_sufficient(&m, &ctx, &x, &y).expect("endogenous antecedent") {
                            r.fail(format!(
                                "model seed {s}: sufficient but not weakly in ({}): {} ; {}",
                                ctx.assignment().display(sig),
                                x.display(sig),
                                y.display(sig)
                            ));
                        }
                    }
                }
            }
        }
    })
}

/// Every endogenous equation of `a` and `b` gives the same value on every
/// total world. The models must share a signature.
pub fn extensionally_equal(a: &Model, b: &Model) -> bool {
    let sig = a.signature();
    let radices = sig.ids().map(|id| sig.range_len(id)).collect();
    causalq_core::assignment::MixedRadix::new(radices)
        .all(|world| sig.endogenous().all(|y| a.evaluate(y, &world) == b.evaluate(y, &world)))
}

/// For pairs over one signature, conservative equivalence coincides with
/// extensional equality of the equations.
pub fn identical_signature(pairs: usize, seed: u64) -> SuiteResult {
    timed(|r| {
        let config = EquivConfig::default();
        for i in 0..pairs as u64 {
            let s = seed + i;
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let profile = Profile {
                max_range: if i % 3 == 0 { 3 } else { 2 },
                ..Profile::binary(rng.random_range(1..=5), rng.random_range(0..=2))
            };
            let m = generate_model(s, &profile).expect("valid profile");
            let v = same_signature_variant(s ^ 0x7a7a, &m);
            let same = extensionally_equal(&m, &v);
            r.positives += usize::from(same);
            let pair = ModelPair::new(m, v).expect("same signature");
            r.generated += 1;
            r.cases += 1;
            let verdict = check(&pair, EquivKind::Conservative, &config).expect("pair").verdict;
            if verdict != same {
                r.fail(format!("seed {s}: conservative {verdict}, equal equations {same}"));
            }
        }
    })
}
