use causalq_core::{BinOp, Contrast, Expr, Model, ModelDef, Signature, Value, VarId};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("profile has no endogenous variables")]
    NoEndogenous,
    #[error("ranges need at least two values, got {0}")]
    RangeTooSmall(usize),
    #[error("no valid model after {0} attempts")]
    Exhausted(usize),
}

/// Shape of a generated model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    pub n_endo: usize,
    pub n_exo: usize,
    /// Largest range size; each variable draws its size from `2..=max_range`.
    pub max_range: usize,
    /// Depth of equation expressions.
    pub depth: usize,
}

impl Profile {
    pub fn binary(n_endo: usize, n_exo: usize) -> Self {
        Profile {
            n_endo,
            n_exo,
            max_range: 2,
            depth: 2,
        }
    }
}

const ATTEMPTS: usize = 64;

fn values(n: usize) -> Vec<Value> {
    (0..n as i64).map(Value::Int).collect()
}

/// A condition on `v`: the variable itself when binary, else `v = k`.
fn test_of(sig: &Signature, v: VarId, rng: &mut ChaCha8Rng) -> Expr {
    let n = sig.range_len(v);
    if n == 2 {
        Expr::var(v)
    } else {
        Expr::bin(BinOp::Eq, Expr::var(v), Expr::int(rng.random_range(0..n as i64)))
    }
}

/// A Boolean expression over `inputs`.
fn condition(sig: &Signature, inputs: &[VarId], depth: usize, rng: &mut ChaCha8Rng) -> Expr {
    if depth == 0 || inputs.is_empty() || rng.random_bool(0.25) {
        return match inputs.choose(rng) {
            Some(&v) => {
                let t = test_of(sig, v, rng);
                if rng.random_bool(0.3) {
                    Expr::not(t)
                } else {
                    t
                }
            }
            None => Expr::int(rng.random_range(0..2)),
        };
    }
    let a = condition(sig, inputs, depth - 1, rng);
    let b = condition(sig, inputs, depth - 1, rng);
    match rng.random_range(0..3) {
        0 => Expr::and(a, b),
        1 => Expr::or(a, b),
        _ => Expr::not(Expr::and(a, b)),
    }
}

/// An equation for a variable with `n` values: a Boolean expression when
/// binary, otherwise a decision tree with literal leaves.
fn equation(sig: &Signature, inputs: &[VarId], n: usize, depth: usize, rng: &mut ChaCha8Rng) -> Expr {
    if n == 2 {
        return condition(sig, inputs, depth, rng);
    }
    if depth == 0 || inputs.is_empty() {
        return Expr::int(rng.random_range(0..n as i64));
    }
    let c = condition(sig, inputs, 1, rng);
    Expr::ite(
        c,
        equation(sig, inputs, n, depth - 1, rng),
        equation(sig, inputs, n, depth - 1, rng),
    )
}

/// Up to three inputs for an equation, drawn from `pool`.
fn inputs(pool: &[VarId], rng: &mut ChaCha8Rng) -> Vec<VarId> {
    let k = rng.random_range(1..=pool.len().clamp(1, 3)).min(pool.len());
    let mut v: Vec<VarId> = pool.choose_multiple(rng, k).copied().collect();
    v.sort();
    v
}

/// A valid model with the given profile, the same for the same seed.
/// Endogenous variables are `V0, V1, …` in a topological order; exogenous
/// ones `U0, U1, …`.
pub fn generate_model(seed: u64, profile: &Profile) -> Result<Model, GenError> {
    if profile.n_endo == 0 {
        return Err(GenError::NoEndogenous);
    }
    if profile.max_range < 2 {
        return Err(GenError::RangeTooSmall(profile.max_range));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut d = ModelDef::new("M");
        let mut pool = Vec::new();
        for i in 0..profile.n_exo {
            let n = rng.random_range(2..=profile.max_range);
            pool.push(d.add_exogenous(format!("U{i}"), values(n)).expect("fresh name"));
        }
        let mut endo = Vec::new();
        for i in 0..profile.n_endo {
            let n = rng.random_range(2..=profile.max_range);
            endo.push((d.add_endogenous(format!("V{i}"), values(n)).expect("fresh name"), n));
        }
        for &(v, n) in &endo {
            let ins = inputs(&pool, &mut rng);
            let eq = equation(&d.signature, &ins, n, profile.depth, &mut rng);
            d.set_equation(v, eq);
            pool.push(v);
        }
        if let Ok(m) = d.compile() {
            return Ok(m);
        }
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

/// How an extension is grown from its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtProfile {
    pub splices: usize,
    /// Only subdivide edges (`E = C` becomes `E = D, D = C`).
    pub subdivisions_only: bool,
    /// Cap on new exogenous variables.
    pub max_new_exo: usize,
    pub depth: usize,
}

impl ExtProfile {
    pub fn subdivisions(splices: usize) -> Self {
        ExtProfile {
            splices,
            subdivisions_only: true,
            max_new_exo: 0,
            depth: 1,
        }
    }

    pub fn mixed(splices: usize) -> Self {
        ExtProfile {
            splices,
            subdivisions_only: false,
            max_new_exo: 1,
            depth: 1,
        }
    }
}

fn fresh_name(sig: &Signature, stem: &str) -> String {
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| sig.lookup(n).is_none())
        .expect("unbounded names")
}

/// Replaces `from` by a new endogenous `D = from` in the equation of `y`.
fn subdivide(d: &mut ModelDef, y: VarId, from: VarId) {
    let range = d.signature.range(from).to_vec();
    let name = fresh_name(&d.signature, "H");
    let mid = d.add_endogenous(name, range).expect("fresh name");
    d.set_equation(mid, Expr::var(from));
    let eq = d.equation(y).expect("endogenous").substitute(from, mid);
    d.set_equation(y, eq);
}

/// Which variables depend on `y`, directly or not.
fn descendants(d: &ModelDef, y: VarId) -> Vec<bool> {
    let n = d.signature.len();
    let mut below = vec![false; n];
    let mut stack = vec![y];
    while let Some(v) = stack.pop() {
        for c in d.signature.endogenous() {
            let reads = d.equation(c).is_some_and(|e| e.references().contains(&v));
            if reads && !std::mem::replace(&mut below[c.0], true) {
                stack.push(c);
            }
        }
    }
    below
}

/// Adds a new binary variable over existing ones and folds it into the
/// equation of `y`.
fn graft(d: &mut ModelDef, y: VarId, exo: bool, depth: usize, rng: &mut ChaCha8Rng) {
    let pool: Vec<VarId> = d.signature.ids().filter(|&v| v != y).collect();
    let name = fresh_name(&d.signature, if exo { "W" } else { "H" });
    let new = if exo {
        d.add_exogenous(name, values(2)).expect("fresh name")
    } else {
        // Inputs avoid the descendants of `y`, so no cycle forms.
        let below = descendants(d, y);
        let safe: Vec<VarId> = pool.iter().copied().filter(|v| !below[v.0]).collect();
        let ins = inputs(&safe, rng);
        let eq = condition(&d.signature, &ins, depth, rng);
        let h = d.add_endogenous(name, values(2)).expect("fresh name");
        d.set_equation(h, eq);
        h
    };
    let old = d.equation(y).expect("endogenous").clone();
    let n = d.signature.range_len(y);
    let eq = if n == 2 {
        match rng.random_range(0..3) {
            0 => Expr::or(old, Expr::var(new)),
            1 => Expr::and(old, Expr::var(new)),
            _ => Expr::ite(Expr::var(new), old, Expr::int(rng.random_range(0..2))),
        }
    } else {
        Expr::ite(Expr::var(new), old, Expr::int(rng.random_range(0..n as i64)))
    };
    d.set_equation(y, eq);
}

/// An extension of `base`: the base's variables keep their names, kinds and
/// ranges, and new variables are spliced in. It need not be equivalent.
pub fn generate_extension(seed: u64, base: &Model, profile: &ExtProfile) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = base.definition().clone();
    d.name = format!("{}prime", base.name());
    let mut new_exo = 0;
    for _ in 0..profile.splices {
        let edges: Vec<(VarId, VarId)> = d
            .signature
            .endogenous()
            .flat_map(|y| {
                let refs = d.equation(y).map(|e| e.references()).unwrap_or_default();
                refs.into_iter().map(move |p| (y, p))
            })
            .collect();
        let subdivide_now = profile.subdivisions_only || rng.random_bool(0.5);
        if subdivide_now {
            if let Some(&(y, p)) = edges.choose(&mut rng) {
                subdivide(&mut d, y, p);
            }
            continue;
        }
        let targets: Vec<VarId> = d.signature.endogenous().collect();
        let y = *targets.choose(&mut rng).expect("at least one endogenous variable");
        let exo = new_exo < profile.max_new_exo && rng.random_bool(0.3);
        new_exo += usize::from(exo);
        graft(&mut d, y, exo, profile.depth, &mut rng);
    }
    d.compile().expect("splices keep the model valid")
}

/// A model over the same signature as `base` (which must come from
/// [`generate_model`]) with one equation rewritten. Half of the time the
/// rewrite is `ite(c, e, e)`, which changes the syntax but not the function;
/// otherwise it is a fresh equation over the earlier variables, which may or
/// may not coincide with the old one.
pub fn same_signature_variant(seed: u64, base: &Model) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = base.definition().clone();
    d.name = format!("{}variant", base.name());
    let endo: Vec<VarId> = d.signature.endogenous().collect();
    let i = rng.random_range(0..endo.len());
    let y = endo[i];
    let pool: Vec<VarId> = d
        .signature
        .exogenous()
        .chain(endo[..i].iter().copied())
        .collect();
    let old = d.equation(y).expect("endogenous").clone();
    let eq = match pool.choose(&mut rng) {
        Some(&c) if rng.random_bool(0.5) => Expr::ite(test_of(&d.signature, c, &mut rng), old.clone(), old),
        _ => {
            let ins = inputs(&pool, &mut rng);
            equation(&d.signature, &ins, d.signature.range_len(y), 2, &mut rng)
        }
    };
    d.set_equation(y, eq);
    d.compile().expect("rewrites read only earlier variables")
}

/// A random contrast over 1..=`max_len` distinct variables drawn from `vars`.
pub fn random_contrast(sig: &Signature, vars: &[VarId], max_len: usize, rng: &mut impl Rng) -> Contrast {
    let k = rng.random_range(1..=max_len.min(vars.len()).max(1));
    let picked: Vec<VarId> = vars.choose_multiple(rng, k).copied().collect();
    let entries = picked
        .into_iter()
        .map(|v| {
            let n = sig.range_len(v);
            let l = rng.random_range(0..n);
            let r = (l + rng.random_range(1..n)) % n;
            (v, l, r)
        })
        .collect();
    Contrast::new(entries).expect("distinct values")
}
