use std::path::Path;

use causalq_core::dsl::{parse_assignment, parse_contrast, parse_file, print_formula, print_report, print_reports};
use causalq_core::equivalence::{check, EquivConfig, EquivKind, ModelPair};
use causalq_core::relations::{self, ActualReading};
use causalq_core::sufficiency;
use causalq_core::{satisfies, Context, Contrast, Limits, Model, ModelDef, PartialAssignment, VarId};
use serde_json::json;

use crate::report::{QueryReport, RelationReport, SolveReport};
use crate::{EquivKindArg, RelationKind};

pub struct Output {
    pub stdout: String,
    pub verdict: bool,
}

type Result<T> = std::result::Result<T, String>;

pub struct RelationFlags {
    pub witness: bool,
    pub initial_source_only: bool,
    pub json: bool,
}

pub struct EquivFlags {
    pub strict_potential: bool,
    pub free_hidden: bool,
    pub json: bool,
}

fn load(file: &Path) -> Result<Vec<ModelDef>> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_file(&text).map_err(|d| format!("{}:{d}", file.display()))
}

fn model(defs: &[ModelDef], name: &str) -> Result<Model> {
    let def = defs.iter().find(|d| d.name == name).ok_or_else(|| {
        let names: Vec<&str> = defs.iter().map(|d| d.name.as_str()).collect();
        format!("no model `{name}` (found: {})", names.join(", "))
    })?;
    def.compile_with(&Limits::from_env()).map_err(|e| e.to_string())
}

fn load_model(file: &Path, name: &str) -> Result<Model> {
    model(&load(file)?, name)
}

fn assignment(m: &Model, text: &str) -> Result<PartialAssignment> {
    parse_assignment(text, m.signature()).map_err(|d| format!("assignment `{text}`: {d}"))
}

fn contrast(m: &Model, text: &str) -> Result<Contrast> {
    parse_contrast(text, m.signature()).map_err(|d| format!("contrast `{text}`: {d}"))
}

fn context(m: &Model, parts: &[String]) -> Result<Context> {
    let pa = assignment(m, &parts.join(", "))?;
    Context::new(m.signature(), pa).map_err(|e| format!("context: {e}"))
}

fn variable(m: &Model, name: &str) -> Result<VarId> {
    m.signature()
        .lookup(name)
        .ok_or_else(|| format!("unknown variable `{name}`"))
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn validate(file: &Path, json: bool) -> Result<Output> {
    let defs = load(file)?;
    let limits = Limits::from_env();
    let reports: Vec<_> = defs.iter().map(|d| d.validate(&limits)).collect();
    let verdict = reports.iter().all(|r| r.is_valid());
    let stdout = if json {
        print_reports(&reports)
    } else {
        reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
    };
    Ok(Output { stdout, verdict })
}

pub fn solve(file: &Path, name: &str, ctx: &[String], json: bool) -> Result<Output> {
    let m = load_model(file, name)?;
    let ctx = context(&m, ctx)?;
    let sol = m.solve(&ctx);
    let sig = m.signature();
    let report = SolveReport {
        model: name.to_string(),
        context: to_json(&ctx.assignment().named(sig)),
        solution: to_json(&sol.named(sig)),
        text: sol.display_sep(sig, " ").to_string(),
    };
    Ok(Output {
        stdout: print_report(&report, json),
        verdict: true,
    })
}

pub fn query(file: &Path, name: &str, formula: &str, ctx: &[String], json: bool) -> Result<Output> {
    let m = load_model(file, name)?;
    let ctx = context(&m, ctx)?;
    let sig = m.signature();
    let f = causalq_core::dsl::parse_formula(formula, sig).map_err(|d| format!("formula: {d}"))?;
    let verdict = satisfies(&m, &ctx, &f).map_err(|e| e.to_string())?;
    let report = QueryReport {
        model: name.to_string(),
        context: to_json(&ctx.assignment().named(sig)),
        formula: print_formula(&f, sig),
        verdict,
    };
    Ok(Output {
        stdout: print_report(&report, json),
        verdict,
    })
}

fn kind_name(kind: RelationKind) -> &'static str {
    match kind {
        RelationKind::Parent => "parent",
        RelationKind::Ancestor => "ancestor",
        RelationKind::PotentialJointParents => "potential-joint-parents",
        RelationKind::PotentialJointAncestors => "potential-joint-ancestors",
        RelationKind::ActualParent => "actual-parent",
        RelationKind::ActualJointAncestors => "actual-joint-ancestors",
        RelationKind::DirectSufficient => "direct-sufficient",
        RelationKind::Sufficient => "sufficient",
        RelationKind::WeakSufficient => "weak-sufficient",
    }
}

/// Certificate as JSON plus its text lines.
type Certificate = Option<(serde_json::Value, Vec<String>)>;

fn witness_cert(m: &Model, w: Option<relations::StepWitness>) -> Certificate {
    let sig = m.signature();
    w.map(|w| {
        let shown = w.combined().display(sig).to_string();
        (to_json(&w.named(sig)), vec![format!("witness: {}", if shown.is_empty() { "(empty)".into() } else { shown })])
    })
}

fn network_cert(m: &Model, n: Option<relations::Network>) -> Certificate {
    let sig = m.signature();
    n.map(|n| {
        let lines = n
            .steps
            .iter()
            .map(|s| {
                let z = s.witness.combined().display(sig).to_string();
                format!(
                    "  {} ~> {}  witness: {}",
                    s.source.display(sig),
                    s.target.display(sig),
                    if z.is_empty() { "(empty)".into() } else { z }
                )
            })
            .collect::<Vec<_>>();
        let mut all = vec![format!("network: {}", n.display(sig))];
        all.extend(lines);
        (to_json(&n.named(sig)), all)
    })
}

pub fn relation(
    kind: RelationKind,
    file: &Path,
    name: &str,
    args: (&str, &str),
    ctx: &[String],
    flags: RelationFlags,
) -> Result<Output> {
    let m = load_model(file, name)?;
    let sig = m.signature();
    let err = |e: relations::RelationError| e.to_string();
    let needs_context = matches!(
        kind,
        RelationKind::ActualParent | RelationKind::ActualJointAncestors | RelationKind::WeakSufficient
    );
    if !needs_context && !ctx.is_empty() {
        return Err(format!("{} takes no --context", kind_name(kind)));
    }
    let reading = if flags.initial_source_only {
        ActualReading::InitialSource
    } else {
        ActualReading::EveryStep
    };
    let cert: Certificate = match kind {
        RelationKind::Parent => {
            let (x, y) = (variable(&m, args.0)?, variable(&m, args.1)?);
            relations::is_parent(&m, x, y).map_err(err)?.map(|c| {
                let z = c.witness.combined().display(sig).to_string();
                (
                    json!({
                        "source": to_json(&c.source.named(sig)),
                        "target": to_json(&c.target.named(sig)),
                        "witness": to_json(&c.witness.named(sig)),
                    }),
                    vec![format!(
                        "{} ~> {}  witness: {}",
                        c.source.display(sig),
                        c.target.display(sig),
                        if z.is_empty() { "(empty)".into() } else { z }
                    )],
                )
            })
        }
        RelationKind::Ancestor => {
            let (x, y) = (variable(&m, args.0)?, variable(&m, args.1)?);
            relations::is_ancestor(&m, x, y).map_err(err)?.map(|path| {
                let names: Vec<&str> = path.iter().map(|&v| sig.name(v)).collect();
                (json!(names), vec![format!("path: {}", names.join(" -> "))])
            })
        }
        RelationKind::PotentialJointParents => {
            let (s, t) = (contrast(&m, args.0)?, contrast(&m, args.1)?);
            witness_cert(&m, relations::potential_joint_parents(&m, &s, &t).map_err(err)?)
        }
        RelationKind::PotentialJointAncestors => {
            let (s, t) = (contrast(&m, args.0)?, contrast(&m, args.1)?);
            network_cert(&m, relations::potential_joint_ancestors(&m, &s, &t).map_err(err)?)
        }
        RelationKind::ActualParent => {
            let ctx = context(&m, ctx)?;
            let (s, t) = (contrast(&m, args.0)?, contrast(&m, args.1)?);
            witness_cert(&m, relations::actual_parent(&m, &ctx, &s, &t).map_err(err)?)
        }
        RelationKind::ActualJointAncestors => {
            let ctx = context(&m, ctx)?;
            let (s, t) = (contrast(&m, args.0)?, contrast(&m, args.1)?);
            network_cert(&m, relations::actual_joint_ancestors(&m, &ctx, &s, &t, reading).map_err(err)?)
        }
        RelationKind::DirectSufficient => {
            let (x, y) = (assignment(&m, args.0)?, assignment(&m, args.1)?);
            sufficiency::directly_sufficient(&m, &x, &y).then(|| (json!(null), Vec::new()))
        }
        RelationKind::Sufficient => {
            let (x, y) = (assignment(&m, args.0)?, assignment(&m, args.1)?);
            sufficiency::sufficient(&m, &x, &y).map(|c| {
                let links: Vec<String> = c.links.iter().map(|l| format!("{{{}}}", l.display(sig))).collect();
                (to_json(&c.named(sig)), vec![format!("chain: {}", links.join(" -> "))])
            })
        }
        RelationKind::WeakSufficient => {
            let ctx = context(&m, ctx)?;
            let (x, y) = (assignment(&m, args.0)?, assignment(&m, args.1)?);
            sufficiency::weakly_sufficient(&m, &ctx, &x, &y)
                .map_err(|e| e.to_string())?
                .then(|| (json!(null), Vec::new()))
        }
    };
    let verdict = cert.is_some();
    let (certificate, lines) = match cert {
        Some((j, l)) => ((!j.is_null()).then_some(j), l),
        None => (None, Vec::new()),
    };
    let report = RelationReport {
        relation: kind_name(kind),
        model: name.to_string(),
        verdict,
        certificate,
        lines,
        show_certificate: flags.witness,
    };
    Ok(Output {
        stdout: print_report(&report, flags.json),
        verdict,
    })
}

pub fn equiv(
    kind: EquivKindArg,
    file: &Path,
    names: (&str, &str),
    witness: &[String],
    flags: EquivFlags,
) -> Result<Output> {
    let defs = load(file)?;
    let (mut a, mut b) = (model(&defs, names.0)?, model(&defs, names.1)?);
    if !ModelPair::nests(a.signature(), b.signature()) {
        if ModelPair::nests(b.signature(), a.signature()) {
            eprintln!(
                "note: `{}` extends `{}`; comparing them the other way round",
                names.0, names.1
            );
            std::mem::swap(&mut a, &mut b);
        } else {
            return Err(format!(
                "neither of `{}` and `{}` has all the other's variables",
                names.0, names.1
            ));
        }
    }
    let pair = ModelPair::new(a, b).map_err(|e| e.to_string())?;
    let pinned = if witness.is_empty() {
        None
    } else {
        let es = pair.extension().signature();
        let text = witness.join(", ");
        Some(parse_assignment(&text, es).map_err(|d| format!("witness `{text}`: {d}"))?)
    };
    let config = EquivConfig {
        witness: pinned,
        strict_potential: flags.strict_potential,
        free_hidden: flags.free_hidden,
        ..EquivConfig::default()
    };
    let kind = match kind {
        EquivKindArg::Structural => EquivKind::Structural,
        EquivKindArg::Functional => EquivKind::Functional,
        EquivKindArg::Conservative => EquivKind::Conservative,
        EquivKindArg::Causal => EquivKind::Causal,
    };
    let report = check(&pair, kind, &config).map_err(|e| e.to_string())?;
    Ok(Output {
        verdict: report.verdict,
        stdout: print_report(&report, flags.json),
    })
}
