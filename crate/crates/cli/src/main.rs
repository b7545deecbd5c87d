//! `causalq`: validate models, solve them, and query causal relations and
//! equivalences. Exit status is 0 for a true verdict, 1 for false and 2 for
//! any error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

const SYNTAX: &str = "\
Argument syntax:
  assignment   A=1, C=0          (empty string for the empty assignment)
  contrast     A=1,C=1 vs A=0,C=0  or, for one variable, C=1 vs 0
  formula      [A<-1, C<-0] E=1 & !(B=0)
  --context    U_C=1 (repeatable, or comma-separated)

Exit status: 0 true, 1 false, 2 error.";

#[derive(Parser)]
#[command(name = "causalq", version, about = "Finite-domain structural causal models", after_help = SYNTAX)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every model in FILE for totality and acyclicity.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the endogenous solution of MODEL in a context.
    Solve {
        file: PathBuf,
        model: String,
        #[arg(long, value_name = "K=V")]
        context: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a causal formula in a context.
    Query {
        file: PathBuf,
        model: String,
        formula: String,
        #[arg(long, value_name = "K=V")]
        context: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Decide a relation within one model.
    #[command(after_help = "\
Arguments by kind:
  parent, ancestor                      X Y        (variable names)
  potential-joint-parents|-ancestors    SRC TGT    (contrasts)
  actual-parent, actual-joint-ancestors SRC TGT    (contrasts, needs --context)
  direct-sufficient, sufficient         X Y        (assignments)
  weak-sufficient                       X Y        (assignments, needs --context)")]
    Relation {
        kind: RelationKind,
        file: PathBuf,
        model: String,
        #[arg(num_args = 2, value_names = ["ARG1", "ARG2"])]
        args: Vec<String>,
        #[arg(long, value_name = "K=V")]
        context: Vec<String>,
        /// Print the certificate of a true verdict.
        #[arg(long)]
        witness: bool,
        /// Require only the first step of an actual network to start from
        /// actual values.
        #[arg(long)]
        initial_source_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare MODEL_A with its extension MODEL_B.
    Equiv {
        kind: EquivKindArg,
        file: PathBuf,
        model_a: String,
        model_b: String,
        /// Pin the setting of the extension's extra exogenous variables.
        #[arg(long, value_name = "K=V")]
        witness: Vec<String>,
        /// Hold the extra exogenous variables at the witness in the
        /// potential-ancestry comparison too.
        #[arg(long)]
        strict_potential: bool,
        /// Let joint-parent steps in the extension set its extra endogenous
        /// variables freely.
        #[arg(long)]
        free_hidden: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationKind {
    Parent,
    Ancestor,
    PotentialJointParents,
    PotentialJointAncestors,
    ActualParent,
    ActualJointAncestors,
    DirectSufficient,
    Sufficient,
    WeakSufficient,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivKindArg {
    Structural,
    Functional,
    Conservative,
    Causal,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file, json } => commands::validate(&file, json),
        Command::Solve {
            file,
            model,
            context,
            json,
        } => commands::solve(&file, &model, &context, json),
        Command::Query {
            file,
            model,
            formula,
            context,
            json,
        } => commands::query(&file, &model, &formula, &context, json),
        Command::Relation {
            kind,
            file,
            model,
            args,
            context,
            witness,
            initial_source_only,
            json,
        } => commands::relation(
            kind,
            &file,
            &model,
            (&args[0], &args[1]),
            &context,
            commands::RelationFlags {
                witness,
                initial_source_only,
                json,
            },
        ),
        Command::Equiv {
            kind,
            file,
            model_a,
            model_b,
            witness,
            strict_potential,
            free_hidden,
            json,
        } => commands::equiv(
            kind,
            &file,
            (&model_a, &model_b),
            &witness,
            commands::EquivFlags {
                strict_potential,
                free_hidden,
                json,
            },
        ),
    };
    match result {
        Ok(output) => {
            print!("{}", output.stdout);
            if !output.stdout.ends_with('\n') {
                println!();
            }
            ExitCode::from(if output.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
