//! `flifc`: analyze, evaluate, translate and compile FLIF expressions.

mod check;
mod files;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flif_core::analysis::{exec_witness, io_disjoint_witness};
use flif_core::translate::{exfo_to_flif, flif_to_fo3n, flifio_to_exfo, fresh_output_renaming, rewrite_io_disjoint};
use flif_core::{
    compile_plan, eval_exfo, eval_flif, eval_flif_v, eval_plan, io_profile, parse_flif, parse_fo, parse_plan,
    Error, FlifExpr, Instance, Valuation, ValuationSet,
};
use flif_core::model::fmt_vars;

use files::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_parse_error() {
            CliError::Parse(e.to_string())
        } else {
            CliError::Semantic(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Semantic(_) | CliError::CheckFailed(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "flifc", version, about = "Forward logic of information flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Expression or formula text.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// File holding the expression or formula.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

impl Source {
    fn text(&self) -> Result<String, CliError> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(f)) => fs::read_to_string(f).map_err(|e| CliError::Io(format!("{}: {}", f.display(), e))),
            (None, None) => Err(CliError::Io("one of -e/--expr or -f/--file is required".into())),
        }
    }

    fn flif(&self) -> Result<FlifExpr, CliError> {
        Ok(parse_flif(&self.text()?)?)
    }
}

#[derive(Args)]
struct Db {
    /// Database file (JSON).
    #[arg(short = 'd', long = "database")]
    database: PathBuf,
}

impl Db {
    fn load(&self) -> Result<Instance, CliError> {
        files::load_database(&self.database)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fo2flif,
    Flif2fo3n,
    Flifio2fo,
}

#[derive(Subcommand)]
enum Command {
    /// Print input and output variables and io-disjointness.
    Analyze {
        #[command(flatten)]
        src: Source,
        /// Optional database; checks the expression against its schema.
        #[arg(short = 'd', long = "database")]
        database: Option<PathBuf>,
    },
    /// Evaluate an expression from an input valuation.
    Eval {
        #[command(flatten)]
        db: Db,
        #[command(flatten)]
        src: Source,
        /// Bindings: a JSON object or array of objects, inline or a file.
        #[arg(long = "in")]
        input: String,
        /// Evaluate over this explicit variable set instead of from inputs.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Evaluate an executable first-order formula.
    EvalFo {
        #[command(flatten)]
        db: Db,
        #[command(flatten)]
        src: Source,
        #[arg(long = "in")]
        input: Option<String>,
        /// Input variables; defaults to those bound by --in.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Translate between FLIF and executable FO.
    Translate {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        src: Source,
        /// fo2flif: input variables; flif2fo3n: ordered variable list.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Rewrite into an io-disjoint expression.
    Rewrite {
        #[command(flatten)]
        src: Source,
        /// Renaming of the outputs as a JSON object, inline or a file.
        #[arg(long)]
        rho: Option<String>,
    },
    /// Compile an io-disjoint expression to a plan.
    Compile {
        #[command(flatten)]
        src: Source,
        /// Inline lets, then specialize and simplify for input schema I.
        #[arg(long)]
        simplify: bool,
        /// Write the plan here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Evaluate a plan against an In relation.
    RunPlan {
        #[command(flatten)]
        db: Db,
        /// Plan text.
        #[arg(short = 'e', long = "expr", conflicts_with = "plan")]
        expr: Option<String>,
        /// Plan file.
        #[arg(short = 'p', long = "plan")]
        plan: Option<PathBuf>,
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Cross-check all applicable engines on one expression.
    Check {
        #[command(flatten)]
        db: Db,
        #[command(flatten)]
        src: Source,
        /// Input valuations; random ones are drawn when absent.
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("flifc: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Analyze { src, database } => {
            let e = src.flif()?;
            if let Some(path) = database {
                e.validate(files::load_database(&path)?.schema())?;
            }
            let io = io_profile(&e);
            let mut out = format!("I={} O={} io-disjoint: ", fmt_vars(&io.inputs), fmt_vars(&io.outputs));
            match io_disjoint_witness(&e) {
                None => out.push_str("yes\n"),
                Some(w) => out.push_str(&format!("no\nwitness: {}\n", w)),
            }
            Ok(out)
        }
        Command::Eval {
            db,
            src,
            input,
            vars,
            format,
        } => {
            let db = db.load()?;
            let e = src.flif()?;
            let rows = files::load_bindings(&input)?;
            let mut result: Option<ValuationSet> = None;
            for nu in rows {
                let part = match &vars {
                    Some(v) => eval_flif_v(&e, &files::var_set(&files::parse_vars(v)?), &db, &nu)?,
                    None => {
                        let inputs = io_profile(&e).inputs;
                        eval_flif(&e, &db, &bind(&nu, &inputs)?)?
                    }
                };
                result = Some(merge(result, part)?);
            }
            Ok(files::render(&result.unwrap_or_else(|| ValuationSet::new(e.vars())), format))
        }
        Command::EvalFo {
            db,
            src,
            input,
            vars,
            format,
        } => {
            let db = db.load()?;
            let phi = parse_fo(&src.text()?)?;
            let rows = match &input {
                Some(i) => files::load_bindings(i)?,
                None => vec![Valuation::new()],
            };
            let mut result: Option<ValuationSet> = None;
            for nu in rows {
                let v = match &vars {
                    Some(v) => files::var_set(&files::parse_vars(v)?),
                    None => nu.domain(),
                };
                if let Some(w) = exec_witness(&phi, &v) {
                    return Err(CliError::Semantic(format!(
                        "formula is not {}-executable; offending subformula: {}",
                        fmt_vars(&v),
                        w
                    )));
                }
                let part = eval_exfo(&phi, &v, &db, &bind(&nu, &v)?)?;
                result = Some(merge(result, part)?);
            }
            Ok(files::render(&result.expect("at least one row"), format))
        }
        Command::Translate { mode, src, vars } => {
            let text = src.text()?;
            let vars = vars.as_deref().map(files::parse_vars).transpose()?;
            let out = match mode {
                Mode::Fo2flif => {
                    let phi = parse_fo(&text)?;
                    exfo_to_flif(&phi, &files::var_set(&vars.unwrap_or_default()))?.to_string()
                }
                Mode::Flif2fo3n => {
                    let e = parse_flif(&text)?;
                    let xs = vars.unwrap_or_else(|| e.vars().into_iter().collect());
                    flif_to_fo3n(&e, &xs)?.formula.to_string()
                }
                Mode::Flifio2fo => flifio_to_exfo(&parse_flif(&text)?)?.to_string(),
            };
            Ok(format!("{}\n", out))
        }
        Command::Rewrite { src, rho } => {
            let e = src.flif()?;
            let rho = match rho {
                Some(r) => files::load_renaming(&r)?,
                None => fresh_output_renaming(&e, &Default::default()),
            };
            let mut forbidden = e.vars();
            forbidden.extend(rho.image());
            Ok(format!("{}\n", rewrite_io_disjoint(&e, &rho, &forbidden)?))
        }
        Command::Compile {
            src,
            simplify,
            output,
        } => {
            let e = src.flif()?;
            let mut plan = compile_plan(&e)?;
            if simplify {
                let i = io_profile(&e).inputs;
                plan = plan.inline_lets().specialize(&i)?.simplify(&i)?;
            }
            let text = format!("{}\n", plan);
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::RunPlan {
            db,
            expr,
            plan,
            input,
            format,
        } => {
            let db = db.load()?;
            let text = match (expr, plan) {
                (Some(t), _) => t,
                (None, Some(p)) => {
                    fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {}", p.display(), e)))?
                }
                (None, None) => return Err(CliError::Io("one of -e/--expr or -p/--plan is required".into())),
            };
            let plan = parse_plan(text.trim())?;
            let n = files::load_relation(&input)?;
            Ok(files::render(&eval_plan(&plan, &db, &n)?, format))
        }
        Command::Check { db, src, input, seed } => {
            let db = db.load()?;
            let e = src.flif()?;
            let given = match &input {
                Some(i) => files::load_bindings(i)?,
                None => Vec::new(),
            };
            let report = check::run(&e, &db, &given, seed)?;
            let mut out = report.lines.join("\n");
            out.push('\n');
            out.push_str(&report.summary());
            out.push('\n');
            Ok(out)
        }
    }
}

/// Restricts a binding to `vars`, failing when one is missing.
fn bind(nu: &Valuation, vars: &std::collections::BTreeSet<flif_core::VarName>) -> Result<Valuation, CliError> {
    if let Some(x) = vars.iter().find(|x| !nu.contains(x)) {
        return Err(CliError::Semantic(format!("input valuation {} does not bind `{}`", nu, x)));
    }
    Ok(nu.restrict(vars)?)
}

fn merge(acc: Option<ValuationSet>, part: ValuationSet) -> Result<ValuationSet, CliError> {
    match acc {
        None => Ok(part),
        Some(mut acc) => {
            for row in part {
                acc.insert(row)?;
            }
            Ok(acc)
        }
    }
}
