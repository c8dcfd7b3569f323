//! `waring`: command-line front end for waring-core.
//!
//! Every command prints one JSON report with the keys `command`, `field`,
//! `inputs`, `result` and `timing_ms`.

mod commands;
mod codec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use waring_core::classify::Decomposition;
use waring_core::fieldpoly::FieldSpec;
use waring_core::oracle::OracleBudget;
use waring_core::Error;

use commands::{BuildArgs, CertifyMode, Target, TargetSpec};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Certificate(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Certificate(_) => 5,
            CliError::Core(e) => match e {
                Error::AllZero
                | Error::DimensionMismatch { .. }
                | Error::Parse(_)
                | Error::NotHomogeneous(..)
                | Error::ZeroForm
                | Error::InvalidField(_)
                | Error::UnsupportedField(_)
                | Error::CharacteristicTooSmall { .. } => 2,
                Error::BudgetExceeded(_) | Error::SearchBudgetExceeded(_) | Error::TooLarge(_) => 3,
                Error::NotMinimalCertificate(_) => 5,
                _ => 4,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Certificate(m) => write!(f, "certificate invalid: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "waring", version, about = "Waring decompositions, their uniqueness and certificates")]
struct Cli {
    /// Field: `q=<prime>`, `<prime>` or `Q`.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Seed for every random choice of the invocation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Oracle caps as `points,rank,subsets`.
    #[arg(long = "oracle-budget", global = true)]
    oracle_budget: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Compact single-line JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TargetInput {
    /// Binary form in x0, x1.
    #[arg(long)]
    binary: Option<String>,
    /// Form in x0..xr.
    #[arg(long)]
    form: Option<String>,
    /// Comma-separated tensor coordinates in graded lex order.
    #[arg(long)]
    vector: Option<String>,
}

#[derive(Args)]
struct TargetArgs {
    #[command(flatten)]
    input: TargetInput,
    /// Ambient `r` and degree `d`.
    #[arg(long, num_args = 2, value_names = ["R", "D"])]
    space: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric rank of a form.
    Rank(TargetArgs),
    /// Minimal decompositions of a form.
    Decompose {
        #[command(flatten)]
        target: TargetArgs,
        /// Decompositions to report from the oracle path.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Structure case of a decomposition.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Further decompositions of the same form.
    Family {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Certificates for one decomposition or a pair.
    Certify {
        #[arg(long, required_unless_present = "pair", conflicts_with = "pair")]
        input: Option<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<PathBuf>>,
        /// Splitting hypersurface for the pair check, e.g. `x2`.
        #[arg(long, requires = "pair")]
        hypersurface: Option<String>,
        /// Exhaustive uniqueness probe for a single small decomposition.
        #[arg(long, conflicts_with = "pair")]
        bgl: bool,
    },
    /// Exhaustive search over the points of a small projective space.
    Oracle {
        #[command(flatten)]
        target: TargetArgs,
        /// Subset size; defaults to the rank.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Two decompositions on a plane cubic.
    #[command(name = "example-i1")]
    ExampleI1 {
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Build a decomposition of a given structure case.
    Build {
        /// A, B or C.
        #[arg(long)]
        case: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Points on the heavy curve.
        #[arg(long)]
        curve_count: Option<usize>,
        /// Points off the heavy curve.
        #[arg(long, default_value_t = 0)]
        off_count: usize,
    },
}

fn parse_budget(text: Option<&str>) -> Result<OracleBudget, CliError> {
    let mut b = OracleBudget::default();
    let Some(text) = text else {
        return Ok(b);
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::input("--oracle-budget expects `points,rank,subsets`"));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| CliError::input(format!("bad budget entry `{s}`")));
    b.max_points = num(parts[0])? as usize;
    b.max_rank = num(parts[1])? as usize;
    b.max_subsets = num(parts[2])?;
    b.validate()?;
    Ok(b)
}

impl TargetArgs {
    fn resolve(&self, field: FieldSpec) -> Result<Target, CliError> {
        let space = match &self.space {
            Some(v) => Some((v[0] as usize, u32::try_from(v[1]).map_err(|_| CliError::input("degree out of range"))?)),
            None => None,
        };
        let spec = match (&self.input.binary, &self.input.form, &self.input.vector) {
            (Some(b), _, _) => TargetSpec::Binary(b.clone()),
            (_, Some(f), _) => TargetSpec::Form(f.clone()),
            (_, _, Some(v)) => TargetSpec::Vector(v.clone()),
            _ => return Err(CliError::input("give --binary, --form or --vector")),
        };
        Target::resolve(&spec, field, space)
    }
}

fn read_decomposition(path: &PathBuf) -> Result<Decomposition, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{} is not JSON: {e}", path.display())))?;
    // Accept a bare decomposition or any report carrying one.
    let dec = v
        .pointer("/result/decomposition")
        .or_else(|| v.get("decomposition"))
        .unwrap_or(&v);
    codec::parse_decomposition(dec)
}

fn run(cli: &Cli) -> Result<(Value, bool), CliError> {
    let field = FieldSpec::parse(&cli.field)?;
    let budget = parse_budget(cli.oracle_budget.as_deref())?;
    let start = Instant::now();
    let (name, out) = match &cli.command {
        Command::Rank(t) => ("rank", commands::rank(field, &t.resolve(field)?, &budget)?),
        Command::Decompose { target, count } => (
            "decompose",
            commands::decompose(field, &target.resolve(field)?, &budget, *count)?,
        ),
        Command::Classify { input } => {
            let dec = read_decomposition(input)?;
            ("classify", commands::classify(&input.display().to_string(), &dec)?)
        }
        Command::Family { input, count } => {
            let dec = read_decomposition(input)?;
            (
                "family",
                commands::family(&input.display().to_string(), &dec, *count, cli.seed)?,
            )
        }
        Command::Certify {
            input,
            pair,
            hypersurface,
            bgl,
        } => {
            let (paths, mode) = match (input, pair) {
                (Some(p), _) => (vec![p.clone()], CertifyMode::Single { bgl: *bgl }),
                (None, Some(ps)) => (
                    ps.clone(),
                    CertifyMode::Pair {
                        hypersurface: hypersurface.clone(),
                    },
                ),
                (None, None) => return Err(CliError::input("give --input or --pair")),
            };
            let decs = paths.iter().map(read_decomposition).collect::<Result<Vec<_>, _>>()?;
            let names: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
            ("certify", commands::certify(&names, &decs, &mode, &budget)?)
        }
        Command::Oracle { target, size } => (
            "oracle",
            commands::oracle(field, &target.resolve(field)?, &budget, *size)?,
        ),
        Command::ExampleI1 { degree } => ("example-i1", commands::example_i1(field, *degree, cli.seed)?),
        Command::Build {
            case,
            degree,
            r,
            curve_count,
            off_count,
        } => {
            let args = BuildArgs {
                case: case.clone(),
                degree: *degree,
                r: *r,
                curve_count: *curve_count,
                off_count: *off_count,
                seed: cli.seed,
            };
            ("build", commands::build(field, &args)?)
        }
    };
    let report = json!({
        "command": name,
        "field": codec::field(out.field),
        "inputs": out.inputs,
        "result": out.result,
        "timing_ms": start.elapsed().as_millis() as u64,
    });
    Ok((report, out.certified))
}

fn emit(cli: &Cli, report: &Value) -> Result<(), CliError> {
    let mut text = if cli.json {
        serde_json::to_string(report)
    } else {
        serde_json::to_string_pretty(report)
    }
    .expect("reports serialize");
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|(report, certified)| {
        emit(&cli, &report)?;
        if certified {
            Ok(())
        } else {
            Err(CliError::Certificate("see the report's certificates".into()))
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("waring: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
