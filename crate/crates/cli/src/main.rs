use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evalagg::aggregate::{check_structural, Aggregate, AggregatorSpec, Property};
use evalagg::builtin::{builtin_space, four_candidate_tie_order, BUILTIN_SPACES};
use evalagg::io::{parse_inline_profile, parse_profile, parse_space, parse_tie_order, parse_weights};
use evalagg::manipulate::{certify, ManipulationKind, SearchOptions};
use evalagg::metric::{TieOrder, WeightVector};
use evalagg::search::DEFAULT_BUDGET;
use evalagg::space::{EvaluationSpace, Profile};
use evalagg::verify::{run_suite, SUITES};
use evalagg::Error;

/// Aggregation of binary evaluations over constrained spaces.
#[derive(Parser)]
#[command(name = "evalagg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a space
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Apply an aggregator to one profile
    Run(RunArgs),
    /// Search exhaustively for a manipulation
    Hunt(HuntArgs),
    /// Decide a structural property exhaustively
    Check(CheckArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SpaceCommand {
    /// Issue count, size, generator and labels
    Info(SpaceArg),
    /// Minimally infeasible partial evaluations, one per line
    Mipes(SpaceArg),
}

#[derive(Args)]
struct SpaceArg {
    /// Built-in alias (pref3, pref4, doctrinal, classifier4, cycle6, choose4-2, choose5-2) or space file
    #[arg(long)]
    space: String,
}

#[derive(Args)]
struct AggregatorArgs {
    #[command(flatten)]
    space: SpaceArg,
    /// dictator:<i> | majority | quota:<t1,..,tm> | plurality | partition:<K1;K2;..> | nn(majority) | nn(quota:..) | swm
    #[arg(long)]
    aggregator: String,
    /// Weights file, or the weights inline ("2 1 1")
    #[arg(long)]
    weights: Option<String>,
    /// Tie-order file, or ascending | descending | shuffled:<seed> | four-candidate
    #[arg(long)]
    tieorder: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    agg: AggregatorArgs,
    /// Profile file, or rows inline ("010,100,111")
    #[arg(long)]
    profile: String,
}

#[derive(Args)]
struct HuntArgs {
    #[command(flatten)]
    agg: AggregatorArgs,
    /// Number of voters
    #[arg(short = 'n', long = "voters")]
    voters: usize,
    /// partial | full | hamming
    #[arg(long)]
    kind: String,
    /// Maximum aggregator evaluations
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    agg: AggregatorArgs,
    /// Number of voters
    #[arg(short = 'n', long = "voters")]
    voters: usize,
    /// iia | monotone | anonymous | dictatorial
    #[arg(long)]
    property: String,
    /// Maximum aggregator evaluations
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; `--list` shows them
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    #[arg(long)]
    list: bool,
}

/// A failure with the exit status it maps to.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: 1,
            message: message.into(),
        }
    }
}

fn context<'a>(flag: &'a str, value: &'a str) -> impl Fn(Error) -> Failure + 'a {
    move |e| match e {
        Error::BudgetExceeded { .. } => Failure {
            status: 2,
            message: format!("{flag} {value}: {e}"),
        },
        e => Failure::usage(format!("{flag} {value}: {e}")),
    }
}

fn read_file(flag: &str, path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{flag} {path}: {e}")))
}

fn load_space(arg: &str) -> Result<EvaluationSpace, Failure> {
    if let Some(space) = builtin_space(arg) {
        return Ok(space);
    }
    if !Path::new(arg).exists() {
        return Err(Failure::usage(format!(
            "--space {arg}: neither a file nor one of {}",
            BUILTIN_SPACES.join(", ")
        )));
    }
    parse_space(&read_file("--space", arg)?).map_err(context("--space", arg))
}

fn load_weights(arg: Option<&str>, m: usize) -> Result<Option<WeightVector>, Failure> {
    let Some(arg) = arg else { return Ok(None) };
    let text = if Path::new(arg).exists() {
        read_file("--weights", arg)?
    } else {
        arg.to_string()
    };
    parse_weights(&text, m).map(Some).map_err(context("--weights", arg))
}

fn load_ties(arg: Option<&str>, space: &EvaluationSpace) -> Result<Option<TieOrder>, Failure> {
    let Some(arg) = arg else { return Ok(None) };
    let named = match arg {
        "ascending" => Some(TieOrder::ascending(space)),
        "descending" => Some(TieOrder::descending(space)),
        "four-candidate" => Some(four_candidate_tie_order(space).map_err(context("--tieorder", arg))?),
        _ => match arg.strip_prefix("shuffled:") {
            Some(seed) => Some(TieOrder::shuffled(
                space,
                seed.parse()
                    .map_err(|_| Failure::usage(format!("--tieorder {arg}: bad seed")))?,
            )),
            None => None,
        },
    };
    if let Some(t) = named {
        return Ok(Some(t));
    }
    if !Path::new(arg).exists() {
        return Err(Failure::usage(format!("--tieorder {arg}: no such file or named order")));
    }
    parse_tie_order(&read_file("--tieorder", arg)?, space)
        .map(Some)
        .map_err(context("--tieorder", arg))
}

fn load_profile(arg: &str, space: &EvaluationSpace) -> Result<Profile, Failure> {
    if Path::new(arg).exists() {
        parse_profile(&read_file("--profile", arg)?, space).map_err(context("--profile", arg))
    } else {
        parse_inline_profile(arg, space).map_err(context("--profile", arg))
    }
}

struct Setup {
    space: EvaluationSpace,
    spec: AggregatorSpec,
    weights: Option<WeightVector>,
    ties: Option<TieOrder>,
}

fn setup(args: &AggregatorArgs) -> Result<Setup, Failure> {
    let space = load_space(&args.space.space)?;
    let spec: AggregatorSpec = args
        .aggregator
        .parse()
        .map_err(context("--aggregator", &args.aggregator))?;
    let weights = load_weights(args.weights.as_deref(), space.m())?;
    let ties = load_ties(args.tieorder.as_deref(), &space)?;
    Ok(Setup {
        space,
        spec,
        weights,
        ties,
    })
}

fn space_info(arg: &SpaceArg) -> Result<(), Failure> {
    let space = load_space(&arg.space)?;
    println!("m: {}", space.m());
    println!("feasible: {}", space.len());
    println!("provenance: {}", space.provenance());
    println!("labels: {}", space.labels().join(" "));
    Ok(())
}

fn space_mipes(arg: &SpaceArg) -> Result<(), Failure> {
    let space = load_space(&arg.space)?;
    for a in space.mipes() {
        println!("{a}");
    }
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let s = setup(&args.agg)?;
    let profile = load_profile(&args.profile, &s.space)?;
    let agg = s
        .spec
        .build(&s.space, profile.n(), s.weights, s.ties)
        .map_err(context("--aggregator", &args.agg.aggregator))?;
    let out = agg.apply(&profile).map_err(context("--profile", &args.profile))?;
    println!("{out}");
    Ok(())
}

fn hunt(args: &HuntArgs) -> Result<(), Failure> {
    let s = setup(&args.agg)?;
    let weights = s.weights.clone().unwrap_or_else(|| WeightVector::uniform(s.space.m()));
    let kind = ManipulationKind::parse(&args.kind, weights).map_err(context("--kind", &args.kind))?;
    let agg = s
        .spec
        .build(&s.space, args.voters, s.weights, s.ties)
        .map_err(context("--aggregator", &args.agg.aggregator))?;
    let options = SearchOptions {
        budget: args.budget,
        parallel: true,
    };
    let budget = args.budget.to_string();
    let cert = certify(&s.space, &agg, &kind, options).map_err(context("--budget", &budget))?;
    println!("{cert}");
    Ok(())
}

fn check(args: &CheckArgs) -> Result<(), Failure> {
    let s = setup(&args.agg)?;
    let property: Property = args.property.parse().map_err(context("--property", &args.property))?;
    let agg = s
        .spec
        .build(&s.space, args.voters, s.weights, s.ties)
        .map_err(context("--aggregator", &args.agg.aggregator))?;
    let budget = args.budget.to_string();
    let report = check_structural(&s.space, &agg as &dyn Aggregate, property, args.budget)
        .map_err(context("--budget", &budget))?;
    println!("{report}");
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    if args.list {
        for (name, about) in SUITES {
            println!("{name}\t{about}");
        }
        return Ok(());
    }
    let name = args.suite.as_deref().expect("required unless --list");
    let report = run_suite(name).map_err(|e| {
        let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
        Failure::usage(format!("--suite {name}: {e}; known suites: {}", names.join(", ")))
    })?;
    println!("{report}");
    eprintln!("runtime: {:.3}s", report.runtime.as_secs_f64());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            status: 3,
            message: format!("suite {name} failed"),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(status);
        }
    };
    let result = match &cli.command {
        Command::Space(SpaceCommand::Info(a)) => space_info(a),
        Command::Space(SpaceCommand::Mipes(a)) => space_mipes(a),
        Command::Run(a) => run(a),
        Command::Hunt(a) => hunt(a),
        Command::Check(a) => check(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
