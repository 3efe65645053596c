//! `qwa`: evaluate, construct, decide and sample probabilistic weighted
//! automata stored as `.qwa` documents.
//!
//! Exit codes: 0 success, 2 input error, 3 invalid automaton, 4 problem not
//! decidable or not supported.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwa_core::construct::{self, Acceptance, BooleanAutomaton, Combiner, Construction};
use qwa_core::decide::{self, closure, Closure, DecisionProblem, ProblemKind, Status};
use qwa_core::document::{self, AutomatonDocument};
use qwa_core::oracle::{fixture, monte_carlo, FixtureName};
use qwa_core::rational::{format_rational, parse_rational, Rational};
use qwa_core::{evaluate_word, Discount, Error, LassoWord, Semantics, ValueFunction, ValueKind, WeightedAutomaton};

#[derive(Parser)]
#[command(name = "qwa", version, about = "Probabilistic weighted automata on lasso words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact value of a lasso word.
    Eval(EvalArgs),
    /// Build a new automaton from one or two operands.
    Construct(ConstructArgs),
    /// Decide emptiness or universality against a threshold.
    Check(CheckArgs),
    /// Print the decidability status of a problem.
    Classify(ClassifyArgs),
    /// Write a reference automaton.
    Fixture(FixtureArgs),
    /// Sample runs and print empirical statistics.
    Sample(SampleArgs),
}

#[derive(Args)]
struct AutomatonArg {
    /// Automaton document (positional form).
    file: Option<PathBuf>,
    /// Automaton document.
    #[arg(long = "automaton", conflicts_with = "file")]
    automaton: Option<PathBuf>,
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long = "value")]
    value: ValueKind,
    /// Discount factor `p/q`, required with `--value disc`.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Args)]
struct WordArgs {
    /// Prefix letters separated by '.', possibly empty.
    #[arg(long, default_value = "")]
    prefix: String,
    /// Loop letters separated by '.'.
    #[arg(long = "loop")]
    cycle: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    automaton: AutomatonArg,
    #[command(flatten)]
    value: ValueArgs,
    #[arg(long)]
    semantics: Semantics,
    #[command(flatten)]
    word: WordArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    MaxInitial,
    MinInitial,
    ProductMax,
    ProductMin,
    SumLimsup,
    Threshold,
    CobuchiToBuchi,
    Uniformize,
    Negate,
}

impl ConstructKind {
    fn construction(self) -> Construction {
        match self {
            ConstructKind::MaxInitial => Construction::MaxInitial,
            ConstructKind::MinInitial => Construction::MinInitial,
            ConstructKind::ProductMax => Construction::ProductMax,
            ConstructKind::ProductMin => Construction::ProductMin,
            ConstructKind::SumLimsup => Construction::SumLimSup,
            ConstructKind::Threshold => Construction::Threshold,
            ConstructKind::CobuchiToBuchi => Construction::CoBuchiToBuchi,
            ConstructKind::Uniformize => Construction::Uniformize,
            ConstructKind::Negate => Construction::Negate,
        }
    }

    fn operands(self) -> usize {
        match self {
            ConstructKind::MaxInitial
            | ConstructKind::MinInitial
            | ConstructKind::ProductMax
            | ConstructKind::ProductMin
            | ConstructKind::SumLimsup => 2,
            _ => 1,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: ConstructKind,
    /// Operand documents.
    operands: Vec<PathBuf>,
    /// Threshold `v` for `threshold`.
    #[arg(long)]
    threshold: Option<String>,
    /// Acceptance for `threshold` (buchi or cobuchi).
    #[arg(long = "kind")]
    acceptance: Option<Acceptance>,
    /// Accepting states for `cobuchi-to-buchi`, comma separated. Defaults
    /// to the states whose outgoing edges all have weight 1.
    #[arg(long, value_delimiter = ',')]
    accepting: Option<Vec<String>>,
    /// Intended class of the operands; checked against the closure table.
    #[arg(long = "value", requires = "semantics")]
    value: Option<ValueKind>,
    #[arg(long, requires = "value")]
    semantics: Option<Semantics>,
    /// Output document; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    problem: ProblemKind,
    #[command(flatten)]
    automaton: AutomatonArg,
    #[command(flatten)]
    value: ValueArgs,
    #[arg(long)]
    semantics: Semantics,
    /// Threshold `ν` as `k` or `p/q`.
    #[arg(long, default_value = "0")]
    threshold: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long = "value")]
    value: ValueKind,
    #[arg(long)]
    semantics: Semantics,
    #[arg(long)]
    problem: ProblemKind,
}

#[derive(Args)]
struct FixtureArgs {
    name: String,
    /// Output document; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    automaton: AutomatonArg,
    #[command(flatten)]
    value: ValueArgs,
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, default_value_t = 1000)]
    horizon: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) => 3,
            Error::NotDecidable(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Construct(args) => run_construct(args),
        Command::Check(args) => run_check(args),
        Command::Classify(args) => run_classify(args),
        Command::Fixture(args) => run_fixture(args),
        Command::Sample(args) => run_sample(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> CliResult<WeightedAutomaton> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let doc = document::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    doc.to_automaton().map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_arg(arg: &AutomatonArg) -> CliResult<WeightedAutomaton> {
    let path = arg
        .automaton
        .as_ref()
        .or(arg.file.as_ref())
        .ok_or_else(|| Failure::input("an automaton document is required"))?;
    load(path)
}

fn rational(text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| Failure::input(e.to_string()))
}

fn value_function(args: &ValueArgs) -> CliResult<ValueFunction> {
    match (args.value, &args.lambda) {
        (ValueKind::Disc, Some(l)) => Ok(ValueFunction::Disc(Discount::new(rational(l)?)?)),
        (ValueKind::Disc, None) => Err(Failure::input("--value disc requires --lambda")),
        (_, Some(_)) => Err(Failure::input("--lambda is only meaningful with --value disc")),
        (ValueKind::Sup, None) => Ok(ValueFunction::Sup),
        (ValueKind::LimSup, None) => Ok(ValueFunction::LimSup),
        (ValueKind::LimInf, None) => Ok(ValueFunction::LimInf),
        (ValueKind::LimAvg, None) => Ok(ValueFunction::LimAvg),
    }
}

fn lasso(args: &WordArgs) -> CliResult<LassoWord> {
    Ok(LassoWord::parse(&args.prefix, &args.cycle)?)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_eval(args: EvalArgs) -> CliResult {
    let automaton = load_arg(&args.automaton)?;
    let valfn = value_function(&args.value)?;
    let word = lasso(&args.word)?;
    let v = evaluate_word(&automaton, &valfn, args.semantics, &word)?;
    println!("{}", format_rational(&v));
    Ok(())
}

/// Refuses a construction whose closure law is not established for the
/// declared class.
fn check_closure(construction: Construction, value: ValueKind, semantics: Semantics) -> CliResult {
    let Some((op, realized)) = construction.law() else { return Ok(()) };
    let class = format!("{}{}", semantics.acronym(), value);
    match closure(value, semantics, op) {
        None => Err(Failure::unsupported(format!("{class} is not listed in the closure table"))),
        Some(Closure::Closed) if realized.contains(&(value, semantics)) => Ok(()),
        Some(Closure::Closed) => Err(Failure::unsupported(format!(
            "closure table: {class} is closed under {op}, but this construction does not realize it"
        ))),
        Some(status) => Err(Failure::unsupported(format!("closure table: {class} under {op} is {status}"))),
    }
}

fn run_construct(args: ConstructArgs) -> CliResult {
    let construction = args.kind.construction();
    if let (Some(v), Some(s)) = (args.value, args.semantics) {
        check_closure(construction, v, s)?;
    }
    if args.operands.len() != args.kind.operands() {
        return Err(Failure::input(format!(
            "this construction takes {} operand(s), got {}",
            args.kind.operands(),
            args.operands.len()
        )));
    }
    let ops = args.operands.iter().map(|p| load(p)).collect::<CliResult<Vec<_>>>()?;
    let result = match args.kind {
        ConstructKind::MaxInitial | ConstructKind::MinInitial => construct::initial_choice(&ops[0], &ops[1])?,
        ConstructKind::ProductMax => construct::synchronized_product(&ops[0], &ops[1], Combiner::Max)?,
        ConstructKind::ProductMin => construct::synchronized_product(&ops[0], &ops[1], Combiner::Min)?,
        ConstructKind::SumLimsup => construct::limsup_sum(&ops[0], &ops[1])?,
        ConstructKind::Threshold => {
            let v = rational(args.threshold.as_deref().ok_or_else(|| Failure::input("--threshold is required"))?)?;
            let kind = args.acceptance.ok_or_else(|| Failure::input("--kind is required"))?;
            construct::threshold_boolean(&ops[0], &v, kind).automaton
        }
        ConstructKind::CobuchiToBuchi => {
            let input = BooleanAutomaton::new(ops[0].clone(), Acceptance::CoBuchi)?;
            let accepting: BTreeSet<usize> = match &args.accepting {
                Some(names) => names
                    .iter()
                    .map(|n| ops[0].state_index(n).ok_or_else(|| Failure::from(Error::UnknownState(n.clone()))))
                    .collect::<CliResult<_>>()?,
                None => input.accepting_states(),
            };
            construct::cobuchi_to_buchi_positive(&input, &accepting)?.automaton
        }
        ConstructKind::Uniformize => construct::uniformize(&construct::support_automaton(&ops[0]))?,
        ConstructKind::Negate => qwa_core::negate_weights(&ops[0]),
    };
    let report = result.validate();
    if !report.is_empty() {
        return Err(Error::Invalid(report).into());
    }
    let text = document::serialize(&AutomatonDocument::from_automaton(&result));
    write_output(args.output.as_ref(), &text)?;
    let count = format!("states: {}", result.num_states());
    if args.output.is_some() {
        println!("{count}");
    } else {
        eprintln!("{count}");
    }
    Ok(())
}

fn run_check(args: CheckArgs) -> CliResult {
    let valfn = value_function(&args.value)?;
    let entry = decide::classify(valfn.kind(), args.semantics, args.problem);
    if entry.status != Status::Decidable {
        return Err(Failure::unsupported(entry.to_string()));
    }
    let automaton = load_arg(&args.automaton)?;
    let problem = DecisionProblem { kind: args.problem, threshold: rational(&args.threshold)? };
    if valfn == ValueFunction::Sup && args.semantics == Semantics::AlmostSure {
        eprintln!(
            "caveat: almost-sure Sup is decided through the universal-semantics reduction, \
             which can differ from the measure-theoretic value on some automata"
        );
    }
    let decision = match decide::decide(&automaton, &valfn, args.semantics, &problem) {
        Err(Error::NotDecidable(e)) if e.status == Status::Decidable => {
            return Err(Failure::unsupported("Decidable (no decision procedure implemented)"));
        }
        other => other?,
    };
    println!("{}", if decision.holds { "SAT" } else { "UNSAT" });
    if let Some(w) = decision.witness {
        println!("witness: {} ({})", w.word, w.description);
    }
    Ok(())
}

fn run_classify(args: ClassifyArgs) -> CliResult {
    println!("{}", decide::classify(args.value, args.semantics, args.problem));
    Ok(())
}

fn run_fixture(args: FixtureArgs) -> CliResult {
    let name: FixtureName = args.name.parse()?;
    let text = name.document();
    write_output(args.output.as_ref(), &text)?;
    if args.output.is_some() {
        println!("states: {}", fixture(name).automaton.num_states());
    }
    Ok(())
}

fn run_sample(args: SampleArgs) -> CliResult {
    let automaton = load_arg(&args.automaton)?;
    let valfn = value_function(&args.value)?;
    let word = lasso(&args.word)?;
    let report = monte_carlo(&automaton, &valfn, &word, args.horizon, args.samples, args.seed)?;
    print!("{report}");
    Ok(())
}
