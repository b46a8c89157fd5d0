use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use rda::experiment::{self, ExperimentConfig, ExperimentError, Preset};
use rda::io::LoadError;
use rda_core::circuit::parse;
use rda_core::data::LabelEncoding;
use rda_core::rdiff::{self, BlackBoxFn};
use rda_core::semantics::{equiv_a, equiv_bool, to_poly};
use rda_core::{BitVec, Error, Term};

/// Widest `inputs + outputs` for which `rdiff --brute` prints a table.
const BRUTE_LIMIT: usize = 20;

#[derive(Parser)]
#[command(
    name = "rda",
    version,
    about = "Boolean circuits, their reverse derivatives, and training by Reverse Derivative Ascent"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the polynomial denotation of a circuit.
    Poly { circuit: String },
    /// Report `and` gates reachable twice from one input.
    Safety { circuit: String },
    /// Print the sum-of-monomials circuit of the polynomial.
    Canon { circuit: String },
    /// Print a safe circuit computing the same boolean function.
    Safe { circuit: String },
    /// Print the reverse derivative as a circuit, or with --brute as a truth table.
    Rdiff {
        circuit: String,
        /// Tabulate the finite-difference reverse derivative instead.
        #[arg(long)]
        brute: bool,
    },
    /// Decide equivalence; exits 0 iff the circuits are equivalent.
    Equiv {
        left: String,
        right: String,
        #[arg(long = "mod", value_enum, default_value = "bool")]
        modulo: Modulo,
    },
    /// Run a benchmark and write a TSV report.
    Train(TrainArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Modulo {
    /// Polynomial-circuit equations only.
    #[value(name = "A", alias = "a")]
    A,
    /// Boolean functions.
    Bool,
}

#[derive(clap::Args)]
struct TrainArgs {
    /// iris2, iris3 or mnist01.
    dataset: Preset,
    #[arg(long, default_value = "binary")]
    encoding: LabelEncoding,
    /// Passes over the training set (default: 16 for Iris, 1 for MNIST).
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long, default_value_t = experiment::DEFAULT_SEED)]
    seed: u64,
    /// Where to write the TSV report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Held-out share of the Iris records.
    #[arg(long, default_value_t = experiment::DEFAULT_TEST_FRACTION)]
    test_fraction: f64,
    /// Train on only the first N MNIST examples of the two digits.
    #[arg(long, value_name = "N")]
    subsample: Option<usize>,
    /// Present examples in file order every epoch.
    #[arg(long)]
    no_shuffle: bool,
    /// Start from random parameters (seeded by --seed) instead of zeros.
    #[arg(long)]
    random_init: bool,
    /// Iris CSV (falls back to $IRIS_PATH, then data/iris.data).
    #[arg(long)]
    iris_path: Option<PathBuf>,
    /// Directory with the four MNIST IDX files (falls back to $MNIST_DIR, then data/mnist).
    #[arg(long)]
    mnist_dir: Option<PathBuf>,
    /// Write the parameter trajectory, one hex line per step.
    #[arg(long, value_name = "PATH")]
    trajectory: Option<PathBuf>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::TypeMismatch { .. } => 2,
            Error::LimitExceeded { .. } => 3,
            Error::ArityMismatch { .. } => 4,
            _ => 1,
        };
        Failure { code, error: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Core(core) => core.into(),
            ExperimentError::MissingData(_) => Failure {
                code: 5,
                error: e.into(),
            },
            ExperimentError::Load(ref load) if load.is_missing_file() => Failure {
                code: 5,
                error: e.into(),
            },
            other => Failure {
                code: 1,
                error: other.into(),
            },
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        ExperimentError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn term(text: &str) -> Result<Term, Failure> {
    let t = parse(text)?;
    Ok(t)
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Poly { circuit } => println!("{}", to_poly(&term(&circuit)?)?),
        Command::Safety { circuit } => println!("{}", rdiff::is_safe(&term(&circuit)?)?),
        Command::Canon { circuit } => println!("{}", rdiff::canonical_form(&term(&circuit)?)?),
        Command::Safe { circuit } => println!("{}", rdiff::safe_form(&term(&circuit)?)?),
        Command::Rdiff { circuit, brute: false } => {
            println!("{}", rdiff::reverse_derivative_bool(&term(&circuit)?)?)
        }
        Command::Rdiff { circuit, brute: true } => print_brute_table(&term(&circuit)?)?,
        Command::Equiv { left, right, modulo } => {
            let (c, d) = (term(&left)?, term(&right)?);
            let same = match modulo {
                Modulo::A => equiv_a(&c, &d)?,
                Modulo::Bool => equiv_bool(&c, &d)?,
            };
            println!("{}", if same { "yes" } else { "no" });
            return Ok(if same { 0 } else { 1 });
        }
        Command::Train(args) => train(args)?,
    }
    Ok(0)
}

fn print_brute_table(t: &Term) -> Result<(), Failure> {
    let arity = t.arity()?;
    let width = arity.inputs + arity.outputs;
    if width > BRUTE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "brute-force table rows (2^(inputs+outputs))",
            requested: 1u128 << width.min(127),
            limit: 1u128 << BRUTE_LIMIT,
        }
        .into());
    }
    let r = rdiff::rdiff_brute(&BlackBoxFn::from_term(t)?);
    let mut out = String::new();
    for k in 0..1u64 << width {
        let input = BitVec::from_uint(k, width);
        out.push_str(&format!("{} {}\n", input, r.apply(&input)?));
    }
    print!("{out}");
    Ok(())
}

fn train(args: TrainArgs) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::new(args.dataset, args.encoding);
    cfg.epochs = args.epochs.unwrap_or(cfg.epochs);
    cfg.seed = args.seed;
    cfg.shuffle = !args.no_shuffle;
    cfg.random_init = args.random_init;
    cfg.test_fraction = args.test_fraction;
    cfg.subsample = args.subsample;
    cfg.iris_path = experiment::resolve_path(args.iris_path, "IRIS_PATH", &cfg.iris_path);
    cfg.mnist_dir = experiment::resolve_path(args.mnist_dir, "MNIST_DIR", &cfg.mnist_dir);

    let outcome = experiment::run(&cfg)?;
    if let Some(path) = &args.out {
        write(path, &outcome.report.to_tsv())?;
    }
    if let Some(path) = &args.trajectory {
        write(path, &outcome.trajectory.to_hex_dump())?;
    }
    println!("{}", outcome.summary());
    Ok(())
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
