//! `tree-shuffle`: command-line access to the tree shuffle library.
//!
//! Exit codes: 0 on success (or all checks passing), 1 on a verification failure,
//! 2 on any input or usage error. Errors print one line starting with
//! `error[<kind>]:`.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tree_shuffle::{Error, Limits, PureTree, WeightDistribution};

#[derive(Debug, Parser)]
#[command(
    name = "tree-shuffle",
    version,
    about = "Random-to-front shuffles on pure rooted trees"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Maximum number of local orderings for matrix-based commands.
    #[arg(
        long,
        global = true,
        env = "TREE_SHUFFLE_MAX_STATES",
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    max_states: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print depth, node counts, state count and lattice size.
    Info { tree: PathBuf },
    /// Print the closed-form spectrum.
    Spectrum {
        #[command(flatten)]
        inputs: Inputs,
        /// Group equal eigenvalues.
        #[arg(long)]
        aggregate: bool,
    },
    /// Print the exact transition matrix with its state legend.
    Matrix {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Check the spectral identities and the lattice and semigroup invariants.
    Verify {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Decide whether the positive-weight subsets separate all siblings.
    Separating {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print the exact stationary distribution, or report that it is not unique.
    Stationary {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Run a seeded simulation and report visit counts.
    Simulate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 1_000)]
        burn_in: u64,
        /// Index of the starting ordering (default: the file's child order).
        #[arg(long)]
        start: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Inputs {
    tree: PathBuf,
    dist: PathBuf,
}

/// A failure mapped to an exit code and a one-line message.
#[derive(Debug)]
pub enum Failure {
    Input { kind: &'static str, detail: String },
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input { .. } => 2,
            Failure::Verification(_) => 1,
        }
    }

    fn line(&self) -> String {
        match self {
            Failure::Input { kind, detail } => format!("error[{kind}]: {detail}"),
            Failure::Verification(detail) => format!("error[verify]: {detail}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let kind = match err {
            Error::Verification(msg) => return Failure::Verification(msg),
            Error::CapExceeded { .. } => "cap",
            Error::Syntax(_) => "parse",
            Error::EmptyTree | Error::DuplicateLabel(_) | Error::NotPure { .. } => "tree",
            _ => "input",
        };
        Failure::Input {
            kind,
            detail: err.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input {
        kind: "file",
        detail: format!("{}: {e}", path.display()),
    })
}

fn load_tree(path: &Path) -> Result<PureTree, Failure> {
    PureTree::parse(&read(path)?).map_err(|e| {
        let mut failure = Failure::from(e);
        if let Failure::Input { detail, .. } = &mut failure {
            *detail = format!("{}: {detail}", path.display());
        }
        failure
    })
}

fn load(inputs: &Inputs) -> Result<(PureTree, WeightDistribution), Failure> {
    let tree = load_tree(&inputs.tree)?;
    let dist =
        WeightDistribution::parse(&tree, &read(&inputs.dist)?).map_err(
            |e| match Failure::from(e) {
                Failure::Input { kind, detail } => Failure::Input {
                    kind: if kind == "parse" {
                        "parse"
                    } else {
                        "distribution"
                    },
                    detail: format!("{}: {detail}", inputs.dist.display()),
                },
                other => other,
            },
        )?;
    Ok((tree, dist))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut limits = Limits::default();
    if let Some(cap) = cli.max_states {
        limits.max_states = cap;
    }
    let format = cli.format;
    match cli.command {
        Command::Info { tree } => Ok(render::info(&load_tree(&tree)?, format)),
        Command::Spectrum { inputs, aggregate } => {
            let (tree, dist) = load(&inputs)?;
            let table = tree_shuffle::spectrum::spectrum(&tree, &dist, limits.max_lattice)?;
            Ok(render::spectrum(&tree, &table, aggregate, format))
        }
        Command::Matrix { inputs } => {
            let (tree, dist) = load(&inputs)?;
            let matrix =
                tree_shuffle::spectrum::transition_matrix(&tree, &dist, limits.max_states)?;
            Ok(render::matrix(&tree, &matrix, format))
        }
        Command::Verify { inputs } => {
            let (tree, dist) = load(&inputs)?;
            let report = tree_shuffle::verify::verify_instance(&tree, &dist, &limits)?;
            let text = render::report(&report, format);
            if report.all_passed() {
                Ok(text)
            } else {
                print!("{text}");
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| c.status == tree_shuffle::spectrum::CheckStatus::Fail)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(Failure::Verification(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Separating { inputs } => {
            let (tree, dist) = load(&inputs)?;
            let result = tree_shuffle::spectrum::is_separating(&tree, &dist.support());
            Ok(render::separation(&tree, &result, format))
        }
        Command::Stationary { inputs } => {
            let (tree, dist) = load(&inputs)?;
            let result = tree_shuffle::spectrum::stationary_distribution(&tree, &dist, &limits)?;
            Ok(render::stationary(&tree, &result, format)?)
        }
        Command::Simulate {
            inputs,
            seed,
            steps,
            burn_in,
            start,
        } => {
            let (tree, dist) = load(&inputs)?;
            let config = tree_shuffle::walk::ChainConfig::new(seed, steps, burn_in);
            let start = match start {
                Some(i) => tree_shuffle::ordering::index_ordering(&tree, i)?,
                None => tree_shuffle::ordering::default_ordering(&tree),
            };
            let run = tree_shuffle::walk::run_chain_from(
                &tree,
                &dist,
                &start,
                config,
                limits.max_states,
            )?;
            let exact = exact_stationary(&tree, &dist, &limits)?;
            Ok(render::simulation(&tree, &run, exact.as_deref(), format)?)
        }
    }
}

/// States beyond this count skip the exact stationary solve in `simulate`.
const EXACT_STATIONARY_LIMIT: usize = 720;

fn exact_stationary(
    tree: &PureTree,
    dist: &WeightDistribution,
    limits: &Limits,
) -> Result<Option<Vec<num_rational::BigRational>>, Failure> {
    let states = tree.stats().state_count;
    if states > num_bigint::BigUint::from(EXACT_STATIONARY_LIMIT) {
        return Ok(None);
    }
    match tree_shuffle::spectrum::stationary_distribution(tree, dist, limits)? {
        tree_shuffle::spectrum::Stationary::Unique(v) => Ok(Some(v)),
        tree_shuffle::spectrum::Stationary::NotUnique { .. } => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let rendered = err.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.line());
            ExitCode::from(failure.exit_code())
        }
    }
}
