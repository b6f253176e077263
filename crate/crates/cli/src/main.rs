//! `rwb`: command-line front end for the structural Ramsey workbench.

mod commands;
mod config;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rwb_core::fraisse::ApMode;

use crate::config::{load_spec, node_budget, RunConfig};
use crate::report::{resource_limit, Report, Status};

#[derive(Parser)]
#[command(name = "rwb", version, about = "Structural Ramsey workbench over finite relational structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Backtracking node budget per search (RWB_BUDGET overrides).
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct ClassArgs {
    /// Built-in class name (see `rwb catalog`).
    #[arg(long)]
    class: Option<String>,
    /// Class specification file in ClassSpec JSON.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Prop {
    Hp,
    Jep,
    Ap,
    Rigidity,
    Types,
    Extension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ApModeArg {
    OnePoint,
    Exhaustive,
}

impl From<ApModeArg> for ApMode {
    fn from(m: ApModeArg) -> ApMode {
        match m {
            ApModeArg::OnePoint => ApMode::OnePoint,
            ApModeArg::Exhaustive => ApMode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the models of a class up to isomorphism.
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        max_size: usize,
        /// Print only the counts per size.
        #[arg(long)]
        counts_only: bool,
    },
    /// Bounded checks of class properties.
    Check {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        props: Vec<Prop>,
        #[arg(long)]
        max_size: usize,
        /// Largest joint embedding considered (default twice the bound).
        #[arg(long)]
        amalgam_bound: Option<usize>,
        #[arg(long, value_enum)]
        ap_mode: Option<ApModeArg>,
        /// Tuple length for the type census.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Host structure for the extension property.
        #[arg(long)]
        host: Option<String>,
        /// Largest demand size for the extension property.
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Decide C -> (B)^A_k for a given C, or search the catalog for one.
    Arrow {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        search: bool,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// First catalog model C with C -> (B)^A_k.
    Witness {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        max_size: usize,
    },
    /// Definable linear orders as unions of irreflexive 2-types.
    Order {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        max_size: usize,
    },
    /// An embedding of A into C on which a palette only sees atomic types.
    Indiscernible {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "C")]
        c: String,
        #[arg(long = "A")]
        a: String,
        /// Palette JSON file.
        #[arg(long, conflicts_with = "random_palette")]
        palette: Option<PathBuf>,
        /// Random palette of this arity drawn from --seed; equal colors on
        /// tuples with the same underlying set.
        #[arg(long)]
        random_palette: Option<usize>,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// Filter one atomic type class at a time.
        #[arg(long)]
        iterated: bool,
    },
    /// Grow an approximately generic structure by amalgamation.
    Generic {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Size budget of the grown structure.
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        demand_cap: usize,
        /// Also check the extension property up to this demand size.
        #[arg(long)]
        check_m: Option<usize>,
    },
    /// Built-in classes and their expected outcomes.
    Catalog {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        name: Option<String>,
        /// Re-run every expected check at the default bounds.
        #[arg(long)]
        replay: bool,
    },
    /// Replay the certificates inside a JSON report.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        report: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Check { .. } => "check",
            Command::Arrow { .. } => "arrow",
            Command::Witness { .. } => "witness",
            Command::Order { .. } => "order",
            Command::Indiscernible { .. } => "indiscernible",
            Command::Generic { .. } => "generic",
            Command::Catalog { .. } => "catalog",
            Command::Verify { .. } => "verify",
        }
    }

    fn parts(&self) -> (Option<&ClassArgs>, &RunArgs) {
        match self {
            Command::Enumerate { class, run, .. }
            | Command::Check { class, run, .. }
            | Command::Arrow { class, run, .. }
            | Command::Witness { class, run, .. }
            | Command::Order { class, run, .. }
            | Command::Indiscernible { class, run, .. }
            | Command::Generic { class, run, .. } => (Some(class), run),
            Command::Catalog { run, .. } | Command::Verify { run, .. } => (None, run),
        }
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Human => print!("{}", report.to_human()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (class_args, run) = cli.command.parts();
    let format = run.format;
    let usage = |err: anyhow::Error| {
        eprintln!("rwb {name}: {err:#}");
        ExitCode::from(Status::Usage.code() as u8)
    };
    let budget = match node_budget(run.budget) {
        Ok(b) => b,
        Err(e) => return usage(e),
    };
    let spec = match class_args.map(|c| load_spec(c.class.as_deref(), c.spec.as_deref())).transpose() {
        Ok(s) => s.flatten(),
        Err(e) => return usage(e),
    };
    let config = RunConfig {
        class: spec.as_ref().map(|s| s.name().to_string()),
        node_budget: budget,
        seed: run.seed,
        workers: run.workers.max(1),
    };
    match commands::run(cli.command, &config, spec) {
        Ok(report) => {
            emit(&report, format);
            ExitCode::from(report.status.code() as u8)
        }
        Err(err) => match err.downcast_ref::<rwb_core::Error>() {
            Some(rwb_core::Error::ResourceLimit { what, limit }) => {
                let config = serde_json::to_value(&config).expect("config serializes");
                let report = resource_limit(name, config, what, *limit);
                emit(&report, format);
                ExitCode::from(Status::ResourceLimit.code() as u8)
            }
            _ => usage(err),
        },
    }
}
