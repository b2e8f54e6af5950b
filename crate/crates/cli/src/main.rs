use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kgring_cli::{read_extension, read_module, Report, DEFAULT_MAX_RANK};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "kgring",
    version,
    about = "Modules over Koehler's ring and its tensor products"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Largest number of generators allowed in one component.
    #[arg(long, env = "KGRING_MAX_RANK", default_value_t = DEFAULT_MAX_RANK, global = true)]
    max_rank: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce the derived relations and resolve all critical pairs.
    CheckRing {
        #[arg(short, long)]
        prime: u64,
    },
    /// Check the defining relations on a module file.
    Validate {
        file: PathBuf,
    },
    /// Check exactness of both triangles for every prime.
    Exact {
        file: PathBuf,
    },
    /// Split an extension file of free exact modules over at least two primes.
    Split {
        file: PathBuf,
    },
    /// Pieces of a uniquely divisible module for the listed primes.
    Decompose {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    Hom {
        source: PathBuf,
        target: PathBuf,
    },
    Ext1 {
        source: PathBuf,
        target: PathBuf,
    },
    /// Primitive q-th root of unity modulo p^k.
    Hensel {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(short)]
        k: u32,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let cap = cli.max_rank;
    match &cli.command {
        Command::CheckRing { prime } => kgring_cli::check_ring(*prime),
        Command::Validate { file } => Ok(kgring_cli::validate(&read_module(file, cap)?)),
        Command::Exact { file } => kgring_cli::exact(&read_module(file, cap)?),
        Command::Split { file } => kgring_cli::split(&read_extension(file, cap)?),
        Command::Decompose { file, primes } => kgring_cli::decompose(&read_module(file, cap)?, primes),
        Command::Hom { source, target } => {
            kgring_cli::hom_report(&read_module(source, cap)?, &read_module(target, cap)?)
        }
        Command::Ext1 { source, target } => {
            kgring_cli::ext1_report(&read_module(source, cap)?, &read_module(target, cap)?)
        }
        Command::Hensel { p, q, k } => kgring_cli::hensel(*p, *q, *k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("json")),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
