use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Output};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Regenerate, transform and verify Kochen-Specker sets of the three-qubit
/// 40-ray system. All output is deterministic.
#[derive(Debug, Parser)]
#[command(name = "ksforge", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the enumerations.
    #[arg(long, env = "KSFORGE_JOBS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The 40 rays.
    Rays,
    /// The 25 bases, cross-checked against the clique enumeration.
    Bases,
    /// All 320 parity proofs of type 28_2 8_4 - 11_8.
    Parents {
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Parity proofs with at most N bases, counted by signature.
    Classify {
        #[arg(long)]
        max_bases: usize,
    },
    /// Rank-2 children of one parent, or a summary over all parents.
    Transform {
        /// Index into the `parents` list, or `fixture:table2`.
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        parent: Option<String>,
        #[arg(long)]
        all: bool,
        /// Expected number of children per parent.
        #[arg(long)]
        expect: Option<usize>,
        /// Include the child sets with `--all`.
        #[arg(long)]
        children: bool,
        /// Include every rejected configuration in the certificate.
        #[arg(long)]
        rejections: bool,
    },
    /// Check a set and prove it contextual.
    Verify {
        /// A JSON file or `fixture:<name>`.
        set: String,
        /// Also search for a noncontextual assignment exhaustively.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Pre/post-selection argument on a set, optionally after splitting a
    /// rank-2 projector.
    Statedep {
        #[arg(long)]
        set: String,
        /// Rank-2 projector to split, as `i,j`.
        #[arg(long, value_parser = commands::parse_pair)]
        split: Option<(u8, u8)>,
        #[arg(long)]
        pre: u8,
        #[arg(long)]
        post: u8,
    },
    /// Search every split and pre/post pair of a parent's children.
    StatedepSearch {
        #[arg(long, default_value = "fixture:table2")]
        parent: String,
        /// Only the first N children.
        #[arg(long)]
        limit: Option<usize>,
        /// List only hits using at most this many projectors.
        #[arg(long)]
        max_used: Option<usize>,
    },
    /// An embedded published table.
    Fixtures {
        #[arg(long)]
        name: String,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Rays => commands::rays(cli.format),
        Command::Bases => commands::bases(cli.format),
        Command::Parents { expect } => commands::parents(cli.format, *expect),
        Command::Classify { max_bases } => commands::classify(cli.format, *max_bases),
        Command::Transform {
            parent,
            all,
            expect,
            children,
            rejections,
        } => {
            if *all {
                commands::transform_all(cli.format, *expect, *children, *rejections)
            } else {
                let parent = parent.as_deref().expect("required unless --all");
                commands::transform_one(cli.format, parent, *expect)
            }
        }
        Command::Verify { set, exhaustive } => commands::verify(cli.format, set, *exhaustive),
        Command::Statedep {
            set,
            split,
            pre,
            post,
        } => commands::statedep(cli.format, set, *split, *pre, *post),
        Command::StatedepSearch {
            parent,
            limit,
            max_used,
        } => commands::statedep_search(cli.format, parent, *limit, *max_used),
        Command::Fixtures { name } => commands::fixtures(cli.format, name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .map_or_else(ksforge_core::parallel::default_jobs, usize::from);
    let result = ksforge_core::parallel::with_jobs(jobs, || run(&cli));
    let (output, error) = match result {
        Ok(out) => (Some(out), None),
        Err(CliError::Failed { output, message }) => (Some(output), Some((1, message))),
        Err(e) => (None, Some((e.code(), e.to_string()))),
    };
    if let Some(out) = output {
        let written = match &cli.output {
            Some(path) => {
                fs::write(path, &out.body).map_err(|e| format!("{}: {e}", path.display()))
            }
            None => {
                print!("{}", out.body);
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match error {
        Some((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
        None => ExitCode::SUCCESS,
    }
}
