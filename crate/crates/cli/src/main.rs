use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod input;

use commands::{Exit, RealizeVariant};
use input::InputError;

/// Lines, betweenness and realizability for finite quasi-metric spaces.
#[derive(Parser)]
#[command(name = "qmlines", version)]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
    threads: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RelationArgs {
    /// Distance matrix file.
    #[arg(conflicts_with = "triples", required_unless_present = "triples")]
    matrix: Option<PathBuf>,
    /// Triple file, one `x y z` per line.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Comma-separated point labels for the triple file (default: sorted labels found in it).
    #[arg(long, requires = "triples")]
    labels: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quasi-metric axioms.
    Validate { matrix: PathBuf },
    /// List the betweenness triples of a quasi-metric.
    Betweenness { matrix: PathBuf },
    /// List the lines of a space or relation.
    Lines(RelationArgs),
    /// Decide whether the space has a universal line or at least n lines.
    Dbe(RelationArgs),
    /// Canonical form of a relation under relabeling.
    Canon {
        #[arg(long)]
        triples: PathBuf,
        #[arg(long)]
        labels: Option<String>,
    },
    /// Decide whether two triple files describe isomorphic relations.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Labels for the first file.
        #[arg(long)]
        labels: Option<String>,
        /// Labels for the second file.
        #[arg(long)]
        labels_b: Option<String>,
    },
    /// Search for a space whose betweenness is the given relation.
    Realize {
        /// quasi, metric, int:K or digraph
        #[arg(long, default_value = "quasi")]
        variant: RealizeVariant,
        #[command(flatten)]
        relation: RelationArgs,
    },
    /// Classify all consistent relations on 3 or 4 points.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
        n: u32,
        /// Integer bounds to test, e.g. 2,3.
        #[arg(long = "int", value_delimiter = ',', default_value = "2")]
        int: Vec<u32>,
    },
    /// Run every built-in check on Q(4) and the small classifications.
    VerifyPaper {
        #[arg(long)]
        q4_matrix: Option<PathBuf>,
        #[arg(long)]
        q4_triples: Option<PathBuf>,
        /// Comma-separated check ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

fn run(cli: &Cli) -> Result<commands::Output, InputError> {
    let threads = cli.threads as usize;
    match &cli.command {
        Command::Validate { matrix } => commands::validate(matrix),
        Command::Betweenness { matrix } => commands::betweenness(matrix),
        Command::Lines(r) => commands::lines(
            r.matrix.as_deref(),
            r.triples.as_deref(),
            r.labels.as_deref(),
        ),
        Command::Dbe(r) => commands::dbe(
            r.matrix.as_deref(),
            r.triples.as_deref(),
            r.labels.as_deref(),
        ),
        Command::Canon { triples, labels } => commands::canon(triples, labels.as_deref()),
        Command::Iso {
            a,
            b,
            labels,
            labels_b,
        } => commands::iso(a, b, labels.as_deref(), labels_b.as_deref()),
        Command::Realize {
            variant,
            relation: r,
        } => commands::realize_cmd(
            *variant,
            r.matrix.as_deref(),
            r.triples.as_deref(),
            r.labels.as_deref(),
        ),
        Command::Enumerate { n, int } => {
            if int.contains(&0) {
                return Err(InputError::Invalid(
                    "--int bounds must be at least 1".into(),
                ));
            }
            commands::enumerate(*n as usize, int.clone(), threads)
        }
        Command::VerifyPaper {
            q4_matrix,
            q4_triples,
            only,
        } => commands::verify(q4_matrix.as_deref(), q4_triples.as_deref(), only, threads),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values print")
                );
            } else {
                print!("{}", out.text);
            }
            match out.exit {
                Exit::Positive => ExitCode::SUCCESS,
                Exit::Negative => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
