use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gapsmith::rational::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "gapsmith",
    version,
    about = "Exact removal of half-open gaps from subsets of the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Weak,
    Epsilon,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the gaps of a point set.
    Gaps {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the structural checks on every bad gap.
    CheckStructure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Remove bad gaps.
    Remove {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "weak")]
        mode: Mode,
        #[arg(long, value_parser = parse_positive)]
        epsilon: Option<Rational>,
        /// JSON-lines trace file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// SVG diagram of the stages.
        #[arg(long)]
        emit_diagram: Option<PathBuf>,
    },
    /// Check the semiorder axioms on a relation.
    SemiorderCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a unit-threshold representation of a semiorder.
    Synth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate semiorders on n elements.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Count up to isomorphism.
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Gaps, structure and weak removal in one report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_positive(s: &str) -> Result<Rational, String> {
    let v: Rational = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_positive() {
        return Err(format!("{s} is not positive"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    /// `--help` or `--version`; print and exit 0.
    Info(String),
    Usage(String),
}

pub fn parse_args<I, T>(argv: I) -> Result<Command, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("gapsmith"))
        .chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                ParseOutcome::Info(e.to_string())
            }
            _ => ParseOutcome::Usage(e.to_string()),
        }
    })?;
    if let Command::Remove { mode, epsilon, .. } = &cli.command {
        match (mode, epsilon) {
            (Mode::Epsilon, None) => {
                return Err(ParseOutcome::Usage(
                    "--mode epsilon requires --epsilon".into(),
                ));
            }
            (Mode::Weak | Mode::Strong, Some(_)) => {
                return Err(ParseOutcome::Usage(
                    "--epsilon only applies to --mode epsilon".into(),
                ));
            }
            _ => {}
        }
    }
    Ok(cli.command)
}
