//! Command-line front end: argument parsing, dispatch and artifact writers.

pub mod args;
pub mod diagram;
pub mod run;

pub use args::{parse_args, Command, Mode, ParseOutcome};
pub use run::{execute, CliError};

/// Parses `argv` (without the program name), runs it, and returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cmd = match parse_args(argv) {
        Ok(c) => c,
        Err(ParseOutcome::Info(text)) => {
            print!("{text}");
            return run::EXIT_OK;
        }
        Err(ParseOutcome::Usage(text)) => {
            eprint!("{text}");
            if !text.ends_with('\n') {
                eprintln!();
            }
            return run::EXIT_USAGE;
        }
    };
    match execute(&cmd) {
        Ok(()) => run::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
