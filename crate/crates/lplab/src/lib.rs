//! Command-line front end for `lplab-core`: configuration, CSV output, and
//! subcommand dispatch.

pub mod config;
pub mod csv;
pub mod error;
pub mod run;
pub mod threads;

pub use config::{parse_config, RunConfig};
pub use error::CliError;

/// Parses `args`, runs, and prints or writes the result. Returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_config(args).and_then(|cfg| run::run(&cfg));
    match result {
        Ok(Some(text)) => {
            print!("{text}");
            0
        }
        Ok(None) => 0,
        Err(CliError::Display(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
