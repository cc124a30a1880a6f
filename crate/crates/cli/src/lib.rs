//! Command-line front end: every command writes `<out>/<command>.json`
//! holding the effective run configuration and the result, and
//! `<out>/<command>_plot.csv` with `series,x,y,band_lo,band_hi` rows.

mod args;
mod commands;
mod report;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use report::RunConfig;

/// Failure of one invocation, mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn usage(flag: &str, value: &str, reason: &str) -> Self {
        CliError::Usage(format!("invalid value '{value}' for '{flag}': {reason}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        }
    )*};
}

data_error!(
    benchrel::data::DataError,
    benchrel::scoring::ScoringError,
    benchrel::synth::SynthError,
    serde_json::Error,
    csv::Error
);

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(format!("Io: {e}"))
    }
}

impl From<benchrel::resampling::ResampleError> for CliError {
    fn from(e: benchrel::resampling::ResampleError) -> Self {
        use benchrel::resampling::ResampleError as E;
        match e {
            E::InvalidSize(_) | E::TooFewIterations(_) | E::UnknownAxis(_) | E::UnknownObjective(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<benchrel::flash::FlashError> for CliError {
    fn from(e: benchrel::flash::FlashError) -> Self {
        use benchrel::flash::FlashError as E;
        match e {
            E::Resample(r) => r.into(),
            E::InvalidTiers(_) | E::InvalidSchedule(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

/// Runs one command line and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let quiet = cli.command.output().quiet;
    match commands::execute(&cli.command) {
        Ok(written) => {
            if !quiet {
                for path in written {
                    println!("wrote {}", path.display());
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
