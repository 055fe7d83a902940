//! Library half of the `hmf` command-line tool: spec parsing, the
//! subcommand implementations and the verification suites.

pub mod commands;
pub mod config;
pub mod suites;

use hmf_theta::Error;

/// Process exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Catalog(_) | Error::UnitSign { .. } => 2,
        Error::Hypothesis(_) => 3,
        Error::Parse(_) | Error::Io(_) => 64,
        _ => 4,
    }
}
