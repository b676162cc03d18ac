//! Command-line front end for `zeta-alpha-core`.
//!
//! The binary is a thin wrapper around [`run`], which parses arguments,
//! executes one subcommand and returns the process exit code. Keeping the
//! entry point in the library lets tests drive it in-process.

pub mod args;
pub mod cache;
pub mod commands;
pub mod input;
pub mod output;
pub mod verify;

pub use commands::run;

/// Process exit codes. These are a stable contract for scripts.
pub mod exit {
    pub const OK: i32 = 0;
    /// A verification suite reported at least one failure.
    pub const VERIFY_FAILED: i32 = 1;
    /// Bad flags, unparseable input or out-of-range arguments.
    pub const USAGE: i32 = 2;
    /// The requested index is beyond the available exact table.
    pub const TABLE_LIMIT: i32 = 3;
    /// The series did not reach the requested tolerance within the term cap.
    pub const BUDGET: i32 = 4;
    /// The requested point is a pole.
    pub const POLE: i32 = 5;
    /// Cache version mismatch, corruption or IO failure.
    pub const CACHE: i32 = 6;
}

/// An error carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(exit::USAGE, message)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
