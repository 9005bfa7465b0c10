//! Library surface of the CLI: configuration types, report assembly, the
//! command dispatcher, and the bundled verification suite. The binary in
//! `main.rs` is a thin wrapper; integration tests drive these modules
//! directly.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use charwalk_core::error::Error;

/// Process exit codes: 0 success, 1 failed verdict, 2 invalid input,
/// 3 resource limit.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidInput(_) => 2,
        Error::ResourceLimit(_) => 3,
    }
}
