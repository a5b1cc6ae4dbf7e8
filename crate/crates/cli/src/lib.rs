//! File formats and report commands for `morita-core`, shared by the
//! `morita` binary and its tests.

pub mod commands;
pub mod format;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] morita_core::Error),
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Core(_) => 2,
            CliError::Consistency(_) => 3,
        }
    }
}

/// How a command ended when it produced a document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A valid input with a negative verdict, such as a missing adjoint.
    Negative,
    /// A check that must always pass did not.
    Inconsistent,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
            Status::Inconsistent => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: String,
    pub status: Status,
}
