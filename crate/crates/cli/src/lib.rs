//! Command implementations for the `chaingeom` binary.

pub mod certificate;
pub mod commands;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] chaingeom::Error),

    #[error("{0}")]
    VerificationFailed(String),

    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 verification failed, 2 bad descriptor or argument, 3 cap exceeded,
    /// 4 other domain errors, 5 output errors.
    pub fn exit_code(&self) -> i32 {
        use chaingeom::Error as E;
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Domain(E::InvalidDescriptor(_) | E::InvalidArgument(_) | E::NotPrime(_)) => 2,
            CliError::Domain(E::CapExceeded { .. } | E::PartialOrbit { .. }) => 3,
            CliError::Domain(_) => 4,
            CliError::Io { .. } => 5,
        }
    }
}
