//! Crate-level error with a coarse category for process exit codes.

use std::path::PathBuf;

use thiserror::Error;

use crate::bath::BathError;
use crate::chain::ChainError;
use crate::config::ConfigError;
use crate::dynamics::DynamicsError;
use crate::oracle::OracleError;
use crate::spectral::SpectralError;
use crate::transport::TransportError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Validation,
    Numeric,
    Io,
}

impl Category {
    /// Exit status following the BSD `sysexits` convention.
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Validation => 65,
            Category::Numeric => 70,
            Category::Io => 74,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Validation => "validation",
            Category::Numeric => "numeric",
            Category::Io => "io",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Bath(#[from] BathError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Check(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> Category {
        match self {
            Error::Config(_) | Error::Chain(_) | Error::Bath(_) | Error::Dynamics(_) => Category::Validation,
            Error::Transport(TransportError::CasePrecondition { .. }) => Category::Validation,
            Error::Transport(TransportError::Bath(_)) => Category::Validation,
            Error::Spectral(SpectralError::NoConvergence { .. }) => Category::Numeric,
            Error::Spectral(_) => Category::Validation,
            Error::Transport(TransportError::Spectral(SpectralError::NoConvergence { .. })) => Category::Numeric,
            Error::Transport(TransportError::Spectral(_)) => Category::Validation,
            Error::Oracle(OracleError::TooManySites(_)) => Category::Validation,
            Error::Oracle(OracleError::Bath(_)) => Category::Validation,
            Error::Oracle(_) | Error::Check(_) => Category::Numeric,
            Error::Io { .. } => Category::Io,
        }
    }
}
