use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A checked property or acceptance criterion failed.
    pub const PROPERTY: i32 = 1;
    /// Bad command line or malformed input.
    pub const USAGE: i32 = 2;
    /// Well-formed input outside what is implemented, or a failed precondition.
    pub const UNSUPPORTED: i32 = 3;
    /// A depth, degree or quadrature budget ran out.
    pub const RESOURCE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Core(#[from] hmachine_core::Error),
    #[error("{path}:{line}:{column}: {message}")]
    CurveFile { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} check(s) failed")]
    Failed(usize),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        use hmachine_core::Error as E;
        match self {
            AppError::Core(e) => match e {
                E::Parse { .. } | E::Argument(_) => exit::USAGE,
                E::Unsupported(_) | E::Precondition(_) | E::Singular | E::OffCurve | E::BadFiber { .. } => {
                    exit::UNSUPPORTED
                }
                E::Resource(_) => exit::RESOURCE,
                _ => exit::PROPERTY,
            },
            AppError::CurveFile { .. } | AppError::Usage(_) | AppError::Io { .. } => exit::USAGE,
            AppError::Failed(_) => exit::PROPERTY,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }
}

pub type AppResult<T> = Result<T, AppError>;
