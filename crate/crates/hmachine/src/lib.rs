//! Curve files, fixtures, CSV reports, parallel scans and property suites on
//! top of `hmachine-core`.

pub mod cli;
pub mod curvefile;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod scan;
pub mod verify;

pub use error::{exit, AppError, AppResult};
