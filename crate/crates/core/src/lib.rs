//! Exact height machinery for elliptic surfaces over the projective line.
//!
//! The crate is `no_std` (it needs `alloc`). Values are immutable and every
//! operation is a pure function, so results can be shared freely between
//! worker threads by the caller.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod arith;
pub mod curve;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod moriwaki;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod real;
pub mod specialize;
pub mod weil;

pub use curve::{CurvePoint, WeierstrassCurve};
pub use error::{Error, Result};
