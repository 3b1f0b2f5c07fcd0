//! Exact computations with big Witt vectors, big q-Witt vectors, truncated
//! Habiro rings, the truncated cyclosyntomic complex and the first
//! q-polylogarithm, over monogenic étale number rings.

pub mod cyclosyn;
pub mod error;
pub mod exactalg;
pub mod habiro;
pub mod polylog;
pub mod qwitt;
pub mod report;
pub mod sample;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
