//! Harness library behind the `latsum` binary: brute-force oracles,
//! file formats, the experiment runner and artifact verification.

pub mod error;
pub mod experiment;
pub mod files;
pub mod oracle;
pub mod verify;
