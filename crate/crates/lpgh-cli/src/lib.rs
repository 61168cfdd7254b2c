//! Internals of the `lpgh` binary: flag parsing, report serialization,
//! the data-producing runners, and the verification suites. Split out of
//! `main.rs` so integration tests can drive the pieces directly.

pub mod config;
pub mod output;
pub mod runs;
pub mod verify;
