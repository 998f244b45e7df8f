//! File formats, bundled fixtures and verification suites behind the
//! `grope` binary.

pub mod formats;
pub mod fixtures;
pub mod suites;
