//! Knot diagrams, Jones polynomials and finite type invariants of grope boundaries.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bracket;
pub mod construct;
pub mod diagram;
pub mod grope;
pub mod laurent;
pub mod morse;
pub mod random;
pub mod scheme;
