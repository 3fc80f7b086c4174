//! Command-line driver for `jumpcon-core`: monad files, verification reports
//! and conic sample tables.
//!
//! Exit status: 0 when every check passes, 1 when a mathematical check fails
//! (the report names it), 2 for bad input or configuration.

pub mod cli;
pub mod format;
pub mod run;
