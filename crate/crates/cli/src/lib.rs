//! File formats, command-line parsing and verification suites for the `dkcalc` tool.

pub mod harness;
pub mod io;
pub mod parse;
