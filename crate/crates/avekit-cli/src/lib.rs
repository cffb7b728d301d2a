#![allow(clippy::needless_range_loop)]
#![allow(clippy::field_reassign_with_default)]

//! Command-line companion for the avekit library: JSON problem bundles,
//! Matrix Market I/O, seeded instance generators, a benchmark harness, and
//! the `avekit` binary's subcommand implementations.

pub mod bench;
pub mod bundle;
pub mod commands;
pub mod dispatch;
pub mod gen;
pub mod mm;
