//! Library half of the `eraser-sim` command-line tool: config loading,
//! output serialization, and the verification report. The binary in
//! `main.rs` is a thin argument-parsing wrapper over [`commands`], so
//! integration tests can drive the same code paths directly.

pub mod commands;
pub mod output;
pub mod report;
