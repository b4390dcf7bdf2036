//! Command-line front end for the ologism toolkit: the subcommands of the
//! `ologism` binary, their reports, DOT export and the REPL session.

pub mod commands;
pub mod dot;
pub mod repl;
pub mod report;
