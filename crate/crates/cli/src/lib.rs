//! Library half of the `malmsten` binary: argument types, command
//! implementations and the output record.

pub mod commands;
pub mod output;
