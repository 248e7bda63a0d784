//! Library surface of the command-line crate: the named check suite the
//! `verify` subcommand and the acceptance tests run.

#![forbid(unsafe_code)]

pub mod checks;
