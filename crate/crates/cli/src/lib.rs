//! Command-line front end: a small language for naming groups and the `psig` subcommands.

pub mod commands;
pub mod error;
pub mod expr;

pub use commands::{run, Cli};
pub use error::{exit, CliError};
pub use expr::{evaluate, parse, Atom, GroupExpr};
