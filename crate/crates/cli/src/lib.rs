//! Text and JSON formats, the claim audit and the command-line front end
//! for `pforms-core`.

pub mod audit;
pub mod commands;
pub mod document;
pub mod parse;

pub use commands::{run_command, Outcome};
pub use document::FormDocument;
pub use parse::{parse_form, ParseError};
