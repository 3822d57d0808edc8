//! Command-line driver for `ctrslab-core`: the COPS-style file format,
//! JSON reports and the `ctrslab` subcommands.

pub mod caps;
pub mod commands;
pub mod format;
pub mod report;

pub use format::{parse_system, parse_term, render_context, render_system, ParseError, SourceDocument};
