//! Command-line front end: file formats, JSON certificates and subcommands.

pub mod certificate;
pub mod commands;
pub mod format;
