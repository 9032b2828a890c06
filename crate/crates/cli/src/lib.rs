//! Command-line front end for the `gdf` library: inspection, validation,
//! CSV conversion, event export, anonymization and test-file synthesis.

pub mod args;
pub mod commands;
pub mod csvio;
pub mod render;
pub mod synth;

pub use args::Cli;
pub use commands::{run, EXIT_CLEAN, EXIT_ERRORS, EXIT_WARNINGS};
