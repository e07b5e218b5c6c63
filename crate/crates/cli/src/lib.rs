//! IO, file formats and the command-line surface for the herding simulator.

pub mod cli;
pub mod config_file;
pub mod report;
pub mod scenarios;
pub mod trajectory;

pub use cli::run;
