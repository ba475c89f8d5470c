//! Command-line front end: `analyze`, `factor`, `check` and `bench`.

pub mod args;
pub mod commands;
pub mod input;
pub mod profile;
pub mod record;

pub use args::Cli;
pub use commands::run;
pub use record::BenchRecord;
