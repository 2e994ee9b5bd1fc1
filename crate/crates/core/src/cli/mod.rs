//! Model files, monoid files and the `vassinc` command dispatcher.

mod app;
mod format;
mod monoid_file;

pub use app::{
    execute, exit_code, parse_word, render_word, run, Cli, Command, OracleCommand, Report, EXIT_ERROR, EXIT_NO,
    EXIT_UNKNOWN, EXIT_YES,
};
pub use format::{parse_file, parse_model, print_model};
pub use monoid_file::parse_monoid;
