//! The `minibmc` and `minibmc-link` command-line tools.

pub mod args;
pub mod run;

pub use args::{parse_args, Parsed, RunConfig};
pub use run::{execute, link_main, main_with};
