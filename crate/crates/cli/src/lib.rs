//! File formats, rendering, sweeps and the command-line front end for the
//! `cyclorobust` library.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod render;
pub mod sweep;

pub use config::{RunConfig, Stage};
pub use error::{CliError, CliResult};
pub use io::{read_map, read_signal, write_map, write_report, write_signal, SignalFormat};
pub use pipeline::execute;
pub use sweep::{run_sweep, SweepOutcome, SweepSpec};
