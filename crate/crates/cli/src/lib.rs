//! File formats, DOT export and the command-line driver for covsynth-core.

pub mod app;
pub mod dot;
pub mod error;
pub mod fsa_file;
pub mod scenario_file;

pub use dot::{export_dot, DotOptions};
pub use error::{CliError, ParseError};
pub use fsa_file::{parse_automaton, serialize_automaton};
pub use scenario_file::{
    parse_scenario_with, read_automaton_file, read_scenario_file, serialize_scenario, ScenarioFile,
};
