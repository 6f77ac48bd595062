//! Batch front-end for the qlss simulator: JSON run configs in, CSV/JSON/SVG out.

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;
pub mod store;

pub use commands::{run, RunOutput};
pub use config::{Command, InstanceSource, Params, RunConfig, Solver};
pub use error::{CliError, CliResult};
pub use store::{instance_from_json, instance_to_json, load_instance, store_instance};
