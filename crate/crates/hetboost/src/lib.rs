//! File formats, reports and the batch pipeline around `hetboost-core`.
//!
//! The `hetboost` binary is a thin wrapper over [`pipeline::run`],
//! [`commands::synth`], [`commands::aggregate_od_file`] and
//! [`report::render_report`].

pub mod commands;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod export;
pub mod manifest;
pub mod model_io;
pub mod pipeline;
pub mod report;
pub mod schema;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use manifest::Manifest;
