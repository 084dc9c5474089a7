use std::path::Path;

use alphagan::train::{train, TrainReport};

use crate::config::load_train_config;
use crate::error::CliResult;
use crate::output::write_json;

/// Loads the config, trains, and writes the report JSON to `out` (stdout if absent).
pub fn cmd_train(config: &Path, out: Option<&Path>) -> CliResult<TrainReport> {
    let cfg = load_train_config(config)?;
    let report = train(&cfg)?;
    write_json(out, &report)?;
    Ok(report)
}
