//! Command implementations for the `qgame` binary.
//!
//! Every command returns a [`RunReport`]; the binary serializes it and maps
//! [`RunReport::passed`] to the exit status.

mod commands;
mod game_file;

use std::collections::BTreeMap;
use std::path::PathBuf;

use qgame_core::braid::Correction;
use serde::Serialize;
use thiserror::Error;

pub use commands::{
    cmd_braid_verify, cmd_classical, cmd_entangle, cmd_pennyflip, cmd_qgame, cmd_ssqm, QgameAction, SsqmOptions,
    DEFAULT_TOL,
};
pub use game_file::{GameDefinitionFile, SymmetryHint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qgame_core::Error),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: field '{field}': {message}")]
    Field {
        path: PathBuf,
        field: &'static str,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A named check: passes when `value <= tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Residual {
    pub fn new(value: f64, tolerance: f64) -> Self {
        Self {
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub residuals: BTreeMap<String, Residual>,
    pub corrections: Vec<Correction>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    fn new(command: &str, inputs: impl Serialize) -> Self {
        Self {
            command: command.into(),
            inputs: to_value(inputs),
            results: serde_json::Value::Null,
            residuals: BTreeMap::new(),
            corrections: Vec::new(),
            warnings: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64) {
        self.residuals.insert(name.into(), Residual::new(value, tolerance));
    }

    fn finish(mut self, results: impl Serialize) -> Self {
        self.results = to_value(results);
        self.pass = self.residuals.values().all(|r| r.pass);
        self
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn failing(&self) -> impl Iterator<Item = (&str, &Residual)> {
        self.residuals.iter().filter(|(_, r)| !r.pass).map(|(k, r)| (k.as_str(), r))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }
}

fn to_value(v: impl Serialize) -> serde_json::Value {
    // Non-finite floats serialize as null rather than failing.
    serde_json::to_value(v).expect("report payloads are plain data")
}
