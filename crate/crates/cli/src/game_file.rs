use std::path::Path;

use qgame_core::classical::PayoffBimatrix;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryHint {
    S,
    T,
}

/// JSON game description. Exactly one of `B` and `symmetry_hint` is present;
/// with a hint, `B` is derived from `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDefinitionFile {
    pub name: String,
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 2],
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry_hint: Option<SymmetryHint>,
}

impl GameDefinitionFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// `path` is only used for error context.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.bimatrix(path)?;
        Ok(file)
    }

    pub fn bimatrix(&self, path: &Path) -> Result<PayoffBimatrix> {
        let field_err = |field, message: String| CliError::Field {
            path: path.to_path_buf(),
            field,
            message,
        };
        let g = match (self.b, self.symmetry_hint) {
            (Some(b), None) => PayoffBimatrix::new(self.a, b),
            (None, Some(SymmetryHint::S)) => PayoffBimatrix::s_symmetric(self.a),
            (None, Some(SymmetryHint::T)) => PayoffBimatrix::t_symmetric(self.a),
            (Some(_), Some(_)) => {
                return Err(field_err("B", "give either B or symmetry_hint, not both".into()));
            }
            (None, None) => return Err(field_err("B", "missing; give B or symmetry_hint".into())),
        };
        g.map_err(|e| field_err("A", e.to_string()))
    }
}
