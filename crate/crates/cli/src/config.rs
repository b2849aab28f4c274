//! JSON run configuration. A config file is an object whose top-level keys
//! are the global options (`wavelength`, `degrees`, `threads`) plus one
//! section per subcommand, keyed by the subcommand name, holding the same
//! keys as the long flags:
//!
//! ```json
//! { "wavelength": 0.01, "k-number": { "length": 4.0, "rho": 0.2, "distance": 160.0 } }
//! ```
//!
//! Flags given on the command line win over the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Parsed config document.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile(Map<String, Value>);

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        match serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))? {
            Value::Object(map) => Ok(Self(map)),
            _ => Err(CliError::Config("top level must be an object".into())),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    /// Overlays the non-null fields of `cli` on section `name` and decodes
    /// the result.
    pub fn merge<T: Serialize + DeserializeOwned>(&self, name: &str, cli: &T) -> CliResult<T> {
        let mut base = match self.0.get(name) {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(CliError::Config(format!("section `{name}` must be an object"))),
        };
        let over = serde_json::to_value(cli).map_err(|e| CliError::Config(e.to_string()))?;
        if let Value::Object(fields) = over {
            for (k, v) in fields {
                if !v.is_null() {
                    base.insert(k, v);
                }
            }
        }
        serde_json::from_value(Value::Object(base)).map_err(|e| CliError::Config(format!("section `{name}`: {e}")))
    }
}
