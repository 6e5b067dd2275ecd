//! Run configuration: command-line parameters merged with an optional JSON
//! file, and the error type that maps onto exit codes.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("accuracy failure: {0}")]
    Accuracy(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Accuracy(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<nodalvol::Error> for CliError {
    fn from(e: nodalvol::Error) -> Self {
        match e {
            nodalvol::Error::Accuracy { .. } | nodalvol::Error::SingularCovariance(_) => {
                CliError::Accuracy(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Parameters of one subcommand.
pub trait RunArgs: Serialize + DeserializeOwned {
    /// Fills in defaults that depend on other parameters and rejects
    /// inconsistent combinations.
    fn normalize(&mut self) -> Result<(), CliError> {
        Ok(())
    }
}

/// The resolved configuration embedded in every artifact.
pub struct RunInfo {
    pub config: Value,
}

impl RunInfo {
    /// Comment lines opening a CSV artifact.
    pub fn csv_header(&self) -> String {
        format!(
            "# nodalvol {}\n# config: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.config
        )
    }
}

/// Merges the keys of the JSON file at `file` over `args`, then normalizes.
/// Returns the parameters, the seed and the embedded configuration.
pub fn resolve<T: RunArgs>(
    command: &str,
    args: T,
    seed: u64,
    file: Option<&Path>,
) -> Result<(T, u64, RunInfo), CliError> {
    let mut value = match serde_json::to_value(&args) {
        Ok(Value::Object(m)) => m,
        _ => {
            return Err(CliError::Config(
                "parameters do not serialize to an object".into(),
            ))
        }
    };
    value.insert("seed".into(), Value::from(seed));
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let overrides: Map<String, Value> = serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!("{}: expected a JSON object: {e}", path.display()))
        })?;
        for (k, v) in overrides {
            if k == "command" {
                if v.as_str() != Some(command) {
                    return Err(CliError::Config(format!(
                        "config file is for command {v}, not {command}"
                    )));
                }
                continue;
            }
            if !value.contains_key(&k) {
                return Err(CliError::Config(format!(
                    "unknown parameter `{k}` for {command}"
                )));
            }
            value.insert(k, v);
        }
    }
    let seed = value
        .remove("seed")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| CliError::Config("seed must be a non-negative integer".into()))?;
    let mut args: T = serde_json::from_value(Value::Object(value))
        .map_err(|e| CliError::Config(e.to_string()))?;
    args.normalize()?;
    let mut config = match serde_json::to_value(&args) {
        Ok(Value::Object(m)) => m,
        _ => {
            return Err(CliError::Config(
                "parameters do not serialize to an object".into(),
            ))
        }
    };
    config.insert("command".into(), Value::from(command));
    config.insert("seed".into(), Value::from(seed));
    Ok((
        args,
        seed,
        RunInfo {
            config: Value::Object(config),
        },
    ))
}

/// Full-precision float for tabular output.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize)]
    struct Probe {
        n: usize,
    }

    impl RunArgs for Probe {}

    #[test]
    fn file_keys_override_flags() {
        let dir = std::env::temp_dir().join(format!("nodalvol-probe-{}", std::process::id()));
        fs::write(&dir, r#"{"n": 5, "seed": 11}"#).unwrap();
        let (args, seed, info) = resolve("probe", Probe { n: 1 }, 3, Some(&dir)).unwrap();
        fs::remove_file(&dir).unwrap();
        assert_eq!((args.n, seed), (5, 11));
        assert_eq!(info.config["command"], "probe");
        assert!(info.csv_header().contains(r#""n":5"#));
    }

    #[test]
    fn accuracy_errors_map_to_their_own_exit_code() {
        let e = CliError::from(nodalvol::Error::SingularCovariance("x".into()));
        assert_eq!(e.exit_code(), 3);
    }
}
