//! JSON reports.

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    /// A yes/no condition, recorded as 1 or 0 with tolerance 1.
    pub fn holds(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the schema version and command name, newline terminated.
pub fn render<T: Serialize>(command: &str, body: &T) -> CliResult<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env)
        .map_err(|e| CliError::Validation(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}
