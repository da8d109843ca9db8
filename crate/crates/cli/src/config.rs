//! Run configuration: defaults, then a flat TOML file, then `CEPDIST_*`
//! environment variables, then command-line flags.

use std::path::Path;

use cepdist_core::cluster::MetricConfig;
use cepdist_core::lti::DEFAULT_DAMPING;
use cepdist_core::phase::{ClassifierConfig, IoClassifierConfig, DEFAULT_K_TEST};
use cepdist_core::spectral::{Estimator, DEFAULT_ORDER, DEFAULT_OVERLAP};
use cepdist_core::subspace::{
    HankelConfig, DEFAULT_BLOCK_ROWS, DEFAULT_ORDER_TOL, DEFAULT_TRUNCATION,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const ENV_PREFIX: &str = "CEPDIST_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Periodogram,
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub method: Method,
    /// Welch segment length; the automatic rule is used when absent.
    pub window: Option<usize>,
    pub overlap: f64,
    pub fft_length: Option<usize>,
    /// Cepstral order `K`.
    pub order: usize,
    pub k_test: usize,
    pub phase_tolerance: f64,
    pub phase_epsilon: f64,
    /// Observability truncation `j` for model-based subspace norms.
    pub truncation: usize,
    /// Block rows `i` of data and response Hankel matrices.
    pub rows: usize,
    pub order_tolerance: f64,
    pub data_tolerance: f64,
    pub model_tolerance: f64,
    pub frequency_tolerance: f64,
    pub cascade_tolerance: f64,
    pub white_noise_sigmas: f64,
    pub seed: u64,
    pub length: usize,
    pub response_length: usize,
    pub damping: f64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            window: None,
            overlap: DEFAULT_OVERLAP,
            fft_length: None,
            order: DEFAULT_ORDER,
            k_test: DEFAULT_K_TEST,
            phase_tolerance: ClassifierConfig::ESTIMATED.tolerance,
            phase_epsilon: ClassifierConfig::ESTIMATED.epsilon,
            truncation: DEFAULT_TRUNCATION,
            rows: DEFAULT_BLOCK_ROWS,
            order_tolerance: DEFAULT_ORDER_TOL,
            data_tolerance: 1e-3,
            model_tolerance: 1e-9,
            frequency_tolerance: 1e-10,
            cascade_tolerance: 1e-6,
            white_noise_sigmas: 3.0,
            seed: 1,
            length: 1 << 14,
            response_length: 1 << 12,
            damping: DEFAULT_DAMPING,
            format: Format::Json,
        }
    }
}

/// Every configuration key, as written in files; flags use the same names
/// with `-` for `_`, environment variables are upper case with the prefix.
pub const KEYS: &[&str] = &[
    "method",
    "window",
    "overlap",
    "fft_length",
    "order",
    "k_test",
    "phase_tolerance",
    "phase_epsilon",
    "truncation",
    "rows",
    "order_tolerance",
    "data_tolerance",
    "model_tolerance",
    "frequency_tolerance",
    "cascade_tolerance",
    "white_noise_sigmas",
    "seed",
    "length",
    "response_length",
    "damping",
    "format",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("invalid value {value:?} for {key}"))
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "method" => {
                self.method = match v {
                    "auto" => Method::Auto,
                    "periodogram" => Method::Periodogram,
                    "welch" => Method::Welch,
                    _ => {
                        return Err(format!(
                            "method must be auto, periodogram or welch, not {v:?}"
                        ))
                    }
                }
            }
            "window" => self.window = Some(parse(key, v)?),
            "overlap" => self.overlap = parse(key, v)?,
            "fft_length" => self.fft_length = Some(parse(key, v)?),
            "order" => self.order = parse(key, v)?,
            "k_test" => self.k_test = parse(key, v)?,
            "phase_tolerance" => self.phase_tolerance = parse(key, v)?,
            "phase_epsilon" => self.phase_epsilon = parse(key, v)?,
            "truncation" => self.truncation = parse(key, v)?,
            "rows" => self.rows = parse(key, v)?,
            "order_tolerance" => self.order_tolerance = parse(key, v)?,
            "data_tolerance" => self.data_tolerance = parse(key, v)?,
            "model_tolerance" => self.model_tolerance = parse(key, v)?,
            "frequency_tolerance" => self.frequency_tolerance = parse(key, v)?,
            "cascade_tolerance" => self.cascade_tolerance = parse(key, v)?,
            "white_noise_sigmas" => self.white_noise_sigmas = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "length" => self.length = parse(key, v)?,
            "response_length" => self.response_length = parse(key, v)?,
            "damping" => self.damping = parse(key, v)?,
            "format" => {
                self.format = match v {
                    "json" => Format::Json,
                    "text" => Format::Text,
                    _ => return Err(format!("format must be json or text, not {v:?}")),
                }
            }
            _ => return Err(format!("unknown configuration key {key:?}")),
        }
        Ok(())
    }

    /// Applies a flat TOML file of `key = value` lines.
    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        let table: toml::Table = toml::from_str(&text).map_err(|e| {
            CliError::Validation(format!("{}: {}", path.display(), e.to_string().trim_end()))
        })?;
        for (key, value) in &table {
            let line = text
                .lines()
                .position(|l| {
                    l.trim_start()
                        .strip_prefix(key.as_str())
                        .is_some_and(|rest| rest.trim_start().starts_with('='))
                })
                .map_or(0, |i| i + 1);
            let text_value = match value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                toml::Value::Boolean(b) => b.to_string(),
                _ => {
                    return Err(CliError::Validation(format!(
                        "{}:{line}: {key} must be a scalar",
                        path.display()
                    )))
                }
            };
            self.set(key, &text_value)
                .map_err(|e| CliError::Validation(format!("{}:{line}: {e}", path.display())))?;
        }
        Ok(())
    }

    /// Applies `CEPDIST_<KEY>` variables from `vars`.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(
        &mut self,
        vars: I,
    ) -> CliResult<()> {
        let mut found: Vec<(String, String)> = vars
            .into_iter()
            .filter_map(|(k, v)| {
                let key = k.strip_prefix(ENV_PREFIX)?.to_ascii_lowercase();
                KEYS.contains(&key.as_str()).then_some((key, v))
            })
            .collect();
        found.sort();
        for (key, value) in found {
            self.set(&key, &value).map_err(|e| {
                CliError::Validation(format!("{ENV_PREFIX}{}: {e}", key.to_ascii_uppercase()))
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        let positive = [
            ("phase_tolerance", self.phase_tolerance),
            ("phase_epsilon", self.phase_epsilon),
            ("order_tolerance", self.order_tolerance),
            ("data_tolerance", self.data_tolerance),
            ("model_tolerance", self.model_tolerance),
            ("frequency_tolerance", self.frequency_tolerance),
            ("cascade_tolerance", self.cascade_tolerance),
            ("white_noise_sigmas", self.white_noise_sigmas),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Validation(format!(
                    "{key} must be positive and finite"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(CliError::Validation("overlap must lie in [0, 1)".into()));
        }
        for (key, v) in [
            ("fft_length", self.fft_length),
            ("response_length", Some(self.response_length)),
        ] {
            if let Some(l) = v {
                if !l.is_power_of_two() {
                    return Err(CliError::Validation(format!(
                        "{key} must be a power of two, not {l}"
                    )));
                }
            }
        }
        for (key, v) in [
            ("order", self.order),
            ("k_test", self.k_test),
            ("truncation", self.truncation),
            ("rows", self.rows),
            ("length", self.length),
        ] {
            if v == 0 {
                return Err(CliError::Validation(format!("{key} must be positive")));
            }
        }
        if self.window == Some(0) {
            return Err(CliError::Validation("window must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(CliError::Validation("damping must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn estimator(&self) -> Estimator {
        match self.method {
            Method::Auto => Estimator::Auto,
            Method::Periodogram => Estimator::Periodogram {
                fft_length: self.fft_length,
            },
            Method::Welch => Estimator::Welch {
                window_len: self.window.unwrap_or(1024),
                overlap: self.overlap,
                fft_length: self.fft_length,
            },
        }
    }

    pub fn classifier(&self) -> ClassifierConfig {
        ClassifierConfig {
            k_test: self.k_test,
            tolerance: self.phase_tolerance,
            epsilon: self.phase_epsilon,
        }
    }

    pub fn io_classifier(&self) -> IoClassifierConfig {
        IoClassifierConfig {
            fft_length: self.fft_length,
            classifier: self.classifier(),
        }
    }

    pub fn hankel(&self) -> HankelConfig {
        HankelConfig {
            rows: self.rows,
            columns: None,
            order: None,
            order_tol: self.order_tolerance,
        }
    }

    pub fn metric(&self) -> MetricConfig {
        MetricConfig {
            estimator: self.estimator(),
            order: self.order,
            hankel: self.hankel(),
            phase: self.io_classifier(),
        }
    }
}
