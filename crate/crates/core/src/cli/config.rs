use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primes::{BackendConfig, DEFAULT_HARD_CEILING, DEFAULT_SIEVE_LIMIT};

/// Environment variable naming a config file to load.
pub const CONFIG_ENV: &str = "MATULA_CONFIG";

/// Seed used when none is configured.
pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(OutputFormat::Plain),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub sieve_limit: u64,
    pub hard_ceiling: u64,
    pub output_format: OutputFormat,
    pub strict: bool,
    pub seed: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            hard_ceiling: DEFAULT_HARD_CEILING,
            output_format: OutputFormat::Plain,
            strict: true,
            seed: DEFAULT_SEED,
        }
    }
}

impl CliConfig {
    pub fn backend_config(&self) -> BackendConfig {
        BackendConfig {
            sieve_limit: self.sieve_limit,
            hard_ceiling: self.hard_ceiling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.backend_config().validate()
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are
    /// ignored; keys mirror the long flag names, with `-` or `_`.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let bad = |what: &str| {
                Error::Config(format!("line {}: invalid {what} {value:?}", lineno + 1))
            };
            match key.as_str() {
                "sieve_limit" => {
                    self.sieve_limit = value.parse().map_err(|_| bad("sieve_limit"))?
                }
                "hard_ceiling" => {
                    self.hard_ceiling = value.parse().map_err(|_| bad("hard_ceiling"))?
                }
                "format" | "output_format" => self.output_format = value.parse()?,
                "strict" => self.strict = value.parse().map_err(|_| bad("strict"))?,
                "lenient" => self.strict = !value.parse::<bool>().map_err(|_| bad("lenient"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.apply_file_text(&text)
    }
}
