//! Sweep configuration and the flat `key = value` config file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::axis::Axis;
use crate::columns::{parse_columns, Column};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::usage(format!("format must be csv or json, got {other:?}"))),
        }
    }
}

/// A gain inserted into each state's gain list and flagged in the `marked`
/// column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    QtLimit,
    AttOptimum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub r: Axis,
    pub eta_a: Axis,
    pub eta_b: Axis,
    pub gain: Option<Axis>,
    pub marker: Option<Marker>,
    pub columns: Vec<Column>,
}

pub const DEFAULT_COLUMNS: &str = "n,m,c,nu,E_BA,E_AB,F_best,region";

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            r: Axis::range(0.05, 3.0, 0.05),
            eta_a: Axis::range(0.01, 1.0, 0.01),
            eta_b: Axis::range(0.01, 1.0, 0.01),
            gain: None,
            marker: None,
            columns: parse_columns(DEFAULT_COLUMNS).expect("default columns are registered"),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.r.validate("r")?;
        self.eta_a.validate("eta-a")?;
        self.eta_b.validate("eta-b")?;
        if let Some(g) = &self.gain {
            g.validate("gain")?;
        }
        if self.columns.is_empty() {
            return Err(CliError::usage("at least one column is required"));
        }
        if self.gain.is_none() {
            if let Some(c) = self.columns.iter().find(|c| c.needs_gain()) {
                return Err(CliError::usage(format!("column {c} needs a gain axis (--gain)")));
            }
        }
        Ok(())
    }

    /// Applies `key = value` settings; unknown keys are rejected.
    pub fn apply(&mut self, settings: &Settings) -> Result<()> {
        for (key, value) in &settings.values {
            match key.as_str() {
                "r" => self.r = value.parse()?,
                "eta-a" => self.eta_a = value.parse()?,
                "eta-b" => self.eta_b = value.parse()?,
                "gain" => self.gain = Some(value.parse()?),
                "columns" => self.columns = parse_columns(value)?,
                "format" | "output" => {}
                _ => unreachable!("keys are checked when parsed"),
            }
        }
        Ok(())
    }
}

pub const KEYS: &[&str] = &["r", "eta-a", "eta-b", "gain", "columns", "format", "output"];

/// Parsed config file. Keys mirror the long flag names; `_` and `-` are
/// interchangeable and case is ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "config line {}: unknown key {key:?}; known: {}",
                    lineno + 1,
                    KEYS.join(", ")
                )));
            }
            values.insert(key, value.trim().to_owned());
        }
        Ok(Self { values })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading config {}", path.display()), e))?;
        Self::parse(&text)
    }

    pub fn format(&self) -> Result<Option<Format>> {
        self.values.get("format").map(|v| v.parse()).transpose()
    }

    pub fn output(&self) -> Option<PathBuf> {
        self.values.get("output").map(PathBuf::from)
    }
}
