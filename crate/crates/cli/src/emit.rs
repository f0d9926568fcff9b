//! Record construction and emission.
//!
//! Every command produces a list of flat records (ordered key/value
//! pairs). JSON output prints one object per line with keys sorted;
//! CSV output keeps the declared column order, writes a header row, and
//! quotes per RFC 4180. Exact integers beyond the 53-bit float-safe
//! range are serialized as decimal strings in both formats.

use std::io::Write;

use num_bigint::BigUint;
use serde_json::Value;
use wpslab_core::Error;

/// Largest integer every JSON consumer can hold losslessly in a double.
const MAX_SAFE: u128 = (1u128 << 53) - 1;

pub type Record = Vec<(&'static str, Value)>;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Internal(String),
    /// The consumer closed the pipe; exit quietly and successfully.
    PipeClosed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::PipeClosed
        } else {
            CliError::Internal(format!("output failed: {e}"))
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Domain(_)) | CliError::Core(Error::Unsupported(_)) => 2,
            CliError::Core(Error::Budget(_)) => 3,
            CliError::Internal(_) => 4,
            CliError::PipeClosed => 0,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Internal(m) => m.clone(),
            CliError::PipeClosed => String::new(),
        }
    }
}

pub fn internal(msg: impl Into<String>) -> CliError {
    CliError::Internal(msg.into())
}

pub fn vu64(x: u64) -> Value {
    if x as u128 <= MAX_SAFE {
        Value::from(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn vu128(x: u128) -> Value {
    if x <= MAX_SAFE {
        Value::from(x as u64)
    } else {
        Value::String(x.to_string())
    }
}

pub fn vbig(x: &BigUint) -> Value {
    match u128::try_from(x) {
        Ok(v) => vu128(v),
        Err(_) => Value::String(x.to_string()),
    }
}

/// Finite floats only; anything else is an internal serialization error.
pub fn vf(x: f64) -> Result<Value, CliError> {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| internal(format!("non-finite value {x} is not serializable")))
}

/// Optional floats: `None` marks an undefined quantity and prints as null.
pub fn vopt(x: Option<f64>) -> Result<Value, CliError> {
    match x {
        Some(v) => vf(v),
        None => Ok(Value::Null),
    }
}

pub fn vstr(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn vbool(b: bool) -> Value {
    Value::Bool(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn csv_err(e: csv::Error) -> CliError {
    if let csv::ErrorKind::Io(io) = e.kind() {
        if io.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::PipeClosed;
        }
    }
    internal(format!("table emit failed: {e}"))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(out: &mut dyn Write, format: Format, records: &[Record]) -> Result<(), CliError> {
    match format {
        Format::Json => {
            for rec in records {
                let mut map = serde_json::Map::new();
                for (k, v) in rec {
                    map.insert((*k).to_string(), v.clone());
                }
                let line = serde_json::to_string(&Value::Object(map))
                    .map_err(|e| internal(format!("record not serializable: {e}")))?;
                writeln!(out, "{line}")?;
            }
        }
        Format::Csv => {
            let Some(first) = records.first() else {
                return Ok(());
            };
            let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(&header).map_err(csv_err)?;
            for rec in records {
                let keys: Vec<&str> = rec.iter().map(|(k, _)| *k).collect();
                if keys != header {
                    return Err(internal(
                        "heterogeneous records cannot share one table".to_string(),
                    ));
                }
                let row: Vec<String> = rec.iter().map(|(_, v)| csv_cell(v)).collect();
                writer.write_record(&row).map_err(csv_err)?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}
