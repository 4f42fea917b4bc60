use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Cli, Command, Format};
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    log_base: &'static str,
    config: &'a Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    notes: &'a Value,
}

pub enum Body {
    Csv(Vec<u8>),
    Json(Value),
    Text(String),
}

pub struct Artifact {
    pub body: Body,
    /// Extra run facts (warnings, flags) echoed into the header.
    pub notes: Value,
}

impl Artifact {
    pub fn new(body: Body) -> Self {
        Artifact {
            body,
            notes: Value::Null,
        }
    }

    pub fn with_notes(body: Body, notes: Value) -> Self {
        Artifact { body, notes }
    }
}

/// Pick the format: the explicit one if the command supports it, else the
/// command's default.
pub fn choose(requested: Option<Format>, supported: &[Format]) -> Result<Format, CliError> {
    match requested {
        None => Ok(supported[0]),
        Some(f) if supported.contains(&f) => Ok(f),
        Some(f) => Err(CliError::Usage(format!(
            "format {f:?} is not available for this command"
        ))),
    }
}

pub fn csv_body<S: Serialize>(rows: &[S], header: &[&str]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn render(cli: &Cli, artifact: &Artifact) -> Result<Vec<u8>, CliError> {
    let generated_unix = if cli.output.no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    let meta = Meta {
        tool: "pcf",
        version: env!("CARGO_PKG_VERSION"),
        log_base: "e",
        config: &cli.command,
        generated_unix,
        notes: &artifact.notes,
    };
    let mut out = Vec::new();
    match &artifact.body {
        Body::Csv(bytes) => {
            writeln!(out, "# {}", serde_json::to_string(&meta)?)?;
            out.extend_from_slice(bytes);
        }
        Body::Text(text) => {
            writeln!(out, "# {}", serde_json::to_string(&meta)?)?;
            out.extend_from_slice(text.as_bytes());
        }
        Body::Json(value) => {
            let mut obj = Map::new();
            obj.insert("meta".into(), serde_json::to_value(&meta)?);
            match value {
                Value::Object(fields) => obj.extend(fields.clone()),
                other => {
                    obj.insert("result".into(), other.clone());
                }
            }
            serde_json::to_writer_pretty(&mut out, &Value::Object(obj))?;
            out.push(b'\n');
        }
    }
    Ok(out)
}

pub fn emit(cli: &Cli, artifact: &Artifact) -> Result<(), CliError> {
    let bytes = render(cli, artifact)?;
    match &cli.output.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
