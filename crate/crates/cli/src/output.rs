use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Violation = 1,
    Input = 2,
    Infeasible = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Input,
            message: message.into(),
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<cohconf::Error> for CliError {
    fn from(e: cohconf::Error) -> Self {
        let status = match e {
            cohconf::Error::Intransitive { .. } => Status::Infeasible,
            cohconf::Error::Scheme(_) => Status::Violation,
            _ => Status::Input,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Routes human text to stdout and machine formats to `--out` (or stdout
/// when no path is given).
pub struct Sink {
    format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Sink { format, out }
    }

    /// Machine-format bytes, or `None` for human output.
    fn render<J: Serialize, R: Serialize>(
        &self,
        json: &J,
        csv_rows: &[R],
    ) -> CliResult<Option<Vec<u8>>> {
        Ok(match self.format {
            Format::Human => None,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(json).expect("plain data serialises");
                s.push('\n');
                Some(s.into_bytes())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in csv_rows {
                    w.serialize(row)?;
                }
                Some(w.into_inner().map_err(|e| CliError::input(e.to_string()))?)
            }
        })
    }

    /// Emits one command result. `human` is printed when the format is human
    /// or when machine output goes to a file.
    pub fn emit<J: Serialize, R: Serialize>(
        &self,
        human: &str,
        json: &J,
        csv_rows: &[R],
    ) -> CliResult<()> {
        let machine = self.render(json, csv_rows)?;
        let stdout = io::stdout();
        let mut stdout = stdout.lock();
        match (machine, &self.out) {
            (None, _) => stdout.write_all(human.as_bytes())?,
            (Some(bytes), Some(path)) => {
                fs::write(path, bytes)?;
                stdout.write_all(human.as_bytes())?;
            }
            (Some(bytes), None) => stdout.write_all(&bytes)?,
        }
        Ok(())
    }
}
