use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, lowercase scientific.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Header plus rows, comma separated, newline terminated.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
struct JsonRows<'a, T: Serialize> {
    schema_version: u32,
    rows: &'a [T],
}

pub fn rows_json<T: Serialize>(rows: &[T]) -> String {
    to_json(&JsonRows {
        schema_version: SCHEMA_VERSION,
        rows,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let result = match out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).and_then(|_| lock.flush())
        }
    };
    match result {
        // a reader that stops early (e.g. `| head`) is not an error
        Err(e) if out.is_none() && e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
        _ => {}
    }
    result.map_err(|e| {
        let target = out.map_or_else(|| "standard output".to_string(), |p| p.display().to_string());
        CliError::Io(format!("{target}: {e}"))
    })
}
