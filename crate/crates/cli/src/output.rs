use std::fs;
use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use crate::{CliResult, OutputArgs};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render<R: Serialize>(records: &[R], format: Format) -> CliResult<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => Ok(serde_json::to_string_pretty(records).expect("records serialize") + "\n"),
    }
}

/// Writes records to `--out`, or to stdout. The file only appears once the
/// whole output is rendered.
pub fn emit<R: Serialize>(records: &[R], out: &OutputArgs) -> CliResult<()> {
    let text = render(records, out.format)?;
    match &out.out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            fs::write(&tmp, text)?;
            fs::rename(&tmp, path)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
