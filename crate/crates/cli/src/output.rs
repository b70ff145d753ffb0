use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::failure::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        // no negative zero in output
        return format!("{:.16e}", 0.0);
    }
    format!("{v:.16e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    schema_version: u32,
    config: &'a RunConfig,
    report: &'a R,
}

pub fn json<R: Serialize>(config: &RunConfig, report: &R) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        config,
        report,
    })
    .expect("report serializes");
    s.push('\n');
    s
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(config: &RunConfig, header: &[&str]) -> Self {
        let mut buf = config.header_line();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Writes to a sibling temporary file and renames it over `path`, or to
/// standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(contents.as_bytes())?;
        return Ok(out.flush()?);
    };
    let name = path
        .file_name()
        .ok_or_else(|| Failure::invalid(format!("--out {} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let written = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = written.and_then(|_| fs::rename(&tmp, path)) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}
