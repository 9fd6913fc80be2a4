//! Artifact writing: run manifests, fixed-precision JSON and CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::CliError;
use crate::simulation::GENERATOR_NAME;

/// Reproducibility metadata carried by every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Full argument vector, program name first.
    pub command: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub generator: &'static str,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &[String], parameters: impl Serialize, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_vec(),
            parameters: serde_json::to_value(parameters).unwrap_or(serde_json::Value::Null),
            seed,
            generator: GENERATOR_NAME,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }
}

/// Seventeen significant digits, scientific notation. Round-trips every f64.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn format_opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

/// Pretty printer that writes floats through [`format_f64`].
struct SigFigFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string(value: &impl Serialize) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("artifact types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn stdout_path() -> PathBuf {
    PathBuf::from("<stdout>")
}

pub fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<(), CliError> {
    let path = out.map(Path::to_path_buf).unwrap_or_else(stdout_path);
    let mut w = open(out)?;
    w.write_all(to_json_string(value).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| io_error(&path, e))
}

/// A CSV table preceded by one `# {manifest}` comment line.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: Option<&Path>, manifest: &RunManifest) -> Result<(), CliError> {
        let path = out.map(Path::to_path_buf).unwrap_or_else(stdout_path);
        let mut w = open(out)?;
        let manifest_line = serde_json::to_string(manifest).expect("manifest serializes");
        writeln!(w, "# {manifest_line}").map_err(|e| io_error(&path, e))?;
        let mut csv = csv::Writer::from_writer(w);
        let result = csv
            .write_record(&self.header)
            .and_then(|_| self.rows.iter().try_for_each(|r| csv.write_record(r)))
            .map_err(|e| CliError::Io {
                path: path.clone(),
                source: e.into(),
            });
        result?;
        csv.flush().map_err(|e| io_error(&path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.137, -1.0 / 3.0, 1e-300, 12345.678, 0.0] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn json_uses_fixed_precision() {
        let s = to_json_string(&serde_json::json!({"x": 0.5, "n": 3, "missing": null}));
        assert!(s.contains("5.0000000000000000e-1"));
        assert!(s.contains("\"n\": 3"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.5));
    }
}
