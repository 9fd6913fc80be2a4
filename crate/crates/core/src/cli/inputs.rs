//! Design and data file parsing.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::design::{obf_boundaries, BinaryTrialData, EfficacyBoundaries};

/// Only one-sided efficacy designs are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Sided {
    One,
}

/// Design file contents: explicit z-scale boundaries, or an OBF specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DesignSpec {
    Explicit { e1: f64, e2: f64 },
    ObrienFleming { alpha: f64, sided: Sided, interim_fraction: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitFile {
    e1: f64,
    e2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObfFile {
    alpha: f64,
    sided: Sided,
    interim_fraction: f64,
}

impl DesignSpec {
    pub fn boundaries(&self) -> crate::Result<EfficacyBoundaries> {
        match *self {
            DesignSpec::Explicit { e1, e2 } => EfficacyBoundaries::new(e1, e2),
            DesignSpec::ObrienFleming {
                alpha,
                interim_fraction,
                ..
            } => {
                let b = obf_boundaries(alpha, interim_fraction)?;
                EfficacyBoundaries::new(b.e1, b.e2)
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Deserializes with a diagnostic naming the field path and, for syntax
/// errors, the line and column.
fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        let location = if field == "." {
            String::new()
        } else {
            format!(" field `{field}`:")
        };
        CliError::Validation(format!("{}:{location} {inner}", path.display()))
    })
}

pub fn parse_design(path: &Path, text: &str) -> Result<DesignSpec, CliError> {
    let probe: serde_json::Value = parse(path, text)?;
    let explicit = probe.get("e1").is_some() || probe.get("e2").is_some();
    Ok(if explicit {
        let f: ExplicitFile = parse(path, text)?;
        DesignSpec::Explicit { e1: f.e1, e2: f.e2 }
    } else {
        let f: ObfFile = parse(path, text)?;
        DesignSpec::ObrienFleming {
            alpha: f.alpha,
            sided: f.sided,
            interim_fraction: f.interim_fraction,
        }
    })
}

pub fn read_design(path: &Path) -> Result<DesignSpec, CliError> {
    parse_design(path, &read(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArmFile {
    successes: u64,
    n: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisFile {
    control: ArmFile,
    treatment: ArmFile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DataFile {
    interim: AnalysisFile,
    #[serde(rename = "final")]
    final_: AnalysisFile,
}

impl AnalysisFile {
    fn counts(&self) -> crate::design::AnalysisCounts {
        use crate::design::{AnalysisCounts, ArmCounts};
        AnalysisCounts::new(
            ArmCounts::new(self.control.successes, self.control.n),
            ArmCounts::new(self.treatment.successes, self.treatment.n),
        )
    }
}

pub fn parse_data(path: &Path, text: &str) -> Result<BinaryTrialData, CliError> {
    let f: DataFile = parse(path, text)?;
    BinaryTrialData::new(f.interim.counts(), f.final_.counts())
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn read_data(path: &Path) -> Result<BinaryTrialData, CliError> {
    parse_data(path, &read(path)?)
}
