//! Report types, number formatting and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentKind;
use crate::CliError;

/// `x` rounded to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        speclab::fmt_sig(x).parse().expect("fmt_sig output parses")
    } else {
        x
    }
}

/// Rounds every non-integer number in a JSON tree to 15 significant digits.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Serializes `x` and rounds its numbers.
pub fn to_rounded_value<T: Serialize>(x: &T) -> Value {
    round_value(serde_json::to_value(x).expect("report values serialize"))
}

/// One checked statement with its measured value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub description: String,
    /// `None` when the measurement is not a finite number.
    pub measured: Option<f64>,
    pub expected: String,
    pub passed: bool,
}

impl Claim {
    pub fn new(name: &str, description: &str, measured: f64, expected: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            measured: measured.is_finite().then(|| round_sig(measured)),
            expected: expected.into(),
            passed: passed && !measured.is_nan(),
        }
    }

    pub fn line(&self, run: &str) -> String {
        let m = self.measured.map_or_else(|| "NaN".to_string(), speclab::fmt_sig);
        format!(
            "{} {run}/{}: measured {m}, expected {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub run: String,
    pub experiment: ExperimentKind,
    /// Descriptive anchor of the statement the run checks.
    pub paper_ref: String,
    pub params: Value,
    pub claims: Vec<Claim>,
    pub results: Value,
    pub files: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid report: {e}")))
    }
}

/// A data file produced by a run, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |what: &str, p: &Path, e: std::io::Error| CliError::Io(format!("{what} {}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io("cannot create", dir, e))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(io("cannot write", &target, e));
    }
    Ok(target)
}

/// Writes the artifacts and then the JSON report of one run.
pub fn write_run(dir: &Path, out: &RunOutput) -> Result<(), CliError> {
    for a in &out.artifacts {
        write_atomic(dir, &a.file, &a.contents)?;
    }
    write_atomic(dir, &format!("{}.json", out.report.run), &out.report.to_json())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub run: String,
    pub paper_ref: String,
    pub passed: bool,
    pub claims: Vec<ClaimStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimStatus {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: Vec<SummaryEntry>,
    pub passed: bool,
}

impl Summary {
    pub fn new(reports: &[&Report]) -> Self {
        let runs: Vec<SummaryEntry> = reports
            .iter()
            .map(|r| SummaryEntry {
                run: r.run.clone(),
                paper_ref: r.paper_ref.clone(),
                passed: r.passed,
                claims: r.claims.iter().map(|c| ClaimStatus { name: c.name.clone(), passed: c.passed }).collect(),
            })
            .collect();
        let passed = runs.iter().all(|r| r.passed);
        Self { runs, passed }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}
