use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// An accurate result that contradicts a stated claim; not a bug.
    Finding,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Finding => 0,
            Verdict::Fail => 1,
        }
    }
}

/// Input errors; all of them exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{artifact} failed validation: {reason}")]
    ValidationFailed { artifact: String, reason: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn invalid(artifact: impl Into<String>, reason: impl ToString) -> Self {
        CliError::ValidationFailed { artifact: artifact.into(), reason: reason.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Loads artifacts and records where each came from.
#[derive(Debug, Default)]
pub struct Workspace {
    inputs: Vec<Provenance>,
}

impl Workspace {
    pub fn load<T: DeserializeOwned>(&mut self, role: &str, path: &Path) -> Result<T, CliError> {
        let display = path.display().to_string();
        if self.inputs.iter().any(|p| p.role == role) {
            return Err(CliError::Usage(format!("artifact name {role} given twice")));
        }
        let bytes = fs::read(path).map_err(|e| CliError::Io { path: display.clone(), reason: e.to_string() })?;
        let value = serde_json::from_slice(&bytes).map_err(|e| CliError::invalid(format!("{role} ({display})"), e))?;
        self.inputs.push(Provenance { role: role.to_string(), path: display, sha256: hex::encode(Sha256::digest(&bytes)) });
        Ok(value)
    }

    pub fn into_inputs(self) -> Vec<Provenance> {
        self.inputs
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub verb: String,
    pub verdict: Verdict,
    /// Tag of the statement this command checks; resolved in docs/anchors.md.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Vec<Provenance>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Produced artifact, when it was not written to `--out`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
    /// Where the produced artifact went, with its hash.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub written: Option<Provenance>,
}

/// What a command computed, before provenance is attached.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub anchor: &'static str,
    pub seed: Option<u64>,
    pub result: Value,
    pub witness: Option<Value>,
    pub artifact: Option<Artifact>,
}

#[derive(Debug)]
pub enum Artifact {
    Json(Value),
    Text(String),
}

impl Outcome {
    pub fn new(verdict: Verdict, anchor: &'static str, result: impl Serialize) -> Self {
        Self { verdict, anchor, seed: None, result: to_value(result), witness: None, artifact: None }
    }

    pub fn pass(anchor: &'static str, result: impl Serialize) -> Self {
        Self::new(Verdict::Pass, anchor, result)
    }

    /// PASS when `ok`, otherwise `otherwise` with the given witness.
    pub fn judged(ok: bool, otherwise: Verdict, anchor: &'static str, result: impl Serialize, witness: impl FnOnce() -> Value) -> Self {
        let mut o = Self::new(if ok { Verdict::Pass } else { otherwise }, anchor, result);
        if !ok {
            o.witness = Some(witness());
        }
        o
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_artifact(mut self, a: Artifact) -> Self {
        self.artifact = Some(a);
        self
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })
}

/// Writes the artifact to `out` if there is one (the report then goes to
/// standard output), otherwise writes the report to `out` or standard output.
pub fn emit(verb: &str, ws: Workspace, outcome: Outcome, out: Option<&PathBuf>) -> Result<Verdict, CliError> {
    assert!(
        outcome.verdict == Verdict::Pass || outcome.witness.is_some(),
        "{verb}: non-passing verdicts carry a witness"
    );
    let mut report = Report {
        verb: verb.to_string(),
        verdict: outcome.verdict,
        anchor: outcome.anchor.to_string(),
        seed: outcome.seed,
        inputs: ws.into_inputs(),
        result: outcome.result,
        witness: outcome.witness,
        artifact: None,
        written: None,
    };
    let mut report_to = out;
    if let Some(a) = outcome.artifact {
        match out {
            Some(path) => {
                let bytes = match a {
                    Artifact::Json(v) => pretty(&v),
                    Artifact::Text(t) => t.into_bytes(),
                };
                write_file(path, &bytes)?;
                report.written = Some(Provenance {
                    role: "output".into(),
                    path: path.display().to_string(),
                    sha256: hex::encode(Sha256::digest(&bytes)),
                });
                report_to = None;
            }
            None => {
                report.artifact = Some(match a {
                    Artifact::Json(v) => v,
                    Artifact::Text(t) => Value::String(t),
                })
            }
        }
    }
    let bytes = pretty(&to_value(&report));
    match report_to {
        Some(path) => write_file(path, &bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                reason: e.to_string(),
            })?;
        }
    }
    Ok(report.verdict)
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("json values serialize");
    bytes.push(b'\n');
    bytes
}
