use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable outcome of one command.
///
/// Field order is fixed by declaration; `result` is a `serde_json::Value`,
/// whose maps are key-sorted, so identical inputs give byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    pub inputs: Vec<InputDigest>,
    pub result: Option<Value>,
    pub error: Option<String>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub inputs: Vec<String>,
    pub ideal: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub source: String,
    /// `file` or `matrix`.
    pub kind: String,
    pub sha256: String,
    /// Vertex names in index order; empty when the input did not parse.
    pub vertices: Vec<String>,
}

impl InputDigest {
    pub fn new(source: &str, kind: &str, bytes: &[u8]) -> Self {
        InputDigest {
            source: source.to_string(),
            kind: kind.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            vertices: Vec::new(),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
