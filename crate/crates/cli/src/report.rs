use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub cartan: String,
    pub lambda: BTreeMap<String, u32>,
    pub beta: BTreeMap<String, u32>,
    pub gamma: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub instance: InstanceRecord,
    pub claim: String,
    pub status: Status,
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub failed: usize,
    pub exit_status: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: String,
    pub field: String,
    pub claims: Vec<ClaimRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub summary: Summary,
}

/// 0 when every claim holds, 1 otherwise.
pub fn claims_status(claims: &[ClaimRecord]) -> u8 {
    if claims.iter().all(|c| c.status == Status::Pass) {
        0
    } else {
        1
    }
}

impl Report {
    pub fn new(task: String, field: String, claims: Vec<ClaimRecord>, error: Option<ErrorRecord>, error_status: Option<u8>) -> Self {
        let failed = claims.iter().filter(|c| c.status == Status::Fail).count();
        let exit_status = error_status.unwrap_or_else(|| claims_status(&claims));
        Report {
            tool: "klr-lab",
            version: env!("CARGO_PKG_VERSION"),
            task,
            field,
            summary: Summary { checked: claims.len(), failed, exit_status },
            claims,
            error,
        }
    }
}
