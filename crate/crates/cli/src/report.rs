use csa_core::normeq::Certificate;
use serde::Serialize;
use serde_json::Value;

use crate::bundle::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Undecided,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Yes | Status::No => 0,
            Status::Undecided => 2,
            Status::Error => 1,
        }
    }
}

/// One document per run. `witness` is present exactly when the status is yes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub certificate: Option<Value>,
    pub reason: Option<String>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        Report { command: command.to_string(), status, witness: None, certificate: None, reason: None, timing_ms: 0 }
    }

    pub fn yes(command: &str, witness: Witness) -> Self {
        Report { witness: Some(witness), ..Self::new(command, Status::Yes) }
    }

    pub fn no(command: &str, cert: &Certificate) -> Self {
        Report { certificate: Some(certificate_json(cert)), ..Self::new(command, Status::No) }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn certificate_json(cert: &Certificate) -> Value {
    match cert {
        Certificate::Enumeration { checked } => {
            serde_json::json!({ "kind": "enumeration", "checked": checked.to_string() })
        }
        Certificate::LocalObstruction { place, detail } => {
            serde_json::json!({ "kind": "local_obstruction", "place": place.to_string(), "detail": detail })
        }
    }
}
