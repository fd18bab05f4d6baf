//! JSON envelopes for command results.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    EliminationOrdering,
    QuartetIncompatibility,
    DisplayingTree,
    LeafRoot,
    AlternatingCycles,
    FailingCycle,
    GrqEmbedding,
    MinimalityReport,
    ReductionReport,
}

/// `verified` records whether the payload was re-checked by an independent
/// routine after it was produced.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verified: bool,
    pub payload: Value,
}

impl Certificate {
    pub fn new(kind: CertificateKind, verified: bool, payload: impl Serialize) -> Self {
        Self {
            kind,
            verified,
            payload: serde_json::to_value(payload).expect("payloads serialise"),
        }
    }
}

/// What every analysis command prints.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub holds: bool,
    pub summary: String,
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}
