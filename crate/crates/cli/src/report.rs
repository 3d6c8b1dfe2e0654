//! The JSON document printed by every subcommand. Field names are part of
//! the external format; absent fields are omitted.

use serde::Serialize;

#[derive(Serialize)]
pub struct WitnessDoc {
    pub input: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

#[derive(Serialize, Default)]
pub struct Document {
    pub command: &'static str,
    pub result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explored: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional_up_to: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub which: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted_by: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs1: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs2: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_before: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_after: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<String>>,
}

impl Document {
    pub fn new(command: &'static str) -> Self {
        Document { command, ..Document::default() }
    }

    pub fn run(accepted: bool, outputs: Vec<String>) -> Self {
        Document { result: if accepted { "accepted" } else { "rejected" }, accepted: Some(accepted), outputs: Some(outputs), ..Document::new("run") }
    }
}
