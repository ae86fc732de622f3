use serde::Serialize;
use serde_json::Value;

/// `{check, params, pass, witness | residue}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<Value>,
}

impl Report {
    pub fn new(check: &str, params: Value, pass: bool) -> Self {
        Report { check: check.to_string(), params, pass, witness: None, residue: None }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_residue(mut self, r: Value) -> Self {
        self.residue = Some(r);
        self
    }
}
