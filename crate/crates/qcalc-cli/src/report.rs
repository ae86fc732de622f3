//! Versioned JSON reports with per-check records.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "qcalc-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, pass: bool) -> Self {
        CheckRecord { id: id.into(), pass, witness: None, counterexample: None, wall_time_ms: None }
    }

    /// Attaches `detail` as witness on success and as counterexample on failure.
    pub fn detail(mut self, detail: Value) -> Self {
        if self.pass {
            self.witness = Some(detail);
        } else {
            self.counterexample = Some(detail);
        }
        self
    }

    pub fn error(id: impl Into<String>, msg: impl std::fmt::Display) -> Self {
        CheckRecord::new(id, false).detail(json!({ "error": msg.to_string() }))
    }
}

pub type Job = Box<dyn Fn() -> CheckRecord + Send + Sync>;

/// Runs independent checks on the current rayon pool, keeping input order.
pub fn run_jobs(jobs: Vec<Job>) -> Vec<CheckRecord> {
    jobs.par_iter()
        .map(|job| {
            let t = Instant::now();
            let mut rec = job();
            rec.wall_time_ms = Some(t.elapsed().as_millis());
            rec
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub result: Option<Value>,
}

impl Report {
    pub fn new(suite: &str, config: Value, checks: Vec<CheckRecord>) -> Self {
        Report { suite: suite.to_string(), config, checks, result: None }
    }

    pub fn with_result(mut self, v: Value) -> Self {
        self.result = Some(v);
        self
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self, timestamps: bool) -> Value {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = serde_json::to_value(c).expect("check serialises");
                if !timestamps {
                    v.as_object_mut().unwrap().remove("wall_time_ms");
                }
                v
            })
            .collect();
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.insert("suite".into(), json!(self.suite));
        out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        out.insert("config".into(), self.config.clone());
        out.insert("checks".into(), Value::Array(checks));
        if let Some(r) = &self.result {
            out.insert("result".into(), r.clone());
        }
        out.insert("summary".into(), json!({ "total": self.checks.len(), "passed": passed, "failed": self.checks.len() - passed }));
        out.insert("pass".into(), json!(self.pass()));
        if timestamps {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            out.insert("generated_at".into(), json!(secs));
        }
        stringify_numbers(Value::Object(out))
    }

    /// `id,pass,detail` rows.
    pub fn to_csv(&self, timestamps: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["id", "pass", "detail"];
        if timestamps {
            header.push("wall_time_ms");
        }
        w.write_record(&header).unwrap();
        for c in &self.checks {
            let detail = c.witness.as_ref().or(c.counterexample.as_ref()).map(|v| stringify_numbers(v.clone()).to_string()).unwrap_or_default();
            let mut row = vec![c.id.clone(), c.pass.to_string(), detail];
            if timestamps {
                row.push(c.wall_time_ms.map(|t| t.to_string()).unwrap_or_default());
            }
            w.write_record(&row).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Every JSON number becomes its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}
