//! Report assembly. Tasks run in parallel; results are kept in task order
//! and the digest covers everything except timings.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::exec::execute;
use crate::job::{JobFile, Options};

#[derive(Debug, Clone, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub kind: String,
    pub group: Option<String>,
    pub sequence: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    SuiteFailed,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub options: Options,
    pub tasks: Vec<TaskReport>,
    pub errors: usize,
    pub failed_suites: usize,
    /// SHA-256 of the report with every `elapsed_ms` removed.
    pub digest: String,
}

impl Report {
    pub fn success(&self) -> bool {
        self.errors == 0 && self.failed_suites == 0
    }
}

pub fn run(job: &JobFile, base: Options) -> Report {
    let options = job.options(base);
    let tasks: Vec<TaskReport> = job
        .tasks
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let opts = spec.options(&options);
            let start = Instant::now();
            let checked = spec.check(&opts);
            let kind = checked.as_ref().map_or_else(|_| spec_kind(&spec.task), |t| t.kind().to_string());
            let outcome = checked.and_then(|t| execute(&t, &opts));
            let (status, result, error) = match outcome {
                Ok(d) if d.suite_failed => (Status::SuiteFailed, Some(d.value), None),
                Ok(d) => (Status::Ok, Some(d.value), None),
                Err(e) => (Status::Error, None, Some(e.to_string())),
            };
            TaskReport {
                index,
                kind,
                group: spec.group.clone(),
                sequence: spec.sequence.clone(),
                status,
                result,
                error,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect();
    let errors = tasks.iter().filter(|t| t.status == Status::Error).count();
    let failed_suites = tasks.iter().filter(|t| t.status == Status::SuiteFailed).count();
    let mut report = Report { options, tasks, errors, failed_suites, digest: String::new() };
    report.digest = digest(&report);
    report
}

fn spec_kind(t: &crate::job::TaskSpec) -> String {
    use crate::job::TaskSpec::*;
    match t {
        Member(_) => "member",
        Radical => "radical",
        SVFinite => "s_v_finite",
        Construct(_) => "construct",
        Classify(_) => "classify",
        Verify(_) => "verify",
    }
    .to_string()
}

/// Digest of the timing-free payload; `serde_json` maps are key-sorted, so
/// the serialization is canonical.
pub fn digest(report: &Report) -> String {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["digest"] = Value::Null;
    if let Some(tasks) = v["tasks"].as_array_mut() {
        for t in tasks {
            if let Some(o) = t.as_object_mut() {
                o.remove("elapsed_ms");
            }
        }
    }
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for t in &report.tasks {
        let target = match (&t.group, &t.sequence) {
            (Some(g), Some(s)) => format!(" {g} / {s}"),
            (Some(g), None) => format!(" {g}"),
            _ => String::new(),
        };
        let _ = writeln!(out, "[{}] {}{} ({:.1} ms)", t.index, t.kind, target, t.elapsed_ms);
        match (&t.error, &t.result) {
            (Some(e), _) => {
                let _ = writeln!(out, "  error: {e}");
            }
            (None, Some(v)) => text_result(&mut out, &t.kind, v),
            _ => {}
        }
    }
    let _ = writeln!(
        out,
        "{} tasks, {} errors, {} failed suites; digest {}",
        report.tasks.len(),
        report.errors,
        report.failed_suites,
        report.digest
    );
    out
}

fn text_result(out: &mut String, kind: &str, v: &Value) {
    let s = |key: &str| v[key].as_str().map(str::to_string).unwrap_or_else(|| v[key].to_string());
    match kind {
        "member" => {
            for p in v["points"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "  {}: {}", p["point"].as_str().unwrap_or("?"), p["summary"].as_str().unwrap_or("?"));
            }
        }
        "radical" => {
            let _ = writeln!(out, "  n_v = {}", s("radical"));
            for line in v["trace"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    {}", line.as_str().unwrap_or_default());
            }
        }
        "s_v_finite" => {
            let _ = writeln!(out, "  s_v = {} (order {}, index {})", s("subgroup"), v["order"], v["index"]);
        }
        "verify" => {
            let _ = writeln!(out, "  {}: {}/{} passed (seed {})", s("suite"), v["passed"], v["cases"], v["seed"]);
            for c in v["counterexamples"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    counterexample: {}", c.as_str().unwrap_or_default());
            }
        }
        _ => {
            if let Some(o) = v.as_object() {
                for (k, val) in o {
                    let shown = val.as_str().map(str::to_string).unwrap_or_else(|| val.to_string());
                    let _ = writeln!(out, "  {k}: {shown}");
                }
            }
        }
    }
}
