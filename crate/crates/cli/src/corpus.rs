//! Batch runs over a directory of problem files with `.expect` sidecars.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::commands::{run, Input};
use crate::report::{digest, Budget, Flags, Outcome, Report, SCHEMA};

/// One expectation line: `command: verdict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub command: String,
    pub verdict: String,
}

pub fn parse_expectations(text: &str) -> Result<Vec<Expectation>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (c, v) = line
            .split_once(':')
            .ok_or_else(|| format!("line {}: expected `command: verdict`", i + 1))?;
        out.push(Expectation {
            command: c.trim().to_string(),
            verdict: v.trim().to_string(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Row {
    file: String,
    command: String,
    expected: String,
    actual: String,
    outcome: String,
    pass: bool,
    steps: u64,
}

impl Row {
    fn to_json(&self) -> Value {
        json!({
            "file": self.file,
            "command": self.command,
            "expected": self.expected,
            "actual": self.actual,
            "outcome": self.outcome,
            "pass": self.pass,
        })
    }
}

fn problem_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "prob"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_file(path: &Path, flags: &Flags) -> (Vec<Row>, Vec<u8>) {
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let failure = |msg: String| Row {
        file: file.clone(),
        command: String::new(),
        expected: String::new(),
        actual: msg,
        outcome: "input-error".into(),
        pass: false,
        steps: 0,
    };
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return (vec![failure(format!("unreadable: {e}"))], Vec::new()),
    };
    let sidecar = path.with_extension("expect");
    let expect_text = match fs::read_to_string(&sidecar) {
        Ok(t) => t,
        Err(_) => return (vec![failure("missing sidecar".into())], bytes),
    };
    let mut fingerprint = bytes.clone();
    fingerprint.extend(expect_text.as_bytes());
    let expectations = match parse_expectations(&expect_text) {
        Ok(e) if !e.is_empty() => e,
        Ok(_) => return (vec![failure("empty sidecar".into())], fingerprint),
        Err(e) => return (vec![failure(format!("bad sidecar: {e}"))], fingerprint),
    };
    let input = Input::File {
        name: file.clone(),
        bytes,
    };
    let rows = expectations
        .into_iter()
        .map(|e| {
            let r = run(&e.command, &input, flags, false);
            let outcome = serde_json::to_value(r.outcome)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            Row {
                file: file.clone(),
                pass: r.verdict == e.verdict,
                command: e.command,
                expected: e.verdict,
                actual: r.verdict,
                outcome,
                steps: r.budget.reduction_steps,
            }
        })
        .collect();
    (rows, fingerprint)
}

/// Runs every `*.prob` in `dir` against its sidecar, `workers` at a time.
/// The report lists entries in file-name order regardless of scheduling.
pub fn run_corpus(dir: &Path, flags: &Flags, workers: usize, timing: bool) -> Report {
    let start = Instant::now();
    let base = |outcome, verdict: String, details| Report {
        schema: SCHEMA,
        command: "corpus".into(),
        input: Some(dir.display().to_string()),
        input_digest: None,
        flags: *flags,
        outcome,
        verdict,
        details,
        budget: Budget {
            max_steps: flags.max_steps,
            reduction_steps: 0,
        },
        timing_ms: None,
    };
    let files = match problem_files(dir) {
        Ok(f) => f,
        Err(e) => {
            let mut d = Map::new();
            d.insert(
                "error".into(),
                json!(format!("cannot read {}: {e}", dir.display())),
            );
            return base(Outcome::InputError, "error".into(), d);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<(Vec<Row>, Vec<u8>)> =
        pool.install(|| files.par_iter().map(|f| run_file(f, flags)).collect());
    let mut all_bytes = Vec::new();
    let mut rows = Vec::new();
    for (f, (r, b)) in files.iter().zip(results) {
        all_bytes.extend(
            f.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .as_bytes(),
        );
        all_bytes.push(0);
        all_bytes.extend(b);
        rows.extend(r);
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let failed = rows.len() - passed;
    let mut d = Map::new();
    d.insert("files".into(), json!(files.len()));
    d.insert("passed".into(), json!(passed));
    d.insert("failed".into(), json!(failed));
    d.insert(
        "entries".into(),
        Value::Array(rows.iter().map(Row::to_json).collect()),
    );
    let outcome = if failed == 0 {
        Outcome::Verdict
    } else {
        Outcome::Mismatch
    };
    let mut report = base(outcome, format!("{passed}/{} passed", rows.len()), d);
    report.input_digest = Some(digest(&all_bytes));
    report.budget.reduction_steps = rows.iter().map(|r| r.steps).sum();
    report.timing_ms = timing.then(|| start.elapsed().as_millis() as u64);
    report
}
