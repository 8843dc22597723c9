//! `report.json`, CSV tables and the gnuplot script written by every command.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Config;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Measured quantity; `null` when it could not be computed.
    pub value: Option<f64>,
    pub threshold: Value,
    /// One of `<=`, `>=`, `in`, `==`.
    pub comparison: &'static str,
    /// What the value is compared against.
    pub oracle: String,
    pub pass: bool,
    /// Unenforced checks are reported but do not affect the exit status.
    pub enforced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, oracle: &str) -> Self {
        Self {
            name: name.into(),
            value: Some(value),
            threshold: threshold.into(),
            comparison: "<=",
            oracle: oracle.into(),
            pass: value <= threshold,
            enforced: true,
            note: None,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, oracle: &str) -> Self {
        Self {
            name: name.into(),
            value: Some(value),
            threshold: threshold.into(),
            comparison: ">=",
            oracle: oracle.into(),
            pass: value >= threshold,
            enforced: true,
            note: None,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, window: (f64, f64), oracle: &str) -> Self {
        Self {
            name: name.into(),
            value: Some(value),
            threshold: serde_json::json!([window.0, window.1]),
            comparison: "in",
            oracle: oracle.into(),
            pass: value >= window.0 && value <= window.1,
            enforced: true,
            note: None,
        }
    }

    /// A check whose value could not be computed.
    pub fn failed(name: impl Into<String>, oracle: &str, note: String) -> Self {
        Self {
            name: name.into(),
            value: None,
            threshold: Value::Null,
            comparison: "==",
            oracle: oracle.into(),
            pass: false,
            enforced: true,
            note: Some(note),
        }
    }

    pub fn soft(mut self) -> Self {
        self.enforced = false;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Marks the check as passing because every error is at round-off level.
    pub fn floor(mut self, floor: f64) -> Self {
        self.pass = true;
        self.note = Some(format!(
            "all errors below the floor {floor:e}; slope not meaningful"
        ));
        self
    }
}

/// A gnuplot panel: `using` columns of one CSV file.
#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub file: String,
    pub columns: usize,
    pub logx: bool,
    pub logy: bool,
    pub xlabel: String,
    pub ylabel: String,
}

pub struct Report {
    dir: PathBuf,
    command: &'static str,
    config: Config,
    started: Instant,
    values: Map<String, Value>,
    checks: Vec<Check>,
    files: Vec<String>,
    panels: Vec<Panel>,
    error: Option<String>,
}

/// SHA-256 of the canonical (serde field order) JSON form of the config.
pub fn config_hash(cfg: &Config) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn fmt_row(row: &[f64]) -> String {
    let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
    cells.join(",")
}

impl Report {
    pub fn new(dir: &Path, command: &'static str, config: Config) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command,
            config,
            started: Instant::now(),
            values: Map::new(),
            checks: Vec::new(),
            files: Vec::new(),
            panels: Vec::new(),
            error: None,
        })
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.into(), v.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn set_error(&mut self, msg: String) {
        self.error = Some(msg);
    }

    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass || !c.enforced)
    }

    fn record(&mut self, name: &str) -> io::Result<PathBuf> {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.into());
        }
        Ok(self.dir.join(name))
    }

    /// Numeric table with a header line.
    pub fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<f64>]) -> io::Result<()> {
        let mut out = header.join(",");
        out.push('\n');
        for r in rows {
            out.push_str(&fmt_row(r));
            out.push('\n');
        }
        let path = self.record(name)?;
        fs::write(path, out)
    }

    /// Table whose leading columns are text.
    pub fn csv_labelled(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[(Vec<String>, Vec<f64>)],
    ) -> io::Result<()> {
        let mut out = header.join(",");
        out.push('\n');
        for (labels, nums) in rows {
            out.push_str(&labels.join(","));
            if !nums.is_empty() {
                out.push(',');
                out.push_str(&fmt_row(nums));
            }
            out.push('\n');
        }
        let path = self.record(name)?;
        fs::write(path, out)
    }

    pub fn panel(&mut self, p: Panel) {
        self.panels.push(p);
    }

    fn gnuplot(&self) -> String {
        let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
        if self.panels.len() > 1 {
            let _ = writeln!(s, "set multiplot layout {},1", self.panels.len());
        }
        for p in &self.panels {
            s.push_str(if p.logx {
                "set logscale x\n"
            } else {
                "unset logscale x\n"
            });
            s.push_str(if p.logy {
                "set logscale y\n"
            } else {
                "unset logscale y\n"
            });
            let _ = writeln!(s, "set title '{}'", p.title);
            let _ = writeln!(s, "set xlabel '{}'", p.xlabel);
            let _ = writeln!(s, "set ylabel '{}'", p.ylabel);
            let series: Vec<String> = (2..=p.columns)
                .map(|c| format!("'{}' using 1:{c} with linespoints", p.file))
                .collect();
            let _ = writeln!(s, "plot {}", series.join(", "));
        }
        if self.panels.len() > 1 {
            s.push_str("unset multiplot\n");
        }
        s
    }

    /// Writes `plot.gp` and `report.json`; returns the overall verdict.
    pub fn finish(mut self) -> io::Result<bool> {
        if !self.panels.is_empty() {
            let script = self.gnuplot();
            let path = self.record("plot.gp")?;
            fs::write(path, script)?;
        }
        let pass = self.pass();
        let mut files = self.files.clone();
        files.push("report.json".into());
        let mut doc = Map::new();
        doc.insert("command".into(), self.command.into());
        doc.insert(
            "versions".into(),
            serde_json::json!({
                "weakbea-cli": env!("CARGO_PKG_VERSION"),
                "weakbea": weakbea::VERSION,
            }),
        );
        doc.insert("config_hash".into(), config_hash(&self.config).into());
        doc.insert(
            "wall_time".into(),
            self.started.elapsed().as_secs_f64().into(),
        );
        doc.insert(
            "config".into(),
            serde_json::to_value(&self.config).expect("config serializes"),
        );
        doc.insert(
            "values".into(),
            Value::Object(std::mem::take(&mut self.values)),
        );
        doc.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("checks serialize"),
        );
        doc.insert("files".into(), files.into());
        if let Some(e) = &self.error {
            doc.insert("error".into(), e.clone().into());
        }
        doc.insert("pass".into(), pass.into());
        let text = serde_json::to_string_pretty(&Value::Object(doc))?;
        fs::write(self.dir.join("report.json"), text + "\n")?;
        Ok(pass)
    }
}
