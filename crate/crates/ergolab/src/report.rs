//! Structured experiment reports.
//!
//! A report carries the resolved settings (every tolerance, resolution and
//! seed that influenced the run), scalar verdicts, and a per-sample
//! breakdown table. Two renderings are provided: a key–value text format
//! with an embedded CSV table, and a JSON document. Both are rendered from
//! pre-formatted strings in insertion order, so identical runs produce
//! byte-identical artifacts.
//!
//! Schema (`ergolab-report-v1`):
//! * `probe`   — probe or experiment kind name;
//! * `system`  — family plus flat parameter list;
//! * `settings` — ordered (key, value) pairs of resolved knobs;
//! * `verdicts` — ordered (key, value) pairs of probe outputs;
//! * `table`   — optional named column table, one row per sample.

use serde::Serialize;

use crate::zoo::SystemSpec;

pub const REPORT_SCHEMA: &str = "ergolab-report-v1";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SystemEcho {
    pub family: String,
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct ReportTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DiagnosticsReport {
    pub schema: String,
    pub probe: String,
    pub system: SystemEcho,
    pub master_seed: u64,
    pub settings: Vec<(String, String)>,
    pub verdicts: Vec<(String, String)>,
    pub table: ReportTable,
}

/// Shortest-round-trip rendering for floats keeps values exact and stable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

impl DiagnosticsReport {
    pub fn new(probe: impl Into<String>, spec: &SystemSpec, master_seed: u64) -> Self {
        DiagnosticsReport {
            schema: REPORT_SCHEMA.to_string(),
            probe: probe.into(),
            system: SystemEcho {
                family: spec.family().name().to_string(),
                params: spec
                    .param_list()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect(),
            },
            master_seed,
            settings: Vec::new(),
            verdicts: Vec::new(),
            table: ReportTable::default(),
        }
    }

    pub fn setting(mut self, key: &str, value: impl ToString) -> Self {
        self.settings.push((key.to_string(), value.to_string()));
        self
    }

    pub fn setting_f64(self, key: &str, value: f64) -> Self {
        let v = fmt_f64(value);
        self.setting(key, v)
    }

    pub fn verdict(mut self, key: &str, value: impl ToString) -> Self {
        self.verdicts.push((key.to_string(), value.to_string()));
        self
    }

    pub fn verdict_f64(self, key: &str, value: f64) -> Self {
        let v = fmt_f64(value);
        self.verdict(key, v)
    }

    pub fn with_table(mut self, columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = ReportTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        };
        self
    }

    pub fn get_verdict(&self, key: &str) -> Option<&str> {
        self.verdicts
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Key–value header plus an embedded CSV breakdown table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.schema));
        out.push_str(&format!("probe = {}\n", self.probe));
        out.push_str(&format!("family = {}\n", self.system.family));
        for (k, v) in &self.system.params {
            out.push_str(&format!("param.{k} = {}\n", fmt_f64(*v)));
        }
        out.push_str(&format!("master_seed = {}\n", self.master_seed));
        for (k, v) in &self.settings {
            out.push_str(&format!("setting.{k} = {v}\n"));
        }
        for (k, v) in &self.verdicts {
            out.push_str(&format!("verdict.{k} = {v}\n"));
        }
        if !self.table.columns.is_empty() {
            out.push_str("\n[table]\n");
            out.push_str(&self.table.columns.join(","));
            out.push('\n');
            for row in &self.table.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
