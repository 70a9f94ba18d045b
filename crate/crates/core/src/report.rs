//! Report documents and their plain, JSON and LaTeX renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::finding::Finding;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const PI_PLUS_CONVENTION: &str = "principal part at xi_n = +i";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(format!("unknown format `{s}` (expected plain, json or latex)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub p0_rule: String,
    pub pi_plus: String,
    pub precision_bits: u32,
    pub nodes: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            p0_rule: crate::assembler::DEFAULT_P0_RULE.to_string(),
            pi_plus: PI_PLUS_CONVENTION.to_string(),
            precision_bits: 256,
            nodes: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub config: ReportConfig,
    pub records: Vec<Value>,
    pub findings: Vec<Finding>,
}

impl ReportDocument {
    pub fn new(config: ReportConfig) -> Self {
        Self { version: VERSION.to_string(), config, records: Vec::new(), findings: Vec::new() }
    }

    pub fn push(&mut self, record: Value) {
        self.records.push(record);
    }

    pub fn add_findings(&mut self, f: impl IntoIterator<Item = Finding>) {
        self.findings.extend(f);
        self.findings.sort();
        self.findings.dedup();
    }

    /// Sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        // Value maps are BTreeMaps, so keys come out sorted.
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Plain => self.to_plain(),
            Format::Latex => self.to_latex(),
        }
    }

    fn coefficient_rows(&self) -> Vec<[String; 5]> {
        self.records
            .iter()
            .filter(|r| r.get("defining").is_some() && r.get("closed_form").is_some())
            .map(|r| {
                let s = |k: &str| r.get(k).map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())).unwrap_or_default();
                let ok = r.get("closed_matches_defining").and_then(Value::as_bool).unwrap_or(false);
                [s("name"), s("n"), s("defining"), s("closed_form"), if ok { "yes".into() } else { "no".into() }]
            })
            .collect()
    }

    /// Aligned columns for coefficient records, then other records, then findings.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        let rows = self.coefficient_rows();
        if !rows.is_empty() {
            let head = ["name", "n", "defining", "closed", "match"].map(String::from);
            let mut w = [0usize; 5];
            for r in std::iter::once(&head).chain(rows.iter()) {
                for (k, c) in r.iter().enumerate() {
                    w[k] = w[k].max(c.chars().count());
                }
            }
            for r in std::iter::once(&head).chain(rows.iter()) {
                let cells: Vec<String> = r.iter().enumerate().map(|(k, c)| format!("{c:<width$}", width = w[k])).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
        }
        for r in self.records.iter().filter(|r| r.get("defining").is_none() || r.get("closed_form").is_none()) {
            out.push_str(&plain_record(r));
        }
        if !self.findings.is_empty() {
            out.push_str(&format!("findings ({}):\n", self.findings.len()));
            for f in &self.findings {
                out.push_str(&format!("  [{}] {} {}: {}\n", f.anchor, f.kind, f.subject, f.message));
                for (k, v) in &f.values {
                    out.push_str(&format!("      {k} = {v}\n"));
                }
            }
        }
        out
    }

    /// tabular of (name, n, defining, closed, match).
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{llllc}\n\\hline\nname & $n$ & defining & closed & match \\\\\n\\hline\n");
        for r in self.coefficient_rows() {
            let v = |s: &str| format!("${}$", latex_value(s));
            out.push_str(&format!("${}$ & {} & {} & {} & {} \\\\\n", latex_name(&r[0]), r[1], v(&r[2]), v(&r[3]), r[4]));
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        out
    }
}

fn plain_record(r: &Value) -> String {
    match r.get("text").and_then(Value::as_str) {
        Some(t) => {
            let label = r.get("label").and_then(Value::as_str).unwrap_or("result");
            format!("{label}: {t}\n")
        }
        None => format!("{}\n", serde_json::to_string(r).expect("value serializes")),
    }
}

/// `A0` → `A_{0}`
fn latex_name(s: &str) -> String {
    let (head, tail) = s.split_at(1);
    format!("{head}_{{{tail}}}")
}

/// `-15/8`, `3*i/4` → LaTeX fractions.
fn latex_value(s: &str) -> String {
    match crate::expr::parse_constant(s, 4) {
        Ok(c) => c.to_latex(),
        Err(_) => s.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let d = ReportDocument::new(ReportConfig::default());
        let v: Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["records"], serde_json::json!([]));
        assert_eq!(v["findings"], serde_json::json!([]));
        assert_eq!(v["config"]["precision_bits"], 256);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["config", "findings", "records", "version"]);
    }

    #[test]
    fn json_round_trip() {
        let mut d = ReportDocument::new(ReportConfig::default());
        d.push(serde_json::json!({ "name": "B0", "n": 4, "defining": "-15/8", "closed_form": "-15/8", "closed_matches_defining": true }));
        d.add_findings([Finding::new("closed-form-mismatch", "41", "X@n=4", "m").with("a", 1)]);
        assert_eq!(ReportDocument::from_json(&d.to_json()).unwrap(), d);
        assert!(d.to_plain().contains("B0    4  -15/8     -15/8   yes"));
        assert!(d.to_latex().contains("$B_{0}$ & 4 & $-\\frac{15}{8}$"));
    }
}
