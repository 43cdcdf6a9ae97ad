use std::fmt;

use serde::{Deserialize, Serialize};

use crate::json::{chain_string, lct_string, num_list, pair_list, RecordJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Present when the output reaches past degree 30, where the list is no
    /// longer known to be complete.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        Metadata {
            tool: "cuspidal".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            mode: None,
            frontier: None,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub metadata: Metadata,
    pub records: Vec<RecordJson>,
}

pub const COLUMNS: [&str; 13] = [
    "degree",
    "newton_pairs",
    "puiseux_pairs",
    "multiplicity_sequence",
    "delta",
    "semigroup_generators",
    "lct",
    "self_intersection",
    "family",
    "kodaira",
    "existence",
    "reduction_chain",
    "bl_check",
];

/// One flat row per record, shared by the CSV and Markdown writers.
pub fn flat_row(r: &RecordJson) -> Vec<String> {
    let bl = match &r.bl_check {
        None => String::new(),
        Some(b) if b.passed => "pass".into(),
        Some(b) => match (&b.j, &b.note) {
            (Some(j), _) => format!("fail j={}", j.0),
            (None, Some(n)) => format!("unknown: {n}"),
            (None, None) => "fail".into(),
        },
    };
    vec![
        r.degree.0.to_string(),
        pair_list(&r.newton_pairs),
        pair_list(&r.puiseux_pairs),
        r.multiplicity_sequence.clone(),
        r.delta.0.to_string(),
        num_list(&r.semigroup_generators),
        lct_string(&r.lct),
        r.self_intersection.0.to_string(),
        r.family.clone().unwrap_or_default(),
        r.kodaira.clone().unwrap_or_default(),
        r.existence.clone(),
        chain_string(&r.reduction_chain),
        bl,
    ]
}

pub fn render(doc: &OutputDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in &doc.records {
                w.write_record(flat_row(r)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Md => {
            let mut s = String::new();
            s.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            s.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in &doc.records {
                let cells: Vec<String> = flat_row(r).into_iter().map(|c| c.replace('|', "\\|")).collect();
                s.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            s
        }
    }
}
