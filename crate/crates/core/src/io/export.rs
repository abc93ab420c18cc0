//! Canonical serialization of results.
//!
//! All output is deterministic: labels stay in canonical order, JSON keys
//! are sorted, and numbers render with the shortest decimal that round-trips
//! exactly.

use serde_json::{json, Value};

use crate::dendrogram::{to_newick, Dendrogram, Partition};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::methods::UltrametricMatrix;
use crate::network::Network;
use crate::verify::VerificationReport;

/// Output format for [`export`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Newick,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Newick => "newick",
        }
    }

    /// Format implied by a file extension.
    pub fn from_extension(extension: &str) -> Result<Format> {
        match extension {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "nwk" | "newick" => Ok(Format::Newick),
            other => {
                Err(Error::UnsupportedFormat { format: other.to_string(), object: "file" })
            }
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(name: &str) -> Result<Format> {
        match name {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "newick" => Ok(Format::Newick),
            other => {
                Err(Error::UnsupportedFormat { format: other.to_string(), object: "format" })
            }
        }
    }
}

/// Anything the CLI can serialize.
#[derive(Clone, Copy, Debug)]
pub enum Exportable<'a> {
    Ultrametric(&'a UltrametricMatrix),
    Dendrogram(&'a Dendrogram),
    Partition(&'a Partition),
    Report(&'a VerificationReport),
}

/// Serialize an object in the requested format. Newick applies to
/// dendrograms only.
pub fn export(object: Exportable<'_>, format: Format) -> Result<String> {
    match (object, format) {
        (Exportable::Ultrametric(u), Format::Csv) => Ok(matrix_csv(u)),
        (Exportable::Ultrametric(u), Format::Json) => json_text(&ultrametric_value(u)),
        (Exportable::Ultrametric(_), Format::Newick) => {
            Err(Error::UnsupportedFormat { format: "newick".into(), object: "ultrametric" })
        }
        (Exportable::Dendrogram(d), Format::Newick) => Ok(to_newick(d)),
        (Exportable::Dendrogram(d), Format::Json) => json_text(&dendrogram_value(d)),
        (Exportable::Dendrogram(d), Format::Csv) => Ok(dendrogram_csv(d)),
        (Exportable::Partition(p), Format::Json) => json_text(&partition_value(p)),
        (Exportable::Partition(p), Format::Csv) => Ok(partition_csv(p)),
        (Exportable::Partition(_), Format::Newick) => {
            Err(Error::UnsupportedFormat { format: "newick".into(), object: "partition" })
        }
        (Exportable::Report(r), Format::Json) => json_text(&report_value(r)),
        (Exportable::Report(r), Format::Csv) => Ok(report_csv(r)),
        (Exportable::Report(_), Format::Newick) => Err(Error::UnsupportedFormat {
            format: "newick".into(),
            object: "verification report",
        }),
    }
}

/// Shortest round-trip decimal rendering.
fn number(value: f64) -> String {
    format!("{value}")
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r'])
        || text.starts_with(char::is_whitespace)
        || text.ends_with(char::is_whitespace)
    {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn csv_row<I: IntoIterator<Item = String>>(fields: I) -> String {
    fields.into_iter().collect::<Vec<_>>().join(",")
}

fn labeled_matrix_csv(labels: &[String], values: &SquareMatrix) -> String {
    let mut out = csv_row(labels.iter().map(|l| csv_field(l)));
    out.push('\n');
    for i in 0..values.len() {
        out.push_str(&csv_row((0..values.len()).map(|j| number(values.get(i, j)))));
        out.push('\n');
    }
    out
}

fn matrix_csv(u: &UltrametricMatrix) -> String {
    labeled_matrix_csv(u.labels(), u.values())
}

/// Matrix CSV for a (possibly asymmetric) network, as written by `ingest`.
pub fn network_csv(net: &Network) -> String {
    labeled_matrix_csv(net.labels(), net.dissim())
}

/// `{"labels": [...], "matrix": [[...]]}` for a network.
pub fn network_value(net: &Network) -> Value {
    json!({
        "labels": net.labels(),
        "matrix": net.dissim().to_rows(),
    })
}

fn dendrogram_csv(d: &Dendrogram) -> String {
    let mut out = String::from("resolution,new_cluster,merged\n");
    for event in d.events() {
        out.push_str(&csv_row([
            number(event.resolution),
            csv_field(&event.new_cluster),
            csv_field(&event.merged.join(";")),
        ]));
        out.push('\n');
    }
    out
}

fn partition_csv(p: &Partition) -> String {
    let mut out = String::from("resolution,block,member\n");
    for (index, block) in p.blocks.iter().enumerate() {
        for member in block {
            out.push_str(&csv_row([
                number(p.resolution),
                index.to_string(),
                csv_field(member),
            ]));
            out.push('\n');
        }
    }
    out
}

fn report_csv(r: &VerificationReport) -> String {
    let counterexample = r
        .counterexample
        .as_ref()
        .map(|c| c.inequality.clone())
        .unwrap_or_default();
    let mut out = String::from("check_name,passed,trials,counterexample\n");
    out.push_str(&csv_row([
        csv_field(&r.check_name),
        r.passed.to_string(),
        r.trials.to_string(),
        csv_field(&counterexample),
    ]));
    out.push('\n');
    out
}

fn json_text(value: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// `{"labels": [...], "matrix": [[...]]}` with sorted keys.
pub fn ultrametric_value(u: &UltrametricMatrix) -> Value {
    json!({
        "labels": u.labels(),
        "matrix": u.values().to_rows(),
    })
}

/// `{"events": [...], "labels": [...]}` with sorted keys.
pub fn dendrogram_value(d: &Dendrogram) -> Value {
    let events: Vec<Value> = d
        .events()
        .iter()
        .map(|e| {
            json!({
                "merged": e.merged,
                "new": e.new_cluster,
                "resolution": e.resolution,
            })
        })
        .collect();
    json!({
        "events": events,
        "labels": d.labels(),
    })
}

/// `{"blocks": [[...]], "resolution": ...}` with sorted keys.
pub fn partition_value(p: &Partition) -> Value {
    json!({
        "blocks": p.blocks,
        "resolution": p.resolution,
    })
}

pub fn report_value(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("report serialization is infallible")
}
