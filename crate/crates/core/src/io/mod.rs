//! Data ingestion and serialization: dissimilarity matrices, directed
//! message-count edge lists, and canonical output formats.
//!
//! File formats:
//!
//! * Matrix CSV — row 1 is the comma-separated labels, rows 2..=n+1 hold n
//!   numeric fields each.
//! * Matrix JSON — `{"labels": [...], "matrix": [[...]]}`.
//! * Edge-list CSV — `source,target,count` with that exact header; counts
//!   are positive integers (message counts), self-edges are dropped, and
//!   duplicate (source, target) records are summed.
//! * Tree JSON — `{"labels": [...], "events": [{"merged": [...], "new":
//!   ..., "resolution": ...}]}`.

mod export;
mod trust;

pub use export::{
    dendrogram_value, export, network_csv, network_value, partition_value, report_value,
    ultrametric_value, Exportable, Format,
};
pub use trust::{trust_bounds, TrustClass, TrustPair, TrustReport};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::dendrogram::{Dendrogram, MergeEvent};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::methods::{Method, UltrametricMatrix};
use crate::network::Network;

/// How message counts become dissimilarities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Reciprocal of the count; missing directed pairs get twice the
    /// largest finite value; everything rescaled into (0, 1].
    InverseNormalized,
    /// Restrict to the largest strongly connected component first, then
    /// apply the inverse-normalized rule within it.
    Scc,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::InverseNormalized => "inverse-normalized",
            Policy::Scc => "scc",
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = Error;

    fn from_str(name: &str) -> Result<Policy> {
        match name {
            "inverse-normalized" => Ok(Policy::InverseNormalized),
            "scc" => Ok(Policy::Scc),
            other => {
                Err(Error::UnsupportedFormat { format: other.to_string(), object: "policy" })
            }
        }
    }
}

/// Options for one end-to-end run, assembled by the CLI.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub methods: Vec<Method>,
    pub cuts: Vec<f64>,
    pub policy: Policy,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            methods: vec![Method::Nonreciprocal, Method::Reciprocal],
            cuts: Vec::new(),
            policy: Policy::InverseNormalized,
            seed: 7,
        }
    }
}

/// Directed message-count records over a node set.
///
/// Nodes keep first-appearance order from the raw records; self-edges are
/// dropped (their endpoints remain part of the node set) and duplicate
/// (source, target) records are summed.
#[derive(Clone, Debug, Default)]
pub struct EdgeList {
    nodes: Vec<String>,
    counts: BTreeMap<(usize, usize), u64>,
}

impl EdgeList {
    pub fn from_records<I, S>(records: I) -> EdgeList
    where
        I: IntoIterator<Item = (S, S, u64)>,
        S: Into<String>,
    {
        let mut nodes: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut intern = |label: String, nodes: &mut Vec<String>| -> usize {
            if let Some(&i) = index.get(&label) {
                return i;
            }
            let i = nodes.len();
            index.insert(label.clone(), i);
            nodes.push(label);
            i
        };
        for (source, target, count) in records {
            assert!(count > 0, "edge counts must be positive");
            let s = intern(source.into(), &mut nodes);
            let t = intern(target.into(), &mut nodes);
            if s != t {
                *counts.entry((s, t)).or_insert(0) += count;
            }
        }
        EdgeList { nodes, counts }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn counts(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Split one CSV line into fields, honoring double-quote escaping.
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if field.is_empty() => quoted = true,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut field));
            }
            _ => field.push(c),
        }
    }
    fields.push(field);
    fields.iter().map(|f| f.trim().to_string()).collect()
}

fn parse_number(text: &str, line: usize) -> Result<f64> {
    text.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("expected a number, found {text:?}"),
    })
}

/// Non-empty lines of a file with their 1-based line numbers.
fn numbered_lines(content: &str) -> Vec<(usize, &str)> {
    content
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim().is_empty())
        .collect()
}

#[derive(Deserialize)]
struct MatrixFile {
    labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct TreeFile {
    labels: Vec<String>,
    events: Vec<TreeFileEvent>,
}

#[derive(Deserialize)]
struct TreeFileEvent {
    resolution: f64,
    merged: Vec<String>,
    new: String,
}

/// Line number a matrix-validation error points at, given that matrix row
/// `i` sits on CSV line `i + 2`.
fn matrix_error_line(err: &Error) -> usize {
    match err {
        Error::NegativeEntry { row, .. }
        | Error::NonFiniteEntry { row, .. }
        | Error::ZeroOffDiagonal { row, .. }
        | Error::NonSquare { row, .. } => row + 2,
        Error::NonZeroDiagonal { index, .. } => index + 2,
        _ => 1,
    }
}

/// Load a network from a matrix file; JSON when the first significant byte
/// is `{`, CSV otherwise.
pub fn load_matrix(path: &Path) -> Result<Network> {
    let content = fs::read_to_string(path)?;
    parse_matrix(&content)
}

pub fn parse_matrix(content: &str) -> Result<Network> {
    if content.trim_start().starts_with('{') {
        let file: MatrixFile = serde_json::from_str(content).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        return Network::new(file.labels, file.matrix);
    }
    let lines = numbered_lines(content);
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, message: "empty matrix file".to_string() });
    }
    let labels = split_csv_line(lines[0].1);
    let mut rows = Vec::with_capacity(lines.len() - 1);
    for &(line_no, line) in &lines[1..] {
        let mut row = Vec::new();
        for field in split_csv_line(line) {
            row.push(parse_number(&field, line_no)?);
        }
        rows.push(row);
    }
    if rows.len() != labels.len() {
        return Err(Error::Parse {
            line: lines.last().unwrap().0,
            message: format!("expected {} matrix rows, found {}", labels.len(), rows.len()),
        });
    }
    Network::new(labels, rows).map_err(|e| {
        let line = matrix_error_line(&e);
        e.at_line(line)
    })
}

/// Load an edge list from CSV with the exact header `source,target,count`.
pub fn load_edge_list(path: &Path) -> Result<EdgeList> {
    let content = fs::read_to_string(path)?;
    parse_edge_list(&content)
}

pub fn parse_edge_list(content: &str) -> Result<EdgeList> {
    let lines = numbered_lines(content);
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, message: "empty edge list".to_string() });
    }
    let header = split_csv_line(lines[0].1);
    if header != ["source", "target", "count"] {
        return Err(Error::Parse {
            line: lines[0].0,
            message: "expected header \"source,target,count\"".to_string(),
        });
    }
    let mut records = Vec::new();
    for &(line_no, line) in &lines[1..] {
        let fields = split_csv_line(line);
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let count: u64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("expected a positive integer count, found {:?}", fields[2]),
        })?;
        if count == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: "count must be positive".to_string(),
            });
        }
        records.push((fields[0].clone(), fields[1].clone(), count));
    }
    Ok(EdgeList::from_records(records))
}

/// Convert message counts to a dissimilarity network.
///
/// Raw dissimilarity is the reciprocal of the (summed) count, so heavier
/// traffic means closer nodes. Directed pairs with no messages receive
/// twice the largest finite raw value, keeping every entry finite, and all
/// off-diagonal values are then divided by the global maximum so they land
/// in (0, 1]. The `scc` policy drops nodes outside the largest strongly
/// connected component before applying the same rule.
pub fn counts_to_dissimilarity(edges: &EdgeList, policy: Policy) -> Result<Network> {
    let (nodes, counts) = match policy {
        Policy::InverseNormalized => (edges.nodes.clone(), edges.counts.clone()),
        Policy::Scc => restrict_to_largest_scc(edges),
    };
    if nodes.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let n = nodes.len();
    if n == 1 {
        return Network::from_matrix(nodes, SquareMatrix::zeros(1));
    }
    if counts.is_empty() {
        return Err(Error::EmptyEdgeList);
    }

    let mut raw = SquareMatrix::zeros(n);
    let mut max_finite = 0.0_f64;
    for (&(i, j), &count) in &counts {
        let value = 1.0 / count as f64;
        raw.set(i, j, value);
        max_finite = max_finite.max(value);
    }
    let missing = 2.0 * max_finite;
    let mut any_missing = false;
    for i in 0..n {
        for j in 0..n {
            if i != j && raw.get(i, j) == 0.0 {
                raw.set(i, j, missing);
                any_missing = true;
            }
        }
    }
    let scale = if any_missing { missing } else { max_finite };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = raw.get(i, j) / scale;
                raw.set(i, j, v);
            }
        }
    }
    Network::from_matrix(nodes, raw)
}

/// Largest strongly connected component of the directed count graph,
/// keeping node order; ties broken toward the earliest-appearing node.
fn restrict_to_largest_scc(edges: &EdgeList) -> (Vec<String>, BTreeMap<(usize, usize), u64>) {
    let n = edges.nodes.len();
    if n == 0 {
        return (Vec::new(), BTreeMap::new());
    }
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for &(i, j) in edges.counts.keys() {
        forward[i].push(j);
        backward[j].push(i);
    }

    // Kosaraju with explicit stacks.
    let mut finish_order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < forward[node].len() {
                let child = forward[node][*next];
                *next += 1;
                if !visited[child] {
                    visited[child] = true;
                    stack.push((child, 0));
                }
            } else {
                finish_order.push(node);
                stack.pop();
            }
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut component_count = 0;
    for &start in finish_order.iter().rev() {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = component_count;
        while let Some(node) = stack.pop() {
            for &prev in &backward[node] {
                if component[prev] == usize::MAX {
                    component[prev] = component_count;
                    stack.push(prev);
                }
            }
        }
        component_count += 1;
    }

    let mut sizes = vec![0usize; component_count];
    for &c in &component {
        sizes[c] += 1;
    }
    let max_size = *sizes.iter().max().expect("nonempty node set");
    let largest = (0..n)
        .map(|i| component[i])
        .find(|&c| sizes[c] == max_size)
        .expect("nonempty node set");

    let keep: Vec<usize> = (0..n).filter(|&i| component[i] == largest).collect();
    let mut renumber = vec![usize::MAX; n];
    for (new, &old) in keep.iter().enumerate() {
        renumber[old] = new;
    }
    let nodes = keep.iter().map(|&i| edges.nodes[i].clone()).collect();
    let counts = edges
        .counts
        .iter()
        .filter(|((i, j), _)| component[*i] == largest && component[*j] == largest)
        .map(|(&(i, j), &c)| ((renumber[i], renumber[j]), c))
        .collect();
    (nodes, counts)
}

/// Load a clustering result for comparison: an ultrametric matrix (CSV or
/// JSON) or a tree JSON document.
pub fn load_comparable(path: &Path) -> Result<UltrametricMatrix> {
    let content = fs::read_to_string(path)?;
    parse_comparable(&content)
}

pub fn parse_comparable(content: &str) -> Result<UltrametricMatrix> {
    if content.trim_start().starts_with('{') {
        let probe: serde_json::Value = serde_json::from_str(content).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if probe.get("events").is_some() {
            let file: TreeFile = serde_json::from_str(content).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            let events = file
                .events
                .into_iter()
                .map(|e| MergeEvent {
                    resolution: e.resolution,
                    merged: e.merged,
                    new_cluster: e.new,
                })
                .collect();
            let tree = Dendrogram::from_parts(file.labels, events);
            return crate::dendrogram::dendrogram_to_ultrametric(&tree);
        }
    }
    let net = parse_matrix(content)?;
    UltrametricMatrix::new(net.labels().to_vec(), net.dissim().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_node_csv() {
        let net = parse_matrix("p,q\n0,1\n3,0\n").unwrap();
        assert_eq!(net.labels(), ["p", "q"]);
        assert_eq!(net.get(0, 1), 1.0);
        assert_eq!(net.get(1, 0), 3.0);
    }

    #[test]
    fn parse_matrix_json() {
        let net =
            parse_matrix(r#"{"labels": ["a", "b"], "matrix": [[0, 2], [2, 0]]}"#).unwrap();
        assert_eq!(net.labels(), ["a", "b"]);
        assert_eq!(net.get(0, 1), 2.0);
    }

    #[test]
    fn csv_negative_entry_reports_line() {
        let err = parse_matrix("a,b\n0,-1\n1,0\n").unwrap_err();
        match err {
            Error::AtLine { line, source } => {
                assert_eq!(line, 2);
                assert!(matches!(*source, Error::NegativeEntry { row: 0, col: 1, .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_bad_number_reports_line() {
        let err = parse_matrix("a,b\n0,x\n1,0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn csv_quoted_labels() {
        let net = parse_matrix("\"a,1\",b\n0,1\n1,0\n").unwrap();
        assert_eq!(net.labels()[0], "a,1");
    }

    #[test]
    fn edge_list_requires_header() {
        let err = parse_edge_list("from,to,n\np,q,4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn edge_list_sums_duplicates_and_drops_self_edges() {
        let edges =
            parse_edge_list("source,target,count\np,q,3\np,p,9\np,q,1\nq,p,1\n").unwrap();
        assert_eq!(edges.nodes(), ["p", "q"]);
        assert_eq!(edges.counts()[&(0, 1)], 4);
        assert_eq!(edges.counts()[&(1, 0)], 1);
    }

    #[test]
    fn edge_list_rejects_zero_count() {
        let err = parse_edge_list("source,target,count\np,q,0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn counts_full_pair() {
        let edges = EdgeList::from_records(vec![("p", "q", 4), ("q", "p", 1)]);
        let net = counts_to_dissimilarity(&edges, Policy::InverseNormalized).unwrap();
        assert_eq!(net.get(0, 1), 0.25);
        assert_eq!(net.get(1, 0), 1.0);
    }

    #[test]
    fn counts_missing_direction_capped() {
        let edges = EdgeList::from_records(vec![("p", "q", 4)]);
        let net = counts_to_dissimilarity(&edges, Policy::InverseNormalized).unwrap();
        // raw 0.25 and missing 0.5, rescaled by the global max 0.5.
        assert_eq!(net.get(0, 1), 0.5);
        assert_eq!(net.get(1, 0), 1.0);
    }

    #[test]
    fn counts_symmetric_stay_symmetric() {
        let edges = EdgeList::from_records(vec![
            ("a", "b", 2),
            ("b", "a", 2),
            ("b", "c", 5),
            ("c", "b", 5),
            ("a", "c", 1),
            ("c", "a", 1),
        ]);
        let net = counts_to_dissimilarity(&edges, Policy::InverseNormalized).unwrap();
        assert!(net.is_symmetric());
    }

    #[test]
    fn counts_antitone_in_count() {
        let edges = EdgeList::from_records(vec![("a", "b", 10), ("b", "a", 2)]);
        let net = counts_to_dissimilarity(&edges, Policy::InverseNormalized).unwrap();
        assert!(net.get(0, 1) < net.get(1, 0));
    }

    #[test]
    fn empty_edge_list_rejected() {
        let edges = EdgeList::from_records(Vec::<(String, String, u64)>::new());
        assert!(matches!(
            counts_to_dissimilarity(&edges, Policy::InverseNormalized),
            Err(Error::EmptyEdgeList)
        ));
        // Only self-edges: two nodes but no usable records.
        let selfish = EdgeList::from_records(vec![("p", "p", 3), ("q", "q", 2)]);
        assert!(matches!(
            counts_to_dissimilarity(&selfish, Policy::InverseNormalized),
            Err(Error::EmptyEdgeList)
        ));
    }

    #[test]
    fn scc_policy_keeps_largest_cycle() {
        // a <-> b <-> c cycle plus a dangling sink d.
        let edges = EdgeList::from_records(vec![
            ("a", "b", 1),
            ("b", "a", 1),
            ("b", "c", 2),
            ("c", "b", 2),
            ("a", "d", 5),
        ]);
        let net = counts_to_dissimilarity(&edges, Policy::Scc).unwrap();
        assert_eq!(net.labels(), ["a", "b", "c"]);
    }

    #[test]
    fn scc_policy_singleton_when_acyclic() {
        let edges = EdgeList::from_records(vec![("a", "b", 1), ("b", "c", 1)]);
        let net = counts_to_dissimilarity(&edges, Policy::Scc).unwrap();
        assert_eq!(net.len(), 1);
        assert_eq!(net.labels(), ["a"]);
    }

    #[test]
    fn comparable_accepts_matrix_and_tree() {
        let from_matrix = parse_comparable("p,q\n0,3\n3,0\n").unwrap();
        let tree = r#"{"labels": ["p", "q"],
                       "events": [{"resolution": 3, "merged": ["p", "q"], "new": "p"}]}"#;
        let from_tree = parse_comparable(tree).unwrap();
        assert_eq!(from_matrix, from_tree);
    }
}
