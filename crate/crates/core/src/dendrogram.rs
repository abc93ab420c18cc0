//! Dendrograms: merge trees indexed by a resolution parameter.
//!
//! A dendrogram starts from singletons at resolution 0, merges clusters as
//! the resolution grows (never splitting), and ends with a single cluster.
//! Dendrograms and ultrametrics are two views of the same object: the merge
//! resolution of a pair equals its ultrametric distance, and both
//! conversions here are exact inverses.
//!
//! Canonical form: events are sorted by resolution, simultaneous merges of
//! disjoint groups are separate events at the same resolution, a genuine
//! k-way tie is a single event with k merged clusters, and every cluster is
//! identified by its lexicographically smallest member label.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::methods::UltrametricMatrix;
use crate::verify::{Counterexample, VerificationReport};

/// One merge: at `resolution`, the clusters in `merged` unite into
/// `new_cluster`.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeEvent {
    pub resolution: f64,
    pub merged: Vec<String>,
    pub new_cluster: String,
}

/// Merge tree over an ordered node set.
#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    labels: Vec<String>,
    events: Vec<MergeEvent>,
}

/// Disjoint cover of the node set at a fixed resolution.
///
/// Block members appear in canonical (matrix) order and blocks are ordered
/// by their first member.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub resolution: f64,
    pub blocks: Vec<Vec<String>>,
}

impl Dendrogram {
    /// Assemble a candidate dendrogram without validation; see
    /// [`validate_dendrogram`] for the boundary and resolution checks.
    pub fn from_parts(labels: Vec<String>, events: Vec<MergeEvent>) -> Self {
        Dendrogram { labels, events }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    /// Resolution of the last merge; 0 for a single-node tree.
    pub fn max_resolution(&self) -> f64 {
        self.events.last().map_or(0.0, |e| e.resolution)
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != node {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }
}

/// Smallest label (string order) in each component keyed by root.
fn component_min_labels(
    ds: &mut DisjointSet,
    labels: &[String],
) -> BTreeMap<usize, String> {
    let mut mins: BTreeMap<usize, String> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        let root = ds.find(i);
        match mins.get(&root) {
            Some(current) if current <= label => {}
            _ => {
                mins.insert(root, label.clone());
            }
        }
    }
    mins
}

/// Convert an ultrametric to its dendrogram.
///
/// Sorts the distinct off-diagonal values ascending and, at each value,
/// unions every pair at that distance; each group of clusters that becomes
/// one yields a merge event. Validity of the input is guaranteed by the
/// [`UltrametricMatrix`] type, so the conversion cannot fail.
pub fn ultrametric_to_dendrogram(u: &UltrametricMatrix) -> Dendrogram {
    let labels = u.labels().to_vec();
    let n = labels.len();

    // All unordered pairs sorted by distance.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((u.get(i, j), i, j));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));

    let mut ds = DisjointSet::new(n);
    let mut events = Vec::new();
    let mut p = 0;
    while p < pairs.len() {
        let resolution = pairs[p].0;
        let mut q = p;
        while q < pairs.len() && pairs[q].0 == resolution {
            q += 1;
        }
        let step = &pairs[p..q];

        // Snapshot the clusters touched at this resolution before merging.
        let pre_ids = component_min_labels(&mut ds, &labels);
        let mut pre_roots: Vec<usize> = Vec::new();
        for &(_, i, j) in step {
            for node in [i, j] {
                let root = ds.find(node);
                if !pre_roots.contains(&root) {
                    pre_roots.push(root);
                }
            }
        }
        for &(_, i, j) in step {
            ds.union(i, j);
        }

        // Group the pre-merge clusters by their post-merge component.
        let mut groups: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for &root in &pre_roots {
            groups
                .entry(ds.find(root))
                .or_default()
                .push(pre_ids[&root].as_str());
        }
        let mut step_events: Vec<MergeEvent> = groups
            .into_values()
            .filter(|members| members.len() >= 2)
            .map(|mut members| {
                members.sort_unstable();
                MergeEvent {
                    resolution,
                    new_cluster: members[0].to_string(),
                    merged: members.into_iter().map(str::to_string).collect(),
                }
            })
            .collect();
        step_events.sort_by(|a, b| a.new_cluster.cmp(&b.new_cluster));
        events.extend(step_events);
        p = q;
    }

    Dendrogram { labels, events }
}

/// Replay state: live clusters by identifier, each holding member indices.
fn singleton_state(labels: &[String]) -> BTreeMap<String, Vec<usize>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| (label.clone(), vec![i]))
        .collect()
}

/// Recover the ultrametric from a dendrogram: each pair's distance is the
/// resolution of the earliest event uniting it.
pub fn dendrogram_to_ultrametric(d: &Dendrogram) -> Result<UltrametricMatrix> {
    let report = validate_dendrogram(d);
    if let Some(cex) = report.counterexample {
        return Err(Error::InvalidDendrogram(cex.inequality));
    }

    let n = d.labels.len();
    let mut values = SquareMatrix::zeros(n);
    let mut live = singleton_state(&d.labels);
    for event in &d.events {
        let groups: Vec<Vec<usize>> = event
            .merged
            .iter()
            .map(|id| live.remove(id).expect("validated event references live clusters"))
            .collect();
        for (gi, a_members) in groups.iter().enumerate() {
            for b_members in &groups[gi + 1..] {
                for &a in a_members {
                    for &b in b_members {
                        values.set(a, b, event.resolution);
                        values.set(b, a, event.resolution);
                    }
                }
            }
        }
        let mut union: Vec<usize> = groups.into_iter().flatten().collect();
        union.sort_unstable();
        live.insert(event.new_cluster.clone(), union);
    }
    Ok(UltrametricMatrix::from_validated(d.labels.clone(), values))
}

/// Clusters present once all events with `resolution <= delta` are applied.
pub fn cut(d: &Dendrogram, delta: f64) -> Partition {
    assert!(delta >= 0.0 && !delta.is_nan(), "cut resolution must be non-negative");
    let mut live = singleton_state(&d.labels);
    for event in d.events.iter().take_while(|e| e.resolution <= delta) {
        let mut union = Vec::new();
        for id in &event.merged {
            union.extend(live.remove(id).expect("valid dendrogram"));
        }
        union.sort_unstable();
        live.insert(event.new_cluster.clone(), union);
    }
    let mut blocks: Vec<Vec<usize>> = live.into_values().collect();
    blocks.sort_by_key(|members| members[0]);
    Partition {
        resolution: delta,
        blocks: blocks
            .into_iter()
            .map(|members| members.into_iter().map(|i| d.labels[i].clone()).collect())
            .collect(),
    }
}

fn d2_failure(event_index: usize, resolution: f64, detail: String) -> VerificationReport {
    VerificationReport::fail(
        "validate_dendrogram",
        (event_index + 1) as u64,
        Counterexample {
            indices: vec![event_index],
            values: vec![resolution],
            inequality: format!("(D2) {detail}"),
        },
    )
}

/// Check the boundary (D1) and resolution (D2) properties of a candidate
/// tree. Failures are report payload, never errors.
///
/// (D1) requires singletons at resolution 0 (implicit in the event model)
/// and a single cluster after the last event. (D2) requires positive,
/// non-decreasing resolutions and that every event merges two or more
/// currently-live clusters, so clusters can only combine, never separate.
pub fn validate_dendrogram(d: &Dendrogram) -> VerificationReport {
    let name = "validate_dendrogram";
    if d.labels.is_empty() {
        return VerificationReport::fail(
            name,
            0,
            Counterexample {
                indices: vec![],
                values: vec![],
                inequality: "(D1) the node set is empty".to_string(),
            },
        );
    }

    let mut live = singleton_state(&d.labels);
    let mut previous = 0.0_f64;
    for (idx, event) in d.events.iter().enumerate() {
        let delta = event.resolution;
        if !delta.is_finite() || delta <= 0.0 {
            return d2_failure(idx, delta, format!("event {idx} has non-positive resolution"));
        }
        if delta < previous {
            return d2_failure(
                idx,
                delta,
                format!("event {idx} decreases the resolution from {previous}"),
            );
        }
        previous = delta;
        if event.merged.len() < 2 {
            return d2_failure(idx, delta, format!("event {idx} merges fewer than two clusters"));
        }
        let mut union = Vec::new();
        for id in &event.merged {
            match live.remove(id) {
                Some(members) => union.extend(members),
                None => {
                    return d2_failure(
                        idx,
                        delta,
                        format!("event {idx} references {id:?}, which is not a live cluster"),
                    );
                }
            }
        }
        union.sort_unstable();
        if live.contains_key(&event.new_cluster) {
            return d2_failure(
                idx,
                delta,
                format!(
                    "event {idx} introduces {:?}, which collides with a live cluster",
                    event.new_cluster
                ),
            );
        }
        live.insert(event.new_cluster.clone(), union);
    }

    if live.len() != 1 {
        return VerificationReport::fail(
            name,
            d.events.len() as u64,
            Counterexample {
                indices: vec![],
                values: vec![live.len() as f64],
                inequality: format!(
                    "(D1) {} clusters remain after the last event; expected 1",
                    live.len()
                ),
            },
        );
    }
    VerificationReport::pass(name, d.events.len().max(1) as u64)
}

/// Newick node label quoting: labels containing structural characters are
/// wrapped in single quotes with internal quotes doubled.
fn newick_label(label: &str) -> String {
    const SPECIAL: &[char] = &['(', ')', '[', ']', ':', ';', ',', '\'', ' ', '\t', '\n'];
    if label.contains(SPECIAL) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// Serialize a valid dendrogram as a Newick string.
///
/// Each leaf's root-path height equals the resolutions of its merges: a
/// child's branch length is the parent event resolution minus the child
/// event resolution (leaves sit at height 0). Children are ordered by their
/// smallest member label.
pub fn to_newick(d: &Dendrogram) -> String {
    // (height, min member label, newick fragment), keyed by live cluster id.
    let mut live: BTreeMap<String, (f64, String, String)> = d
        .labels
        .iter()
        .map(|label| (label.clone(), (0.0, label.clone(), newick_label(label))))
        .collect();
    for event in &d.events {
        let mut children: Vec<(f64, String, String)> = event
            .merged
            .iter()
            .map(|id| live.remove(id).expect("valid dendrogram"))
            .collect();
        children.sort_by(|a, b| a.1.cmp(&b.1));
        let min_label = children[0].1.clone();
        let parts: Vec<String> = children
            .iter()
            .map(|(height, _, fragment)| format!("{fragment}:{}", event.resolution - height))
            .collect();
        live.insert(
            event.new_cluster.clone(),
            (event.resolution, min_label, format!("({})", parts.join(","))),
        );
    }
    let (_, _, fragment) = live.into_values().next().expect("nonempty tree");
    format!("{fragment};")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{reciprocal, UltrametricMatrix};
    use crate::network::Network;

    fn two_node_ultrametric() -> UltrametricMatrix {
        let net =
            Network::new(vec!["p", "q"], vec![vec![0.0, 1.0], vec![3.0, 0.0]]).unwrap();
        reciprocal(&net)
    }

    fn triangle_reciprocal() -> UltrametricMatrix {
        let net = Network::new(
            vec!["x1", "x2", "x3"],
            vec![
                vec![0.0, 1.0, 3.0],
                vec![2.0, 0.0, 2.0],
                vec![2.0, 3.0, 0.0],
            ],
        )
        .unwrap();
        reciprocal(&net)
    }

    #[test]
    fn two_node_tree_single_event() {
        let d = ultrametric_to_dendrogram(&two_node_ultrametric());
        assert_eq!(d.events().len(), 1);
        let event = &d.events()[0];
        assert_eq!(event.resolution, 3.0);
        assert_eq!(event.merged, vec!["p", "q"]);
        assert_eq!(event.new_cluster, "p");
    }

    #[test]
    fn triangle_tree_merges_in_order() {
        let d = ultrametric_to_dendrogram(&triangle_reciprocal());
        assert_eq!(d.events().len(), 2);
        assert_eq!(d.events()[0].resolution, 2.0);
        assert_eq!(d.events()[0].merged, vec!["x1", "x2"]);
        assert_eq!(d.events()[1].resolution, 3.0);
        assert_eq!(d.events()[1].merged, vec!["x1", "x3"]);
        assert_eq!(d.events()[1].new_cluster, "x1");
    }

    #[test]
    fn equilateral_tree_is_one_multiway_event() {
        let m = SquareMatrix::from_rows(vec![
            vec![0.0, 4.0, 4.0],
            vec![4.0, 0.0, 4.0],
            vec![4.0, 4.0, 0.0],
        ])
        .unwrap();
        let u = UltrametricMatrix::new(vec!["a".into(), "b".into(), "c".into()], m).unwrap();
        let d = ultrametric_to_dendrogram(&u);
        assert_eq!(d.events().len(), 1);
        assert_eq!(d.events()[0].merged, vec!["a", "b", "c"]);
        assert_eq!(d.events()[0].resolution, 4.0);
    }

    #[test]
    fn round_trip_is_identity() {
        for u in [two_node_ultrametric(), triangle_reciprocal()] {
            let d = ultrametric_to_dendrogram(&u);
            let back = dendrogram_to_ultrametric(&d).unwrap();
            assert_eq!(back, u);
            let d2 = ultrametric_to_dendrogram(&back);
            assert_eq!(d2, d);
        }
    }

    #[test]
    fn event_resolutions_equal_distinct_values() {
        let u = triangle_reciprocal();
        let d = ultrametric_to_dendrogram(&u);
        let resolutions: Vec<f64> = d.events().iter().map(|e| e.resolution).collect();
        assert_eq!(resolutions, u.values().distinct_off_diagonal());
    }

    #[test]
    fn cut_at_boundaries() {
        let d = ultrametric_to_dendrogram(&triangle_reciprocal());
        let singletons = cut(&d, 0.0);
        assert_eq!(singletons.blocks, vec![vec!["x1"], vec!["x2"], vec!["x3"]]);
        let middle = cut(&d, 2.5);
        assert_eq!(middle.blocks, vec![vec!["x1", "x2"], vec!["x3"]]);
        let all = cut(&d, 3.0);
        assert_eq!(all.blocks, vec![vec!["x1", "x2", "x3"]]);
    }

    #[test]
    fn cut_respects_closed_threshold() {
        let d = ultrametric_to_dendrogram(&two_node_ultrametric());
        assert_eq!(cut(&d, 3.0).blocks.len(), 1);
        assert_eq!(cut(&d, 2.9999).blocks.len(), 2);
    }

    #[test]
    fn constructed_trees_validate() {
        let d = ultrametric_to_dendrogram(&triangle_reciprocal());
        let report = validate_dendrogram(&d);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn missing_final_merge_fails_d1() {
        let d = Dendrogram::from_parts(
            vec!["a".into(), "b".into(), "c".into()],
            vec![MergeEvent {
                resolution: 1.0,
                merged: vec!["a".into(), "b".into()],
                new_cluster: "a".into(),
            }],
        );
        let report = validate_dendrogram(&d);
        assert!(!report.passed);
        assert!(report.counterexample.unwrap().inequality.contains("(D1)"));
    }

    #[test]
    fn split_reference_fails_d2() {
        // The second event pulls "b" out of the merged cluster: a split.
        let d = Dendrogram::from_parts(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                MergeEvent {
                    resolution: 1.0,
                    merged: vec!["a".into(), "b".into()],
                    new_cluster: "a".into(),
                },
                MergeEvent {
                    resolution: 2.0,
                    merged: vec!["b".into(), "c".into()],
                    new_cluster: "b".into(),
                },
            ],
        );
        let report = validate_dendrogram(&d);
        assert!(!report.passed);
        assert!(report.counterexample.unwrap().inequality.contains("(D2)"));
    }

    #[test]
    fn decreasing_resolution_fails_d2() {
        let d = Dendrogram::from_parts(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                MergeEvent {
                    resolution: 2.0,
                    merged: vec!["a".into(), "b".into()],
                    new_cluster: "a".into(),
                },
                MergeEvent {
                    resolution: 1.0,
                    merged: vec!["a".into(), "c".into()],
                    new_cluster: "a".into(),
                },
            ],
        );
        assert!(!validate_dendrogram(&d).passed);
    }

    #[test]
    fn invalid_tree_conversion_is_an_error() {
        let d = Dendrogram::from_parts(vec!["a".into(), "b".into()], vec![]);
        assert!(matches!(
            dendrogram_to_ultrametric(&d),
            Err(Error::InvalidDendrogram(_))
        ));
    }

    #[test]
    fn newick_two_node() {
        let d = ultrametric_to_dendrogram(&two_node_ultrametric());
        assert_eq!(to_newick(&d), "(p:3,q:3);");
    }

    #[test]
    fn newick_nested() {
        let d = ultrametric_to_dendrogram(&triangle_reciprocal());
        assert_eq!(to_newick(&d), "((x1:2,x2:2):1,x3:3);");
    }

    #[test]
    fn newick_singleton() {
        let net = Network::new(vec!["x"], vec![vec![0.0]]).unwrap();
        let d = ultrametric_to_dendrogram(&reciprocal(&net));
        assert_eq!(to_newick(&d), "x;");
    }

    #[test]
    fn newick_quotes_special_labels() {
        let net = Network::new(
            vec!["a b", "c's"],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let d = ultrametric_to_dendrogram(&reciprocal(&net));
        assert_eq!(to_newick(&d), "('a b':1,'c''s':1);");
    }

    #[test]
    fn cuts_refine_as_resolution_drops() {
        let u = triangle_reciprocal();
        let d = ultrametric_to_dendrogram(&u);
        let fine = cut(&d, 2.0);
        let coarse = cut(&d, 3.0);
        // Every fine block sits inside some coarse block.
        for block in &fine.blocks {
            assert!(coarse
                .blocks
                .iter()
                .any(|cb| block.iter().all(|m| cb.contains(m))));
        }
    }
}
