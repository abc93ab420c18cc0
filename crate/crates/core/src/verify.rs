//! Brute-force oracles and executable checks for the clustering axioms and
//! extremal bounds.
//!
//! Everything here is independent of the closure-based implementation path:
//! chain costs are recomputed by enumerating simple chains, and every check
//! reports a structured pass/fail outcome with a counterexample payload
//! instead of erroring on failure. Randomized checks take explicit seeds and
//! report trial counts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::methods::{nonreciprocal, reciprocal, run_method, single_linkage, UltrametricMatrix};
use crate::network::Network;
use crate::rng::SplitMix64;

/// Maximum network size accepted by the chain-enumeration oracles unless a
/// caller raises it explicitly.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// Payload describing the first failure of a check: the offending indices,
/// the values involved, and the violated condition spelled out.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub inequality: String,
}

/// Structured outcome of a check. `passed` is true exactly when
/// `counterexample` is absent; construct through [`VerificationReport::pass`]
/// and [`VerificationReport::fail`] to preserve that invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub passed: bool,
    pub trials: u64,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn pass(check_name: &str, trials: u64) -> Self {
        VerificationReport {
            check_name: check_name.to_string(),
            passed: true,
            trials,
            counterexample: None,
        }
    }

    pub fn fail(check_name: &str, trials: u64, counterexample: Counterexample) -> Self {
        VerificationReport {
            check_name: check_name.to_string(),
            passed: false,
            trials,
            counterexample: Some(counterexample),
        }
    }
}

/// A total map between the node sets of two networks that never increases a
/// pairwise dissimilarity; the transformation axiom quantifies over exactly
/// these maps.
#[derive(Clone, Debug)]
pub struct NodeMap {
    source: Network,
    target: Network,
    mapping: Vec<usize>,
}

impl NodeMap {
    /// Validate that `mapping` (source index -> target index) is total and
    /// dissimilarity-reducing.
    pub fn new(source: Network, target: Network, mapping: Vec<usize>) -> Result<Self> {
        if mapping.len() != source.len() || mapping.iter().any(|&t| t >= target.len()) {
            return Err(Error::LabelMismatch);
        }
        for i in 0..source.len() {
            for j in 0..source.len() {
                if source.get(i, j) < target.get(mapping[i], mapping[j]) {
                    return Err(Error::DissimilarityIncreasing { row: i, col: j });
                }
            }
        }
        Ok(NodeMap { source, target, mapping })
    }

    pub fn source(&self) -> &Network {
        &self.source
    }

    pub fn target(&self) -> &Network {
        &self.target
    }

    pub fn apply(&self, source_index: usize) -> usize {
        self.mapping[source_index]
    }
}

/// Check that a matrix is a valid ultrametric: symmetric, zero diagonal,
/// positive off-diagonal, and strong triangle inequality over all triples.
/// `trials` counts the conditions examined.
pub fn check_ultrametric(m: &SquareMatrix) -> VerificationReport {
    let name = "check_ultrametric";
    let n = m.len();
    let mut examined: u64 = 0;
    for i in 0..n {
        examined += 1;
        let d = m.get(i, i);
        if d != 0.0 {
            return VerificationReport::fail(
                name,
                examined,
                Counterexample {
                    indices: vec![i, i],
                    values: vec![d],
                    inequality: format!("u({i},{i}) = {d}, expected 0"),
                },
            );
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            examined += 1;
            let a = m.get(i, j);
            let b = m.get(j, i);
            if a != b {
                return VerificationReport::fail(
                    name,
                    examined,
                    Counterexample {
                        indices: vec![i, j],
                        values: vec![a, b],
                        inequality: format!("u({i},{j}) = {a} != u({j},{i}) = {b}"),
                    },
                );
            }
            if !a.is_finite() || a <= 0.0 {
                return VerificationReport::fail(
                    name,
                    examined,
                    Counterexample {
                        indices: vec![i, j],
                        values: vec![a],
                        inequality: format!("u({i},{j}) = {a}, expected positive and finite"),
                    },
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                examined += 1;
                let uij = m.get(i, j);
                let bound = m.get(i, k).max(m.get(k, j));
                if uij > bound {
                    return VerificationReport::fail(
                        name,
                        examined,
                        Counterexample {
                            indices: vec![i, j, k],
                            values: vec![uij, m.get(i, k), m.get(k, j)],
                            inequality: format!(
                                "u({i},{j}) = {uij} > max(u({i},{k}), u({k},{j})) = {bound}"
                            ),
                        },
                    );
                }
            }
        }
    }
    VerificationReport::pass(name, examined)
}

/// Exact directed minimax chain cost from node `i` to node `j` by
/// enumerating every simple chain. Uses the default enumeration bound.
pub fn brute_force_directed_cost(net: &Network, i: usize, j: usize) -> Result<f64> {
    brute_force_directed_cost_with_bound(net, i, j, DEFAULT_ENUMERATION_BOUND)
}

/// As [`brute_force_directed_cost`] with an explicit size bound.
pub fn brute_force_directed_cost_with_bound(
    net: &Network,
    i: usize,
    j: usize,
    bound: usize,
) -> Result<f64> {
    let n = net.len();
    if n > bound {
        return Err(Error::TooLarge { nodes: n, bound });
    }
    assert!(i < n && j < n, "node index out of range");
    if i == j {
        return Ok(0.0);
    }
    let mut visited = vec![false; n];
    visited[i] = true;
    let mut best = f64::INFINITY;
    enumerate_chains(net, i, j, &mut visited, 0.0, &mut best);
    Ok(best)
}

fn enumerate_chains(
    net: &Network,
    current: usize,
    target: usize,
    visited: &mut [bool],
    cost_so_far: f64,
    best: &mut f64,
) {
    if current == target {
        if cost_so_far < *best {
            *best = cost_so_far;
        }
        return;
    }
    for next in 0..net.len() {
        if !visited[next] {
            visited[next] = true;
            let cost = cost_so_far.max(net.get(current, next));
            enumerate_chains(net, next, target, visited, cost, best);
            visited[next] = false;
        }
    }
}

/// Run a clustering method assembled purely from brute-force chain costs.
pub fn brute_force_method(net: &Network, name: &str) -> Result<UltrametricMatrix> {
    brute_force_method_with_bound(net, name, DEFAULT_ENUMERATION_BOUND)
}

/// As [`brute_force_method`] with an explicit size bound.
pub fn brute_force_method_with_bound(
    net: &Network,
    name: &str,
    bound: usize,
) -> Result<UltrametricMatrix> {
    let n = net.len();
    let mut values = SquareMatrix::zeros(n);
    match name {
        "reciprocal" => {
            let sym = net.symmetrize_max();
            for i in 0..n {
                for j in (i + 1)..n {
                    let cost = brute_force_directed_cost_with_bound(&sym, i, j, bound)?;
                    values.set(i, j, cost);
                    values.set(j, i, cost);
                }
            }
        }
        "nonreciprocal" => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let forward = brute_force_directed_cost_with_bound(net, i, j, bound)?;
                    let backward = brute_force_directed_cost_with_bound(net, j, i, bound)?;
                    let cost = forward.max(backward);
                    values.set(i, j, cost);
                    values.set(j, i, cost);
                }
            }
        }
        "single_linkage" | "single-linkage" => {
            if let Some((i, j)) = net.dissim().first_asymmetry() {
                return Err(Error::AsymmetricInput { row: i, col: j });
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let cost = brute_force_directed_cost_with_bound(net, i, j, bound)?;
                    values.set(i, j, cost);
                    values.set(j, i, cost);
                }
            }
        }
        other => return Err(Error::UnknownMethod(other.to_string())),
    }
    Ok(UltrametricMatrix::from_validated(net.labels().to_vec(), values))
}

/// Axiom of value: on the two-node network with dissimilarities `alpha` and
/// `beta`, the method must return exactly `max(alpha, beta)`.
pub fn check_axiom_value(name: &str, alpha: f64, beta: f64) -> Result<VerificationReport> {
    let net = Network::new(vec!["p", "q"], vec![vec![0.0, alpha], vec![beta, 0.0]])?;
    let u = run_method(name, &net)?;
    let expected = alpha.max(beta);
    let got = u.get(0, 1);
    if got == expected {
        Ok(VerificationReport::pass(&format!("axiom_value:{name}"), 1))
    } else {
        Ok(VerificationReport::fail(
            &format!("axiom_value:{name}"),
            1,
            Counterexample {
                indices: vec![0, 1],
                values: vec![got, expected],
                inequality: format!("u(p,q) = {got}, expected max({alpha}, {beta}) = {expected}"),
            },
        ))
    }
}

/// Deterministically draw a dissimilarity-reducing map out of `net`.
///
/// The target node set is a quotient of the source: a seeded surjection onto
/// between 1 and n labels, with each target dissimilarity set to the minimum
/// over the preimage pairs. The construction satisfies the reducing
/// invariant by design; it is re-asserted on every generation.
pub fn generate_reducing_map(net: &Network, seed: u64) -> NodeMap {
    let n = net.len();
    let mut rng = SplitMix64::new(seed);
    let target_size = rng.range_usize(1, n);

    // Surjection: a random permutation sends its first `target_size` nodes
    // to distinct targets, the rest land uniformly.
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.range_usize(0, i));
    }
    let mut mapping = vec![0usize; n];
    for (position, &node) in order.iter().enumerate() {
        mapping[node] = if position < target_size {
            position
        } else {
            rng.range_usize(0, target_size - 1)
        };
    }

    let mut quotient = SquareMatrix::zeros(target_size);
    for y in 0..target_size {
        for z in 0..target_size {
            if y == z {
                continue;
            }
            let mut min = f64::INFINITY;
            for i in 0..n {
                for j in 0..n {
                    if mapping[i] == y && mapping[j] == z && net.get(i, j) < min {
                        min = net.get(i, j);
                    }
                }
            }
            quotient.set(y, z, min);
        }
    }
    let labels: Vec<String> = (0..target_size).map(|k| format!("y{k}")).collect();
    let target = Network::from_matrix(labels, quotient)
        .expect("quotient of a valid network is a valid network");
    NodeMap::new(net.clone(), target, mapping)
        .expect("min-over-preimages construction is dissimilarity-reducing")
}

/// Axiom of transformation: along a dissimilarity-reducing map, the method's
/// output distances must not increase for any source pair.
pub fn check_axiom_transformation(name: &str, map: &NodeMap) -> Result<VerificationReport> {
    let check_name = format!("axiom_transformation:{name}");
    let u_source = run_method(name, map.source())?;
    let u_target = run_method(name, map.target())?;
    let n = map.source().len();
    let mut examined: u64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            examined += 1;
            let source_distance = u_source.get(i, j);
            let target_distance = u_target.get(map.apply(i), map.apply(j));
            if source_distance < target_distance {
                return Ok(VerificationReport::fail(
                    &check_name,
                    examined,
                    Counterexample {
                        indices: vec![i, j, map.apply(i), map.apply(j)],
                        values: vec![source_distance, target_distance],
                        inequality: format!(
                            "u_X({i},{j}) = {source_distance} < u_Y({},{}) = {target_distance}",
                            map.apply(i),
                            map.apply(j)
                        ),
                    },
                ));
            }
        }
    }
    Ok(VerificationReport::pass(&check_name, examined.max(1)))
}

/// Extremal bounds: a candidate ultrametric on the same nodes must lie
/// between the nonreciprocal and reciprocal outputs entrywise.
pub fn check_sandwich(net: &Network, candidate: &UltrametricMatrix) -> Result<VerificationReport> {
    if candidate.labels() != net.labels() {
        return Err(Error::LabelMismatch);
    }
    let name = "check_sandwich";
    let lower = nonreciprocal(net);
    let upper = reciprocal(net);
    let n = net.len();
    let mut examined: u64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            examined += 1;
            let lo = lower.get(i, j);
            let mid = candidate.get(i, j);
            let hi = upper.get(i, j);
            if !(lo <= mid && mid <= hi) {
                return Ok(VerificationReport::fail(
                    name,
                    examined,
                    Counterexample {
                        indices: vec![i, j],
                        values: vec![lo, mid, hi],
                        inequality: format!(
                            "expected u_NR({i},{j}) = {lo} <= {mid} <= u_R({i},{j}) = {hi}"
                        ),
                    },
                ));
            }
        }
    }
    Ok(VerificationReport::pass(name, examined.max(1)))
}

/// Seeded random network with entries uniform in (0, 1].
pub fn random_network(n: usize, seed: u64) -> Network {
    let mut rng = SplitMix64::new(seed);
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.set(i, j, rng.next_f64_open01());
            }
        }
    }
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    Network::from_matrix(labels, m).expect("entries are positive and finite")
}

/// Seeded random symmetric network with entries uniform in (0, 1].
pub fn random_symmetric_network(n: usize, seed: u64) -> Network {
    let mut rng = SplitMix64::new(seed);
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.next_f64_open01();
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    Network::from_matrix(labels, m).expect("entries are positive and finite")
}

/// Named groups of randomized checks runnable from the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Oracle,
    Sandwich,
    All,
}

/// Reports from one suite run; passes only if every report passed.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub reports: Vec<VerificationReport>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

const METHODS: [&str; 2] = ["reciprocal", "nonreciprocal"];

/// Run a verification suite with `trials` cases per check, all derived from
/// `seed`.
pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> SuiteOutcome {
    let mut master = SplitMix64::new(seed);
    let mut reports = Vec::new();
    let suite_name = match suite {
        Suite::Axioms => "axioms",
        Suite::Oracle => "oracle",
        Suite::Sandwich => "sandwich",
        Suite::All => "all",
    };
    if matches!(suite, Suite::Axioms | Suite::All) {
        reports.extend(axiom_suite(trials, &mut master));
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        reports.extend(oracle_suite(trials, &mut master));
    }
    if matches!(suite, Suite::Sandwich | Suite::All) {
        reports.extend(sandwich_suite(trials, &mut master));
    }
    SuiteOutcome { suite: suite_name.to_string(), trials, seed, reports }
}

/// Aggregate repeated single-case checks into one report: trial count plus
/// the first failing trial's counterexample, prefixed with its trial index.
fn aggregate<F>(name: &str, trials: u64, mut case: F) -> VerificationReport
where
    F: FnMut(u64) -> VerificationReport,
{
    for trial in 0..trials {
        let report = case(trial);
        if !report.passed {
            let mut cex = report.counterexample.expect("failed report carries payload");
            cex.indices.insert(0, trial as usize);
            cex.inequality = format!("trial {trial}: {}", cex.inequality);
            return VerificationReport::fail(name, trial + 1, cex);
        }
    }
    VerificationReport::pass(name, trials)
}

fn axiom_suite(trials: u64, master: &mut SplitMix64) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for method in METHODS {
        let seed = master.next_u64();
        reports.push(aggregate(&format!("axiom_value:{method}"), trials, |trial| {
            let mut rng = SplitMix64::new(seed.wrapping_add(trial));
            let alpha = 10.0 * rng.next_f64_open01();
            let beta = 10.0 * rng.next_f64_open01();
            check_axiom_value(method, alpha, beta).expect("positive dissimilarities")
        }));
    }
    for method in METHODS {
        let seed = master.next_u64();
        reports.push(aggregate(&format!("axiom_transformation:{method}"), trials, |trial| {
            let mut rng = SplitMix64::new(seed.wrapping_add(trial));
            let n = rng.range_usize(2, 20);
            let net = random_network(n, rng.next_u64());
            let map = generate_reducing_map(&net, rng.next_u64());
            check_axiom_transformation(method, &map).expect("known method")
        }));
    }
    reports
}

fn oracle_suite(trials: u64, master: &mut SplitMix64) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for method in METHODS {
        let seed = master.next_u64();
        reports.push(aggregate(&format!("oracle_equivalence:{method}"), trials, |trial| {
            let mut rng = SplitMix64::new(seed.wrapping_add(trial));
            let n = rng.range_usize(2, 6);
            let net = random_network(n, rng.next_u64());
            let fast = run_method(method, &net).expect("known method");
            let oracle = brute_force_method(&net, method).expect("within bound");
            first_matrix_difference(
                &format!("oracle_equivalence:{method}"),
                fast.values(),
                oracle.values(),
            )
        }));
    }
    reports
}

fn sandwich_suite(trials: u64, master: &mut SplitMix64) -> Vec<VerificationReport> {
    let mut reports = Vec::new();

    let seed = master.next_u64();
    reports.push(aggregate("sandwich_order", trials, |trial| {
        let mut rng = SplitMix64::new(seed.wrapping_add(trial));
        let n = rng.range_usize(3, 50);
        let net = random_network(n, rng.next_u64());
        let lower = nonreciprocal(&net);
        let upper = reciprocal(&net);
        if lower.values().entrywise_le(upper.values()) {
            VerificationReport::pass("sandwich_order", 1)
        } else {
            let (i, j) = first_violating_pair(lower.values(), upper.values());
            VerificationReport::fail(
                "sandwich_order",
                1,
                Counterexample {
                    indices: vec![i, j],
                    values: vec![lower.get(i, j), upper.get(i, j)],
                    inequality: format!("u_NR({i},{j}) > u_R({i},{j})"),
                },
            )
        }
    }));

    let seed = master.next_u64();
    reports.push(aggregate("sandwich_bounds_attained", trials, |trial| {
        let mut rng = SplitMix64::new(seed.wrapping_add(trial));
        let n = rng.range_usize(3, 20);
        let net = random_network(n, rng.next_u64());
        for candidate in [
            nonreciprocal(&net),
            reciprocal(&net),
            single_linkage(&net.symmetrize_max()).expect("symmetrized input"),
        ] {
            let report = check_sandwich(&net, &candidate).expect("labels match");
            if !report.passed {
                return report;
            }
        }
        VerificationReport::pass("sandwich_bounds_attained", 1)
    }));

    let seed = master.next_u64();
    reports.push(aggregate("symmetric_collapse", trials, |trial| {
        let mut rng = SplitMix64::new(seed.wrapping_add(trial));
        let n = rng.range_usize(2, 20);
        let net = random_symmetric_network(n, rng.next_u64());
        let r = reciprocal(&net);
        let nr = nonreciprocal(&net);
        let sl = single_linkage(&net).expect("symmetric input");
        let d1 = first_matrix_difference("symmetric_collapse", r.values(), nr.values());
        if !d1.passed {
            return d1;
        }
        first_matrix_difference("symmetric_collapse", r.values(), sl.values())
    }));

    for method in METHODS {
        let seed = master.next_u64();
        reports.push(aggregate(&format!("output_validity:{method}"), trials, |trial| {
            let mut rng = SplitMix64::new(seed.wrapping_add(trial));
            let n = rng.range_usize(2, 20);
            let net = random_network(n, rng.next_u64());
            let u = run_method(method, &net).expect("known method");
            let report = check_ultrametric(u.values());
            if !report.passed {
                return report;
            }
            // Value provenance: outputs are copies of input entries
            // (symmetrized entries for the reciprocal method).
            let pool = match method {
                "reciprocal" => net.symmetrize_max().dissim().clone(),
                _ => net.dissim().clone(),
            };
            for i in 0..n {
                for j in 0..n {
                    if i != j && !pool.contains_value(u.get(i, j)) {
                        return VerificationReport::fail(
                            &format!("output_validity:{method}"),
                            1,
                            Counterexample {
                                indices: vec![i, j],
                                values: vec![u.get(i, j)],
                                inequality: format!(
                                    "output value u({i},{j}) does not occur in the input"
                                ),
                            },
                        );
                    }
                }
            }
            VerificationReport::pass(&format!("output_validity:{method}"), 1)
        }));
    }

    reports
}

fn first_violating_pair(lower: &SquareMatrix, upper: &SquareMatrix) -> (usize, usize) {
    for i in 0..lower.len() {
        for j in 0..lower.len() {
            if lower.get(i, j) > upper.get(i, j) {
                return (i, j);
            }
        }
    }
    unreachable!("called only when a violation exists");
}

fn first_matrix_difference(
    name: &str,
    got: &SquareMatrix,
    expected: &SquareMatrix,
) -> VerificationReport {
    for i in 0..got.len() {
        for j in 0..got.len() {
            if got.get(i, j) != expected.get(i, j) {
                return VerificationReport::fail(
                    name,
                    1,
                    Counterexample {
                        indices: vec![i, j],
                        values: vec![got.get(i, j), expected.get(i, j)],
                        inequality: format!(
                            "entry ({i},{j}): {} != {}",
                            got.get(i, j),
                            expected.get(i, j)
                        ),
                    },
                );
            }
        }
    }
    VerificationReport::pass(name, 1)
}
