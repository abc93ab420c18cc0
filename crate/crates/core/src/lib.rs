//! Hierarchical clustering for asymmetric dissimilarity networks.
//!
//! Networks here carry directed dissimilarities: how far `a` is from `b`
//! need not equal how far `b` is from `a`. Two clustering methods bracket
//! everything sensible that can be done with such data:
//!
//! * [`reciprocal`](methods::reciprocal) clustering propagates closeness
//!   only through links that are cheap in both directions, and
//! * [`nonreciprocal`](methods::nonreciprocal) clustering lets the two
//!   directions use different chains.
//!
//! Both produce ultrametrics, interchangeable with dendrograms through the
//! [`dendrogram`] module. The nonreciprocal output is the entrywise lower
//! bound and the reciprocal output the upper bound for any clustering
//! method that satisfies the value and transformation axioms; the
//! [`verify`] module makes those statements executable with brute-force
//! oracles. On symmetric inputs both methods reduce to classical single
//! linkage.
//!
//! The `asymclust` binary exposes the pipeline: ingest message-count edge
//! lists, cluster, cut, export, compare, and verify.

pub mod cli;
pub mod closure;
pub mod dendrogram;
pub mod error;
pub mod io;
pub mod matrix;
pub mod methods;
pub mod network;
mod rng;
pub mod verify;

pub use closure::{minimax_closure, pointwise_max_transpose, MinimaxMatrix};
pub use dendrogram::{
    cut, dendrogram_to_ultrametric, to_newick, ultrametric_to_dendrogram, validate_dendrogram,
    Dendrogram, MergeEvent, Partition,
};
pub use error::{Error, Result};
pub use matrix::SquareMatrix;
pub use methods::{
    nonreciprocal, reciprocal, run_method, single_linkage, Method, UltrametricMatrix,
};
pub use network::Network;
pub use verify::{
    brute_force_directed_cost, brute_force_method, check_axiom_transformation, check_axiom_value,
    check_sandwich, check_ultrametric, generate_reducing_map, Counterexample, NodeMap, Suite,
    SuiteOutcome, VerificationReport,
};
