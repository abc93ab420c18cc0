//! Trust-bound classification of node pairs.
//!
//! Whatever admissible method assigns trust distances, they are bracketed
//! between the nonreciprocal and reciprocal ultrametrics. At a resolution
//! delta this splits pairs into three classes: certainly inside a common
//! circle of trust, certainly outside, or dependent on the method choice.

use serde::Serialize;
use serde_json::{json, Value};

use crate::dendrogram::{cut, ultrametric_to_dendrogram, Partition};
use crate::methods::{nonreciprocal, reciprocal};
use crate::network::Network;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrustClass {
    /// `u_R <= delta`: co-clustered under every admissible method.
    #[serde(rename = "certain-in")]
    CertainIn,
    /// `u_NR > delta`: separated under every admissible method.
    #[serde(rename = "certain-out")]
    CertainOut,
    /// The bounds straddle delta; method choice decides.
    #[serde(rename = "ambiguous")]
    Ambiguous,
}

/// One unordered pair with its bounds and classification.
#[derive(Clone, Debug, Serialize)]
pub struct TrustPair {
    pub a: String,
    pub b: String,
    pub nonreciprocal: f64,
    pub reciprocal: f64,
    pub class: TrustClass,
}

/// Classification of all pairs at one resolution, with both extremal cuts.
#[derive(Clone, Debug)]
pub struct TrustReport {
    pub delta: f64,
    pub pairs: Vec<TrustPair>,
    pub nonreciprocal_cut: Partition,
    pub reciprocal_cut: Partition,
}

impl TrustReport {
    pub fn to_json_value(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "a": p.a,
                    "b": p.b,
                    "class": p.class,
                    "nonreciprocal": p.nonreciprocal,
                    "reciprocal": p.reciprocal,
                })
            })
            .collect();
        json!({
            "delta": self.delta,
            "nonreciprocal_cut": {
                "blocks": self.nonreciprocal_cut.blocks,
                "resolution": self.nonreciprocal_cut.resolution,
            },
            "pairs": pairs,
            "reciprocal_cut": {
                "blocks": self.reciprocal_cut.blocks,
                "resolution": self.reciprocal_cut.resolution,
            },
        })
    }
}

/// Classify every unordered pair of `net` at resolution `delta`.
pub fn trust_bounds(net: &Network, delta: f64) -> TrustReport {
    assert!(delta >= 0.0 && !delta.is_nan(), "resolution must be non-negative");
    let lower = nonreciprocal(net);
    let upper = reciprocal(net);
    let mut pairs = Vec::new();
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let lo = lower.get(i, j);
            let hi = upper.get(i, j);
            let class = if hi <= delta {
                TrustClass::CertainIn
            } else if lo > delta {
                TrustClass::CertainOut
            } else {
                TrustClass::Ambiguous
            };
            pairs.push(TrustPair {
                a: net.labels()[i].clone(),
                b: net.labels()[j].clone(),
                nonreciprocal: lo,
                reciprocal: hi,
                class,
            });
        }
    }
    TrustReport {
        delta,
        pairs,
        nonreciprocal_cut: cut(&ultrametric_to_dendrogram(&lower), delta),
        reciprocal_cut: cut(&ultrametric_to_dendrogram(&upper), delta),
    }
}
