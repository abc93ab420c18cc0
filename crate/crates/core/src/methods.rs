//! The clustering methods: reciprocal, nonreciprocal, and single linkage.
//!
//! Each method maps a network to an ultrametric over the same nodes. All
//! three are thin compositions over the minimax closure so their shared
//! properties are inherited from one audited core:
//!
//! * reciprocal       = closure of the max-symmetrized matrix
//! * nonreciprocal    = pointwise max of the directed closure and its
//!   transpose
//! * single linkage   = closure of an already-symmetric matrix

use std::fmt;
use std::str::FromStr;

use crate::closure::{minimax_closure, pointwise_max_transpose};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::network::Network;

/// Symmetric matrix satisfying the strong triangle inequality
/// `u(i,j) <= max(u(i,k), u(k,j))`, with zero diagonal and positive
/// off-diagonal entries.
///
/// Validity is established at construction; every instance of this type is a
/// genuine ultrametric.
#[derive(Clone, Debug, PartialEq)]
pub struct UltrametricMatrix {
    labels: Vec<String>,
    values: SquareMatrix,
}

impl UltrametricMatrix {
    /// Validate and assemble an ultrametric matrix.
    pub fn new(labels: Vec<String>, values: SquareMatrix) -> Result<Self> {
        // Shape, label, and positivity checks are shared with networks.
        let net = Network::from_matrix(labels, values)?;
        if let Some((i, j)) = net.dissim().first_asymmetry() {
            return Err(Error::AsymmetricInput { row: i, col: j });
        }
        if let Some((i, j, k)) = first_strong_triangle_violation(net.dissim()) {
            return Err(Error::NotUltrametric { i, j, k });
        }
        let (labels, values) = net_into_parts(net);
        Ok(UltrametricMatrix { labels, values })
    }

    /// Internal constructor for matrices that are ultrametric by
    /// construction (method outputs, dendrogram conversions).
    pub(crate) fn from_validated(labels: Vec<String>, values: SquareMatrix) -> Self {
        debug_assert!(values.is_symmetric());
        debug_assert!(first_strong_triangle_violation(&values).is_none());
        UltrametricMatrix { labels, values }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &SquareMatrix {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    /// Reinterpret the ultrametric as a symmetric network, e.g. to feed it
    /// back through a clustering method.
    pub fn to_network(&self) -> Network {
        Network::from_matrix(self.labels.clone(), self.values.clone())
            .expect("an ultrametric is a valid symmetric network")
    }
}

fn net_into_parts(net: Network) -> (Vec<String>, SquareMatrix) {
    let labels = net.labels().to_vec();
    let values = net.dissim().clone();
    (labels, values)
}

/// First (i, j, k) in lexicographic order violating
/// `m(i,j) <= max(m(i,k), m(k,j))`, or None.
pub(crate) fn first_strong_triangle_violation(m: &SquareMatrix) -> Option<(usize, usize, usize)> {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if m.get(i, j) > m.get(i, k).max(m.get(k, j)) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Reciprocal clustering: minimax chain cost over the max-symmetrized
/// dissimilarities. Equivalent to single linkage on the symmetrized network.
pub fn reciprocal(net: &Network) -> UltrametricMatrix {
    let closure = minimax_closure(net.symmetrize_max().dissim())
        .expect("a validated network has a valid symmetrization");
    UltrametricMatrix::from_validated(net.labels().to_vec(), closure.into_values())
}

/// Nonreciprocal clustering: the directed minimax chain cost in each
/// direction, combined by a pointwise max.
pub fn nonreciprocal(net: &Network) -> UltrametricMatrix {
    let closure = minimax_closure(net.dissim()).expect("network invariants hold");
    UltrametricMatrix::from_validated(net.labels().to_vec(), pointwise_max_transpose(&closure))
}

/// Single linkage on symmetric data; rejects asymmetric input rather than
/// symmetrizing silently.
pub fn single_linkage(net: &Network) -> Result<UltrametricMatrix> {
    if let Some((i, j)) = net.dissim().first_asymmetry() {
        return Err(Error::AsymmetricInput { row: i, col: j });
    }
    let closure = minimax_closure(net.dissim()).expect("network invariants hold");
    Ok(UltrametricMatrix::from_validated(net.labels().to_vec(), closure.into_values()))
}

/// A clustering method selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Reciprocal,
    Nonreciprocal,
    SingleLinkage,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Reciprocal, Method::Nonreciprocal, Method::SingleLinkage];

    pub fn name(self) -> &'static str {
        match self {
            Method::Reciprocal => "reciprocal",
            Method::Nonreciprocal => "nonreciprocal",
            Method::SingleLinkage => "single_linkage",
        }
    }

    pub fn run(self, net: &Network) -> Result<UltrametricMatrix> {
        match self {
            Method::Reciprocal => Ok(reciprocal(net)),
            Method::Nonreciprocal => Ok(nonreciprocal(net)),
            Method::SingleLinkage => single_linkage(net),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(name: &str) -> Result<Method> {
        match name {
            "reciprocal" => Ok(Method::Reciprocal),
            "nonreciprocal" => Ok(Method::Nonreciprocal),
            "single_linkage" | "single-linkage" => Ok(Method::SingleLinkage),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dispatch a method by name.
pub fn run_method(name: &str, net: &Network) -> Result<UltrametricMatrix> {
    name.parse::<Method>()?.run(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node(alpha: f64, beta: f64) -> Network {
        Network::new(vec!["p", "q"], vec![vec![0.0, alpha], vec![beta, 0.0]]).unwrap()
    }

    fn triangle() -> Network {
        Network::new(
            vec!["x1", "x2", "x3"],
            vec![
                vec![0.0, 1.0, 3.0],
                vec![2.0, 0.0, 2.0],
                vec![2.0, 3.0, 0.0],
            ],
        )
        .unwrap()
    }

    fn cycle() -> Network {
        Network::new(
            vec!["y1", "y2", "y3"],
            vec![
                vec![0.0, 0.5, 1.0],
                vec![1.0, 0.0, 0.5],
                vec![0.5, 1.0, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn two_node_reciprocal_is_max() {
        let u = reciprocal(&two_node(1.0, 3.0));
        assert_eq!(u.get(0, 1), 3.0);
    }

    #[test]
    fn two_node_nonreciprocal_is_max() {
        let u = nonreciprocal(&two_node(1.0, 3.0));
        assert_eq!(u.get(0, 1), 3.0);
    }

    #[test]
    fn triangle_reciprocal_values() {
        let u = reciprocal(&triangle());
        assert_eq!(u.get(0, 1), 2.0);
        assert_eq!(u.get(0, 2), 3.0);
        assert_eq!(u.get(1, 2), 3.0);
    }

    #[test]
    fn triangle_nonreciprocal_values() {
        let u = nonreciprocal(&triangle());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(u.get(i, j), 2.0);
                }
            }
        }
    }

    #[test]
    fn cycle_shows_strict_gap() {
        let nr = nonreciprocal(&cycle());
        let r = reciprocal(&cycle());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(nr.get(i, j), 0.5);
                    assert_eq!(r.get(i, j), 1.0);
                }
            }
        }
        assert!(nr.values().entrywise_le(r.values()));
    }

    #[test]
    fn single_linkage_symmetric_three_node() {
        let net = Network::new(
            vec!["a", "b", "c"],
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 2.0],
                vec![5.0, 2.0, 0.0],
            ],
        )
        .unwrap();
        let u = single_linkage(&net).unwrap();
        // a-b-c with cost max(1, 2) = 2 beats the direct a-c link of 5.
        assert_eq!(u.get(0, 2), 2.0);
        assert_eq!(u.get(0, 1), 1.0);
        assert_eq!(u.get(1, 2), 2.0);
    }

    #[test]
    fn single_linkage_rejects_asymmetric() {
        let err = single_linkage(&two_node(1.0, 3.0)).unwrap_err();
        assert!(matches!(err, Error::AsymmetricInput { row: 0, col: 1 }));
    }

    #[test]
    fn run_method_dispatch() {
        let net = two_node(1.0, 3.0);
        assert_eq!(run_method("reciprocal", &net).unwrap().get(0, 1), 3.0);
        assert_eq!(run_method("nonreciprocal", &net).unwrap().get(0, 1), 3.0);
        let err = run_method("unknown", &net).unwrap_err();
        assert!(matches!(err, Error::UnknownMethod(name) if name == "unknown"));
    }

    #[test]
    fn symmetric_network_methods_coincide() {
        let net = triangle().symmetrize_max();
        let r = reciprocal(&net);
        let nr = nonreciprocal(&net);
        let sl = single_linkage(&net).unwrap();
        assert_eq!(r, nr);
        assert_eq!(r, sl);
    }

    #[test]
    fn reciprocal_equals_single_linkage_of_symmetrization() {
        let net = triangle();
        let r = reciprocal(&net);
        let sl = single_linkage(&net.symmetrize_max()).unwrap();
        assert_eq!(r, sl);
    }

    #[test]
    fn ultrametric_fixed_point() {
        let u = reciprocal(&triangle());
        let net = u.to_network();
        assert_eq!(reciprocal(&net), u);
        assert_eq!(nonreciprocal(&net), u);
        assert_eq!(single_linkage(&net).unwrap(), u);
    }

    #[test]
    fn ultrametric_new_validates() {
        let good = SquareMatrix::from_rows(vec![
            vec![0.0, 2.0, 3.0],
            vec![2.0, 0.0, 3.0],
            vec![3.0, 3.0, 0.0],
        ])
        .unwrap();
        assert!(UltrametricMatrix::new(vec!["a".into(), "b".into(), "c".into()], good).is_ok());

        // Collinear Euclidean points 0, 1, 2: metric but not ultrametric.
        let bad = SquareMatrix::from_rows(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        let err =
            UltrametricMatrix::new(vec!["a".into(), "b".into(), "c".into()], bad).unwrap_err();
        assert!(matches!(err, Error::NotUltrametric { .. }));
    }
}
