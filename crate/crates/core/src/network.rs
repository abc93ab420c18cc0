//! Finite asymmetric dissimilarity networks.
//!
//! A network is a finite ordered node set together with a square matrix of
//! pairwise dissimilarities. Entries need not be symmetric and need not
//! satisfy any triangle inequality; the only structural requirements are a
//! zero diagonal and positive, finite off-diagonal entries.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Immutable asymmetric dissimilarity network.
///
/// The label order is the canonical node order for every output produced
/// from the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    dissim: SquareMatrix,
}

/// Check the structural invariants shared by networks and raw matrices fed
/// to the closure: zero diagonal, positive finite off-diagonal entries.
pub(crate) fn validate_network_shape(m: &SquareMatrix) -> Result<()> {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            let value = m.get(i, j);
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
            if i == j {
                if value != 0.0 {
                    return Err(Error::NonZeroDiagonal { index: i, value });
                }
            } else if value < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j, value });
            } else if value == 0.0 {
                return Err(Error::ZeroOffDiagonal { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl Network {
    /// Validate and assemble a network from labels and nested matrix rows.
    pub fn new<L: Into<String>>(labels: Vec<L>, dissim: Vec<Vec<f64>>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let matrix = SquareMatrix::from_rows(dissim)?;
        Network::from_matrix(labels, matrix)
    }

    /// Validate and assemble a network from an already-square matrix.
    pub fn from_matrix(labels: Vec<String>, dissim: SquareMatrix) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        if dissim.len() != labels.len() {
            return Err(Error::NonSquare { labels: labels.len(), row: 0, cols: dissim.len() });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        validate_network_shape(&dissim)?;
        Ok(Network { labels, dissim })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a validated network always has at least one node
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dissim(&self) -> &SquareMatrix {
        &self.dissim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dissim.get(i, j)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Max-symmetrization: entry (i, j) becomes `max(a(i,j), a(j,i))`.
    pub fn symmetrize_max(&self) -> Network {
        Network { labels: self.labels.clone(), dissim: self.dissim.max_transpose() }
    }

    /// Exact symmetry test.
    pub fn is_symmetric(&self) -> bool {
        self.dissim.is_symmetric()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node(alpha: f64, beta: f64) -> Network {
        Network::new(vec!["p", "q"], vec![vec![0.0, alpha], vec![beta, 0.0]]).unwrap()
    }

    #[test]
    fn two_node_network_is_valid() {
        let net = two_node(1.0, 3.0);
        assert_eq!(net.len(), 2);
        assert_eq!(net.get(0, 1), 1.0);
        assert_eq!(net.get(1, 0), 3.0);
    }

    #[test]
    fn singleton_network_is_valid() {
        let net = Network::new(vec!["a"], vec![vec![0.0]]).unwrap();
        assert_eq!(net.len(), 1);
        assert!(net.is_symmetric());
    }

    #[test]
    fn zero_off_diagonal_rejected() {
        let err = Network::new(vec!["a", "b"], vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::ZeroOffDiagonal { row: 0, col: 1 }));
    }

    #[test]
    fn negative_entry_rejected() {
        let err = Network::new(vec!["a", "b"], vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NegativeEntry { row: 0, col: 1, .. }));
    }

    #[test]
    fn nonzero_diagonal_rejected() {
        let err = Network::new(vec!["a", "b"], vec![vec![0.5, 1.0], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonZeroDiagonal { index: 0, .. }));
    }

    #[test]
    fn non_finite_rejected() {
        let err =
            Network::new(vec!["a", "b"], vec![vec![0.0, f64::INFINITY], vec![1.0, 0.0]])
                .unwrap_err();
        assert!(matches!(err, Error::NonFiniteEntry { row: 0, col: 1 }));
        let err =
            Network::new(vec!["a", "b"], vec![vec![0.0, f64::NAN], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteEntry { row: 0, col: 1 }));
    }

    #[test]
    fn duplicate_label_rejected() {
        let err = Network::new(vec!["a", "a"], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(l) if l == "a"));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = Network::new(vec!["a", "b", "c"], vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap_err();
        assert!(matches!(err, Error::NonSquare { .. }));
    }

    #[test]
    fn empty_network_rejected() {
        let err = Network::new(Vec::<String>::new(), vec![]).unwrap_err();
        assert!(matches!(err, Error::EmptyNetwork));
    }

    #[test]
    fn symmetrize_max_two_node() {
        let sym = two_node(1.0, 3.0).symmetrize_max();
        assert_eq!(sym.get(0, 1), 3.0);
        assert_eq!(sym.get(1, 0), 3.0);
    }

    #[test]
    fn symmetrize_max_idempotent_and_dominating() {
        let net = Network::new(
            vec!["x1", "x2", "x3"],
            vec![
                vec![0.0, 1.0, 3.0],
                vec![2.0, 0.0, 2.0],
                vec![2.0, 3.0, 0.0],
            ],
        )
        .unwrap();
        let once = net.symmetrize_max();
        // Values from the three-cycle example: max of each opposing pair.
        assert_eq!(once.get(0, 1), 2.0);
        assert_eq!(once.get(1, 2), 3.0);
        assert_eq!(once.get(0, 2), 3.0);
        assert!(once.is_symmetric());
        let twice = once.symmetrize_max();
        assert_eq!(once, twice);
        assert!(net.dissim().entrywise_le(once.dissim()));
    }

    #[test]
    fn is_symmetric_cases() {
        assert!(two_node(3.0, 3.0).is_symmetric());
        assert!(!two_node(1.0, 3.0).is_symmetric());
        assert!(Network::new(vec!["a"], vec![vec![0.0]]).unwrap().is_symmetric());
    }
}
