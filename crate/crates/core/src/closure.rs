//! Directed minimax chain costs via (min, max) transitive closure.
//!
//! The closure of a dissimilarity matrix assigns to each ordered pair the
//! minimum over all directed chains of the maximum link dissimilarity along
//! the chain. It is computed with a Floyd-Warshall sweep over intermediate
//! nodes using the update `u(i,j) <- min(u(i,j), max(u(i,k), u(k,j)))`,
//! O(n^3) time and O(n^2) space. Only comparisons and copies of input values
//! occur, so results are exact.

use crate::error::Result;
use crate::matrix::SquareMatrix;
use crate::network::validate_network_shape;

/// Matrix of unidirectional minimum chain costs.
///
/// Satisfies the directed strong-triangle closure property
/// `m(i,j) <= max(m(i,k), m(k,j))` for all triples, and every off-diagonal
/// entry equals some entry of the source matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxMatrix {
    values: SquareMatrix,
}

impl MinimaxMatrix {
    pub fn values(&self) -> &SquareMatrix {
        &self.values
    }

    pub fn into_values(self) -> SquareMatrix {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }
}

/// Compute the (min, max) transitive closure of a network-shaped matrix.
///
/// The input must be square with a zero diagonal and positive finite
/// off-diagonal entries; violations are reported before any computation.
pub fn minimax_closure(dissim: &SquareMatrix) -> Result<MinimaxMatrix> {
    validate_network_shape(dissim)?;
    let n = dissim.len();
    let mut u = dissim.clone();
    for k in 0..n {
        let row_k = u.row(k).to_vec();
        for i in 0..n {
            if i == k {
                continue;
            }
            let u_ik = u.get(i, k);
            let row_i = u.row_mut(i);
            for (u_ij, &u_kj) in row_i.iter_mut().zip(&row_k) {
                let through_k = u_ik.max(u_kj);
                if through_k < *u_ij {
                    *u_ij = through_k;
                }
            }
        }
    }
    Ok(MinimaxMatrix { values: u })
}

/// Symmetrize a closure by the pointwise max with its transpose:
/// entry (i, j) becomes `max(m(i,j), m(j,i))`.
pub fn pointwise_max_transpose(m: &MinimaxMatrix) -> SquareMatrix {
    m.values.max_transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;

    /// Three-node cycle with cheap forward edges and expensive reverse edges.
    pub(crate) fn cycle_network() -> Network {
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

    /// Three-node network with mixed asymmetric weights.
    pub(crate) fn triangle_network() -> Network {
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

    #[test]
    fn two_node_closure_is_identity() {
        let net = Network::new(vec!["p", "q"], vec![vec![0.0, 1.0], vec![3.0, 0.0]]).unwrap();
        let u = minimax_closure(net.dissim()).unwrap();
        assert_eq!(u.get(0, 1), 1.0);
        assert_eq!(u.get(1, 0), 3.0);
    }

    #[test]
    fn triangle_closure_values() {
        let u = minimax_closure(triangle_network().dissim()).unwrap();
        assert_eq!(u.get(0, 1), 1.0);
        assert_eq!(u.get(1, 0), 2.0);
        assert_eq!(u.get(1, 2), 2.0);
        // x3 -> x1 -> x2 has cost max(2, 1) = 2, beating the direct edge 3.
        assert_eq!(u.get(2, 1), 2.0);
        // x1 -> x2 -> x3 has cost max(1, 2) = 2, beating the direct edge 3.
        assert_eq!(u.get(0, 2), 2.0);
        assert_eq!(u.get(2, 0), 2.0);
    }

    #[test]
    fn cheap_cycle_reaches_everything() {
        let u = minimax_closure(cycle_network().dissim()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(u.get(i, j), 0.5, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn closure_dominated_by_direct_link() {
        let net = triangle_network();
        let u = minimax_closure(net.dissim()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(u.get(i, j) <= net.get(i, j));
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let u = minimax_closure(triangle_network().dissim()).unwrap();
        let again = minimax_closure(u.values()).unwrap();
        assert_eq!(u, again);
    }

    #[test]
    fn symmetric_input_gives_symmetric_closure() {
        let net = triangle_network().symmetrize_max();
        let u = minimax_closure(net.dissim()).unwrap();
        assert!(u.values().is_symmetric());
    }

    #[test]
    fn max_transpose_of_two_node_closure() {
        let net = Network::new(vec!["p", "q"], vec![vec![0.0, 1.0], vec![3.0, 0.0]]).unwrap();
        let u = minimax_closure(net.dissim()).unwrap();
        let sym = pointwise_max_transpose(&u);
        assert_eq!(sym.get(0, 1), 3.0);
        assert_eq!(sym.get(1, 0), 3.0);
    }

    #[test]
    fn max_transpose_fixes_symmetric_closures() {
        let net = triangle_network().symmetrize_max();
        let u = minimax_closure(net.dissim()).unwrap();
        assert_eq!(pointwise_max_transpose(&u), *u.values());
    }

    #[test]
    fn triangle_max_transpose_all_two() {
        let u = minimax_closure(triangle_network().dissim()).unwrap();
        let sym = pointwise_max_transpose(&u);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(sym.get(i, j), 2.0);
                }
            }
        }
    }

    #[test]
    fn invalid_matrix_rejected() {
        let m = SquareMatrix::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(minimax_closure(&m).is_err());
    }
}
