//! Dense square matrix used for dissimilarities, chain costs, and ultrametrics.

use crate::error::{Error, Result};

/// Row-major dense square matrix of `f64`.
///
/// All clustering algebra in this crate copies, compares, and takes min/max of
/// entries; no arithmetic is performed, so values pass through exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    /// Build from nested rows, checking squareness against `expected` rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare { labels: n, row: i, cols: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// First (i, j) with i < j where the matrix differs from its transpose.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Entrywise `max(a(i,j), a(j,i))`; always symmetric.
    pub fn max_transpose(&self) -> SquareMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let m = self.get(i, j).max(self.get(j, i));
                out.set(i, j, m);
                out.set(j, i, m);
            }
        }
        out
    }

    /// Exact entrywise `self <= other`.
    pub fn entrywise_le(&self, other: &SquareMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Largest absolute entrywise difference; requires equal dimensions.
    pub fn max_abs_difference(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Distinct off-diagonal values in ascending order (exact comparison).
    pub fn distinct_off_diagonal(&self) -> Vec<f64> {
        let mut values: Vec<f64> = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    values.push(self.get(i, j));
                }
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));
        values.dedup();
        values
    }

    /// True if `value` equals some entry of the matrix exactly.
    pub fn contains_value(&self, value: f64) -> bool {
        self.data.contains(&value)
    }
}
