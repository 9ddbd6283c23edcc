//! Banded linear least squares by Givens rotations.
//!
//! Rows of a B-spline collocation matrix have at most `p + 1` consecutive
//! nonzeros, so the triangular factor keeps the same bandwidth. Rows are
//! folded in one at a time; nothing of size `rows x cols` is ever formed.

use crate::error::{Error, Result};
use crate::Scalar;

pub(crate) struct BandedLeastSquares<T, const D: usize> {
    cols: usize,
    width: usize,
    /// Row `j` holds `R[j][j..j + width]`.
    r: Vec<T>,
    rhs: Vec<[T; D]>,
    residual_sq: [T; D],
    row: Vec<T>,
}

impl<T: Scalar, const D: usize> BandedLeastSquares<T, D> {
    pub(crate) fn new(cols: usize, width: usize) -> Self {
        Self {
            cols,
            width,
            r: vec![T::zero(); cols * width],
            rhs: vec![[T::zero(); D]; cols],
            residual_sq: [T::zero(); D],
            row: vec![T::zero(); width],
        }
    }

    /// Folds in the observation `Σ_k values[k] x[first + k] = y`.
    pub(crate) fn add_row(&mut self, first: usize, values: &[T], mut y: [T; D]) {
        let w = self.width;
        debug_assert_eq!(values.len(), w);
        self.row.copy_from_slice(values);
        let last = (first + w).min(self.cols);
        for j in first..last {
            let pivot = self.row[0];
            if pivot != T::zero() {
                let rj = &mut self.r[j * w..(j + 1) * w];
                if rj[0] == T::zero() {
                    rj.copy_from_slice(&self.row);
                    self.rhs[j] = y;
                    return;
                }
                let norm = rj[0].hypot(pivot);
                let (c, s) = (rj[0] / norm, pivot / norm);
                rj[0] = norm;
                for (a, b) in rj[1..].iter_mut().zip(&mut self.row[1..]) {
                    let (x, z) = (*a, *b);
                    *a = c * x + s * z;
                    *b = c * z - s * x;
                }
                for (a, b) in self.rhs[j].iter_mut().zip(y.iter_mut()) {
                    let (x, z) = (*a, *b);
                    *a = c * x + s * z;
                    *b = c * z - s * x;
                }
            }
            self.row.copy_within(1.., 0);
            self.row[w - 1] = T::zero();
        }
        for (acc, v) in self.residual_sq.iter_mut().zip(y) {
            *acc = *acc + v * v;
        }
    }

    /// Squared residual norm per coordinate, valid once all rows are in and
    /// the system has full column rank.
    #[allow(dead_code)]
    pub(crate) fn residual_sq(&self) -> [T; D] {
        self.residual_sq
    }

    /// Back substitution. A pivot below `eps^(3/4)` times the largest pivot is
    /// treated as rank deficiency.
    pub(crate) fn solve(&self) -> Result<Vec<[T; D]>> {
        let w = self.width;
        let n = self.cols;
        let max_pivot = (0..n).map(|j| self.r[j * w].abs()).fold(T::zero(), T::max);
        let tol = max_pivot * T::epsilon().powf(T::lit(0.75));
        if max_pivot == T::zero() {
            return Err(Error::InfeasibleFit("empty collocation matrix".into()));
        }
        if let Some(j) = (0..n).find(|&j| !(self.r[j * w].abs() > tol)) {
            return Err(Error::InfeasibleFit(format!(
                "collocation matrix is rank deficient at column {j}"
            )));
        }
        let mut x = vec![[T::zero(); D]; n];
        for j in (0..n).rev() {
            let rj = &self.r[j * w..(j + 1) * w];
            let mut acc = self.rhs[j];
            for k in 1..w.min(n - j) {
                for d in 0..D {
                    acc[d] = acc[d] - rj[k] * x[j + k][d];
                }
            }
            for d in 0..D {
                x[j][d] = acc[d] / rj[0];
            }
        }
        Ok(x)
    }
}
