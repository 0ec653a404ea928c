//! Banded storage and direct solvers for the small systems of the schemes.

use std::ops::Add;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square tridiagonal matrix.
///
/// `lower[i]` is entry `(i + 1, i)`, `upper[i]` is entry `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty tridiagonal matrix");
        assert_eq!(lower.len() + 1, diag.len());
        assert_eq!(upper.len() + 1, diag.len());
        Self { lower, diag, upper }
    }

    pub fn from_diagonal(diag: Vec<f64>) -> Self {
        let m = diag.len();
        Self::new(vec![0.0; m - 1], diag, vec![0.0; m - 1])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i == j + 1 {
            self.lower[j]
        } else if j == i + 1 {
            self.upper[i]
        } else {
            0.0
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let mut s = self.diag[i];
                if i > 0 {
                    s += self.lower[i - 1];
                }
                if i + 1 < self.dim() {
                    s += self.upper[i];
                }
                s
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.lower == self.upper
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        self.lower.iter().chain(&self.upper).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.max_off_diagonal() == 0.0
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(x.len(), m);
        (0..m)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < m {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.upper.clone(), self.diag.clone(), self.lower.clone())
    }

    pub fn scale_rows(&self, s: &[f64]) -> Self {
        let m = self.dim();
        let lower = (0..m - 1).map(|i| self.lower[i] * s[i + 1]).collect();
        let diag = (0..m).map(|i| self.diag[i] * s[i]).collect();
        let upper = (0..m - 1).map(|i| self.upper[i] * s[i]).collect();
        Self::new(lower, diag, upper)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let m = self.dim();
        DMatrix::from_fn(m, m, |i, j| self.get(i, j))
    }

    /// Solves `A x = rhs` by Gaussian elimination without pivoting (Thomas).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        if rhs.len() != m {
            return Err(Error::Dimension { expected: m, got: rhs.len() });
        }
        let scale = self.diag.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
        let tiny = scale * 1e3 * f64::EPSILON * f64::EPSILON;
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut pivot = self.diag[0];
        if pivot.abs() <= tiny {
            return Err(Error::SingularMatrix { row: 0 });
        }
        if m > 1 {
            c[0] = self.upper[0] / pivot;
        }
        d[0] = rhs[0] / pivot;
        for i in 1..m {
            pivot = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if pivot.abs() <= tiny {
                return Err(Error::SingularMatrix { row: i });
            }
            if i + 1 < m {
                c[i] = self.upper[i] / pivot;
            }
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// `LDLᵀ` pivots of a symmetric tridiagonal matrix; all positive iff SPD.
    pub fn ldlt_pivots(&self) -> Vec<f64> {
        let m = self.dim();
        let mut pivots = Vec::with_capacity(m);
        let mut prev = self.diag[0];
        pivots.push(prev);
        for i in 1..m {
            let l = self.lower[i - 1] / prev;
            prev = self.diag[i] - l * self.upper[i - 1];
            pivots.push(prev);
        }
        pivots
    }

    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.ldlt_pivots().iter().all(|&p| p > 0.0)
    }
}

impl Add for &Tridiagonal {
    type Output = Tridiagonal;

    fn add(self, rhs: &Tridiagonal) -> Tridiagonal {
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Tridiagonal::new(
            zip(&self.lower, &rhs.lower),
            zip(&self.diag, &rhs.diag),
            zip(&self.upper, &rhs.upper),
        )
    }
}

/// The `n x (n + 1)` cell-divergence pattern: row `l` is `-1` in column `l`
/// and `+1` in column `l + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivMatrix {
    n: usize,
}

impl DivMatrix {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.n + 1
    }

    pub fn get(&self, l: usize, k: usize) -> f64 {
        if k == l {
            -1.0
        } else if k == l + 1 {
            1.0
        } else {
            0.0
        }
    }

    /// `B q`: cell jumps `q_{l+1} - q_l`.
    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        assert_eq!(q.len(), self.n + 1);
        q.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `Bᵗ u`: node values `u_{j-1/2} - u_{j+1/2}` with zero outside.
    pub fn apply_transpose(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.n);
        (0..=self.n)
            .map(|j| {
                let left = if j > 0 { u[j - 1] } else { 0.0 };
                let right = if j < self.n { u[j] } else { 0.0 };
                left - right
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows(), self.cols(), |l, k| self.get(l, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thomas_small() {
        let a = Tridiagonal::new(vec![-1.0, -1.0], vec![2.0, 2.0, 2.0], vec![-1.0, -1.0]);
        let x = a.solve(&[1.0, 0.0, 1.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert!(a.is_positive_definite());
    }

    #[test]
    fn singular_pivot() {
        let a = Tridiagonal::new(vec![1.0], vec![0.0, 1.0], vec![1.0]);
        assert_eq!(a.solve(&[1.0, 1.0]), Err(Error::SingularMatrix { row: 0 }));
        let b = Tridiagonal::new(vec![1.0], vec![1.0, 1.0], vec![1.0]);
        assert_eq!(b.solve(&[1.0, 1.0]), Err(Error::SingularMatrix { row: 1 }));
    }

    #[test]
    fn one_by_one() {
        let a = Tridiagonal::from_diagonal(vec![4.0]);
        assert_eq!(a.solve(&[2.0]).unwrap(), vec![0.5]);
    }

    #[test]
    fn div_pattern() {
        let b = DivMatrix::new(2);
        let dense = b.to_dense();
        assert_eq!(dense, DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0]));
        assert_eq!(b.apply(&[1.0, 1.0, 1.0]), vec![0.0, 0.0]);
        let u = [3.0, 5.0];
        let bt = dense.transpose() * nalgebra::DVector::from_column_slice(&u);
        assert_eq!(b.apply_transpose(&u), bt.as_slice());
    }

    proptest! {
        #[test]
        fn thomas_matches_dense(
            diag in prop::collection::vec(4.0f64..10.0, 1..40),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = diag.len();
            let lower: Vec<f64> = (0..m - 1).map(|_| rng.random_range(-1.5..1.5)).collect();
            let upper: Vec<f64> = (0..m - 1).map(|_| rng.random_range(-1.5..1.5)).collect();
            let rhs: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = Tridiagonal::new(lower, diag, upper);
            let x = a.solve(&rhs).unwrap();
            let ax = a.mul_vec(&x);
            for (l, r) in ax.iter().zip(&rhs) {
                prop_assert!((l - r).abs() < 1e-12);
            }
            let dense = a.to_dense().lu().solve(&nalgebra::DVector::from_column_slice(&rhs)).unwrap();
            for (l, r) in x.iter().zip(dense.iter()) {
                prop_assert!((l - r).abs() < 1e-12);
            }
        }
    }
}
