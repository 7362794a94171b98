//! Dense matrices and the symmetric positive-definite factorizations the
//! statistical modules need. Sizes here are desk scale (correlation matrices,
//! kinship matrices, genotype cross products), so the implementations are
//! straightforward O(n³) routines with careful failure reporting.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DataShape("matrix needs at least one row".into()));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::DataShape("matrix needs at least one column".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(Error::DataShape(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { n_rows: rows.len(), n_cols, data })
    }

    /// Build from column vectors (convenient for design matrices).
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::DataShape("matrix needs at least one column and row".into()));
        }
        let n_rows = cols[0].len();
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n_rows {
                return Err(Error::DataShape(format!(
                    "column {j} has {} entries, expected {n_rows}",
                    c.len()
                )));
            }
        }
        let mut m = Matrix::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n_cols {
            return Err(Error::DataShape(format!(
                "matvec: {} columns vs vector of length {}",
                self.n_cols,
                v.len()
            )));
        }
        Ok((0..self.n_rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::DataShape(format!(
                "matmul: {}x{} times {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = Matrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute asymmetry max |a_ij − a_ji|; zero for non-square.
    pub fn max_asymmetry(&self) -> f64 {
        if self.n_rows != self.n_cols {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.n_rows {
            for j in (i + 1)..self.n_cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// Factor `a = L·Lᵀ`; fails with `Error::Singular` when `a` is not
    /// positive definite (within floating point).
    pub fn new(a: &Matrix) -> Result<Self> {
        if a.n_rows != a.n_cols {
            return Err(Error::DataShape(format!(
                "cholesky needs a square matrix, got {}x{}",
                a.n_rows, a.n_cols
            )));
        }
        let n = a.n_rows;
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a.get(i, j);
                for k in 0..j {
                    sum -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(Error::Singular(format!(
                            "not positive definite: pivot {i} is {sum}"
                        )));
                    }
                    l.set(i, j, sum.sqrt());
                } else {
                    l.set(i, j, sum / l.get(j, j));
                }
            }
        }
        Ok(Cholesky { l })
    }

    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    /// Solve A·x = b.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.l.n_rows;
        if b.len() != n {
            return Err(Error::DataShape(format!(
                "solve: system of size {n} vs rhs of length {}",
                b.len()
            )));
        }
        // Forward: L·y = b
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.l.get(i, k) * y[k];
            }
            y[i] = sum / self.l.get(i, i);
        }
        // Backward: Lᵀ·x = y
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= self.l.get(k, i) * x[k];
            }
            x[i] = sum / self.l.get(i, i);
        }
        Ok(x)
    }

    /// Solve A·X = B column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        if b.n_rows != self.l.n_rows {
            return Err(Error::DataShape(format!(
                "solve_matrix: system of size {} vs rhs with {} rows",
                self.l.n_rows, b.n_rows
            )));
        }
        let mut out = Matrix::zeros(b.n_rows, b.n_cols);
        for j in 0..b.n_cols {
            let col = self.solve(&b.column(j))?;
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, *v);
            }
        }
        Ok(out)
    }

    /// A⁻¹, symmetrized to remove round-off drift.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.l.n_rows;
        let mut inv = self.solve_matrix(&Matrix::identity(n))?;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (inv.get(i, j) + inv.get(j, i));
                inv.set(i, j, avg);
                inv.set(j, i, avg);
            }
        }
        Ok(inv)
    }
}

/// Inverse of a symmetric positive-definite matrix.
pub fn spd_inverse(a: &Matrix) -> Result<Matrix> {
    Cholesky::new(a)?.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fixture() -> Matrix {
        Matrix::from_rows(&[
            vec![4.0, 1.0, 0.5, 0.2],
            vec![1.0, 3.0, 0.3, 0.1],
            vec![0.5, 0.3, 2.5, 0.4],
            vec![0.2, 0.1, 0.4, 1.8],
        ])
        .unwrap()
    }

    // Factor, solve, and inverse pinned to an independent reference solve.
    #[test]
    fn cholesky_reference() {
        let a = fixture();
        let ch = Cholesky::new(&a).unwrap();
        let want_l = [
            [2.0, 0.0, 0.0, 0.0],
            [0.5, 1.6583123951777, 0.0, 0.0],
            [0.25, 0.10552897060221726, 1.5576789259547799, 0.0],
            [0.1, 0.030151134457776365, 0.23870014264350126, 1.3160976981185255],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(ch.factor().get(i, j), want_l[i][j], epsilon = 1e-12);
            }
        }
        let x = ch.solve(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let want_x = [
            -0.09132578125506975,
            0.5468731410920591,
            0.8298273202956515,
            2.017581618901971,
        ];
        for (got, want) in x.iter().zip(want_x) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        let inv = ch.inverse().unwrap();
        let want_row0 = [
            0.27810885115974227,
            -0.08790809450985396,
            -0.042418251312456606,
            -0.01659092236443356,
        ];
        for (j, want) in want_row0.iter().enumerate() {
            assert_relative_eq!(inv.get(0, j), *want, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_definite() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(Cholesky::new(&a), Err(Error::Singular(_))));
        let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(Cholesky::new(&b), Err(Error::Singular(_))));
    }

    #[test]
    fn random_spd_matches_nalgebra() {
        use crate::random::{rng_from, standard_normal};
        use nalgebra::DMatrix;

        let mut rng = rng_from(2024);
        for trial in 0..25 {
            let n = 2 + (trial % 5);
            let b = DMatrix::from_fn(n, n, |_, _| standard_normal(&mut rng));
            let spd = &b * b.transpose() + DMatrix::identity(n, n) * 0.5;
            let ours = Matrix::from_rows(
                &(0..n).map(|i| (0..n).map(|j| spd[(i, j)]).collect()).collect::<Vec<_>>(),
            )
            .unwrap();
            let inv = spd_inverse(&ours).unwrap();
            let reference = spd.clone().try_inverse().unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_relative_eq!(inv.get(i, j), reference[(i, j)], epsilon = 1e-8);
                }
            }
            let rhs: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
            let x = Cholesky::new(&ours).unwrap().solve(&rhs).unwrap();
            let back = ours.matvec(&x).unwrap();
            for (got, want) in back.iter().zip(&rhs) {
                assert_relative_eq!(*got, *want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn matmul_and_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let at = a.transpose();
        let aat = a.matmul(&at).unwrap();
        assert_eq!(aat.n_rows(), 2);
        assert_relative_eq!(aat.get(0, 0), 14.0);
        assert_relative_eq!(aat.get(0, 1), 32.0);
        assert_relative_eq!(aat.get(1, 1), 77.0);
        assert!(a.matmul(&a).is_err());
        assert_eq!(a.max_asymmetry(), f64::INFINITY);
        assert_eq!(aat.max_asymmetry(), 0.0);
    }
}
