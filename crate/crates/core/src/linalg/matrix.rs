use super::Scalar;
use crate::error::{Error, Result};
use num::Signed;
use std::cmp::Ordering;
use std::ops::{Index, IndexMut, Range};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// The realizing-matrix output type.
pub type DenseMatrix = Matrix<f64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::EmptyInput);
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// `I`
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// `J = e eᵀ`
    pub fn ones_matrix(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: n,
            data: vec![T::one(); n * n],
        }
    }

    /// `e`, as an `n x 1` column.
    pub fn ones_vector(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: 1,
            data: vec![T::one(); n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    let slot = &mut out[(i, j)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .row_iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Principal submatrix on `range`.
    pub fn principal_block(&self, range: Range<usize>) -> Self {
        let k = range.len();
        let mut b = Self::zeros(k, k);
        for (bi, i) in range.clone().enumerate() {
            for (bj, j) in range.clone().enumerate() {
                b[(bi, bj)] = self[(i, j)].clone();
            }
        }
        b
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(Signed::abs)
            .fold(T::zero(), |m, v| if v > m { v } else { m })
    }

    pub fn min_entry(&self) -> T {
        let mut it = self.data.iter();
        let first = it.next().cloned().unwrap_or_else(T::zero);
        it.fold(first, |m, v| if *v < m { v.clone() } else { m })
    }

    /// True iff every entry is `>= -tol`.
    pub fn is_nonnegative(&self, tol: &T) -> bool {
        let floor = -tol.clone();
        self.data.iter().all(|v| *v >= floor)
    }

    /// True iff every row is a permutation of the first row, comparing
    /// sorted rows entrywise within `tol`.
    pub fn is_permutative(&self, tol: &T) -> Result<bool> {
        self.ensure_square()?;
        let sorted_row = |row: &[T]| {
            let mut r = row.to_vec();
            r.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            r
        };
        let first = sorted_row(self.row(0));
        Ok(self.row_iter().skip(1).all(|row| {
            sorted_row(row)
                .iter()
                .zip(&first)
                .all(|(a, b)| (a.clone() - b.clone()).abs() <= *tol)
        }))
    }

    /// Largest absolute entry outside the block-diagonal pattern given by
    /// consecutive `block_sizes`.
    pub fn off_block_max_abs(&self, block_sizes: &[usize]) -> T {
        let mut owner = Vec::with_capacity(self.rows);
        for (b, &size) in block_sizes.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, size));
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if owner.get(i) != owner.get(j) || owner.get(i).is_none() {
                    let v = self[(i, j)].abs();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
        worst
    }
}

impl DenseMatrix {
    /// Rejects NaN and infinite entries.
    pub fn ensure_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFiniteEntry {
                index,
                value: self.data[index],
            }),
            None => Ok(()),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Block-diagonal assembly of square blocks, zeros elsewhere.
pub fn direct_sum<T: Scalar>(blocks: &[Matrix<T>]) -> Result<Matrix<T>> {
    if blocks.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut n = 0;
    for b in blocks {
        n += b.ensure_square()?;
    }
    let mut out = Matrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        let k = b.n_rows();
        for i in 0..k {
            for j in 0..k {
                out[(offset + i, offset + j)] = b[(i, j)].clone();
            }
        }
        offset += k;
    }
    Ok(out)
}

impl serde::Serialize for DenseMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.row_iter() {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for DenseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = <Vec<Vec<f64>>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
