use std::fmt;

use super::{LinComb, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over an exact field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone)]
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Builds a matrix whose columns are sparse vectors in a space of dimension `rows`.
    pub fn from_sparse_columns(rows: usize, cols: &[LinComb<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).clone() + a.clone() * b.clone();
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Gauss-Jordan elimination.
    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    m.sub_row_multiple(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &F) {
        for c in 0..self.cols {
            let v = self.get(r, c).clone() * s.clone();
            self.set(r, c, v);
        }
    }

    /// row[target] -= f * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &F) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            if !s.is_zero() {
                let v = self.get(target, c).clone() - f.clone() * s.clone();
                self.set(target, c, v);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space, one vector per free column, read off the
    /// reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (r, &p) in ech.pivots.iter().enumerate() {
                    v[p] = -ech.reduced.get(r, free).clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = b`, or `None` when `b` is not in the image.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.reduced.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Indices of a maximal linearly independent set of columns, chosen greedily
    /// from the left.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Basis of the column space, taken from the original columns.
    pub fn image_basis(&self) -> Vec<Vec<F>> {
        self.independent_columns().into_iter().map(|c| self.column(c)).collect()
    }
}

/// Greedily extends the independent family `base` by vectors from `candidates`
/// (in order) until it spans the span of both. Returns the added vectors.
pub fn extend_basis<F: Scalar>(dim: usize, base: &[Vec<F>], candidates: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut all: Vec<Vec<F>> = base.to_vec();
    all.extend_from_slice(candidates);
    let m = Matrix::from_columns(dim, &all);
    m.independent_columns()
        .into_iter()
        .filter(|&c| c >= base.len())
        .map(|c| all[c].clone())
        .collect()
}

/// Coordinates of `v` with respect to the independent family `basis`, if `v`
/// lies in its span.
pub fn coordinates<F: Scalar>(dim: usize, basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    let m = Matrix::from_columns(dim, basis);
    m.solve(v).expect("dimensions agree")
}

pub fn in_span<F: Scalar>(dim: usize, basis: &[Vec<F>], v: &[F]) -> bool {
    coordinates(dim, basis, v).is_some()
}

/// Dimension of the span of the given vectors.
pub fn span_rank<F: Scalar>(dim: usize, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors).rank()
}
