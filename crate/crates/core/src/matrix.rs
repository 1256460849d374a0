use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::AlgebraError;
use crate::scalar::IntegerRing;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: IntegerRing> IntegerMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from explicit rows. `cols` is needed so that a matrix
    /// with no rows still knows its width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self, AlgebraError> {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(AlgebraError::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row);
        }
        Ok(IntegerMatrix { rows: n_rows, cols, entries })
    }

    /// Convenience constructor from small literals.
    pub fn from_i32_rows(cols: usize, rows: &[&[i32]]) -> Result<Self, AlgebraError> {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| T::from(x)).collect()).collect())
    }

    pub fn diagonal(cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), cols);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.row(i).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
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

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.cols {
            return Err(AlgebraError::Shape(format!("cannot stack {}-column matrix on {}-column matrix", other.cols, self.cols)));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntegerMatrix { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Keeps the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend(self.row(i).iter().cloned());
        }
        IntegerMatrix { rows: rows.len(), cols: self.cols, entries }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(self.row(i)) {
                if !e.is_zero() {
                    *o = o.clone() + vi.clone() * e.clone();
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> Result<T, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape("determinant of a non-square matrix".into()));
        }
        // Bareiss fraction-free elimination keeps everything integral.
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[target] += factor * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.entries[source * self.cols + c];
            if !s.is_zero() {
                let v = s.clone() * factor.clone();
                let t = &mut self.entries[target * self.cols + c];
                *t = t.clone() + v;
            }
        }
    }

    /// col[target] += factor * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.entries[r * self.cols + source];
            if !s.is_zero() {
                let v = s.clone() * factor.clone();
                let t = &mut self.entries[r * self.cols + target];
                *t = t.clone() + v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let e = &mut self.entries[i * self.cols + c];
            *e = -e.clone();
        }
    }
}

impl<T> Index<(usize, usize)> for IntegerMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for IntegerMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: IntegerRing> Mul for &IntegerMatrix<T> {
    type Output = IntegerMatrix<T>;

    fn mul(self, rhs: &IntegerMatrix<T>) -> IntegerMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = IntegerMatrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<T: fmt::Debug> fmt::Debug for IntegerMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.entries.chunks(self.cols.max(1)).take(self.rows) {
            let cells: Vec<String> = r.iter().map(|e| format!("{e:?}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntegerMatrix::<i64>::from_i32_rows(3, &[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]).unwrap();
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) = -52 - 2
        assert_eq!(m.determinant().unwrap(), -54);
        let z = IntegerMatrix::<BigInt>::zeros(2, 2);
        assert_eq!(z.determinant().unwrap(), BigInt::from(0));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let r = IntegerMatrix::<i64>::from_rows(2, vec![vec![1, 2], vec![3]]);
        assert!(matches!(r, Err(AlgebraError::Shape(_))));
    }

    #[test]
    fn block_diag_and_stack() {
        let a = IntegerMatrix::<i64>::from_i32_rows(1, &[&[2]]).unwrap();
        let b = IntegerMatrix::<i64>::from_i32_rows(2, &[&[1, 1]]).unwrap();
        let d = IntegerMatrix::block_diag(&[a, b.clone()]);
        assert_eq!(d.shape(), (2, 3));
        assert_eq!(d.row(1), &[0, 1, 1]);
        assert!(d.vstack(&b).is_err());
    }
}
