use std::fmt;

use num_traits::{One, Zero};

use super::{dot, subspace::rref_rows, Gq, Vector};
use crate::error::{Error, Result};

/// Dense row-major matrix over ℚ(i). The linear map is `v ↦ M·v`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Gq::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Gq::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Builds an `n × k` matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {n}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let v: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Gq::from_int(x)).collect())
            .collect();
        Self::from_rows(&v).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Gq {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gq) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Gq) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Gq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[Gq]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "matrix with {} columns applied to vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Gq) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Gq::conj).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Gq::is_real)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.row_vecs()).0.len()
    }

    /// Gauss–Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vector> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Gq::one() } else { Gq::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].inv()?;
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            let prow = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &(&f * p);
                    }
                }
            }
        }
        let rows: Vec<Vector> = a.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(&rows).ok()
    }

    /// Determinant by elimination; `None` for non-square input.
    pub fn determinant(&self) -> Option<Gq> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vector> = self.row_vecs();
        let mut det = Gq::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Some(Gq::zero());
            };
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            det = &det * &a[col][col];
            let inv = a[col][col].inv().expect("nonzero pivot");
            let prow = a[col].clone();
            for row in a.iter_mut().skip(col + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let f = &row[col] * &inv;
                for (x, p) in row.iter_mut().zip(&prow).skip(col) {
                    if !p.is_zero() {
                        *x -= &(&f * p);
                    }
                }
            }
        }
        Some(det)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0], &[0, 1, -1], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        let sing = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn determinants() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0], &[0, 1, -1], &[1, 0, 1]]);
        assert_eq!(m.determinant(), Some(Gq::from_int(1)));
        let d = Matrix::from_int_rows(&[&[2, 1], &[1, 3]]);
        assert_eq!(d.determinant(), Some(Gq::from_int(5)));
        let swap = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.determinant(), Some(Gq::from_int(-1)));
        assert_eq!(Matrix::zeros(2, 3).determinant(), None);
        assert_eq!(Matrix::identity(0).determinant(), Some(Gq::one()));
    }

    #[test]
    fn shapes_are_checked() {
        let m = Matrix::zeros(2, 3);
        assert!(m.apply(&[Gq::zero(), Gq::zero()]).is_err());
        assert!(m.mul(&Matrix::zeros(2, 2)).is_err());
        assert!(Matrix::from_rows(&[vec![Gq::zero()], vec![]]).is_err());
    }
}
