use num_traits::{One, Zero};

use super::{check_len, is_zero_vec, Gq, Matrix, Vector};
use crate::error::{Error, Result};

/// A linear subspace of ℚ(i)ⁿ in canonical reduced row-echelon form.
///
/// Rows are nonzero, sorted by pivot column, have a unit pivot and zeros in
/// every other row's pivot column. Equal subspaces therefore compare equal
/// with `==`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

/// Reduced row-echelon form of a list of rows; returns canonical nonzero
/// rows and their pivot columns.
pub(crate) fn rref_rows(mut rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow).skip(col) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Row-reduces `rows` (each of length `ambient_dim`) to canonical form and
/// returns the spanned subspace with its rank.
pub fn rref(ambient_dim: usize, rows: &[Vector]) -> Result<(Subspace, usize)> {
    let s = Subspace::span(ambient_dim, rows)?;
    let r = s.dim();
    Ok((s, r))
}

/// Right null space `{v : M·v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let n = m.cols();
    let (rows, pivots) = rref_rows(m.row_vecs());
    let mut basis = Vec::new();
    let mut pi = 0;
    for free in 0..n {
        if pi < pivots.len() && pivots[pi] == free {
            pi += 1;
            continue;
        }
        let mut v = vec![Gq::zero(); n];
        v[free] = Gq::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = -&row[free];
            }
        }
        basis.push(v);
    }
    Subspace::span(n, &basis).expect("kernel vectors have ambient length")
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    let cols: Vec<Vector> = (0..m.cols()).map(|c| m.column(c)).collect();
    Subspace::span(m.rows(), &cols).expect("columns have row length")
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| super::unit_vec(ambient_dim, i))
            .collect();
        Self {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, rows: &[Vector]) -> Result<Self> {
        for (k, r) in rows.iter().enumerate() {
            if r.len() != ambient_dim {
                return Err(Error::Shape(format!(
                    "row {k} has length {}, expected {ambient_dim}",
                    r.len()
                )));
            }
        }
        let nonzero: Vec<Vector> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
        let (basis, pivots) = rref_rows(nonzero);
        Ok(Self {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus the unique combination of basis rows that clears every
    /// pivot column. Zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Gq]) -> Result<Vector> {
        check_len(v, self.ambient_dim, "Subspace::reduce")?;
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let f = w[pc].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[Gq]) -> Result<bool> {
        Ok(is_zero_vec(&self.reduce(v)?))
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v ∉ self`.
    pub fn coordinates(&self, v: &[Gq]) -> Result<Option<Vector>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    fn same_ambient(&self, o: &Subspace) -> Result<()> {
        if self.ambient_dim != o.ambient_dim {
            return Err(Error::Shape(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient_dim, o.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.same_ambient(o)?;
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &rows)
    }

    pub fn add_vectors(&self, vs: &[Vector]) -> Result<Subspace> {
        let mut rows = self.basis.clone();
        rows.extend(vs.iter().cloned());
        Subspace::span(self.ambient_dim, &rows)
    }

    /// `self ∩ o`, from the kernel of the stacked system `[A | −B]`.
    pub fn intersection(&self, o: &Subspace) -> Result<Subspace> {
        self.same_ambient(o)?;
        let n = self.ambient_dim;
        let mut cols: Vec<Vector> = self.basis.clone();
        cols.extend(o.basis.iter().map(|b| super::vec_neg(b)));
        if cols.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let stacked = Matrix::from_columns(n, &cols)?;
        let ker = kernel(&stacked);
        let ra = self.basis.len();
        let vs: Vec<Vector> = ker
            .basis()
            .iter()
            .map(|k| {
                let mut v = vec![Gq::zero(); n];
                for (c, row) in k[..ra].iter().zip(&self.basis) {
                    super::axpy(&mut v, c, row);
                }
                v
            })
            .collect();
        Subspace::span(n, &vs)
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> Result<bool> {
        self.same_ambient(o)?;
        for b in &self.basis {
            if !o.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Span of `M·b` over the basis rows `b`.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        let imgs = self
            .basis
            .iter()
            .map(|b| m.apply(b))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), &imgs)
    }

    /// Entrywise conjugate subspace.
    pub fn conj(&self) -> Subspace {
        let rows: Vec<Vector> = self.basis.iter().map(|b| super::vec_conj(b)).collect();
        Subspace::span(self.ambient_dim, &rows).expect("same ambient")
    }

    pub fn is_real(&self) -> bool {
        self.basis.iter().all(|b| b.iter().all(Gq::is_real))
    }

    /// Indices of the first vectors (in order) that extend to a basis of the
    /// span of `vs`.
    pub fn greedy_independent(ambient_dim: usize, vs: &[Vector]) -> Result<Vec<usize>> {
        let mut acc = Subspace::zero(ambient_dim);
        let mut picked = Vec::new();
        for (i, v) in vs.iter().enumerate() {
            if !acc.contains(v)? {
                acc = acc.add_vectors(std::slice::from_ref(v))?;
                picked.push(i);
            }
        }
        Ok(picked)
    }
}
