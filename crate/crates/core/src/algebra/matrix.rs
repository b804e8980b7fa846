use super::field::Field;
use super::polynomial::{Homogeneity, Polynomial};
use crate::error::{Error, Result};

/// Homogeneous map between graded free modules
/// `⊕_j S(-col_degrees[j]) → ⊕_i S(-row_degrees[i])`, stored by columns.
///
/// Entry `(i, j)` is zero or homogeneous of degree
/// `col_degrees[j] - row_degrees[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<K> {
    nvars: usize,
    row_degrees: Vec<i32>,
    col_degrees: Vec<i32>,
    columns: Vec<Vec<Polynomial<K>>>,
}

impl<K: Field> Matrix<K> {
    pub fn new(
        nvars: usize,
        row_degrees: Vec<i32>,
        col_degrees: Vec<i32>,
        columns: Vec<Vec<Polynomial<K>>>,
    ) -> Result<Self> {
        if columns.len() != col_degrees.len() {
            return Err(Error::IncompatibleOperands("column count and column degrees differ".into()));
        }
        for c in &columns {
            if c.len() != row_degrees.len() {
                return Err(Error::IncompatibleOperands("column length differs from row count".into()));
            }
            if c.iter().any(|p| p.nvars() != nvars) {
                return Err(Error::IncompatibleOperands("entry over a different variable set".into()));
            }
        }
        let m = Matrix { nvars, row_degrees, col_degrees, columns };
        m.check_homogeneous()?;
        Ok(m)
    }

    /// Build from row-major entries, inferring the column degrees from the
    /// first nonzero entry of each column (zero columns get the largest row degree).
    pub fn from_rows(nvars: usize, row_degrees: Vec<i32>, rows: Vec<Vec<Polynomial<K>>>) -> Result<Self> {
        let nrows = row_degrees.len();
        if rows.len() != nrows {
            return Err(Error::IncompatibleOperands("row count differs from row degrees".into()));
        }
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::IncompatibleOperands("ragged matrix rows".into()));
        }
        let mut columns = vec![Vec::with_capacity(nrows); ncols];
        for row in rows {
            for (j, p) in row.into_iter().enumerate() {
                columns[j].push(p);
            }
        }
        let mut col_degrees = Vec::with_capacity(ncols);
        for col in &columns {
            let mut deg = None;
            for (i, p) in col.iter().enumerate() {
                match p.homogeneous_degree() {
                    Homogeneity::Any => {}
                    Homogeneity::Degree(d) => {
                        deg = Some(d as i32 + row_degrees[i]);
                        break;
                    }
                    Homogeneity::Inhomogeneous(ds) => {
                        return Err(Error::GradedViolation(format!("inhomogeneous entry with degrees {ds:?}")))
                    }
                }
            }
            col_degrees.push(deg.unwrap_or_else(|| row_degrees.iter().copied().max().unwrap_or(0)));
        }
        Matrix::new(nvars, row_degrees, col_degrees, columns)
    }

    pub fn zero(nvars: usize, row_degrees: Vec<i32>, col_degrees: Vec<i32>) -> Self {
        let columns = vec![vec![Polynomial::zero(nvars); row_degrees.len()]; col_degrees.len()];
        Matrix { nvars, row_degrees, col_degrees, columns }
    }

    pub fn identity(nvars: usize, degrees: Vec<i32>) -> Self {
        let n = degrees.len();
        let mut m = Matrix::zero(nvars, degrees.clone(), degrees);
        for i in 0..n {
            m.columns[i][i] = Polynomial::one(nvars);
        }
        m
    }

    /// Map with no columns into the given free module.
    pub fn empty(nvars: usize, row_degrees: Vec<i32>) -> Self {
        Matrix { nvars, row_degrees, col_degrees: Vec::new(), columns: Vec::new() }
    }

    pub(crate) fn from_columns_unchecked(
        nvars: usize,
        row_degrees: Vec<i32>,
        col_degrees: Vec<i32>,
        columns: Vec<Vec<Polynomial<K>>>,
    ) -> Self {
        debug_assert_eq!(columns.len(), col_degrees.len());
        Matrix { nvars, row_degrees, col_degrees, columns }
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        for (j, col) in self.columns.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                match p.homogeneous_degree() {
                    Homogeneity::Any => {}
                    Homogeneity::Degree(d) => {
                        let want = self.col_degrees[j] - self.row_degrees[i];
                        if d as i32 != want {
                            return Err(Error::GradedViolation(format!(
                                "entry ({i},{j}) has degree {d}, shifts force {want}"
                            )));
                        }
                    }
                    Homogeneity::Inhomogeneous(ds) => {
                        return Err(Error::GradedViolation(format!(
                            "entry ({i},{j}) is inhomogeneous with degrees {ds:?}"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.row_degrees.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn row_degrees(&self) -> &[i32] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[i32] {
        &self.col_degrees
    }

    pub fn columns(&self) -> &[Vec<Polynomial<K>>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[Polynomial<K>] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<K> {
        &self.columns[j][i]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|p| p.is_zero()))
    }

    /// Transpose; the dual map has negated shifts on both sides.
    pub fn transpose(&self) -> Self {
        let rows = self.nrows();
        let mut columns = vec![Vec::with_capacity(self.ncols()); rows];
        for col in &self.columns {
            for (i, p) in col.iter().enumerate() {
                columns[i].push(p.clone());
            }
        }
        Matrix {
            nvars: self.nvars,
            row_degrees: self.col_degrees.iter().map(|d| -d).collect(),
            col_degrees: self.row_degrees.iter().map(|d| -d).collect(),
            columns,
        }
    }

    /// `self * other`; requires `other`'s rows to be `self`'s columns.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() || self.col_degrees != other.row_degrees {
            return Err(Error::IncompatibleOperands("matrix product with mismatched shapes or shifts".into()));
        }
        let mut columns = Vec::with_capacity(other.ncols());
        for ocol in &other.columns {
            let mut col = vec![Polynomial::zero(self.nvars); self.nrows()];
            for (k, b) in ocol.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (i, a) in self.columns[k].iter().enumerate() {
                    if !a.is_zero() {
                        col[i] = col[i].add(&a.mul(b));
                    }
                }
            }
            columns.push(col);
        }
        Ok(Matrix {
            nvars: self.nvars,
            row_degrees: self.row_degrees.clone(),
            col_degrees: other.col_degrees.clone(),
            columns,
        })
    }

    /// Apply the map to a single vector of the source free module.
    pub fn apply(&self, v: &[Polynomial<K>]) -> Vec<Polynomial<K>> {
        let mut out = vec![Polynomial::zero(self.nvars); self.nrows()];
        for (k, b) in v.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (i, a) in self.columns[k].iter().enumerate() {
                if !a.is_zero() {
                    out[i] = out[i].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Columns of `self` followed by those of `other` (same target).
    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.row_degrees != other.row_degrees {
            return Err(Error::IncompatibleOperands("hconcat with different targets".into()));
        }
        let mut m = self.clone();
        m.col_degrees.extend_from_slice(&other.col_degrees);
        m.columns.extend(other.columns.iter().cloned());
        Ok(m)
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut row_degrees = self.row_degrees.clone();
        row_degrees.extend_from_slice(&other.row_degrees);
        let mut col_degrees = self.col_degrees.clone();
        col_degrees.extend_from_slice(&other.col_degrees);
        let zero = Polynomial::zero(self.nvars);
        let mut columns = Vec::with_capacity(col_degrees.len());
        for c in &self.columns {
            let mut col = c.clone();
            col.extend(std::iter::repeat_n(zero.clone(), other.nrows()));
            columns.push(col);
        }
        for c in &other.columns {
            let mut col = vec![zero.clone(); self.nrows()];
            col.extend(c.iter().cloned());
            columns.push(col);
        }
        Matrix { nvars: self.nvars, row_degrees, col_degrees, columns }
    }

    /// `self ⊗ id` on `⊕ S(-b_k)`: rows/cols indexed by `(i, k) ↦ i*len(b) + k`.
    pub fn kron_identity(&self, degrees: &[i32]) -> Self {
        let r = degrees.len();
        let row_degrees: Vec<i32> =
            self.row_degrees.iter().flat_map(|a| degrees.iter().map(move |b| a + b)).collect();
        let col_degrees: Vec<i32> =
            self.col_degrees.iter().flat_map(|a| degrees.iter().map(move |b| a + b)).collect();
        let zero = Polynomial::zero(self.nvars);
        let mut columns = Vec::with_capacity(col_degrees.len());
        for col in &self.columns {
            for k in 0..r {
                let mut c = vec![zero.clone(); row_degrees.len()];
                for (i, p) in col.iter().enumerate() {
                    c[i * r + k] = p.clone();
                }
                columns.push(c);
            }
        }
        Matrix { nvars: self.nvars, row_degrees, col_degrees, columns }
    }

    /// `id ⊗ self` on `⊕ S(-a_i)`: rows/cols indexed by `(i, k) ↦ i*nrows + k`.
    pub fn identity_kron(&self, degrees: &[i32]) -> Self {
        let r = self.nrows();
        let row_degrees: Vec<i32> =
            degrees.iter().flat_map(|a| self.row_degrees.iter().map(move |b| a + b)).collect();
        let col_degrees: Vec<i32> =
            degrees.iter().flat_map(|a| self.col_degrees.iter().map(move |b| a + b)).collect();
        let zero = Polynomial::zero(self.nvars);
        let mut columns = Vec::with_capacity(col_degrees.len());
        for i in 0..degrees.len() {
            for col in &self.columns {
                let mut c = vec![zero.clone(); row_degrees.len()];
                for (k, p) in col.iter().enumerate() {
                    c[i * r + k] = p.clone();
                }
                columns.push(c);
            }
        }
        Matrix { nvars: self.nvars, row_degrees, col_degrees, columns }
    }

    /// Keep only the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix {
            nvars: self.nvars,
            row_degrees: self.row_degrees.clone(),
            col_degrees: idx.iter().map(|&j| self.col_degrees[j]).collect(),
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Keep the first `k` rows of every column (projection onto a summand).
    pub fn take_rows(&self, k: usize) -> Self {
        Matrix {
            nvars: self.nvars,
            row_degrees: self.row_degrees[..k].to_vec(),
            col_degrees: self.col_degrees.clone(),
            columns: self.columns.iter().map(|c| c[..k].to_vec()).collect(),
        }
    }

    /// Twist both sides by `s`: `S(-b) → S(-a)` becomes `S(-b-s) → S(-a-s)`.
    pub fn twist(&self, s: i32) -> Self {
        let mut m = self.clone();
        m.row_degrees.iter_mut().for_each(|d| *d += s);
        m.col_degrees.iter_mut().for_each(|d| *d += s);
        m
    }

    pub(crate) fn map_entries(&self, mut f: impl FnMut(&Polynomial<K>) -> Polynomial<K>) -> Self {
        Matrix {
            nvars: self.nvars,
            row_degrees: self.row_degrees.clone(),
            col_degrees: self.col_degrees.clone(),
            columns: self.columns.iter().map(|c| c.iter().map(&mut f).collect()).collect(),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let rows: Vec<String> = (0..self.nrows())
            .map(|i| {
                let entries: Vec<String> = self.columns.iter().map(|c| c[i].fmt_with(names)).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::F32003;

    fn v(i: usize) -> Polynomial<F32003> {
        Polynomial::var(2, i)
    }

    #[test]
    fn from_rows_infers_degrees() {
        let m = Matrix::from_rows(2, vec![0, 1], vec![vec![v(0), v(0).mul(&v(1))], vec![Polynomial::one(2), v(1)]])
            .unwrap();
        assert_eq!(m.col_degrees(), &[1, 2]);
        let bad = Matrix::from_rows(2, vec![0, 0], vec![vec![v(0)], vec![v(0).mul(&v(1))]]);
        assert!(matches!(bad, Err(Error::GradedViolation(_))));
    }

    #[test]
    fn transpose_and_product() {
        let m = Matrix::from_rows(2, vec![0], vec![vec![v(0), v(1)]]).unwrap();
        let t = m.transpose();
        assert_eq!(t.row_degrees(), &[-1, -1]);
        assert_eq!(t.col_degrees(), &[0]);
        let syz = Matrix::from_rows(2, vec![1, 1], vec![vec![v(1)], vec![v(0).neg()]]).unwrap();
        assert!(m.mul(&syz).unwrap().is_zero());
    }

    #[test]
    fn kron_shapes() {
        let m = Matrix::from_rows(2, vec![0], vec![vec![v(0), v(1)]]).unwrap();
        let k = m.kron_identity(&[0, 1]);
        assert_eq!((k.nrows(), k.ncols()), (2, 4));
        assert_eq!(k.col_degrees(), &[1, 2, 1, 2]);
        k.check_homogeneous().unwrap();
        let k2 = m.identity_kron(&[0, 5]);
        assert_eq!((k2.nrows(), k2.ncols()), (2, 4));
        k2.check_homogeneous().unwrap();
    }
}
