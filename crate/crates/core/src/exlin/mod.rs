//! Exact linear algebra over a [`Field`].
//!
//! Dense matrices are used for everything a user sees (maps, witnesses,
//! presentations). Large structured systems such as balancing relations and
//! intertwiner equations go through the sparse [`RowSpace`] instead; both
//! produce the same reduced row-echelon forms because RREF of a row space is
//! unique.

mod sparse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use sparse::{ReducedRows, RowSpace, SparseVec};
pub(crate) use sparse::{sparse_affine_solve, sparse_kernel, sparse_kernel_with_free};

use crate::error::{dim_err, Result};
use crate::scalar::Field;

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return dim_err(format!("row {i} has length {}, expected {cols}", row.len()));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Result<Self> {
        for (i, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return dim_err(format!("column {i} has length {}, expected {rows}", c.len()));
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn scale(&self, k: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * k.clone()).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
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
                        let idx = r * other.cols + c;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix width");
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    /// Kronecker product `self ⊗ other` with index `(i, j) ↦ i·n + j`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self.get(r / other.rows, c / other.cols).clone()
                * other.get(r % other.rows, c % other.cols).clone()
        })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return dim_err("hstack of matrices with different heights");
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }

    /// Reduced row-echelon form and the strictly increasing pivot columns.
    ///
    /// Pivots are chosen as the first nonzero entry scanning rows top to
    /// bottom within each column, columns left to right.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            let inv = m.get(lead, col).recip();
            for c in col..m.cols {
                let v = m.get(lead, c).clone() * inv.clone();
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(lead, c).clone();
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{v : self·v = 0}` with the canonical RREF basis.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<F>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect();
        Subspace::from_independent(self.cols, &vectors)
    }

    /// Some `x` with `self·x = b`, or `None` when `b` is outside the image.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return dim_err(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            ));
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Presentation of `F^rows / image(self)`.
    ///
    /// The quotient coordinates are the non-pivot columns of the RREF of the
    /// relations (the columns of `self`, read as rows).
    pub fn cokernel(&self) -> QuotientPresentation<F> {
        let (red, pivots) = self.transpose().rref();
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut projection = Self::zeros(free.len(), n);
        for (k, &f) in free.iter().enumerate() {
            projection.set(k, f, F::one());
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                let v = red.get(i, f);
                if !v.is_zero() {
                    projection.set(k, p, -v.clone());
                }
            }
        }
        let mut section = Self::zeros(n, free.len());
        for (k, &f) in free.iter().enumerate() {
            section.set(f, k, F::one());
        }
        QuotientPresentation {
            ambient_dim: n,
            projection,
            section,
        }
    }

    /// Two-sided inverse, or `None` for a singular matrix.
    pub fn invert(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return dim_err(format!("cannot invert a {}x{} matrix", self.rows, self.cols));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n))?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(Self::from_fn(n, n, |r, c| red.get(r, n + c).clone())))
    }

    pub fn to_sparse_rows(&self) -> Vec<SparseVec<F>> {
        (0..self.rows).map(|r| SparseVec::from_dense(self.row(r))).collect()
    }
}

pub(crate) fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;

    fn mul(self, rhs: Self) -> Matrix<F> {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;

    fn add(self, rhs: Self) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;

    fn sub(self, rhs: Self) -> Matrix<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;

    fn neg(self) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

/// A linear subspace of `F^ambient_dim`, stored as independent basis columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient_dim: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    pub(crate) fn from_independent(ambient_dim: usize, vectors: &[Vec<F>]) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::from_columns(ambient_dim, vectors).expect("basis vector lengths"),
        }
    }

    /// Span of arbitrary vectors; a basis is extracted in RREF form.
    pub fn span(ambient_dim: usize, vectors: &[Vec<F>]) -> Result<Self> {
        let mut rs = RowSpace::new(ambient_dim);
        for v in vectors {
            if v.len() != ambient_dim {
                return dim_err("spanning vector has the wrong length");
            }
            rs.insert(SparseVec::from_dense(v));
        }
        let basis: Vec<Vec<F>> = rs
            .into_rref()
            .rows()
            .iter()
            .map(|(_, r)| r.to_dense(ambient_dim))
            .collect();
        Ok(Self::from_independent(ambient_dim, &basis))
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: Matrix::identity(n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.basis.solve(v).map(|s| s.is_some()).unwrap_or(false)
    }

    /// Same subspace, regardless of chosen basis.
    pub fn same_as(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && other.basis_vectors().iter().all(|v| self.contains(v))
    }
}

/// A quotient `F^ambient_dim → F^q` with a chosen linear section.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientPresentation<F> {
    ambient_dim: usize,
    projection: Matrix<F>,
    section: Matrix<F>,
}

impl<F: Field> QuotientPresentation<F> {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn projection(&self) -> &Matrix<F> {
        &self.projection
    }

    pub fn section(&self) -> &Matrix<F> {
        &self.section
    }

    pub fn project(&self, v: &[F]) -> Vec<F> {
        self.projection.mul_vec(v)
    }
}
