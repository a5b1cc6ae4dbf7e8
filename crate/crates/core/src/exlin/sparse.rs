use std::collections::BTreeMap;

use crate::scalar::Field;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        Self {
            entries: vec![(i, F::one())],
        }
    }

    pub fn single(i: usize, value: F) -> Self {
        if value.is_zero() {
            Self::zero()
        } else {
            Self {
                entries: vec![(i, value)],
            }
        }
    }

    pub fn from_dense(v: &[F]) -> Self {
        Self {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    /// Accepts entries in any order, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, F)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, F)> = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y = y.clone() + x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        Self { entries: out }
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> F {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, x.clone() * k.clone()))
                .collect(),
        }
    }

    /// `self += k · other`.
    pub fn axpy(&mut self, k: &F, other: &Self) {
        if k.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, y.clone() * k.clone()));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y.clone() * k.clone();
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, y.clone() * k.clone()));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.axpy(&F::one(), other);
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.axpy(&-F::one(), other);
        s
    }

    pub fn dot_dense(&self, v: &[F]) -> F {
        let mut acc = F::zero();
        for (i, x) in &self.entries {
            if !v[*i].is_zero() {
                acc = acc + x.clone() * v[*i].clone();
            }
        }
        acc
    }

    /// Reindexes every entry through `f`.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(self.entries.iter().map(|(i, x)| (f(*i), x.clone())).collect())
    }
}

/// Incrementally maintained row space in echelon form.
///
/// Rows are keyed by pivot column and normalised so the pivot entry is one.
/// [`RowSpace::into_rref`] finishes the back-substitution, giving the
/// unique reduced row-echelon basis of the span.
#[derive(Clone, Debug)]
pub struct RowSpace<F> {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_with(rows: &BTreeMap<usize, SparseVec<F>>, mut v: SparseVec<F>) -> SparseVec<F> {
        let mut pos = 0;
        while pos < v.entries.len() {
            let col = v.entries[pos].0;
            match rows.get(&col) {
                Some(row) => {
                    let c = -v.entries[pos].1.clone();
                    // Row support starts at `col`, so entries before `pos` are untouched
                    // and the entry at `col` cancels exactly.
                    v.axpy(&c, row);
                }
                None => pos += 1,
            }
        }
        v
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        Self::reduce_with(&self.rows, v)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        debug_assert!(v.entries.last().is_none_or(|(i, _)| *i < self.ncols));
        let r = self.reduce(v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let inv = lead.recip();
        let r = r.scale(&inv);
        self.rows.insert(p, r);
        true
    }

    pub fn into_rref(self) -> ReducedRows<F> {
        let mut done: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for (p, row) in self.rows.into_iter().rev() {
            let reduced = Self::reduce_with(&done, row);
            debug_assert_eq!(reduced.leading().map(|(i, _)| i), Some(p));
            done.insert(p, reduced);
        }
        ReducedRows::new(self.ncols, done.into_iter().collect())
    }
}

/// The reduced row-echelon basis of a row space, with lookup tables for
/// kernels and quotients.
#[derive(Clone, Debug)]
pub struct ReducedRows<F> {
    ncols: usize,
    rows: Vec<(usize, SparseVec<F>)>,
    /// For each column, its position among the free (non-pivot) columns.
    free_index: Vec<Option<usize>>,
    /// For each column, the row it is pivot of.
    pivot_row: Vec<Option<usize>>,
    free: Vec<usize>,
}

impl<F: Field> ReducedRows<F> {
    fn new(ncols: usize, rows: Vec<(usize, SparseVec<F>)>) -> Self {
        let mut pivot_row = vec![None; ncols];
        for (k, (p, _)) in rows.iter().enumerate() {
            pivot_row[*p] = Some(k);
        }
        let mut free_index = vec![None; ncols];
        let mut free = Vec::new();
        for c in 0..ncols {
            if pivot_row[c].is_none() {
                free_index[c] = Some(free.len());
                free.push(c);
            }
        }
        Self {
            ncols,
            rows,
            free_index,
            pivot_row,
            free,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[(usize, SparseVec<F>)] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Basis of `{x : row·x = 0 for every row}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        self.kernel_basis_within(self.ncols)
    }

    /// Kernel basis restricted to the first `n` columns, treating columns
    /// `≥ n` as a right-hand side that is not a variable.
    pub(crate) fn kernel_basis_within(&self, n: usize) -> Vec<SparseVec<F>> {
        let mut out: Vec<Vec<(usize, F)>> = Vec::new();
        let mut slot = vec![usize::MAX; self.ncols];
        for &f in self.free.iter().filter(|&&f| f < n) {
            slot[f] = out.len();
            out.push(vec![(f, F::one())]);
        }
        for (p, row) in &self.rows {
            for (c, x) in row.iter() {
                if c != *p && c < n && slot[c] != usize::MAX {
                    out[slot[c]].push((*p, -x.clone()));
                }
            }
        }
        out.into_iter().map(SparseVec::from_entries).collect()
    }

    /// Coordinates in the quotient `F^ncols / rowspace`, using the free
    /// columns as the quotient basis.
    pub fn project(&self, v: &SparseVec<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.free.len()];
        for (c, x) in v.iter() {
            if let Some(k) = self.free_index[c] {
                out[k] = out[k].clone() + x.clone();
            } else {
                let row = &self.rows[self.pivot_row[c].unwrap()].1;
                for (d, y) in row.iter() {
                    if let Some(k) = self.free_index[d] {
                        out[k] = out[k].clone() - x.clone() * y.clone();
                    }
                }
            }
        }
        out
    }

    /// Treating column `n = ncols - 1` as the right-hand side, a particular
    /// solution with free variables zero, or `None` when inconsistent.
    pub(crate) fn particular_solution(&self) -> Option<Vec<F>> {
        let n = self.ncols - 1;
        if self.is_pivot(n) {
            return None;
        }
        let mut x = vec![F::zero(); n];
        for (p, row) in &self.rows {
            x[*p] = row.get(n);
        }
        Some(x)
    }
}

/// Kernel of a system given by sparse equation rows over `n` unknowns.
pub(crate) fn sparse_kernel<F: Field>(
    n: usize,
    equations: impl IntoIterator<Item = SparseVec<F>>,
) -> Vec<SparseVec<F>> {
    let mut rs = RowSpace::new(n);
    for e in equations {
        rs.insert(e);
    }
    rs.into_rref().kernel_basis()
}

/// Kernel basis together with the free column each basis vector is pinned
/// to: vector `k` has a one at `free[k]` and zeros at every other free
/// column, so the coordinates of a kernel element are its free entries.
pub(crate) fn sparse_kernel_with_free<F: Field>(
    n: usize,
    equations: impl IntoIterator<Item = SparseVec<F>>,
) -> (Vec<SparseVec<F>>, Vec<usize>) {
    let mut rs = RowSpace::new(n);
    for e in equations {
        rs.insert(e);
    }
    let red = rs.into_rref();
    let free = red.free_columns().to_vec();
    (red.kernel_basis(), free)
}

/// Solutions of `Σ row_i x_i = row_n` (right-hand side stored at index `n`):
/// a particular solution and a basis of the homogeneous solutions.
pub(crate) fn sparse_affine_solve<F: Field>(
    n: usize,
    equations: impl IntoIterator<Item = SparseVec<F>>,
) -> Option<(Vec<F>, Vec<SparseVec<F>>)> {
    let mut rs = RowSpace::new(n + 1);
    for e in equations {
        rs.insert(e);
    }
    let red = rs.into_rref();
    let x = red.particular_solution()?;
    Some((x, red.kernel_basis_within(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exlin::Matrix;
    use crate::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Matrix<Rational>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                Matrix::new(r, c, v.into_iter().map(|x| Rational::from_integer(x.into())).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn sparse_rref_matches_dense(m in small_matrix()) {
            let (dense, pivots) = m.rref();
            let mut rs = RowSpace::new(m.cols());
            for r in m.to_sparse_rows() {
                rs.insert(r);
            }
            let red = rs.into_rref();
            prop_assert_eq!(red.pivots(), pivots.clone());
            for (k, (_, row)) in red.rows().iter().enumerate() {
                prop_assert_eq!(&row.to_dense(m.cols())[..], dense.row(k));
            }
        }

        #[test]
        fn sparse_kernel_vectors_are_annihilated(m in small_matrix()) {
            let ker = sparse_kernel(m.cols(), m.to_sparse_rows());
            prop_assert_eq!(ker.len() + m.rank(), m.cols());
            for v in ker {
                prop_assert!(m.mul_vec(&v.to_dense(m.cols())).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn axpy_cancels_exactly() {
        let a = SparseVec::from_dense(&[Rational::from_integer(1.into()), Rational::from_integer(2.into())]);
        let mut b = a.clone();
        b.axpy(&-Rational::from_integer(1.into()), &a);
        assert!(b.is_zero());
    }
}
