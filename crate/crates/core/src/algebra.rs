//! Finite-dimensional unital associative algebras given by structure
//! constants, and their classical invariants.

use std::sync::Arc;

use crate::error::{dim_err, input_err, Error, Result};
use crate::exlin::{
    sparse_affine_solve, sparse_kernel, Matrix, QuotientPresentation, RowSpace, SparseVec, Subspace,
};
use crate::scalar::Field;

/// A unital associative algebra with a fixed ordered basis `e_0 … e_{d-1}`.
///
/// Products of basis elements are stored sparsely: `product(i, j)` holds the
/// coordinates of `e_i · e_j`. The algebra also carries a list of
/// generators (elements that generate it as a unital algebra); module
/// axioms only need checking against these.
#[derive(Clone, Debug)]
pub struct Algebra<F> {
    dim: usize,
    products: Vec<SparseVec<F>>,
    unit: Vec<F>,
    generators: Vec<SparseVec<F>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.unit == other.unit && self.products == other.products
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug)]
pub struct AlgebraElement<F> {
    pub algebra: Arc<Algebra<F>>,
    pub coords: Vec<F>,
}

impl<F: Field> PartialEq for AlgebraElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && *self.algebra == *other.algebra
    }
}

impl<F: Field> Algebra<F> {
    /// Builds an algebra from a dense structure tensor, `structure[(i·d + j)·d + k]`
    /// being the coefficient of `e_k` in `e_i · e_j`.
    pub fn new(dim: usize, structure: &[F], unit: Vec<F>) -> Result<Self> {
        if structure.len() != dim * dim * dim {
            return dim_err(format!(
                "structure tensor has {} entries, expected {}",
                structure.len(),
                dim * dim * dim
            ));
        }
        let products = (0..dim * dim)
            .map(|ij| SparseVec::from_dense(&structure[ij * dim..(ij + 1) * dim]))
            .collect();
        Self::from_products(dim, products, unit)
    }

    /// Builds an algebra from the sparse products `e_i · e_j`, indexed `i·d + j`.
    pub fn from_products(dim: usize, products: Vec<SparseVec<F>>, unit: Vec<F>) -> Result<Self> {
        if products.len() != dim * dim {
            return dim_err(format!("expected {} products, got {}", dim * dim, products.len()));
        }
        if unit.len() != dim {
            return dim_err(format!("unit has length {}, expected {dim}", unit.len()));
        }
        if products.iter().any(|p| p.entries().last().is_some_and(|(k, _)| *k >= dim)) {
            return dim_err("product coordinate out of range");
        }
        let mut a = Self {
            dim,
            products,
            unit,
            generators: Vec::new(),
        };
        a.validate()?;
        a.generators = a.greedy_generators();
        Ok(a)
    }

    pub(crate) fn from_trusted(
        dim: usize,
        products: Vec<SparseVec<F>>,
        unit: Vec<F>,
        generators: Vec<SparseVec<F>>,
    ) -> Self {
        Self {
            dim,
            products,
            unit,
            generators,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        let unit = SparseVec::from_dense(&self.unit);
        for i in 0..d {
            let e = SparseVec::unit(i);
            if self.mul_sparse(&unit, &e) != e || self.mul_sparse(&e, &unit) != e {
                return Err(Error::Validation(format!("unit fails to act trivially on e{i}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = &self.products[i * d + j];
                for l in 0..d {
                    let lhs = self.mul_sparse(ij, &SparseVec::unit(l));
                    let rhs = self.mul_sparse(&SparseVec::unit(i), &self.products[j * d + l]);
                    if lhs != rhs {
                        return Err(Error::Validation(format!(
                            "associativity fails on basis triple (e{i}, e{j}, e{l})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis elements chosen left to right whenever they are not already in
    /// the subalgebra generated by the earlier choices.
    fn greedy_generators(&self) -> Vec<SparseVec<F>> {
        let mut gens = Vec::new();
        let mut span = self.generated_subalgebra(&gens);
        for i in 0..self.dim {
            let e = SparseVec::unit(i);
            if !span.contains(&e) {
                gens.push(e);
                span = self.generated_subalgebra(&gens);
            }
        }
        gens
    }

    fn generated_subalgebra(&self, gens: &[SparseVec<F>]) -> RowSpace<F> {
        let mut span = RowSpace::new(self.dim);
        let unit = SparseVec::from_dense(&self.unit);
        span.insert(unit.clone());
        let mut queue = vec![unit];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = self.mul_sparse(&x, g);
                if span.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        span
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[F] {
        &self.unit
    }

    pub fn unit_sparse(&self) -> SparseVec<F> {
        SparseVec::from_dense(&self.unit)
    }

    /// Coordinates of `e_i · e_j`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.products[i * self.dim + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> F {
        self.product(i, j).get(k)
    }

    /// Dense structure tensor in the layout accepted by [`Algebra::new`].
    pub fn structure_tensor(&self) -> Vec<F> {
        self.products.iter().flat_map(|p| p.to_dense(self.dim)).collect()
    }

    /// Elements generating the algebra together with its unit.
    pub fn generators(&self) -> &[SparseVec<F>] {
        &self.generators
    }

    pub fn mul_sparse(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.axpy(&(a.clone() * b.clone()), &self.products[i * self.dim + j]);
            }
        }
        out
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Result<Vec<F>> {
        if x.len() != self.dim || y.len() != self.dim {
            return dim_err("algebra element has the wrong length");
        }
        Ok(self
            .mul_sparse(&SparseVec::from_dense(x), &SparseVec::from_dense(y))
            .to_dense(self.dim))
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mul_matrix(&self, x: &SparseVec<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim)
            .map(|j| self.mul_sparse(x, &SparseVec::unit(j)).to_dense(self.dim))
            .collect();
        Matrix::from_columns(self.dim, &cols).expect("square")
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mul_matrix(&self, x: &SparseVec<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim)
            .map(|j| self.mul_sparse(&SparseVec::unit(j), x).to_dense(self.dim))
            .collect();
        Matrix::from_columns(self.dim, &cols).expect("square")
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (i + 1..d).all(|j| self.products[i * d + j] == self.products[j * d + i]))
    }

    pub fn opposite(&self) -> Self {
        let d = self.dim;
        let products = (0..d * d).map(|ij| self.products[(ij % d) * d + ij / d].clone()).collect();
        Self::from_trusted(d, products, self.unit.clone(), self.generators.clone())
    }

    /// `self ⊗ other`, with `e_i ⊗ f_j` at index `i·dim(other) + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut products = Vec::with_capacity(d * d);
        for i in 0..da {
            for j in 0..db {
                for k in 0..da {
                    for l in 0..db {
                        products.push(kron(&self.products[i * da + k], &other.products[j * db + l], db));
                    }
                }
            }
        }
        let unit = kron_dense(&self.unit, &other.unit);
        let ua = self.unit_sparse();
        let ub = other.unit_sparse();
        let generators = self
            .generators
            .iter()
            .map(|g| kron(g, &ub, db))
            .chain(other.generators.iter().map(|h| kron(&ua, h, db)))
            .collect();
        Self::from_trusted(d, products, unit, generators)
    }

    /// The center `{z : z·e_i = e_i·z for all i}`.
    pub fn center(&self) -> Subspace<F> {
        let d = self.dim;
        // Row (i, k), column m: k-th coordinate of e_m e_i − e_i e_m.
        let mut eqs = Vec::with_capacity(d * d);
        for i in 0..d {
            let cols: Vec<SparseVec<F>> =
                (0..d).map(|m| self.product(m, i).sub(self.product(i, m))).collect();
            let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); d];
            for (m, c) in cols.iter().enumerate() {
                for (k, x) in c.iter() {
                    rows[k].push((m, x.clone()));
                }
            }
            eqs.extend(rows.into_iter().map(SparseVec::from_entries));
        }
        let basis: Vec<Vec<F>> = sparse_kernel(d, eqs).iter().map(|v| v.to_dense(d)).collect();
        Subspace::span(d, &basis).expect("kernel vectors have the ambient length")
    }

    /// Commutator quotient `A/[A,A]`.
    pub fn hh0(&self) -> QuotientPresentation<F> {
        let d = self.dim;
        let mut cols = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                cols.push(self.product(i, j).sub(self.product(j, i)).to_dense(d));
            }
        }
        Matrix::from_columns(d, &cols).expect("columns have length d").cokernel()
    }

    /// A separability idempotent `e ∈ A ⊗ A^op` (index `i·d + j` for `e_i ⊗ e_j`)
    /// with `(x⊗1)e = (1⊗x)e` for all `x` and `μ(e) = 1`, if one exists.
    pub fn separability_idempotent(&self) -> Option<AlgebraElement<F>> {
        let d = self.dim;
        let env = Arc::new(self.tensor(&self.opposite()));
        let n = d * d;
        let mut eqs: Vec<SparseVec<F>> = Vec::new();
        let unit = self.unit_sparse();
        for x in 0..d {
            let ex = SparseVec::unit(x);
            let left = kron(&ex, &unit, d);
            let right = kron(&unit, &ex, d);
            // Column c is (left − right)·e_c.
            let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
            for c in 0..n {
                let ec = SparseVec::unit(c);
                let v = env.mul_sparse(&left, &ec).sub(&env.mul_sparse(&right, &ec));
                for (k, y) in v.iter() {
                    rows[k].push((c, y.clone()));
                }
            }
            eqs.extend(rows.into_iter().map(SparseVec::from_entries));
        }
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); d];
        for i in 0..d {
            for j in 0..d {
                for (k, y) in self.product(i, j).iter() {
                    rows[k].push((i * d + j, y.clone()));
                }
            }
        }
        for (k, mut r) in rows.into_iter().enumerate() {
            r.push((n, self.unit[k].clone()));
            eqs.push(SparseVec::from_entries(r));
        }
        let (x, _) = sparse_affine_solve(n, eqs)?;
        Some(AlgebraElement {
            algebra: env,
            coords: x,
        })
    }

    /// Checks the two defining identities of a separability idempotent.
    pub fn is_separability_idempotent(&self, e: &[F]) -> bool {
        let d = self.dim;
        if e.len() != d * d {
            return false;
        }
        let env = self.tensor(&self.opposite());
        let e = SparseVec::from_dense(e);
        let unit = self.unit_sparse();
        let balanced = (0..d).all(|x| {
            let ex = SparseVec::unit(x);
            env.mul_sparse(&kron(&ex, &unit, d), &e) == env.mul_sparse(&kron(&unit, &ex, d), &e)
        });
        let mut mu = SparseVec::zero();
        for (c, y) in e.iter() {
            mu.axpy(y, self.product(c / d, c % d));
        }
        balanced && mu.to_dense(d) == self.unit
    }

    /// Whether `p` (coordinates in `self` ↦ coordinates in `target`) is an
    /// algebra isomorphism.
    pub fn is_isomorphism(&self, p: &Matrix<F>, target: &Self) -> bool {
        let d = self.dim;
        if p.rows() != target.dim || p.cols() != d || target.dim != d || p.rank() != d {
            return false;
        }
        if p.mul_vec(&self.unit) != target.unit {
            return false;
        }
        let images: Vec<SparseVec<F>> = (0..d).map(|i| SparseVec::from_dense(&p.column(i))).collect();
        (0..d).all(|i| {
            (0..d).all(|j| {
                let lhs = p.mul_vec(&self.product(i, j).to_dense(d));
                target.mul_sparse(&images[i], &images[j]).to_dense(d) == lhs
            })
        })
    }

    /// The algebra structure carried over along the invertible matrix `p`, so
    /// that `p` becomes an isomorphism from `self` to the result.
    pub fn transport(&self, p: &Matrix<F>) -> Result<Self> {
        let d = self.dim;
        if p.rows() != d || p.cols() != d {
            return dim_err("transport matrix must be square of the algebra dimension");
        }
        let Some(pinv) = p.invert()? else {
            return input_err("transport matrix is singular");
        };
        let pre: Vec<SparseVec<F>> = (0..d).map(|i| SparseVec::from_dense(&pinv.column(i))).collect();
        let mut products = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul_sparse(&pre[i], &pre[j]).to_dense(d);
                products.push(SparseVec::from_dense(&p.mul_vec(&prod)));
            }
        }
        Self::from_products(d, products, p.mul_vec(&self.unit))
    }
}

pub(crate) fn kron<F: Field>(x: &SparseVec<F>, y: &SparseVec<F>, ny: usize) -> SparseVec<F> {
    let mut entries = Vec::with_capacity(x.nnz() * y.nnz());
    for (i, a) in x.iter() {
        for (j, b) in y.iter() {
            entries.push((i * ny + j, a.clone() * b.clone()));
        }
    }
    // Already sorted and free of zeros.
    SparseVec::from_entries(entries)
}

pub(crate) fn kron_dense<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().flat_map(|a| y.iter().map(move |b| a.clone() * b.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::{q, Rational};

    fn r(n: i64) -> Rational {
        q(n, 1)
    }

    #[test]
    fn scalars_and_matrix_units_validate() {
        assert_eq!(corpus::scalars::<Rational>().dim(), 1);
        let m2 = corpus::matrix_algebra::<Rational>(2);
        assert_eq!(m2.dim(), 4);
        assert_eq!(m2.unit(), &[r(1), r(0), r(0), r(1)]);
    }

    #[test]
    fn unit_violations_are_rejected() {
        // e0 unit, e1 idempotent.
        let mut s = vec![r(0); 8];
        s[0] = r(1); // e0 e0 = e0
        s[3] = r(1); // e0 e1 = e1
        s[5] = r(1); // e1 e0 = e1
        s[7] = r(1); // e1 e1 = e1
        assert!(Algebra::new(2, &s, vec![r(1), r(0)]).is_ok());
        // With e0 e0 = e1 neither basis vector is a unit.
        let mut t = s.clone();
        t[0] = r(0);
        t[1] = r(1);
        let err = Algebra::new(2, &t, vec![r(1), r(0)]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let u = Algebra::new(2, &t, vec![r(0), r(1)]).unwrap_err();
        assert!(matches!(u, Error::Validation(_)));
    }

    #[test]
    fn associativity_error_names_triple() {
        // Unit e0; e1 e1 = e2, e1 e2 = 0, e2 e1 = e1 is not associative.
        let d = 3;
        let mut s = vec![r(0); 27];
        let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
        for i in 0..3 {
            s[idx(0, i, i)] = r(1);
            s[idx(i, 0, i)] = r(1);
        }
        s[idx(1, 1, 2)] = r(1);
        s[idx(2, 1, 1)] = r(1);
        let err = Algebra::new(3, &s, vec![r(1), r(0), r(0)]).unwrap_err();
        assert!(err.to_string().contains("associativity fails on basis triple"));
    }

    #[test]
    fn opposite_is_an_involution() {
        for (_, a) in corpus::standard_algebras::<Rational>() {
            assert_eq!(a.opposite().opposite(), a);
            if a.is_commutative() {
                assert_eq!(a.opposite(), a);
            }
        }
    }

    #[test]
    fn opposite_of_upper_triangular_is_lower() {
        // Basis e11, e12, e22: in T2 e11·e12 = e12; in the opposite e12·e11 = e12.
        let t2 = corpus::upper_triangular::<Rational>();
        let op = t2.opposite();
        assert_eq!(op.product(1, 0), &SparseVec::unit(1));
        assert!(op.product(0, 1).is_zero());
    }

    #[test]
    fn tensor_with_scalars_is_identity() {
        let qq = corpus::scalars::<Rational>();
        for (_, a) in corpus::standard_algebras::<Rational>() {
            assert_eq!(qq.tensor(&a), a);
            assert_eq!(a.tensor(&qq), a);
        }
    }

    #[test]
    fn tensor_is_associative_and_symmetric() {
        let m2 = corpus::matrix_algebra::<Rational>(2);
        let c2 = corpus::group_algebra::<Rational>(2);
        let m4 = m2.tensor(&m2);
        assert_eq!(m4.dim(), 16);
        assert_eq!(m4.unit(), &kron_dense(m2.unit(), m2.unit())[..]);
        assert_eq!(m2.tensor(&c2).tensor(&m2), m2.tensor(&c2.tensor(&m2)));
        let ab = m2.tensor(&c2);
        let ba = c2.tensor(&m2);
        let swap = Matrix::from_fn(8, 8, |r, c| {
            let (i, j) = (c / 2, c % 2);
            if r == j * 4 + i {
                q(1, 1)
            } else {
                q(0, 1)
            }
        });
        assert!(ab.is_isomorphism(&swap, &ba));
    }

    #[test]
    fn center_examples() {
        assert_eq!(corpus::matrix_algebra::<Rational>(2).center().dim(), 1);
        let z = corpus::upper_triangular::<Rational>().center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&[r(1), r(0), r(1)]));
        for (_, a) in corpus::standard_algebras::<Rational>() {
            assert!(a.center().same_as(&a.opposite().center()));
            if a.is_commutative() {
                assert_eq!(a.center().dim(), a.dim());
            }
        }
    }

    #[test]
    fn hh0_examples() {
        assert_eq!(corpus::matrix_algebra::<Rational>(2).hh0().dim(), 1);
        assert_eq!(corpus::upper_triangular::<Rational>().hh0().dim(), 2);
        assert_eq!(corpus::dual_numbers::<Rational>().hh0().dim(), 2);
    }

    #[test]
    fn separability_examples() {
        let e = corpus::scalars::<Rational>().separability_idempotent().unwrap();
        assert_eq!(e.coords, vec![r(1)]);
        let c2 = corpus::group_algebra::<Rational>(2);
        let e = c2.separability_idempotent().unwrap();
        assert!(c2.is_separability_idempotent(&e.coords));
        assert!(c2.is_separability_idempotent(&[q(1, 2), r(0), r(0), q(1, 2)]));
        assert!(corpus::dual_numbers::<Rational>().separability_idempotent().is_none());
        assert!(corpus::upper_triangular::<Rational>().separability_idempotent().is_none());
        let m2 = corpus::matrix_algebra::<Rational>(2);
        assert!(m2.is_separability_idempotent(&m2.separability_idempotent().unwrap().coords));
    }

    #[test]
    fn commutativity_examples() {
        assert!(corpus::dual_numbers::<Rational>().is_commutative());
        assert!(corpus::group_algebra::<Rational>(2).is_commutative());
        assert!(!corpus::matrix_algebra::<Rational>(2).is_commutative());
    }

    #[test]
    fn generators_generate() {
        for (_, a) in corpus::standard_algebras::<Rational>() {
            let span = a.generated_subalgebra(a.generators());
            assert_eq!(span.rank(), a.dim());
            let t = a.tensor(&a.opposite());
            assert_eq!(t.generated_subalgebra(t.generators()).rank(), t.dim());
        }
    }

    #[test]
    fn transport_gives_isomorphic_algebra() {
        let c3 = corpus::group_algebra::<Rational>(3);
        let p = Matrix::from_rows(3, vec![vec![r(1), r(1), r(0)], vec![r(0), r(1), r(2)], vec![r(0), r(0), r(1)]])
            .unwrap();
        let b = c3.transport(&p).unwrap();
        assert!(c3.is_isomorphism(&p, &b));
        assert!(!c3.is_isomorphism(&Matrix::identity(3), &b));
    }
}
