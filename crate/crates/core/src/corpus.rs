//! Small algebras and bimodules used as a standard test corpus.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimod::Bimodule;
use crate::exlin::SparseVec;
use crate::scalar::Field;

fn build<F: Field>(dim: usize, product: impl Fn(usize, usize) -> SparseVec<F>, unit: Vec<F>) -> Algebra<F> {
    let products = (0..dim * dim).map(|ij| product(ij / dim, ij % dim)).collect();
    Algebra::from_products(dim, products, unit).expect("corpus algebra is valid")
}

/// The ground field as a one-dimensional algebra.
pub fn scalars<F: Field>() -> Algebra<F> {
    build(1, |_, _| SparseVec::unit(0), vec![F::one()])
}

/// The group algebra of the cyclic group of order `n`, basis `g^0 … g^{n-1}`.
pub fn group_algebra<F: Field>(n: usize) -> Algebra<F> {
    let mut unit = vec![F::zero(); n];
    unit[0] = F::one();
    build(n, |i, j| SparseVec::unit((i + j) % n), unit)
}

/// `F[x]/(x^n)`, basis `1, x, …, x^{n-1}`.
pub fn truncated_polynomial<F: Field>(n: usize) -> Algebra<F> {
    let mut unit = vec![F::zero(); n];
    unit[0] = F::one();
    build(
        n,
        |i, j| if i + j < n { SparseVec::unit(i + j) } else { SparseVec::zero() },
        unit,
    )
}

/// `F[x]/(x²)`.
pub fn dual_numbers<F: Field>() -> Algebra<F> {
    truncated_polynomial(2)
}

/// `n × n` matrices, basis `E_ij` at index `i·n + j`.
pub fn matrix_algebra<F: Field>(n: usize) -> Algebra<F> {
    let unit = (0..n * n).map(|k| if k / n == k % n { F::one() } else { F::zero() }).collect();
    build(
        n * n,
        |a, b| {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            if j == k {
                SparseVec::unit(i * n + l)
            } else {
                SparseVec::zero()
            }
        },
        unit,
    )
}

/// Upper-triangular `2 × 2` matrices, basis `E11, E12, E22`.
pub fn upper_triangular<F: Field>() -> Algebra<F> {
    let entries = [(0, 0), (0, 1), (1, 1)];
    build(
        3,
        |a, b| {
            let ((i, j), (k, l)) = (entries[a], entries[b]);
            if j == k {
                SparseVec::unit(entries.iter().position(|&e| e == (i, l)).unwrap())
            } else {
                SparseVec::zero()
            }
        },
        vec![F::one(), F::zero(), F::one()],
    )
}

/// The seven standard algebras, in a fixed order.
pub fn standard_algebras<F: Field>() -> Vec<(String, Algebra<F>)> {
    vec![
        ("Q".into(), scalars()),
        ("Q[C2]".into(), group_algebra(2)),
        ("Q[C3]".into(), group_algebra(3)),
        ("Q[x]/(x^2)".into(), dual_numbers()),
        ("T2(Q)".into(), upper_triangular()),
        ("M2(Q)".into(), matrix_algebra(2)),
        ("M2(Q)⊗Q[C2]".into(), matrix_algebra(2).tensor(&group_algebra(2))),
    ]
}

/// `F^n` as column vectors over `(M_n, F)`, pointed by the first basis vector.
pub fn column_vectors<F: Field>(n: usize) -> Bimodule<F> {
    let mat = Arc::new(matrix_algebra::<F>(n));
    let k = Arc::new(scalars::<F>());
    let left = (0..n * n)
        .map(|a| {
            let (i, j) = (a / n, a % n);
            (0..n).map(|m| if m == j { SparseVec::unit(i) } else { SparseVec::zero() }).collect()
        })
        .collect();
    let right = vec![(0..n).map(SparseVec::unit).collect()];
    Bimodule::from_actions(mat, k, n, left, right, Some(first_vector(n))).expect("column vectors are valid")
}

/// `F^n` as row vectors over `(F, M_n)`, pointed by the first basis vector.
pub fn row_vectors<F: Field>(n: usize) -> Bimodule<F> {
    let mat = Arc::new(matrix_algebra::<F>(n));
    let k = Arc::new(scalars::<F>());
    let left = vec![(0..n).map(SparseVec::unit).collect()];
    let right = (0..n * n)
        .map(|b| {
            let (i, j) = (b / n, b % n);
            (0..n).map(|m| if m == i { SparseVec::unit(j) } else { SparseVec::zero() }).collect()
        })
        .collect();
    Bimodule::from_actions(k, mat, n, left, right, Some(first_vector(n))).expect("row vectors are valid")
}

fn first_vector<F: Field>(n: usize) -> Vec<F> {
    (0..n).map(|i| if i == 0 { F::one() } else { F::zero() }).collect()
}

/// `F` over `(F[x]/(x²), F)` with `x` acting by zero, pointed by `1`.
pub fn nilpotent_point<F: Field>() -> Bimodule<F> {
    let a = Arc::new(dual_numbers::<F>());
    let k = Arc::new(scalars::<F>());
    let left = vec![vec![SparseVec::unit(0)], vec![SparseVec::zero()]];
    let right = vec![vec![SparseVec::unit(0)]];
    Bimodule::from_actions(a, k, 1, left, right, Some(vec![F::one()])).expect("point module is valid")
}

/// `F` over `(F, F[x]/(x²))` with `x` acting by zero, pointed by `1`.
pub fn nilpotent_point_right<F: Field>() -> Bimodule<F> {
    let a = Arc::new(dual_numbers::<F>());
    let k = Arc::new(scalars::<F>());
    let left = vec![vec![SparseVec::unit(0)]];
    let right = vec![vec![SparseVec::unit(0)], vec![SparseVec::zero()]];
    Bimodule::from_actions(k, a, 1, left, right, Some(vec![F::one()])).expect("point module is valid")
}

/// `F[C3]` as a bimodule over itself with the right action twisted by the
/// automorphism `g ↦ g²`.
pub fn twisted_cyclic<F: Field>() -> Bimodule<F> {
    let a = Arc::new(group_algebra::<F>(3));
    let id = crate::exlin::Matrix::identity(3);
    let sigma = crate::exlin::Matrix::from_fn(3, 3, |r, c| if r == (2 * c) % 3 { F::one() } else { F::zero() });
    Bimodule::restricted_regular(&a, &a, &id, &a, &sigma).expect("automorphism twist is valid")
}

/// Regular bimodules of every standard algebra together with a handful of
/// non-regular ones.
pub fn standard_bimodules<F: Field>() -> Vec<(String, Bimodule<F>)> {
    let mut out: Vec<(String, Bimodule<F>)> = standard_algebras::<F>()
        .into_iter()
        .map(|(name, a)| (format!("reg {name}"), Bimodule::regular(&Arc::new(a))))
        .collect();
    out.push(("columns Q^2".into(), column_vectors(2)));
    out.push(("rows Q^2".into(), row_vectors(2)));
    out.push(("point over Q[x]/(x^2)".into(), nilpotent_point()));
    out.push(("point under Q[x]/(x^2)".into(), nilpotent_point_right()));
    out.push(("twisted Q[C3]".into(), twisted_cyclic()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn corpus_builds() {
        let algs = standard_algebras::<Rational>();
        assert_eq!(
            algs.iter().map(|(_, a)| a.dim()).collect::<Vec<_>>(),
            vec![1, 2, 3, 2, 3, 4, 8]
        );
        for (_, m) in standard_bimodules::<Rational>() {
            m.validate().unwrap();
        }
    }
}
