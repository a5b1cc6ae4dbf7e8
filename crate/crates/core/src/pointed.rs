//! The pointed Morita bicategory: adjunctions between pointed bimodules are
//! equivalences, and only the unit is 2-dualizable.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimod::{pointing_induced_maps, relative_tensor, same_algebra, Bimodule};
use crate::error::{input_err, Error, Result};
use crate::exlin::{Matrix, SparseVec};
use crate::morita::{dual_data, verify_zigzag, AdjunctionData};
use crate::scalar::Field;

/// Pointed bimodules `M` over `(A, B)` and `N` over `(B, A)` with
/// `u: B → N ⊗_A M` and `c: M ⊗_B N → A`.
#[derive(Clone, Debug)]
pub struct PointedAdjunction<F> {
    pub m: Bimodule<F>,
    pub n: Bimodule<F>,
    pub unit: Matrix<F>,
    pub counit: Matrix<F>,
}

impl<F: Field> PointedAdjunction<F> {
    /// `N ⊣ M` as an unpointed adjunction (left-to-right reading).
    pub fn adjunction(&self) -> Result<AdjunctionData<F>> {
        AdjunctionData::new(self.n.clone(), self.m.clone(), self.unit.clone(), self.counit.clone())
    }

    pub fn left_algebra(&self) -> &Arc<Algebra<F>> {
        self.m.left_algebra()
    }

    pub fn right_algebra(&self) -> &Arc<Algebra<F>> {
        self.m.right_algebra()
    }

    pub fn with_scaled_counit(&self, k: &F) -> Self {
        Self {
            counit: self.counit.scale(k),
            ..self.clone()
        }
    }
}

/// The failed checks of a pointed adjunction; empty when valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointedValidation {
    pub failures: Vec<String>,
}

impl PointedValidation {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `u` and `c` are bimodule maps, that both zigzags hold, and
/// the pointing compatibilities `c([m₀ ⊗ n₀]) = 1_A` and `u(1_B) = [n₀ ⊗ m₀]`.
pub fn validate_pointed_adjunction<F: Field>(data: &PointedAdjunction<F>) -> PointedValidation {
    let mut failures = Vec::new();
    let (m, n) = (&data.m, &data.n);
    if !m.is_pointed() || !n.is_pointed() {
        failures.push("both bimodules must be pointed".to_string());
    }
    if !same_algebra(m.left_algebra(), n.right_algebra()) || !same_algebra(m.right_algebra(), n.left_algebra()) {
        failures.push("N must run opposite to M".to_string());
        return PointedValidation { failures };
    }
    let adj = match data.adjunction() {
        Ok(adj) => adj,
        Err(e) => {
            failures.push(format!("unit or counit is not a bimodule map: {e}"));
            return PointedValidation { failures };
        }
    };
    let z = verify_zigzag(&adj);
    if !z.left_holds() {
        failures.push("zigzag N → N ⊗_A M ⊗_B N → N is not the identity".to_string());
    }
    if !z.right_holds() {
        failures.push("zigzag M → M ⊗_B N ⊗_A M → M is not the identity".to_string());
    }
    if let (Some(mn0), Some(nm0)) = (adj.right_left.bimodule.pointing(), adj.left_right.bimodule.pointing()) {
        if data.counit.mul_vec(mn0) != m.left_algebra().unit() {
            failures.push("c([m₀ ⊗ n₀]) differs from the unit of A".to_string());
        }
        if data.unit.mul_vec(m.right_algebra().unit()) != nm0 {
            failures.push("u(1_B) differs from [n₀ ⊗ m₀]".to_string());
        }
    }
    PointedValidation { failures }
}

/// A map together with its exact two-sided inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Invertible<F> {
    pub map: Matrix<F>,
    pub inverse: Matrix<F>,
}

fn invertible<F: Field>(map: Matrix<F>, what: &str) -> Result<Invertible<F>> {
    match map.invert()? {
        Some(inverse) => Ok(Invertible { map, inverse }),
        None => Err(Error::Validation(format!("{what} is not invertible"))),
    }
}

/// The four pointing-induced maps of a valid pointed adjunction, each
/// with its inverse, and the map `a_M = c ∘ (id_M ⊗ n₀): M → A`.
#[derive(Clone, Debug)]
pub struct Equivalences<F> {
    /// `A → M, a ↦ a·m₀`.
    pub m0_left: Invertible<F>,
    /// `B → M, b ↦ m₀·b`.
    pub m0_right: Invertible<F>,
    /// `B → N, b ↦ b·n₀`.
    pub n0_left: Invertible<F>,
    /// `A → N, a ↦ n₀·a`.
    pub n0_right: Invertible<F>,
    pub a_m: Matrix<F>,
}

pub fn deduce_equivalences<F: Field>(data: &PointedAdjunction<F>) -> Result<Equivalences<F>> {
    let v = validate_pointed_adjunction(data);
    if !v.holds() {
        return input_err(format!("invalid pointed adjunction: {}", v.failures.join("; ")));
    }
    let (m, n) = (&data.m, &data.n);
    let mn = relative_tensor(m, n)?;
    let n0 = SparseVec::from_dense(n.pointing().expect("validated"));
    let cols: Vec<Vec<F>> = (0..m.dim())
        .map(|i| data.counit.mul_vec(&mn.project_pair(&SparseVec::unit(i), &n0)))
        .collect();
    let a_m = Matrix::from_columns(m.left_algebra().dim(), &cols)?;
    let pm = pointing_induced_maps(m)?;
    let pn = pointing_induced_maps(n)?;
    let chase = a_m.checked_mul(&pm.left)?.is_identity() && pm.left.checked_mul(&a_m)?.is_identity();
    if !chase {
        return Err(Error::Validation("a_M is not inverse to m₀^A".into()));
    }
    Ok(Equivalences {
        m0_left: invertible(pm.left, "m₀^A")?,
        m0_right: invertible(pm.right, "m₀^B")?,
        n0_left: invertible(pn.left, "n₀^B")?,
        n0_right: invertible(pn.right, "n₀^A")?,
        a_m,
    })
}

/// Inverses of the unit and counit of a valid pointed adjunction.
#[derive(Clone, Debug)]
pub struct InverseWitness<F> {
    pub unit_inverse: Matrix<F>,
    pub counit_inverse: Matrix<F>,
    /// `u` and `c` are invertible bimodule maps, exhibiting `M` and `N` as
    /// mutually inverse.
    pub mutually_inverse: bool,
}

pub fn adjoint_implies_invertible<F: Field>(data: &PointedAdjunction<F>) -> Result<InverseWitness<F>> {
    let v = validate_pointed_adjunction(data);
    if !v.holds() {
        return input_err(format!("invalid pointed adjunction: {}", v.failures.join("; ")));
    }
    let adj = data.adjunction()?;
    let u = adj.unit.inverse().ok_or_else(|| Error::Validation("unit is not invertible".into()))?;
    let c = adj.counit.inverse().ok_or_else(|| Error::Validation("counit is not invertible".into()))?;
    let mutually_inverse = crate::bimod::is_intertwiner(&u.source, &u.target, &u.matrix)
        && crate::bimod::is_intertwiner(&c.source, &c.target, &c.matrix);
    Ok(InverseWitness {
        unit_inverse: u.matrix,
        counit_inverse: c.matrix,
        mutually_inverse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// No pointed adjoint can exist, for the listed reasons.
    Impossible(Vec<String>),
    NotExcluded,
}

impl Obstruction {
    pub fn is_impossible(&self) -> bool {
        matches!(self, Obstruction::Impossible(_))
    }
}

/// Necessary conditions for `M` to have a pointed adjoint: both maps
/// `a ↦ a·m₀` and `b ↦ m₀·b` would have to be isomorphisms.
pub fn pointed_adjoint_obstruction<F: Field>(m: &Bimodule<F>) -> Result<Obstruction> {
    let maps = pointing_induced_maps(m)?;
    let (da, db, dm) = (m.left_algebra().dim(), m.right_algebra().dim(), m.dim());
    let mut reasons = Vec::new();
    if da != dm {
        reasons.push(format!("dim of the left algebra is {da} but dim M is {dm}"));
    } else if maps.left.rank() != dm {
        reasons.push("a ↦ a·m₀ is singular".to_string());
    }
    if db != dm {
        reasons.push(format!("dim of the right algebra is {db} but dim M is {dm}"));
    } else if maps.right.rank() != dm {
        reasons.push("b ↦ m₀·b is singular".to_string());
    }
    Ok(if reasons.is_empty() {
        Obstruction::NotExcluded
    } else {
        Obstruction::Impossible(reasons)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitVerdict {
    /// The algebra is equivalent to the unit.
    Unit,
    /// 2-dualizability is impossible in the pointed setting.
    Impossible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDualizability {
    pub verdict: UnitVerdict,
    pub trace: Vec<String>,
}

/// Runs the pointed-adjoint obstruction on the evaluation and coevaluation
/// of `A`; only an algebra whose unit map `F → A` is an isomorphism passes.
pub fn only_unit_dualizable<F: Field>(a: &Arc<Algebra<F>>) -> UnitDualizability {
    let d = dual_data(a);
    let mut trace = Vec::new();
    for (name, m) in [("ev", &d.ev), ("coev", &d.coev)] {
        match pointed_adjoint_obstruction(m).expect("duality bimodules are pointed") {
            Obstruction::Impossible(reasons) => {
                for r in reasons {
                    trace.push(format!("{name}: {r}"));
                }
            }
            Obstruction::NotExcluded => trace.push(format!("{name}: not excluded")),
        }
    }
    let unit_iso = a.dim() == 1 && a.unit().iter().any(|x| !x.is_zero());
    let verdict = if unit_iso {
        trace.push("unit map F → A is an isomorphism".to_string());
        UnitVerdict::Unit
    } else {
        trace.push(format!("dim A = {} ≠ 1", a.dim()));
        UnitVerdict::Impossible
    };
    UnitDualizability { verdict, trace }
}

/// The pointed adjunction attached to an algebra isomorphism `φ: A → B`:
/// `M = B` over `(A, B)` and `N = B` over `(B, A)`, with `A` acting through
/// `φ`, `u(b) = [b ⊗ 1]` and `c([m ⊗ n]) = φ⁻¹(mn)`.
pub fn pointed_adjunction_from_isomorphism<F: Field>(
    a: &Arc<Algebra<F>>,
    b: &Arc<Algebra<F>>,
    phi: &Matrix<F>,
) -> Result<PointedAdjunction<F>> {
    if !a.is_isomorphism(phi, b) {
        return input_err("not an algebra isomorphism");
    }
    let phi_inv = phi.invert()?.expect("isomorphisms are invertible");
    let id = Matrix::identity(b.dim());
    let m = Bimodule::restricted_regular(b, a, phi, b, &id)?;
    let n = Bimodule::restricted_regular(b, b, &id, a, phi)?;
    let nm = relative_tensor(&n, &m)?;
    let mn = relative_tensor(&m, &n)?;
    let one = b.unit_sparse();
    let unit_cols: Vec<Vec<F>> = (0..b.dim()).map(|x| nm.project_pair(&SparseVec::unit(x), &one)).collect();
    let counit_cols: Vec<Vec<F>> = (0..mn.bimodule.dim())
        .map(|k| {
            let (i, j) = mn.section_index(k);
            phi_inv.mul_vec(&b.product(i, j).to_dense(b.dim()))
        })
        .collect();
    Ok(PointedAdjunction {
        m,
        n,
        unit: Matrix::from_columns(nm.bimodule.dim(), &unit_cols)?,
        counit: Matrix::from_columns(a.dim(), &counit_cols)?,
    })
}

/// `A` adjoint to itself through the regular bimodule.
pub fn regular_self_adjunction<F: Field>(a: &Arc<Algebra<F>>) -> PointedAdjunction<F> {
    pointed_adjunction_from_isomorphism(a, a, &Matrix::identity(a.dim())).expect("identity is an isomorphism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::iso_search;
    use crate::corpus;
    use crate::morita::morita_equivalence_check;
    use crate::{q, Rational};

    fn arc<T>(x: T) -> Arc<T> {
        Arc::new(x)
    }

    #[test]
    fn regular_self_adjunction_is_valid_with_identity_maps() {
        let a = arc(corpus::matrix_algebra::<Rational>(2));
        let data = regular_self_adjunction(&a);
        assert!(validate_pointed_adjunction(&data).holds());
        let eq = deduce_equivalences(&data).unwrap();
        assert!(eq.m0_left.map.is_identity());
        assert!(eq.m0_right.map.is_identity());
        assert!(eq.n0_left.map.is_identity());
        assert!(eq.n0_right.map.is_identity());
        let inv = adjoint_implies_invertible(&data).unwrap();
        assert!(inv.mutually_inverse);
    }

    #[test]
    fn group_algebra_automorphism_adjunction() {
        let c2 = arc(corpus::group_algebra::<Rational>(2));
        let neg = Matrix::from_rows(2, vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(-1, 1)]]).unwrap();
        let data = pointed_adjunction_from_isomorphism(&c2, &c2, &neg).unwrap();
        assert!(validate_pointed_adjunction(&data).holds());
        assert!(adjoint_implies_invertible(&data).unwrap().mutually_inverse);
        let check = morita_equivalence_check(&c2, &c2, &data.m, &data.n).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn classical_morita_pair_fails_pointing_compatibility() {
        let cols = corpus::column_vectors::<Rational>(2);
        let rows = corpus::row_vectors::<Rational>(2);
        let nm = relative_tensor(&rows, &cols).unwrap();
        let mn = relative_tensor(&cols, &rows).unwrap();
        // u(1) = [e₁ ⊗ e₁] already gives m = (m e₁ᵀ) e₁.
        let unit = Matrix::from_columns(nm.bimodule.dim(), &[nm.class(0, 0)]).unwrap();
        let counit_cols: Vec<Vec<Rational>> = (0..mn.bimodule.dim())
            .map(|k| {
                let (i, j) = mn.section_index(k);
                SparseVec::unit(i * 2 + j).to_dense(4)
            })
            .collect();
        let counit = Matrix::from_columns(4, &counit_cols).unwrap();
        let data = PointedAdjunction {
            m: cols,
            n: rows,
            unit,
            counit,
        };
        let v = validate_pointed_adjunction(&data);
        assert!(!v.holds());
        assert!(v.failures.iter().any(|f| f.starts_with("c([m₀ ⊗ n₀])")));
        assert_eq!(v.failures.len(), 1);
    }

    #[test]
    fn scaled_counit_is_rejected() {
        let data = regular_self_adjunction(&arc(corpus::group_algebra::<Rational>(3)));
        let bad = data.with_scaled_counit(&q(2, 1));
        assert!(!validate_pointed_adjunction(&bad).holds());
        assert!(deduce_equivalences(&bad).is_err());
        assert!(adjoint_implies_invertible(&bad).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let m2 = dual_data(&arc(corpus::matrix_algebra::<Rational>(2)));
        assert!(pointed_adjoint_obstruction(&m2.ev).unwrap().is_impossible());
        let k = dual_data(&arc(corpus::scalars::<Rational>()));
        assert_eq!(pointed_adjoint_obstruction(&k.ev).unwrap(), Obstruction::NotExcluded);
        let reg = Bimodule::regular(&arc(corpus::dual_numbers::<Rational>()));
        assert_eq!(pointed_adjoint_obstruction(&reg).unwrap(), Obstruction::NotExcluded);
        assert!(pointed_adjoint_obstruction(&reg.with_pointing(None).unwrap()).is_err());
    }

    #[test]
    fn only_unit_examples() {
        let k = only_unit_dualizable(&arc(corpus::scalars::<Rational>()));
        assert_eq!(k.verdict, UnitVerdict::Unit);
        let m2 = only_unit_dualizable(&arc(corpus::matrix_algebra::<Rational>(2)));
        assert_eq!(m2.verdict, UnitVerdict::Impossible);
        assert!(m2.trace.iter().any(|t| t.contains("16") && t.contains("4")));
        let d = only_unit_dualizable(&arc(corpus::dual_numbers::<Rational>()));
        assert_eq!(d.verdict, UnitVerdict::Impossible);
    }

    #[test]
    fn transported_algebras_give_valid_adjunctions() {
        let a = arc(corpus::upper_triangular::<Rational>());
        let p = Matrix::from_rows(3, vec![vec![q(1, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(2, 1), q(0, 1)], vec![q(1, 1), q(0, 1), q(1, 1)]])
            .unwrap();
        let b = arc(a.transport(&p).unwrap());
        let data = pointed_adjunction_from_isomorphism(&a, &b, &p).unwrap();
        assert!(validate_pointed_adjunction(&data).holds());
        let eq = deduce_equivalences(&data).unwrap();
        assert!(eq.a_m.checked_mul(&eq.m0_left.map).unwrap().is_identity());
        assert!(iso_search(&data.m, &data.m).is_some());
    }
}
