//! Duals, adjoints and the snake and zigzag identities in the Morita
//! bicategory.
//!
//! Conventions: a bimodule over `(P, Q)` is a 1-morphism `P → Q` and
//! composites are read left to right, so `L: P → Q` followed by `R: Q → P`
//! is `L ⊗_Q R`. An adjunction `L ⊣ R` has unit `P ⇒ L ⊗_Q R` and counit
//! `R ⊗_P L ⇒ Q`.

use std::sync::Arc;

use crate::algebra::{kron, Algebra};
use crate::bimod::{
    hom_into_left, hom_into_right, iso_search, pointed_iso_search, relative_tensor, same_algebra,
    BimoduleMap, Bimodule, HomModule, RelativeTensor, Side,
};
use crate::corpus;
use crate::error::{input_err, Result};
use crate::exlin::{sparse_affine_solve, Matrix, SparseVec};
use crate::scalar::Field;

/// An algebra `R` with its dual `R^op` and the evaluation and coevaluation
/// bimodules, both with underlying space `R` and pointed by its unit.
///
/// `ev` is over `(R^op ⊗ R, F)` with `(a ⊗ b)·x = b x a`; `coev` is over
/// `(F, R ⊗ R^op)` with `x·(a ⊗ b) = b x a`.
#[derive(Clone, Debug)]
pub struct DualityData<F> {
    pub object: Arc<Algebra<F>>,
    pub dual: Arc<Algebra<F>>,
    pub ev: Bimodule<F>,
    pub coev: Bimodule<F>,
}

pub fn dual_data<F: Field>(r: &Arc<Algebra<F>>) -> DualityData<F> {
    let d = r.dim();
    let dual = Arc::new(r.opposite());
    let k = Arc::new(corpus::scalars::<F>());
    // Index i·d + j stands for e_i ⊗ e_j in both enveloping algebras; either
    // way it acts on x by e_j x e_i.
    let sandwich: Vec<Vec<SparseVec<F>>> = (0..d * d)
        .map(|ij| {
            let (i, j) = (ij / d, ij % d);
            (0..d).map(|m| r.mul_sparse(r.product(j, m), &SparseVec::unit(i))).collect()
        })
        .collect();
    let trivial: Vec<Vec<SparseVec<F>>> = vec![(0..d).map(SparseVec::unit).collect()];
    let ev = Bimodule::from_actions(
        Arc::new(dual.tensor(r)),
        k.clone(),
        d,
        sandwich.clone(),
        trivial.clone(),
        Some(r.unit().to_vec()),
    )
    .expect("evaluation bimodule is valid");
    let coev = Bimodule::from_actions(
        k,
        Arc::new(r.tensor(&dual)),
        d,
        trivial,
        sandwich,
        Some(r.unit().to_vec()),
    )
    .expect("coevaluation bimodule is valid");
    DualityData {
        object: r.clone(),
        dual,
        ev,
        coev,
    }
}

/// One of the two snake composites and its comparison with the identity.
#[derive(Clone, Debug)]
pub struct SnakeSide<F> {
    /// The composite bimodule, `None` when the pieces do not compose.
    pub composite: Option<Bimodule<F>>,
    /// The canonical map from the identity bimodule into the composite.
    pub canonical: Option<BimoduleMap<F>>,
    /// An isomorphism composite → identity found by search.
    pub witness: Option<BimoduleMap<F>>,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct SnakeReport<F> {
    /// `(coev ⊠ R) ⊗ (R ⊠ ev) ≅ R`.
    pub object_side: SnakeSide<F>,
    /// `(R^op ⊠ coev) ⊗ (ev ⊠ R^op) ≅ R^op`.
    pub dual_side: SnakeSide<F>,
}

impl<F: Field> SnakeReport<F> {
    pub fn holds(&self) -> bool {
        self.object_side.holds && self.dual_side.holds
    }
}

fn snake_side<F: Field>(
    first: &Bimodule<F>,
    second: &Bimodule<F>,
    identity: &Bimodule<F>,
    canonical: impl Fn(usize) -> (SparseVec<F>, SparseVec<F>),
) -> SnakeSide<F> {
    let Ok(t) = relative_tensor(first, second) else {
        return SnakeSide {
            composite: None,
            canonical: None,
            witness: None,
            holds: false,
        };
    };
    let composite = t.bimodule.clone();
    if composite.dim() != identity.dim() {
        return SnakeSide {
            composite: Some(composite),
            canonical: None,
            witness: None,
            holds: false,
        };
    }
    let cols: Vec<Vec<F>> = (0..identity.dim())
        .map(|r| {
            let (x, y) = canonical(r);
            t.project_pair(&x, &y)
        })
        .collect();
    let canonical = Matrix::from_columns(composite.dim(), &cols)
        .ok()
        .and_then(|m| BimoduleMap::new(identity.clone(), composite.clone(), m, true).ok());
    let witness = pointed_iso_search(&composite, identity);
    let holds = match (&canonical, &witness) {
        (Some(c), Some(w)) => w.matrix.checked_mul(&c.matrix).is_ok_and(|p| p.is_identity()),
        _ => false,
    };
    SnakeSide {
        composite: Some(composite),
        canonical,
        witness,
        holds,
    }
}

/// Builds both snake composites by relative tensor products and checks
/// that each is isomorphic to the identity bimodule, the canonical map
/// `r ↦ [(1 ⊗ r) ⊗ (1 ⊗ 1)]` (resp. `[(r ⊗ 1) ⊗ (1 ⊗ 1)]`) being inverse
/// to the witness.
pub fn verify_snake<F: Field>(d: &DualityData<F>) -> SnakeReport<F> {
    let n = d.object.dim();
    let reg = Bimodule::regular(&d.object);
    let reg_dual = Bimodule::regular(&d.dual);
    let unit = d.object.unit_sparse();
    let object_side = snake_side(&d.coev.external_tensor(&reg), &reg.external_tensor(&d.ev), &reg, |r| {
        (kron(&unit, &SparseVec::unit(r), n), kron(&unit, &unit, d.ev.dim()))
    });
    let dual_side = snake_side(
        &reg_dual.external_tensor(&d.coev),
        &d.ev.external_tensor(&reg_dual),
        &reg_dual,
        |r| (kron(&SparseVec::unit(r), &unit, d.coev.dim()), kron(&unit, &unit, n)),
    );
    SnakeReport {
        object_side,
        dual_side,
    }
}

/// A witness that a module is finitely generated projective: elements `mᵢ`
/// and linear functionals `fᵢ` with `m = Σ fᵢ(m)·mᵢ` (left case) or
/// `m = Σ mᵢ·fᵢ(m)` (right case).
#[derive(Clone, Debug)]
pub struct DualBasis<F> {
    pub side: Side,
    pub elements: Vec<Vec<F>>,
    /// Functionals as matrices from the module to the acting algebra.
    pub functionals: Vec<Matrix<F>>,
}

impl<F: Field> DualBasis<F> {
    /// Checks the reconstruction identity on every basis vector of `m`.
    pub fn verify(&self, m: &Bimodule<F>) -> bool {
        let n = m.dim();
        (0..n).all(|j| {
            let mut total = SparseVec::zero();
            for (mi, fi) in self.elements.iter().zip(&self.functionals) {
                let coeff = SparseVec::from_dense(&fi.column(j));
                total = total.add(&m.act(self.side, &coeff, &SparseVec::from_dense(mi)));
            }
            total == SparseVec::unit(j)
        })
    }
}

fn hom_for<F: Field>(m: &Bimodule<F>, side: Side) -> HomModule<F> {
    match side {
        Side::Left => hom_into_left(m),
        Side::Right => hom_into_right(m),
    }
}

fn dual_basis_from<F: Field>(m: &Bimodule<F>, side: Side, hom: &HomModule<F>) -> Option<DualBasis<F>> {
    let n = m.dim();
    let r = hom.maps.len();
    let da = m.algebra(side).dim();
    // Unknown c[i][k] (index i·r + k) with f_i = Σ_k c[i][k] h_k; equation
    // (j, t) is the t-th coordinate of Σ_i f_i(m_j)·m_i = m_j.
    let mut rows: Vec<Vec<Vec<(usize, F)>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        let ei = SparseVec::unit(i);
        let acted: Vec<SparseVec<F>> = (0..da).map(|a| m.act(side, &SparseVec::unit(a), &ei)).collect();
        for (k, h) in hom.maps.iter().enumerate() {
            for (j, row) in rows.iter_mut().enumerate() {
                let mut v = SparseVec::zero();
                for (a, acted_a) in acted.iter().enumerate() {
                    v.axpy(h.get(a, j), acted_a);
                }
                for (t, x) in v.iter() {
                    row[t].push((i * r + k, x.clone()));
                }
            }
        }
    }
    let nvars = n * r;
    let eqs = rows.into_iter().enumerate().flat_map(|(j, row)| {
        row.into_iter().enumerate().map(move |(t, mut e)| {
            if t == j {
                e.push((nvars, F::one()));
            }
            SparseVec::from_entries(e)
        })
    });
    let (c, _) = sparse_affine_solve(nvars, eqs.collect::<Vec<_>>())?;
    let functionals = (0..n).map(|i| hom.map_from_coordinates(&c[i * r..(i + 1) * r])).collect();
    let elements = (0..n).map(|i| SparseVec::unit(i).to_dense(n)).collect();
    Some(DualBasis {
        side,
        elements,
        functionals,
    })
}

/// Solves the dual-basis system for `M` over the algebra acting on `side`,
/// using the basis of `M` as the elements `mᵢ`.
pub fn is_fgp<F: Field>(m: &Bimodule<F>, side: Side) -> Option<DualBasis<F>> {
    dual_basis_from(m, side, &hom_for(m, side))
}

/// An adjunction `L ⊣ R` for `L` over `(P, Q)` and `R` over `(Q, P)`.
#[derive(Clone, Debug)]
pub struct AdjunctionData<F> {
    pub left: Bimodule<F>,
    pub right: Bimodule<F>,
    /// `P → L ⊗_Q R`.
    pub unit: BimoduleMap<F>,
    /// `R ⊗_P L → Q`.
    pub counit: BimoduleMap<F>,
    pub left_right: RelativeTensor<F>,
    pub right_left: RelativeTensor<F>,
}

impl<F: Field> AdjunctionData<F> {
    /// Assembles the data, checking that the unit and counit are bimodule
    /// maps between the right bimodules.
    pub fn new(left: Bimodule<F>, right: Bimodule<F>, unit: Matrix<F>, counit: Matrix<F>) -> Result<Self> {
        if !same_algebra(left.left_algebra(), right.right_algebra())
            || !same_algebra(left.right_algebra(), right.left_algebra())
        {
            return input_err("adjoint candidates must run in opposite directions");
        }
        let left_right = relative_tensor(&left, &right)?;
        let right_left = relative_tensor(&right, &left)?;
        let p = Bimodule::regular(left.left_algebra());
        let q = Bimodule::regular(left.right_algebra());
        let unit = BimoduleMap::new(p, left_right.bimodule.clone(), unit, false)?;
        let counit = BimoduleMap::new(right_left.bimodule.clone(), q, counit, false)?;
        Ok(Self {
            left,
            right,
            unit,
            counit,
            left_right,
            right_left,
        })
    }

    /// The same data with the unit multiplied by `k`.
    pub fn with_scaled_unit(&self, k: &F) -> Self {
        Self {
            unit: self.unit.scale(k),
            ..self.clone()
        }
    }

    pub fn with_scaled_counit(&self, k: &F) -> Self {
        Self {
            counit: self.counit.scale(k),
            ..self.clone()
        }
    }
}

/// The two triangle composites of an adjunction.
#[derive(Clone, Debug)]
pub struct ZigzagReport<F> {
    /// `L ≅ P ⊗_P L → L ⊗_Q R ⊗_P L → L ⊗_Q Q ≅ L`.
    pub left_composite: Matrix<F>,
    /// `R ≅ R ⊗_P P → R ⊗_P L ⊗_Q R → Q ⊗_Q R ≅ R`.
    pub right_composite: Matrix<F>,
}

impl<F: Field> ZigzagReport<F> {
    pub fn left_holds(&self) -> bool {
        self.left_composite.is_identity()
    }

    pub fn right_holds(&self) -> bool {
        self.right_composite.is_identity()
    }

    pub fn holds(&self) -> bool {
        self.left_holds() && self.right_holds()
    }
}

/// Computes both zigzag composites as explicit matrices. The unit-law
/// identifications are the action maps `p ⊗ l ↦ p·l` and `l ⊗ q ↦ l·q`.
pub fn verify_zigzag<F: Field>(a: &AdjunctionData<F>) -> ZigzagReport<F> {
    let (l, r) = (&a.left, &a.right);
    let p_unit = a.left.left_algebra().unit().to_vec();
    let u1 = a.left_right.lift(&a.unit.matrix.mul_vec(&p_unit));
    let dr = r.dim();
    let counit_of = |i: usize, j: usize| -> SparseVec<F> {
        SparseVec::from_dense(&a.counit.matrix.mul_vec(&a.right_left.class(i, j)))
    };
    let left_cols: Vec<Vec<F>> = (0..l.dim())
        .map(|x| {
            let mut out = SparseVec::zero();
            for (ij, s) in u1.iter() {
                let (i, j) = (ij / dr, ij % dr);
                out.axpy(s, &l.act_right(&SparseVec::unit(i), &counit_of(j, x)));
            }
            out.to_dense(l.dim())
        })
        .collect();
    let right_cols: Vec<Vec<F>> = (0..dr)
        .map(|x| {
            let mut out = SparseVec::zero();
            for (ij, s) in u1.iter() {
                let (i, j) = (ij / dr, ij % dr);
                out.axpy(s, &r.act_left(&counit_of(x, i), &SparseVec::unit(j)));
            }
            out.to_dense(dr)
        })
        .collect();
    ZigzagReport {
        left_composite: Matrix::from_columns(l.dim(), &left_cols).expect("square"),
        right_composite: Matrix::from_columns(dr, &right_cols).expect("square"),
    }
}

/// For `M` over `(A, B)` finitely generated projective over `A`: the
/// adjunction `Hom_A(M, A) ⊣ M`, with counit `m ⊗ f ↦ f(m)` and unit
/// `1 ↦ Σ fᵢ ⊗ mᵢ` from a dual basis. Read with composition in the usual
/// right-to-left order, `Hom_A(M, A)` is the right adjoint of `M`.
pub fn right_adjoint<F: Field>(m: &Bimodule<F>) -> Option<AdjunctionData<F>> {
    let hom = hom_into_left(m);
    let basis = dual_basis_from(m, Side::Left, &hom)?;
    let n = hom.bimodule.clone();
    let left_right = relative_tensor(&n, m).ok()?;
    let right_left = relative_tensor(m, &n).ok()?;
    let dm = m.dim();
    let mut u1 = SparseVec::zero();
    for (i, f) in basis.functionals.iter().enumerate() {
        let c = SparseVec::from_dense(&hom.coordinates(f));
        u1 = u1.add(&kron(&c, &SparseVec::unit(i), dm));
    }
    let unit = central_map(&left_right, &left_right.project(&u1));
    let counit_cols: Vec<Vec<F>> = (0..right_left.bimodule.dim())
        .map(|k| {
            let (i, f) = right_left.section_index(k);
            hom.maps[f].column(i)
        })
        .collect();
    let counit = Matrix::from_columns(m.left_algebra().dim(), &counit_cols).ok()?;
    AdjunctionData::new(n, m.clone(), unit, counit).ok()
}

/// For `M` over `(A, B)` finitely generated projective over `B`: the
/// adjunction `M ⊣ Hom_B(M, B)`, with counit `f ⊗ m ↦ f(m)` and unit
/// `1 ↦ Σ mᵢ ⊗ fᵢ`.
pub fn left_adjoint<F: Field>(m: &Bimodule<F>) -> Option<AdjunctionData<F>> {
    let hom = hom_into_right(m);
    let basis = dual_basis_from(m, Side::Right, &hom)?;
    let n = hom.bimodule.clone();
    let left_right = relative_tensor(m, &n).ok()?;
    let right_left = relative_tensor(&n, m).ok()?;
    let dn = n.dim();
    let mut u1 = SparseVec::zero();
    for (i, f) in basis.functionals.iter().enumerate() {
        let c = SparseVec::from_dense(&hom.coordinates(f));
        u1 = u1.add(&kron(&SparseVec::unit(i), &c, dn));
    }
    let unit = central_map(&left_right, &left_right.project(&u1));
    let counit_cols: Vec<Vec<F>> = (0..right_left.bimodule.dim())
        .map(|k| {
            let (f, i) = right_left.section_index(k);
            hom.maps[f].column(i)
        })
        .collect();
    let counit = Matrix::from_columns(m.right_algebra().dim(), &counit_cols).ok()?;
    AdjunctionData::new(m.clone(), n, unit, counit).ok()
}

/// The map `P → T, p ↦ p·z` for a central element `z` of the `(P, P)`-bimodule `T`.
fn central_map<F: Field>(t: &RelativeTensor<F>, z: &[F]) -> Matrix<F> {
    let b = &t.bimodule;
    let z = SparseVec::from_dense(z);
    let cols: Vec<Vec<F>> = (0..b.left_algebra().dim())
        .map(|p| b.act_left(&SparseVec::unit(p), &z).to_dense(b.dim()))
        .collect();
    Matrix::from_columns(b.dim(), &cols).expect("columns have the tensor dimension")
}

/// An adjunction together with the outcome of its zigzag check.
pub fn verified<F: Field>(a: Option<AdjunctionData<F>>) -> Option<(AdjunctionData<F>, bool)> {
    a.map(|a| {
        let ok = verify_zigzag(&a).holds();
        (a, ok)
    })
}

/// Classical 2-dualizability of an algebra, decided twice: by adjoints of
/// the evaluation and coevaluation, and by a separability idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoDualizabilityReport {
    pub dim: usize,
    pub dualizable: bool,
    pub ev_right_adjoint: bool,
    pub ev_left_adjoint: bool,
    pub coev_right_adjoint: bool,
    pub coev_left_adjoint: bool,
    pub ev_has_both_adjoints: bool,
    pub coev_has_both_adjoints: bool,
    pub separable: bool,
    pub fully_2_dualizable: bool,
    pub routes_agree: bool,
}

fn adjoint_ok<F: Field>(a: Option<AdjunctionData<F>>) -> bool {
    verified(a).is_some_and(|(_, ok)| ok)
}

pub fn two_dualizability_report<F: Field>(a: &Arc<Algebra<F>>) -> TwoDualizabilityReport {
    let d = dual_data(a);
    let dualizable = verify_snake(&d).holds();
    let ev_right_adjoint = adjoint_ok(right_adjoint(&d.ev));
    let ev_left_adjoint = adjoint_ok(left_adjoint(&d.ev));
    let coev_right_adjoint = adjoint_ok(right_adjoint(&d.coev));
    let coev_left_adjoint = adjoint_ok(left_adjoint(&d.coev));
    let ev_has_both_adjoints = ev_right_adjoint && ev_left_adjoint;
    let coev_has_both_adjoints = coev_right_adjoint && coev_left_adjoint;
    let separable = a
        .separability_idempotent()
        .is_some_and(|e| a.is_separability_idempotent(&e.coords));
    TwoDualizabilityReport {
        dim: a.dim(),
        dualizable,
        ev_right_adjoint,
        ev_left_adjoint,
        coev_right_adjoint,
        coev_left_adjoint,
        ev_has_both_adjoints,
        coev_has_both_adjoints,
        separable,
        fully_2_dualizable: separable,
        routes_agree: separable == (ev_has_both_adjoints && coev_has_both_adjoints),
    }
}

/// Witnesses for `M ⊗_B N ≅ A` and `N ⊗_A M ≅ B`.
#[derive(Clone, Debug)]
pub struct MoritaCheck<F> {
    pub first: Option<BimoduleMap<F>>,
    pub second: Option<BimoduleMap<F>>,
}

impl<F: Field> MoritaCheck<F> {
    pub fn holds(&self) -> bool {
        self.first.is_some() && self.second.is_some()
    }
}

pub fn morita_equivalence_check<F: Field>(
    a: &Arc<Algebra<F>>,
    b: &Arc<Algebra<F>>,
    m: &Bimodule<F>,
    n: &Bimodule<F>,
) -> Result<MoritaCheck<F>> {
    if !same_algebra(m.left_algebra(), a)
        || !same_algebra(m.right_algebra(), b)
        || !same_algebra(n.left_algebra(), b)
        || !same_algebra(n.right_algebra(), a)
    {
        return input_err("bimodules are not over the given algebras");
    }
    let mn = relative_tensor(m, n)?;
    let nm = relative_tensor(n, m)?;
    Ok(MoritaCheck {
        first: iso_search(&mn.bimodule, &Bimodule::regular(a)),
        second: iso_search(&nm.bimodule, &Bimodule::regular(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::is_intertwiner;
    use crate::{q, Rational};

    fn arc<T>(x: T) -> Arc<T> {
        Arc::new(x)
    }

    #[test]
    fn dual_data_of_scalars_is_trivial() {
        let d = dual_data(&arc(corpus::scalars::<Rational>()));
        assert_eq!(d.ev.dim(), 1);
        assert_eq!(d.coev.dim(), 1);
        let s = verify_snake(&d);
        assert!(s.holds());
        assert!(s.object_side.canonical.unwrap().matrix.is_identity());
    }

    #[test]
    fn snake_holds_for_small_corpus() {
        for (name, a) in corpus::standard_algebras::<Rational>() {
            let d = dual_data(&arc(a));
            assert!(verify_snake(&d).holds(), "{name}");
        }
    }

    #[test]
    fn ev_of_matrices_has_expected_shape() {
        let d = dual_data(&arc(corpus::matrix_algebra::<Rational>(2)));
        assert_eq!(d.ev.dim(), 4);
        assert_eq!(d.ev.left_algebra().dim(), 16);
    }

    #[test]
    fn snake_fails_with_zero_evaluation() {
        let mut d = dual_data(&arc(corpus::group_algebra::<Rational>(2)));
        d.ev = Bimodule::zero(d.ev.left_algebra(), d.ev.right_algebra(), true);
        let s = verify_snake(&d);
        assert!(!s.holds());
        assert_eq!(s.object_side.composite.unwrap().dim(), 0);
    }

    #[test]
    fn fgp_examples() {
        let reg = Bimodule::regular(&arc(corpus::dual_numbers::<Rational>()));
        for side in [Side::Left, Side::Right] {
            let w = is_fgp(&reg, side).unwrap();
            assert!(w.verify(&reg));
        }
        let cols = corpus::column_vectors::<Rational>(2);
        assert!(is_fgp(&cols, Side::Left).unwrap().verify(&cols));
        assert!(is_fgp(&corpus::nilpotent_point::<Rational>(), Side::Left).is_none());
    }

    #[test]
    fn right_adjoint_of_columns_is_rows() {
        let cols = corpus::column_vectors::<Rational>(2);
        let adj = right_adjoint(&cols).unwrap();
        assert!(verify_zigzag(&adj).holds());
        let rows = corpus::row_vectors::<Rational>(2);
        assert!(iso_search(&adj.left, &rows.with_pointing(None).unwrap()).is_some());
        assert_eq!(adj.right_left.bimodule.dim(), 4);
        assert_eq!(adj.left_right.bimodule.dim(), 1);
        assert!(is_intertwiner(&adj.unit.source, &adj.unit.target, &adj.unit.matrix));
    }

    #[test]
    fn left_adjoint_of_rows_is_columns() {
        let rows = corpus::row_vectors::<Rational>(2);
        let adj = left_adjoint(&rows).unwrap();
        assert!(verify_zigzag(&adj).holds());
        let cols = corpus::column_vectors::<Rational>(2);
        assert!(iso_search(&adj.right, &cols.with_pointing(None).unwrap()).is_some());
    }

    #[test]
    fn adjoints_of_regular_bimodules() {
        for (name, a) in corpus::standard_algebras::<Rational>() {
            let reg = Bimodule::regular(&arc(a));
            let r = right_adjoint(&reg).unwrap();
            assert!(verify_zigzag(&r).holds(), "{name}");
            assert!(iso_search(&r.left, &reg).is_some());
            let l = left_adjoint(&reg).unwrap();
            assert!(verify_zigzag(&l).holds(), "{name}");
        }
    }

    #[test]
    fn non_projective_points_have_no_adjoint() {
        assert!(right_adjoint(&corpus::nilpotent_point::<Rational>()).is_none());
        assert!(left_adjoint(&corpus::nilpotent_point_right::<Rational>()).is_none());
    }

    #[test]
    fn scaled_unit_breaks_zigzag() {
        let adj = right_adjoint(&corpus::column_vectors::<Rational>(2)).unwrap();
        let bad = verify_zigzag(&adj.with_scaled_unit(&q(2, 1)));
        assert!(!bad.holds());
        assert_eq!(bad.left_composite, Matrix::identity(2).scale(&q(2, 1)));
    }

    #[test]
    fn report_examples() {
        let m2 = two_dualizability_report(&arc(corpus::matrix_algebra::<Rational>(2)));
        assert!(m2.fully_2_dualizable && m2.routes_agree && m2.dualizable);
        let d = two_dualizability_report(&arc(corpus::dual_numbers::<Rational>()));
        assert!(!d.fully_2_dualizable && d.routes_agree && d.dualizable);
        assert!(d.ev_left_adjoint && !d.ev_right_adjoint);
        let k = two_dualizability_report(&arc(corpus::scalars::<Rational>()));
        assert!(k.fully_2_dualizable && k.routes_agree);
    }

    #[test]
    fn morita_examples() {
        let m2 = corpus::column_vectors::<Rational>(2).left_algebra().clone();
        let k = corpus::column_vectors::<Rational>(2).right_algebra().clone();
        let rows = corpus::row_vectors::<Rational>(2);
        let cols = corpus::column_vectors::<Rational>(2);
        assert!(morita_equivalence_check(&k, &m2, &rows, &cols).unwrap().holds());
        let reg = Bimodule::regular(&m2);
        assert!(morita_equivalence_check(&m2, &m2, &reg, &reg).unwrap().holds());
        let dual = corpus::nilpotent_point::<Rational>().left_algebra().clone();
        let left = corpus::nilpotent_point_right::<Rational>();
        let right = corpus::nilpotent_point::<Rational>();
        assert!(!morita_equivalence_check(&k, &dual, &left, &right).unwrap().holds());
        assert!(morita_equivalence_check(&m2, &k, &rows, &cols).is_err());
    }

    #[test]
    fn dual_of_dual_is_original() {
        let a = corpus::upper_triangular::<Rational>();
        let d = dual_data(&arc(a.opposite()));
        assert!(a.is_isomorphism(&Matrix::identity(3), &d.dual));
    }
}
