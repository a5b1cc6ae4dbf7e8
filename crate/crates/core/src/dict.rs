//! Finite presentations of constructible factorization algebras on a
//! stratified interval: one algebra per region, one pointed bimodule per
//! stratum point.

use std::sync::Arc;

use crate::algebra::{kron_dense, Algebra};
use crate::bimod::{pointed_iso_search, pointing_induced_maps, relative_tensor, same_algebra, Bimodule, BimoduleMap};
use crate::error::{input_err, Error, Result};
use crate::exlin::{Matrix, SparseVec};
use crate::scalar::{Field, OrderedField};
use crate::strat::{collapse_map, pushforward_strat1, PLMap, Strat1D};

/// Structure maps attached to a stratum point with value `M` over `(A, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointStructure<F> {
    /// `a ↦ a·m₀`.
    pub from_left: Matrix<F>,
    /// `b ↦ m₀·b`.
    pub from_right: Matrix<F>,
    /// `A ⊗ M ⊗ B → M`, column `(a·dim M + m)·dim B + b`.
    pub action: Matrix<F>,
}

pub fn point_structure<F: Field>(m: &Bimodule<F>) -> Result<PointStructure<F>> {
    let maps = pointing_induced_maps(m)?;
    let (da, dm, db) = (m.left_algebra().dim(), m.dim(), m.right_algebra().dim());
    let mut cols = Vec::with_capacity(da * dm * db);
    for a in 0..da {
        for v in 0..dm {
            let av = m.left_action(a, v).clone();
            for b in 0..db {
                cols.push(m.act_right(&av, &SparseVec::unit(b)).to_dense(dm));
            }
        }
    }
    let action = Matrix::from_columns(dm, &cols)?;
    let s = PointStructure {
        from_left: maps.left,
        from_right: maps.right,
        action,
    };
    let p = m.pointing().expect("pointed");
    let (ua, ub) = (m.left_algebra().unit(), m.right_algebra().unit());
    let through = |x: Vec<F>| s.action.mul_vec(&x);
    let consistent = (0..da).all(|a| {
        let ea: Vec<F> = unit_dense(da, a);
        through(kron_dense(&kron_dense(&ea, p), ub)) == s.from_left.column(a)
    }) && (0..db).all(|b| through(kron_dense(&kron_dense(ua, p), &unit_dense(db, b))) == s.from_right.column(b))
        && (0..dm).all(|v| through(kron_dense(&kron_dense(ua, &unit_dense(dm, v)), ub)) == unit_dense(dm, v));
    if !consistent {
        return Err(Error::Validation("point structure maps disagree with the actions".into()));
    }
    Ok(s)
}

fn unit_dense<F: Field>(n: usize, i: usize) -> Vec<F> {
    (0..n).map(|k| if k == i { F::one() } else { F::zero() }).collect()
}

#[derive(Clone, Debug)]
pub struct FAPresentation1D<F> {
    strat: Strat1D<F>,
    regions: Vec<Arc<Algebra<F>>>,
    points: Vec<Bimodule<F>>,
    structures: Vec<PointStructure<F>>,
}

impl<F: OrderedField> FAPresentation1D<F> {
    pub fn new(strat: Strat1D<F>, regions: Vec<Arc<Algebra<F>>>, points: Vec<Bimodule<F>>) -> Result<Self> {
        if regions.len() != strat.len() + 1 || points.len() != strat.len() {
            return input_err(format!(
                "{} stratum points need {} regions and {} point values",
                strat.len(),
                strat.len() + 1,
                strat.len()
            ));
        }
        for (i, m) in points.iter().enumerate() {
            if !same_algebra(m.left_algebra(), &regions[i]) || !same_algebra(m.right_algebra(), &regions[i + 1]) {
                return Err(Error::Composition(format!("point {i} does not match its neighbouring regions")));
            }
            if !m.is_pointed() {
                return input_err(format!("point {i} carries an unpointed bimodule"));
            }
        }
        let structures = points.iter().map(point_structure).collect::<Result<_>>()?;
        Ok(Self {
            strat,
            regions,
            points,
            structures,
        })
    }

    pub fn strat(&self) -> &Strat1D<F> {
        &self.strat
    }

    pub fn regions(&self) -> &[Arc<Algebra<F>>] {
        &self.regions
    }

    pub fn points(&self) -> &[Bimodule<F>] {
        &self.points
    }

    pub fn structures(&self) -> &[PointStructure<F>] {
        &self.structures
    }

    fn region_of(&self, x: &F) -> usize {
        self.strat.points().partition_point(|s| s < x)
    }

    fn points_inside(&self, l: &F, r: &F) -> std::ops::Range<usize> {
        self.region_of(l)..self.region_of(r)
    }
}

pub fn fa_from_algebra<F: OrderedField>(a: &Arc<Algebra<F>>) -> FAPresentation1D<F> {
    FAPresentation1D {
        strat: Strat1D::empty(),
        regions: vec![a.clone()],
        points: Vec::new(),
        structures: Vec::new(),
    }
}

pub fn fa_from_pointed_bimodule<F: OrderedField>(m: &Bimodule<F>, s: &F) -> Result<FAPresentation1D<F>> {
    if !m.is_pointed() {
        return input_err("a presentation from a bimodule needs a pointing");
    }
    FAPresentation1D::new(
        Strat1D::new(vec![s.clone()])?,
        vec![m.left_algebra().clone(), m.right_algebra().clone()],
        vec![m.clone()],
    )
}

pub fn algebra_from_fa<F: OrderedField>(f: &FAPresentation1D<F>) -> Result<Arc<Algebra<F>>> {
    if !f.strat.is_empty() {
        return input_err(format!("expected no stratum points, found {}", f.strat.len()));
    }
    Ok(f.regions[0].clone())
}

pub fn bimodule_from_fa<F: OrderedField>(f: &FAPresentation1D<F>) -> Result<Bimodule<F>> {
    if f.strat.len() != 1 {
        return input_err(format!("expected one stratum point, found {}", f.strat.len()));
    }
    Ok(f.points[0].clone())
}

impl<F: Field> PartialEq for FAPresentation1D<F> {
    fn eq(&self, other: &Self) -> bool {
        self.strat == other.strat
            && self.regions.len() == other.regions.len()
            && self.regions.iter().zip(&other.regions).all(|(a, b)| same_algebra(a, b))
            && self.points == other.points
    }
}

/// The value on one connected open interval.
#[derive(Clone, Debug)]
pub enum Value<F> {
    /// A pointless interval inside region `index`.
    Region { index: usize, algebra: Arc<Algebra<F>> },
    /// An interval containing stratum points `first..=last`: their iterated
    /// relative tensor product.
    Points { first: usize, last: usize, bimodule: Bimodule<F> },
}

impl<F: Field> PartialEq for Value<F> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Region { index: i, algebra: a }, Value::Region { index: j, algebra: b }) => i == j && same_algebra(a, b),
            (
                Value::Points { first: f1, last: l1, bimodule: m1 },
                Value::Points { first: f2, last: l2, bimodule: m2 },
            ) => f1 == f2 && l1 == l2 && m1 == m2,
            _ => false,
        }
    }
}

impl<F: Field> Value<F> {
    pub fn dim(&self) -> usize {
        match self {
            Value::Region { algebra, .. } => algebra.dim(),
            Value::Points { bimodule, .. } => bimodule.dim(),
        }
    }

    /// The unit of the algebra, or the pointing of the bimodule.
    pub fn point(&self) -> Vec<F> {
        match self {
            Value::Region { algebra, .. } => algebra.unit().to_vec(),
            Value::Points { bimodule, .. } => bimodule.pointing().expect("presentations are pointed").to_vec(),
        }
    }
}

/// The value on a finite disjoint union of intervals: the tensor product of
/// component values, left to right, with its distinguished point.
#[derive(Clone, Debug)]
pub struct Evaluation<F> {
    pub components: Vec<Value<F>>,
    pub dim: usize,
    pub point: Vec<F>,
}

fn check_open_set<F: OrderedField>(f: &FAPresentation1D<F>, u: &[(F, F)]) -> Result<()> {
    for (l, r) in u {
        if *l < F::zero() || l >= r || *r > F::one() {
            return input_err("open set components must be nonempty subintervals of (0, 1)");
        }
        if f.strat.points().iter().any(|s| s == l || s == r) {
            return input_err("interval endpoint collides with a stratum point");
        }
    }
    if u.windows(2).any(|w| w[0].1 > w[1].0) {
        return input_err("open set components must be disjoint and ordered left to right");
    }
    Ok(())
}

fn component_value<F: OrderedField>(f: &FAPresentation1D<F>, l: &F, r: &F) -> Result<Value<F>> {
    let inside = f.points_inside(l, r);
    if inside.is_empty() {
        let index = f.region_of(l);
        return Ok(Value::Region {
            index,
            algebra: f.regions[index].clone(),
        });
    }
    let (first, last) = (inside.start, inside.end - 1);
    let mut acc = f.points[first].clone();
    for m in &f.points[first + 1..=last] {
        acc = relative_tensor(&acc, m)?.bimodule;
    }
    Ok(Value::Points {
        first,
        last,
        bimodule: acc,
    })
}

pub fn evaluate<F: OrderedField>(f: &FAPresentation1D<F>, u: &[(F, F)]) -> Result<Evaluation<F>> {
    check_open_set(f, u)?;
    let components = u.iter().map(|(l, r)| component_value(f, l, r)).collect::<Result<Vec<_>>>()?;
    let dim = components.iter().map(Value::dim).product();
    let point = components.iter().fold(vec![F::one()], |acc, c| kron_dense(&acc, &c.point()));
    Ok(Evaluation { components, dim, point })
}

/// Iterated multiplication `A^{⊗k} → A`; the unit when `k = 0`.
fn multiplication<F: Field>(a: &Algebra<F>, k: usize) -> Matrix<F> {
    let d = a.dim();
    if k == 0 {
        return Matrix::from_columns(d, &[a.unit().to_vec()]).expect("unit column");
    }
    let mu = Matrix::from_columns(d, &(0..d * d).map(|ij| a.product(ij / d, ij % d).to_dense(d)).collect::<Vec<_>>())
        .expect("product columns");
    let mut acc = Matrix::identity(d);
    for _ in 1..k {
        acc = mu.checked_mul(&acc.kron(&Matrix::identity(d))).expect("shapes agree");
    }
    acc
}

/// The structure map from the value on `inner` to the value on `outer`,
/// for `inner ⊆ outer` and `outer` containing at most one stratum point.
pub fn structure_map<F: OrderedField>(f: &FAPresentation1D<F>, inner: &[(F, F)], outer: &(F, F)) -> Result<Matrix<F>> {
    check_open_set(f, inner)?;
    check_open_set(f, std::slice::from_ref(outer))?;
    if inner.iter().any(|(l, r)| *l < outer.0 || *r > outer.1) {
        return input_err("inner open set is not contained in the outer interval");
    }
    let around = f.points_inside(&outer.0, &outer.1);
    match around.len() {
        0 => {
            let a = &f.regions[f.region_of(&outer.0)];
            Ok(multiplication(a, inner.len()))
        }
        1 => {
            let i = around.start;
            let s = &f.strat.points()[i];
            let m = &f.points[i];
            let left = inner.iter().filter(|(_, r)| r < s).count();
            let right = inner.iter().filter(|(l, _)| l > s).count();
            let middle = if left + right < inner.len() {
                Matrix::identity(m.dim())
            } else {
                Matrix::from_columns(m.dim(), &[m.pointing().expect("pointed").to_vec()])?
            };
            let spread = multiplication(&f.regions[i], left)
                .kron(&middle)
                .kron(&multiplication(&f.regions[i + 1], right));
            f.structures[i].action.checked_mul(&spread)
        }
        _ => Err(Error::Unsupported("structure maps into intervals with several stratum points".into())),
    }
}

/// `p_* F`: stratum points with the same image merge into one, whose value
/// is the relative tensor product of the merged values.
pub fn pushforward<F: OrderedField>(f: &FAPresentation1D<F>, p: &PLMap<F>) -> Result<FAPresentation1D<F>> {
    if !p.preserves_endpoints() {
        return Err(Error::Unsupported("pushforward along a map that moves the endpoints".into()));
    }
    let images = f.strat.points().iter().map(|x| p.eval(x)).collect::<Result<Vec<_>>>()?;
    if images.iter().any(|y| y.is_zero() || y.is_one()) {
        return Err(Error::Unsupported("pushforward pushes a stratum point onto the boundary".into()));
    }
    let mut regions = vec![f.regions[0].clone()];
    let mut points = Vec::new();
    let mut i = 0;
    while i < images.len() {
        let mut j = i;
        while j + 1 < images.len() && images[j + 1] == images[i] {
            j += 1;
        }
        let mut acc = f.points[i].clone();
        for m in &f.points[i + 1..=j] {
            acc = relative_tensor(&acc, m)?.bimodule;
        }
        points.push(acc);
        regions.push(f.regions[j + 1].clone());
        i = j + 1;
    }
    FAPresentation1D::new(pushforward_strat1(&f.strat, p), regions, points)
}

/// Glues `f` on the left half and `g` on the right half of the interval,
/// then collapses the segment between their innermost stratum points.
pub fn geometric_compose<F: OrderedField>(f: &FAPresentation1D<F>, g: &FAPresentation1D<F>) -> Result<FAPresentation1D<F>> {
    if !same_algebra(f.regions.last().expect("regions"), &g.regions[0]) {
        return Err(Error::Composition("target region of the first presentation differs from the source of the second".into()));
    }
    let half = F::ratio(1, 2);
    let mut xs: Vec<F> = f.strat.points().iter().map(|x| x.clone() * half.clone()).collect();
    xs.extend(g.strat.points().iter().map(|x| (F::one() + x.clone()) * half.clone()));
    let mut regions = f.regions.clone();
    regions.extend(g.regions[1..].iter().cloned());
    let mut points = f.points.clone();
    points.extend(g.points.iter().cloned());
    let glued = FAPresentation1D {
        strat: Strat1D::new(xs)?,
        regions,
        points,
        structures: f.structures.iter().chain(&g.structures).cloned().collect(),
    };
    match (f.strat.points().last(), g.strat.points().first()) {
        (Some(b), Some(a)) => {
            let b = b.clone() * half.clone();
            let a = (F::one() + a.clone()) * half;
            pushforward(&glued, &collapse_map(&b, &a)?)
        }
        _ => Ok(glued),
    }
}

/// Geometric and algebraic composites of two pointed bimodules, with a
/// pointed isomorphism between them when one exists.
#[derive(Clone, Debug)]
pub struct Agreement<F> {
    pub geometric: Bimodule<F>,
    pub algebraic: Bimodule<F>,
    pub witness: Option<BimoduleMap<F>>,
}

impl<F> Agreement<F> {
    pub fn holds(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn composition_agreement<F: OrderedField>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<Agreement<F>> {
    let half = F::ratio(1, 2);
    let composite = geometric_compose(&fa_from_pointed_bimodule(m, &half)?, &fa_from_pointed_bimodule(n, &half)?)?;
    let geometric = bimodule_from_fa(&composite)?;
    let algebraic = relative_tensor(m, n)?.bimodule;
    let witness = pointed_iso_search(&geometric, &algebraic);
    Ok(Agreement {
        geometric,
        algebraic,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{column_vectors, matrix_algebra, row_vectors, standard_algebras, standard_bimodules};
    use crate::{q, Rational};

    fn m2() -> Arc<Algebra<Rational>> {
        Arc::new(matrix_algebra(2))
    }

    #[test]
    fn roundtrips() {
        for (_, a) in standard_algebras::<Rational>() {
            let a = Arc::new(a);
            let f = fa_from_algebra(&a);
            assert!(Arc::ptr_eq(&algebra_from_fa(&f).unwrap(), &a));
            assert!(bimodule_from_fa(&f).is_err());
        }
        for (_, m) in standard_bimodules::<Rational>() {
            let f = fa_from_pointed_bimodule(&m, &q(1, 2)).unwrap();
            assert_eq!(bimodule_from_fa(&f).unwrap(), m);
        }
        let unpointed = column_vectors::<Rational>(2).with_pointing(None).unwrap();
        assert!(fa_from_pointed_bimodule(&unpointed, &q(1, 2)).is_err());
        assert!(fa_from_pointed_bimodule(&column_vectors::<Rational>(2), &q(1, 1)).is_err());
    }

    #[test]
    fn two_points_are_not_a_bimodule() {
        let f = fa_from_pointed_bimodule(&column_vectors::<Rational>(2), &q(1, 2)).unwrap();
        let g = fa_from_pointed_bimodule(&row_vectors::<Rational>(2), &q(1, 2)).unwrap();
        let glued = geometric_compose(&fa_from_algebra(&m2()), &f).unwrap();
        assert_eq!(glued.strat().len(), 1);
        let both = FAPresentation1D::new(
            Strat1D::new(vec![q(1, 3), q(2, 3)]).unwrap(),
            vec![f.regions()[0].clone(), f.regions()[1].clone(), g.regions()[1].clone()],
            vec![f.points()[0].clone(), g.points()[0].clone()],
        )
        .unwrap();
        assert!(bimodule_from_fa(&both).is_err());
        let e = evaluate(&both, &[(q(1, 4), q(3, 4))]).unwrap();
        assert_eq!(e.dim, 4);
    }

    #[test]
    fn evaluation_examples() {
        let a = m2();
        let f = fa_from_algebra(&a);
        let e = evaluate(&f, &[(q(1, 8), q(1, 4)), (q(1, 2), q(3, 4))]).unwrap();
        assert_eq!(e.dim, 16);
        assert_eq!(e.point, kron_dense(a.unit(), a.unit()));
        let empty = evaluate(&f, &[]).unwrap();
        assert_eq!((empty.dim, empty.point), (1, vec![q(1, 1)]));

        let m = column_vectors::<Rational>(2);
        let fm = fa_from_pointed_bimodule(&m, &q(1, 2)).unwrap();
        let e = evaluate(&fm, &[(q(1, 4), q(3, 4))]).unwrap();
        assert_eq!(e.components[0], Value::Points { first: 0, last: 0, bimodule: m.clone() });
        assert!(evaluate(&fm, &[(q(1, 4), q(1, 2))]).is_err());
        assert!(evaluate(&fm, &[(q(1, 4), q(3, 8)), (q(1, 8), q(3, 4))]).is_err());
        let left = evaluate(&fm, &[(q(0, 1), q(1, 4))]).unwrap();
        assert_eq!(left.dim, 4);
    }

    #[test]
    fn structure_maps() {
        let m = column_vectors::<Rational>(2);
        let fm = fa_from_pointed_bimodule(&m, &q(1, 2)).unwrap();
        let outer = (q(1, 8), q(7, 8));
        // Nested intervals of the same type: identity.
        assert!(structure_map(&fm, &[(q(1, 4), q(3, 4))], &outer).unwrap().is_identity());
        assert!(structure_map(&fm, &[(q(1, 8), q(1, 4))], &(q(0, 1), q(3, 8))).unwrap().is_identity());
        // Out of the empty set: the pointing.
        let from_empty = structure_map(&fm, &[], &outer).unwrap();
        assert_eq!(from_empty.column(0), m.pointing().unwrap().to_vec());
        // A region interval to the left: a ↦ a·m₀.
        let s = structure_map(&fm, &[(q(1, 4), q(3, 8))], &outer).unwrap();
        assert_eq!(s, fm.structures()[0].from_left);
        let s = structure_map(&fm, &[(q(5, 8), q(3, 4))], &outer).unwrap();
        assert_eq!(s, fm.structures()[0].from_right);
        // Two region intervals: multiplication.
        let f = fa_from_algebra(&m2());
        let mu = structure_map(&f, &[(q(1, 8), q(1, 4)), (q(1, 2), q(3, 4))], &(q(0, 1), q(1, 1))).unwrap();
        assert_eq!(mu.rows(), 4);
        assert_eq!(mu.cols(), 16);
        assert!(structure_map(&f, &[(q(1, 8), q(1, 4))], &(q(1, 2), q(1, 1))).is_err());
    }

    #[test]
    fn geometric_composition() {
        let cols = column_vectors::<Rational>(2);
        let rows = row_vectors::<Rational>(2);
        let half = q(1, 2);
        let fc = fa_from_pointed_bimodule(&cols, &half).unwrap();
        let fr = fa_from_pointed_bimodule(&rows, &half).unwrap();
        let cr = geometric_compose(&fc, &fr).unwrap();
        let rc = geometric_compose(&fr, &fc).unwrap();
        assert_eq!(cr.strat().points(), std::slice::from_ref(&half));
        assert_eq!(bimodule_from_fa(&cr).unwrap().dim(), 4);
        assert_eq!(bimodule_from_fa(&rc).unwrap().dim(), 1);
        assert!(geometric_compose(&fc, &fc).is_err());

        let a = m2();
        let id = fa_from_pointed_bimodule(&Bimodule::regular(&a), &half).unwrap();
        let twice = geometric_compose(&id, &id).unwrap();
        assert!(pointed_iso_search(&bimodule_from_fa(&twice).unwrap(), &Bimodule::regular(&a)).is_some());
    }

    #[test]
    fn agreement_on_corpus_pairs() {
        let bims = standard_bimodules::<Rational>();
        let mut pairs = 0;
        for (_, m) in &bims {
            for (_, n) in &bims {
                if same_algebra(m.right_algebra(), n.left_algebra()) && m.dim() * n.dim() <= 64 {
                    assert!(composition_agreement(m, n).unwrap().holds());
                    pairs += 1;
                }
            }
        }
        assert!(pairs >= 10, "{pairs}");
    }

    #[test]
    fn pushforward_is_functorial_on_presentations() {
        let cols = column_vectors::<Rational>(2);
        let rows = row_vectors::<Rational>(2);
        let f = FAPresentation1D::new(
            Strat1D::new(vec![q(1, 5), q(2, 5), q(3, 5)]).unwrap(),
            vec![Arc::new(crate::corpus::scalars()), m2(), Arc::new(crate::corpus::scalars()), m2()],
            vec![rows.clone(), cols.clone(), rows.clone()],
        )
        .unwrap();
        let p = collapse_map(&q(1, 5), &q(2, 5)).unwrap();
        let r = collapse_map(&q(1, 4), &q(1, 2)).unwrap();
        let stepwise = pushforward(&pushforward(&f, &p).unwrap(), &r).unwrap();
        let direct = pushforward(&f, &p.then(&r)).unwrap();
        assert_eq!(stepwise.strat(), direct.strat());
        assert_eq!(stepwise.points().len(), direct.points().len());
        for (x, y) in stepwise.points().iter().zip(direct.points()) {
            assert!(pointed_iso_search(x, y).is_some());
        }
    }
}
