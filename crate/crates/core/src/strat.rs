//! Piecewise-linear maps of the unit interval, finite stratifications of the
//! interval and affine flags in the square.

use crate::error::{input_err, Result};
use crate::scalar::OrderedField;

/// A continuous, monotone non-decreasing piecewise-linear map `[0,1] → [0,1]`,
/// linear between consecutive breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct PLMap<F> {
    breakpoints: Vec<F>,
    values: Vec<F>,
}

fn in_unit<F: OrderedField>(x: &F) -> bool {
    *x >= F::zero() && *x <= F::one()
}

impl<F: OrderedField> PLMap<F> {
    pub fn new(breakpoints: Vec<F>, values: Vec<F>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return input_err("a PL map needs matching breakpoints and values, at least two");
        }
        if breakpoints[0] != F::zero() || *breakpoints.last().unwrap() != F::one() {
            return input_err("breakpoints must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return input_err("breakpoints must be strictly increasing");
        }
        if !values.iter().all(in_unit) {
            return input_err("values must lie in [0, 1]");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return input_err("PL maps must be monotone non-decreasing");
        }
        Ok(Self { breakpoints, values })
    }

    pub fn identity() -> Self {
        Self {
            breakpoints: vec![F::zero(), F::one()],
            values: vec![F::zero(), F::one()],
        }
    }

    pub fn breakpoints(&self) -> &[F] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn eval(&self, x: &F) -> Result<F> {
        if !in_unit(x) {
            return input_err("PL maps are evaluated on [0, 1]");
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &F) -> F {
        let k = self.breakpoints.partition_point(|b| b <= x).clamp(1, self.breakpoints.len() - 1);
        let (x0, x1) = (&self.breakpoints[k - 1], &self.breakpoints[k]);
        let (y0, y1) = (&self.values[k - 1], &self.values[k]);
        y0.clone() + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    pub fn preserves_endpoints(&self) -> bool {
        self.values[0] == F::zero() && *self.values.last().unwrap() == F::one()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Self) -> Self {
        let mut xs: Vec<F> = self.breakpoints.clone();
        for w in 0..self.breakpoints.len() - 1 {
            let (x0, x1) = (&self.breakpoints[w], &self.breakpoints[w + 1]);
            let (y0, y1) = (&self.values[w], &self.values[w + 1]);
            if y0 == y1 {
                continue;
            }
            for t in &next.breakpoints {
                if t > y0 && t < y1 {
                    xs.push(x0.clone() + (t.clone() - y0.clone()) * (x1.clone() - x0.clone()) / (y1.clone() - y0.clone()));
                }
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("ordered field"));
        xs.dedup();
        let values = xs.iter().map(|x| next.eval_unchecked(&self.eval_unchecked(x))).collect();
        Self { breakpoints: xs, values }.simplified()
    }

    /// Drops breakpoints where the map does not bend.
    pub fn simplified(&self) -> Self {
        let n = self.breakpoints.len();
        let mut bs = vec![self.breakpoints[0].clone()];
        let mut vs = vec![self.values[0].clone()];
        for k in 1..n - 1 {
            let (x0, y0) = (bs.last().unwrap().clone(), vs.last().unwrap().clone());
            let (x1, y1) = (&self.breakpoints[k], &self.values[k]);
            let (x2, y2) = (&self.breakpoints[k + 1], &self.values[k + 1]);
            let collinear = (y1.clone() - y0.clone()) * (x2.clone() - x1.clone())
                == (y2.clone() - y1.clone()) * (x1.clone() - x0);
            if !collinear {
                bs.push(x1.clone());
                vs.push(y1.clone());
            }
        }
        bs.push(self.breakpoints[n - 1].clone());
        vs.push(self.values[n - 1].clone());
        Self {
            breakpoints: bs,
            values: vs,
        }
    }
}

/// The collapse-and-rescale map `ϱ^b_a`, crushing `[b, a]` to a point and
/// rescaling the rest linearly; the identity when `a = b`.
pub fn collapse_map<F: OrderedField>(b: &F, a: &F) -> Result<PLMap<F>> {
    if *b < F::zero() || b > a || *a > F::one() {
        return input_err("collapse needs 0 ≤ b ≤ a ≤ 1");
    }
    if b.is_zero() && a.is_one() {
        return input_err("cannot collapse the whole interval");
    }
    if a == b {
        return Ok(PLMap::identity());
    }
    let scale = F::one() - (a.clone() - b.clone());
    let plateau = b.clone() / scale;
    let mut xs = vec![F::zero()];
    let mut ys = vec![F::zero()];
    if !b.is_zero() {
        xs.push(b.clone());
        ys.push(plateau.clone());
    }
    if !a.is_one() {
        xs.push(a.clone());
        ys.push(plateau);
    }
    xs.push(F::one());
    ys.push(F::one());
    PLMap::new(xs, ys)
}

/// A finite set of points in the open interval.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Strat1D<F> {
    points: Vec<F>,
}

impl<F: OrderedField> Strat1D<F> {
    pub fn new(points: Vec<F>) -> Result<Self> {
        if points.iter().any(|x| *x <= F::zero() || *x >= F::one()) {
            return input_err("stratum points must lie strictly inside (0, 1)");
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return input_err("stratum points must be strictly increasing");
        }
        Ok(Self { points })
    }

    /// Sorts, removes duplicates and drops points outside `(0, 1)`.
    pub fn from_points(mut points: Vec<F>) -> Self {
        points.retain(|x| *x > F::zero() && *x < F::one());
        points.sort_by(|a, b| a.partial_cmp(b).expect("ordered field"));
        points.dedup();
        Self { points }
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[F] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Images of the stratum points, merged and restricted to the open interval.
pub fn pushforward_strat1<F: OrderedField>(s: &Strat1D<F>, p: &PLMap<F>) -> Strat1D<F> {
    Strat1D::from_points(s.points.iter().map(|x| p.eval_unchecked(x)).collect())
}

/// The stratification reflected through `x ↦ 1 − x`.
pub fn reverse1<F: OrderedField>(s: &Strat1D<F>) -> Strat1D<F> {
    Strat1D::from_points(s.points.iter().map(|x| F::one() - x.clone()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldSide {
    /// `f₁`: `x` on `[0, 1/2]`, `1 − x` on `[1/2, 1]`.
    Right,
    /// `g₁`: `1 − x` on `[0, 1/2]`, `x` on `[1/2, 1]`.
    Left,
}

/// A map folding the interval at `1/2`, stored as its two monotone branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldMap {
    pub side: FoldSide,
}

pub fn crease_fold(side: FoldSide) -> FoldMap {
    FoldMap { side }
}

impl FoldMap {
    fn reflects_lower(&self) -> bool {
        self.side == FoldSide::Left
    }

    pub fn eval<F: OrderedField>(&self, x: &F) -> Result<F> {
        if !in_unit(x) {
            return input_err("fold maps are evaluated on [0, 1]");
        }
        let half = F::ratio(1, 2);
        let lower = *x <= half;
        Ok(if lower == self.reflects_lower() {
            F::one() - x.clone()
        } else {
            x.clone()
        })
    }

    /// The at most two points mapping to `y`, in increasing order.
    pub fn preimage<F: OrderedField>(&self, y: &F) -> Vec<F> {
        let half = F::ratio(1, 2);
        let (lo, hi) = if self.reflects_lower() {
            (half.clone(), F::one())
        } else {
            (F::zero(), half.clone())
        };
        if *y < lo || *y > hi {
            return Vec::new();
        }
        let mut out = vec![y.clone(), F::one() - y.clone()];
        out.sort_by(|a, b| a.partial_cmp(b).expect("ordered field"));
        out.dedup();
        out
    }

    /// The fold point shared by the branches.
    pub fn fold_point<F: OrderedField>(&self) -> F {
        F::ratio(1, 2)
    }
}

/// An affine flag in the square: an optional vertical line `x = a¹` and an
/// optional marked height `a²` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strat2D<F> {
    pub vertical: Option<F>,
    pub marked: Option<F>,
}

impl<F: OrderedField> Strat2D<F> {
    pub fn new(vertical: Option<F>, marked: Option<F>) -> Result<Self> {
        let s = Self { vertical, marked };
        if !s.is_flag() {
            return input_err("not an affine flag: coordinates must lie in (0, 1) and a marked point needs a line");
        }
        Ok(s)
    }

    pub fn object() -> Self {
        Self {
            vertical: None,
            marked: None,
        }
    }

    pub fn is_flag(&self) -> bool {
        let open = |x: &F| *x > F::zero() && *x < F::one();
        self.vertical.as_ref().is_none_or(open)
            && self.marked.as_ref().is_none_or(open)
            && (self.marked.is_none() || self.vertical.is_some())
    }

    /// `(x, y) ↦ (1 − x, y)`.
    pub fn reversed(&self) -> Self {
        Self {
            vertical: self.vertical.as_ref().map(|a| F::one() - a.clone()),
            marked: self.marked.clone(),
        }
    }

    /// `(x, y) ↦ (1 − x, 1 − y)`.
    pub fn inverted(&self) -> Self {
        Self {
            vertical: self.vertical.as_ref().map(|a| F::one() - a.clone()),
            marked: self.marked.as_ref().map(|a| F::one() - a.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlueDirection {
    Horizontal,
    Vertical,
}

/// Places two features at `p/2` and `(1 + q)/2` on a doubled interval and
/// collapses the segment between them.
fn merge<F: OrderedField>(p: &Option<F>, q: &Option<F>) -> Result<Option<F>> {
    Ok(match (p, q) {
        (Some(p), Some(q)) => {
            let half = F::ratio(1, 2);
            let b = p.clone() * half.clone();
            let a = (F::one() + q.clone()) * half;
            Some(collapse_map(&b, &a)?.eval_unchecked(&b))
        }
        // A single feature only needs rescaling back to the unit interval.
        (Some(p), None) | (None, Some(p)) => Some(p.clone()),
        (None, None) => None,
    })
}

/// Glues two flags side by side (horizontal) or on top of each other
/// (vertical) and pushes forward along the collapse-and-rescale map.
pub fn glue_and_collapse<F: OrderedField>(
    s1: &Strat2D<F>,
    s2: &Strat2D<F>,
    direction: GlueDirection,
) -> Result<Strat2D<F>> {
    if !s1.is_flag() || !s2.is_flag() {
        return input_err("glue_and_collapse needs affine flags");
    }
    let out = match direction {
        GlueDirection::Horizontal => {
            let marked = match (&s1.marked, &s2.marked) {
                (Some(x), Some(y)) if x != y => {
                    return input_err("horizontally glued marked points must be at the same height")
                }
                (Some(x), _) | (_, Some(x)) => Some(x.clone()),
                (None, None) => None,
            };
            Strat2D {
                vertical: merge(&s1.vertical, &s2.vertical)?,
                marked,
            }
        }
        GlueDirection::Vertical => {
            if s1.vertical != s2.vertical {
                return input_err("vertically glued flags must share their vertical line");
            }
            Strat2D {
                vertical: s1.vertical.clone(),
                marked: merge(&s1.marked, &s2.marked)?,
            }
        }
    };
    debug_assert!(out.is_flag());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, Rational};
    use proptest::prelude::*;

    #[test]
    fn collapse_examples() {
        let id = collapse_map(&q(1, 3), &q(1, 3)).unwrap();
        assert_eq!(id, PLMap::identity());
        let c = collapse_map(&q(1, 4), &q(1, 2)).unwrap();
        assert_eq!(c.eval(&q(3, 4)).unwrap(), q(2, 3));
        assert_eq!(c.eval(&q(1, 3)).unwrap(), q(1, 3));
        assert_eq!(collapse_map(&q(0, 1), &q(1, 2)).unwrap().eval(&q(1, 4)).unwrap(), q(0, 1));
        assert!(collapse_map(&q(0, 1), &q(1, 1)).is_err());
        assert!(collapse_map(&q(1, 2), &q(1, 4)).is_err());
        assert!(c.eval(&q(3, 2)).is_err());
        assert_eq!(c.eval(&q(0, 1)).unwrap(), q(0, 1));
    }

    #[test]
    fn pushforward_examples() {
        let s = Strat1D::new(vec![q(3, 10), q(7, 10)]).unwrap();
        assert_eq!(pushforward_strat1(&s, &PLMap::identity()), s);
        let merged = pushforward_strat1(&s, &collapse_map(&q(3, 10), &q(7, 10)).unwrap());
        assert_eq!(merged.points(), &[q(1, 2)]);
        let one = Strat1D::new(vec![q(1, 2)]).unwrap();
        let pushed = pushforward_strat1(&one, &collapse_map(&q(0, 1), &q(1, 4)).unwrap());
        assert_eq!(pushed.points(), &[q(1, 3)]);
    }

    #[test]
    fn reverse_examples() {
        let s = Strat1D::new(vec![q(1, 4)]).unwrap();
        assert_eq!(reverse1(&s).points(), &[q(3, 4)]);
        let sym = Strat1D::new(vec![q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(reverse1(&sym), sym);
        assert!(reverse1(&Strat1D::<Rational>::empty()).is_empty());
        let f = Strat2D::new(Some(q(1, 4)), Some(q(1, 3))).unwrap();
        assert_eq!(f.reversed(), Strat2D::new(Some(q(3, 4)), Some(q(1, 3))).unwrap());
        assert_eq!(f.inverted(), Strat2D::new(Some(q(3, 4)), Some(q(2, 3))).unwrap());
    }

    #[test]
    fn fold_examples() {
        let f1 = crease_fold(FoldSide::Right);
        let g1 = crease_fold(FoldSide::Left);
        assert_eq!(f1.eval(&q(3, 4)).unwrap(), q(1, 4));
        assert_eq!(f1.eval(&q(1, 4)).unwrap(), q(1, 4));
        assert_eq!(g1.eval(&q(1, 4)).unwrap(), q(3, 4));
        assert_eq!(f1.preimage(&q(1, 4)), vec![q(1, 4), q(3, 4)]);
        assert_eq!(f1.preimage(&q(1, 2)), vec![q(1, 2)]);
        assert!(f1.preimage(&q(3, 4)).is_empty());
        assert_eq!(g1.preimage(&q(3, 4)).len(), 2);
    }

    #[test]
    fn glue_examples() {
        let a = Strat2D::new(Some(q(3, 10)), None).unwrap();
        let b = Strat2D::new(Some(q(7, 10)), None).unwrap();
        let glued = glue_and_collapse(&a, &b, GlueDirection::Horizontal).unwrap();
        assert_eq!(glued, Strat2D::new(Some(q(1, 2)), None).unwrap());
        assert_eq!(glue_and_collapse(&Strat2D::object(), &a, GlueDirection::Horizontal).unwrap(), a);
        let m1 = Strat2D::new(Some(q(1, 2)), Some(q(1, 4))).unwrap();
        let m2 = Strat2D::new(Some(q(1, 2)), Some(q(3, 4))).unwrap();
        let v = glue_and_collapse(&m1, &m2, GlueDirection::Vertical).unwrap();
        assert_eq!(v.vertical, Some(q(1, 2)));
        assert!(v.marked.is_some() && v.is_flag());
        assert!(glue_and_collapse(&m1, &a, GlueDirection::Vertical).is_err());
        let bad = Strat2D {
            vertical: None,
            marked: Some(q(1, 2)),
        };
        assert!(glue_and_collapse(&bad, &a, GlueDirection::Horizontal).is_err());
    }

    fn unit_rational() -> impl Strategy<Value = Rational> {
        (0i64..=64).prop_map(|n| q(n, 64))
    }

    fn monotone_map() -> impl Strategy<Value = PLMap<Rational>> {
        proptest::collection::btree_set(1i64..48, 0..5).prop_flat_map(|xs| {
            let n = xs.len();
            proptest::collection::vec(0i64..=48, n).prop_map(move |mut ys| {
                ys.sort_unstable();
                let mut b = vec![q(0, 1)];
                b.extend(xs.iter().map(|&x| q(x, 48)));
                b.push(q(1, 1));
                let mut v = vec![q(0, 1)];
                v.extend(ys.iter().map(|&y| q(y, 48)));
                v.push(q(1, 1));
                PLMap::new(b, v).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn collapse_is_monotone_and_onto(b in unit_rational(), a in unit_rational()) {
            let (b, a) = if b <= a { (b, a) } else { (a, b) };
            prop_assume!(!(b == q(0, 1) && a == q(1, 1)));
            let c = collapse_map(&b, &a).unwrap();
            prop_assert!(c.preserves_endpoints());
            prop_assert!(c.values().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn reverse_is_involution(xs in proptest::collection::btree_set(1i64..100, 0..6)) {
            let s = Strat1D::new(xs.iter().map(|&x| q(x, 100)).collect()).unwrap();
            prop_assert_eq!(reverse1(&reverse1(&s)), s);
        }

        #[test]
        fn composition_matches_pointwise(p in monotone_map(), r in monotone_map(), x in unit_rational()) {
            let composed = p.then(&r);
            prop_assert_eq!(composed.eval(&x).unwrap(), r.eval(&p.eval(&x).unwrap()).unwrap());
        }

        #[test]
        fn glue_outputs_flags(v1 in 1i64..20, v2 in 1i64..20, m in 1i64..20, dir in any::<bool>()) {
            let s1 = Strat2D::new(Some(q(v1, 20)), Some(q(m, 20))).unwrap();
            let s2 = Strat2D::new(Some(q(if dir { v1 } else { v2 }, 20)), Some(q(m, 20))).unwrap();
            let d = if dir { GlueDirection::Vertical } else { GlueDirection::Horizontal };
            prop_assert!(glue_and_collapse(&s1, &s2, d).unwrap().is_flag());
        }
    }
}
