//! Scalar abstraction shared by every module.
//!
//! All algorithms are written against [`Field`]; the crate root fixes the
//! concrete choice used by the rest of the toolchain to exact rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A field whose equality is exact.
///
/// Every computation in this crate decides equalities (`x == 0`, `A·B == I`),
/// so the implementing type must compare exactly. Arbitrary-precision
/// rationals are the intended instance; machine floats satisfy the bounds
/// but only give meaningful answers on inputs with exact binary
/// representations.
pub trait Field:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("field cannot represent a small integer")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Field for T where
    T: Clone + Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// A totally ordered field, needed by the interval geometry.
pub trait OrderedField: Field + PartialOrd {}

impl<T: Field + PartialOrd> OrderedField for T {}
