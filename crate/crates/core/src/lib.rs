//! Exact computations in the Morita bicategory of finite-dimensional
//! algebras and in its factorization-algebra presentation.
//!
//! Everything is generic over a [`Field`] with exact equality; the aliases
//! below fix the rational instance the rest of the toolchain uses.

pub mod algebra;
pub mod bimod;
pub mod corpus;
pub mod diagram;
pub mod dict;
mod error;
pub mod exlin;
pub mod morita;
pub mod pointed;
mod scalar;
pub mod strat;

pub use error::{Error, Result};
pub use scalar::{Field, OrderedField};

/// Arbitrary-precision rationals, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub type RatMatrix = exlin::Matrix<Rational>;
pub type RatSubspace = exlin::Subspace<Rational>;
pub type RatQuotient = exlin::QuotientPresentation<Rational>;
pub type QAlgebra = algebra::Algebra<Rational>;
pub type QBimodule = bimod::Bimodule<Rational>;
pub type QBimoduleMap = bimod::BimoduleMap<Rational>;
pub type QDualityData = morita::DualityData<Rational>;
pub type QAdjunction = morita::AdjunctionData<Rational>;
pub type QPointedAdjunction = pointed::PointedAdjunction<Rational>;
pub type QPLMap = strat::PLMap<Rational>;
pub type QPresentation = dict::FAPresentation1D<Rational>;
pub type QEnvironment = diagram::Environment<Rational>;

/// Shorthand for an exact rational `num/den`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
