//! Constructive polynomial partitioning of 3-space adapted to lines and
//! segments, and its application to depth-cycle elimination.
//!
//! The crate is organised bottom-up:
//!
//! - [`polynomial`]: exact sparse multivariate polynomials, univariate real
//!   root isolation, resultants and the Veronese lift. Generic over the
//!   scalar type through [`Scalar`]; the pipeline itself always runs on
//!   [`Rational`].
//! - [`geometry`]: lines, segments, weighted points and vertical visibility.
//! - [`point_partition`]: randomized dissecting polynomials and r-partitions
//!   of weighted point multisets.
//! - [`curve_partition`]: the iterative first-stage partition for lines.
//! - [`cutting`]: planar trapezoidal decompositions and the second-stage
//!   refinement of unacceptable cells.
//! - [`depth`]: the depth relation, the three cut families and recursive
//!   cycle elimination.
//! - [`oracle`]: brute-force verifiers used by tests and by `polypart verify`.

pub mod curve_partition;
pub mod cutting;
pub mod depth;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod oracle;
pub mod params;
pub mod point_partition;
pub mod polynomial;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use params::Params;
pub use scalar::Scalar;

/// Exact rational scalar used by every pipeline stage.
pub type Rational = num_rational::BigRational;

/// Trivariate (or bivariate) polynomial over [`Rational`].
pub type Poly = polynomial::Polynomial<Rational>;

/// Univariate polynomial over [`Rational`].
pub type UniPoly = polynomial::UniPolynomial<Rational>;

/// Floating-point instantiation of the polynomial kernel; useful for quick
/// numerical experiments, never used for certified sign tests.
pub type PolyF64 = polynomial::Polynomial<f64>;

/// Floating-point univariate polynomial.
pub type UniPolyF64 = polynomial::UniPolynomial<f64>;
