//! Exact counting of nonattacking placements of rider pieces on `n × n`
//! boards.
//!
//! The crate has three layers:
//!
//! * ground truth: [`enumerate`] counts independent sets in the attack graph
//!   by bitset backtracking, and [`lines`] enumerates line sizes directly;
//! * closed forms: [`lines`] and [`closed`] evaluate the known formulas for
//!   line multisets, attacking pairs and triples, two pieces, and one-move
//!   riders with up to four pieces;
//! * analysis: [`quasi`] fits quasipolynomials to count sequences with exact
//!   rational arithmetic, detects periods, builds generating functions, and
//!   [`analysis`] runs theorem checks and conjecture probes over sweeps.
//!
//! The polynomial machinery is generic over an exact [`scalar::Field`];
//! the aliases below fix it to arbitrary-precision rationals.

pub mod analysis;
pub mod cache;
pub mod closed;
pub mod enumerate;
pub mod error;
pub mod linalg;
pub mod lines;
pub mod model;
pub mod poly;
pub mod quasi;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{parse_piece, BoardSize, Move, MoveNormalized, Piece};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Polynomial with rational coefficients.
pub type Poly = poly::Polynomial<Rational>;
/// Quasipolynomial with rational constituents.
pub type QuasiPoly = quasi::Quasipolynomial<Rational>;
/// Coefficient table of a rational quasipolynomial.
pub type CoeffTable = quasi::CoefficientTable<Rational>;
/// Reduced generating function with integer polynomials.
pub type Gf = quasi::gf::RationalGF;
