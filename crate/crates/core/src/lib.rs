//! Exact symbolic invariants of non-reduced complex subspaces.
//!
//! For a polynomial ideal J in split coordinates (z; w) whose zero set is
//! the coordinate plane Z = {w = 0}, this crate computes Kähler and strongly
//! holomorphic differential modules, free resolutions with purity and
//! Cohen–Macaulay diagnostics, Ext modules, Barlet-sheaf generators as
//! Coleff–Herrera current expressions, Noetherian differential operators,
//! and the duality pairing matrix — all in exact rational arithmetic.
//!
//! The mathematical core is generic over the coefficient field through the
//! [`scalar::Scalar`] trait; the concrete aliases below fix the exact
//! rational instantiation used everywhere in practice.

pub mod scalar;
pub mod ring;
pub mod order;
pub mod poly;
pub mod parse;
pub mod gb;
pub mod matrix;
pub mod ideal;
pub mod homalg;
pub mod forms;
pub mod kaehler;
pub mod zmod;
pub mod currents;
pub mod sample;
pub mod barlet;
pub mod pairing;








pub use order::MonomialOrder;
pub use ring::Ring;

/// Exact rational coefficients.
pub type Rat = num_rational::BigRational;

/// Polynomial over ℚ.
pub type Poly = poly::Polynomial<Rat>;

/// Free-module element over ℚ.
pub type Vector = gb::VecPoly<Rat>;

/// Matrix over ℚ[z, w].
pub type Matrix = matrix::PolyMat<Rat>;

/// Ideal over ℚ[z, w].
pub type QIdeal = ideal::Ideal<Rat>;

/// Default monomial order used by the CLI and the worked examples.
pub const DEFAULT_ORDER: MonomialOrder = MonomialOrder::DegRevLex;
