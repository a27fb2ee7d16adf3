//! Exact linear algebra over the Novikov ring and the combinatorics of
//! 2-dimensional SYZ bases.
//!
//! The crate has four layers:
//!
//! * [`novikov`] — the Novikov field `Λ = { Σ aᵢ T^{λᵢ} }` over ℚ or 𝔽ₚ,
//!   with exponents living in a finitely generated ℚ-span of declared
//!   period symbols so that mutually irrational periods are exact.
//! * [`complex`] — Banach (filtered) complexes over the Novikov ring:
//!   validation, barcode homology by valuation-pivot reduction, window and
//!   infinitesimal ranks, leading symbols, telescope colimits and the
//!   T-adic spectral sequence of a filtered complex.
//! * [`geom`] — integral affine geometry of the base: eigenray diagrams,
//!   Delzant polygons, support values, admissible inclusions and convex
//!   smoothings.
//! * [`tropical`] — the dual-fan partial monoid of a polygon, the graded
//!   module it carries, restriction maps, first spectral pages, and the
//!   Stanley–Reisner / Laurent presentations of the degree-0 algebra.
//!
//! [`oracle`] holds independent brute-force reference implementations used
//! by the test suites; it is not part of the production surface.

pub mod complex;
pub mod error;
pub mod field;
pub mod geom;
pub mod linalg;
pub mod novikov;
pub mod oracle;
pub mod schema;
pub mod symbols;
pub mod tropical;

pub use error::{ComplexError, GeomError, NovikovError, TropicalError};
pub use field::{GroundField, Scalar};
pub use novikov::{NovikovElement, Valuation};
pub use symbols::{ExponentScalar, PeriodSymbolTable, RefinementRule};
