//! Exact-arithmetic calculator and verification harness for point-count and
//! formal motivic-class formulas attached to moduli of vector bundles on
//! smooth projective curves.
//!
//! The crate is organized around six pieces:
//!
//! * [`curve`] — validated curve zeta profiles and their exact arithmetic
//!   (symmetric-power counts, Jacobian counts, zeta special values).
//! * [`laurent`] — truncated Laurent series in `q^{-1}` over the rationals,
//!   the realization target for counting.
//! * [`motring`] — the formal class algebra of `Jac^a · Π Sym^j {k}` symbols
//!   with completeness windows, duals, zeta series and counting realization.
//! * [`quot`] — torus-fixed-point combinatorics of Quot schemes of matrix
//!   divisors: strata, codimensions, class and count assembly, the
//!   symmetric-power counting oracle, and the stabilized-limit pieces.
//! * [`hn`] — Harder–Narasimhan types: enumeration under slope bounds,
//!   codimension and cohomology-bound formulas, and the slope-sum audit.
//! * [`bun`] — the closed formulas for the stack of bundles (stacky point
//!   count, compact-support class, conjectural class) and the verification
//!   suite comparing them.
//!
//! The [`expr`] module provides a small expression language over these
//! constructors, and [`verify`] packages every identity check into a
//! machine-readable verdict. All arithmetic is exact; floating point is
//! never used.

pub mod bun;
pub mod curve;
pub mod expr;
pub mod fixtures;
pub mod hn;
pub mod laurent;
pub mod motring;
pub mod quot;
pub mod verify;

pub use curve::{coconut_audit, euler_chi, validate_curve, CurveData, CurveError, ValidatedCurve};
pub use laurent::{format_rational, LaurentQ};
pub use motring::{Atom, ClassError, MotClass, Term, Window};

pub use num::{BigInt, BigRational};
