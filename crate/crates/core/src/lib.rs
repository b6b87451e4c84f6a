//! Exact p-adic harmonic analysis for orbital integrals on unitary and
//! general linear Lie algebras over `Q_p`, `p` odd.
//!
//! Everything here is exact: base-field values are rationals read p-adically,
//! integrals take values in cyclotomic fields, and meromorphic continuations
//! are rational functions in `u = q^{-s}`.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod bruhat;
pub mod cohomology;
pub mod cyclotomic;
pub mod etale;
pub mod integrals;
pub mod linalg;
pub mod poly;
pub mod quadfield;
pub mod scalar;
pub mod spaces;
pub mod weil_endoscopy;

mod error;

/// Identifier of the measure conventions every integral is computed under:
/// additive `vol(O) = 1` per coordinate, `vol(O_i^×) = 1`, `vol(K) = 1`
/// for maximal compacts and `U(1)`, quotient measures by restriction.
pub const LEDGER_ID: &str = "lattice1-units1-compact1";

pub use arith::Rational;
pub use cyclotomic::CycScalar;
pub use error::Error;
pub use scalar::{LocalFieldSpec, SquareClass};
