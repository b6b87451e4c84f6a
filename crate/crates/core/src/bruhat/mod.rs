//! Schwartz–Bruhat calculus and multiplicative zeta integrals.

pub mod mult;
pub mod step;
pub mod zeta;

pub use step::{AffineCoord, Node, PairEntry, StepFunction, Term};
pub use mult::{mult_zeta, mult_zeta_geoms, mult_zeta_lines, mult_zeta_twisted, FactorGeom, FactorPart};
pub use zeta::ZetaElement;
