//! Orbit-integral engines.

pub mod descent;
pub mod germ;
pub mod gl;
pub mod torus;
pub mod unitary;
pub mod weil;

use crate::cyclotomic::CycScalar;

/// How a value was obtained: number of cells or shells summed, the
/// refinement level used and the support radius that bounded the sum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub cells: u64,
    pub level: i64,
    pub radius: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitIntegralResult {
    pub value: CycScalar,
    pub ledger: &'static str,
    pub certificate: Certificate,
}

impl OrbitIntegralResult {
    pub fn new(value: CycScalar, certificate: Certificate) -> Self {
        OrbitIntegralResult { value, ledger: crate::LEDGER_ID, certificate }
    }
}
