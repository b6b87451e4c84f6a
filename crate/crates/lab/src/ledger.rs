//! Measure normalizations and calibration constants.
//!
//! Identities whose two sides live in one measure system are checked with
//! constant 1. Identities that compare measures fixed independently are
//! checked up to one constant: measured on the first instance with a
//! nonzero side, then frozen, unless the ledger file already pins it.

use std::collections::BTreeMap;
use std::path::Path;

use orbit_core::cyclotomic::CycScalar;
use serde::{Deserialize, Serialize};

use crate::json::{CycJson, FormatError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationLedger {
    pub id: String,
    pub measures: BTreeMap<String, String>,
    #[serde(default)]
    pub calibrations: BTreeMap<String, CycJson>,
}

impl Default for NormalizationLedger {
    fn default() -> Self {
        let measures = [
            ("additive", "vol(O) = 1 on every F-coordinate; O_E = O + O√τ0 has volume 1"),
            ("multiplicative", "vol(O_i^×) = 1 for every factor, |t|_i = q^{-v_i(t)} with v_i normalized"),
            ("compact", "vol(GL_n(O)) = 1, vol(U(1)) = 1"),
            ("gl-quotient", "GL(V)/T measured by dk·dn through g = k n t"),
            ("unitary-quotient", "U(W)/T_δ is a point for dim W = 1"),
            ("character", "ψ(m/p^k) = ζ_{p^k}^m, trivial on O and not on p^{-1}O"),
        ];
        NormalizationLedger {
            id: orbit_core::LEDGER_ID.to_string(),
            measures: measures.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            calibrations: BTreeMap::new(),
        }
    }
}

impl NormalizationLedger {
    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path).map_err(|e| FormatError(format!("{}: {}", path.display(), e)))?;
        let l: NormalizationLedger = serde_json::from_str(&text).map_err(|e| FormatError(e.to_string()))?;
        if l.id != orbit_core::LEDGER_ID {
            return Err(FormatError(format!(
                "ledger {:?} does not describe the conventions of this build ({:?})",
                l.id,
                orbit_core::LEDGER_ID
            )));
        }
        Ok(l)
    }

    pub fn pinned(&self, identity: &str) -> Result<Option<CycScalar>, FormatError> {
        self.calibrations.get(identity).map(|c| c.to_scalar()).transpose()
    }
}

/// A constant `c` with `rhs = c · lhs` on every instance.
#[derive(Clone, Debug)]
pub struct Calibration {
    pub constant: Option<CycScalar>,
    pub pinned: bool,
}

impl Calibration {
    pub fn new(pinned: Option<CycScalar>) -> Self {
        Calibration { pinned: pinned.is_some(), constant: pinned }
    }

    pub fn forced_one() -> Self {
        Self::new(Some(CycScalar::one()))
    }

    /// Whether `rhs = c · lhs`, fixing `c` on first use.
    pub fn check(&mut self, lhs: &CycScalar, rhs: &CycScalar) -> bool {
        match &self.constant {
            Some(c) => &(c * lhs) == rhs,
            None => {
                if lhs.is_zero() {
                    return rhs.is_zero();
                }
                let c = rhs * &lhs.inv().expect("nonzero");
                self.constant = Some(c);
                true
            }
        }
    }
}
