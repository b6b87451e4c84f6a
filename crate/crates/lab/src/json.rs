//! JSON encodings. Rationals are strings `"a/b"`, cyclotomic scalars carry
//! their conductor and power-basis coordinates.

use orbit_core::bruhat::{StepFunction, Term};
use orbit_core::cyclotomic::CycScalar;
use orbit_core::integrals::OrbitIntegralResult;
use orbit_core::linalg::RMatrix;
use orbit_core::quadfield::Quad;
use orbit_core::spaces::{EMatrix, GlTriple, HermitianSpace, UnitaryLieElement};
use orbit_core::{LocalFieldSpec, Rational};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

pub fn rat_str(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rational, FormatError> {
    s.trim().parse::<Rational>().map_err(|_| FormatError(format!("bad rational {:?}", s)))
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<Rational>, FormatError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycJson {
    pub conductor: u64,
    pub coords: Vec<String>,
}

impl From<&CycScalar> for CycJson {
    fn from(c: &CycScalar) -> Self {
        CycJson { conductor: c.conductor(), coords: rats(c.coords()) }
    }
}

impl CycJson {
    pub fn to_scalar(&self) -> Result<CycScalar, FormatError> {
        if self.conductor == 0 {
            return Err(FormatError("conductor must be positive".into()));
        }
        Ok(CycScalar::from_coords(self.conductor, parse_rats(&self.coords)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub center: Vec<String>,
    pub level: Vec<i64>,
    #[serde(default)]
    pub phase: Vec<String>,
    pub coeff: CycJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFunctionJson {
    pub p: u64,
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

impl From<&StepFunction> for StepFunctionJson {
    fn from(f: &StepFunction) -> Self {
        StepFunctionJson {
            p: f.p,
            dim: f.dim,
            terms: f
                .terms
                .iter()
                .map(|t| TermJson {
                    center: rats(&t.center),
                    level: t.level.clone(),
                    phase: rats(&t.phase),
                    coeff: (&t.coeff).into(),
                })
                .collect(),
        }
    }
}

impl StepFunctionJson {
    pub fn to_function(&self) -> Result<StepFunction, FormatError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.center.len() != self.dim || t.level.len() != self.dim {
                return Err(FormatError("term of the wrong dimension".into()));
            }
            let mut term = Term::indicator(parse_rats(&t.center)?, t.level.clone(), t.coeff.to_scalar()?);
            if !t.phase.is_empty() {
                if t.phase.len() != self.dim {
                    return Err(FormatError("phase of the wrong dimension".into()));
                }
                term.phase = parse_rats(&t.phase)?;
            }
            terms.push(term);
        }
        Ok(StepFunction::from_terms(self.p, self.dim, terms))
    }
}

fn matrix_json(m: &RMatrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| rats(&m.row(i))).collect()
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<RMatrix, FormatError> {
    let rows = rows.iter().map(|r| parse_rats(r)).collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(FormatError("matrix must be square".into()));
    }
    Ok(RMatrix::from_rows(rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlTripleJson {
    pub x: Vec<Vec<String>>,
    pub v: Vec<String>,
    pub vstar: Vec<String>,
}

impl From<&GlTriple> for GlTripleJson {
    fn from(d: &GlTriple) -> Self {
        GlTripleJson { x: matrix_json(&d.x), v: rats(&d.v), vstar: rats(&d.vstar) }
    }
}

impl GlTripleJson {
    pub fn to_triple(&self) -> Result<GlTriple, FormatError> {
        GlTriple::new(parse_matrix(&self.x)?, parse_rats(&self.v)?, parse_rats(&self.vstar)?)
            .map_err(|e| FormatError(e.to_string()))
    }
}

/// `[a, b]` for `a + b √τ0`.
pub type QuadJson = [String; 2];

pub fn quad_json(q: &Quad) -> QuadJson {
    [rat_str(&q.a), rat_str(&q.b)]
}

fn ematrix_json(m: &EMatrix) -> Vec<Vec<QuadJson>> {
    (0..m.rows).map(|i| m.row(i).iter().map(quad_json).collect()).collect()
}

fn parse_ematrix(spec: &LocalFieldSpec, rows: &[Vec<QuadJson>]) -> Result<EMatrix, FormatError> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for r in rows {
        if r.len() != n {
            return Err(FormatError("matrix must be square".into()));
        }
        out.push(
            r.iter()
                .map(|[a, b]| Ok(orbit_core::spaces::e_elem(spec, parse_rat(a)?, parse_rat(b)?)))
                .collect::<Result<Vec<_>, FormatError>>()?,
        );
    }
    Ok(EMatrix::from_rows(out))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianSpaceJson {
    pub p: u64,
    pub tau: String,
    pub gram: Vec<Vec<QuadJson>>,
    #[serde(default)]
    pub class_bit: Option<u8>,
}

impl From<&HermitianSpace> for HermitianSpaceJson {
    fn from(w: &HermitianSpace) -> Self {
        HermitianSpaceJson {
            p: w.spec.p,
            tau: rat_str(&w.spec.tau),
            gram: ematrix_json(&w.gram),
            class_bit: Some(w.class_bit()),
        }
    }
}

impl HermitianSpaceJson {
    pub fn to_space(&self) -> Result<HermitianSpace, FormatError> {
        let spec = LocalFieldSpec::new(self.p, parse_rat(&self.tau)?).map_err(|e| FormatError(e.to_string()))?;
        HermitianSpace::new(&spec, parse_ematrix(&spec, &self.gram)?).map_err(|e| FormatError(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryElementJson {
    pub space: HermitianSpaceJson,
    pub delta: Vec<Vec<QuadJson>>,
}

impl From<&UnitaryLieElement> for UnitaryElementJson {
    fn from(u: &UnitaryLieElement) -> Self {
        UnitaryElementJson { space: (&u.space).into(), delta: ematrix_json(&u.delta) }
    }
}

impl UnitaryElementJson {
    pub fn to_element(&self) -> Result<UnitaryLieElement, FormatError> {
        let space = self.space.to_space()?;
        let delta = parse_ematrix(&space.spec, &self.delta)?;
        UnitaryLieElement::new(space, delta).map_err(|e| FormatError(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub cells: u64,
    pub level: i64,
    pub radius: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResultJson {
    pub value: CycJson,
    pub ledger: String,
    pub certificate: CertificateJson,
}

impl From<&OrbitIntegralResult> for OrbitResultJson {
    fn from(r: &OrbitIntegralResult) -> Self {
        OrbitResultJson {
            value: (&r.value).into(),
            ledger: r.ledger.to_string(),
            certificate: CertificateJson {
                cells: r.certificate.cells,
                level: r.certificate.level,
                radius: r.certificate.radius,
            },
        }
    }
}
