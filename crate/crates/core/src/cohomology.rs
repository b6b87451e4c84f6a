//! Stable conjugacy for regular semisimple `δ ∈ u(W)`: classes in
//! `H¹(F, T_δ) = ∏_{S1} Z/2`, the invariant `inv`, the endoscopic
//! character `κ` and the pairing with subsets `Λ ⊆ S1`.
//!
//! Bit vectors are indexed by `S1` in the factor order of
//! [`decompose_charpoly`].

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{rat, Rational};
use crate::etale::{decompose_charpoly, AlgElement, EtaleAlgebra, FactorKind};
use crate::linalg::{Field, RMatrix};
use crate::poly;
use crate::quadfield::Quad;
use crate::scalar::LocalFieldSpec;
use crate::spaces::{
    construct_unitary_match, e_from_f, nice_matching_embed, GlTriple, UnitaryLieElement, UnitaryMatch,
};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct H1Class {
    pub bits: Vec<bool>,
}

impl H1Class {
    pub fn zero(len: usize) -> Self {
        H1Class { bits: alloc::vec![false; len] }
    }

    pub fn from_mask(mask: usize, len: usize) -> Self {
        H1Class { bits: (0..len).map(|k| mask & (1 << k) != 0).collect() }
    }

    pub fn mask(&self) -> usize {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| 1 << k).sum()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        if self.len() != o.len() {
            return Err(Error::DimensionMismatch("H¹ classes over different index sets".into()));
        }
        Ok(H1Class { bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect() })
    }
}

/// `κ(x) = (−1)^{Σ_{i ∈ support} x_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaCharacter {
    pub support: Vec<bool>,
}

impl KappaCharacter {
    pub fn eval(&self, x: &H1Class) -> Result<i8, Error> {
        if self.support.len() != x.len() {
            return Err(Error::DimensionMismatch("κ and x over different index sets".into()));
        }
        let odd = self.support.iter().zip(&x.bits).filter(|(s, b)| **s && **b).count() % 2 == 1;
        Ok(if odd { -1 } else { 1 })
    }
}

/// `Λ ⊆ S1`, identified with the class that is 1 exactly off `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMask {
    pub members: Vec<bool>,
}

impl LambdaMask {
    pub fn from_mask(mask: usize, len: usize) -> Self {
        LambdaMask { members: (0..len).map(|k| mask & (1 << k) != 0).collect() }
    }

    pub fn as_class(&self) -> H1Class {
        H1Class { bits: self.members.iter().map(|m| !m).collect() }
    }
}

/// `⟨Λ, x⟩ = (−1)^{Σ_{i ∉ Λ} x_i}`.
pub fn pairing(lambda: &LambdaMask, x: &H1Class) -> Result<i8, Error> {
    KappaCharacter { support: lambda.as_class().bits }.eval(x)
}

fn poly_at(p: &[Rational], m: &crate::spaces::EMatrix) -> crate::spaces::EMatrix {
    let proto = &m.data[0];
    let mut acc = crate::spaces::EMatrix::zeros_like(m.rows, m.cols, proto);
    for c in p.iter().rev() {
        acc = acc.mul(m).add(&crate::spaces::EMatrix::identity_like(m.rows, proto).scale(&proto.from_rational_like(c)));
    }
    acc
}

/// `h ∈ F_i` with `Tr_{F_i/F}(h θ^k) = m_k`, returned through `N_{F_i/F}(h)`.
fn trace_form_norm(kind: &FactorKind, m: &[Rational]) -> Result<Rational, Error> {
    match kind {
        FactorKind::Linear { .. } => Ok(m[0].clone()),
        FactorKind::Quadratic { beta: c1, alpha: c0, .. } => {
            let t0 = rat(2);
            let t1 = -c1.clone();
            let t2 = c1 * c1 - rat(2) * c0;
            let sys = RMatrix::from_rows(alloc::vec![alloc::vec![t0, t1.clone()], alloc::vec![t1, t2]]);
            let h = sys.solve(&m[..2])?;
            Ok(&h[0] * &h[0] - c1 * &h[0] * &h[1] + c0 * &h[1] * &h[1])
        }
    }
}

/// The algebra `F[δ]` and `ρ(δ)`: for each `i ∈ S1` the class of the
/// `E_i/F_i`-Hermitian line `W_i = ker p_i(δ)`, split giving 0.
pub fn rho_with_algebra(spec: &LocalFieldSpec, d: &UnitaryLieElement) -> Result<(EtaleAlgebra, H1Class), Error> {
    let cp = d.charpoly();
    let (alg, _) = decompose_charpoly(spec, &cp)?;
    let mut bits = Vec::new();
    for i in alg.s1() {
        let f = &alg.factors[i];
        let ker = poly_at(&f.poly, &d.delta).nullspace();
        let w = ker.first().ok_or(Error::NotRegularSemisimple)?;
        let mut m = Vec::new();
        let mut x: Vec<Quad> = w.clone();
        for _ in 0..f.degree() {
            let b = d.space.form(w, &x);
            if !b.is_base() {
                return Err(Error::Precondition(format!("⟨w, δ^k w⟩ = {} is not in F", b)));
            }
            m.push(b.a);
            x = d.delta.mul_vec(&x);
        }
        let nh = trace_form_norm(&f.kind, &m)?;
        if nh.is_zero() {
            return Err(Error::Precondition("degenerate Hermitian form on an eigenspace".into()));
        }
        bits.push(spec.chi(&nh) == -1);
    }
    Ok((alg, H1Class { bits }))
}

pub fn rho(spec: &LocalFieldSpec, d: &UnitaryLieElement) -> Result<H1Class, Error> {
    Ok(rho_with_algebra(spec, d)?.1)
}

/// `inv(δ_1, δ_2) = ρ(δ_1) − ρ(δ_2)`.
pub fn inv(spec: &LocalFieldSpec, d1: &UnitaryLieElement, d2: &UnitaryLieElement) -> Result<H1Class, Error> {
    if poly::trim(d1.charpoly()) != poly::trim(d2.charpoly()) {
        return Err(Error::StableClassMismatch);
    }
    rho(spec, d1)?.add(&rho(spec, d2)?)
}

/// Norm-class bits of `x ∈ F[γ]^×` over `S1`.
pub fn class_of(alg: &EtaleAlgebra, x: &AlgElement) -> H1Class {
    let chi = alg.chi(x);
    H1Class { bits: alg.s1().into_iter().map(|i| chi[i] == -1).collect() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaX {
    pub x: AlgElement,
    pub class: H1Class,
    pub matched: UnitaryMatch,
    pub rho: H1Class,
}

/// `x ↦ δ_x = match(γ, v, v* x(γ))` over norm-class representatives.
pub fn delta_x_family(spec: &LocalFieldSpec, d: &GlTriple) -> Result<(EtaleAlgebra, Vec<DeltaX>), Error> {
    let (alg, _) = decompose_charpoly(spec, &d.x.charpoly())?;
    let mut out = Vec::new();
    for (_, x) in alg.norm_class_reps()? {
        let g = alg.to_poly(&x);
        let y = poly_at_r(&g, &d.x);
        let matched = construct_unitary_match(spec, &d.twist_vstar(&y))?;
        let r = rho(spec, &matched.element)?;
        out.push(DeltaX { class: class_of(&alg, &x), x, matched, rho: r });
    }
    Ok((alg, out))
}

fn poly_at_r(p: &[Rational], m: &RMatrix) -> RMatrix {
    let n = m.rows;
    let mut acc = crate::linalg::rzero_matrix(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(m).add(&crate::linalg::ridentity(n).scale(c));
    }
    acc
}

/// `x ↦ ρ(δ_x) − ρ(δ_1)` is the identity on norm-class bits.
pub fn check_torsor(family: &[DeltaX]) -> Result<bool, Error> {
    let base = family
        .iter()
        .find(|e| e.class.weight() == 0)
        .ok_or_else(|| Error::Precondition("no trivial class in the family".into()))?;
    for e in family {
        if e.rho.add(&base.rho)? != e.class {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The map `Λ ↦ ⟨Λ, ·⟩` hits every character of `(Z/2)^k` exactly once.
pub fn pairing_is_perfect(k: usize) -> bool {
    let n = 1usize << k;
    let mut seen = alloc::collections::BTreeSet::new();
    for l in 0..n {
        let lam = LambdaMask::from_mask(l, k);
        let row: Vec<i8> = (0..n).map(|x| pairing(&lam, &H1Class::from_mask(x, k)).unwrap()).collect();
        if !seen.insert(row) {
            return false;
        }
    }
    seen.len() == n
}

/// `κ(inv(δ′, δ_x)) = ⟨S1(δ_1), x⟩` for `δ′ = δ_1 ⊕ δ_2` and the family
/// built from the triple matching `(δ′, w′)`; `κ` is supported on the
/// factors of `δ_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct D2Check {
    pub instances: usize,
    pub holds: bool,
}

pub fn check_d2(
    spec: &LocalFieldSpec,
    d1: &UnitaryLieElement,
    d2: &UnitaryLieElement,
    wprime: &[Quad],
) -> Result<D2Check, Error> {
    let dp = nice_matching_embed(d1, d2)?;
    let gl = crate::spaces::construct_gl_match(&dp, wprime)?;
    if !gl.is_regular_semisimple() {
        return Err(Error::NotRegularSemisimple);
    }
    let (alg, fam) = delta_x_family(spec, &gl)?;
    let cp1 = poly::trim(d1.charpoly());
    let in_first: Vec<bool> = alg
        .s1()
        .into_iter()
        .map(|i| poly::degree(&poly::divrem(&cp1, &alg.factors[i].poly).1).is_none())
        .collect();
    let kappa = KappaCharacter { support: in_first.iter().map(|b| !b).collect() };
    let s1_first = LambdaMask { members: in_first };
    let mut holds = true;
    for e in &fam {
        let k = kappa.eval(&inv(spec, &dp, &e.matched.element)?)?;
        if k != pairing(&s1_first, &e.class)? {
            holds = false;
        }
    }
    Ok(D2Check { instances: fam.len(), holds })
}

/// A vector of `W` that is cyclic for `δ` with `Δ ≠ 0`, searched among
/// small integer vectors.
pub fn cyclic_vector(spec: &LocalFieldSpec, d: &UnitaryLieElement) -> Option<Vec<Quad>> {
    let n = d.space.n();
    let zero = e_from_f(spec, &Rational::zero());
    for code in 1..3usize.pow(n as u32 * 2) {
        let mut c = code;
        let mut w = alloc::vec![zero.clone(); n];
        for wi in w.iter_mut() {
            *wi = e_from_f(spec, &rat((c % 3) as i64 - 1));
            c /= 3;
        }
        if w.iter().all(|x| x.vanishes()) {
            continue;
        }
        if let Ok(iv) = d.invariants(&w) {
            let gl = GlTriple::new(
                crate::spaces::companion(&d.charpoly()),
                {
                    let mut v = alloc::vec![Rational::zero(); n];
                    v[0] = rat(1);
                    v
                },
                iv.b,
            )
            .ok()?;
            if gl.is_regular_semisimple() {
                return Some(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rmat;
    use crate::spaces::{lift_matrix, HermitianSpace};

    #[test]
    fn rank_one_classes() {
        let spec = LocalFieldSpec::unramified(3);
        for (b, bit) in [(1, false), (3, true), (9, false)] {
            let d = GlTriple::new(rmat(&[&[2]]), alloc::vec![rat(1)], alloc::vec![rat(b)]).unwrap();
            let m = construct_unitary_match(&spec, &d).unwrap();
            assert_eq!(rho(&spec, &m.element).unwrap().bits, alloc::vec![bit]);
        }
    }

    #[test]
    fn field_containing_e_has_trivial_h1() {
        let spec = LocalFieldSpec::unramified(3);
        // x² − 2 with 2 a nonresidue mod 3: F[γ] ≅ E.
        let space = HermitianSpace::split(&spec, 2);
        let d = GlTriple::new(rmat(&[&[0, 2], &[1, 0]]), alloc::vec![rat(1), rat(0)], alloc::vec![rat(1), rat(1)]).unwrap();
        let m = construct_unitary_match(&spec, &d).unwrap();
        assert!(rho(&spec, &m.element).unwrap().is_empty());
        let _ = space;
    }

    #[test]
    fn torsor_and_d2() {
        for spec in [LocalFieldSpec::unramified(5), LocalFieldSpec::ramified(3)] {
            let other = if spec.is_ramified() { -(spec.nonresidue() as i64) } else { -(spec.p as i64) };
            let cp = poly::mul(&poly::from_ints(&[other, 0, 1]), &poly::from_ints(&[-1, 1]));
            let g = crate::spaces::companion(&cp);
            let d = GlTriple::new(g, alloc::vec![rat(1), rat(0), rat(0)], alloc::vec![rat(1), rat(2), rat(1)]).unwrap();
            let (alg, fam) = delta_x_family(&spec, &d).unwrap();
            assert_eq!(alg.s1().len(), 2);
            assert_eq!(fam.len(), 4);
            assert!(check_torsor(&fam).unwrap());
            let e1 = UnitaryLieElement::new(HermitianSpace::diagonal(&spec, &[rat(1)]).unwrap(), lift_matrix(&spec, &rmat(&[&[0]]))).unwrap();
            let e2 = UnitaryLieElement::new(HermitianSpace::diagonal(&spec, &[rat(1)]).unwrap(), lift_matrix(&spec, &rmat(&[&[1]]))).unwrap();
            let dp = nice_matching_embed(&e1, &e2).unwrap();
            let w = cyclic_vector(&spec, &dp).unwrap();
            let r = check_d2(&spec, &e1, &e2, &w).unwrap();
            assert_eq!(r.instances, 4);
            assert!(r.holds);
        }
    }

    #[test]
    fn perfect() {
        for k in 0..5 {
            assert!(pairing_is_perfect(k));
        }
    }
}
