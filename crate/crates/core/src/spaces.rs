//! Hermitian spaces over `E = F(√τ0)`, twisted unitary Lie algebras,
//! triples on `gl(V) × V × V*`, their invariants, matching and transfer
//! factors.
//!
//! Hermitian forms are `⟨u, v⟩ = conj(u)ᵗ H v`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{pow_p, vp, Rational};
use crate::cyclotomic::CycScalar;
use crate::etale::tau0;
use crate::linalg::{Field, Matrix, RMatrix};
use crate::poly::{self, Poly};
use crate::quadfield::Quad;
use crate::scalar::LocalFieldSpec;
use crate::Error;

pub type EMatrix = Matrix<Quad>;

pub fn e_elem(spec: &LocalFieldSpec, a: Rational, b: Rational) -> Quad {
    Quad::new(a, b, tau0(spec))
}

pub fn e_from_f(spec: &LocalFieldSpec, a: &Rational) -> Quad {
    Quad::from_base(a.clone(), &tau0(spec))
}

pub fn lift_matrix(spec: &LocalFieldSpec, m: &RMatrix) -> EMatrix {
    m.map(|x| e_from_f(spec, x))
}

fn conj_transpose(m: &EMatrix) -> EMatrix {
    m.transpose().map(|x| x.conj())
}

fn base_part(q: &Quad) -> Result<Rational, Error> {
    if q.is_base() {
        Ok(q.a.clone())
    } else {
        Err(Error::Precondition(format!("{} is not in F", q)))
    }
}

/// `(−1)^{n(n−1)/2}`, the determinant of the anti-diagonal Gram matrix.
fn split_det(n: usize) -> Rational {
    if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Class bit of a Hermitian space of dimension `n` with Gram determinant
/// `det`: 0 when `χ(det)` agrees with the split space.
pub fn class_bit_of(spec: &LocalFieldSpec, n: usize, det: &Rational) -> u8 {
    if spec.chi(det) == spec.chi(&split_det(n)) {
        0
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpace {
    pub spec: LocalFieldSpec,
    pub gram: EMatrix,
}

impl HermitianSpace {
    pub fn new(spec: &LocalFieldSpec, gram: EMatrix) -> Result<Self, Error> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        if conj_transpose(&gram) != gram {
            return Err(Error::Precondition("Gram matrix is not conjugate-symmetric".into()));
        }
        if gram.det().vanishes() {
            return Err(Error::Singular);
        }
        Ok(HermitianSpace { spec: spec.clone(), gram })
    }

    pub fn from_f(spec: &LocalFieldSpec, gram: &RMatrix) -> Result<Self, Error> {
        Self::new(spec, lift_matrix(spec, gram))
    }

    pub fn diagonal(spec: &LocalFieldSpec, entries: &[Rational]) -> Result<Self, Error> {
        Self::from_f(spec, &RMatrix::diag(entries))
    }

    /// Anti-diagonal ones.
    pub fn split(spec: &LocalFieldSpec, n: usize) -> Self {
        let mut g = crate::linalg::rzero_matrix(n, n);
        for i in 0..n {
            g[(i, n - 1 - i)] = Rational::one();
        }
        Self::from_f(spec, &g).unwrap()
    }

    /// A representative of the given class: `diag(1, …, 1, c)`.
    pub fn with_class(spec: &LocalFieldSpec, n: usize, bit: u8) -> Self {
        let want = spec.chi(&split_det(n)) * if bit == 0 { 1 } else { -1 };
        let c = [Rational::one(), Rational::from_integer((spec.nonresidue() as i64).into()), Rational::from_integer((spec.p as i64).into())]
            .into_iter()
            .chain([Rational::from_integer(((spec.p * spec.nonresidue()) as i64).into())])
            .find(|c| spec.chi(c) == want)
            .unwrap();
        let mut d = vec![Rational::one(); n];
        d[n - 1] = c;
        Self::diagonal(spec, &d).unwrap()
    }

    pub fn n(&self) -> usize {
        self.gram.rows
    }

    pub fn det(&self) -> Rational {
        base_part(&self.gram.det()).expect("Hermitian determinant lies in F")
    }

    pub fn class_bit(&self) -> u8 {
        class_bit_of(&self.spec, self.n(), &self.det())
    }

    pub fn form(&self, u: &[Quad], v: &[Quad]) -> Quad {
        let hv = self.gram.mul_vec(v);
        let mut acc = hv[0].zero_like();
        for (a, b) in u.iter().zip(&hv) {
            acc = acc.add(&a.conj().mul(b));
        }
        acc
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        HermitianSpace { spec: self.spec.clone(), gram: block_diag(&self.gram, &o.gram) }
    }
}

fn block_diag(a: &EMatrix, b: &EMatrix) -> EMatrix {
    let n = a.rows + b.rows;
    let proto = &a.data[0];
    let mut m = EMatrix::zeros_like(n, n, proto);
    for i in 0..a.rows {
        for j in 0..a.cols {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
        }
    }
    m
}

/// Element `δ` of `u(W) = {δ : conj(δ)ᵗ H = H δ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryLieElement {
    pub space: HermitianSpace,
    pub delta: EMatrix,
}

impl UnitaryLieElement {
    pub fn new(space: HermitianSpace, delta: EMatrix) -> Result<Self, Error> {
        if delta.rows != space.n() || !delta.is_square() {
            return Err(Error::DimensionMismatch("δ must act on W".into()));
        }
        if conj_transpose(&delta).mul(&space.gram) != space.gram.mul(&delta) {
            return Err(Error::Precondition("δ is not self-adjoint for the Hermitian form".into()));
        }
        Ok(UnitaryLieElement { space, delta })
    }

    /// `det(It − δ)`, coefficients low to high; they lie in `F`.
    pub fn charpoly(&self) -> Poly {
        self.delta.charpoly().iter().map(|c| base_part(c).expect("coefficients of a twisted element lie in F")).collect()
    }

    /// `(a_i, b_i = ⟨w, δ^i w⟩)`.
    pub fn invariants(&self, w: &[Quad]) -> Result<InvariantVector, Error> {
        let n = self.space.n();
        let cp = self.charpoly();
        let mut b = Vec::with_capacity(n);
        let mut x = w.to_vec();
        for _ in 0..n {
            b.push(base_part(&self.space.form(w, &x))?);
            x = self.delta.mul_vec(&x);
        }
        Ok(InvariantVector { a: cp[..n].to_vec(), b })
    }

    pub fn is_regular_semisimple(&self) -> bool {
        poly::is_squarefree(&self.charpoly())
    }
}

/// A point `(x, v, v*)` of `gl_n × V × V*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlTriple {
    pub x: RMatrix,
    pub v: Vec<Rational>,
    pub vstar: Vec<Rational>,
}

impl GlTriple {
    pub fn new(x: RMatrix, v: Vec<Rational>, vstar: Vec<Rational>) -> Result<Self, Error> {
        let n = x.rows;
        if !x.is_square() || v.len() != n || vstar.len() != n {
            return Err(Error::DimensionMismatch(format!("triple of rank {}", n)));
        }
        Ok(GlTriple { x, v, vstar })
    }

    pub fn n(&self) -> usize {
        self.x.rows
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut out = self.x.data.clone();
        out.extend(self.v.iter().cloned());
        out.extend(self.vstar.iter().cloned());
        out
    }

    /// `(k x k⁻¹, k v, v* k⁻¹)`.
    pub fn act(&self, k: &RMatrix) -> Result<Self, Error> {
        let ki = k.inverse()?;
        Ok(GlTriple { x: k.mul(&self.x).mul(&ki), v: k.mul_vec(&self.v), vstar: ki.vec_mul(&self.vstar) })
    }

    /// `⟨v*, x^k v⟩` for `0 ≤ k < count`.
    pub fn moments(&self, count: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(count);
        let mut w = self.v.clone();
        for _ in 0..count {
            out.push(self.vstar.iter().zip(&w).map(|(a, b)| a * b).sum());
            w = self.x.mul_vec(&w);
        }
        out
    }

    pub fn invariants(&self) -> InvariantVector {
        let n = self.n();
        InvariantVector { a: self.x.charpoly()[..n].to_vec(), b: self.moments(n) }
    }

    /// `Δ = det(⟨v*, x^{i+j} v⟩)_{i,j < n}`.
    pub fn delta(&self) -> Rational {
        let n = self.n();
        let m = self.moments(2 * n - 1);
        RMatrix::from_rows((0..n).map(|i| (0..n).map(|j| m[i + j].clone()).collect()).collect()).det()
    }

    pub fn is_regular_semisimple(&self) -> bool {
        !self.delta().is_zero()
    }

    /// `[v | x v | … | x^{n−1} v]`.
    pub fn krylov(&self) -> RMatrix {
        let n = self.n();
        let mut cols = Vec::with_capacity(n);
        let mut w = self.v.clone();
        for _ in 0..n {
            cols.push(w.clone());
            w = self.x.mul_vec(&w);
        }
        RMatrix::from_cols(&cols)
    }

    /// `(x, v, v* · y)` for a matrix `y` commuting with `x`.
    pub fn twist_vstar(&self, y: &RMatrix) -> Self {
        GlTriple { x: self.x.clone(), v: self.v.clone(), vstar: y.vec_mul(&self.vstar) }
    }
}

/// `a_i` (coefficients of `det(It − x)` below the top) and `b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVector {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

/// `Δ ≠ 0`, with the value.
pub fn delta_rss(d: &GlTriple) -> (bool, Rational) {
    let v = d.delta();
    (!v.is_zero(), v)
}

/// `ω = χ(det[v | γv | … | γ^{n−1}v])` against the standard volume form.
pub fn omega(spec: &LocalFieldSpec, d: &GlTriple) -> Result<i8, Error> {
    let det = d.krylov().det();
    if det.is_zero() {
        return Err(Error::Precondition("v is not a cyclic vector".into()));
    }
    Ok(spec.chi(&det))
}

pub fn match_predicate(d: &GlTriple, u: &UnitaryLieElement, w: &[Quad]) -> bool {
    d.n() == u.space.n() && u.invariants(w).is_ok_and(|iv| iv == d.invariants())
}

/// Companion matrix of `t^n + c_{n−1} t^{n−1} + … + c_0`: `e_i ↦ e_{i+1}`.
pub fn companion(cp: &[Rational]) -> RMatrix {
    let n = cp.len() - 1;
    let mut m = crate::linalg::rzero_matrix(n, n);
    for i in 0..n - 1 {
        m[(i + 1, i)] = Rational::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -&cp[i];
    }
    m
}

/// The unitary orbit matching a regular semisimple triple: `δ` the
/// companion matrix, `H = (b_{i+j})`, `w = e_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatch {
    pub element: UnitaryLieElement,
    pub w: Vec<Quad>,
    pub class_bit: u8,
}

pub fn construct_unitary_match(spec: &LocalFieldSpec, d: &GlTriple) -> Result<UnitaryMatch, Error> {
    let n = d.n();
    let cp = d.x.charpoly();
    if !d.is_regular_semisimple() || !poly::is_squarefree(&cp) {
        return Err(Error::NotRegularSemisimple);
    }
    let m = d.moments(2 * n - 1);
    let h = RMatrix::from_rows((0..n).map(|i| (0..n).map(|j| m[i + j].clone()).collect()).collect());
    let space = HermitianSpace::from_f(spec, &h)?;
    let element = UnitaryLieElement::new(space, lift_matrix(spec, &companion(&cp)))?;
    let mut w = vec![e_from_f(spec, &Rational::zero()); n];
    w[0] = e_from_f(spec, &Rational::one());
    let class_bit = element.space.class_bit();
    Ok(UnitaryMatch { element, w, class_bit })
}

/// A triple matching `(δ, w)`: `γ` the companion of the characteristic
/// polynomial, `v = e_1`, `v*` carrying the `b_i`.
pub fn construct_gl_match(u: &UnitaryLieElement, w: &[Quad]) -> Result<GlTriple, Error> {
    let n = u.space.n();
    let iv = u.invariants(w)?;
    let cp = u.charpoly();
    let mut v = vec![Rational::zero(); n];
    v[0] = Rational::one();
    GlTriple::new(companion(&cp), v, iv.b)
}

/// `D = Res(p_1, p_2) = ∏ (x_1 − x_2)` over the roots.
pub fn d_of_polys(p1: &[Rational], p2: &[Rational]) -> Result<Rational, Error> {
    let r = poly::resultant(p1, p2);
    if r.is_zero() {
        return Err(Error::NotRegularSemisimple);
    }
    Ok(r)
}

pub fn d_delta(d1: &UnitaryLieElement, d2: &UnitaryLieElement) -> Result<Rational, Error> {
    d_of_polys(&d1.charpoly(), &d2.charpoly())
}

/// `χ(D)|D|_F`, times `κ` when given.
pub fn endoscopic_factor(spec: &LocalFieldSpec, d: &Rational, kappa: Option<i8>) -> Result<CycScalar, Error> {
    let v = vp(d, spec.p).ok_or(Error::ZeroInput)?;
    let s = spec.chi(d) * kappa.unwrap_or(1);
    let abs = pow_p(spec.p, -v);
    Ok(CycScalar::from_rational(if s == 1 { abs } else { -abs }))
}

/// `δ_1 ⊕ δ_2` on `W_a ⊕ W_b`.
pub fn nice_matching_embed(d1: &UnitaryLieElement, d2: &UnitaryLieElement) -> Result<UnitaryLieElement, Error> {
    UnitaryLieElement::new(d1.space.direct_sum(&d2.space), block_diag(&d1.delta, &d2.delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::linalg::rmat;

    #[test]
    fn rank_one_invariants() {
        let d = GlTriple::new(rmat(&[&[5]]), vec![rat(1)], vec![rat(7)]).unwrap();
        let iv = d.invariants();
        assert_eq!(iv.a, vec![rat(-5)]);
        assert_eq!(iv.b, vec![rat(7)]);
        assert_eq!(delta_rss(&d), (true, rat(7)));
    }

    #[test]
    fn companion_invariants() {
        let c = companion(&[rat(3), rat(2), rat(1)]);
        let d = GlTriple::new(c, vec![rat(1), rat(0)], vec![rat(1), rat(1)]).unwrap();
        assert_eq!(d.invariants().a, vec![rat(3), rat(2)]);
    }

    #[test]
    fn match_round_trip() {
        let spec = LocalFieldSpec::unramified(5);
        let d = GlTriple::new(rmat(&[&[1, 2], &[3, -1]]), vec![rat(1), rat(2)], vec![rat(3), rat(-1)]).unwrap();
        let m = construct_unitary_match(&spec, &d).unwrap();
        assert!(match_predicate(&d, &m.element, &m.w));
        let back = construct_gl_match(&m.element, &m.w).unwrap();
        assert_eq!(back.invariants(), d.invariants());
        let mut bad = d.clone();
        bad.vstar[0] += rat(1);
        assert!(!match_predicate(&bad, &m.element, &m.w));
    }

    #[test]
    fn resultant_is_root_difference() {
        let p1 = poly::from_roots(&[rat(2)]);
        let p2 = poly::from_roots(&[rat(7)]);
        assert_eq!(d_of_polys(&p1, &p2).unwrap(), rat(-5));
        let p1 = poly::from_roots(&[rat(1), rat(3)]);
        let p2 = poly::from_roots(&[rat(4)]);
        assert_eq!(d_of_polys(&p1, &p2).unwrap(), rat((1 - 4) * (3 - 4)));
    }

    #[test]
    fn unramified_factor_is_minus_q_power() {
        let spec = LocalFieldSpec::unramified(3);
        for (d, r) in [(rat(1), 0), (rat(3), 1), (rat(18), 2), (rat(-27), 3)] {
            let want = num_traits::pow(rat(-3), r as usize).recip();
            assert_eq!(endoscopic_factor(&spec, &d, None).unwrap(), CycScalar::from_rational(want));
        }
    }

    #[test]
    fn classes() {
        let spec = LocalFieldSpec::ramified(5);
        for n in 1..4 {
            assert_eq!(HermitianSpace::split(&spec, n).class_bit(), 0);
            assert_eq!(HermitianSpace::with_class(&spec, n, 1).class_bit(), 1);
            assert_eq!(HermitianSpace::with_class(&spec, n, 0).class_bit(), 0);
        }
    }
}
