//! Quadratic étale algebras `F[γ] = ∏ F_i` and their `E`-extensions.
//!
//! A quadratic factor `x² + βx + α` is stored through `σ` with
//! `σ² = d0 = disc · p^{-2⌊v(disc)/2⌋}`, so that `O_{F_i} = Z_p[σ]` and the
//! defining root is `θ = (-β + sσ)/2` with `s = p^{⌊v(disc)/2⌋}`.
//! Coordinates of a quadratic component are `(a, b)` for `a + bσ`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{pow_p, rat, residue, vp, vp_or_max, Rational};
use crate::linalg::{Field, RMatrix};
use crate::poly::{self, Poly};
use crate::quadfield::Quad;
use crate::scalar::{LocalFieldSpec, SquareClass};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Linear { root: Rational },
    Quadratic { beta: Rational, alpha: Rational, disc: Rational, d0: Rational, s: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFactor {
    pub poly: Poly,
    pub kind: FactorKind,
    pub disc_class: Option<SquareClass>,
    pub contains_e: bool,
}

impl QuadFactor {
    pub fn new(spec: &LocalFieldSpec, monic_poly: &[Rational]) -> Result<Self, Error> {
        let poly = poly::monic(monic_poly);
        match poly.len() {
            2 => Ok(QuadFactor {
                kind: FactorKind::Linear { root: -&poly[0] },
                poly,
                disc_class: None,
                contains_e: false,
            }),
            3 => {
                let alpha = poly[0].clone();
                let beta = poly[1].clone();
                let disc = &beta * &beta - rat(4) * &alpha;
                let class = spec.square_class(&disc)?;
                if class == SquareClass::One {
                    return Err(Error::UnsupportedFactorization(format!(
                        "quadratic factor {:?} splits over Q_{}",
                        poly, spec.p
                    )));
                }
                let v = vp(&disc, spec.p).unwrap();
                let h = v.div_euclid(2);
                let d0 = &disc * pow_p(spec.p, -2 * h);
                let s = pow_p(spec.p, h);
                let tau_class = spec.square_class(&spec.tau)?;
                Ok(QuadFactor {
                    kind: FactorKind::Quadratic { beta, alpha, disc, d0, s },
                    poly,
                    disc_class: Some(class),
                    contains_e: class == tau_class,
                })
            }
            _ => Err(Error::UnsupportedFactorization(format!("factor of degree {}", poly.len() - 1))),
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// `(a, b) ↦ a + bσ` parameter `d0`; `None` for `F` factors.
    pub fn d0(&self) -> Option<&Rational> {
        match &self.kind {
            FactorKind::Linear { .. } => None,
            FactorKind::Quadratic { d0, .. } => Some(d0),
        }
    }

    /// Ramification index of `F_i/F`.
    pub fn e(&self, p: u64) -> i64 {
        match self.d0() {
            Some(d0) if vp(d0, p) == Some(1) => 2,
            _ => 1,
        }
    }

    /// Residue degree of `F_i/F`.
    pub fn f(&self, p: u64) -> i64 {
        self.degree() as i64 / self.e(p)
    }

    /// Cardinality of the residue field of `F_i`.
    pub fn q_i(&self, p: u64) -> u64 {
        p.pow(self.f(p) as u32)
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        self.e(p) == 2
    }

    /// The defining root `θ` in σ-coordinates.
    pub fn theta(&self) -> Coord {
        match &self.kind {
            FactorKind::Linear { root } => Coord::F(root.clone()),
            FactorKind::Quadratic { beta, d0, s, .. } => {
                Coord::Q(Quad::new(-beta / rat(2), s / rat(2), d0.clone()))
            }
        }
    }

    /// Uniformizer of `F_i`.
    pub fn uniformizer(&self, p: u64) -> Coord {
        match self.d0() {
            None => Coord::F(rat(p as i64)),
            Some(d0) if self.is_ramified(p) => Coord::Q(Quad::sqrt_d(d0)),
            Some(d0) => Coord::Q(Quad::from_base(rat(p as i64), d0)),
        }
    }
}

/// One component of an [`AlgElement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    F(Rational),
    Q(Quad),
}

impl Coord {
    pub fn is_zero(&self) -> bool {
        match self {
            Coord::F(x) => x.is_zero(),
            Coord::Q(x) => x.vanishes(),
        }
    }

    fn zip(&self, o: &Coord, f: impl Fn(&Quad, &Quad) -> Quad, g: impl Fn(&Rational, &Rational) -> Rational) -> Coord {
        match (self, o) {
            (Coord::F(a), Coord::F(b)) => Coord::F(g(a, b)),
            (Coord::Q(a), Coord::Q(b)) => Coord::Q(f(a, b)),
            _ => panic!("component type mismatch"),
        }
    }

    pub fn add(&self, o: &Coord) -> Coord {
        self.zip(o, |a, b| a.add(b), |a, b| a + b)
    }

    pub fn sub(&self, o: &Coord) -> Coord {
        self.zip(o, |a, b| a.sub(b), |a, b| a - b)
    }

    pub fn mul(&self, o: &Coord) -> Coord {
        self.zip(o, |a, b| a.mul(b), |a, b| a * b)
    }

    pub fn inv(&self) -> Option<Coord> {
        match self {
            Coord::F(a) => (!a.is_zero()).then(|| Coord::F(a.recip())),
            Coord::Q(a) => a.inv().map(Coord::Q),
        }
    }

    pub fn zero_like(&self) -> Coord {
        match self {
            Coord::F(_) => Coord::F(Rational::zero()),
            Coord::Q(q) => Coord::Q(q.zero_like()),
        }
    }

    pub fn one_like(&self) -> Coord {
        match self {
            Coord::F(_) => Coord::F(Rational::one()),
            Coord::Q(q) => Coord::Q(q.one_like()),
        }
    }

    /// `Nm_{F_i/F}`.
    pub fn norm(&self) -> Rational {
        match self {
            Coord::F(a) => a.clone(),
            Coord::Q(q) => q.norm(),
        }
    }

    /// F-coordinates: one for `F`, two (`a`, `b`) for quadratic factors.
    pub fn coords(&self) -> Vec<Rational> {
        match self {
            Coord::F(a) => vec![a.clone()],
            Coord::Q(q) => vec![q.a.clone(), q.b.clone()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    pub comps: Vec<Coord>,
}

impl AlgElement {
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgElement { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AlgElement { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        AlgElement { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn is_invertible(&self) -> bool {
        self.comps.iter().all(|c| !c.is_zero())
    }

    pub fn inv(&self) -> Result<Self, Error> {
        let comps = self.comps.iter().map(|c| c.inv().ok_or(Error::ZeroInput)).collect::<Result<_, _>>()?;
        Ok(AlgElement { comps })
    }

    /// `a_Λ`: keep the components in `mask`, zero elsewhere.
    pub fn restrict(&self, mask: &[bool]) -> Self {
        AlgElement {
            comps: self
                .comps
                .iter()
                .zip(mask)
                .map(|(c, keep)| if *keep { c.clone() } else { c.zero_like() })
                .collect(),
        }
    }

    /// All F-coordinates, concatenated in factor order.
    pub fn coords(&self) -> Vec<Rational> {
        self.comps.iter().flat_map(|c| c.coords()).collect()
    }
}

/// Element of `E_i = E ⊗ F_i`, written `x0 + x1 √τ0` with `x0, x1 ∈ F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EComp {
    pub x0: Coord,
    pub x1: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    pub spec: LocalFieldSpec,
    pub factors: Vec<QuadFactor>,
}

/// `τ` rescaled by an even power of `p` to valuation 0 or 1.
pub fn tau0(spec: &LocalFieldSpec) -> Rational {
    let v = vp(&spec.tau, spec.p).unwrap();
    &spec.tau * pow_p(spec.p, -2 * v.div_euclid(2))
}

fn factor_key(f: &QuadFactor) -> (usize, Vec<Rational>) {
    (f.degree(), f.poly.iter().map(|c| -c).collect())
}

impl EtaleAlgebra {
    pub fn from_factors(spec: &LocalFieldSpec, polys: &[Poly]) -> Result<Self, Error> {
        let mut factors = polys.iter().map(|p| QuadFactor::new(spec, p)).collect::<Result<Vec<_>, _>>()?;
        factors.sort_by_key(factor_key);
        for w in factors.windows(2) {
            if w[0].poly == w[1].poly {
                return Err(Error::NotRegularSemisimple);
            }
        }
        Ok(EtaleAlgebra { spec: spec.clone(), factors })
    }

    /// Factors in the given order, without sorting.
    pub fn from_factors_ordered(spec: &LocalFieldSpec, polys: &[Poly]) -> Result<Self, Error> {
        let factors = polys.iter().map(|p| QuadFactor::new(spec, p)).collect::<Result<Vec<_>, _>>()?;
        Ok(EtaleAlgebra { spec: spec.clone(), factors })
    }

    pub fn m(&self) -> usize {
        self.factors.len()
    }

    /// Total F-dimension.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    pub fn s1(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| !self.factors[i].contains_e).collect()
    }

    pub fn s2(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.factors[i].contains_e).collect()
    }

    pub fn in_s1(&self, i: usize) -> bool {
        !self.factors[i].contains_e
    }

    /// Offset of factor `i` among the F-coordinates.
    pub fn coord_offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(|f| f.degree()).sum()
    }

    pub fn element(&self, coords: &[Rational]) -> AlgElement {
        assert_eq!(coords.len(), self.dim());
        let mut comps = Vec::new();
        let mut k = 0;
        for f in &self.factors {
            match f.d0() {
                None => {
                    comps.push(Coord::F(coords[k].clone()));
                    k += 1;
                }
                Some(d0) => {
                    comps.push(Coord::Q(Quad::new(coords[k].clone(), coords[k + 1].clone(), d0.clone())));
                    k += 2;
                }
            }
        }
        AlgElement { comps }
    }

    pub fn zero(&self) -> AlgElement {
        self.element(&vec![Rational::zero(); self.dim()])
    }

    pub fn one(&self) -> AlgElement {
        AlgElement { comps: self.factors.iter().map(|f| f.theta().one_like()).collect() }
    }

    /// Embedding of `F` diagonally.
    pub fn scalar(&self, c: &Rational) -> AlgElement {
        AlgElement {
            comps: self
                .factors
                .iter()
                .map(|f| match f.d0() {
                    None => Coord::F(c.clone()),
                    Some(d0) => Coord::Q(Quad::from_base(c.clone(), d0)),
                })
                .collect(),
        }
    }

    /// Element with component `c` in slot `i` (embedded from `F`) and 1 elsewhere.
    pub fn single(&self, i: usize, c: &Coord) -> AlgElement {
        let mut x = self.one();
        x.comps[i] = c.clone();
        x
    }

    /// The image of `γ` itself: `θ_i` in every slot.
    pub fn gamma(&self) -> AlgElement {
        AlgElement { comps: self.factors.iter().map(|f| f.theta()).collect() }
    }

    /// Image of a polynomial `g(γ)`.
    pub fn eval_poly(&self, g: &[Rational]) -> AlgElement {
        let th = self.gamma();
        let mut acc = self.zero();
        for c in g.iter().rev() {
            acc = acc.mul(&th).add(&self.scalar(c));
        }
        acc
    }

    /// Polynomial `g` of degree `< dim` with `g(γ) = x` (Chinese remainder).
    pub fn to_poly(&self, x: &AlgElement) -> Poly {
        let n = self.dim();
        let th = self.gamma();
        let mut powers = vec![self.one()];
        for k in 1..n {
            powers.push(powers[k - 1].mul(&th));
        }
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (j, pw) in powers.iter().enumerate() {
            for (i, c) in pw.coords().into_iter().enumerate() {
                rows[i][j] = c;
            }
        }
        let m = RMatrix::from_rows(rows);
        m.solve(&x.coords()).expect("powers of γ span F[γ]")
    }

    /// Normalized valuation `v_{F_i}` of each component.
    pub fn valuation(&self, x: &AlgElement, i: usize) -> Option<i64> {
        let p = self.spec.p;
        match &x.comps[i] {
            Coord::F(a) => vp(a, p),
            Coord::Q(q) => q.valuation_normalized(p),
        }
    }

    /// `|x_i|_i = q^{-v_{F_i}(x_i)}` as a power of `p`; returns the exponent `-v`.
    pub fn abs_exponent(&self, x: &AlgElement, i: usize) -> Option<i64> {
        self.valuation(x, i).map(|v| -v)
    }

    pub fn norm_to_f(&self, x: &AlgElement) -> Vec<Rational> {
        x.comps.iter().map(|c| c.norm()).collect()
    }

    /// `χ(Nm_{F_i/F}(x_i))` per factor.
    pub fn chi(&self, x: &AlgElement) -> Vec<i8> {
        x.comps.iter().map(|c| self.spec.chi(&c.norm())).collect()
    }

    pub fn chi_total(&self, x: &AlgElement) -> i8 {
        self.chi(x).iter().product()
    }

    /// Whether each component lies in `Nm(E_i^×)`.
    pub fn is_norm(&self, x: &AlgElement) -> Result<Vec<bool>, Error> {
        if !x.is_invertible() {
            return Err(Error::ZeroInput);
        }
        Ok((0..self.m())
            .map(|i| !self.in_s1(i) || self.spec.chi(&x.comps[i].norm()) == 1)
            .collect())
    }

    /// Norm from `E_i` to `F_i`: `x0² - τ0 x1²`.
    pub fn e_norm(&self, x: &EComp) -> Coord {
        let t = Coord::F(tau0(&self.spec));
        let t = match &x.x0 {
            Coord::F(_) => t,
            Coord::Q(q) => Coord::Q(Quad::from_base(tau0(&self.spec), &q.d)),
        };
        x.x0.mul(&x.x0).sub(&t.mul(&x.x1).mul(&x.x1))
    }

    /// A unit `x ∈ F_i^×` with `χ(Nm x) = -1` for `i ∈ S1`.
    pub fn non_norm_unit_or_uniformizer(&self, i: usize) -> Result<Coord, Error> {
        let f = &self.factors[i];
        if !self.in_s1(i) {
            return Err(Error::Precondition(format!("factor {} lies in S2", i)));
        }
        let p = self.spec.p as i64;
        match f.d0() {
            None => {
                for c in [self.spec.nonresidue() as i64, p, p * self.spec.nonresidue() as i64] {
                    if self.spec.chi(&rat(c)) == -1 {
                        return Ok(Coord::F(rat(c)));
                    }
                }
                unreachable!("some square class is a non-norm")
            }
            Some(d0) => {
                for bound in 1i64.. {
                    for a in -bound..=bound {
                        for b in -bound..=bound {
                            let q = Quad::new(rat(a), rat(b), d0.clone());
                            let n = q.norm();
                            if !n.is_zero() && self.spec.chi(&n) == -1 {
                                return Ok(Coord::Q(q));
                            }
                        }
                    }
                    let pi = f.uniformizer(self.spec.p);
                    if self.spec.chi(&pi.norm()) == -1 {
                        return Ok(pi);
                    }
                }
                unreachable!()
            }
        }
    }

    /// Norm-class representatives of `∏_{S1} F_i^×/Nm`, indexed by bit
    /// vectors over `S1` (bit set ⟺ non-norm in that slot).
    pub fn norm_class_reps(&self) -> Result<Vec<(Vec<bool>, AlgElement)>, Error> {
        let s1 = self.s1();
        let mut non_norms = Vec::new();
        for &i in &s1 {
            non_norms.push(self.non_norm_unit_or_uniformizer(i)?);
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << s1.len()) {
            let bits: Vec<bool> = (0..s1.len()).map(|k| mask & (1 << k) != 0).collect();
            let mut x = self.one();
            for (k, &i) in s1.iter().enumerate() {
                if bits[k] {
                    x.comps[i] = non_norms[k].clone();
                }
            }
            out.push((bits, x));
        }
        Ok(out)
    }

    /// Representatives of `U(1)(E_i/F_i)` modulo `1 + p^k O_{E_i}` for an
    /// `F` factor in `S1`; each carries mass `1/count`.
    pub fn u1_cosets(&self, k: u32, i: usize) -> Result<Vec<(Rational, Rational)>, Error> {
        let f = &self.factors[i];
        if !self.in_s1(i) {
            return Err(Error::Unsupported(format!(
                "factor {} has E_i split; U(1) is noncompact, use the torus path",
                i
            )));
        }
        if f.degree() != 1 {
            return Err(Error::Unsupported("U(1) cosets over quadratic F_i".into()));
        }
        Ok(u1_cosets_e(&self.spec, k))
    }
}

/// Exact norm-one elements `(x0, x1)` of `E = F(√τ0)` representing
/// `U(1) / (U(1) ∩ (1 + p^k O_E))`.
pub fn u1_cosets_e(spec: &LocalFieldSpec, k: u32) -> Vec<(Rational, Rational)> {
    assert!(k >= 1);
    let p = spec.p;
    let t = tau0(spec);
    let t_res = num_traits::ToPrimitive::to_u64(&residue(&t, p, k)).expect("residue fits");
    let mut out = Vec::new();
    for (a, b) in norm_one_residues(p, t_res, k) {
        let (ra, rb) = (rat(a as i64), rat(b as i64));
        let x0 = Quad::new(ra, rb, t.clone());
        let one = x0.one_like();
        let plus = one.add(&x0);
        let lift = if plus.norm().is_zero() || vp_or_max(&plus.norm(), p) > 0 {
            let minus = one.sub(&x0);
            minus.mul(&minus.conj().inv().unwrap()).neg()
        } else {
            plus.mul(&plus.conj().inv().unwrap())
        };
        debug_assert!(lift.norm().is_one());
        debug_assert!(vp_or_max(&(&lift.a - &x0.a), p) >= k as i64);
        debug_assert!(vp_or_max(&(&lift.b - &x0.b), p) >= k as i64);
        out.push((lift.a, lift.b));
    }
    out
}

/// Pairs `(a, b)` mod `p^k` with `a² − t b² ≡ 1`, lifted one digit at a time
/// from the solutions mod `p`, in lexicographic order.
fn norm_one_residues(p: u64, t: u64, k: u32) -> Vec<(u64, u64)> {
    let ok = |a: u64, b: u64, m: u64| {
        let (a, b, t, m) = (a as u128, b as u128, t as u128, m as u128);
        (a * a % m + m - t % m * (b * b % m) % m) % m == 1 % m
    };
    let mut m = p;
    let mut sols: Vec<(u64, u64)> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).filter(|&(a, b)| ok(a, b, p)).collect();
    for _ in 1..k {
        let next = m * p;
        let mut lifted = Vec::with_capacity(sols.len() * p as usize);
        for &(a, b) in &sols {
            for s in 0..p {
                for r in 0..p {
                    let (x, y) = (a + s * m, b + r * m);
                    if ok(x, y, next) {
                        lifted.push((x, y));
                    }
                }
            }
        }
        sols = lifted;
        m = next;
    }
    sols.sort_unstable();
    sols
}

/// Decompose `F[γ]` for a square rational matrix `γ`.
pub fn decompose(spec: &LocalFieldSpec, gamma: &RMatrix) -> Result<(EtaleAlgebra, AlgElement), Error> {
    let cp = gamma.charpoly();
    decompose_charpoly(spec, &cp)
}

pub fn decompose_charpoly(spec: &LocalFieldSpec, cp: &[Rational]) -> Result<(EtaleAlgebra, AlgElement), Error> {
    if !poly::is_squarefree(cp) {
        return Err(Error::NotRegularSemisimple);
    }
    let (factors, rest) = poly::split_low_degree(cp);
    if let Some(r) = rest {
        return Err(Error::UnsupportedFactorization(format!("irreducible remainder of degree {}", r.len() - 1)));
    }
    let alg = EtaleAlgebra::from_factors(spec, &factors)?;
    let g = alg.gamma();
    Ok((alg, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rmat;
    use crate::poly::from_ints;

    #[test]
    fn split_diag() {
        let spec = LocalFieldSpec::unramified(3);
        let (alg, g) = decompose(&spec, &rmat(&[&[0, 0], &[0, 1]])).unwrap();
        assert_eq!(alg.m(), 2);
        assert_eq!(g.coords(), vec![rat(0), rat(1)]);
        assert_eq!(alg.s1(), vec![0, 1]);
    }

    #[test]
    fn field_factors() {
        let spec = LocalFieldSpec::unramified(3);
        // x^2 - 2: contains E = Q_3(√2)
        let (alg, _) = decompose(&spec, &rmat(&[&[0, 2], &[1, 0]])).unwrap();
        assert_eq!(alg.s2(), vec![0]);
        // x^2 - 3: ramified, not E
        let (alg, _) = decompose(&spec, &rmat(&[&[0, 3], &[1, 0]])).unwrap();
        assert_eq!(alg.s1(), vec![0]);
        assert!(alg.factors[0].is_ramified(3));
        // x^2 - 7 splits over Q_3 (7 ≡ 1)
        assert!(decompose(&spec, &rmat(&[&[0, 7], &[1, 0]])).is_err());
        assert_eq!(decompose(&spec, &rmat(&[&[1, 0], &[0, 1]])), Err(Error::NotRegularSemisimple));
    }

    #[test]
    fn crt_roundtrip() {
        let spec = LocalFieldSpec::ramified(5);
        let cp = poly::mul(&from_ints(&[-3, 1]), &from_ints(&[2, 0, 1]));
        let (alg, _) = decompose_charpoly(&spec, &cp).unwrap();
        let x = alg.element(&[rat(7), rat(2), rat(-1)]);
        let g = alg.to_poly(&x);
        assert_eq!(alg.eval_poly(&g), x);
    }

    #[test]
    fn u1_counts() {
        let spec = LocalFieldSpec::unramified(3);
        assert_eq!(u1_cosets_e(&spec, 1).len(), 4);
        assert_eq!(u1_cosets_e(&spec, 2).len(), 12);
        let spec = LocalFieldSpec::ramified(3);
        assert_eq!(u1_cosets_e(&spec, 1).len(), 6);
    }
}
