//! Multiplicative integration over `∏ F_i^×`: shells `π_i^j O_i^×`,
//! Tate-type zeta integrals and two-sided torus convolutions.
//!
//! Measures: `vol(O_i) = 1` additively in σ-coordinates and
//! `vol(O_i^×) = 1` multiplicatively. `|t|_i = q^{-v_i(t)}` with `v_i` the
//! normalized valuation of `F_i`, so `|t|_i^s = u^{v_i(t)}`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{in_coset, pow_p, rat, vp, vp_or_max, Rational};
use crate::bruhat::step::{StepFunction, Term};
use crate::bruhat::zeta::ZetaElement;
use crate::cyclotomic::CycScalar;
use crate::etale::{Coord, EtaleAlgebra, QuadFactor};
use crate::quadfield::Quad;
use crate::scalar::{psi_value, LocalFieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Lin,
    Unram(Rational),
    Ram(Rational),
}

/// Geometry of one factor `F_i` as seen from its σ-coordinates.
#[derive(Clone, Debug)]
pub struct FactorGeom {
    shape: Shape,
    spec: LocalFieldSpec,
    twisted: bool,
    chi_pi: i8,
    chi_unramified: bool,
}

/// The restriction of one term to the coordinates of a single factor.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorPart {
    pub center: Vec<Rational>,
    pub level: Vec<i64>,
    pub phase: Vec<Rational>,
}

impl FactorPart {
    pub fn of_term(t: &Term, offset: usize, deg: usize) -> Self {
        FactorPart {
            center: t.center[offset..offset + deg].to_vec(),
            level: t.level[offset..offset + deg].to_vec(),
            phase: t.phase[offset..offset + deg].to_vec(),
        }
    }

    pub fn contains_zero(&self, p: u64) -> bool {
        self.center.iter().zip(&self.level).all(|(c, k)| vp_or_max(c, p) >= *k)
    }

    pub fn eval(&self, x: &[Rational], p: u64) -> CycScalar {
        for i in 0..x.len() {
            if !in_coset(&x[i], &self.center[i], p, self.level[i]) {
                return CycScalar::zero();
            }
        }
        let ax: Rational = self.phase.iter().zip(x).map(|(a, y)| a * y).sum();
        psi_value(&ax, p)
    }

    pub fn constancy(&self, p: u64) -> Vec<i64> {
        self.level
            .iter()
            .zip(&self.phase)
            .map(|(k, a)| match vp(a, p) {
                None => *k,
                Some(v) => (*k).max(-v),
            })
            .collect()
    }
}

impl FactorGeom {
    pub fn new(f: &QuadFactor, spec: &LocalFieldSpec, twisted: bool) -> Self {
        let p = spec.p;
        let shape = match f.d0() {
            None => Shape::Lin,
            Some(d0) if f.is_ramified(p) => Shape::Ram(d0.clone()),
            Some(d0) => Shape::Unram(d0.clone()),
        };
        Self::build(shape, spec, twisted)
    }

    /// `F` itself as a factor.
    pub fn line(spec: &LocalFieldSpec, twisted: bool) -> Self {
        Self::build(Shape::Lin, spec, twisted)
    }

    /// `E = F(√τ0)` in the basis `1, √τ0`, with the trivial character.
    pub fn e_field(spec: &LocalFieldSpec) -> Self {
        let t = crate::etale::tau0(spec);
        let shape = if spec.is_ramified() { Shape::Ram(t) } else { Shape::Unram(t) };
        Self::build(shape, spec, false)
    }

    fn build(shape: Shape, spec: &LocalFieldSpec, twisted: bool) -> Self {
        let mut g = FactorGeom { shape, spec: spec.clone(), twisted, chi_pi: 1, chi_unramified: true };
        let pi = g.pi_pow(1);
        g.chi_pi = g.chi(&pi);
        g.chi_unramified = g.residue_units().iter().all(|w| g.chi(w) == 1);
        g
    }

    pub fn from_algebra(alg: &EtaleAlgebra, twisted: &[bool]) -> Vec<Self> {
        alg.factors.iter().zip(twisted).map(|(f, t)| FactorGeom::new(f, &alg.spec, *t)).collect()
    }

    fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn degree(&self) -> usize {
        if self.shape == Shape::Lin {
            1
        } else {
            2
        }
    }

    pub fn q_i(&self) -> u64 {
        if matches!(self.shape, Shape::Unram(_)) {
            self.p() * self.p()
        } else {
            self.p()
        }
    }

    pub fn coord(&self, a: Rational, b: Rational) -> Coord {
        match &self.shape {
            Shape::Lin => Coord::F(a),
            Shape::Unram(d) | Shape::Ram(d) => Coord::Q(Quad::new(a, b, d.clone())),
        }
    }

    /// `χ(Nm t)` (or 1 when untwisted).
    pub fn chi(&self, t: &Coord) -> i8 {
        if !self.twisted {
            return 1;
        }
        self.spec.chi(&t.norm())
    }

    /// Value of the character on `π_i^j`.
    pub fn chi_pi_pow(&self, j: i64) -> i8 {
        if self.chi_pi == -1 && j.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    pub fn is_chi_unramified(&self) -> bool {
        self.chi_unramified
    }

    /// Normalized valuation of a nonzero element.
    pub fn valuation(&self, t: &Coord) -> i64 {
        let p = self.p();
        match t {
            Coord::F(a) => vp(a, p).unwrap(),
            Coord::Q(q) => q.valuation_normalized(p).unwrap(),
        }
    }

    /// `π_i^j`.
    pub fn pi_pow(&self, j: i64) -> Coord {
        let p = self.p();
        match &self.shape {
            Shape::Lin => Coord::F(pow_p(p, j)),
            Shape::Unram(d) => Coord::Q(Quad::from_base(pow_p(p, j), d)),
            Shape::Ram(d) => {
                let h = j.div_euclid(2);
                let r = j.rem_euclid(2);
                let dh = if h >= 0 {
                    num_traits::pow(d.clone(), h as usize)
                } else {
                    num_traits::pow(d.recip(), (-h) as usize)
                };
                if r == 0 {
                    Coord::Q(Quad::from_base(dh, d))
                } else {
                    Coord::Q(Quad::new(Rational::zero(), dh, d.clone()))
                }
            }
        }
    }

    /// Coordinate levels of the box `π_i^n O_i`.
    pub fn lattice_levels(&self, n: i64) -> Vec<i64> {
        match self.shape {
            Shape::Lin => vec![n],
            Shape::Unram(_) => vec![n, n],
            Shape::Ram(_) => vec![n.div_euclid(2) + n.rem_euclid(2), n.div_euclid(2)],
        }
    }

    /// Smallest `n` with `π^n O_i` inside the box of the given levels.
    pub fn min_n_for(&self, levels: &[i64]) -> i64 {
        match self.shape {
            Shape::Lin => levels[0],
            Shape::Unram(_) => levels[0].max(levels[1]),
            Shape::Ram(_) => (2 * levels[0] - 1).max(2 * levels[1]),
        }
    }

    /// Lower bound for `v_i` on the box.
    pub fn min_valuation(&self, part: &FactorPart) -> i64 {
        let p = self.p();
        let lows: Vec<i64> = part.center.iter().zip(&part.level).map(|(c, k)| vp_or_max(c, p).min(*k)).collect();
        match self.shape {
            Shape::Lin => lows[0],
            Shape::Unram(_) => lows[0].min(lows[1]),
            Shape::Ram(_) => (2 * lows[0]).min(2 * lows[1] + 1),
        }
    }

    /// Representatives of `O_i^× / (1 + π_i O_i)`.
    pub fn residue_units(&self) -> Vec<Coord> {
        self.unit_classes(1)
    }

    /// Representatives of `O_i^× / (1 + π_i^r O_i)`, `r ≥ 1`.
    pub fn unit_classes(&self, r: i64) -> Vec<Coord> {
        assert!(r >= 1);
        let p = self.p() as i64;
        let mut out = Vec::new();
        match self.shape {
            Shape::Lin => {
                let m = p.pow(r as u32);
                for a in 1..m {
                    if a % p != 0 {
                        out.push(self.coord(rat(a), Rational::zero()));
                    }
                }
            }
            Shape::Unram(_) => {
                let m = p.pow(r as u32);
                for a in 0..m {
                    for b in 0..m {
                        if a % p != 0 || b % p != 0 {
                            out.push(self.coord(rat(a), rat(b)));
                        }
                    }
                }
            }
            Shape::Ram(_) => {
                let ma = p.pow(((r + 1) / 2) as u32);
                let mb = p.pow((r / 2) as u32);
                for a in 1..ma {
                    if a % p == 0 {
                        continue;
                    }
                    for b in 0..mb {
                        out.push(self.coord(rat(a), rat(b)));
                    }
                }
            }
        }
        out
    }

    /// Additive volume of `π^j O_i^×`.
    pub fn shell_volume(&self, j: i64) -> Rational {
        let s: i64 = self.lattice_levels(j).iter().sum();
        let qi = Rational::from_integer(self.q_i().into());
        pow_p(self.p(), -s) * (Rational::one() - qi.recip())
    }

    /// `∫_{(x0 + π^n O_i) ∩ box} ψ(⟨a, t⟩) dt`.
    pub fn box_integral(&self, part: &FactorPart, x0: &Coord, n: i64) -> CycScalar {
        let p = self.p();
        let lv = self.lattice_levels(n);
        let xc = x0.coords();
        let mut acc = CycScalar::one();
        for i in 0..xc.len() {
            let (c1, k1, c2, k2) = (&xc[i], lv[i], &part.center[i], part.level[i]);
            let (c, k) = if k1 <= k2 {
                if !in_coset(c2, c1, p, k1) {
                    return CycScalar::zero();
                }
                (c2, k2)
            } else {
                if !in_coset(c1, c2, p, k2) {
                    return CycScalar::zero();
                }
                (c1, k1)
            };
            let a = &part.phase[i];
            if vp_or_max(a, p) < -k {
                return CycScalar::zero();
            }
            acc = &acc * &psi_value(&(a * c), p).scale(&pow_p(p, -k));
        }
        acc
    }

    /// `∫_{π^j O_i^×} g(t) χ(t) d^×t`.
    pub fn shell_average(&self, part: &FactorPart, j: i64) -> CycScalar {
        let pij = self.pi_pow(j);
        let mut acc = CycScalar::zero();
        for w in self.residue_units() {
            let t0 = pij.mul(&w);
            let b = self.box_integral(part, &t0, j + 1);
            if b.is_zero() {
                continue;
            }
            if self.chi(&t0) == 1 {
                acc += &b;
            } else {
                acc -= &b;
            }
        }
        acc.scale(&self.shell_volume(j).recip())
    }

    /// Shell range `[lo, hi]` meeting the box, with `hi = None` when the
    /// box contains 0 (then shells from `tail` on are all equal up to `χ(π)^j`).
    pub fn shell_range(&self, part: &FactorPart) -> (i64, Option<i64>, i64) {
        let p = self.p();
        let lo = self.min_valuation(part);
        let tail = self.min_n_for(&part.constancy(p)).max(lo);
        if part.contains_zero(p) {
            (lo, None, tail)
        } else {
            (lo, Some(self.min_n_for(&part.level) - 1), tail)
        }
    }

    /// `∫_{F_i^×} g(t) |t|_i^{sign·s} χ(t) d^×t` as a function of `u`.
    pub fn zeta(&self, part: &FactorPart, sign: i64) -> ZetaElement {
        let (lo, hi, tail) = self.shell_range(part);
        let last = match hi {
            Some(h) => h,
            None => tail - 1,
        };
        let mut z = ZetaElement::zero();
        for j in lo..=last {
            let a = self.shell_average(part, j);
            if !a.is_zero() {
                z = z.add(&ZetaElement::monomial(a, sign * j));
            }
        }
        if hi.is_none() && self.chi_unramified {
            z = z.add(&ZetaElement::geometric_tail(self.chi_pi as i64, sign, tail));
        }
        z
    }

    /// `∫_{F_i^×} g(t) h(ε t^{-1}) χ(t) d^×t`.
    pub fn torus(&self, g: &FactorPart, h: &FactorPart, eps: &Coord) -> CycScalar {
        let p = self.p();
        let ve = self.valuation(eps);
        let (glo, ghi, _) = self.shell_range(g);
        let (hlo, hhi, _) = self.shell_range(h);
        let mut lo = glo;
        let mut hi = ve - hlo;
        if let Some(x) = ghi {
            hi = hi.min(x);
        }
        if let Some(x) = hhi {
            lo = lo.max(ve - x);
        }
        let ng = self.min_n_for(&g.constancy(p));
        let nh = self.min_n_for(&h.constancy(p));
        let mut cache: Vec<(i64, UnitTable)> = Vec::new();
        let mut acc = CycScalar::zero();
        for j in lo..=hi {
            let k = ve - j;
            let rg = (ng - j).max(1);
            let rh = (nh - k).max(1);
            // integrate over classes of the coarser side, boxes on the other
            let (outer, inner, a, b, r) = if rg <= rh { (g, h, j, k, rg) } else { (h, g, k, j, rh) };
            if !cache.iter().any(|(s, _)| *s == r) {
                cache.push((r, self.unit_table(r)));
            }
            let units = &cache.iter().find(|(s, _)| *s == r).unwrap().1;
            let pia = self.pi_pow(a);
            let rest = eps.mul(&self.pi_pow(-a));
            // χ(t) with t on the g side: t = π^j w or t = ε π^{-k} w^{-1}
            let sign_pi = if rg <= rh { self.chi_pi_pow(j) } else { self.chi(&rest) };
            let mut shell = CycScalar::zero();
            for (i, w) in units.w.iter().enumerate() {
                let x0 = pia.mul(w);
                let ov = outer.eval(&x0.coords(), p);
                if ov.is_zero() {
                    continue;
                }
                let y0 = rest.mul(&units.inv[i]);
                let bi = self.box_integral(inner, &y0, b + r);
                if bi.is_zero() {
                    continue;
                }
                let v = &ov * &bi;
                if sign_pi * units.chi[i] == 1 {
                    shell += &v;
                } else {
                    shell -= &v;
                }
            }
            acc += &shell.scale(&self.shell_volume(b).recip());
        }
        acc
    }

    fn unit_table(&self, r: i64) -> UnitTable {
        let w = self.unit_classes(r);
        let inv = w.iter().map(|x| x.inv().unwrap()).collect();
        let chi = w.iter().map(|x| self.chi(x)).collect();
        UnitTable { w, inv, chi }
    }
}

struct UnitTable {
    w: Vec<Coord>,
    inv: Vec<Coord>,
    chi: Vec<i8>,
}

/// `∫_{∏F_i^×} f(t) ∏|t_i|^{sign_i s} χ'(t) d^×t` where `χ'` is `χ∘Nm` on
/// factors with `twisted[i]` and trivial elsewhere.
pub fn mult_zeta_twisted(alg: &EtaleAlgebra, f: &StepFunction, signs: &[i64], twisted: &[bool]) -> ZetaElement {
    assert_eq!(f.dim, alg.dim());
    mult_zeta_geoms(&FactorGeom::from_algebra(alg, twisted), f, signs)
}

/// Zeta integral over `∏ F_i^×` for explicitly given factor geometries,
/// coordinates laid out factor after factor.
pub fn mult_zeta_geoms(geoms: &[FactorGeom], f: &StepFunction, signs: &[i64]) -> ZetaElement {
    assert_eq!(f.dim, geoms.iter().map(|g| g.degree()).sum::<usize>());
    let mut total = ZetaElement::zero();
    for t in &f.terms {
        let mut z = ZetaElement::constant(t.coeff.clone());
        let mut off = 0;
        for (i, g) in geoms.iter().enumerate() {
            let part = FactorPart::of_term(t, off, g.degree());
            off += g.degree();
            z = z.mul(&g.zeta(&part, signs[i]));
            if z.is_zero() {
                break;
            }
        }
        total = total.add(&z);
    }
    total
}

/// `∫_{(F^×)^n} f(t) ∏|t_i|^{sign_i s} χ(t_1 ⋯ t_n) d^×t`.
pub fn mult_zeta_lines(spec: &LocalFieldSpec, f: &StepFunction, signs: &[i64]) -> ZetaElement {
    let geoms = vec![FactorGeom::line(spec, true); f.dim];
    mult_zeta_geoms(&geoms, f, signs)
}

/// [`mult_zeta_twisted`] with `χ∘Nm` on every factor.
pub fn mult_zeta(alg: &EtaleAlgebra, f: &StepFunction, signs: &[i64]) -> ZetaElement {
    mult_zeta_twisted(alg, f, signs, &vec![true; alg.m()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::poly::from_ints;

    fn line(spec: &LocalFieldSpec) -> EtaleAlgebra {
        EtaleAlgebra::from_factors(spec, &[from_ints(&[0, 1])]).unwrap()
    }

    #[test]
    fn tate_integrals_of_the_unit_ball() {
        let spec = LocalFieldSpec::ramified(3);
        let f = StepFunction::ball(3, 1, 0);
        let alg = line(&spec);
        let z = mult_zeta_twisted(&alg, &f, &[1], &[false]);
        assert_eq!(z, ZetaElement::geometric_tail(1, 1, 0));
        // ramified χ kills every shell
        assert!(mult_zeta(&alg, &f, &[1]).is_zero());
        let spec = LocalFieldSpec::unramified(3);
        let z = mult_zeta(&line(&spec), &f, &[1]);
        assert_eq!(z, ZetaElement::geometric_tail(-1, 1, 0));
        assert_eq!(z.value_at_one(), Some(CycScalar::from_rational(ratio(1, 2))));
    }

    #[test]
    fn shells_sum_to_additive_integral() {
        // Σ_j vol(shell_j) · avg_j = ∫ g dt for an untwisted g avoiding 0
        let spec = LocalFieldSpec::unramified(5);
        for poly in [from_ints(&[0, 1]), from_ints(&[-2, 0, 1]), from_ints(&[-5, 0, 1])] {
            let alg = EtaleAlgebra::from_factors(&spec, &[poly]).unwrap();
            let g = FactorGeom::new(&alg.factors[0], &spec, false);
            let d = g.degree();
            let part = FactorPart {
                center: (0..d).map(|i| ratio(1 + i as i64, 5)).collect(),
                level: vec![1; d],
                phase: vec![Rational::zero(); d],
            };
            let (lo, hi, _) = g.shell_range(&part);
            let mut acc = CycScalar::zero();
            for j in lo..=hi.unwrap() {
                acc += &g.shell_average(&part, j).scale(&g.shell_volume(j));
            }
            assert_eq!(acc, CycScalar::from_rational(pow_p(5, -(d as i64))));
        }
    }

    #[test]
    fn torus_shell_count() {
        let spec = LocalFieldSpec::unramified(3);
        // x^2 - 2 contains E
        let alg = EtaleAlgebra::from_factors(&spec, &[from_ints(&[-2, 0, 1])]).unwrap();
        let g = FactorGeom::new(&alg.factors[0], &spec, true);
        let part = FactorPart { center: vec![rat(0), rat(0)], level: vec![0, 0], phase: vec![rat(0), rat(0)] };
        for k in 0..4 {
            let eps = g.pi_pow(k);
            assert_eq!(g.torus(&part, &part, &eps), CycScalar::from_int(k + 1));
        }
        let alg = line(&spec);
        let g = FactorGeom::new(&alg.factors[0], &spec, true);
        let part = FactorPart { center: vec![rat(0)], level: vec![0], phase: vec![rat(0)] };
        for k in 0..5 {
            let eps = g.pi_pow(k);
            let want = if k % 2 == 0 { 1 } else { 0 };
            assert_eq!(g.torus(&part, &part, &eps), CycScalar::from_int(want));
        }
    }
}
