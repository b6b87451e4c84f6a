//! Germ expansions of torus orbit integrals near `ε = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{rat, Rational};
use crate::bruhat::{FactorGeom, FactorPart, StepFunction};
use crate::cyclotomic::CycScalar;
use crate::etale::{AlgElement, Coord, EtaleAlgebra};
use crate::integrals::torus::{c_empty_zeta, TorusEvaluator};
use crate::Error;

/// `Orb(f, ε) = Σ_{Λ ⊆ S2} (-1)^{|S2∖Λ|} c_Λ ∏_{i ∈ S2∖Λ} log_q|ε_i|`
/// for `v(ε_i) ≥ radius`, with `c_Λ` depending on the norm classes of the
/// `S1` components.
#[derive(Clone, Debug, PartialEq)]
pub struct GermExpansion {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    /// `coeffs[bits][lambda]`: `bits` has bit `k` set iff `ε_{S1[k]}` is a
    /// non-norm, `lambda` has bit `k` set iff `S2[k] ∈ Λ`.
    pub coeffs: Vec<Vec<CycScalar>>,
    pub radius: i64,
}

impl GermExpansion {
    pub fn class_mask(alg: &EtaleAlgebra, eps: &AlgElement) -> usize {
        let chi = alg.chi(eps);
        alg.s1().iter().enumerate().filter(|(_, &i)| chi[i] == -1).map(|(k, _)| 1 << k).sum()
    }

    pub fn coeff(&self, bits: usize, lambda: usize) -> &CycScalar {
        &self.coeffs[bits][lambda]
    }

    /// `c_∅`, the coefficient of the top log term, for the given norm classes.
    pub fn c_empty(&self, bits: usize) -> &CycScalar {
        &self.coeffs[bits][0]
    }

    pub fn predict(&self, alg: &EtaleAlgebra, eps: &AlgElement) -> Result<CycScalar, Error> {
        let bits = Self::class_mask(alg, eps);
        let vals = self
            .s2
            .iter()
            .map(|&i| alg.valuation(eps, i).ok_or(Error::ZeroInput))
            .collect::<Result<Vec<_>, _>>()?;
        let mut acc = CycScalar::zero();
        for (lambda, c) in self.coeffs[bits].iter().enumerate() {
            let mut w: i64 = 1;
            for (k, v) in vals.iter().enumerate() {
                if lambda & (1 << k) == 0 {
                    w *= v;
                }
            }
            acc += &c.scale(&rat(w));
        }
        Ok(acc)
    }

    /// Whether `v(ε_i) ≥ radius` on every factor.
    pub fn in_range(&self, alg: &EtaleAlgebra, eps: &AlgElement) -> bool {
        (0..alg.m()).all(|i| alg.valuation(eps, i).is_some_and(|v| v >= self.radius))
    }
}

fn initial_radius(alg: &EtaleAlgebra, f: &StepFunction) -> i64 {
    let gs = FactorGeom::from_algebra(alg, &vec![true; alg.m()]);
    let n = alg.dim();
    let p = alg.spec.p;
    let mut r = 1;
    for t in &f.terms {
        for (i, g) in gs.iter().enumerate() {
            let off = alg.coord_offset(i);
            let x = FactorPart::of_term(t, off, g.degree());
            let y = FactorPart::of_term(t, n + off, g.degree());
            let nx = g.min_n_for(&x.constancy(p));
            let ny = g.min_n_for(&y.constancy(p));
            r = r.max(nx + ny);
        }
    }
    r
}

struct Sampler<'a> {
    alg: &'a EtaleAlgebra,
    geoms: Vec<FactorGeom>,
    reps: Vec<(Vec<bool>, AlgElement)>,
    unit: Rational,
}

impl<'a> Sampler<'a> {
    fn new(alg: &'a EtaleAlgebra) -> Result<Self, Error> {
        Ok(Sampler {
            alg,
            geoms: FactorGeom::from_algebra(alg, &vec![true; alg.m()]),
            reps: alg.norm_class_reps()?,
            unit: rat(alg.spec.nonresidue() as i64),
        })
    }

    /// `ε` with `S2` valuations `depth + d_k`, `S1` components in norm class
    /// `bits` at valuation at least `depth + s1_extra`; `vary` multiplies
    /// by units that keep every class.
    fn point(&self, bits: usize, d: usize, depth: i64, s1_extra: i64, vary: bool) -> AlgElement {
        let alg = self.alg;
        let mut comps = Vec::with_capacity(alg.m());
        let mut k2 = 0;
        for i in 0..alg.m() {
            let g = &self.geoms[i];
            let c = if alg.in_s1(i) {
                let rep = &self.reps[bits].1.comps[i];
                let e = depth + s1_extra;
                let mut c = rep.mul(&g.pi_pow(2 * e.div_euclid(2) + 2 * e.rem_euclid(2)));
                if vary {
                    let p = rat(alg.spec.p as i64);
                    c = c.mul(&scalar_like(&c, &(rat(1) + p)));
                }
                c
            } else {
                let e = depth + ((d >> k2) & 1) as i64;
                k2 += 1;
                let mut c = g.pi_pow(e);
                if vary {
                    c = c.mul(&scalar_like(&c, &self.unit));
                }
                c
            };
            comps.push(c);
        }
        AlgElement { comps }
    }
}

fn scalar_like(c: &Coord, a: &Rational) -> Coord {
    match c {
        Coord::F(_) => Coord::F(a.clone()),
        Coord::Q(q) => Coord::Q(crate::quadfield::Quad::from_base(a.clone(), &q.d)),
    }
}

/// Invert `y_d = Σ_Λ c_Λ ∏_{k ∉ Λ} (N + d_k)` over `d ∈ {0,1}^s`.
fn solve_grid(mut y: Vec<CycScalar>, s: usize, n: i64) -> Vec<CycScalar> {
    let nr = rat(n);
    let n1 = rat(n + 1);
    for k in 0..s {
        let bit = 1 << k;
        for idx in 0..y.len() {
            if idx & bit != 0 {
                continue;
            }
            let y0 = y[idx].clone();
            let y1 = y[idx | bit].clone();
            let slope = &y1 - &y0;
            let cst = &y0.scale(&n1) - &y1.scale(&nr);
            y[idx] = slope;
            y[idx | bit] = cst;
        }
    }
    y
}

/// Solve the expansion from samples at `radius, radius + 1` and certify it
/// at two deeper levels with perturbed units; deepen on disagreement.
pub fn germ_extract(alg: &EtaleAlgebra, f: &StepFunction) -> Result<GermExpansion, Error> {
    germ_extract_bounded(alg, f, 12)
}

pub fn germ_extract_bounded(alg: &EtaleAlgebra, f: &StepFunction, max_extra: i64) -> Result<GermExpansion, Error> {
    let sampler = Sampler::new(alg)?;
    let s1 = alg.s1();
    let s2 = alg.s2();
    let start = initial_radius(alg, f);
    let classes = 1usize << s1.len();
    let grid = 1usize << s2.len();
    let mut orb = TorusEvaluator::new(alg, f)?;
    'deepen: for n in start..=start + max_extra {
        let mut coeffs = Vec::with_capacity(classes);
        for bits in 0..classes {
            let ys = (0..grid)
                .map(|d| orb.eval(&sampler.point(bits, d, n, 0, false)))
                .collect::<Result<Vec<_>, _>>()?;
            coeffs.push(solve_grid(ys, s2.len(), n));
        }
        let g = GermExpansion { s1: s1.clone(), s2: s2.clone(), coeffs, radius: n };
        for bits in 0..classes {
            for depth in [n + 2, n + 3] {
                for d in 0..grid {
                    for (extra, vary) in [(0, true), (1, false)] {
                        let eps = sampler.point(bits, d, depth, extra, vary);
                        if orb.eval(&eps)? != g.predict(alg, &eps)? {
                            continue 'deepen;
                        }
                    }
                }
            }
        }
        return Ok(g);
    }
    Err(Error::NotCertified(format!("germ expansion not stable up to radius {}", start + max_extra)))
}

/// Cross-check of `c_∅` against its zeta-integral closed form for every
/// norm class.
pub fn check_c_empty(alg: &EtaleAlgebra, f: &StepFunction, g: &GermExpansion) -> Result<bool, Error> {
    let k = g.s1.len();
    for bits in 0..(1usize << k) {
        let b: Vec<bool> = (0..k).map(|j| bits & (1 << j) != 0).collect();
        if c_empty_zeta(alg, f, &b)? != *g.c_empty(bits) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::bruhat::Term;
    use crate::poly::from_ints;
    use crate::scalar::LocalFieldSpec;

    fn mixed(p: u64, spec: &LocalFieldSpec) -> EtaleAlgebra {
        let t = crate::etale::tau0(spec);
        let tn = -num_traits::ToPrimitive::to_i64(t.numer()).unwrap();
        let other = if spec.is_ramified() { -(spec.nonresidue() as i64) } else { -(p as i64) };
        EtaleAlgebra::from_factors(spec, &[from_ints(&[0, 1]), from_ints(&[tn, 0, 1]), from_ints(&[other, 0, 1])]).unwrap()
    }

    fn sample_f(p: u64, dim: usize) -> StepFunction {
        let mut terms = vec![Term::indicator(vec![rat(0); dim], vec![0; dim], CycScalar::one())];
        let mut c = vec![rat(0); dim];
        c[0] = rat(1);
        let mut lv = vec![1; dim];
        lv[dim / 2] = -1;
        terms.push(Term::indicator(c, lv, CycScalar::from_int(3)));
        let mut ph = Term::indicator(vec![rat(0); dim], vec![0; dim], CycScalar::from_int(-2));
        ph.phase[dim - 1] = ratio(1, p as i64);
        terms.push(ph);
        StepFunction::from_terms(p, dim, terms)
    }

    #[test]
    fn mixed_expansion_and_closed_form() {
        for spec in [LocalFieldSpec::unramified(3), LocalFieldSpec::ramified(3)] {
            let alg = mixed(3, &spec);
            let f = sample_f(3, 2 * alg.dim());
            let g = germ_extract(&alg, &f).unwrap();
            assert!(check_c_empty(&alg, &f, &g).unwrap());
            let scaled = germ_extract(&alg, &f.scale(&CycScalar::from_int(5))).unwrap();
            assert_eq!(scaled.coeffs[0][0], g.coeffs[0][0].scale(&rat(5)));
        }
    }

    #[test]
    fn no_logs_without_s2() {
        let spec = LocalFieldSpec::unramified(3);
        let alg = EtaleAlgebra::from_factors(&spec, &[from_ints(&[0, 1])]).unwrap();
        let f = StepFunction::ball(3, 2, 0);
        let g = germ_extract(&alg, &f).unwrap();
        assert_eq!(g.coeffs.len(), 2);
        assert_eq!(g.coeffs[0], vec![CycScalar::one()]);
        assert_eq!(g.coeffs[1], vec![CycScalar::zero()]);
    }
}
