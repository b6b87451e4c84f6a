//! `Orb(f, ε) = ∫_T f(t, ε t^{-1}) χ(t) dt` on `A × A`, and the closed
//! forms of its leading germ coefficient.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::Rational;
use crate::bruhat::{mult_zeta_geoms, AffineCoord, FactorGeom, FactorPart, StepFunction, ZetaElement};
use crate::cyclotomic::CycScalar;
use crate::etale::{AlgElement, EtaleAlgebra};
use crate::Error;

fn geoms(alg: &EtaleAlgebra) -> Vec<FactorGeom> {
    FactorGeom::from_algebra(alg, &vec![true; alg.m()])
}

fn check_dim(alg: &EtaleAlgebra, f: &StepFunction) -> Result<(), Error> {
    if f.dim != 2 * alg.dim() || f.p != alg.spec.p {
        return Err(Error::DimensionMismatch(alloc::format!(
            "function on F^{} for A × A of dimension {}",
            f.dim,
            2 * alg.dim()
        )));
    }
    Ok(())
}

/// Exact value of `∫_T f(t, ε t^{-1}) χ(t) d^×t`.
pub fn torus_orbit_integral(alg: &EtaleAlgebra, f: &StepFunction, eps: &AlgElement) -> Result<CycScalar, Error> {
    TorusEvaluator::new(alg, f)?.eval(eps)
}

/// [`torus_orbit_integral`] for one `f` at many `ε`, remembering each
/// factor integral by the component `ε_i` it was computed at.
pub struct TorusEvaluator<'a> {
    alg: &'a EtaleAlgebra,
    f: &'a StepFunction,
    geoms: Vec<FactorGeom>,
    parts: Vec<Vec<(FactorPart, FactorPart)>>,
    memo: Vec<Vec<BTreeMap<Vec<Rational>, CycScalar>>>,
}

impl<'a> TorusEvaluator<'a> {
    pub fn new(alg: &'a EtaleAlgebra, f: &'a StepFunction) -> Result<Self, Error> {
        check_dim(alg, f)?;
        let geoms = geoms(alg);
        let n = alg.dim();
        let parts: Vec<Vec<_>> = f
            .terms
            .iter()
            .map(|t| {
                geoms
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let off = alg.coord_offset(i);
                        (FactorPart::of_term(t, off, g.degree()), FactorPart::of_term(t, n + off, g.degree()))
                    })
                    .collect()
            })
            .collect();
        let memo = vec![vec![BTreeMap::new(); geoms.len()]; f.terms.len()];
        Ok(TorusEvaluator { alg, f, geoms, parts, memo })
    }

    pub fn eval(&mut self, eps: &AlgElement) -> Result<CycScalar, Error> {
        if !eps.is_invertible() || eps.comps.len() != self.alg.m() {
            return Err(Error::ZeroInput);
        }
        let mut acc = CycScalar::zero();
        for (k, t) in self.f.terms.iter().enumerate() {
            let mut v = t.coeff.clone();
            for (i, g) in self.geoms.iter().enumerate() {
                let e = &eps.comps[i];
                let (gp, hp) = &self.parts[k][i];
                let x = self.memo[k][i].entry(e.coords()).or_insert_with(|| g.torus(gp, hp, e)).clone();
                v = &v * &x;
                if v.is_zero() {
                    break;
                }
            }
            acc += &v;
        }
        Ok(acc)
    }
}

/// `t ↦ f(t_Λ, t_{S1∖Λ})` on `∏_{S1} F_i` with every other coordinate 0;
/// `lambda[k]` refers to the `k`-th element of `S1`.
pub fn s1_slice(alg: &EtaleAlgebra, f: &StepFunction, lambda: &[bool]) -> Result<StepFunction, Error> {
    check_dim(alg, f)?;
    let n = alg.dim();
    let zero = || AffineCoord::constant(Rational::zero());
    let mut map = vec![zero(); 2 * n];
    let mut out = 0;
    for (k, &i) in alg.s1().iter().enumerate() {
        let off = alg.coord_offset(i);
        let side = if lambda[k] { 0 } else { n };
        for d in 0..alg.factors[i].degree() {
            map[side + off + d] = AffineCoord::var(out);
            out += 1;
        }
    }
    f.restrict_monomial(&map, out)
}

fn s1_geoms(alg: &EtaleAlgebra) -> Vec<FactorGeom> {
    alg.s1().iter().map(|&i| FactorGeom::new(&alg.factors[i], &alg.spec, true)).collect()
}

/// `Z_Λ = ∫_{T_{S1}} f(t_Λ, (t^{-1})_{S1∖Λ}) χ(t) dt` continued to `s = 0`,
/// for every `Λ ⊆ S1` (mask bit `k` set ⟺ `S1[k] ∈ Λ`).
pub fn c_empty_parts(alg: &EtaleAlgebra, f: &StepFunction) -> Result<Vec<CycScalar>, Error> {
    let s1 = alg.s1();
    let gs = s1_geoms(alg);
    let signs = vec![1; s1.len()];
    let mut out = Vec::with_capacity(1 << s1.len());
    for mask in 0u32..(1 << s1.len()) {
        let lambda: Vec<bool> = (0..s1.len()).map(|k| mask & (1 << k) != 0).collect();
        let h = s1_slice(alg, f, &lambda)?;
        let z = if s1.is_empty() { ZetaElement::constant(h.evaluate(&[])) } else { mult_zeta_geoms(&gs, &h, &signs) };
        out.push(z.value_at_one().ok_or_else(|| Error::Precondition("pole at s = 0 on an S1 factor".into()))?);
    }
    Ok(out)
}

/// `c_∅ = Σ_Λ ∏_{i ∈ S1∖Λ} χ(ε_i) Z_Λ` where `bits[k]` records
/// `χ(ε_{S1[k]}) = -1`.
pub fn c_empty_zeta(alg: &EtaleAlgebra, f: &StepFunction, bits: &[bool]) -> Result<CycScalar, Error> {
    let parts = c_empty_parts(alg, f)?;
    Ok(combine_parts(&parts, bits))
}

pub fn combine_parts(parts: &[CycScalar], bits: &[bool]) -> CycScalar {
    let mut acc = CycScalar::zero();
    for (mask, z) in parts.iter().enumerate() {
        let flips = (0..bits.len()).filter(|&k| mask & (1 << k) == 0 && bits[k]).count();
        if flips % 2 == 0 {
            acc += z;
        } else {
            acc -= z;
        }
    }
    acc
}

/// The two one-variable slices `x ↦ f(x, 0)` and `y ↦ f(0, y)` for `m = 1`.
fn axis_slices(f: &StepFunction, d: usize) -> Result<(StepFunction, StepFunction), Error> {
    let zero = || AffineCoord::constant(Rational::zero());
    let mut mx = vec![zero(); 2 * d];
    let mut my = vec![zero(); 2 * d];
    for k in 0..d {
        mx[k] = AffineCoord::var(k);
        my[d + k] = AffineCoord::var(k);
    }
    Ok((f.restrict_monomial(&mx, d)?, f.restrict_monomial(&my, d)?))
}

/// For `m = 1`: the two zeta integrals whose sum (at `s = 0`) is the
/// constant of the expansion; for `F_1 ⊇ E` these are
/// `∫ f(t,0)|t|^s` and `∫ f(0,t^{-1})|t|^s`, each with a simple pole.
pub fn m1_zetas(alg: &EtaleAlgebra, f: &StepFunction) -> Result<(ZetaElement, ZetaElement), Error> {
    check_dim(alg, f)?;
    if alg.m() != 1 {
        return Err(Error::Precondition("expected a single factor".into()));
    }
    let g = FactorGeom::new(&alg.factors[0], &alg.spec, true);
    let (fx, fy) = axis_slices(f, alg.dim())?;
    let za = mult_zeta_geoms(core::slice::from_ref(&g), &fx, &[1]);
    let zb = if alg.in_s1(0) {
        mult_zeta_geoms(core::slice::from_ref(&g), &fy, &[1])
    } else {
        mult_zeta_geoms(core::slice::from_ref(&g), &fy, &[-1])
    };
    Ok((za, zb))
}

/// The closed form of the expansion for `m = 1`:
/// `c - f(0,0) log_q|ε|` when `F_1 ⊇ E`, and
/// `Z(f(·,0)) + χ(ε) Z(f(0,·))` otherwise.
pub fn m1_closed_form(alg: &EtaleAlgebra, f: &StepFunction, eps: &AlgElement) -> Result<CycScalar, Error> {
    let (za, zb) = m1_zetas(alg, f)?;
    if alg.in_s1(0) {
        let a = za.value_at_one().ok_or(Error::Precondition("pole on an S1 factor".into()))?;
        let b = zb.value_at_one().ok_or(Error::Precondition("pole on an S1 factor".into()))?;
        let chi = alg.chi_total(eps);
        Ok(if chi == 1 { &a + &b } else { &a - &b })
    } else {
        let c = za.add(&zb).value_at_one().ok_or(Error::Precondition("residues do not cancel".into()))?;
        let f00 = f.evaluate(&vec![Rational::zero(); f.dim]);
        let v = alg.valuation(eps, 0).ok_or(Error::ZeroInput)?;
        Ok(&c + &f00.scale(&Rational::from_integer(v.into())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::poly::from_ints;
    use crate::scalar::LocalFieldSpec;

    fn unit_ball(p: u64, d: usize) -> StepFunction {
        StepFunction::ball(p, 2 * d, 0)
    }

    #[test]
    fn shell_counts() {
        let spec = LocalFieldSpec::unramified(3);
        let alg = EtaleAlgebra::from_factors(&spec, &[from_ints(&[-2, 0, 1])]).unwrap();
        let f = unit_ball(3, 2);
        for k in 0..4 {
            let eps = alg.element(&[rat(3i64.pow(k)), rat(0)]);
            let v = torus_orbit_integral(&alg, &f, &eps).unwrap();
            assert_eq!(v, CycScalar::from_int(k as i64 + 1));
            assert_eq!(m1_closed_form(&alg, &f, &eps).unwrap(), v);
        }
        let alg = EtaleAlgebra::from_factors(&spec, &[from_ints(&[0, 1])]).unwrap();
        let f = unit_ball(3, 1);
        for k in 0..5 {
            let eps = alg.element(&[rat(3i64.pow(k))]);
            let v = torus_orbit_integral(&alg, &f, &eps).unwrap();
            assert_eq!(v, CycScalar::from_int(if k % 2 == 0 { 1 } else { 0 }));
            assert_eq!(m1_closed_form(&alg, &f, &eps).unwrap(), v);
            let bits = [alg.chi_total(&eps) == -1];
            assert_eq!(c_empty_zeta(&alg, &f, &bits).unwrap(), v);
        }
    }
}
