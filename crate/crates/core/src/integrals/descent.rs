//! Parabolic descent from `gl_2 × V × V*` to the Levi `(gl_1 × F × F)²`
//! for the split `V = V_1 ⊕ V_2` along the standard basis.
//!
//! `f^P(λ, v, v*) = ∫_F f_K(λ + x E_12, v, v*) dx`. Levi coordinates are
//! laid out block by block: `(λ_1, v_1, v*_1, λ_2, v_2, v*_2)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{pow_p, rat, vp, Rational};
use crate::bruhat::{mult_zeta_lines, AffineCoord, PairEntry, StepFunction};
use crate::cyclotomic::CycScalar;
use crate::integrals::gl::{
    act_on_function, averaging_level, check_nilpotent_datum, flag_reps, k_average, nilpotent_rank2, GlTriple,
};
use crate::integrals::OrbitIntegralResult;
use crate::linalg::ridentity;
use crate::scalar::LocalFieldSpec;
use crate::Error;

fn frac(n: usize) -> CycScalar {
    CycScalar::from_rational(Rational::new(1.into(), (n as i64).into()))
}

/// `(x11, x12, x21, x22, v, v*) ↦` the upper triangular slice integrated
/// over `x12`, coordinates `(x11, x22, v1, v2, v1*, v2*)`.
fn upper_slice(f: &StepFunction) -> Result<StepFunction, Error> {
    let map = [
        AffineCoord::var(0),
        AffineCoord::var(1),
        AffineCoord::constant(Rational::zero()),
        AffineCoord::var(2),
        AffineCoord::var(3),
        AffineCoord::var(4),
        AffineCoord::var(5),
        AffineCoord::var(6),
    ];
    Ok(f.restrict_monomial(&map, 7)?.integrate_coords(&[1]))
}

/// `(x11, x22, v1, v2, v1*, v2*) → (λ1, v1, v1*, λ2, v2, v2*)`.
fn to_blocks(g: &StepFunction) -> Result<StepFunction, Error> {
    let src_of = [0usize, 3, 1, 4, 2, 5];
    let map: Vec<AffineCoord> = src_of.iter().map(|&j| AffineCoord::var(j)).collect();
    g.restrict_monomial(&map, 6)
}

/// `f^P`, with the maximal-compact average taken at congruence level
/// `N = averaging_level(f)` through `GL_2(Z/p^N) = ⊔ k_j B(Z/p^N)`.
pub fn parabolic_descent(spec: &LocalFieldSpec, f: &StepFunction) -> Result<StepFunction, Error> {
    parabolic_descent_at(spec, f, averaging_level(f))
}

pub fn parabolic_descent_at(spec: &LocalFieldSpec, f: &StepFunction, level: i64) -> Result<StepFunction, Error> {
    if f.dim != 8 {
        return Err(Error::DimensionMismatch("parabolic descent needs a function on gl_2 × V × V*".into()));
    }
    let p = spec.p;
    let reps = flag_reps(p, level, false);
    let mut g = StepFunction::zero(p, 6);
    for k in &reps {
        g = g.add(&upper_slice(&act_on_function(spec, f, k)?)?)?;
    }
    let g = g.compact().scale(&frac(reps.len()));
    let m = p.pow(level as u32) as i64;
    // Unipotent radical of B(O): v1 += c v2, v2* -= c v1*.
    let mut g1 = StepFunction::zero(p, 6);
    for c in 0..m {
        let mut a = ridentity(6);
        a[(2, 3)] = rat(c);
        a[(5, 4)] = rat(-c);
        g1 = g1.add(&g.affine_pullback(&a, &vec![Rational::zero(); 6])?)?;
    }
    let g1 = g1.compact().scale(&frac(m as usize));
    // Diagonal torus of B(O), weighted by χ(det).
    let units: Vec<i64> = (1..m).filter(|u| u % p as i64 != 0).collect();
    let mut g2 = StepFunction::zero(p, 6);
    for &a in &units {
        for &d in &units {
            let map = [
                AffineCoord::var(0),
                AffineCoord::var(1),
                AffineCoord::scaled(2, rat(a)),
                AffineCoord::scaled(3, rat(d)),
                AffineCoord::scaled(4, Rational::new(1.into(), a.into())),
                AffineCoord::scaled(5, Rational::new(1.into(), d.into())),
            ];
            let h = g1.restrict_monomial(&map, 6)?;
            g2 = g2.add(&if spec.chi(&rat(a * d)) == 1 { h } else { h.scale(&CycScalar::from_int(-1)) })?;
        }
    }
    let g2 = g2.compact().scale(&frac(units.len() * units.len()));
    to_blocks(&g2)
}

/// `f^P` through the full enumeration of `GL_2(Z/p^N)`.
pub fn parabolic_descent_brute(spec: &LocalFieldSpec, f: &StepFunction, level: i64) -> Result<StepFunction, Error> {
    to_blocks(&upper_slice(&k_average(spec, f, level)?)?)
}

/// Pairing of `tr(XY)` on `gl_2`, the identity elsewhere untouched.
pub fn gl2_trace_pairing() -> Vec<PairEntry> {
    let one = Rational::from_integer(1.into());
    [(0, 0), (1, 2), (2, 1), (3, 3)].iter().map(|&(i, j)| PairEntry { i, j, s: one.clone() }).collect()
}

/// Fourier transform in the `gl_2` variables.
pub fn fourier_gl2(f: &StepFunction) -> Result<StepFunction, Error> {
    f.fourier(&gl2_trace_pairing())
}

/// Fourier transform in the two `gl_1` variables of the Levi.
pub fn fourier_levi(f: &StepFunction) -> Result<StepFunction, Error> {
    f.fourier(&StepFunction::standard_pairing(&[0, 3]))
}

/// Nilpotent orbit integral on the Levi `GL_1 × GL_1`, where the quotient
/// by the torus is a point: `∫_T f^P(λ, t v, v* t⁻¹) ∏|t_i|^{±s} χ(t) dt` at `s = 0`.
pub fn levi_nilpotent_orbit_integral(
    spec: &LocalFieldSpec,
    fp: &StepFunction,
    d: &GlTriple,
) -> Result<CycScalar, Error> {
    check_nilpotent_datum(d)?;
    let mut map = Vec::with_capacity(6);
    for i in 0..2 {
        map.push(AffineCoord::constant(d.x[(i, i)].clone()));
        if d.v[i].is_zero() {
            map.push(AffineCoord::constant(Rational::zero()));
            map.push(AffineCoord::scaled(i, d.vstar[i].clone()));
        } else {
            map.push(AffineCoord::scaled(i, d.v[i].clone()));
            map.push(AffineCoord::constant(Rational::zero()));
        }
    }
    let h = fp.restrict_monomial(&map, 2)?;
    mult_zeta_lines(spec, &h, &[1, 1]).value_at_one().ok_or(Error::Precondition("pole at s = 0".into()))
}

/// Both sides of `Orb(f, (λ, v, v*)) = Orb(f^P, (λ, v, v*)) |D(λ)|^{-1}`
/// with `D(λ) = λ_1 - λ_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentSides {
    pub lhs: OrbitIntegralResult,
    pub rhs: CycScalar,
    pub abs_d_inv: Rational,
}

pub fn descent_sides(spec: &LocalFieldSpec, f: &StepFunction, d: &GlTriple) -> Result<DescentSides, Error> {
    let level = averaging_level(f);
    let lhs = nilpotent_rank2(spec, f, d, level)?;
    let fp = parabolic_descent_at(spec, f, level)?;
    let orb = levi_nilpotent_orbit_integral(spec, &fp, d)?;
    let disc = &d.x[(0, 0)] - &d.x[(1, 1)];
    let abs_d_inv = pow_p(spec.p, vp(&disc, spec.p).ok_or(Error::NotRegularSemisimple)?);
    let rhs = orb.scale(&abs_d_inv);
    Ok(DescentSides { lhs, rhs, abs_d_inv })
}

/// `fourier(f)^P` and `fourier(f^P)`.
pub fn descent_fourier_sides(spec: &LocalFieldSpec, f: &StepFunction) -> Result<(StepFunction, StepFunction), Error> {
    let level = averaging_level(f);
    let ff = fourier_gl2(f)?;
    let a = parabolic_descent_at(spec, &ff, level.max(averaging_level(&ff)))?;
    let b = fourier_levi(&parabolic_descent_at(spec, f, level)?)?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::Term;
    use crate::linalg::rmat;

    fn sample(p: u64) -> StepFunction {
        let mut terms = vec![Term::indicator(vec![rat(0); 8], vec![0; 8], CycScalar::one())];
        let mut c = vec![rat(0); 8];
        c[1] = rat(1);
        c[4] = rat(2);
        let mut lv = vec![0; 8];
        lv[4] = 1;
        lv[7] = 1;
        terms.push(Term::indicator(c, lv, CycScalar::from_int(-2)));
        StepFunction::from_terms(p, 8, terms)
    }

    #[test]
    fn coset_factorisation_matches_enumeration() {
        for spec in [LocalFieldSpec::unramified(3), LocalFieldSpec::ramified(3)] {
            let f = sample(3);
            let a = parabolic_descent_at(&spec, &f, 1).unwrap();
            let b = parabolic_descent_brute(&spec, &f, 1).unwrap();
            assert!(a.equals(&b));
        }
    }

    #[test]
    fn k_invariant_function_descends_to_restriction() {
        let spec = LocalFieldSpec::unramified(3);
        let f = StepFunction::ball(3, 8, 0);
        let fp = parabolic_descent(&spec, &f).unwrap();
        assert!(fp.equals(&StepFunction::ball(3, 6, 0)));
    }

    #[test]
    fn descent_identity_level_zero() {
        let spec = LocalFieldSpec::unramified(3);
        let f = sample(3);
        for (l2, v1, v2s) in [(1, 1, 1), (3, 1, 2), (1, 3, 1)] {
            let d = GlTriple::new(rmat(&[&[0, 0], &[0, l2]]), vec![rat(v1), rat(0)], vec![rat(0), rat(v2s)]).unwrap();
            let s = descent_sides(&spec, &f, &d).unwrap();
            assert_eq!(s.lhs.value, s.rhs);
        }
        let d = GlTriple::new(rmat(&[&[0, 0], &[0, 3]]), vec![rat(1), rat(0)], vec![rat(0), rat(1)]).unwrap();
        assert_eq!(descent_sides(&spec, &f, &d).unwrap().abs_d_inv, rat(3));
    }

    #[test]
    fn fourier_commutes_with_descent() {
        let spec = LocalFieldSpec::unramified(3);
        let (a, b) = descent_fourier_sides(&spec, &sample(3)).unwrap();
        assert!(a.equals(&b));
    }
}
