//! Orbit integrals on `u(W) × W`.
//!
//! For `dim W = 1` coordinates are `(δ, w_0, w_1)` with `w = w_0 + w_1 √τ0`,
//! and `U(W) = U(1)` has volume 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{vp, Rational};
use crate::bruhat::StepFunction;
use crate::cyclotomic::CycScalar;
use crate::etale::u1_cosets_e;
use crate::integrals::{Certificate, OrbitIntegralResult};
use crate::linalg::Field;
use crate::quadfield::Quad;
use crate::scalar::LocalFieldSpec;
use crate::spaces::UnitaryLieElement;
use crate::Error;

fn rank_one_delta(elt: &UnitaryLieElement) -> Result<Rational, Error> {
    if elt.space.n() != 1 {
        return Err(Error::Unsupported(format!("unitary orbit integrals of rank {}", elt.space.n())));
    }
    let d = &elt.delta.data[0];
    if !d.is_base() {
        return Err(Error::Precondition("δ is not twisted".into()));
    }
    Ok(d.a.clone())
}

/// `∫_{U(1)} φ(δ, g w) dg` for `φ` constant on cosets of `p^level` in the
/// `w` coordinates.
pub fn u1_average<F>(spec: &LocalFieldSpec, phi: F, level: i64, delta: &Rational, w: &Quad) -> OrbitIntegralResult
where
    F: Fn(&[Rational]) -> CycScalar,
{
    if w.vanishes() {
        let v = phi(&[delta.clone(), Rational::zero(), Rational::zero()]);
        return OrbitIntegralResult::new(v, Certificate { cells: 1, level: 0, radius: 0 });
    }
    let p = spec.p;
    let minval = [&w.a, &w.b].iter().filter_map(|c| vp(c, p)).min().unwrap();
    let k = (level - minval).max(1);
    let cosets = u1_cosets_e(spec, k as u32);
    let mut acc = CycScalar::zero();
    for (g0, g1) in &cosets {
        let gw = Quad::new(g0.clone(), g1.clone(), w.d.clone()).mul(w);
        acc += &phi(&[delta.clone(), gw.a, gw.b]);
    }
    let n = cosets.len();
    let value = acc.scale(&Rational::new(1.into(), (n as i64).into()));
    OrbitIntegralResult::new(value, Certificate { cells: n as u64, level: k, radius: minval })
}

/// `Orb(f, (δ, w)) = ∫_{U(W)} f(Ad(g)δ, g w) dg`, `dim W = 1`.
pub fn unitary_orbit_integral(
    spec: &LocalFieldSpec,
    f: &StepFunction,
    elt: &UnitaryLieElement,
    w: &[Quad],
) -> Result<OrbitIntegralResult, Error> {
    if f.dim != 3 {
        return Err(Error::DimensionMismatch("expected a function on u(W) × W with dim W = 1".into()));
    }
    let delta = rank_one_delta(elt)?;
    if w.len() != 1 {
        return Err(Error::DimensionMismatch("w must lie in W".into()));
    }
    Ok(u1_average(spec, |x| f.evaluate(x), f.constancy_level(), &delta, &w[0]))
}

/// `∫_{U(W)/T_δ} f(g δ g⁻¹, 0) dḡ`; at `dim W = 1` the quotient is a point.
pub fn unitary_nilpotent_term(f: &StepFunction, elt: &UnitaryLieElement) -> Result<CycScalar, Error> {
    let delta = rank_one_delta(elt)?;
    Ok(f.evaluate(&vec![delta, Rational::zero(), Rational::zero()]))
}

/// Points `(δ, w_0, w_1)` for the rank-one evaluator.
pub fn rank_one_point(delta: &Rational, w: &Quad) -> Vec<Rational> {
    vec![delta.clone(), w.a.clone(), w.b.clone()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::etale::tau0;
    use crate::spaces::{e_elem, lift_matrix, HermitianSpace};
    use crate::linalg::rmat;

    fn elt(spec: &LocalFieldSpec, d: i64, lambda: i64) -> UnitaryLieElement {
        let space = HermitianSpace::diagonal(spec, &[rat(lambda)]).unwrap();
        UnitaryLieElement::new(space, lift_matrix(spec, &rmat(&[&[d]]))).unwrap()
    }

    #[test]
    fn lattice_indicator_is_invariant() {
        for spec in [LocalFieldSpec::unramified(3), LocalFieldSpec::ramified(5)] {
            let f = StepFunction::ball(spec.p, 3, 0);
            let e = elt(&spec, 2, 1);
            for (a, b, want) in [(1, 0, 1), (0, 1, 1), (1, 3, 1)] {
                let w = e_elem(&spec, rat(a), rat(b));
                assert_eq!(unitary_orbit_integral(&spec, &f, &e, &[w]).unwrap().value, CycScalar::from_int(want));
            }
            let w = e_elem(&spec, crate::arith::ratio(1, spec.p as i64), rat(0));
            assert!(unitary_orbit_integral(&spec, &f, &e, &[w]).unwrap().value.is_zero());
        }
    }

    #[test]
    fn average_of_non_invariant_function() {
        // 1 on w ≡ 1 mod p: the U(1) fraction of units ≡ 1 mod p.
        let spec = LocalFieldSpec::unramified(3);
        let t = tau0(&spec);
        let f = StepFunction::indicator(3, vec![rat(0), rat(1), rat(0)], vec![0, 1, 1], CycScalar::one());
        let e = elt(&spec, 0, 1);
        let w = Quad::from_base(rat(1), &t);
        let r = unitary_orbit_integral(&spec, &f, &e, &[w]).unwrap();
        // U(1) mod 1 + pO_E has q + 1 = 4 classes.
        assert_eq!(r.value, CycScalar::from_rational(crate::arith::ratio(1, 4)));
        assert_eq!(unitary_nilpotent_term(&f, &e).unwrap(), CycScalar::zero());
    }
}
