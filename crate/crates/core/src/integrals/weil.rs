//! Weil indices of the one-dimensional forms `a x²` for the level-0
//! character `ψ`, and exact quadratic-phase integrals used to test them.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{pow_p, rat, residue, unit_part, vp, Rational};
use crate::bruhat::step::sub_cosets;
use crate::bruhat::StepFunction;
use crate::cyclotomic::CycScalar;
use crate::scalar::{psi_value, LocalFieldSpec};
use crate::Error;

/// `g(u) = Σ_{y mod p} ζ_p^{u y²}`.
pub fn gauss_sum(u: i64, p: u64) -> CycScalar {
    (0..p as i64).map(|y| CycScalar::root_of_unity(u * y * y, p)).sum()
}

/// `√p` inside `Q(ζ_{4p})`: `g(1)` or `-i g(1)` according to `p mod 4`.
pub fn sqrt_p(p: u64) -> CycScalar {
    let g = gauss_sum(1, p);
    if p % 4 == 1 {
        g
    } else {
        -(&CycScalar::i() * &g)
    }
}

/// `|2a|^{-1/2} = p^{v(a)/2}`.
pub fn abs_inv_sqrt(a: &Rational, p: u64) -> Result<CycScalar, Error> {
    let v = vp(a, p).ok_or(Error::ZeroInput)?;
    let half = CycScalar::from_rational(pow_p(p, v.div_euclid(2)));
    Ok(if v.rem_euclid(2) == 1 { &half * &sqrt_p(p) } else { half })
}

/// `γ_a`: `1` for even `v(a)`, `g(u)/√p` for `a = p^{odd} u`.
pub fn weil_index(a: &Rational, spec: &LocalFieldSpec) -> Result<CycScalar, Error> {
    let p = spec.p;
    let v = vp(a, p).ok_or(Error::ZeroInput)?;
    if v.rem_euclid(2) == 0 {
        return Ok(CycScalar::one());
    }
    let u = residue(&unit_part(a, p), p, 1);
    let u = num_traits::ToPrimitive::to_i64(&u).unwrap();
    Ok(&gauss_sum(u, p) * &sqrt_p(p).inv().unwrap())
}

/// Weil index of `⊕ a_i x_i²`.
pub fn weil_index_diag(coeffs: &[Rational], spec: &LocalFieldSpec) -> Result<CycScalar, Error> {
    let mut acc = CycScalar::one();
    for a in coeffs {
        acc = &acc * &weil_index(a, spec)?;
    }
    Ok(acc)
}

/// `∫_F φ(x) ψ(b x²) dx` for a one-variable step function `φ`.
pub fn quadratic_phase_integral(phi: &StepFunction, b: &Rational) -> Result<CycScalar, Error> {
    if phi.dim != 1 {
        return Err(Error::DimensionMismatch("quadratic phase on F^1 only".into()));
    }
    let p = phi.p;
    let vb = vp(b, p);
    let mut acc = CycScalar::zero();
    for t in &phi.terms {
        let (c, k, alpha) = (&t.center[0], t.level[0], &t.phase[0]);
        let mut m = k;
        if let Some(va) = vp(alpha, p) {
            m = m.max(-va);
        }
        if let Some(vb) = vb {
            let vc = vp(c, p).map_or(k, |v| v.min(k));
            m = m.max(-vb - vc).max((-vb + 1).div_euclid(2));
        }
        let vol = pow_p(p, -m);
        let mut part = CycScalar::zero();
        for x in sub_cosets(c, k, m, p) {
            let arg = alpha * &x + b * &x * &x;
            part += &psi_value(&arg, p);
        }
        acc += &(&t.coeff * &part).scale(&vol);
    }
    Ok(acc)
}

/// The two sides of `∫ φ̂(x) ψ(a x²) dx = γ_a |2a|^{-1/2} ∫ φ(x) ψ(-x²/4a) dx`
/// with `γ_a` left out of the right side.
pub fn intertwining_sides(phi: &StepFunction, a: &Rational) -> Result<(CycScalar, CycScalar), Error> {
    let hat = phi.fourier(&StepFunction::standard_pairing(&[0]))?;
    let lhs = quadratic_phase_integral(&hat, a)?;
    let b = -(a * rat(4)).recip();
    let rhs = &abs_inv_sqrt(a, phi.p)? * &quadratic_phase_integral(phi, &b)?;
    Ok((lhs, rhs))
}

/// `γ_a` read off from the intertwining identity on the test functions
/// `1_{p^k O}`, for the first `k` where the right side does not vanish.
pub fn weil_index_from_intertwining(a: &Rational, p: u64) -> Result<CycScalar, Error> {
    let v = vp(a, p).ok_or(Error::ZeroInput)?;
    let mut tried = Vec::new();
    for k in (0..=v.abs() + 2).flat_map(|j| [j, -j]) {
        let phi = StepFunction::indicator(p, alloc::vec![Rational::zero()], alloc::vec![k], CycScalar::one());
        let (lhs, rhs) = intertwining_sides(&phi, a)?;
        if let Some(r) = rhs.inv() {
            return Ok(&lhs * &r);
        }
        tried.push(k);
    }
    Err(Error::NotCertified(alloc::format!("right side vanished for levels {:?}", tried)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn sqrt_p_squares_to_p() {
        for p in [3u64, 5, 7, 11, 13] {
            let s = sqrt_p(p);
            assert_eq!(&s * &s, CycScalar::from_int(p as i64));
        }
    }

    #[test]
    fn closed_form_matches_intertwining() {
        for p in [3u64, 5, 7] {
            let spec = LocalFieldSpec::unramified(p);
            for num in [1i64, 2, 3, 5, 6, 10, 15, 21, 35] {
                for den in [1i64, 3, 5, 7, 9] {
                    let a = ratio(num, den) * rat(if num % 2 == 0 { -1 } else { 1 });
                    if vp(&a, p).unwrap().abs() > 2 {
                        continue;
                    }
                    let direct = weil_index_from_intertwining(&a, p).unwrap();
                    assert_eq!(direct, weil_index(&a, &spec).unwrap(), "p={} a={}", p, a);
                }
            }
        }
    }

    #[test]
    fn inverse_and_eighth_root() {
        let spec = LocalFieldSpec::unramified(7);
        for a in [rat(1), rat(3), rat(7), rat(21), ratio(1, 7)] {
            let g = weil_index(&a, &spec).unwrap();
            assert_eq!(&g * &weil_index(&-a.clone(), &spec).unwrap(), CycScalar::one());
            assert!(g.pow(8).is_one());
        }
    }
}
