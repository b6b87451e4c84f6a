//! Orbit integrals on `gl(V) × V × V*` for `dim V ≤ 2`.
//!
//! Coordinates: `x` row-major (`n²`), then `v` (`n`), then `v*` (`n`).
//! Haar measure on `GL_n` gives `GL_n(O)` volume 1; with `g = k n t` the
//! measure factors as `dk dn dt`, so `∫_{G/T} Φ = ∫_K ∫_N Φ(kn) dn dk`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{pow_p, rat, vp, Rational};
use crate::bruhat::step::sub_cosets;
use crate::bruhat::{mult_zeta_lines, AffineCoord, StepFunction};
use crate::cyclotomic::CycScalar;
use crate::etale::EtaleAlgebra;
use crate::integrals::torus::torus_orbit_integral;
use crate::integrals::{Certificate, OrbitIntegralResult};
use crate::linalg::{rzero_matrix, RMatrix};
use crate::poly::from_ints;
use crate::scalar::LocalFieldSpec;
use crate::Error;

pub use crate::spaces::GlTriple;

pub fn ambient_dim(n: usize) -> usize {
    n * n + 2 * n
}

/// Matrix of `z ↦ k · z` on the coordinates of `gl_n × V × V*`.
pub fn action_matrix(k: &RMatrix) -> Result<RMatrix, Error> {
    let n = k.rows;
    let ki = k.inverse()?;
    let d = ambient_dim(n);
    let mut m = rzero_matrix(d, d);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    m[(a * n + b, c * n + e)] = &k[(a, c)] * &ki[(e, b)];
                }
            }
        }
    }
    for a in 0..n {
        for c in 0..n {
            m[(n * n + a, n * n + c)] = k[(a, c)].clone();
            m[(n * n + n + a, n * n + n + c)] = ki[(c, a)].clone();
        }
    }
    Ok(m)
}

/// `z ↦ χ(det k) f(k · z)`.
pub fn act_on_function(spec: &LocalFieldSpec, f: &StepFunction, k: &RMatrix) -> Result<StepFunction, Error> {
    let a = action_matrix(k)?;
    let g = f.affine_pullback(&a, &vec![Rational::zero(); f.dim])?;
    Ok(if spec.chi(&k.det()) == 1 { g } else { g.scale(&CycScalar::from_int(-1)) })
}

/// `n` with `n² + 2n = dim`.
pub fn rank_of(f: &StepFunction) -> Result<usize, Error> {
    (1..=3)
        .find(|&n| ambient_dim(n) == f.dim)
        .ok_or_else(|| Error::DimensionMismatch(format!("{} is not n² + 2n", f.dim)))
}

/// Congruence level at which `f` is invariant under the principal
/// congruence subgroup acting by `k · z`.
pub fn averaging_level(f: &StepFunction) -> i64 {
    let l = f.constancy_level();
    let r = (-f.support_valuation()).max(0);
    (l + r).max(1)
}

/// Elements of `GL_n(Z/p^N)` as integer matrices.
pub fn gl_mod(n: usize, p: u64, level: i64) -> Vec<RMatrix> {
    let m = p.pow(level as u32) as i64;
    let total = (m as usize).pow((n * n) as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut r = idx;
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            entries.push((r % m as usize) as i64);
            r /= m as usize;
        }
        let k = RMatrix { rows: n, cols: n, data: entries.iter().map(|&e| rat(e)).collect() };
        if vp(&k.det(), p).is_some_and(|v| v == 0) {
            out.push(k);
        }
    }
    out
}

/// `f_K(z) = ∫_K χ(det k) f(k · z) dk` by enumeration of `GL_n(Z/p^N)`.
pub fn k_average(spec: &LocalFieldSpec, f: &StepFunction, level: i64) -> Result<StepFunction, Error> {
    let n = rank_of(f)?;
    let ks = gl_mod(n, spec.p, level);
    let mut acc = StepFunction::zero(f.p, f.dim);
    for k in &ks {
        acc = acc.add(&act_on_function(spec, f, k)?)?;
    }
    Ok(acc.compact().scale(&CycScalar::from_rational(Rational::new(1.into(), (ks.len() as i64).into()))))
}

/// Representatives `k_j` of `GL_2(Z/p^N) / B(Z/p^N)`, where `B` is the
/// upper (`lower = false`) or lower triangular Borel subgroup.
pub fn flag_reps(p: u64, level: i64, lower: bool) -> Vec<RMatrix> {
    let m = p.pow(level as u32) as i64;
    let mut out = Vec::new();
    for a in 0..m {
        out.push(if lower { mat2(1, a, 0, 1) } else { mat2(1, 0, a, 1) });
    }
    for c in 0..m / p as i64 {
        let pc = p as i64 * c;
        out.push(if lower { mat2(0, 1, 1, pc) } else { mat2(pc, 1, 1, 0) });
    }
    out
}

fn mat2(a: i64, b: i64, c: i64, d: i64) -> RMatrix {
    RMatrix { rows: 2, cols: 2, data: vec![rat(a), rat(b), rat(c), rat(d)] }
}

pub fn line_algebra(spec: &LocalFieldSpec) -> EtaleAlgebra {
    EtaleAlgebra::from_factors(spec, &[from_ints(&[0, 1])]).unwrap()
}

/// `∫_{GL_n} f(g x g⁻¹, g v, v* g⁻¹) χ(det g) dg` for regular semisimple
/// data; rank one only.
pub fn gl_orbit_integral(spec: &LocalFieldSpec, f: &StepFunction, d: &GlTriple) -> Result<OrbitIntegralResult, Error> {
    if d.n() != 1 || f.dim != 3 {
        return Err(Error::Unsupported(format!("regular semisimple orbit integrals of rank {}", d.n())));
    }
    let (v, vs) = (&d.v[0], &d.vstar[0]);
    if v.is_zero() || vs.is_zero() {
        return Err(Error::NotRegularSemisimple);
    }
    let h = f.restrict_monomial(
        &[AffineCoord::constant(d.x.data[0].clone()), AffineCoord::var(0), AffineCoord::var(1)],
        2,
    )?;
    let alg = line_algebra(spec);
    let eps = alg.scalar(&(v * vs));
    let t = torus_orbit_integral(&alg, &h, &eps)?;
    let value = if spec.chi(v) == 1 { t } else { -t };
    Ok(OrbitIntegralResult::new(value, Certificate { cells: h.terms.len() as u64, level: 0, radius: 0 }))
}

/// Nilpotent data `(x, v, v*)`: `x` diagonal with distinct entries, and in
/// every eigenline exactly one of `v_i`, `v*_i` nonzero.
pub fn check_nilpotent_datum(d: &GlTriple) -> Result<(), Error> {
    let n = d.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && !d.x[(i, j)].is_zero() {
                return Err(Error::Unsupported("nilpotent data with non-diagonal x".into()));
            }
        }
        for j in 0..i {
            if d.x[(i, i)] == d.x[(j, j)] {
                return Err(Error::NotRegularSemisimple);
            }
        }
        if d.v[i].is_zero() == d.vstar[i].is_zero() {
            return Err(Error::Precondition(format!("eigenline {} needs exactly one of v_i, v*_i", i)));
        }
    }
    Ok(())
}

/// `∫_{GL(V)/T} ( ∫_T f(Ad(g)x, g t v, v* t⁻¹ g⁻¹) ∏|t_i|^{±s} χ(t) χ(g) dt |_{s=0} ) dḡ`
/// with sign `+` where `v_i ≠ 0` and `-` where `v*_i ≠ 0`.
pub fn nilpotent_orbit_integral_gl(
    spec: &LocalFieldSpec,
    f: &StepFunction,
    d: &GlTriple,
) -> Result<OrbitIntegralResult, Error> {
    check_nilpotent_datum(d)?;
    match d.n() {
        1 => nilpotent_rank1(spec, f, d),
        2 => nilpotent_rank2(spec, f, d, averaging_level(f)),
        n => Err(Error::Unsupported(format!("nilpotent orbit integrals of rank {}", n))),
    }
}

fn nilpotent_rank1(spec: &LocalFieldSpec, f: &StepFunction, d: &GlTriple) -> Result<OrbitIntegralResult, Error> {
    let x = AffineCoord::constant(d.x.data[0].clone());
    let zero = AffineCoord::constant(Rational::zero());
    let (map, c) = if !d.v[0].is_zero() {
        ([x, AffineCoord::var(0), zero], &d.v[0])
    } else {
        ([x, zero, AffineCoord::var(0)], &d.vstar[0])
    };
    let h = f.restrict_monomial(&map, 1)?;
    let z = mult_zeta_lines(spec, &h, &[1]).value_at_one().ok_or_else(pole)?;
    let value = if spec.chi(c) == 1 { z } else { -z };
    Ok(OrbitIntegralResult::new(value, Certificate { cells: 1, level: 0, radius: 0 }))
}

fn pole() -> Error {
    Error::Precondition("pole at s = 0".into())
}

/// Rank two through `g = k n⁻(y) t` with `n⁻(y) = [[1,0],[y,1]]`: the
/// inner torus integral is a zeta integral in `(t_a, t_b)` for every fixed
/// `(k, y)`, `k` runs over `GL_2(Z/p^N)/B⁻`, and `y` over cells on which
/// the inner integrand does not change.
pub fn nilpotent_rank2(
    spec: &LocalFieldSpec,
    f: &StepFunction,
    d: &GlTriple,
    level: i64,
) -> Result<OrbitIntegralResult, Error> {
    check_nilpotent_datum(d)?;
    if f.dim != 8 {
        return Err(Error::DimensionMismatch("expected a function on gl_2 × V × V*".into()));
    }
    let p = spec.p;
    let (l1, l2) = (d.x[(0, 0)].clone(), d.x[(1, 1)].clone());
    let disc = &l1 - &l2;
    let vd = vp(&disc, p).unwrap();
    let big_l = f.constancy_level();
    let big_r = (-f.support_valuation()).max(0);
    let ylo = -big_r - vd;
    let m = (big_l - vd).max(big_l + big_r).max(ylo);
    // Monomial patterns only: v = (a, 0), v* = (0, b) or v = (0, a), v* = (b, 0).
    let first = !d.v[0].is_zero();
    if !d.v[0].is_zero() && !d.v[1].is_zero() || !d.vstar[0].is_zero() && !d.vstar[1].is_zero() {
        return Err(Error::Unsupported("nilpotent datum outside the monomial patterns".into()));
    }
    let reps = flag_reps(p, level, true);
    let mut total = CycScalar::zero();
    let mut cells = 0u64;
    for k in &reps {
        let ki = k.inverse()?;
        let chi_k = spec.chi(&k.det());
        for y in sub_cosets(&Rational::zero(), ylo, m, p) {
            let x = RMatrix { rows: 2, cols: 2, data: vec![l1.clone(), Rational::zero(), &y * &disc, l2.clone()] };
            let xk = k.mul(&x).mul(&ki);
            let (vvec, svec) = if first {
                (vec![d.v[0].clone(), &d.v[0] * &y], vec![-(&d.vstar[1] * &y), d.vstar[1].clone()])
            } else {
                (vec![Rational::zero(), d.v[1].clone()], vec![d.vstar[0].clone(), Rational::zero()])
            };
            let kv = k.mul_vec(&vvec);
            let sk = ki.vec_mul(&svec);
            let mut map: Vec<AffineCoord> = xk.data.iter().map(|c| AffineCoord::constant(c.clone())).collect();
            map.extend(kv.into_iter().map(|a| AffineCoord::scaled(0, a)));
            map.extend(sk.into_iter().map(|a| AffineCoord::scaled(1, a)));
            let h = f.restrict_monomial(&map, 2)?;
            cells += 1;
            if h.is_empty() {
                continue;
            }
            let z = mult_zeta_lines(spec, &h, &[1, 1]).value_at_one().ok_or_else(pole)?;
            total += &if chi_k == 1 { z } else { -z };
        }
    }
    let weight = pow_p(p, -m) / Rational::from_integer((reps.len() as i64).into());
    Ok(OrbitIntegralResult::new(total.scale(&weight), Certificate { cells, level, radius: ylo }))
}

/// Value of a rank-two nilpotent integral at level `N` and at `N + 1`.
pub fn nilpotent_rank2_stable(spec: &LocalFieldSpec, f: &StepFunction, d: &GlTriple) -> Result<bool, Error> {
    let n = averaging_level(f);
    Ok(nilpotent_rank2(spec, f, d, n)?.value == nilpotent_rank2(spec, f, d, n + 1)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::bruhat::Term;
    use crate::linalg::rmat;

    fn triple1(x: i64, v: i64, vs: i64) -> GlTriple {
        GlTriple::new(rmat(&[&[x]]), vec![rat(v)], vec![rat(vs)]).unwrap()
    }

    #[test]
    fn rank_one_nilpotent_half() {
        let spec = LocalFieldSpec::unramified(3);
        let f = StepFunction::ball(3, 3, 0);
        let r = nilpotent_orbit_integral_gl(&spec, &f, &triple1(2, 1, 0)).unwrap();
        assert_eq!(r.value, CycScalar::from_rational(ratio(1, 2)));
    }

    #[test]
    fn rank_one_shell_sum() {
        let spec = LocalFieldSpec::unramified(3);
        let f = StepFunction::ball(3, 3, 0);
        for (v, vs) in [(1, 1), (1, 3), (3, 3), (2, 9), (1, 27), (3, 1)] {
            let direct: i64 = {
                // t ∈ p^j O^×, need 0 ≤ j ≤ v(vv*), weight χ(p)^j · χ(v)
                let b = rat(v * vs);
                let k = vp(&b, 3).unwrap();
                let s: i64 = (0..=k).map(|j| if j % 2 == 0 { 1 } else { -1 }).sum();
                s * spec.chi(&rat(v)) as i64
            };
            let r = gl_orbit_integral(&spec, &f, &triple1(1, v, vs)).unwrap();
            assert_eq!(r.value, CycScalar::from_int(direct));
        }
    }

    #[test]
    fn action_matches_pointwise() {
        let k = rmat(&[&[1, 2], &[3, 5]]);
        let z = GlTriple::new(rmat(&[&[1, 4], &[0, 2]]), vec![rat(1), rat(3)], vec![rat(2), rat(-1)]).unwrap();
        let a = action_matrix(&k).unwrap();
        assert_eq!(a.mul_vec(&z.coords()), z.act(&k).unwrap().coords());
    }

    #[test]
    fn flag_reps_count() {
        for lower in [false, true] {
            assert_eq!(flag_reps(3, 1, lower).len(), 4);
            assert_eq!(flag_reps(3, 2, lower).len(), 12);
        }
        assert_eq!(gl_mod(2, 3, 1).len(), 48);
    }

    #[test]
    fn rank_two_refinement_stable() {
        let spec = LocalFieldSpec::unramified(3);
        let mut f = StepFunction::ball(3, 8, 0);
        f.terms.push(Term::indicator(vec![rat(1); 8], vec![1; 8], CycScalar::from_int(2)));
        let d = GlTriple::new(rmat(&[&[0, 0], &[0, 1]]), vec![rat(1), rat(0)], vec![rat(0), rat(1)]).unwrap();
        assert!(nilpotent_rank2_stable(&spec, &f, &d).unwrap());
    }
}
