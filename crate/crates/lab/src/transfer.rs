//! Explicit transfers at rank one.
//!
//! For `n = 1` the orbit of `(γ, v, v*)` is determined by `(γ, b = v v*)`,
//! and a `U(1)`-invariant function on `u(W_i) × W_i` is a function of
//! `(δ, λ_i N(w))`. The transfer `f_i` is therefore stored as a step
//! function `F_i(δ, b)` with `f_i(δ, w) = F_i(δ, λ_i N(w))`.

use std::cell::RefCell;
use std::collections::BTreeMap;

use orbit_core::arith::{pow_p, rat, vp, Rational};
use orbit_core::bruhat::{StepFunction, Term};
use orbit_core::cyclotomic::CycScalar;
use orbit_core::etale::EtaleAlgebra;
use orbit_core::integrals::germ::germ_extract;
use orbit_core::integrals::torus::TorusEvaluator;
use orbit_core::integrals::gl::{gl_orbit_integral, line_algebra};
use orbit_core::integrals::unitary::u1_average;
use orbit_core::integrals::OrbitIntegralResult;
use orbit_core::linalg::RMatrix;
use orbit_core::quadfield::Quad;
use orbit_core::spaces::{omega, GlTriple, HermitianSpace};
use orbit_core::{Error, LocalFieldSpec};

#[derive(Clone, Debug)]
pub struct TransferN1 {
    pub spec: LocalFieldSpec,
    /// `W_0` (split) and `W_1`.
    pub spaces: [HermitianSpace; 2],
    /// `F_i` on `(δ, b)`.
    pub invariant_fns: [StepFunction; 2],
    /// Constancy level of `F_i` in `b` relative to `v(b)`, used for the
    /// `U(1)` average.
    pub level: i64,
    /// `v(b)` from which `F_i(δ, b) = F_i(δ, 0)` on every `δ`-cell.
    pub radius: i64,
}

impl TransferN1 {
    pub fn lambda(&self, i: usize) -> Rational {
        self.spaces[i].gram.data[0].a.clone()
    }

    /// `f_i(δ, w)`.
    pub fn eval(&self, i: usize, delta: &Rational, w: &Quad) -> CycScalar {
        let b = &self.lambda(i) * w.norm();
        self.invariant_fns[i].evaluate(&[delta.clone(), b])
    }

    /// `Orb(f_i, (δ, w))` computed as a `U(1)` average of `f_i`.
    pub fn orbit_integral(&self, i: usize, delta: &Rational, w: &Quad) -> OrbitIntegralResult {
        let lam = self.lambda(i);
        let f = &self.invariant_fns[i];
        let seen = RefCell::new(BTreeMap::new());
        let phi = |x: &[Rational]| {
            let w = Quad::new(x[1].clone(), x[2].clone(), w.d.clone());
            let b = &lam * w.norm();
            seen.borrow_mut().entry(b.clone()).or_insert_with(|| f.evaluate(&[x[0].clone(), b])).clone()
        };
        let p = self.spec.p;
        let minval = [&w.a, &w.b].iter().filter_map(|c| vp(c, p)).min().unwrap_or(0);
        u1_average(&self.spec, phi, minval + self.level, delta, w)
    }

    /// `∫_{U(W_i)/T_δ} f_i(g δ g⁻¹, 0) dḡ`.
    pub fn nilpotent_term(&self, i: usize, delta: &Rational) -> CycScalar {
        self.invariant_fns[i].evaluate(&[delta.clone(), Rational::from_integer(0.into())])
    }
}

/// `ω · Orb(f, (δ, 1, b))`.
pub fn gl_side(spec: &LocalFieldSpec, f: &StepFunction, delta: &Rational, b: &Rational) -> Result<CycScalar, Error> {
    let d = GlTriple::new(RMatrix::from_rows(vec![vec![delta.clone()]]), vec![rat(1)], vec![b.clone()])?;
    let w = omega(spec, &d)?;
    let v = gl_orbit_integral(spec, f, &d)?.value;
    Ok(if w == 1 { v } else { -v })
}

fn class_of_b(spec: &LocalFieldSpec, b: &Rational) -> usize {
    if spec.chi(b) == 1 {
        0
    } else {
        1
    }
}

/// Builds `(f_0, f_1)` from `f` on `gl_1 × F × F`, certifying local
/// constancy of the orbit-integral function cell by cell.
pub fn construct_jr_transfer_n1(spec: &LocalFieldSpec, f: &StepFunction) -> Result<TransferN1, Error> {
    if f.dim != 3 {
        return Err(Error::DimensionMismatch("expected a function on gl_1 × V × V*".into()));
    }
    let p = spec.p;
    let spaces = [HermitianSpace::with_class(spec, 1, 0), HermitianSpace::with_class(spec, 1, 1)];
    if f.is_zero() {
        let z = StepFunction::zero(p, 2);
        return Ok(TransferN1 { spec: spec.clone(), spaces, invariant_fns: [z.clone(), z], level: 1, radius: 0 });
    }
    let big_l = f.constancy_level();
    let mut radius = 2 * f.support_valuation().min(big_l);
    let mut level = 2;
    let mut terms: [Vec<Term>; 2] = [Vec::new(), Vec::new()];
    let alg = line_algebra(spec);
    let mut seen: Vec<(StepFunction, Profile)> = Vec::new();
    for t in &f.terms {
        let vv = StepFunction::from_terms(
            p,
            2,
            vec![Term {
                center: t.center[1..].to_vec(),
                level: t.level[1..].to_vec(),
                phase: t.phase[1..].to_vec(),
                coeff: CycScalar::one(),
            }],
        );
        if vv.is_zero() {
            continue;
        }
        let at = match seen.iter().position(|(k, _)| *k == vv) {
            Some(at) => at,
            None => {
                let l = vv.constancy_level();
                let s = vv.support_valuation().min(l);
                let e = (l - s).max(1);
                level = level.max(e + 1);
                let prof = profile(spec, &alg, &vv, s, e)?;
                seen.push((vv, prof));
                seen.len() - 1
            }
        };
        let prof = &seen[at].1;
        radius = radius.max(prof.deep);
        let mut push = |i: usize, b: Rational, k: i64, v: &CycScalar| {
            terms[i].push(Term {
                center: vec![t.center[0].clone(), b],
                level: vec![t.level[0], k],
                phase: vec![t.phase[0].clone(), rat(0)],
                coeff: &t.coeff * v,
            });
        };
        for (i, v) in prof.empty.iter().enumerate() {
            if !v.is_zero() {
                push(i, rat(0), prof.deep, v);
            }
        }
        for (i, b, k, v) in &prof.cells {
            push(*i, b.clone(), *k, v);
        }
    }
    let [t0, t1] = terms;
    Ok(TransferN1 {
        spec: spec.clone(),
        spaces,
        invariant_fns: [StepFunction::from_terms(p, 2, t0), StepFunction::from_terms(p, 2, t1)],
        level,
        radius,
    })
}

/// `b ↦ ω·Orb(h, (δ, 1, b))` for one restriction `h = f(δ, ·, ·)`: the
/// germ constants below `p^deep` and the nonzero cells above it.
struct Profile {
    deep: i64,
    empty: [CycScalar; 2],
    cells: Vec<(usize, Rational, i64, CycScalar)>,
}

fn profile(spec: &LocalFieldSpec, alg: &EtaleAlgebra, h: &StepFunction, s: i64, e: i64) -> Result<Profile, Error> {
    let p = spec.p;
    let g = germ_extract(alg, h)?;
    // v = 1 makes ω = 1 and the orbit integral the torus integral at ε = b
    let mut orb = TorusEvaluator::new(alg, h)?;
    let mut side = |b: &Rational| orb.eval(&alg.scalar(b));
    let deep = g.radius.max(2 * s);
    let mut cells = Vec::new();
    for j in 2 * s..deep {
        let step = pow_p(p, j);
        for u in 1..p.pow(e as u32) as i64 {
            if u % p as i64 == 0 {
                continue;
            }
            let b = rat(u) * &step;
            let val = side(&b)?;
            for probe in [1, -1, p as i64 + 1] {
                let b2 = &b + rat(probe) * pow_p(p, j + e);
                if side(&b2)? != val {
                    return Err(Error::NotCertified(format!("orbit integral not constant on b ∈ {} + p^{}", b, j + e)));
                }
            }
            if !val.is_zero() {
                cells.push((class_of_b(spec, &b), b, j + e, val));
            }
        }
    }
    for below in [2 * s - 1, 2 * s - 2] {
        if !side(&pow_p(p, below))?.is_zero() {
            return Err(Error::NotCertified(format!("orbit integral nonzero at v(b) = {}", below)));
        }
    }
    Ok(Profile { deep, empty: [g.c_empty(0).clone(), g.c_empty(1).clone()], cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_lattice() {
        let spec = LocalFieldSpec::unramified(3);
        let t = construct_jr_transfer_n1(&spec, &StepFunction::zero(3, 3)).unwrap();
        assert!(t.invariant_fns[0].is_zero() && t.invariant_fns[1].is_zero());
        let t = construct_jr_transfer_n1(&spec, &StepFunction::ball(3, 3, 0)).unwrap();
        let d = rat(1);
        for (w, want) in [(Quad::new(rat(1), rat(0), rat(2)), 1), (Quad::new(rat(0), orbit_core::arith::ratio(1, 3), rat(2)), 0)] {
            assert_eq!(t.eval(0, &d, &w), CycScalar::from_int(want));
        }
        assert_eq!(t.nilpotent_term(0, &d), CycScalar::one());
        assert!(t.nilpotent_term(1, &d).is_zero());
    }

    #[test]
    fn linear_in_f() {
        let spec = LocalFieldSpec::ramified(3);
        let third = orbit_core::arith::ratio(1, 3);
        let mut t = Term::indicator(vec![rat(1), third.clone(), rat(0)], vec![1, -1, 0], CycScalar::from_int(2));
        t.phase = vec![rat(0), rat(0), orbit_core::arith::ratio(1, 9)];
        let f = StepFunction::from_terms(3, 3, vec![t]);
        let g = StepFunction::ball(3, 3, 0);
        let sum = construct_jr_transfer_n1(&spec, &f.add(&g).unwrap()).unwrap();
        let (tf, tg) = (construct_jr_transfer_n1(&spec, &f).unwrap(), construct_jr_transfer_n1(&spec, &g).unwrap());
        for i in 0..2 {
            for d in [rat(1), rat(4), third.clone()] {
                for b in [rat(0), rat(1), rat(2), rat(3), third.clone(), rat(-6), orbit_core::arith::ratio(2, 9)] {
                    let x = [d.clone(), b];
                    let want = &tf.invariant_fns[i].evaluate(&x) + &tg.invariant_fns[i].evaluate(&x);
                    assert_eq!(sum.invariant_fns[i].evaluate(&x), want);
                }
            }
        }
    }
}
