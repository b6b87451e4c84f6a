//! Seeded random inputs. Every instance gets its own stream derived from
//! `(seed, index)`, so a single instance can be replayed alone.

use orbit_core::arith::{pow_p, rat};
use orbit_core::bruhat::{StepFunction, Term};
use orbit_core::cyclotomic::CycScalar;
use orbit_core::poly::{from_ints, Poly};
use orbit_core::{LocalFieldSpec, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64))
}

/// Shape of generated step functions.
#[derive(Clone, Debug)]
pub struct FnShape {
    pub max_terms: usize,
    /// Coset levels are drawn from `min_level..=max_level`.
    pub min_level: i64,
    pub max_level: i64,
    pub phase_prob: f64,
}

impl FnShape {
    pub fn new(max_level: i64) -> Self {
        FnShape { max_terms: 3, min_level: -1, max_level, phase_prob: 0.25 }
    }
}

/// A residue `0 ≤ r < p^k`.
pub fn residue(rng: &mut ChaCha8Rng, p: u64, k: u32) -> i64 {
    rng.gen_range(0..p.pow(k) as i64)
}

pub fn unit(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    let r = rng.gen_range(1..p as i64);
    r + p as i64 * rng.gen_range(0..p as i64)
}

/// `p^v u` with `u` a random unit.
pub fn with_valuation(rng: &mut ChaCha8Rng, p: u64, v: i64) -> Rational {
    rat(unit(rng, p)) * pow_p(p, v)
}

/// `p^v u` with `v` drawn from `range`.
pub fn valued(rng: &mut ChaCha8Rng, p: u64, range: std::ops::RangeInclusive<i64>) -> Rational {
    let v = rng.gen_range(range);
    with_valuation(rng, p, v)
}

fn coeff(rng: &mut ChaCha8Rng) -> CycScalar {
    let c = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
    CycScalar::from_int(c)
}

/// A random term: each coordinate is a coset `c + p^l O` with `c` reduced
/// and, with some probability, an additive character of small conductor.
pub fn term(rng: &mut ChaCha8Rng, p: u64, dim: usize, shape: &FnShape) -> Term {
    let mut center = Vec::with_capacity(dim);
    let mut level = Vec::with_capacity(dim);
    let mut phase = Vec::with_capacity(dim);
    for _ in 0..dim {
        let l = rng.gen_range(shape.min_level..=shape.max_level);
        let lo = shape.min_level.min(l);
        // center in p^lo O / p^l O
        let c = if rng.gen_bool(0.4) { Rational::from_integer(0.into()) } else { rat(residue(rng, p, (l - lo) as u32)) * pow_p(p, lo) };
        center.push(orbit_core::arith::coset_rep(&c, p, l));
        level.push(l);
        let a = if rng.gen_bool(shape.phase_prob) {
            let k = rng.gen_range(1..=2i64);
            rat(rng.gen_range(1..p as i64)) * pow_p(p, -(l + k).max(1))
        } else {
            Rational::from_integer(0.into())
        };
        phase.push(a);
    }
    Term { center, level, phase, coeff: coeff(rng) }
}

pub fn step_function(rng: &mut ChaCha8Rng, p: u64, dim: usize, shape: &FnShape) -> StepFunction {
    let k = rng.gen_range(1..=shape.max_terms);
    let terms = (0..k).map(|_| term(rng, p, dim, shape)).collect();
    StepFunction::from_terms(p, dim, terms)
}

/// Kinds of simple factors of `F[γ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorType {
    /// `F_i = F`.
    Line,
    /// `F_i ≅ E`.
    Quad,
    /// `F_i` a quadratic field other than `E`.
    Other,
}

impl FactorType {
    pub fn tag(self) -> char {
        match self {
            FactorType::Line => 'F',
            FactorType::Quad => 'E',
            FactorType::Other => 'K',
        }
    }
}

/// All multisets of factor types of size `1..=max_m`.
pub fn mixes(max_m: usize) -> Vec<Vec<FactorType>> {
    use FactorType::*;
    let all = [Line, Quad, Other];
    let mut out: Vec<Vec<FactorType>> = vec![vec![]];
    let mut res = Vec::new();
    for _ in 0..max_m {
        let mut next = Vec::new();
        for m in &out {
            let start = m.last().map(|t| all.iter().position(|x| x == t).unwrap()).unwrap_or(0);
            for t in &all[start..] {
                let mut v = m.clone();
                v.push(*t);
                next.push(v);
            }
        }
        res.extend(next.iter().cloned());
        out = next;
    }
    res
}

/// Distinct monic polynomials realizing a mix: the `j`-th factor of a type
/// is shifted by `j` (lines) or scaled by `p^{2j}` (quadratics).
pub fn factor_polys(spec: &LocalFieldSpec, mix: &[FactorType]) -> Vec<Poly> {
    let p = spec.p as i64;
    let t0 = orbit_core::etale::tau0(spec);
    let t0 = num_int(&t0);
    let other = if spec.is_ramified() { spec.nonresidue() as i64 } else { p };
    let mut counts = [0i64; 3];
    mix.iter()
        .map(|t| {
            let j = &mut counts[*t as usize];
            let k = *j;
            *j += 1;
            match t {
                FactorType::Line => from_ints(&[-k, 1]),
                FactorType::Quad => from_ints(&[-t0 * p.pow(2 * k as u32), 0, 1]),
                FactorType::Other => from_ints(&[-other * p.pow(2 * k as u32), 0, 1]),
            }
        })
        .collect()
}

fn num_int(r: &Rational) -> i64 {
    orbit_core::arith::to_i64(r.numer()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_count() {
        assert_eq!(mixes(3).len(), 3 + 6 + 10);
    }

    #[test]
    fn replayable() {
        let shape = FnShape::new(1);
        let a = step_function(&mut instance_rng(7, 3), 3, 2, &shape);
        let b = step_function(&mut instance_rng(7, 3), 3, 2, &shape);
        assert!(a.equals(&b));
    }
}
