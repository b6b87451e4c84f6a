//! Schwartz–Bruhat functions on `F^n` as finite sums of character-twisted
//! coset indicators
//!
//! `coeff · ψ(⟨a, x⟩) · ∏_i 1_{c_i + p^{k_i} Z_p}(x_i)`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{coset_rep, in_coset, pow_p, vp, vp_or_max, Rational};
use crate::cyclotomic::CycScalar;
use crate::linalg::RMatrix;
use crate::scalar::psi_value;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub center: Vec<Rational>,
    pub level: Vec<i64>,
    /// Character vector `a`; all zeros for a plain indicator.
    pub phase: Vec<Rational>,
    pub coeff: CycScalar,
}

impl Term {
    pub fn indicator(center: Vec<Rational>, level: Vec<i64>, coeff: CycScalar) -> Self {
        let n = center.len();
        Term { center, level, phase: vec![Rational::zero(); n], coeff }
    }

    pub fn has_phase(&self) -> bool {
        self.phase.iter().any(|a| !a.is_zero())
    }

    pub fn contains(&self, x: &[Rational], p: u64) -> bool {
        (0..x.len()).all(|i| in_coset(&x[i], &self.center[i], p, self.level[i]))
    }

    /// Smallest valuation of a point of the coset in coordinate `i`
    /// (`level` if the coset contains 0).
    pub fn min_valuation(&self, i: usize, p: u64) -> i64 {
        vp_or_max(&self.center[i], p).min(self.level[i])
    }

    /// Level from which the term is constant in coordinate `i`, phase included.
    pub fn constancy_level(&self, i: usize, p: u64) -> i64 {
        match vp(&self.phase[i], p) {
            None => self.level[i],
            Some(v) => self.level[i].max(-v),
        }
    }
}

/// One pairing entry `s · x_i · y_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub s: Rational,
}

/// Output coordinate description for [`StepFunction::restrict_monomial`]:
/// input coordinate `x_i = alpha · t_src + beta`, or `x_i = beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineCoord {
    pub src: Option<usize>,
    pub alpha: Rational,
    pub beta: Rational,
}

impl AffineCoord {
    pub fn var(j: usize) -> Self {
        AffineCoord { src: Some(j), alpha: Rational::from_integer(1.into()), beta: Rational::zero() }
    }

    pub fn scaled(j: usize, alpha: Rational) -> Self {
        AffineCoord { src: Some(j), alpha, beta: Rational::zero() }
    }

    pub fn constant(beta: Rational) -> Self {
        AffineCoord { src: None, alpha: Rational::zero(), beta }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub p: u64,
    pub dim: usize,
    pub terms: Vec<Term>,
}

/// Canonical tree of a phase-free step function: equal functions have
/// equal trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Zero,
    Leaf(CycScalar),
    /// Children indexed by the next p-adic digit of the current coordinate.
    Split(Vec<Node>),
    /// Constant in the current coordinate over the current ball; continue
    /// with the next coordinate rooted at `p^K Z_p`.
    Down(i64, Box<Node>),
}

fn intersect_ball(c1: &Rational, k1: i64, c2: &Rational, k2: i64, p: u64) -> Option<(Rational, i64)> {
    if k1 <= k2 {
        in_coset(c2, c1, p, k1).then(|| (c2.clone(), k2))
    } else {
        in_coset(c1, c2, p, k2).then(|| (c1.clone(), k1))
    }
}

impl StepFunction {
    pub fn zero(p: u64, dim: usize) -> Self {
        StepFunction { p, dim, terms: Vec::new() }
    }

    pub fn from_terms(p: u64, dim: usize, terms: Vec<Term>) -> Self {
        assert!(terms.iter().all(|t| t.center.len() == dim && t.level.len() == dim && t.phase.len() == dim));
        StepFunction { p, dim, terms }
    }

    /// `coeff · 1_{c + ∏ p^{k_i} Z_p}`.
    pub fn indicator(p: u64, center: Vec<Rational>, level: Vec<i64>, coeff: CycScalar) -> Self {
        let dim = center.len();
        StepFunction { p, dim, terms: vec![Term::indicator(center, level, coeff)] }
    }

    /// `1_{p^k Z_p^n}`.
    pub fn ball(p: u64, dim: usize, k: i64) -> Self {
        Self::indicator(p, vec![Rational::zero(); dim], vec![k; dim], CycScalar::one())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.check_same(o)?;
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(StepFunction { p: self.p, dim: self.dim, terms })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.add(&o.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.p, self.dim);
        }
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * s, ..t.clone() }).collect();
        StepFunction { p: self.p, dim: self.dim, terms }
    }

    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff.conj(), phase: t.phase.iter().map(|a| -a).collect(), ..t.clone() })
            .collect();
        StepFunction { p: self.p, dim: self.dim, terms }
    }

    fn check_same(&self, o: &Self) -> Result<(), Error> {
        if self.p != o.p || self.dim != o.dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient (p={}, n={}) vs (p={}, n={})",
                self.p, self.dim, o.p, o.dim
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        self.check_same(o)?;
        let p = self.p;
        let mut terms = Vec::new();
        for s in &self.terms {
            'pair: for t in &o.terms {
                let mut center = Vec::with_capacity(self.dim);
                let mut level = Vec::with_capacity(self.dim);
                for i in 0..self.dim {
                    match intersect_ball(&s.center[i], s.level[i], &t.center[i], t.level[i], p) {
                        Some((c, k)) => {
                            center.push(c);
                            level.push(k);
                        }
                        None => continue 'pair,
                    }
                }
                let phase = s.phase.iter().zip(&t.phase).map(|(a, b)| a + b).collect();
                terms.push(Term { center, level, phase, coeff: &s.coeff * &t.coeff });
            }
        }
        Ok(StepFunction { p, dim: self.dim, terms }.compact())
    }

    /// `f ⊗ g (x, y) = f(x) g(y)`.
    pub fn tensor(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &o.terms {
                let mut center = s.center.clone();
                center.extend(t.center.iter().cloned());
                let mut level = s.level.clone();
                level.extend(t.level.iter().cloned());
                let mut phase = s.phase.clone();
                phase.extend(t.phase.iter().cloned());
                terms.push(Term { center, level, phase, coeff: &s.coeff * &t.coeff });
            }
        }
        StepFunction { p: self.p, dim: self.dim + o.dim, terms }
    }

    pub fn evaluate(&self, x: &[Rational]) -> CycScalar {
        assert_eq!(x.len(), self.dim);
        let mut acc = CycScalar::zero();
        for t in &self.terms {
            if t.contains(x, self.p) {
                if t.has_phase() {
                    let ax: Rational = t.phase.iter().zip(x).map(|(a, y)| a * y).sum();
                    acc += &t.coeff * &psi_value(&ax, self.p);
                } else {
                    acc += &t.coeff;
                }
            }
        }
        acc
    }

    /// `∫ ψ(a x) dx` over `c + p^k Z_p`.
    fn coset_integral(a: &Rational, c: &Rational, k: i64, p: u64) -> Option<CycScalar> {
        if vp_or_max(a, p) < -k {
            return None;
        }
        Some(psi_value(&(a * c), p).scale(&pow_p(p, -k)))
    }

    /// Haar integral with `vol(Z_p^n) = 1`.
    pub fn integrate(&self) -> CycScalar {
        let p = self.p;
        let mut acc = CycScalar::zero();
        'term: for t in &self.terms {
            let mut v = t.coeff.clone();
            for i in 0..self.dim {
                match Self::coset_integral(&t.phase[i], &t.center[i], t.level[i], p) {
                    Some(x) => v = &v * &x,
                    None => continue 'term,
                }
            }
            acc += &v;
        }
        acc
    }

    /// Integrate out the listed coordinates.
    pub fn integrate_coords(&self, coords: &[usize]) -> Self {
        let p = self.p;
        let keep: Vec<usize> = (0..self.dim).filter(|i| !coords.contains(i)).collect();
        let mut terms = Vec::new();
        'term: for t in &self.terms {
            let mut coeff = t.coeff.clone();
            for &i in coords {
                match Self::coset_integral(&t.phase[i], &t.center[i], t.level[i], p) {
                    Some(x) => coeff = &coeff * &x,
                    None => continue 'term,
                }
            }
            terms.push(Term {
                center: keep.iter().map(|&i| t.center[i].clone()).collect(),
                level: keep.iter().map(|&i| t.level[i]).collect(),
                phase: keep.iter().map(|&i| t.phase[i].clone()).collect(),
                coeff,
            });
        }
        StepFunction { p, dim: keep.len(), terms }.compact()
    }

    /// Canonical coset representatives and phases, equal keys merged.
    pub fn compact(&self) -> Self {
        let p = self.p;
        let mut map: BTreeMap<(Vec<Rational>, Vec<i64>, Vec<Rational>), CycScalar> = BTreeMap::new();
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let center: Vec<Rational> = (0..self.dim).map(|i| coset_rep(&t.center[i], p, t.level[i])).collect();
            let mut shift = Rational::zero();
            let phase: Vec<Rational> = (0..self.dim)
                .map(|i| {
                    let a = coset_rep(&t.phase[i], p, -t.level[i]);
                    shift += (&t.phase[i] - &a) * &center[i];
                    a
                })
                .collect();
            let coeff = &t.coeff * &psi_value(&shift, p);
            let key = (center, t.level.clone(), phase);
            match map.get_mut(&key) {
                Some(c) => *c += &coeff,
                None => {
                    map.insert(key, coeff);
                }
            }
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((center, level, phase), coeff)| Term { center, level, phase, coeff })
            .collect();
        StepFunction { p, dim: self.dim, terms }
    }

    /// Same function written without phases (cosets refined until every
    /// character is constant on each piece).
    pub fn dephase(&self) -> Self {
        let p = self.p;
        let mut out = Vec::new();
        for t in &self.terms {
            if !t.has_phase() {
                out.push(t.clone());
                continue;
            }
            let mut pieces = vec![(t.center.clone(), t.level.clone())];
            for i in 0..self.dim {
                let target = t.constancy_level(i, p);
                if target <= t.level[i] {
                    continue;
                }
                let mut next = Vec::new();
                for (c, l) in pieces {
                    for sub in sub_cosets(&c[i], l[i], target, p) {
                        let mut c2 = c.clone();
                        c2[i] = sub;
                        let mut l2 = l.clone();
                        l2[i] = target;
                        next.push((c2, l2));
                    }
                }
                pieces = next;
            }
            for (c, l) in pieces {
                let ax: Rational = t.phase.iter().zip(&c).map(|(a, y)| a * y).sum();
                let coeff = &t.coeff * &psi_value(&ax, p);
                out.push(Term::indicator(c, l, coeff));
            }
        }
        StepFunction { p, dim: self.dim, terms: out }.compact()
    }

    pub fn canonical(&self) -> (i64, Node) {
        let f = self.dephase();
        let idx: Vec<usize> = (0..f.terms.len()).collect();
        if self.dim == 0 {
            let s: CycScalar = f.terms.iter().map(|t| t.coeff.clone()).sum();
            return (0, if s.is_zero() { Node::Zero } else { Node::Leaf(s) });
        }
        root(&f, &idx, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().1 == Node::Zero
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.check_same(o).is_ok() && self.sub(o).unwrap().is_zero()
    }

    /// Transform `∫ f(x) ψ(B(x, y)) dx` over the coordinates listed in
    /// `pairing` (a monomial pairing `Σ s · x_i y_j`); other coordinates
    /// pass through.
    pub fn fourier(&self, pairing: &[PairEntry]) -> Result<Self, Error> {
        let p = self.p;
        let mut seen_i = BTreeSet::new();
        let mut seen_j = BTreeSet::new();
        for e in pairing {
            if e.s.is_zero() || !seen_i.insert(e.i) || !seen_j.insert(e.j) {
                return Err(Error::DegeneratePairing);
            }
        }
        if seen_i != seen_j {
            return Err(Error::DegeneratePairing);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut center = t.center.clone();
            let mut level = t.level.clone();
            let mut phase = t.phase.clone();
            let mut coeff = t.coeff.clone();
            for e in pairing {
                let (a, c, k) = (&t.phase[e.i], &t.center[e.i], t.level[e.i]);
                coeff = &coeff * &psi_value(&(a * c), p).scale(&pow_p(p, -k));
                center[e.j] = -(a / &e.s);
                level[e.j] = -k - vp(&e.s, p).unwrap();
                phase[e.j] = &e.s * c;
            }
            terms.push(Term { center, level, phase, coeff });
        }
        Ok(StepFunction { p, dim: self.dim, terms }.compact())
    }

    /// Standard pairing `Σ x_i y_i` on the given coordinates.
    pub fn standard_pairing(coords: &[usize]) -> Vec<PairEntry> {
        coords.iter().map(|&i| PairEntry { i, j: i, s: Rational::from_integer(1.into()) }).collect()
    }

    /// `t ↦ f(x(t))` where every `x_i` is `α t_j + β` or a constant.
    pub fn restrict_monomial(&self, map: &[AffineCoord], out_dim: usize) -> Result<Self, Error> {
        assert_eq!(map.len(), self.dim);
        let p = self.p;
        let mut terms = Vec::new();
        'term: for t in &self.terms {
            let mut ball: Vec<Option<(Rational, i64)>> = vec![None; out_dim];
            let mut phase = vec![Rational::zero(); out_dim];
            let mut shift = Rational::zero();
            for (i, a) in map.iter().enumerate() {
                match a.src {
                    Some(j) if !a.alpha.is_zero() => {
                        let c = (&t.center[i] - &a.beta) / &a.alpha;
                        let k = t.level[i] - vp(&a.alpha, p).unwrap();
                        ball[j] = match &ball[j] {
                            None => Some((c, k)),
                            Some((c0, k0)) => match intersect_ball(c0, *k0, &c, k, p) {
                                Some(b) => Some(b),
                                None => continue 'term,
                            },
                        };
                        phase[j] += &t.phase[i] * &a.alpha;
                        shift += &t.phase[i] * &a.beta;
                    }
                    _ => {
                        if !in_coset(&a.beta, &t.center[i], p, t.level[i]) {
                            continue 'term;
                        }
                        shift += &t.phase[i] * &a.beta;
                    }
                }
            }
            let mut center = Vec::with_capacity(out_dim);
            let mut level = Vec::with_capacity(out_dim);
            for b in ball {
                let (c, k) = b.ok_or_else(|| Error::Precondition("restriction leaves a free coordinate".into()))?;
                center.push(c);
                level.push(k);
            }
            let coeff = &t.coeff * &psi_value(&shift, p);
            terms.push(Term { center, level, phase, coeff });
        }
        Ok(StepFunction { p, dim: out_dim, terms }.compact())
    }

    /// `x ↦ f(-x)`.
    pub fn parity(&self) -> Self {
        let map: Vec<AffineCoord> =
            (0..self.dim).map(|i| AffineCoord::scaled(i, Rational::from_integer((-1).into()))).collect();
        self.restrict_monomial(&map, self.dim).unwrap()
    }

    /// `x ↦ f(x + b)`.
    pub fn translate(&self, b: &[Rational]) -> Self {
        let map: Vec<AffineCoord> = (0..self.dim)
            .map(|i| AffineCoord { src: Some(i), alpha: Rational::from_integer(1.into()), beta: b[i].clone() })
            .collect();
        self.restrict_monomial(&map, self.dim).unwrap()
    }

    /// `x ↦ f(g x + b)` for invertible rational `g`.
    pub fn affine_pullback(&self, g: &RMatrix, b: &[Rational]) -> Result<Self, Error> {
        assert!(g.is_square() && g.rows == self.dim && b.len() == self.dim);
        if let Some(map) = monomial_map(g, b) {
            return self.restrict_monomial(&map, self.dim);
        }
        let ginv = g.inverse()?;
        let p = self.p;
        let n = self.dim;
        let gt = g.transpose();
        let mut terms = Vec::new();
        for t in &self.terms {
            let big: Vec<i64> = (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&i| !g[(i, j)].is_zero())
                        .map(|i| t.level[i] - vp(&g[(i, j)], p).unwrap())
                        .max()
                        .unwrap()
                })
                .collect();
            let gens: Vec<Vec<Rational>> =
                (0..n).map(|i| ginv.col(i).iter().map(|x| x * pow_p(p, t.level[i])).collect()).collect();
            let reps = lattice_quotient(&gens, &big, p);
            let diff: Vec<Rational> = (0..n).map(|i| &t.center[i] - &b[i]).collect();
            let x0 = ginv.mul_vec(&diff);
            let phase = gt.mul_vec(&t.phase);
            let ab: Rational = t.phase.iter().zip(b).map(|(a, y)| a * y).sum();
            let coeff = &t.coeff * &psi_value(&ab, p);
            for r in reps {
                let center = (0..n).map(|j| &x0[j] + &r[j]).collect();
                terms.push(Term { center, level: big.clone(), phase: phase.clone(), coeff: coeff.clone() });
            }
        }
        Ok(StepFunction { p, dim: n, terms }.compact())
    }

    pub fn max_level(&self) -> i64 {
        self.terms.iter().flat_map(|t| t.level.iter().cloned()).max().unwrap_or(0)
    }

    /// Largest `L` with the support inside `p^{L} Z_p^n` (by terms).
    pub fn support_valuation(&self) -> i64 {
        let p = self.p;
        self.terms
            .iter()
            .flat_map(|t| (0..self.dim).map(move |i| t.min_valuation(i, p)))
            .min()
            .unwrap_or(0)
    }

    /// Finest constancy level over all coordinates (phases included).
    pub fn constancy_level(&self) -> i64 {
        let p = self.p;
        self.terms
            .iter()
            .flat_map(|t| (0..self.dim).map(move |i| t.constancy_level(i, p)))
            .max()
            .unwrap_or(0)
    }
}

fn monomial_map(g: &RMatrix, b: &[Rational]) -> Option<Vec<AffineCoord>> {
    let n = g.rows;
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&j| !g[(i, j)].is_zero()).collect();
        if nz.len() != 1 || used[nz[0]] {
            return None;
        }
        used[nz[0]] = true;
        map.push(AffineCoord { src: Some(nz[0]), alpha: g[(i, nz[0])].clone(), beta: b[i].clone() });
    }
    Some(map)
}

/// Sub-cosets of `c + p^k Z_p` at level `target ≥ k`.
pub fn sub_cosets(c: &Rational, k: i64, target: i64, p: u64) -> Vec<Rational> {
    let count = p.pow((target - k) as u32);
    let step = pow_p(p, k);
    (0..count).map(|j| coset_rep(&(c + &step * Rational::from_integer(j.into())), p, target)).collect()
}

/// Elements of the group generated by `gens` modulo `∏ p^{big_j} Z_p`.
fn lattice_quotient(gens: &[Vec<Rational>], big: &[i64], p: u64) -> Vec<Vec<Rational>> {
    let canon = |v: &[Rational]| -> Vec<Rational> { v.iter().zip(big).map(|(x, k)| coset_rep(x, p, *k)).collect() };
    let zero = vec![Rational::zero(); big.len()];
    let mut seen = BTreeSet::new();
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    let gens: Vec<Vec<Rational>> = gens.iter().map(|g| canon(g)).filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    while let Some(v) = queue.pop() {
        for g in &gens {
            let w: Vec<Rational> = v.iter().zip(g).map(|(a, b)| a + b).collect();
            let w = canon(&w);
            if seen.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    seen.into_iter().collect()
}

fn root(f: &StepFunction, idx: &[usize], coord: usize) -> (i64, Node) {
    let p = f.p;
    let k = idx.iter().map(|&t| f.terms[t].min_valuation(coord, p)).min().unwrap_or(0);
    let mut k = k;
    let mut node = build(f, idx, coord, &Rational::zero(), k);
    loop {
        match &node {
            Node::Split(ch) if ch.iter().skip(1).all(|c| *c == Node::Zero) => {
                node = ch[0].clone();
                k += 1;
            }
            _ => break,
        }
    }
    if node == Node::Zero {
        k = 0;
    }
    (k, node)
}

fn build(f: &StepFunction, idx: &[usize], coord: usize, c: &Rational, k: i64) -> Node {
    let p = f.p;
    if idx.is_empty() {
        return Node::Zero;
    }
    if idx.iter().all(|&t| f.terms[t].level[coord] <= k) {
        if coord + 1 == f.dim {
            let s: CycScalar = idx.iter().map(|&t| f.terms[t].coeff.clone()).sum();
            return if s.is_zero() { Node::Zero } else { Node::Leaf(s) };
        }
        let (k2, sub) = root(f, idx, coord + 1);
        return if sub == Node::Zero { Node::Zero } else { Node::Down(k2, Box::new(sub)) };
    }
    let step = pow_p(p, k);
    let mut children = Vec::with_capacity(p as usize);
    for j in 0..p {
        let cj = c + &step * Rational::from_integer(j.into());
        let sub: Vec<usize> = idx
            .iter()
            .cloned()
            .filter(|&t| {
                let term = &f.terms[t];
                term.level[coord] <= k || in_coset(&term.center[coord], &cj, p, k + 1)
            })
            .collect();
        children.push(build(f, &sub, coord, &cj, k + 1));
    }
    if children.iter().all(|ch| *ch == Node::Zero) {
        return Node::Zero;
    }
    if matches!(children[0], Node::Down(..) | Node::Leaf(_)) && children.iter().all(|ch| *ch == children[0]) {
        return children.swap_remove(0);
    }
    Node::Split(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use crate::linalg::rmat;

    fn one() -> CycScalar {
        CycScalar::one()
    }

    #[test]
    fn integration_basics() {
        assert_eq!(StepFunction::ball(3, 2, 0).integrate(), one());
        assert_eq!(StepFunction::ball(3, 1, 2).integrate(), CycScalar::from_rational(ratio(1, 9)));
        assert_eq!(StepFunction::ball(3, 1, -1).integrate(), CycScalar::from_int(3));
    }

    #[test]
    fn refinement_is_equal() {
        let f = StepFunction::ball(3, 1, 0);
        let terms = (0..3).map(|j| Term::indicator(vec![rat(j)], vec![1], one())).collect();
        let g = StepFunction::from_terms(3, 1, terms);
        assert!(f.equals(&g));
        assert_eq!(f.integrate(), g.integrate());
        assert!(!f.equals(&StepFunction::ball(3, 1, 1)));
    }

    #[test]
    fn products() {
        let a = StepFunction::ball(5, 1, 0);
        let b = StepFunction::ball(5, 1, 1);
        assert!(a.mul(&b).unwrap().equals(&b));
    }

    #[test]
    fn fourier_self_dual() {
        let f = StepFunction::ball(3, 2, 0);
        let pair = StepFunction::standard_pairing(&[0, 1]);
        assert!(f.fourier(&pair).unwrap().equals(&f));
        let g = StepFunction::indicator(3, vec![ratio(1, 3), rat(2)], vec![1, 0], CycScalar::from_int(2));
        let gg = g.fourier(&pair).unwrap().fourier(&pair).unwrap();
        assert!(gg.equals(&g.parity()));
        assert_eq!(g.fourier(&pair).unwrap().integrate(), g.evaluate(&[rat(0), rat(0)]));
    }

    #[test]
    fn pullback_jacobian() {
        let f = StepFunction::ball(3, 2, 0);
        let g = rmat(&[&[3, 0], &[0, 3]]);
        let h = f.affine_pullback(&g, &[rat(0), rat(0)]).unwrap();
        assert_eq!(h.integrate(), CycScalar::from_int(9));
        let g = rmat(&[&[1, 1], &[0, 3]]);
        let h = f.affine_pullback(&g, &[rat(0), rat(0)]).unwrap();
        assert_eq!(h.integrate(), CycScalar::from_int(3));
        assert_eq!(h.evaluate(&[ratio(1, 3), ratio(-1, 3)]), one());
        assert!(h.evaluate(&[ratio(1, 3), ratio(1, 3)]).is_zero());
    }
}
