//! Verification suites. Each runs a family of randomized or exhaustive
//! instances and returns one report; instance `i` draws from
//! `instance_rng(seed, i)` so `only = Some(i)` replays it alone.

use orbit_core::arith::{pow_p, rat, to_i64, vp, Rational};
use orbit_core::bruhat::{mult_zeta_lines, FactorGeom, StepFunction};
use orbit_core::cohomology::{
    check_d2, check_torsor, delta_x_family, inv, pairing, pairing_is_perfect, H1Class, LambdaMask,
};
use orbit_core::cyclotomic::CycScalar;
use orbit_core::etale::{AlgElement, EtaleAlgebra};
use orbit_core::integrals::descent::{descent_fourier_sides, descent_sides};
use orbit_core::integrals::germ::{check_c_empty, germ_extract, GermExpansion};
use orbit_core::integrals::gl::nilpotent_orbit_integral_gl;
use orbit_core::integrals::torus::{m1_closed_form, TorusEvaluator};
use orbit_core::integrals::unitary::unitary_orbit_integral;
use orbit_core::integrals::weil::{gauss_sum, weil_index, weil_index_from_intertwining};
use orbit_core::linalg::{Field, RMatrix};
use orbit_core::poly;
use orbit_core::quadfield::Quad;
use orbit_core::spaces::{
    companion, construct_gl_match, construct_unitary_match, e_elem, match_predicate, omega, EMatrix, GlTriple,
    HermitianSpace, UnitaryLieElement,
};
use orbit_core::weil_endoscopy::{square_class_reps, transfer_factor_blocks, verify_sign_identity, weil_hilbert_identities};
use orbit_core::{Error, LocalFieldSpec, SquareClass};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::gen::{factor_polys, instance_rng, mixes, step_function, unit, valued, FactorType, FnShape};
use crate::json::{quad_json, rat_str, GlTripleJson, StepFunctionJson};
use crate::ledger::{Calibration, NormalizationLedger};
use crate::oracles::{gauss_sum_numeric, hilbert_brute};
use crate::report::{ReportBuilder, VerificationReport};
use crate::transfer::{construct_jr_transfer_n1, gl_side};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    /// `None` runs both an unramified and a ramified `E`.
    pub tau: Option<Rational>,
    pub seed: u64,
    pub instances: usize,
    pub max_level: i64,
    pub only: Option<usize>,
    pub ledger: NormalizationLedger,
}

impl SuiteConfig {
    pub fn new(primes: &[u64], instances: usize, max_level: i64) -> Self {
        SuiteConfig {
            primes: primes.to_vec(),
            tau: None,
            seed: 1,
            instances,
            max_level,
            only: None,
            ledger: NormalizationLedger::default(),
        }
    }

    fn specs(&self, p: u64) -> Result<Vec<LocalFieldSpec>, Error> {
        match &self.tau {
            Some(t) => Ok(vec![LocalFieldSpec::new(p, t.clone())?]),
            None => Ok(vec![LocalFieldSpec::unramified(p), LocalFieldSpec::ramified(p)]),
        }
    }

    fn unramified_specs(&self, p: u64) -> Result<Vec<LocalFieldSpec>, Error> {
        let s = self.specs(p)?;
        Ok(s.into_iter().filter(|s| !s.is_ramified()).collect())
    }

    fn wanted(&self, idx: usize) -> bool {
        self.only.is_none_or(|o| o == idx)
    }
}

fn spec_json(spec: &LocalFieldSpec) -> serde_json::Value {
    json!({ "p": spec.p, "tau": rat_str(&spec.tau) })
}

fn fn_json(f: &StepFunction) -> serde_json::Value {
    serde_json::to_value(StepFunctionJson::from(f)).unwrap()
}

fn cyc(c: &CycScalar) -> String {
    c.to_string()
}

fn sign(s: i8) -> CycScalar {
    CycScalar::from_int(s as i64)
}

/// Records the outcome of an instance body; `Err` counts as a failure.
fn settle(r: &mut ReportBuilder, idx: usize, out: Result<Option<String>, Error>, witness: impl FnOnce() -> serde_json::Value) {
    match out {
        Ok(None) => r.pass(),
        Ok(Some(msg)) => r.fail(idx, msg, witness()),
        Err(e) => r.fail(idx, format!("error: {}", e), witness()),
    }
}

fn mix_tag(mix: &[FactorType]) -> String {
    mix.iter().map(|t| t.tag()).collect()
}

fn algebra_for(spec: &LocalFieldSpec, mix: &[FactorType]) -> Result<EtaleAlgebra, Error> {
    EtaleAlgebra::from_factors(spec, &factor_polys(spec, mix))
}

/// `ε` on the grid: every norm class over `S1`, and factor valuations
/// `radius + d_i` with `0 ≤ d_i ≤ 3`.
fn eps_grid(alg: &EtaleAlgebra, radius: i64) -> Result<Vec<AlgElement>, Error> {
    let m = alg.m();
    let geoms = FactorGeom::from_algebra(alg, &vec![true; m]);
    let mut out = Vec::new();
    for (_, rep) in alg.norm_class_reps()? {
        for code in 0..4usize.pow(m as u32) {
            let comps = (0..m)
                .map(|i| {
                    let d = (code / 4usize.pow(i as u32)) % 4;
                    rep.comps[i].mul(&geoms[i].pi_pow(radius + d as i64))
                })
                .collect();
            out.push(AlgElement { comps });
        }
    }
    Ok(out)
}

fn germ_instance(alg: &EtaleAlgebra, f: &StepFunction) -> Result<Option<String>, Error> {
    let g = germ_extract(alg, f)?;
    if !check_c_empty(alg, f, &g)? {
        return Ok(Some("c_∅ differs from its zeta-integral closed form".into()));
    }
    let mut orb = TorusEvaluator::new(alg, f)?;
    for eps in eps_grid(alg, g.radius)? {
        if !g.in_range(alg, &eps) {
            continue;
        }
        let lhs = orb.eval(&eps)?;
        let rhs = g.predict(alg, &eps)?;
        if lhs != rhs {
            let bits = GermExpansion::class_mask(alg, &eps);
            return Ok(Some(format!("Orb = {} but expansion = {} (class bits {})", cyc(&lhs), cyc(&rhs), bits)));
        }
    }
    Ok(None)
}

/// Germ expansions for tori over every factor-type mix with `m ≤ 3`.
pub fn torus_germ(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "torus-germ",
        "torus orbit integrals equal their finite germ expansion near 0, and c_∅ equals its zeta closed form",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for mix in mixes(3) {
                let alg = algebra_for(&spec, &mix)?;
                let shape = FnShape::new(cfg.max_level);
                for _ in 0..cfg.instances {
                    let i = idx;
                    idx += 1;
                    if !cfg.wanted(i) {
                        continue;
                    }
                    let f = step_function(&mut instance_rng(cfg.seed, i), p, 2 * alg.dim(), &shape);
                    let out = germ_instance(&alg, &f);
                    settle(&mut r, i, out, || json!({ "field": spec_json(&spec), "mix": mix_tag(&mix), "f": fn_json(&f) }));
                }
            }
        }
    }
    Ok(r.finish())
}

/// `f` on `F_1 × F_1` with `f(x, 0) ≡ 0` (`axis = 1`) or `f(0, y) ≡ 0`
/// (`axis = 0`): the coset in the vanishing coordinate avoids 0.
fn degenerate_generator(rng: &mut ChaCha8Rng, p: u64, d: usize, axis: usize, shape: &FnShape) -> StepFunction {
    let mut f = step_function(rng, p, 2 * d, shape);
    for t in &mut f.terms {
        let j = axis * d;
        let l = t.level[j].max(1);
        t.level[j] = l;
        t.center[j] = rat(unit(rng, p)) * pow_p(p, l - 1 - rng.gen_range(0..2));
        t.center[j] = orbit_core::arith::coset_rep(&t.center[j], p, l);
    }
    StepFunction::from_terms(p, 2 * d, f.terms)
}

fn closed_form_instance(alg: &EtaleAlgebra, f: &StepFunction, unit_ball: bool) -> Result<Option<String>, Error> {
    let g = germ_extract(alg, f)?;
    let mut orb = TorusEvaluator::new(alg, f)?;
    for eps in eps_grid(alg, g.radius)? {
        let lhs = orb.eval(&eps)?;
        let rhs = m1_closed_form(alg, f, &eps)?;
        if lhs != rhs {
            return Ok(Some(format!("Orb = {} but closed form = {}", cyc(&lhs), cyc(&rhs))));
        }
        if unit_ball && !alg.in_s1(0) {
            // c = 1 and f(0,0) = 1: the value is 1 + v(ε)
            let v = alg.valuation(&eps, 0).ok_or(Error::ZeroInput)?;
            if lhs != CycScalar::from_int(1 + v) {
                return Ok(Some(format!("1_{{O×O}} gives {} at v(ε) = {}", cyc(&lhs), v)));
            }
        }
    }
    Ok(None)
}

/// The `m = 1` closed forms on `1_{O×O}` and on the two degenerate
/// generator families.
pub fn m1_closed_forms(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "m1-closed-forms",
        "for one factor, Orb(f, ε) = c − f(0,0) log_q|ε| on split factors and a sum of two zeta values otherwise",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    let shape = FnShape::new(cfg.max_level);
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for mix in mixes(1) {
                let alg = algebra_for(&spec, &mix)?;
                let d = alg.dim();
                for k in 0..(1 + 2 * cfg.instances) {
                    let i = idx;
                    idx += 1;
                    if !cfg.wanted(i) {
                        continue;
                    }
                    let mut rng = instance_rng(cfg.seed, i);
                    let f = match k {
                        0 => StepFunction::ball(p, 2 * d, 0),
                        k => degenerate_generator(&mut rng, p, d, k % 2, &shape),
                    };
                    let out = closed_form_instance(&alg, &f, k == 0);
                    settle(&mut r, i, out, || json!({ "field": spec_json(&spec), "mix": mix_tag(&mix), "f": fn_json(&f) }));
                }
            }
        }
    }
    Ok(r.finish())
}

/// `F(F(f)) = f(−x)` for the standard self-dual pairing.
pub fn fourier_involution(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new("fourier-involution", "the Fourier transform squares to x ↦ −x", &cfg.primes, cfg.seed);
    let mut idx = 0;
    for &p in &cfg.primes {
        for _ in 0..cfg.instances {
            let i = idx;
            idx += 1;
            if !cfg.wanted(i) {
                continue;
            }
            let mut rng = instance_rng(cfg.seed, i);
            let dim = rng.gen_range(1..=4);
            let mut shape = FnShape::new(cfg.max_level);
            shape.phase_prob = 0.4;
            let f = step_function(&mut rng, p, dim, &shape);
            let pairing = StepFunction::standard_pairing(&(0..dim).collect::<Vec<_>>());
            let out = f.fourier(&pairing).and_then(|g| g.fourier(&pairing)).map(|ff| {
                if ff.equals(&f.parity()) {
                    None
                } else {
                    Some("fourier∘fourier differs from parity".to_string())
                }
            });
            settle(&mut r, i, out, || json!({ "p": p, "f": fn_json(&f) }));
        }
    }
    Ok(r.finish())
}

fn descent_shape(max_level: i64) -> FnShape {
    FnShape { max_terms: 2, min_level: 0, max_level, phase_prob: 0.0 }
}

/// `(diag(l1, l2), (a, 0), (0, b))`.
fn descent_datum(rng: &mut ChaCha8Rng, p: u64) -> GlTriple {
    let l1 = if rng.gen_bool(0.5) { rat(0) } else { rat(unit(rng, p) % p as i64) };
    let l2 = &l1 + valued(rng, p, 0..=1);
    let a = valued(rng, p, 0..=1);
    let b = valued(rng, p, 0..=1);
    let x = RMatrix::from_rows(vec![vec![l1, rat(0)], vec![rat(0), l2]]);
    GlTriple::new(x, vec![a, rat(0)], vec![rat(0), b]).unwrap()
}

/// Parabolic descent at `n = 2`.
pub fn descent_verify(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "parabolic-descent",
        "Orb(f, (λ, v, v*)) = Orb(f^P, (λ, v, v*)) |D(λ)|^{-1} for nilpotent data with v_2 = v*_1 = 0",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let f = step_function(&mut rng, p, 8, &descent_shape(cfg.max_level));
                let d = descent_datum(&mut rng, p);
                let out = descent_sides(&spec, &f, &d).map(|s| {
                    if s.lhs.value == s.rhs {
                        None
                    } else {
                        Some(format!("lhs {} ≠ rhs {}", cyc(&s.lhs.value), cyc(&s.rhs)))
                    }
                });
                settle(&mut r, i, out, || {
                    json!({ "field": spec_json(&spec), "f": fn_json(&f), "datum": GlTripleJson::from(&d) })
                });
            }
        }
    }
    Ok(r.finish())
}

/// Descent commutes with the Fourier transforms on `gl_2 × V × V*` and on
/// the Levi.
pub fn descent_fourier(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "descent-fourier",
        "parabolic descent commutes with the Fourier transforms",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let f = step_function(&mut rng, p, 8, &descent_shape(cfg.max_level));
                let out = descent_fourier_sides(&spec, &f).map(|(a, b)| {
                    if a.equals(&b) {
                        None
                    } else {
                        Some("fourier(f)^P differs from fourier(f^P)".into())
                    }
                });
                settle(&mut r, i, out, || json!({ "field": spec_json(&spec), "f": fn_json(&f) }));
            }
        }
    }
    Ok(r.finish())
}

/// Evaluates `Σ c_k ζ_m^k` numerically.
fn cyc_numeric(c: &CycScalar) -> (f64, f64) {
    let m = c.conductor() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, x) in c.coords().iter().enumerate() {
        let v: f64 = x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
        let t = 2.0 * std::f64::consts::PI * k as f64 / m;
        re += v * t.cos();
        im += v * t.sin();
    }
    (re, im)
}

fn weil_instance(spec: &LocalFieldSpec) -> Result<Vec<(String, bool)>, Error> {
    let mut checks = Vec::new();
    let rep = verify_sign_identity(spec, 3)?;
    checks.push(("(A1) rows, c(n) = (−1)^{n−1} for n ≤ 3".into(), rep.holds));
    checks.push(("(A1) discrepancy is −1".into(), rep.discrepancy == Some(CycScalar::from_int(-1))));
    let c2 = rep.c_by_n.iter().find(|(n, _)| *n == 2).map(|(_, c)| c.clone());
    checks.push(("c = −1 at n = 2".into(), c2 == Some(CycScalar::from_int(-1))));
    checks.push(("γ_{−a} = γ_a^{−1}, γ_aγ_b = γ_1γ_{ab}(a,b)".into(), weil_hilbert_identities(spec)? == 0));
    let mut by_class: [Option<CycScalar>; 2] = [None, None];
    let mut lambda_free = true;
    for (l, g) in &rep.lambda_table {
        let bit = HermitianSpace::diagonal(spec, &[rat(1), l.clone()])?.class_bit();
        match &by_class[bit as usize] {
            None => by_class[bit as usize] = Some(g.clone()),
            Some(h) => lambda_free &= h == g,
        }
    }
    checks.push(("trace-form index of ⟨1, λ⟩ depends on λ only through the class".into(), lambda_free));
    let p = spec.p;
    for a in square_class_reps(spec) {
        let g = weil_index(&a, spec)?;
        checks.push((format!("γ_{} from the intertwining identity", a), g == weil_index_from_intertwining(&a, p)?));
        let want = if vp(&a, p).unwrap() % 2 == 0 {
            (1.0, 0.0)
        } else {
            let u = to_i64(orbit_core::arith::unit_part(&a, p).numer()).unwrap();
            let (re, im) = gauss_sum_numeric(u, p);
            let s = (p as f64).sqrt();
            (re / s, im / s)
        };
        let got = cyc_numeric(&g);
        checks.push((
            format!("γ_{} against a numeric Gauss sum", a),
            (got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9,
        ));
    }
    let (re, im) = cyc_numeric(&gauss_sum(1, p));
    let (ore, oim) = gauss_sum_numeric(1, p);
    checks.push(("exact Gauss sum agrees numerically".into(), (re - ore).abs() < 1e-9 && (im - oim).abs() < 1e-9));
    Ok(checks)
}

/// Weil-index relations and the sign `(−1)^{n−1}`.
pub fn weil_sign(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "weil-sign",
        "γ_{−a} = γ_a^{−1}, γ_aγ_b = γ_1γ_{ab}(a,b), the (A1) sign −1 and c = (−1)^{n−1}",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            let i = idx;
            idx += 1;
            if !cfg.wanted(i) {
                continue;
            }
            match weil_instance(&spec) {
                Ok(checks) => {
                    let bad: Vec<String> = checks.into_iter().filter(|(_, ok)| !ok).map(|(s, _)| s).collect();
                    if bad.is_empty() {
                        r.pass();
                    } else {
                        r.fail(i, bad.join("; "), json!({ "field": spec_json(&spec) }));
                    }
                }
                Err(e) => r.fail(i, e.to_string(), json!({ "field": spec_json(&spec) })),
            }
        }
    }
    Ok(r.finish())
}

/// Hilbert symbols against a brute-force solvability search.
pub fn hilbert(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "hilbert-symbol",
        "(a, b) = 1 exactly when a x² + b y² represents a nonzero square",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        let spec = LocalFieldSpec::unramified(p);
        for ca in SquareClass::ALL {
            for cb in SquareClass::ALL {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let a = spec.class_rep(ca);
                let b = spec.class_rep(cb);
                let got = orbit_core::scalar::hilbert_symbol(&a, &b, p);
                let want = hilbert_brute(to_i64(a.numer()).unwrap(), to_i64(b.numer()).unwrap(), p);
                let out = got.map(|h| if h == want { None } else { Some(format!("symbol {} but oracle {}", h, want)) });
                settle(&mut r, i, out, || json!({ "p": p, "a": rat_str(&a), "b": rat_str(&b) }));
            }
        }
    }
    Ok(r.finish())
}

/// `γ = companion(∏ polys)`, `v = e_1`, and a small `v*` making the
/// triple regular semisimple.
fn triple_for_polys(polys: &[poly::Poly], rng: &mut ChaCha8Rng) -> Result<GlTriple, Error> {
    let cp = polys.iter().fold(vec![rat(1)], |acc, f| poly::mul(&acc, f));
    let x = companion(&cp);
    let n = x.rows;
    let mut v = vec![rat(0); n];
    v[0] = rat(1);
    for _ in 0..200 {
        let vs: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let d = GlTriple::new(x.clone(), v.clone(), vs)?;
        if d.is_regular_semisimple() {
            return Ok(d);
        }
    }
    Err(Error::NotRegularSemisimple)
}

fn cohomology_instance(spec: &LocalFieldSpec, mix: &[FactorType], rng: &mut ChaCha8Rng) -> Result<Option<String>, Error> {
    let polys = factor_polys(spec, mix);
    let d = triple_for_polys(&polys, rng)?;
    let (alg, fam) = delta_x_family(spec, &d)?;
    let k = alg.s1().len();
    if fam.len() != 1 << k {
        return Ok(Some(format!("{} classes for |S1| = {}", fam.len(), k)));
    }
    if !check_torsor(&fam)? {
        return Ok(Some("x ↦ δ_x is not a torsor map".into()));
    }
    let mut table = Vec::with_capacity(fam.len());
    for a in &fam {
        let mut row = Vec::with_capacity(fam.len());
        for b in &fam {
            let i_ab = inv(spec, &a.matched.element, &b.matched.element)?;
            if i_ab != a.class.add(&b.class)? {
                return Ok(Some("inv(δ_x, δ_y) ≠ x + y".into()));
            }
            row.push(i_ab);
        }
        table.push(row);
    }
    for a in 0..fam.len() {
        for b in 0..fam.len() {
            for c in 0..fam.len() {
                if table[a][b].add(&table[b][c])? != table[a][c] {
                    return Ok(Some("inv is not additive".into()));
                }
            }
        }
    }
    if !pairing_is_perfect(k) {
        return Ok(Some(format!("pairing on (Z/2)^{} is not perfect", k)));
    }
    for l in 0..(1usize << k) {
        let lam = LambdaMask::from_mask(l, k);
        let s: i64 = (0..(1usize << k)).map(|x| pairing(&lam, &H1Class::from_mask(x, k)).unwrap() as i64).sum();
        let trivial = lam.members.iter().all(|m| *m);
        if s != if trivial { 1 << k } else { 0 } {
            return Ok(Some("character sums of the pairing are wrong".into()));
        }
    }
    if polys.len() >= 2 {
        let cut = rng.gen_range(1..polys.len());
        let m1 = construct_unitary_match(spec, &triple_for_polys(&polys[..cut], rng)?)?;
        let m2 = construct_unitary_match(spec, &triple_for_polys(&polys[cut..], rng)?)?;
        let mut w = m1.w.clone();
        w.extend(m2.w.iter().cloned());
        let c = check_d2(spec, &m1.element, &m2.element, &w)?;
        if !c.holds {
            return Ok(Some("κ(inv(δ′, δ_x)) ≠ ⟨S1(δ_1), x⟩".into()));
        }
    }
    Ok(None)
}

/// Torsor structure of the norm classes, additivity of `inv`, perfectness
/// of the pairing and the κ-pullback identity.
pub fn cohomology(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "cohomology",
        "x ↦ δ_x is a torsor isomorphism, inv is additive, ⟨Λ, x⟩ is perfect, κ(inv(δ′, δ_x)) = ⟨S1(δ_1), x⟩",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for mix in mixes(3) {
                for _ in 0..cfg.instances {
                    let i = idx;
                    idx += 1;
                    if !cfg.wanted(i) {
                        continue;
                    }
                    let out = cohomology_instance(&spec, &mix, &mut instance_rng(cfg.seed, i));
                    settle(&mut r, i, out, || json!({ "field": spec_json(&spec), "mix": mix_tag(&mix) }));
                }
            }
        }
    }
    Ok(r.finish())
}

fn nilpotent_shape(max_level: i64) -> FnShape {
    FnShape { max_terms: 3, min_level: -1, max_level, phase_prob: 0.2 }
}

/// A `γ` inside the `δ`-support of `f` most of the time.
fn pick_gamma(rng: &mut ChaCha8Rng, f: &StepFunction, p: u64) -> Rational {
    if f.terms.is_empty() || rng.gen_bool(0.2) {
        return valued(rng, p, -1..=1);
    }
    let t = &f.terms[rng.gen_range(0..f.terms.len())];
    &t.center[0] + rat(rng.gen_range(0..p as i64)) * pow_p(p, t.level[0])
}

/// `b` of class `bit` with `v(b) ≥ depth`.
fn deep_b(spec: &LocalFieldSpec, bit: usize, depth: i64) -> Rational {
    let want = if bit == 0 { 1 } else { -1 };
    let p = spec.p as i64;
    let k = depth.div_euclid(2) + 1;
    [1, spec.nonresidue() as i64, p, p * spec.nonresidue() as i64]
        .into_iter()
        .map(|c| rat(c) * pow_p(spec.p, 2 * k))
        .find(|b| spec.chi(b) == want)
        .unwrap()
}

fn random_quad(rng: &mut ChaCha8Rng, spec: &LocalFieldSpec) -> Quad {
    let p = spec.p;
    let mut c = || if rng.gen_bool(0.25) { rat(0) } else { valued(rng, p, -1..=2) };
    let (a, b) = (c(), c());
    let q = e_elem(spec, a, b);
    if q.vanishes() {
        e_elem(spec, rat(1), rat(0))
    } else {
        q
    }
}

struct NilpotentOutcome {
    lhs: CycScalar,
    rhs: CycScalar,
    problem: Option<String>,
}

fn nilpotent_instance(spec: &LocalFieldSpec, f: &StepFunction, rng: &mut ChaCha8Rng) -> Result<(NilpotentOutcome, serde_json::Value), Error> {
    let p = spec.p;
    let t = construct_jr_transfer_n1(spec, f)?;
    let gamma = pick_gamma(rng, f, p);
    let full = rng.gen_bool(0.5);
    let c = valued(rng, p, -1..=1);
    let datum = |c: &Rational| {
        let x = RMatrix::from_rows(vec![vec![gamma.clone()]]);
        if full {
            GlTriple::new(x, vec![c.clone()], vec![rat(0)])
        } else {
            GlTriple::new(x, vec![rat(0)], vec![c.clone()])
        }
    };
    let witness = json!({
        "field": spec_json(spec), "f": fn_json(f), "gamma": rat_str(&gamma),
        "lambda": if full { "S1" } else { "empty" }, "c": rat_str(&c),
    });
    let weighted = |c: &Rational| -> Result<CycScalar, Error> {
        let v = nilpotent_orbit_integral_gl(spec, f, &datum(c)?)?.value;
        Ok(&v * &sign(spec.chi(c)))
    };
    let lhs = weighted(&c)?;
    let lam = LambdaMask::from_mask(full as usize, 1);
    let mut rhs = CycScalar::zero();
    for x in 0..2 {
        rhs += &(&t.nilpotent_term(x, &gamma) * &sign(pairing(&lam, &H1Class::from_mask(x, 1))?));
    }
    let mut problem = None;
    let c2 = valued(rng, p, -2..=2);
    if weighted(&c2)? != lhs {
        problem = Some(format!("ω·Orb depends on the nilpotent vector ({} vs {})", rat_str(&c), rat_str(&c2)));
    }
    for x in 0..2 {
        let b = deep_b(spec, x, t.radius);
        let g = gl_side(spec, f, &gamma, &b)?;
        if g != t.nilpotent_term(x, &gamma) {
            problem = Some(format!("leading term at b = {}: {} vs f_{}(γ, 0) = {}", b, cyc(&g), x, cyc(&t.nilpotent_term(x, &gamma))));
        }
    }
    for _ in 0..3 {
        let w = random_quad(rng, spec);
        for x in 0..2 {
            let b = &t.lambda(x) * w.norm();
            let g = gl_side(spec, f, &gamma, &b)?;
            let u = t.orbit_integral(x, &gamma, &w).value;
            let elt = UnitaryLieElement::new(t.spaces[x].clone(), EMatrix::from_rows(vec![vec![e_elem(spec, gamma.clone(), rat(0))]]))?;
            let gl = GlTriple::new(RMatrix::from_rows(vec![vec![gamma.clone()]]), vec![rat(1)], vec![b.clone()])?;
            if !match_predicate(&gl, &elt, std::slice::from_ref(&w)) {
                problem = Some(format!("(γ, 1, {}) does not match (γ, w) in W_{}", b, x));
            } else if g != u {
                problem = Some(format!("transfer fails at b = {}: ω·Orb = {}, Orb(f_{}) = {}", b, cyc(&g), x, cyc(&u)));
            }
        }
    }
    Ok((NilpotentOutcome { lhs, rhs, problem }, witness))
}

/// The nilpotent identity at `n = 1` with the transfers built by
/// [`construct_jr_transfer_n1`]. The constant relating the sides is
/// measured on the first instance with a nonzero side and must reproduce.
pub fn nilpotent_identity(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let identity = "nilpotent-identity-n1";
    let mut r = ReportBuilder::new(
        identity,
        "ω Orb(f, (γ, v_Λ, v*_{S1∖Λ})) = Σ_x ⟨Λ, x⟩ ∫ f_W(g δ_x g⁻¹, 0) dḡ up to one constant",
        &cfg.primes,
        cfg.seed,
    );
    let pinned = cfg.ledger.pinned(identity).map_err(|e| Error::Precondition(e.0))?;
    let mut cal = Calibration::new(pinned);
    let mut idx = 0;
    let mut nonzero = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let f = step_function(&mut rng, p, 3, &nilpotent_shape(cfg.max_level));
                match nilpotent_instance(&spec, &f, &mut rng) {
                    Ok((o, w)) => {
                        if !o.lhs.is_zero() {
                            nonzero += 1;
                        }
                        if let Some(msg) = o.problem {
                            r.fail(i, msg, w);
                        } else if !cal.check(&o.lhs, &o.rhs) {
                            let c = cal.constant.as_ref().map(cyc).unwrap_or_default();
                            r.fail(i, format!("lhs {} rhs {} against constant {}", cyc(&o.lhs), cyc(&o.rhs), c), w);
                        } else {
                            r.pass();
                        }
                    }
                    Err(e) => r.fail(i, format!("error: {}", e), json!({ "field": spec_json(&spec), "f": fn_json(&f) })),
                }
            }
        }
    }
    r.note(format!("{} instances with a nonzero left side", nonzero));
    r.calibration(&cal);
    Ok(r.finish())
}

/// `w ∈ E` of valuation `k` with `N(w) ≡ p^{2k} u` modulo `p^{2k+1}`.
fn norm_preimage(spec: &LocalFieldSpec, k: i64, u: i64) -> Option<Quad> {
    let p = spec.p as i64;
    for x in 0..p {
        for y in 0..p {
            let q = e_elem(spec, rat(x), rat(y));
            let n = q.norm();
            if n != rat(0) && vp(&(n - rat(u)), spec.p).unwrap_or(i64::MAX) >= 1 {
                let s = e_elem(spec, pow_p(spec.p, k), rat(0));
                return Some(q.mul(&s));
            }
        }
    }
    None
}

/// `1_{gl_1(O) × O × O}` against `{1_{u(W_0)(O) × O_E}, 0}` on every orbit
/// with invariant valuations in `[-3, 3]`.
pub fn fl_check(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let identity = "fundamental-lemma-n1";
    let mut r = ReportBuilder::new(
        identity,
        "1_k and {1_{k_0}, 0} are transfers",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    let mut cal = Calibration::forced_one();
    for &p in &cfg.primes {
        for spec in cfg.unramified_specs(p)? {
            let f = StepFunction::ball(p, 3, 0);
            let f0 = StepFunction::ball(p, 3, 0);
            let w0 = HermitianSpace::with_class(&spec, 1, 0);
            let t = construct_jr_transfer_n1(&spec, &f)?;
            let pi = p as i64;
            for vg in -3..=3 {
                for ug in 1..pi {
                    let gamma = rat(ug) * pow_p(p, vg);
                    for vb in -3..=3 {
                        for ub in 1..pi {
                            let i = idx;
                            idx += 1;
                            if !cfg.wanted(i) {
                                continue;
                            }
                            let b = rat(ub) * pow_p(p, vb);
                            let out = (|| -> Result<Option<String>, Error> {
                                let g = gl_side(&spec, &f, &gamma, &b)?;
                                if spec.chi(&b) == -1 {
                                    if !g.is_zero() || !t.invariant_fns[1].evaluate(&[gamma.clone(), b.clone()]).is_zero() {
                                        return Ok(Some(format!("non-norm b: ω·Orb = {}", cyc(&g))));
                                    }
                                    return Ok(None);
                                }
                                let w = norm_preimage(&spec, vb.div_euclid(2), ub).ok_or(Error::Precondition("no norm preimage".into()))?;
                                let b_w = w.norm();
                                if gl_side(&spec, &f, &gamma, &b_w)? != g {
                                    return Ok(Some(format!("ω·Orb differs at b = {} and b = {}", b, b_w)));
                                }
                                let elt = UnitaryLieElement::new(
                                    w0.clone(),
                                    EMatrix::from_rows(vec![vec![e_elem(&spec, gamma.clone(), rat(0))]]),
                                )?;
                                let u = unitary_orbit_integral(&spec, &f0, &elt, std::slice::from_ref(&w))?.value;
                                if !cal.check(&g, &u) {
                                    return Ok(Some(format!("ω·Orb(1_k) = {} but Orb(1_k0) = {}", cyc(&g), cyc(&u))));
                                }
                                if t.eval(0, &gamma, &w) != u {
                                    return Ok(Some("constructed transfer differs from 1_k0".into()));
                                }
                                Ok(None)
                            })();
                            settle(&mut r, i, out, || {
                                json!({ "field": spec_json(&spec), "gamma": rat_str(&gamma), "b": rat_str(&b) })
                            });
                        }
                    }
                }
            }
        }
    }
    r.calibration(&cal);
    Ok(r.finish())
}

fn random_ematrix(rng: &mut ChaCha8Rng, spec: &LocalFieldSpec, n: usize) -> EMatrix {
    EMatrix::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| e_elem(spec, rat(rng.gen_range(-2..=2)), rat(rng.gen_range(-1..=1)))).collect())
            .collect(),
    )
}

fn conj_transpose(m: &EMatrix) -> EMatrix {
    m.transpose().map(|q| q.conj())
}

/// Classes of Hermitian spaces are invariant under `H ↦ g* H g` and agree
/// with `χ(det H)` computed by a brute-force Hilbert symbol.
pub fn classify_hermitian(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "classify-hermitian",
        "two classes per dimension, detected by χ(det H) against χ((−1)^{n(n−1)/2})",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            let tau = to_i64(spec.tau.numer()).unwrap();
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let n = rng.gen_range(1..=3);
                let bit = rng.gen_range(0..=1u8);
                let base = HermitianSpace::with_class(&spec, n, bit);
                let g = loop {
                    let g = random_ematrix(&mut rng, &spec, n);
                    if !g.det().vanishes() {
                        break g;
                    }
                };
                let gram = conj_transpose(&g).mul(&base.gram).mul(&g);
                let out = HermitianSpace::new(&spec, gram.clone()).map(|w| {
                    let det = w.det();
                    let (num, den) = (to_i64(det.numer()).unwrap(), to_i64(det.denom()).unwrap());
                    let chi = hilbert_brute(num * den, tau, p);
                    let sgn = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { hilbert_brute(-1, tau, p) };
                    let oracle = if chi == sgn { 0 } else { 1 };
                    if w.class_bit() != bit {
                        Some(format!("class {} after change of basis, expected {}", w.class_bit(), bit))
                    } else if oracle != bit {
                        Some(format!("oracle class {} for det {}", oracle, det))
                    } else {
                        None
                    }
                });
                settle(&mut r, i, out, || {
                    json!({ "field": spec_json(&spec), "gram": gram.data.iter().map(quad_json).collect::<Vec<_>>(), "n": n })
                });
            }
        }
    }
    Ok(r.finish())
}

fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> GlTriple {
    loop {
        let x = RMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect());
        let v = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let vs = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
        if let Ok(d) = GlTriple::new(x, v, vs) {
            if d.is_regular_semisimple() && poly::is_squarefree(&d.x.charpoly()) {
                return d;
            }
        }
    }
}

fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    loop {
        let k = RMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect());
        if !k.det().vanishes() {
            return k;
        }
    }
}

fn match_instance(spec: &LocalFieldSpec, d: &GlTriple, rng: &mut ChaCha8Rng) -> Result<Option<String>, Error> {
    let m = match construct_unitary_match(spec, d) {
        Ok(m) => m,
        Err(Error::UnsupportedFactorization(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !match_predicate(d, &m.element, &m.w) {
        return Ok(Some("constructed (δ, w) does not match".into()));
    }
    if m.class_bit != m.element.space.class_bit() {
        return Ok(Some("reported class differs from the space".into()));
    }
    if !m.element.is_regular_semisimple() {
        return Ok(Some("δ is not regular semisimple".into()));
    }
    let back = construct_gl_match(&m.element, &m.w)?;
    if back.invariants() != d.invariants() {
        return Ok(Some("round trip changes the invariants".into()));
    }
    let k = random_gl(rng, d.n());
    let dk = d.act(&k)?;
    if dk.invariants() != d.invariants() {
        return Ok(Some("invariants are not GL-invariant".into()));
    }
    if let (Ok(a), Ok(b)) = (omega(spec, d), omega(spec, &dk)) {
        if b != spec.chi(&k.det()) * a {
            return Ok(Some("ω(k·d) ≠ χ(det k) ω(d)".into()));
        }
    }
    let b1 = random_triple(rng, 1);
    let b2 = { let n = rng.gen_range(1..=2); random_triple(rng, n) };
    if poly::degree(&poly::gcd(&b1.x.charpoly(), &b2.x.charpoly())) == Some(0) {
        if let Ok((whole, blocks)) = transfer_factor_blocks(spec, &b1, &b2) {
            if whole != blocks {
                return Ok(Some("ω(γ, v, v*) ≠ χ(D) ω_1 ω_2".into()));
            }
        }
    }
    Ok(None)
}

/// Matching of regular semisimple orbits, the transfer factor `ω` and its
/// block factorisation.
pub fn match_orbit(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "match-orbit",
        "(γ, v, v*) ↔ (δ, w) exactly when the invariants a_i, b_i agree; ω is χ∘det-equivariant and factors over blocks",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let n = rng.gen_range(1..=3);
                let d = random_triple(&mut rng, n);
                let out = match_instance(&spec, &d, &mut rng);
                settle(&mut r, i, out, || json!({ "field": spec_json(&spec), "datum": GlTripleJson::from(&d) }));
            }
        }
    }
    Ok(r.finish())
}

/// Series coefficients of `∫ f(t)|t|^s χ(t) d^×t` against shell averages
/// computed by enumerating units.
pub fn zeta(cfg: &SuiteConfig) -> Result<VerificationReport, Error> {
    let mut r = ReportBuilder::new(
        "zeta",
        "Tate zeta integrals of step functions as rational functions of q^{-s}",
        &cfg.primes,
        cfg.seed,
    );
    let mut idx = 0;
    for &p in &cfg.primes {
        for spec in cfg.specs(p)? {
            let tau = to_i64(spec.tau.numer()).unwrap();
            let chi_p = hilbert_brute(p as i64, tau, p);
            for _ in 0..cfg.instances {
                let i = idx;
                idx += 1;
                if !cfg.wanted(i) {
                    continue;
                }
                let mut rng = instance_rng(cfg.seed, i);
                let mut shape = FnShape::new(cfg.max_level);
                shape.phase_prob = 0.3;
                let f = step_function(&mut rng, p, 1, &shape);
                let z = mult_zeta_lines(&spec, &f, &[1]);
                let lo = f.support_valuation();
                let hi = f.constancy_level() + 3;
                let series = z.series(lo, hi);
                let mut problem = None;
                for (j, k) in (lo..=hi).enumerate() {
                    let e = (f.constancy_level() - k).max(1) as u32;
                    let mut acc = CycScalar::zero();
                    let mut count = 0i64;
                    for u in 1..(p as i64).pow(e) {
                        if u % p as i64 == 0 {
                            continue;
                        }
                        count += 1;
                        let chi = hilbert_brute(u % p as i64, tau, p) as i64 * (chi_p as i64).pow(k.rem_euclid(2) as u32);
                        acc += &f.evaluate(&[rat(u) * pow_p(p, k)]).scale(&rat(chi));
                    }
                    let want = acc.scale(&Rational::new(1.into(), count.into()));
                    if series.get(j) != Some(&want) {
                        problem = Some(format!("coefficient of u^{}: {:?} vs shell average {}", k, series.get(j).map(cyc), cyc(&want)));
                        break;
                    }
                }
                match problem {
                    None => r.pass(),
                    Some(m) => r.fail(i, m, json!({ "field": spec_json(&spec), "f": fn_json(&f) })),
                }
            }
        }
    }
    Ok(r.finish())
}

/// Rank-two unitary orbit integrals are not implemented, so the
/// anisotropic `n = 2` identity is reported as unsupported.
pub fn nilpotent_identity_n2(cfg: &SuiteConfig) -> VerificationReport {
    let mut r = ReportBuilder::new(
        "nilpotent-identity-n2",
        "nilpotent identity at n = 2 with an anisotropic unitary side",
        &cfg.primes,
        cfg.seed,
    );
    r.fail(0, "unsupported: unitary orbit integrals are implemented for dim W = 1 only", json!(null));
    r.finish()
}
