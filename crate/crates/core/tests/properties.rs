use orbit_core::arith::{ratio, rat, Rational};
use orbit_core::bruhat::{StepFunction, Term};
use orbit_core::integrals::weil::weil_index;
use orbit_core::linalg::{Field, RMatrix};
use orbit_core::poly;
use orbit_core::scalar::psi_value;
use orbit_core::spaces::{construct_gl_match, construct_unitary_match, match_predicate, omega, GlTriple};
use orbit_core::{CycScalar, Error, LocalFieldSpec};
use proptest::prelude::*;

fn specs() -> impl Strategy<Value = LocalFieldSpec> {
    (prop_oneof![Just(3u64), Just(5), Just(7)], any::<bool>())
        .prop_map(|(p, r)| if r { LocalFieldSpec::ramified(p) } else { LocalFieldSpec::unramified(p) })
}

fn nonzero() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=30).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| ratio(n, d)))
}

fn small_matrix(n: usize, r: i64) -> impl Strategy<Value = RMatrix> {
    proptest::collection::vec(-r..=r, n * n)
        .prop_map(move |v| RMatrix::from_rows(v.chunks(n).map(|c| c.iter().map(|&x| rat(x)).collect()).collect()))
}

fn triple(n: usize) -> impl Strategy<Value = GlTriple> {
    (small_matrix(n, 2), proptest::collection::vec(-2i64..=2, n), proptest::collection::vec(-2i64..=2, n)).prop_filter_map(
        "regular semisimple",
        move |(x, v, vs)| {
            let d = GlTriple::new(x, v.into_iter().map(rat).collect(), vs.into_iter().map(rat).collect()).ok()?;
            (d.is_regular_semisimple() && poly::is_squarefree(&d.x.charpoly())).then_some(d)
        },
    )
}

fn invertible(n: usize) -> impl Strategy<Value = RMatrix> {
    small_matrix(n, 3).prop_filter("invertible", |k| !k.det().vanishes())
}

fn step_function(p: u64, dim: usize) -> impl Strategy<Value = StepFunction> {
    let term = (
        proptest::collection::vec((-9i64..=9, 0u32..=1), dim),
        proptest::collection::vec(-1i64..=2, dim),
        proptest::collection::vec(prop_oneof![Just(0i64), -9i64..=9], dim),
        -3i64..=3,
    )
        .prop_map(move |(c, l, a, k)| {
            let pp = p as i64;
            let center = c.iter().map(|&(n, e)| ratio(n, pp.pow(e))).collect();
            let phase = a.iter().map(|&n| ratio(n, pp * pp)).collect();
            let mut t = Term::indicator(center, l, CycScalar::from_int(k));
            t.phase = phase;
            t
        });
    proptest::collection::vec(term, 1..=3).prop_map(move |ts| StepFunction::from_terms(p, dim, ts))
}

fn point(p: u64, dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-30i64..=30, 0u32..=2), dim)
        .prop_map(move |v| v.iter().map(|&(n, e)| ratio(n, (p as i64).pow(e))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_symbol_is_symmetric_and_bimultiplicative(spec in specs(), a in nonzero(), b in nonzero(), c in nonzero()) {
        let h = |x: &Rational, y: &Rational| spec.hilbert_symbol(x, y).unwrap();
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert_eq!(h(&(&a * &c), &b), h(&a, &b) * h(&c, &b));
        prop_assert_eq!(h(&a, &-a.clone()), 1);
        prop_assert_eq!(h(&(&a * &a * &b), &c), h(&b, &c));
        if a != rat(1) {
            prop_assert_eq!(h(&a, &(rat(1) - &a)), 1);
        }
    }

    #[test]
    fn chi_is_a_character_trivial_on_norms(spec in specs(), a in nonzero(), x in -20i64..=20, y in -20i64..=20) {
        prop_assert_eq!(spec.chi(&(&a * &a)), 1);
        let n = rat(x * x) - &spec.tau * rat(y * y);
        if n != rat(0) {
            prop_assert_eq!(spec.chi(&n), 1);
            prop_assert_eq!(spec.chi(&(&a * &n)), spec.chi(&a));
        }
    }

    #[test]
    fn psi_is_additive(p in prop_oneof![Just(3u64), Just(5)], x in nonzero(), y in nonzero()) {
        prop_assert_eq!(psi_value(&(&x + &y), p), &psi_value(&x, p) * &psi_value(&y, p));
        prop_assert!(psi_value(&(&x * rat(p.pow(5) as i64)), p).is_one());
    }

    #[test]
    fn weil_index_relations(spec in specs(), a in nonzero(), b in nonzero(), c in nonzero()) {
        let g = |x: &Rational| weil_index(x, &spec).unwrap();
        let h = spec.hilbert_symbol(&a, &b).unwrap();
        prop_assert_eq!(&g(&a) * &g(&b), (&g(&rat(1)) * &g(&(&a * &b))).scale(&rat(h as i64)));
        prop_assert!((&g(&a) * &g(&-a.clone())).is_one());
        prop_assert_eq!(g(&(&a * &c * &c)), g(&a));
        prop_assert!(g(&a).pow(8).is_one());
    }

    #[test]
    fn invariants_and_omega_under_change_of_basis(spec in specs(), d in triple(2), k in invertible(2)) {
        let dk = d.act(&k).unwrap();
        prop_assert_eq!(dk.invariants(), d.invariants());
        prop_assert_eq!(dk.is_regular_semisimple(), d.is_regular_semisimple());
        if let (Ok(a), Ok(b)) = (omega(&spec, &d), omega(&spec, &dk)) {
            prop_assert_eq!(b, spec.chi(&k.det()) * a);
        }
    }

    #[test]
    fn matching_is_a_section_of_the_invariants(spec in specs(), d in prop_oneof![triple(1), triple(2), triple(3)]) {
        match construct_unitary_match(&spec, &d) {
            Err(Error::UnsupportedFactorization(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
            Ok(m) => {
                prop_assert!(match_predicate(&d, &m.element, &m.w));
                prop_assert_eq!(m.class_bit, m.element.space.class_bit());
                let back = construct_gl_match(&m.element, &m.w).unwrap();
                prop_assert_eq!(back.invariants(), d.invariants());
            }
        }
    }

    #[test]
    fn fourier_squares_to_parity(f in (1usize..=3).prop_flat_map(|d| step_function(3, d))) {
        let pairing = StepFunction::standard_pairing(&(0..f.dim).collect::<Vec<_>>());
        let g = f.fourier(&pairing).unwrap();
        prop_assert!(g.fourier(&pairing).unwrap().equals(&f.parity()));
        prop_assert_eq!(g.evaluate(&vec![rat(0); f.dim]), f.integrate());
    }

    #[test]
    fn step_functions_evaluate_pointwise(
        (f, g, x) in (1usize..=3).prop_flat_map(|d| (step_function(5, d), step_function(5, d), point(5, d)))
    ) {
        prop_assert_eq!(f.add(&g).unwrap().evaluate(&x), &f.evaluate(&x) + &g.evaluate(&x));
        prop_assert_eq!(f.mul(&g).unwrap().evaluate(&x), &f.evaluate(&x) * &g.evaluate(&x));
        prop_assert_eq!(f.compact().evaluate(&x), f.evaluate(&x));
        let minus: Vec<Rational> = x.iter().map(|t| -t.clone()).collect();
        prop_assert_eq!(f.parity().evaluate(&x), f.evaluate(&minus));
    }
}
