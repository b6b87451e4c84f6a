use orbit_core::arith::{ratio, rat};
use orbit_core::bruhat::{StepFunction, Term};
use orbit_core::cyclotomic::CycScalar;
use orbit_core::linalg::rmat;
use orbit_core::spaces::{construct_unitary_match, GlTriple};
use orbit_core::LocalFieldSpec;
use orbit_lab::json::{parse_rat, rat_str, GlTripleJson, StepFunctionJson, UnitaryElementJson};
use orbit_lab::ledger::NormalizationLedger;

fn through_text<T: serde::Serialize + serde::de::DeserializeOwned>(x: &T) -> T {
    serde_json::from_str(&serde_json::to_string(x).unwrap()).unwrap()
}

#[test]
fn rationals() {
    for r in [rat(0), rat(-7), ratio(5, 27), ratio(-1, 3)] {
        assert_eq!(parse_rat(&rat_str(&r)).unwrap(), r);
    }
    assert_eq!(parse_rat("4/6").unwrap(), ratio(2, 3));
    assert!(parse_rat("1/0").is_err());
    assert!(parse_rat("x").is_err());
}

#[test]
fn step_functions() {
    let mut t = Term::indicator(vec![ratio(1, 3), rat(2)], vec![-1, 2], &CycScalar::root_of_unity(4, 9) * &CycScalar::from_int(-2));
    t.phase = vec![ratio(2, 9), rat(0)];
    let f = StepFunction::from_terms(3, 2, vec![t, Term::indicator(vec![rat(0), rat(0)], vec![0, 0], CycScalar::one())]);
    let back = through_text(&StepFunctionJson::from(&f)).to_function().unwrap();
    assert_eq!(back, f);

    let mut bad = StepFunctionJson::from(&f);
    bad.terms[0].level.pop();
    assert!(bad.to_function().is_err());
    let mut bad = StepFunctionJson::from(&f);
    bad.terms[1].coeff.conductor = 0;
    assert!(bad.to_function().is_err());
}

#[test]
fn triples_and_unitary_elements() {
    let d = GlTriple::new(rmat(&[&[1, 2], &[0, -3]]), vec![rat(1), ratio(1, 5)], vec![rat(1), rat(4)]).unwrap();
    assert_eq!(through_text(&GlTripleJson::from(&d)).to_triple().unwrap(), d);

    let spec = LocalFieldSpec::ramified(5);
    let u = construct_unitary_match(&spec, &d).unwrap().element;
    let back = through_text(&UnitaryElementJson::from(&u)).to_element().unwrap();
    assert_eq!(back.space.class_bit(), u.space.class_bit());
    assert_eq!(back.charpoly(), u.charpoly());
    assert_eq!(UnitaryElementJson::from(&back), UnitaryElementJson::from(&u));
}

#[test]
fn ledger() {
    let mut l = NormalizationLedger::default();
    assert_eq!(l.id, orbit_core::LEDGER_ID);
    l.calibrations.insert("x".into(), (&CycScalar::from_int(2)).into());
    assert_eq!(through_text(&l), l);
}
