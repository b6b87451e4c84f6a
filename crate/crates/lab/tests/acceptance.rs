//! End-to-end acceptance runs at full size. Each test prints one line:
//!
//!     cargo test -p orbit-lab --release --test acceptance -- --nocapture --test-threads 1

use orbit_lab::report::VerificationReport;
use orbit_lab::suites::{self, SuiteConfig};

fn line(n: u32, what: &str, reports: &[VerificationReport]) -> bool {
    let ok = reports.iter().all(|r| r.ok());
    let counts: Vec<String> = reports
        .iter()
        .map(|r| {
            let cal = r.calibration.as_ref().map(|c| format!(", constant {}", c.coords.join(" "))).unwrap_or_default();
            format!("{} {}/{}{}", r.identity, r.passed, r.instances, cal)
        })
        .collect();
    println!("[{:>2}] {:<44} {}  ({})", n, what, if ok { "PASS" } else { "FAIL" }, counts.join("; "));
    for r in reports {
        for f in r.failures.iter().take(3) {
            println!("       instance {}: {}", f.index, f.detail);
        }
    }
    ok
}

fn cfg(primes: &[u64], instances: usize, max_level: i64) -> SuiteConfig {
    SuiteConfig::new(primes, instances, max_level)
}

#[test]
fn torus_germ_expansions() {
    let r = suites::torus_germ(&cfg(&[3, 5], 50, 1)).unwrap();
    assert!(r.instances >= 50 * 19 * 4);
    assert!(line(1, "torus germ expansions and c_∅", &[r]));
}

#[test]
fn rank_one_closed_forms() {
    let r = suites::m1_closed_forms(&cfg(&[3, 5], 50, 1)).unwrap();
    assert!(line(2, "m = 1 closed forms", &[r]));
}

#[test]
fn fourier_twice_is_parity() {
    let r = suites::fourier_involution(&cfg(&[3], 100, 2)).unwrap();
    assert!(r.instances >= 100);
    assert!(line(3, "fourier ∘ fourier = parity", &[r]));
}

#[test]
fn parabolic_descent() {
    let r = suites::descent_verify(&cfg(&[3], 20, 1)).unwrap();
    assert!(r.instances >= 20);
    assert!(line(4, "parabolic descent, v2 = v1* = 0", &[r]));
}

#[test]
fn descent_commutes_with_fourier() {
    let r = suites::descent_fourier(&cfg(&[3], 20, 1)).unwrap();
    assert!(r.instances >= 20);
    assert!(line(5, "descent commutes with fourier", &[r]));
}

#[test]
fn weil_indices_and_sign() {
    let r = suites::weil_sign(&cfg(&[3, 5, 7], 1, 0)).unwrap();
    assert!(line(6, "weil indices, (−1)^{n−1}", &[r]));
}

#[test]
fn hilbert_symbols() {
    let r = suites::hilbert(&cfg(&[3, 5, 7], 1, 0)).unwrap();
    assert_eq!(r.instances, 3 * 16);
    assert!(line(7, "hilbert symbol vs brute force", &[r]));
}

#[test]
fn stable_classes_and_kappa() {
    let r = suites::cohomology(&cfg(&[3, 5], 2, 0)).unwrap();
    assert!(line(8, "torsor, inv, pairing, κ pullback", &[r]));
}

#[test]
fn nilpotent_identity_rank_one() {
    let r = suites::nilpotent_identity(&cfg(&[3, 5], 100, 1)).unwrap();
    assert!(r.instances >= 400);
    assert!(r.calibration.is_some(), "no instance with a nonzero side");
    assert!(line(9, "nilpotent identity, n = 1", &[r]));
}

#[test]
fn fundamental_lemma_rank_one() {
    let r = suites::fl_check(&cfg(&[3, 5], 1, 0)).unwrap();
    assert!(line(10, "fundamental lemma, n = 1", &[r]));
}

#[test]
fn nilpotent_identity_rank_two_stretch() {
    let r = suites::nilpotent_identity_n2(&cfg(&[3], 1, 0));
    let ok = line(11, "nilpotent identity, n = 2 (non-blocking)", std::slice::from_ref(&r));
    if !ok {
        println!("       not attained; reported and ignored");
    }
}
