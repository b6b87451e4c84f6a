use std::path::PathBuf;
use std::process::Command;

use orbit_lab::report::VerificationReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbit-lab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbit-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read_reports(path: &PathBuf) -> Vec<VerificationReport> {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn passing_suite_exits_zero_and_writes_reports() {
    let out = scratch("hilbert.json");
    let st = bin().args(["hilbert", "--p", "3,5", "--out"]).arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let text = String::from_utf8(st.stdout).unwrap();
    assert!(text.starts_with("hilbert-symbol: PASS 32/32"), "{}", text);
    let reports = read_reports(&out);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].identity, "hilbert-symbol");
    assert_eq!(reports[0].p, vec![3, 5]);
    assert_eq!((reports[0].instances, reports[0].passed), (32, 32));
    assert_eq!(reports[0].ledger, orbit_core::LEDGER_ID);
}

#[test]
fn failing_suite_exits_one() {
    let out = scratch("n2.json");
    let st = bin().args(["nilpotent-identity", "--n", "2", "--out"]).arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    let reports = read_reports(&out);
    assert!(!reports[0].ok());
    assert!(reports[0].failures[0].detail.starts_with("unsupported"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [vec!["hilbert", "--p", "three"], vec!["fl-check", "--n", "2"], vec!["no-such-command"]] {
        let st = bin().args(&args).output().unwrap();
        assert_eq!(st.status.code(), Some(2), "{:?}", args);
    }
    let st = bin().args(["zeta", "--ledger", "/nonexistent/ledger.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn only_replays_one_instance() {
    let all = scratch("match-all.json");
    let st = bin().args(["match-orbit", "--p", "3", "--instances", "6", "--seed", "9", "--out"]).arg(&all).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(read_reports(&all)[0].instances, 12);
    let one = scratch("match-one.json");
    let st = bin().args(["match-orbit", "--p", "3", "--instances", "6", "--seed", "9", "--only", "7", "--out"]).arg(&one).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(read_reports(&one)[0].instances, 1);
}

#[test]
fn runs_are_deterministic() {
    let a = scratch("zeta-a.json");
    let b = scratch("zeta-b.json");
    for path in [&a, &b] {
        let st = bin().args(["zeta", "--p", "5", "--instances", "8", "--seed", "4", "--out"]).arg(path).output().unwrap();
        assert_eq!(st.status.code(), Some(0));
    }
    let strip = |mut r: Vec<VerificationReport>| {
        for x in &mut r {
            x.runtime_ms = 0;
        }
        r
    };
    assert_eq!(
        serde_json::to_value(strip(read_reports(&a))).unwrap(),
        serde_json::to_value(strip(read_reports(&b))).unwrap()
    );
}

#[test]
fn pinned_calibration_is_enforced() {
    let ledger = scratch("ledger.json");
    let mut l = orbit_lab::ledger::NormalizationLedger::default();
    let one = orbit_core::cyclotomic::CycScalar::one();
    l.calibrations.insert("nilpotent-identity-n1".into(), (&one).into());
    std::fs::write(&ledger, serde_json::to_string(&l).unwrap()).unwrap();
    let args = ["nilpotent-identity", "--p", "3", "--tau", "3", "--instances", "4", "--max-level", "0"];
    let st = bin().args(args).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = bin().args(args).arg("--ledger").arg(&ledger).output().unwrap();
    assert_eq!(st.status.code(), Some(1), "{}", String::from_utf8_lossy(&st.stdout));
}

#[test]
fn broken_pipe_is_not_a_panic() {
    use std::process::Stdio;
    let mut child = bin().args(["weil-sign", "--p", "3"]).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    drop(child.stdout.take());
    let out = child.wait_with_output().unwrap();
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
}
