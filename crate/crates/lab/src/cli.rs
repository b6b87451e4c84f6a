use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::json::{parse_rat, FormatError};
use crate::ledger::NormalizationLedger;
use crate::report::VerificationReport;
use crate::suites::{self, SuiteConfig};

/// Environment variable naming the default ledger file.
pub const LEDGER_ENV: &str = "ORBIT_LAB_LEDGER";

#[derive(Parser, Debug)]
#[command(name = "orbit-lab", version, about = "Exact verification suites for p-adic orbit integrals")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Primes to run, comma separated; each suite has its own default.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// `τ` with `E = F(√τ)`; by default both an unramified and a ramified `E`.
    #[arg(long, global = true)]
    pub tau: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Instances per configuration.
    #[arg(long, global = true)]
    pub instances: Option<usize>,
    /// Largest coset level of generated step functions.
    #[arg(long, global = true)]
    pub max_level: Option<i64>,
    /// Ledger JSON with pinned calibration constants.
    #[arg(long, global = true)]
    pub ledger: Option<PathBuf>,
    /// Writes the reports as a JSON array.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replays a single instance index from a report.
    #[arg(long, global = true)]
    pub only: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Torus germ expansions and the m = 1 closed forms.
    GermVerify,
    /// Nilpotent identity at n = 1 through constructed transfers.
    NilpotentIdentity {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Parabolic descent at n = 2.
    DescentVerify,
    /// Descent against the Fourier transforms.
    DescentFourier,
    /// Fundamental lemma.
    FlCheck {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Weil-index relations and the sign (−1)^{n−1}.
    WeilSign,
    /// Hilbert symbols against brute force.
    Hilbert,
    /// Hermitian-space classes under change of basis.
    ClassifyHermitian,
    /// Orbit matching and the transfer factor.
    MatchOrbit,
    /// Tate zeta integrals against shell sums.
    Zeta,
    /// Fourier transform applied twice.
    FourierInvolution,
    /// Cohomology of norm classes and the κ-pullback.
    Cohomology,
}

struct Defaults {
    primes: &'static [u64],
    instances: usize,
    max_level: i64,
}

fn defaults(c: &Command) -> Defaults {
    let d = |primes, instances, max_level| Defaults { primes, instances, max_level };
    match c {
        Command::GermVerify => d(&[3, 5], 50, 1),
        Command::NilpotentIdentity { .. } => d(&[3, 5], 100, 1),
        Command::DescentVerify | Command::DescentFourier => d(&[3], 20, 1),
        Command::FlCheck { .. } => d(&[3, 5], 1, 0),
        Command::WeilSign | Command::Hilbert => d(&[3, 5, 7], 1, 0),
        Command::ClassifyHermitian | Command::MatchOrbit | Command::Zeta => d(&[3, 5], 50, 2),
        Command::FourierInvolution => d(&[3], 100, 2),
        Command::Cohomology => d(&[3, 5], 2, 0),
    }
}

pub fn config(g: &Global, c: &Command) -> Result<SuiteConfig, FormatError> {
    let d = defaults(c);
    let primes = if g.p.is_empty() { d.primes.to_vec() } else { g.p.clone() };
    let mut cfg = SuiteConfig::new(&primes, g.instances.unwrap_or(d.instances), g.max_level.unwrap_or(d.max_level));
    cfg.seed = g.seed;
    cfg.only = g.only;
    cfg.tau = g.tau.as_deref().map(parse_rat).transpose()?;
    let ledger_path = g.ledger.clone().or_else(|| std::env::var_os(LEDGER_ENV).map(PathBuf::from));
    if let Some(path) = ledger_path {
        cfg.ledger = NormalizationLedger::load(&path)?;
    }
    Ok(cfg)
}

pub fn run(c: &Command, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>, String> {
    let e = |x: orbit_core::Error| x.to_string();
    Ok(match c {
        Command::GermVerify => vec![suites::torus_germ(cfg).map_err(e)?, suites::m1_closed_forms(cfg).map_err(e)?],
        Command::NilpotentIdentity { n: 1 } => vec![suites::nilpotent_identity(cfg).map_err(e)?],
        Command::NilpotentIdentity { n: 2 } => vec![suites::nilpotent_identity_n2(cfg)],
        Command::NilpotentIdentity { n } => return Err(format!("nilpotent identity at n = {} is not supported", n)),
        Command::DescentVerify => vec![suites::descent_verify(cfg).map_err(e)?],
        Command::DescentFourier => vec![suites::descent_fourier(cfg).map_err(e)?],
        Command::FlCheck { n: 1 } => vec![suites::fl_check(cfg).map_err(e)?],
        Command::FlCheck { n } => return Err(format!("fl-check is implemented for n = 1, not {}", n)),
        Command::WeilSign => vec![suites::weil_sign(cfg).map_err(e)?],
        Command::Hilbert => vec![suites::hilbert(cfg).map_err(e)?],
        Command::ClassifyHermitian => vec![suites::classify_hermitian(cfg).map_err(e)?],
        Command::MatchOrbit => vec![suites::match_orbit(cfg).map_err(e)?],
        Command::Zeta => vec![suites::zeta(cfg).map_err(e)?],
        Command::FourierInvolution => vec![suites::fourier_involution(cfg).map_err(e)?],
        Command::Cohomology => vec![suites::cohomology(cfg).map_err(e)?],
    })
}

fn print_reports(w: &mut impl Write, reports: &[VerificationReport]) -> std::io::Result<()> {
    for r in reports {
        writeln!(w, "{}", r.summary())?;
        for f in r.failures.iter().take(5) {
            writeln!(w, "  instance {}: {}", f.index, f.detail)?;
        }
        for n in &r.notes {
            writeln!(w, "  {}", n)?;
        }
    }
    w.flush()
}

/// Parses, runs and writes reports; returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match config(&cli.global, &cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e);
            return 2;
        }
    };
    let reports = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", e);
            return 2;
        }
    };
    let _ = print_reports(&mut std::io::stdout().lock(), &reports);
    if let Some(path) = &cli.global.out {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("{}: {}", path.display(), e);
            return 2;
        }
    }
    if reports.iter().all(|r| r.ok()) {
        0
    } else {
        1
    }
}
