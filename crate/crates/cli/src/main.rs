//! Batch driver: configures primes, grids, weights and tolerances, runs
//! the verification suites and emits machine-readable reports.
//!
//! Exit codes: 0 all checks passed, 1 at least one failure, 2
//! configuration error.

mod suites;

use clap::{Args, Parser, Subcommand};
use eichler_arch::checks::{run_arch_suite, ArchConfig, ArchTols};
use eichler_core::report::Report;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "eichler",
    about = "Exact and numerical verification of local Hecke/theta identities for quaternion unitary groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (defaults to the rayon heuristics / RAYON_NUM_THREADS).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for the randomized property checks.
    #[arg(long, global = true, default_value_t = 20240817)]
    seed: u64,

    /// Write the report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format for --out.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum GridPreset {
    Small,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coset tables, helper identities, J-sums and commutation relations
    /// at a split prime.
    VerifyUnramified(VerifyUnramified),
    /// The ramified-place analogues at an odd prime dividing the
    /// discriminant.
    VerifyRamified(VerifyRamified),
    /// Satake eigenvalues of the explicit tables against their displays.
    Satake(PrimeArgs),
    /// Eigenvalue identities under upsilon and the induced L-factor
    /// relation.
    Functoriality(PrimeArgs),
    /// Archimedean kernel checks at the configured weights.
    Arch(ArchArgs),
    /// Run a configured battery of suites and write the full report.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct VerifyUnramified {
    #[arg(long, default_value_t = 3)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = GridPreset::Small)]
    grid: GridPreset,
    /// Restrict to the listed Hecke operator indices (1 and/or 2).
    #[arg(long, value_delimiter = ',')]
    ops: Option<Vec<u8>>,
}

#[derive(Args, Debug)]
struct VerifyRamified {
    #[arg(long, default_value_t = 3)]
    prime: u64,
}

#[derive(Args, Debug)]
struct PrimeArgs {
    #[arg(long, default_value_t = 3)]
    prime: u64,
    #[arg(long)]
    ramified: bool,
}

#[derive(Args, Debug)]
struct ArchArgs {
    /// Weights kappa to run.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5usize, 8, 10, 12])]
    kappa: Vec<usize>,
    /// Check groups: ei, phiomega, phiomegabig, fourier, exact, decay.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Override the equivariance/property tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Suites to run.
    #[arg(long, value_delimiter = ',', default_values_t = [
        "coset", "helper", "jsum-unram", "jsum-ram", "ecr", "satake",
        "functoriality", "arch"
    ].map(String::from))]
    suites: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u64, 3, 5])]
    primes: Vec<u64>,
    /// Ramified primes (odd, subset of --primes); defaults to the odd
    /// entries of --primes.
    #[arg(long, value_delimiter = ',')]
    ramified_primes: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = GridPreset::Small)]
    grid: GridPreset,
    #[arg(long, value_delimiter = ',', default_values_t = vec![5usize, 8, 10, 12])]
    kappa: Vec<usize>,
    /// JSON config file; explicit flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Keys accepted in the optional JSON config file (same as the flags).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suites: Option<Vec<String>>,
    primes: Option<Vec<u64>>,
    ramified_primes: Option<Vec<u64>>,
    grid: Option<String>,
    kappa: Option<Vec<usize>>,
    seed: Option<u64>,
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure the worker pool");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut report = report;
    report.wall_ms = started.elapsed().as_millis();

    print!("{}", report.render_text());
    if let Some(path) = &cli.out {
        let body = match cli.format {
            Format::Json => match serde_json::to_string_pretty(&report) {
                Ok(s) => s + "\n",
                Err(e) => {
                    eprintln!("error: serialization failed: {e}");
                    return ExitCode::from(2);
                }
            },
            Format::Text => report.render_text(),
        };
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    match &cli.command {
        Command::VerifyUnramified(args) => {
            if !is_prime(args.prime) {
                return Err(format!("{} is not prime", args.prime));
            }
            if let Some(ops) = &args.ops {
                if ops.iter().any(|i| !matches!(i, 1 | 2)) {
                    return Err("--ops accepts only 1 and 2".into());
                }
            }
            let mut r = Report::new(
                "verify-unramified",
                format!("prime={} grid={:?} ops={:?}", args.prime, args.grid, args.ops),
                cli.seed,
            );
            r.extend(suites::suite_coset(args.prime, false));
            r.extend(suites::suite_helper(args.prime));
            r.extend(suites::suite_fourier_lattice(args.prime));
            let ops = match &args.ops {
                None => (true, true),
                Some(v) => (v.contains(&1), v.contains(&2)),
            };
            r.extend(suites::suite_ecr_unram_ops(
                args.prime,
                args.grid == GridPreset::Full,
                ops,
            ));
            r.extend(suites::suite_transcription(args.prime));
            Ok(r)
        }
        Command::VerifyRamified(args) => {
            if !is_prime(args.prime) {
                return Err(format!("{} is not prime", args.prime));
            }
            let mut r = Report::new(
                "verify-ramified",
                format!("prime={}", args.prime),
                cli.seed,
            );
            r.extend(suites::suite_coset(args.prime, true));
            r.extend(suites::suite_residue_ram(args.prime));
            r.extend(suites::suite_ecr_ram(args.prime));
            Ok(r)
        }
        Command::Satake(args) => {
            if !is_prime(args.prime) {
                return Err(format!("{} is not prime", args.prime));
            }
            let mut r = Report::new(
                "satake",
                format!("prime={} ramified={}", args.prime, args.ramified),
                cli.seed,
            );
            r.extend(suites::suite_satake(args.prime, args.ramified));
            Ok(r)
        }
        Command::Functoriality(args) => {
            if !is_prime(args.prime) {
                return Err(format!("{} is not prime", args.prime));
            }
            let mut r = Report::new(
                "functoriality",
                format!("prime={} ramified={}", args.prime, args.ramified),
                cli.seed,
            );
            r.extend(suites::suite_functoriality(args.prime, args.ramified));
            Ok(r)
        }
        Command::Arch(args) => {
            if args.kappa.iter().any(|&k| k < 5) {
                return Err("kappa must be at least 5 for integrability".into());
            }
            let mut tols = ArchTols::default();
            if let Some(t) = args.tol {
                tols.equivariance = t;
                tols.algebra = t.min(tols.algebra);
            }
            let cfg = ArchConfig {
                kappas: args.kappa.clone(),
                seed: cli.seed,
                tols,
                checks: args
                    .checks
                    .clone()
                    .unwrap_or_else(|| ArchConfig::default().checks),
            };
            let mut r = Report::new(
                "arch",
                format!("kappa={:?} checks={:?}", cfg.kappas, cfg.checks),
                cli.seed,
            );
            r.extend(run_arch_suite(&cfg));
            Ok(r)
        }
        Command::Report(args) => run_report(cli, args),
    }
}

fn run_report(cli: &Cli, args: &ReportArgs) -> Result<Report, String> {
    // Merge the optional config file under the explicit flags.
    let mut suites_list = args.suites.clone();
    let mut primes = args.primes.clone();
    let mut ramified = args
        .ramified_primes
        .clone()
        .unwrap_or_else(|| args.primes.iter().copied().filter(|p| p % 2 == 1).collect());
    let mut grid = args.grid;
    let mut kappas = args.kappa.clone();
    let mut seed = cli.seed;
    if let Some(path) = &args.config {
        let body = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let file: FileConfig =
            serde_json::from_str(&body).map_err(|e| format!("bad config: {e}"))?;
        if let Some(v) = file.suites {
            suites_list = v;
        }
        if let Some(v) = file.primes {
            primes = v;
        }
        if let Some(v) = file.ramified_primes {
            ramified = v;
        }
        if let Some(v) = file.grid {
            grid = match v.as_str() {
                "small" => GridPreset::Small,
                "full" => GridPreset::Full,
                other => return Err(format!("unknown grid preset {other}")),
            };
        }
        if let Some(v) = file.kappa {
            kappas = v;
        }
        if let Some(v) = file.seed {
            seed = v;
        }
        if let Some(n) = file.workers {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    for p in &primes {
        if !is_prime(*p) {
            return Err(format!("{p} is not prime"));
        }
    }
    for p in &ramified {
        if !primes.contains(p) {
            return Err(format!("ramified prime {p} is not in the prime list"));
        }
        if p % 2 == 0 {
            return Err("ramified primes must be odd".into());
        }
    }
    let known = [
        "coset",
        "helper",
        "jsum-unram",
        "jsum-ram",
        "ecr",
        "satake",
        "functoriality",
        "arch",
    ];
    for s in &suites_list {
        if !known.contains(&s.as_str()) {
            return Err(format!("unknown suite {s}"));
        }
    }

    let mut r = Report::new(
        "report",
        format!(
            "primes={primes:?} ramified={ramified:?} grid={grid:?} kappa={kappas:?} suites={suites_list:?}"
        ),
        seed,
    );
    let on = |name: &str| suites_list.iter().any(|s| s == name);
    for &p in &primes {
        if on("coset") {
            r.extend(suites::suite_coset(p, false));
        }
        if on("helper") {
            r.extend(suites::suite_helper(p));
        }
        if on("jsum-unram") {
            r.extend(suites::suite_fourier_lattice(p));
        }
        if on("ecr") || on("jsum-unram") {
            r.extend(suites::suite_ecr_unram(p, grid == GridPreset::Full));
            r.extend(suites::suite_transcription(p));
        }
        if on("satake") {
            r.extend(suites::suite_satake(p, false));
        }
        if on("functoriality") {
            r.extend(suites::suite_functoriality(p, false));
        }
    }
    // An extra split prime for the eigenvalue displays.
    if on("satake") && !primes.contains(&7) {
        r.extend(suites::suite_satake(7, false));
        r.extend(suites::suite_functoriality(7, false));
    }
    for &p in &ramified {
        if on("coset") {
            r.extend(suites::suite_coset(p, true));
        }
        if on("jsum-ram") || on("ecr") {
            r.extend(suites::suite_residue_ram(p));
            r.extend(suites::suite_ecr_ram(p));
        }
        if on("satake") {
            r.extend(suites::suite_satake(p, true));
        }
        if on("functoriality") {
            r.extend(suites::suite_functoriality(p, true));
        }
    }
    if on("arch") {
        let cfg = ArchConfig {
            kappas,
            seed,
            tols: ArchTols::default(),
            checks: ArchConfig::default().checks,
        };
        r.extend(run_arch_suite(&cfg));
    }
    Ok(r)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
