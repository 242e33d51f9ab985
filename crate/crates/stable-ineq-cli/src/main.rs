//! Command-line front end: criterion sweeps, Green/Orlicz reports,
//! randomized verification suites and Monte Carlo runs.
//!
//! Configuration comes from an optional TOML file (`--config`), with
//! command-line flags taking precedence. Artifacts are written as JSON
//! (plus CSV where tabular) into `--out`, or printed to stdout.

mod config;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use config::FileConfig;
use stable_ineq::criteria::{self, ClassifyOptions, CriterionReport, Hold};
use stable_ineq::green::{self, GreenSampleSpec};
use stable_ineq::measure::{Weight, WeightFamily};
use stable_ineq::orlicz::{self, NFunction};
use stable_ineq::simulate::{ensemble_occupation, small_time_kernel_check, PathConfig};
use stable_ineq::suites;
use stable_ineq::StableIndex;

#[derive(Parser)]
#[command(name = "stable-ineq", version, about = "Functional-inequality criteria for time-changed stable processes")]
struct Cli {
    /// TOML configuration file; flags override its values
    #[arg(long, global = true)]
    config: Option<String>,
    /// Seed for randomized suites and simulations
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for artifacts (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<String>,
    /// Treat INCONCLUSIVE verdicts as errors in the exit status
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify weights against the criterion table
    Analyze(AnalyzeArgs),
    /// Green-function property report and δ_n tables
    Green(GreenArgs),
    /// Orlicz norms and the δ(Φ) criterion
    Orlicz(OrliczArgs),
    /// Run the randomized property suites (green + orlicz + nonlocal)
    Verify(VerifyArgs),
    /// Monte Carlo occupation diagnostics and the small-time kernel check
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Weight spec, e.g. poly(gamma=2) or log(gamma=1)
    #[arg(long)]
    weight: Option<String>,
    /// Sweep: replace gamma in the weight spec by each grid value
    #[arg(long, value_delimiter = ',')]
    gamma_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    xis: Option<Vec<f64>>,
    /// Also write the CSV table
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct GreenArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    weight: Option<String>,
    /// Killed-interval half-widths for the δ_n / δ̃_n tables
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<f64>>,
}

#[derive(Args)]
struct OrliczArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    weight: Option<String>,
    /// N-function spec: power(r=3), xlog, xlogxi(xi=0.5)
    #[arg(long)]
    nfunction: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    probes: Option<Vec<f64>>,
    #[arg(long)]
    burn_in: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    /// Also run the small-time kernel check for a ≡ 1 on B = (1,2)
    #[arg(long)]
    kernel_check: bool,
}

fn fail(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

fn write_artifact(out: &Option<String>, name: &str, contents: &str) {
    match out {
        Some(dir) => {
            if let Err(e) = std::fs::create_dir_all(dir) {
                fail(&format!("cannot create output directory '{dir}': {e}"));
            }
            let path = format!("{dir}/{name}");
            if let Err(e) = std::fs::write(&path, contents) {
                fail(&format!("cannot write '{path}': {e}"));
            }
            eprintln!("wrote {path}");
        }
        None => println!("{contents}"),
    }
}

fn parse_alpha(v: f64) -> StableIndex {
    StableIndex::new(v).unwrap_or_else(|e| fail(&e.to_string()))
}

fn parse_weight(spec: &str, alpha: StableIndex) -> Weight {
    Weight::parse(spec, alpha).unwrap_or_else(|e| fail(&e.to_string()))
}

fn main() {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).unwrap_or_else(|e| fail(&e)),
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(42);
    let out = cli.out.clone().or(file.out.clone());
    let strict = cli.strict || file.strict.unwrap_or(false);

    let code = match &cli.command {
        Command::Analyze(a) => run_analyze(a, &file, seed, &out, strict),
        Command::Green(a) => run_green(a, &file, seed, &out),
        Command::Orlicz(a) => run_orlicz(a, &file, &out),
        Command::Verify(a) => run_verify(a, seed, &out),
        Command::Simulate(a) => run_simulate(a, &file, seed, &out),
    };
    std::process::exit(code);
}

fn has_inconclusive(rep: &CriterionReport) -> bool {
    let rows = [
        &rep.ergodic,
        &rep.poincare,
        &rep.super_poincare,
        &rep.log_sobolev,
        &rep.strong_ergodic,
    ];
    rows.iter().any(|e| e.hold == Hold::Inconclusive)
        || rep.nash.iter().any(|(_, e)| e.hold == Hold::Inconclusive)
        || rep.interpolation.iter().any(|(_, e)| e.hold == Hold::Inconclusive)
}

fn run_analyze(
    args: &AnalyzeArgs,
    file: &FileConfig,
    _seed: u64,
    out: &Option<String>,
    strict: bool,
) -> i32 {
    let alpha = parse_alpha(args.alpha.or(file.analyze.alpha).unwrap_or(1.5));
    let spec = args
        .weight
        .clone()
        .or(file.analyze.weight.clone())
        .unwrap_or_else(|| fail("analyze needs --weight (or [analyze].weight in the config)"));
    let base = parse_weight(&spec, alpha);
    let grid = args.gamma_grid.clone().or(file.analyze.gamma_grid.clone());
    let opts = ClassifyOptions {
        epsilons: args.epsilons.clone().or(file.analyze.epsilons.clone()).unwrap_or(vec![4.0]),
        xis: args.xis.clone().or(file.analyze.xis.clone()).unwrap_or(vec![0.3, 0.5, 1.0]),
    };

    let weights: Vec<Weight> = match grid {
        None => vec![base],
        Some(gs) => gs
            .iter()
            .map(|&g| match &base.family {
                WeightFamily::Poly { .. } => Ok(Weight::poly(alpha, g)),
                WeightFamily::Log { .. } => Weight::log(alpha, g),
                WeightFamily::Custom { .. } => {
                    Err(stable_ineq::Error::InvalidParam("cannot sweep a custom weight".into()))
                }
            })
            .collect::<Result<_, _>>()
            .unwrap_or_else(|e| fail(&e.to_string())),
    };

    // grid points run on the worker pool; output order follows input order
    let reports: Vec<CriterionReport> = weights
        .par_iter()
        .map(|w| criteria::classify(alpha, w, &opts))
        .collect::<Result<_, _>>()
        .unwrap_or_else(|e| fail(&e.to_string()));

    let json = serde_json::to_string_pretty(&reports).unwrap();
    write_artifact(out, "analyze.json", &json);
    if args.csv || file.analyze.csv.unwrap_or(false) {
        let mut csv = String::from(CriterionReport::CSV_HEADER);
        csv.push('\n');
        for r in &reports {
            csv.push_str(&r.csv_row());
            csv.push('\n');
        }
        write_artifact(out, "analyze.csv", &csv);
    }
    for r in &reports {
        eprintln!(
            "{} α={}: poincare {:?}, super-poincare {:?}, log-sobolev {:?}",
            r.weight, r.alpha, r.poincare.hold, r.super_poincare.hold, r.log_sobolev.hold
        );
    }
    if strict && reports.iter().any(has_inconclusive) {
        eprintln!("strict mode: INCONCLUSIVE verdict present");
        return 3;
    }
    0
}

#[derive(Serialize)]
struct GreenReport {
    properties: green::GreenPropertyReport,
    delta_n: Vec<(f64, criteria::SupremumResult)>,
    delta_tilde_n: Vec<(f64, criteria::SupremumResult)>,
}

fn run_green(args: &GreenArgs, file: &FileConfig, seed: u64, out: &Option<String>) -> i32 {
    let alpha = parse_alpha(args.alpha.or(file.green.alpha).unwrap_or(1.5));
    let spec = args
        .weight
        .clone()
        .or(file.green.weight.clone())
        .unwrap_or_else(|| "poly(gamma=2)".to_string());
    let w = parse_weight(&spec, alpha);
    let ns = args.ns.clone().or(file.green.ns.clone()).unwrap_or(vec![1.0, 2.0, 5.0]);

    let sample = GreenSampleSpec { seed, ..Default::default() };
    let properties =
        green::verify_properties(alpha, &sample).unwrap_or_else(|e| fail(&e.to_string()));
    let mut delta_n = Vec::new();
    let mut delta_tilde_n = Vec::new();
    for &n in &ns {
        delta_n.push((n, green::delta_n(alpha, &w, n).unwrap_or_else(|e| fail(&e.to_string()))));
        delta_tilde_n
            .push((n, green::delta_tilde_n(alpha, &w, n).unwrap_or_else(|e| fail(&e.to_string()))));
    }
    let report = GreenReport { properties, delta_n, delta_tilde_n };
    write_artifact(out, "green.json", &serde_json::to_string_pretty(&report).unwrap());
    if report.properties.passed {
        eprintln!("green property checks: all passed");
        0
    } else {
        eprintln!("green property checks: FAILURES present");
        1
    }
}

#[derive(Serialize)]
struct OrliczReport {
    nfunction: String,
    weight: String,
    delta_phi: criteria::SupremumResult,
    lambda_phi_lower: Option<f64>,
    lambda_psi_lower: Option<f64>,
    /// gauge and Orlicz norms of tail indicators at probe points
    indicator_norms: Vec<(f64, f64, f64)>,
}

fn run_orlicz(args: &OrliczArgs, file: &FileConfig, out: &Option<String>) -> i32 {
    let alpha = parse_alpha(args.alpha.or(file.orlicz.alpha).unwrap_or(1.5));
    let spec = args
        .weight
        .clone()
        .or(file.orlicz.weight.clone())
        .unwrap_or_else(|| "poly(gamma=2)".to_string());
    let w = parse_weight(&spec, alpha);
    let nspec =
        args.nfunction.clone().or(file.orlicz.nfunction.clone()).unwrap_or_else(|| "xlog".into());
    let phi = NFunction::parse(&nspec).unwrap_or_else(|e| fail(&e.to_string()));

    let dp = orlicz::delta_phi(&phi, alpha, &w).unwrap_or_else(|e| fail(&e.to_string()));
    let (lambda_phi_lower, lambda_psi_lower) = if dp.value.is_finite() && dp.value > 0.0 {
        let (a, b) = criteria::orlicz_poincare_lower(dp.value, alpha)
            .unwrap_or_else(|e| fail(&e.to_string()));
        (Some(a), Some(b))
    } else {
        (None, None)
    };
    let mut indicator_norms = Vec::new();
    for x in [0.5, 1.0, 5.0, 25.0] {
        let ind = move |y: f64| if y.abs() > x { 1.0 } else { 0.0 };
        let g = orlicz::gauge_norm(&phi, ind, &w, &[-x, x]).unwrap_or_else(|e| fail(&e.to_string()));
        let o =
            orlicz::orlicz_norm(&phi, ind, &w, &[-x, x]).unwrap_or_else(|e| fail(&e.to_string()));
        indicator_norms.push((x, g, o));
    }
    let report = OrliczReport {
        nfunction: phi.label(),
        weight: w.label(),
        delta_phi: dp,
        lambda_phi_lower,
        lambda_psi_lower,
        indicator_norms,
    };
    write_artifact(out, "orlicz.json", &serde_json::to_string_pretty(&report).unwrap());
    eprintln!("δ(Φ) verdict: {:?}, value {}", dp.verdict, dp.value);
    0
}

fn run_verify(args: &VerifyArgs, seed: u64, out: &Option<String>) -> i32 {
    let alpha = parse_alpha(args.alpha);
    let mut failed = false;
    let mut reports = Vec::new();
    for run in [suites::green_suite, suites::orlicz_suite, suites::nonlocal_suite] {
        let rep = run(alpha, seed).unwrap_or_else(|e| fail(&e.to_string()));
        eprint!("{}", rep.render());
        failed |= !rep.passed;
        reports.push(rep);
    }
    write_artifact(out, "verify.json", &serde_json::to_string_pretty(&reports).unwrap());
    if failed {
        eprintln!("verification: FAILURES present (seed {seed})");
        1
    } else {
        eprintln!("verification: all property suites passed (seed {seed})");
        0
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    seed: u64,
    alpha: f64,
    weight: String,
    dt: f64,
    steps: usize,
    paths: usize,
    stats: stable_ineq::simulate::EnsembleStats,
    kernel: Option<stable_ineq::simulate::KernelCheckReport>,
}

fn run_simulate(args: &SimulateArgs, file: &FileConfig, seed: u64, out: &Option<String>) -> i32 {
    let alpha = parse_alpha(args.alpha.or(file.simulate.alpha).unwrap_or(1.5));
    let spec = args
        .weight
        .clone()
        .or(file.simulate.weight.clone())
        .unwrap_or_else(|| "poly(gamma=2)".to_string());
    let w = parse_weight(&spec, alpha);
    let dt = args.dt.or(file.simulate.dt).unwrap_or(0.01);
    let steps = args.steps.or(file.simulate.steps).unwrap_or(100_000);
    let paths = args.paths.or(file.simulate.paths).unwrap_or(16);
    let probes = args
        .probes
        .clone()
        .or(file.simulate.probes.clone())
        .unwrap_or(vec![0.5, 1.0, 2.0, 5.0]);
    let burn_in = args.burn_in.or(file.simulate.burn_in).unwrap_or(0.1);
    let y0 = args.y0.or(file.simulate.y0).unwrap_or(0.0);

    let cfg = PathConfig { alpha, weight: w.clone(), y0, dt, steps, seed };
    // 20 equal-probability bins of μ via the tail function
    let edges = occupation_bin_edges(&w, 20);
    let stats = ensemble_occupation(&cfg, paths, &probes, &edges, burn_in)
        .unwrap_or_else(|e| fail(&e.to_string()));

    let mut csv = String::from("kind,lo,hi,value,half_width\n");
    for (i, &p) in stats.probes.iter().enumerate() {
        csv.push_str(&format!(
            "tail,{p},inf,{},{}\n",
            stats.tail_estimate[i], stats.half_width[i]
        ));
    }
    for k in 0..stats.bin_occupation.len() {
        csv.push_str(&format!(
            "bin,{},{},{},{}\n",
            stats.bin_edges[k],
            stats.bin_edges[k + 1],
            stats.bin_occupation[k],
            stats.bin_se[k]
        ));
    }
    write_artifact(out, "simulate.csv", &csv);

    let kernel = if args.kernel_check {
        Some(
            small_time_kernel_check(&|_| 1.0, alpha, (1.0, 2.0), &[0.1, 0.03, 0.01], 1_000_000, dt, seed)
                .unwrap_or_else(|e| fail(&e.to_string())),
        )
    } else {
        None
    };
    let summary = SimulateSummary {
        seed,
        alpha: alpha.get(),
        weight: w.label(),
        dt,
        steps,
        paths,
        stats,
        kernel,
    };
    write_artifact(out, "simulate.json", &serde_json::to_string_pretty(&summary).unwrap());
    0
}

/// Equal-probability bin edges of μ on the line (built-in families are
/// even, so edges are symmetric quantiles from the tail function).
fn occupation_bin_edges(w: &Weight, bins: usize) -> Vec<f64> {
    let mass = match w.total_mass() {
        Ok(m) => m,
        Err(_) => return Vec::new(),
    };
    let mut edges = Vec::with_capacity(bins + 1);
    for k in 0..=bins {
        let u = k as f64 / bins as f64;
        if u == 0.0 {
            edges.push(-1e9);
        } else if u == 1.0 {
            edges.push(1e9);
        } else {
            // F(x) = 1 - T(|x|)/2 for x ≥ 0; invert by bisection
            let target_tail = if u >= 0.5 { 2.0 * mass * (1.0 - u) } else { 2.0 * mass * u };
            let mut lo = 0.0;
            let mut hi = 1e9;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if w.tail(mid).unwrap_or(0.0) > target_tail {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            edges.push(if u >= 0.5 { 0.5 * (lo + hi) } else { -0.5 * (lo + hi) });
        }
    }
    edges
}
