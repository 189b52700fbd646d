//! Command-line entry point. Exit codes: 0 success, 1 usage or runtime
//! error, 2 when an emitted report contains a failed comparison.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use er_lab::bounds::{self, bound_table};
use er_lab::components::component_profile;
use er_lab::experiments::{
    render_report_csv, render_trials_csv, run_experiment, verify_bound_dominance, ExperimentConfig,
};
use er_lab::io::{read_edge_list, write_edge_list};
use er_lab::oracle::{self, ratio, ProbScalar};
use er_lab::sampler::{sample_gnp, SampleSpec};
use er_lab::Result;

#[derive(Parser)]
#[command(name = "er-lab", version, about = "Erdős–Rényi component-counting lab", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one G(n,p) graph and write it as an edge list
    Sample(SampleArgs),
    /// Print the component size profile of an edge-list file
    Components(ComponentsArgs),
    /// Exact distribution of the vertex-1 component size (CSV)
    Exact(ExactArgs),
    /// Log-space bound table at p = C/n (CSV)
    Bounds(BoundsArgs),
    /// Run a Monte Carlo experiment from a JSON config
    Experiment(ExperimentArgs),
    /// Check tree-bound dominance against the exact oracle
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Vertex count
    #[arg(long)]
    n: u64,
    /// Edge probability
    #[arg(long, conflicts_with = "c")]
    p: Option<f64>,
    /// Mean-degree parameter; p = C/n
    #[arg(long = "C")]
    c: Option<f64>,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComponentsArgs {
    /// Edge-list file
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    /// Vertex count (<= 64; <= 20 for exact rationals)
    #[arg(long)]
    n: u64,
    /// Edge probability; a fraction like 3/10 selects exact arithmetic
    #[arg(long)]
    p: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Vertex count
    #[arg(long)]
    n: u64,
    /// Mean-degree parameter; p = C/n
    #[arg(long = "C")]
    c: f64,
    /// Largest component size to tabulate
    #[arg(long = "r-max")]
    r_max: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config file matching ExperimentConfig (snake_case keys)
    #[arg(long)]
    config: PathBuf,
    /// Where to write the per-event report CSV
    #[arg(long, default_value = "experiment_report.csv")]
    out_report: PathBuf,
    /// Where to write the per-trial CSV
    #[arg(long, default_value = "experiment_trials.csv")]
    out_trials: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest n to check (<= 12)
    #[arg(long = "n-max")]
    n_max: u64,
    /// Comma-separated probability grid; default 0.05..0.95 step 0.05
    #[arg(long = "p-grid", value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own usage synopsis.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    init_thread_pool();
    match run(cli) {
        Ok(code) => code,
        // A closed stdout (e.g. piping into head) is not a failure.
        Err(er_lab::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// ER_LAB_THREADS caps worker parallelism; default is the machine core count.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("ER_LAB_THREADS") {
        match v.parse::<usize>() {
            Ok(t) if t >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => eprintln!("warning: ignoring ER_LAB_THREADS={v:?} (want a positive integer)"),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Components(a) => cmd_components(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn cmd_sample(a: SampleArgs) -> Result<ExitCode> {
    let spec = match (a.p, a.c) {
        (Some(p), None) => SampleSpec::new(a.n, p, a.seed)?,
        (None, Some(c)) => SampleSpec::from_mean_degree(a.n, c, a.seed)?,
        _ => {
            return Err(er_lab::Error::InvalidParameter(
                "exactly one of --p or --C is required".into(),
            ))
        }
    };
    let g = sample_gnp(&spec)?;
    let mut out = open_out(&a.out)?;
    write_edge_list(&mut out, &g)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_components(a: ComponentsArgs) -> Result<ExitCode> {
    let g = read_edge_list(BufReader::new(File::open(&a.input)?))?;
    let profile = component_profile(&g);
    let sizes: Vec<String> = profile.sizes().iter().map(|s| s.to_string()).collect();
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", sizes.join(" "))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(a: ExactArgs) -> Result<ExitCode> {
    // "num/den" runs the recursion in exact rational arithmetic.
    let (probs, p_f64): (Vec<f64>, f64) = if let Some((num, den)) = a.p.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad_p(&a.p))?;
        let den: u64 = den.trim().parse().map_err(|_| bad_p(&a.p))?;
        if den == 0 || num > den {
            return Err(bad_p(&a.p));
        }
        let p = ratio(num, den);
        let d = oracle::exact_component_distribution(a.n, &p)?;
        (d.to_f64(), p.to_f64_lossy())
    } else {
        let p: f64 = a.p.trim().parse().map_err(|_| bad_p(&a.p))?;
        let d = oracle::exact_component_distribution(a.n, &p)?;
        (d.to_f64(), p)
    };

    let mut out = open_out(&a.out)?;
    writeln!(out, "r,exact_prob,tree_bound,ratio")?;
    for (idx, prob) in probs.iter().enumerate() {
        let r = idx as u64 + 1;
        let bound = bounds::tree_bound_log(a.n, p_f64, r)?.exp();
        if bound > 0.0 {
            writeln!(out, "{r},{prob},{bound},{}", prob / bound)?;
        } else {
            writeln!(out, "{r},{prob},{bound},")?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn bad_p(s: &str) -> er_lab::Error {
    er_lab::Error::InvalidParameter(format!(
        "--p must be a float in [0,1] or a fraction num/den, got {s:?}"
    ))
}

fn cmd_bounds(a: BoundsArgs) -> Result<ExitCode> {
    let report = bound_table(a.n, a.c, a.r_max)?;
    let mut out = open_out(&a.out)?;
    writeln!(out, "r,log_tree_bound,log_simplified_bound,exact_log_prob,dominance_ok")?;
    for row in &report.rows {
        let simplified = row.log_simplified_bound.map(|v| v.to_string()).unwrap_or_default();
        let exact = row.exact_log_prob.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            row.r, row.log_tree_bound, simplified, exact, row.dominance_ok
        )?;
    }
    out.flush()?;
    if report.violation_count() > 0 {
        eprintln!("{} dominance violation(s)", report.violation_count());
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(a: ExperimentArgs) -> Result<ExitCode> {
    let mut json = String::new();
    File::open(&a.config)?.read_to_string(&mut json)?;
    let config = ExperimentConfig::from_json(&json)?;
    let report = run_experiment(&config)?;

    let mut f = BufWriter::new(File::create(&a.out_report)?);
    f.write_all(render_report_csv(&report).as_bytes())?;
    f.flush()?;
    let mut f = BufWriter::new(File::create(&a.out_trials)?);
    f.write_all(render_trials_csv(&report).as_bytes())?;
    f.flush()?;

    eprintln!(
        "{} trials at n={}, C={} ({:.2}s); M={}, giant threshold {}",
        config.trials,
        config.n,
        config.c,
        report.runtime_secs,
        report.params.m,
        report.giant_threshold,
    );
    for e in &report.events {
        let verdict = match e.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "-",
        };
        eprintln!(
            "  {:<16} freq {:<22} wilson [{}, {}] bound {:?} {verdict}",
            e.event.name(),
            e.empirical_freq,
            e.wilson_lo,
            e.wilson_hi,
            e.paper_bound,
        );
    }
    if report.any_failed() {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let grid: Vec<f64> = match a.p_grid {
        Some(g) if !g.is_empty() => g,
        _ => (1..=19).map(|k| k as f64 * 0.05).collect(),
    };
    let report = verify_bound_dominance(a.n_max, &grid)?;
    let mut out = std::io::stdout().lock();
    for row in report.violations() {
        writeln!(
            out,
            "VIOLATION n={} p={} r={}: log bound {} < exact {}",
            row.n,
            row.p,
            row.r,
            row.log_tree_bound,
            row.exact_log_prob.unwrap_or(f64::NAN)
        )?;
    }
    writeln!(
        out,
        "checked {} (n, p, r) combinations: {} violation(s)",
        report.rows.len(),
        report.violation_count()
    )?;
    if report.violation_count() > 0 {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}
