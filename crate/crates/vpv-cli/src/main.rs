//! `vpv`: valid p-value tests and their Monte Carlo experiments.

mod experiments;
mod output;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use experiments::{
    parse_interval, reproduce, run_epv_experiment, ExperimentConfig, Target, DEFAULT_SEED,
};
use output::{write_csv, ResultRow};
use std::path::{Path, PathBuf};
use vpv_core::epv::normal_lr_analysis;
use vpv_core::ks::{NullFamily, Sample};
use vpv_core::vpv::{decide, gof_vpv, two_sample_vpv, Decision, IntervalKind};

#[derive(Parser)]
#[command(
    name = "vpv",
    about = "Valid p-values for composite null hypotheses: tests, EPVs, and reproduction experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// H0: exponential with unknown rate
    ExpRate,
    /// H0: normal with unknown mean, unit variance
    NormalMean,
    /// H0: normal with zero mean, unknown scale
    NormalScale,
}

impl From<FamilyArg> for NullFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::ExpRate => NullFamily::ExpRate,
            FamilyArg::NormalMean => NullFamily::NormalMeanUnitVar,
            FamilyArg::NormalScale => NullFamily::NormalScaleZeroMean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IntervalArg {
    /// Maximum likelihood-ratio interval
    Lr,
    /// Simple chi-square upper bound
    Chisq,
}

impl From<IntervalArg> for IntervalKind {
    fn from(i: IntervalArg) -> Self {
        match i {
            IntervalArg::Lr => IntervalKind::LikelihoodRatio,
            IntervalArg::Chisq => IntervalKind::ChiSquareSimple,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Table1,
    Table2,
    #[value(name = "figA1", alias = "figa1")]
    FigA1,
    Sec221,
    Sec321,
    Youden,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Table1 => Target::Table1,
            TargetArg::Table2 => Target::Table2,
            TargetArg::FigA1 => Target::FigA1,
            TargetArg::Sec221 => Target::Sec221,
            TargetArg::Sec321 => Target::Sec321,
            TargetArg::Youden => Target::Youden,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Goodness-of-fit VpV test on data read from a file (one value per line)
    GofTest {
        /// Composite null family
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Confidence deficit of the nuisance-parameter interval
        #[arg(long, default_value_t = 0.0005)]
        beta: f64,
        /// Significance level; when given, decisions are printed
        #[arg(long)]
        alpha: Option<f64>,
        /// Input data path
        data: PathBuf,
    },
    /// Two-sample VpV test of equal means against mu_x > mu_y
    TwoSample {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 0.005)]
        beta: f64,
        #[arg(long, value_enum, default_value = "lr")]
        interval: IntervalArg,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Monte Carlo EPV_S / EPV_C estimation for a goodness-of-fit family
    Epv {
        /// Flat key=value config file; command-line flags override it
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Alternative design tag (a|b|c|d|f|cauchy)
        #[arg(long)]
        design: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        interval: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Youden-index threshold analysis of the normal-mean likelihood ratio
    Youden {
        #[arg(long, default_value_t = 3.3)]
        tau: f64,
        /// Type I target defining the alternative threshold C'
        #[arg(long, default_value_t = 0.01)]
        target_alpha: f64,
    },
    /// Run a preconfigured reproduction battery and emit its CSV
    Reproduce {
        #[arg(value_enum)]
        target: TargetArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override the battery's replication count
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut vals = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        vals.push(
            line.parse::<f64>()
                .with_context(|| format!("{}:{}: not a number", path.display(), i + 1))?,
        );
    }
    Ok(vals)
}

fn workers_from(cli: Option<usize>) -> usize {
    cli.or_else(|| {
        std::env::var("VPV_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0) // 0 lets rayon pick the available parallelism
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder.build().context("building worker pool")?;
    pool.install(f)
}

fn emit(rows: &[ResultRow], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            write_csv(std::io::BufWriter::new(file), rows)?;
            let cell_time: f64 = {
                // one wall-time entry per distinct cell
                let mut seen = std::collections::HashSet::new();
                rows.iter()
                    .filter(|r| seen.insert(r.cell.clone()))
                    .map(|r| r.wall_time.as_secs_f64())
                    .sum()
            };
            eprintln!(
                "wrote {} rows to {} ({} s of cell compute)",
                rows.len(),
                path.display(),
                output::fmt_g6(cell_time)
            );
        }
        None => write_csv(std::io::stdout().lock(), rows)?,
    }
    Ok(())
}

fn print_decision(label: &str, p: f64, alpha: f64) -> Result<()> {
    let d = decide(p, alpha)?;
    let verdict = match d {
        Decision::Reject => "reject H0",
        Decision::Retain => "retain H0",
    };
    println!("{label}: {verdict} at alpha={alpha}");
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::GofTest { family, beta, alpha, data } => {
            let sample = Sample::new(read_values(&data)?)?;
            let family: NullFamily = family.into();
            let r = gof_vpv(&sample, family, beta)?;
            println!("family: {family:?}   n = {}   beta = {beta}", sample.n());
            println!(
                "interval for theta: [{:.6}, {:.6}]  (A_beta = {:.6})",
                r.interval.lo, r.interval.hi, r.interval.a_beta
            );
            println!(
                "full infimum:       D* = {:.6} at theta = {:.6}",
                r.ks_min_full.d_star, r.ks_min_full.theta_star
            );
            println!(
                "restricted infimum: D* = {:.6} at theta = {:.6}",
                r.ks_min_restricted.d_star, r.ks_min_restricted.theta_star
            );
            println!("p_S = {:.6} (raw {:.6})", r.p_s, r.p_s_raw);
            println!("p_C = {:.6} (raw {:.6})", r.p_c, r.p_c_raw);
            if let Some(alpha) = alpha {
                print_decision("p_S", r.p_s, alpha)?;
                print_decision("p_C", r.p_c, alpha)?;
            }
        }
        Cmd::TwoSample { x, y, beta, interval, alpha } => {
            let xs = Sample::new(read_values(&x)?)?;
            let ys = Sample::new(read_values(&y)?)?;
            let r = two_sample_vpv(&xs, &ys, beta, interval.into())?;
            println!(
                "n = {}, m = {}   xbar = {:.6}   ybar = {:.6}",
                xs.n(),
                ys.n(),
                r.xbar,
                r.ybar
            );
            println!("sigma interval: [{:.6}, {:.6}]", r.sigma_lo, r.sigma_hi);
            println!("T(sigma_lo) = {:.6}   T(sigma_hi) = {:.6}", r.t_at_sigma_lo, r.t_at_sigma_hi);
            println!("p_S = {:.6}", r.p_s);
            println!("p_C = {:.6} (raw {:.6})", r.p_c, r.p_c_raw);
            if let Some(alpha) = alpha {
                print_decision("p_C", r.p_c, alpha)?;
            }
        }
        Cmd::Epv {
            config,
            family,
            design,
            n,
            m,
            alpha,
            beta,
            reps,
            seed,
            workers,
            interval,
            out,
        } => {
            let mut cfg = ExperimentConfig::default();
            if let Some(path) = config {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                cfg.apply_kv_file(&text)?;
            }
            if let Some(f) = family {
                cfg.family = f.into();
            }
            if let Some(d) = design {
                cfg.design = experiments::parse_design(&d)?;
            }
            if let Some(v) = n {
                cfg.n = v;
            }
            if let Some(v) = m {
                cfg.m = v;
            }
            if let Some(v) = alpha {
                cfg.alpha = v;
            }
            if let Some(v) = beta {
                cfg.beta = v;
            }
            if let Some(v) = reps {
                cfg.reps = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = workers {
                cfg.workers = v;
            }
            if let Some(v) = interval {
                cfg.interval = parse_interval(&v)?;
            }
            if let Some(v) = out {
                cfg.out = Some(v);
            }
            // workers = 0 means unset, letting VPV_WORKERS apply
            let explicit = (cfg.workers > 0).then_some(cfg.workers);
            let rows = in_pool(workers_from(explicit), || run_epv_experiment(&cfg))?;
            emit(&rows, cfg.out.as_deref())?;
        }
        Cmd::Youden { tau, target_alpha } => {
            let r = normal_lr_analysis(tau, Some(target_alpha))?;
            println!("tau = {tau}");
            println!("threshold C = 1: type I = {:.6}, power = {:.6}", r.type1_at_unit_threshold, r.power_at_unit_threshold);
            println!(
                "threshold C' (type I = {target_alpha}): C' = {:.6}, power = {:.6}",
                r.c_prime.unwrap(),
                r.power_at_c_prime.unwrap()
            );
        }
        Cmd::Reproduce { target, seed, reps, workers, out } => {
            let rows = in_pool(workers_from(workers), || reproduce(target.into(), seed, reps))?;
            emit(&rows, out.as_deref())?;
        }
    }
    Ok(())
}
