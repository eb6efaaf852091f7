//! Experiment configuration and the registry of reproduction targets.

use crate::output::ResultRow;
use anyhow::{bail, Context, Result};
use std::path::PathBuf;
use std::time::{Duration, Instant};
use vpv_core::baseline::{shapiro_wilk, wilcoxon_signed_rank};
use vpv_core::confidence::solve_exp_system;
use vpv_core::epv::{
    epv_gof, gof_study, normal_lr_analysis, power_minus_alpha_sweep, two_sample_study,
    AlternativeDesign, NormalMeanLr, SearchGrid,
};
use vpv_core::ks::{NullFamily, Sample};
use vpv_core::vpv::IntervalKind;
use vpv_core::{DistFamily, RandomStream};

pub const DEFAULT_SEED: u64 = 20190501;

/// Declarative description of one Monte Carlo study.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub id: String,
    pub family: NullFamily,
    pub design: AlternativeDesign,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub reps: u64,
    pub seed: u64,
    pub workers: usize,
    pub interval: IntervalKind,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            id: "epv".into(),
            family: NullFamily::NormalScaleZeroMean,
            design: AlternativeDesign::A,
            n: 7,
            m: 15,
            alpha: 0.05,
            beta: 0.0005,
            reps: 25_000,
            seed: DEFAULT_SEED,
            workers: 0,
            interval: IntervalKind::LikelihoodRatio,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v < 1.0) {
                bail!("config field {name} must lie in (0,1), got {v}");
            }
        }
        if self.reps < 1000 {
            bail!("config field reps must be >= 1000, got {}", self.reps);
        }
        if self.n == 0 {
            bail!("config field n must be >= 1");
        }
        Ok(())
    }

    /// Merge `key=value` lines (flat format, `#` comments) into the config.
    pub fn apply_kv_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key=value", lineno + 1))?;
            self.apply_kv(key.trim(), value.trim())
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "id" => self.id = value.to_string(),
            "family" => self.family = parse_family(value)?,
            "design" => self.design = parse_design(value)?,
            "n" => self.n = value.parse().context("n")?,
            "m" => self.m = value.parse().context("m")?,
            "alpha" => self.alpha = value.parse().context("alpha")?,
            "beta" => self.beta = value.parse().context("beta")?,
            "reps" => self.reps = value.parse().context("reps")?,
            "seed" => self.seed = value.parse().context("seed")?,
            "workers" => self.workers = value.parse().context("workers")?,
            "interval" => self.interval = parse_interval(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => bail!("unknown config key `{other}`"),
        }
        Ok(())
    }
}

pub fn parse_family(s: &str) -> Result<NullFamily> {
    Ok(match s {
        "exp-rate" => NullFamily::ExpRate,
        "normal-mean" => NullFamily::NormalMeanUnitVar,
        "normal-scale" => NullFamily::NormalScaleZeroMean,
        other => bail!("unknown family `{other}` (expected exp-rate|normal-mean|normal-scale)"),
    })
}

pub fn parse_design(s: &str) -> Result<AlternativeDesign> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "a" => AlternativeDesign::A,
        "b" => AlternativeDesign::B,
        "c" => AlternativeDesign::C,
        "d" => AlternativeDesign::D,
        "f" => AlternativeDesign::F,
        "cauchy" => AlternativeDesign::Cauchy,
        other => bail!("unknown design `{other}` (expected a|b|c|d|f|cauchy)"),
    })
}

pub fn parse_interval(s: &str) -> Result<IntervalKind> {
    Ok(match s {
        "lr" => IntervalKind::LikelihoodRatio,
        "chisq" => IntervalKind::ChiSquareSimple,
        other => bail!("unknown interval `{other}` (expected lr|chisq)"),
    })
}

#[allow(clippy::too_many_arguments)]
fn row(
    experiment: &str,
    cell: &str,
    test: &str,
    estimate: f64,
    std_err: f64,
    reps: u64,
    seed: u64,
    wall: Duration,
) -> ResultRow {
    ResultRow {
        experiment: experiment.to_string(),
        cell: cell.to_string(),
        test: test.to_string(),
        estimate,
        std_err,
        reps,
        seed,
        wall_time: wall,
    }
}

/// Run the `epv` experiment described by a config.
pub fn run_epv_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let stream = RandomStream::new(cfg.seed).derive(&cfg.id);
    let start = Instant::now();
    let (s, c) = epv_gof(cfg.family, &cfg.design, cfg.n, cfg.beta, cfg.reps, stream)?;
    let wall = start.elapsed();
    let cell = format!("design={} n={}", cfg.design.label(), cfg.n);
    Ok(vec![
        row(&cfg.id, &cell, "epv_s", s.value, s.std_err, s.reps, cfg.seed, wall),
        row(&cfg.id, &cell, "epv_c", c.value, c.std_err, c.reps, cfg.seed, wall),
    ])
}

/// A registered reproduction battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table1,
    Table2,
    FigA1,
    Sec221,
    Sec321,
    Youden,
}

impl Target {
    pub fn default_reps(&self) -> u64 {
        match self {
            Target::Table1 | Target::Table2 => 25_000,
            Target::Sec221 => 150_000,
            Target::Sec321 => 100_000,
            Target::FigA1 | Target::Youden => 0,
        }
    }
}

/// Run a reproduction target with the documented defaults.
pub fn reproduce(target: Target, seed: u64, reps_override: Option<u64>) -> Result<Vec<ResultRow>> {
    let reps = reps_override.unwrap_or_else(|| target.default_reps());
    match target {
        Target::Table1 => table1(seed, reps),
        Target::Table2 => table2(seed, reps),
        Target::FigA1 => fig_a1(seed),
        Target::Sec221 => sec221(seed, reps),
        Target::Sec321 => sec321(seed, reps),
        Target::Youden => youden_report(seed),
    }
}

pub fn table1_cells() -> Vec<(AlternativeDesign, usize)> {
    let mut cells = Vec::new();
    for d in [AlternativeDesign::A, AlternativeDesign::B, AlternativeDesign::C, AlternativeDesign::D] {
        for n in [7usize, 8, 10] {
            cells.push((d.clone(), n));
        }
    }
    cells.push((AlternativeDesign::F, 7));
    cells.push((AlternativeDesign::F, 20));
    cells.push((AlternativeDesign::Cauchy, 50));
    cells
}

fn table1(seed: u64, reps: u64) -> Result<Vec<ResultRow>> {
    let master = RandomStream::new(seed);
    let mut rows = Vec::new();
    for (design, n) in table1_cells() {
        let cell = format!("({}) n={n}", design.label());
        let stream = master.derive(&format!("table1/{cell}"));
        let start = Instant::now();
        let study = gof_study(
            NullFamily::NormalScaleZeroMean,
            &design,
            n,
            0.0005,
            0.05,
            reps,
            stream,
        )?;
        let wall = start.elapsed();
        for (test, acc) in [
            ("p_s", &study.power_s),
            ("p_c", &study.power_c),
            ("swt", &study.power_swt),
        ] {
            rows.push(row("table1", &cell, test, acc.mean(), acc.std_err(), reps, seed, wall));
        }
    }
    Ok(rows)
}

fn table2(seed: u64, reps: u64) -> Result<Vec<ResultRow>> {
    let master = RandomStream::new(seed);
    let mut rows = Vec::new();
    for d in [AlternativeDesign::A, AlternativeDesign::B, AlternativeDesign::C, AlternativeDesign::D] {
        for n in [7usize, 8, 10] {
            let cell = format!("({}) n={n}", d.label());
            let stream = master.derive(&format!("table2/{cell}"));
            let start = Instant::now();
            let (s, c) = epv_gof(NullFamily::NormalScaleZeroMean, &d, n, 0.0005, reps, stream)?;
            let wall = start.elapsed();
            rows.push(row("table2", &cell, "epv_s", s.value, s.std_err, reps, seed, wall));
            rows.push(row("table2", &cell, "epv_c", c.value, c.std_err, reps, seed, wall));
        }
    }
    Ok(rows)
}

fn fig_a1(seed: u64) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for k in 1..=99u32 {
        let beta = k as f64 / 100.0;
        let start = Instant::now();
        let r = solve_exp_system(beta)?;
        let wall = start.elapsed();
        let cell = format!("beta={beta:.2}");
        rows.push(row("figA1", &cell, "u0", r.u0, 0.0, 0, seed, wall));
        rows.push(row("figA1", &cell, "u1", r.u1, 0.0, 0, seed, wall));
    }
    Ok(rows)
}

fn sec221(seed: u64, reps: u64) -> Result<Vec<ResultRow>> {
    let master = RandomStream::new(seed);
    let mut rows = Vec::new();
    let scenarios: Vec<(&str, DistFamily, bool, DistFamily)> = vec![
        (
            "power n(0.7,1) vs n(0,1)",
            DistFamily::Normal { mean: 0.7, sd: 1.0 },
            false,
            DistFamily::Normal { mean: 0.0, sd: 1.0 },
        ),
        (
            "type1 n(0,4) vs n(0,1)",
            DistFamily::Normal { mean: 0.0, sd: 2.0 },
            false,
            DistFamily::Normal { mean: 0.0, sd: 1.0 },
        ),
        (
            "type1 1-exp(1) vs n(0,1)",
            DistFamily::Exponential { rate: 1.0 },
            true,
            DistFamily::Normal { mean: 0.0, sd: 1.0 },
        ),
    ];
    for (cell, gx, flip, gy) in scenarios {
        let stream = master.derive(&format!("sec221/{cell}"));
        let start = Instant::now();
        let study = two_sample_study(
            |rng, n| {
                (0..n)
                    .map(|_| {
                        let v = gx.sample_one(rng);
                        if flip {
                            1.0 - v
                        } else {
                            v
                        }
                    })
                    .collect()
            },
            |rng, m| (0..m).map(|_| gy.sample_one(rng)).collect(),
            10,
            15,
            0.005,
            0.05,
            reps,
            stream,
        )?;
        let wall = start.elapsed();
        for (test, acc) in [
            ("p_c_lr", &study.pc_lr),
            ("p_c_chisq", &study.pc_chisq),
            ("student_t", &study.student),
            ("welch_t", &study.welch),
        ] {
            rows.push(row("sec221", cell, test, acc.mean(), acc.std_err(), reps, seed, wall));
        }
    }
    Ok(rows)
}

fn sec321(seed: u64, reps: u64) -> Result<Vec<ResultRow>> {
    let master = RandomStream::new(seed);
    let alphas = [0.3, 0.1, 0.05, 0.01];
    let mut rows = Vec::new();

    let mut push_sweep = |cell: &str, sweep: Vec<vpv_core::epv::SweepRow>, wall: Duration| {
        for r in sweep {
            rows.push(row(
                "sec321",
                cell,
                &format!("alpha={}", r.alpha),
                r.diff,
                r.std_err,
                reps,
                seed,
                wall,
            ));
        }
    };

    for n in [100usize, 150] {
        let cell = format!("shapiro_wilk n={n}");
        let shift = 3.3 / (n as f64).sqrt();
        let stream = master.derive(&format!("sec321/{cell}"));
        let start = Instant::now();
        let sweep = power_minus_alpha_sweep(
            |rng| {
                let base = DistFamily::Normal { mean: 0.0, sd: 1.0 };
                let scale = DistFamily::LogNormal { mu: 0.0, sigma: 1.3 };
                let xs: Vec<f64> = (0..n)
                    .map(|_| base.sample_one(rng) + shift * scale.sample_one(rng))
                    .collect();
                shapiro_wilk(&Sample::new(xs).unwrap()).unwrap().p_value
            },
            &alphas,
            reps,
            stream,
        )?;
        push_sweep(&cell, sweep, start.elapsed());
    }

    {
        let cell = "wilcoxon n=100";
        let stream = master.derive("sec321/wilcoxon n=100");
        let start = Instant::now();
        let sweep = power_minus_alpha_sweep(
            |rng| {
                let base = DistFamily::Normal { mean: 0.33, sd: 1.0 };
                let xs: Vec<f64> = (0..100).map(|_| base.sample_one(rng)).collect();
                wilcoxon_signed_rank(&Sample::new(xs).unwrap(), 0.0).unwrap().p_value
            },
            &alphas,
            reps,
            stream,
        )?;
        push_sweep(cell, sweep, start.elapsed());
    }

    {
        let cell = "wilcoxon logistic n=100";
        let shift = 0.33 * std::f64::consts::PI / 3f64.sqrt();
        let stream = master.derive("sec321/wilcoxon logistic n=100");
        let start = Instant::now();
        let sweep = power_minus_alpha_sweep(
            |rng| {
                let base = DistFamily::Logistic { location: 0.0, scale: 1.0 };
                let xs: Vec<f64> = (0..100).map(|_| base.sample_one(rng) + shift).collect();
                wilcoxon_signed_rank(&Sample::new(xs).unwrap(), 0.0).unwrap().p_value
            },
            &alphas,
            reps,
            stream,
        )?;
        push_sweep(cell, sweep, start.elapsed());
    }

    Ok(rows)
}

fn youden_report(seed: u64) -> Result<Vec<ResultRow>> {
    let start = Instant::now();
    let report = normal_lr_analysis(3.3, Some(0.01))?;
    let model = NormalMeanLr { delta: 0.33, sigma: 1.0, n: 100 };
    let tau = model.tau();
    let grid_result = vpv_core::epv::youden_threshold_analytic(
        |c| model.null_cdf(c),
        |c| {
            if c <= 0.0 {
                0.0
            } else {
                vpv_core::dist::std_normal_cdf(c.ln() / tau + tau / 2.0 - tau)
            }
        },
        &SearchGrid::log(0.1, 10.0, 400),
    );
    let wall = start.elapsed();
    let cell = "tau=3.3";
    Ok(vec![
        row("youden", cell, "type1_at_c1", report.type1_at_unit_threshold, 0.0, 0, seed, wall),
        row("youden", cell, "power_at_c1", report.power_at_unit_threshold, 0.0, 0, seed, wall),
        row("youden", cell, "c_prime", report.c_prime.unwrap(), 0.0, 0, seed, wall),
        row(
            "youden",
            cell,
            "power_at_c_prime",
            report.power_at_c_prime.unwrap(),
            0.0,
            0,
            seed,
            wall,
        ),
        row("youden", cell, "c_star_grid", grid_result.c_star, 0.0, 0, seed, wall),
    ])
}
