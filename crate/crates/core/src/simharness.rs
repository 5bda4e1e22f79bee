//! Seeded Monte Carlo studies: parameter recovery, test size and power,
//! fitting time, and the tail-weight boundary rate.
//!
//! Replicate `r` at sample size `n` draws its data from a seed mixed from
//! `(seed, study tag, design values, n, r)`, so every report is a pure
//! function of its configuration whatever the thread count. Replicate
//! failures are counted, not fatal.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx_lik::{observed_information, GridConfig};
use crate::error::{GhError, Result};
use crate::estimators::{fit_male, fit_nmle, EstimatorRegistry, FitOptions, Method};
use crate::ghdist::{self, GhParams, DEFAULT_ROOT_TOL};
use crate::inference::{alrt, s_n_statistic, NullSpec};
use crate::normal::mix_seed;

pub const SCHEMA_VERSION: u32 = 1;

/// Size of the reference sample behind the theoretical standard errors.
pub const DEFAULT_REFERENCE_SIZE: usize = 100_000;

const TAG_RECOVERY: u64 = 1;
const TAG_POWER: u64 = 2;
const TAG_TIMING: u64 = 3;
const TAG_BOUNDARY: u64 = 4;
const TAG_REFERENCE: u64 = 5;

const PARAMETER_NAMES: [&str; 4] = ["xi", "omega", "g", "h"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub theta0: GhParams,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Knot layout; `None` uses the per-sample-size default.
    pub grid: Option<GridConfig>,
    pub reference_size: usize,
    pub parallel: bool,
}

impl StudyConfig {
    pub fn new(theta0: GhParams, sample_sizes: Vec<usize>, replicates: usize, seed: u64) -> Self {
        Self {
            theta0,
            sample_sizes,
            replicates,
            seed,
            methods: vec![Method::Lv, Method::Qls, Method::Male],
            grid: None,
            reference_size: DEFAULT_REFERENCE_SIZE,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.theta0.validate()?;
        if self.replicates == 0 {
            return Err(GhError::Precondition(
                "replicates must be at least 1".into(),
            ));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n < 10) {
            return Err(GhError::Precondition(
                "sample sizes must be at least 10".into(),
            ));
        }
        Ok(())
    }

    fn fit_options(&self) -> FitOptions {
        FitOptions {
            grid: self.grid,
            information: false,
            ..Default::default()
        }
    }

    fn run<T: Send>(&self, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        if self.parallel {
            (0..self.replicates).into_par_iter().map(f).collect()
        } else {
            (0..self.replicates).map(f).collect()
        }
    }
}

pub fn replicate_seed(parts: &[u64]) -> u64 {
    mix_seed(parts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryCell {
    pub n: usize,
    pub method: Method,
    pub parameter: String,
    pub true_value: f64,
    pub mean_estimate: Option<f64>,
    pub empirical_se: Option<f64>,
    pub theoretical_se: Option<f64>,
    pub converged: usize,
    pub failures: usize,
    /// Fewer than two usable replicates; the standard error is undefined.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCell {
    pub null: NullSpec,
    pub d: f64,
    pub n: usize,
    pub g: f64,
    pub h: f64,
    pub level: f64,
    pub rejection_rate: Option<f64>,
    pub rejections: usize,
    pub valid: usize,
    pub failures: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingCell {
    pub n: usize,
    pub valid: usize,
    pub failures: usize,
    pub mean_male_seconds: Option<f64>,
    pub mean_nmle_seconds: Option<f64>,
    /// Mean of per-dataset ratios, not the ratio of mean times.
    pub mean_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCell {
    pub g0: f64,
    pub n: usize,
    /// Share of fits with the tail estimate exactly zero.
    pub p0: Option<f64>,
    /// Share of replicates with a negative tail score at the truth.
    pub c0: Option<f64>,
    pub difference: Option<f64>,
    pub valid: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "study", content = "cells", rename_all = "snake_case")]
pub enum StudyCells {
    Recovery(Vec<RecoveryCell>),
    Power(Vec<PowerCell>),
    Timing(Vec<TimingCell>),
    Boundary(Vec<BoundaryCell>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub schema_version: u32,
    pub config: StudyConfig,
    /// How replicate seeds are derived from `config.seed`.
    pub seed_rule: String,
    #[serde(flatten)]
    pub cells: StudyCells,
}

impl StudyReport {
    fn new(config: &StudyConfig, rule: &str, cells: StudyCells) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            seed_rule: rule.to_string(),
            cells,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    /// One row per cell.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        match &self.cells {
            StudyCells::Recovery(c) => c.iter().try_for_each(|r| out.serialize(r))?,
            StudyCells::Power(c) => c.iter().try_for_each(|r| out.serialize(r))?,
            StudyCells::Timing(c) => c.iter().try_for_each(|r| out.serialize(r))?,
            StudyCells::Boundary(c) => c.iter().try_for_each(|r| out.serialize(r))?,
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| GhError::Io(e.to_string()))
    }
}

fn mean_and_sd(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    if v.len() < 2 {
        return (Some(m), None);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    (Some(m), Some(var.sqrt()))
}

fn fraction(count: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| count as f64 / total as f64)
}

/// `sqrt(diag(I⁻¹)/n)` for each requested `n`, with the per-observation
/// information `I` estimated by the observed information of one large
/// sample drawn at `θ₀`.
pub fn theoretical_std_errors(
    theta0: &GhParams,
    sizes: &[usize],
    reference_size: usize,
    seed: u64,
) -> Result<Vec<[f64; 4]>> {
    let s = ghdist::sample(
        reference_size,
        theta0,
        replicate_seed(&[seed, TAG_REFERENCE]),
    )?;
    let info = observed_information(&s, theta0, &GridConfig::for_sample_size(reference_size))?;
    let per_obs = info / reference_size as f64;
    let cov = per_obs
        .cholesky()
        .ok_or(GhError::SingularInformation)?
        .inverse();
    Ok(sizes
        .iter()
        .map(|&n| std::array::from_fn(|j| (cov[(j, j)] / n as f64).sqrt()))
        .collect())
}

/// Empirical standard errors of each estimator across replicates, next to
/// the large-sample standard error of MALE.
pub fn run_recovery_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let registry = EstimatorRegistry::default();
    let estimators = cfg
        .methods
        .iter()
        .map(|&m| registry.for_method(m))
        .collect::<Result<Vec<_>>>()?;
    let theory =
        theoretical_std_errors(&cfg.theta0, &cfg.sample_sizes, cfg.reference_size, cfg.seed).ok();
    let opts = cfg.fit_options();
    let truth = cfg.theta0.to_array();

    let mut cells = Vec::new();
    for (ni, &n) in cfg.sample_sizes.iter().enumerate() {
        // per replicate, per method: the estimate if the fit converged
        let runs: Vec<Vec<Option<[f64; 4]>>> = cfg.run(|r| {
            let seed = replicate_seed(&[cfg.seed, TAG_RECOVERY, n as u64, r as u64]);
            let Ok(s) = ghdist::sample(n, &cfg.theta0, seed) else {
                return vec![None; estimators.len()];
            };
            estimators
                .iter()
                .map(|e| match e.fit(&s, &opts) {
                    Ok(f) if f.converged => Some(f.theta_hat.to_array()),
                    _ => None,
                })
                .collect()
        });
        for (mi, &method) in cfg.methods.iter().enumerate() {
            let ok: Vec<[f64; 4]> = runs.iter().filter_map(|row| row[mi]).collect();
            for j in 0..4 {
                let vals: Vec<f64> = ok.iter().map(|t| t[j]).collect();
                let (mean, sd) = mean_and_sd(&vals);
                cells.push(RecoveryCell {
                    n,
                    method,
                    parameter: PARAMETER_NAMES[j].to_string(),
                    true_value: truth[j],
                    mean_estimate: mean,
                    empirical_se: sd,
                    theoretical_se: theory.as_ref().map(|t| t[ni][j]),
                    converged: ok.len(),
                    failures: cfg.replicates - ok.len(),
                    degenerate: ok.len() < 2,
                });
            }
        }
    }
    Ok(StudyReport::new(
        cfg,
        "splitmix64(seed, 1, n, replicate)",
        StudyCells::Recovery(cells),
    ))
}

/// Parameters of the local alternative at distance `d` for sample size `n`.
///
/// Location and scale come from `base`; the shape coordinate not under test
/// keeps its value from `base`.
pub fn local_alternative(null: NullSpec, d: f64, n: usize, base: &GhParams) -> GhParams {
    let r = (n as f64).sqrt();
    let (g, h) = match null {
        NullSpec::GZero => (d / r, base.h),
        NullSpec::HZero => (base.g, d / r),
        NullSpec::GAndHZero => (3.0 * d / r, d / r),
    };
    GhParams::from_array([base.xi, base.omega, g, h])
}

/// Rejection rates of the approximated likelihood ratio test under local
/// alternatives; `d = 0` gives the empirical size.
pub fn run_power_study(
    null: NullSpec,
    d_values: &[f64],
    cfg: &StudyConfig,
    levels: &[f64],
) -> Result<StudyReport> {
    cfg.validate()?;
    if levels.is_empty() || levels.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(GhError::Precondition("levels must lie in (0, 1)".into()));
    }
    let reference = null.reference();
    let criticals = levels
        .iter()
        .map(|&l| reference.quantile(1.0 - l))
        .collect::<Result<Vec<_>>>()?;
    let opts = cfg.fit_options();
    let null_tag = NullSpec::ALL.iter().position(|&x| x == null).unwrap_or(0) as u64;

    let mut cells = Vec::new();
    for &d in d_values {
        for &n in &cfg.sample_sizes {
            let theta = local_alternative(null, d, n, &cfg.theta0);
            theta.validate()?;
            // (statistic, flagged) per replicate
            let runs: Vec<Option<(f64, bool)>> = cfg.run(|r| {
                let seed = replicate_seed(&[
                    cfg.seed,
                    TAG_POWER,
                    null_tag,
                    d.to_bits(),
                    n as u64,
                    r as u64,
                ]);
                let s = ghdist::sample(n, &theta, seed).ok()?;
                let t = alrt(&s, null, &opts, levels[0]).ok()?;
                Some((t.d_n, t.flagged))
            });
            let ok: Vec<(f64, bool)> = runs.into_iter().flatten().collect();
            let flagged = ok.iter().filter(|x| x.1).count();
            for (&level, &crit) in levels.iter().zip(&criticals) {
                let rejections = ok.iter().filter(|x| x.0 > crit).count();
                cells.push(PowerCell {
                    null,
                    d,
                    n,
                    g: theta.g,
                    h: theta.h,
                    level,
                    rejection_rate: fraction(rejections, ok.len()),
                    rejections,
                    valid: ok.len(),
                    failures: cfg.replicates - ok.len(),
                    flagged,
                });
            }
        }
    }
    Ok(StudyReport::new(
        cfg,
        "splitmix64(seed, 2, null index, d bits, n, replicate)",
        StudyCells::Power(cells),
    ))
}

/// Wall-clock time of MALE and NMLE on identical datasets. Runs
/// sequentially whatever `cfg.parallel` says so timings do not compete.
pub fn run_timing_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let opts = cfg.fit_options();
    let mut cells = Vec::new();
    for &n in &cfg.sample_sizes {
        let mut male_t = Vec::new();
        let mut nmle_t = Vec::new();
        let mut ratios = Vec::new();
        for r in 0..cfg.replicates {
            let seed = replicate_seed(&[cfg.seed, TAG_TIMING, n as u64, r as u64]);
            let Ok(s) = ghdist::sample(n, &cfg.theta0, seed) else {
                continue;
            };
            let start = Instant::now();
            let male = fit_male(&s, &opts);
            let tm = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let nmle = fit_nmle(&s, &opts);
            let te = start.elapsed().as_secs_f64();
            if male.is_ok() && nmle.is_ok() && tm > 0.0 {
                male_t.push(tm);
                nmle_t.push(te);
                ratios.push(te / tm);
            }
        }
        cells.push(TimingCell {
            n,
            valid: ratios.len(),
            failures: cfg.replicates - ratios.len(),
            mean_male_seconds: mean_and_sd(&male_t).0,
            mean_nmle_seconds: mean_and_sd(&nmle_t).0,
            mean_ratio: mean_and_sd(&ratios).0,
        });
    }
    Ok(StudyReport::new(
        cfg,
        "splitmix64(seed, 3, n, replicate)",
        StudyCells::Timing(cells),
    ))
}

/// How often the tail estimate lands exactly on zero when the truth is
/// `h = 0`, next to how often the tail score at the truth is negative.
pub fn run_boundary_study(g0_values: &[f64], cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    if cfg.theta0.h != 0.0 {
        return Err(GhError::Precondition(format!(
            "boundary study needs h = 0 in theta0, got {}",
            cfg.theta0.h
        )));
    }
    let opts = cfg.fit_options();
    let mut cells = Vec::new();
    for &g0 in g0_values {
        let theta = GhParams::new(cfg.theta0.xi, cfg.theta0.omega, g0, 0.0)?;
        for &n in &cfg.sample_sizes {
            // (tail estimate is zero, score is negative)
            let runs: Vec<Option<(bool, bool)>> = cfg.run(|r| {
                let seed =
                    replicate_seed(&[cfg.seed, TAG_BOUNDARY, g0.to_bits(), n as u64, r as u64]);
                let s = ghdist::sample(n, &theta, seed).ok()?;
                let fit = fit_male(&s, &opts).ok().filter(|f| f.converged)?;
                let score = s_n_statistic(&s, &theta, DEFAULT_ROOT_TOL).ok()?;
                Some((fit.theta_hat.h == 0.0, score < 0.0))
            });
            let ok: Vec<(bool, bool)> = runs.into_iter().flatten().collect();
            let p0 = fraction(ok.iter().filter(|x| x.0).count(), ok.len());
            let c0 = fraction(ok.iter().filter(|x| x.1).count(), ok.len());
            cells.push(BoundaryCell {
                g0,
                n,
                p0,
                c0,
                difference: p0.zip(c0).map(|(a, b)| a - b),
                valid: ok.len(),
                failures: cfg.replicates - ok.len(),
            });
        }
    }
    Ok(StudyReport::new(
        cfg,
        "splitmix64(seed, 4, g0 bits, n, replicate)",
        StudyCells::Boundary(cells),
    ))
}
