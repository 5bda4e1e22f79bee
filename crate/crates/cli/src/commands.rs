use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use serde::Serialize;
use tukey_gh::approx_lik::{approx_loglik, GridConfig};
use tukey_gh::estimators::{EstimatorRegistry, FitOptions, FitResult, Method};
use tukey_gh::ghdist::{self, GhParams};
use tukey_gh::inference::{alrt, AlrtResult, NullSpec};
use tukey_gh::simharness::{
    run_boundary_study, run_power_study, run_recovery_study, run_timing_study, StudyConfig,
    StudyReport, SCHEMA_VERSION,
};
use tukey_gh::{GhError, Sample};

use crate::ingest::{read_column, ColumnSelector};
use crate::{
    Command, DensityArgs, FitArgs, Format, GridArgs, InputArgs, SampleArgs, SimulateArgs, Study,
    TestArgs, ThetaArgs, SEED_ENV,
};

const DENSITY_ROOT_TOL: f64 = 1e-13;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }

    pub fn numerical(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<GhError> for Failure {
    fn from(e: GhError) -> Self {
        match e {
            GhError::Io(_)
            | GhError::InvalidParams(_)
            | GhError::Precondition(_)
            | GhError::UnknownMethod(_) => Self::usage(e),
            _ => Self::numerical(e),
        }
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Fit(a) => cmd_fit(a),
        Command::Test(a) => cmd_test(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Density(a) => cmd_density(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

/// `GH_SEED`, when set, wins over the flag.
fn resolve_seed(flag: u64) -> CmdResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(anyhow!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        _ => Ok(flag),
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    let res = match path {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| anyhow!("cannot write {}: {e}", p.display()))
        }
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(Into::into),
    };
    res.map_err(Failure::usage)
}

fn theta(t: &ThetaArgs) -> CmdResult<GhParams> {
    Ok(GhParams::new(t.xi, t.omega, t.g, t.h)?)
}

fn grid(args: &GridArgs, n: usize) -> CmdResult<GridConfig> {
    let knots = args
        .kn
        .unwrap_or_else(|| GridConfig::for_sample_size(n).knots);
    GridConfig::new(args.bn, knots).map_err(Failure::usage)
}

fn load(input: &InputArgs) -> CmdResult<Sample> {
    let column = input.column.as_deref().map(ColumnSelector::parse);
    let values = read_column(&input.input, column.as_ref()).map_err(Failure::usage)?;
    if values.len() < tukey_gh::estimators::MIN_SAMPLE {
        return Err(Failure::numerical(GhError::InsufficientSample {
            needed: tukey_gh::estimators::MIN_SAMPLE,
            got: values.len(),
        }));
    }
    Ok(Sample::new(values)?)
}

fn json_bytes<T: Serialize>(v: &T) -> CmdResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v).map_err(Failure::usage)?;
    out.push(b'\n');
    Ok(out)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> CmdResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(Failure::usage)?;
    }
    w.into_inner().map_err(|e| Failure::usage(anyhow!("{e}")))
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Serialize)]
struct FitReport {
    schema_version: u32,
    command: &'static str,
    input: PathBuf,
    n: usize,
    method: Method,
    theta_hat: GhParams,
    /// Approximated log-likelihood for MALE, LV and QLS; exact for NMLE.
    log_likelihood: Option<f64>,
    objective: f64,
    std_errors: Option<GhParams>,
    h_at_boundary: bool,
    converged: bool,
    iterations: usize,
    termination: Option<String>,
    grid: GridConfig,
}

#[derive(Serialize)]
struct FitRow {
    method: Method,
    n: usize,
    xi: f64,
    omega: f64,
    g: f64,
    h: f64,
    log_likelihood: Option<f64>,
    se_xi: Option<f64>,
    se_omega: Option<f64>,
    se_g: Option<f64>,
    se_h: Option<f64>,
    h_at_boundary: bool,
    converged: bool,
    iterations: usize,
}

fn fit_loglik(fit: &FitResult, s: &Sample, cfg: &GridConfig) -> Option<f64> {
    match fit.method {
        Method::Male | Method::Nmle => finite(fit.objective),
        Method::Lv | Method::Qls => finite(approx_loglik(s, &fit.theta_hat, cfg)),
    }
}

fn cmd_fit(a: FitArgs) -> CmdResult {
    let s = load(&a.input)?;
    let cfg = grid(&a.grid, s.len())?;
    let opts = FitOptions {
        grid: Some(cfg),
        ..Default::default()
    };
    let registry = EstimatorRegistry::default();
    let fit = registry.for_method(a.method)?.fit(&s, &opts)?;
    let used = fit.grid.unwrap_or(cfg);
    let loglik = fit_loglik(&fit, &s, &used);
    let se = fit.std_errors.map(GhParams::from_array);

    let bytes = match a.output.format {
        Format::Json => json_bytes(&FitReport {
            schema_version: SCHEMA_VERSION,
            command: "fit",
            input: a.input.input.clone(),
            n: s.len(),
            method: fit.method,
            theta_hat: fit.theta_hat,
            log_likelihood: loglik,
            objective: fit.objective,
            std_errors: se,
            h_at_boundary: fit.h_at_boundary,
            converged: fit.converged,
            iterations: fit.iterations,
            termination: fit.termination.map(|t| format!("{t:?}")),
            grid: used,
        })?,
        Format::Csv => {
            let t = fit.theta_hat;
            csv_bytes(&[FitRow {
                method: fit.method,
                n: s.len(),
                xi: t.xi,
                omega: t.omega,
                g: t.g,
                h: t.h,
                log_likelihood: loglik,
                se_xi: se.map(|p| p.xi),
                se_omega: se.map(|p| p.omega),
                se_g: se.map(|p| p.g),
                se_h: se.map(|p| p.h),
                h_at_boundary: fit.h_at_boundary,
                converged: fit.converged,
                iterations: fit.iterations,
            }])?
        }
    };
    emit(a.output.output.as_deref(), &bytes)?;
    if !fit.converged {
        return Err(Failure::numerical(anyhow!(
            "{} fit did not converge after {} iterations",
            fit.method,
            fit.iterations
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct FitSummary {
    theta: GhParams,
    log_likelihood: Option<f64>,
    converged: bool,
}

impl From<&FitResult> for FitSummary {
    fn from(f: &FitResult) -> Self {
        Self {
            theta: f.theta_hat,
            log_likelihood: finite(f.objective),
            converged: f.converged,
        }
    }
}

#[derive(Serialize)]
struct TestReport {
    schema_version: u32,
    command: &'static str,
    input: PathBuf,
    n: usize,
    null: NullSpec,
    d_n: f64,
    reference_distribution: String,
    level: f64,
    critical_value: f64,
    p_value: f64,
    decision: &'static str,
    clamped: f64,
    flagged: bool,
    refit: bool,
    restricted: FitSummary,
    full: FitSummary,
}

#[derive(Serialize)]
struct TestRow {
    null: NullSpec,
    n: usize,
    d_n: f64,
    reference_distribution: String,
    level: f64,
    critical_value: f64,
    p_value: f64,
    decision: &'static str,
    flagged: bool,
}

fn cmd_test(a: TestArgs) -> CmdResult {
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(Failure::usage(anyhow!(
            "level must lie in (0, 1), got {}",
            a.level
        )));
    }
    let s = load(&a.input)?;
    let cfg = grid(&a.grid, s.len())?;
    let opts = FitOptions {
        grid: Some(cfg),
        information: false,
        ..Default::default()
    };
    let r: AlrtResult = alrt(&s, a.null, &opts, a.level)?;
    let bytes = match a.output.format {
        Format::Json => json_bytes(&TestReport {
            schema_version: SCHEMA_VERSION,
            command: "test",
            input: a.input.input.clone(),
            n: s.len(),
            null: r.null,
            d_n: r.d_n,
            reference_distribution: r.ref_dist.label(),
            level: r.level,
            critical_value: r.critical_value,
            p_value: r.p_value,
            decision: r.decision(),
            clamped: r.clamped,
            flagged: r.flagged,
            refit: r.refit,
            restricted: (&r.restricted_fit).into(),
            full: (&r.full_fit).into(),
        })?,
        Format::Csv => csv_bytes(&[TestRow {
            null: r.null,
            n: s.len(),
            d_n: r.d_n,
            reference_distribution: r.ref_dist.label(),
            level: r.level,
            critical_value: r.critical_value,
            p_value: r.p_value,
            decision: r.decision(),
            flagged: r.flagged,
        }])?,
    };
    emit(a.output.output.as_deref(), &bytes)
}

fn cmd_sample(a: SampleArgs) -> CmdResult {
    let p = theta(&a.theta)?;
    if a.n == 0 {
        return Err(Failure::usage(anyhow!("n must be at least 1")));
    }
    let seed = resolve_seed(a.seed)?;
    let mut text = String::with_capacity(a.n * 20);
    for v in ghdist::sample_values(a.n, &p, seed) {
        let _ = writeln!(text, "{v}");
    }
    emit(a.output.as_deref(), text.as_bytes())
}

fn cmd_density(a: DensityArgs) -> CmdResult {
    let p = theta(&a.theta)?;
    if a.points < 2 {
        return Err(Failure::usage(anyhow!("need at least 2 grid points")));
    }
    let lo = match a.from {
        Some(v) => v,
        None => ghdist::quantile(1e-5, &p)?,
    };
    let hi = match a.to {
        Some(v) => v,
        None => ghdist::quantile(1.0 - 1e-5, &p)?,
    };
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Failure::usage(anyhow!("grid range [{lo}, {hi}] is empty")));
    }
    let mut text = String::from("y,density,log_density,cdf\n");
    let step = (hi - lo) / (a.points - 1) as f64;
    for i in 0..a.points {
        let y = if i + 1 == a.points {
            hi
        } else {
            lo + step * i as f64
        };
        let ld = ghdist::log_density_exact(y, &p, DENSITY_ROOT_TOL)?;
        let c = ghdist::cdf(y, &p, DENSITY_ROOT_TOL)?;
        let _ = writeln!(text, "{y},{},{ld},{c}", ld.exp());
    }
    emit(a.output.as_deref(), text.as_bytes())
}

fn study_theta(a: &SimulateArgs) -> CmdResult<GhParams> {
    let default_h = if a.study == Study::Boundary { 0.0 } else { 0.2 };
    let default_g = if a.study == Study::Boundary { 0.0 } else { 0.5 };
    Ok(GhParams::new(
        a.xi.unwrap_or(3.0),
        a.omega.unwrap_or(3.0),
        a.g.unwrap_or(default_g),
        a.h.unwrap_or(default_h),
    )?)
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let theta0 = study_theta(&a)?;
    let sizes = a.sizes.clone().unwrap_or_else(|| match a.study {
        Study::Recovery => vec![200, 500, 1000],
        Study::Power => vec![100, 200, 400],
        Study::Timing => vec![2000],
        Study::Boundary => vec![200],
    });
    let replicates = a.replicates.unwrap_or(match a.study {
        Study::Recovery => 200,
        Study::Power => 500,
        Study::Timing => 10,
        Study::Boundary => 300,
    });
    let mut cfg = StudyConfig::new(theta0, sizes, replicates, resolve_seed(a.seed)?);
    if let Some(m) = &a.methods {
        cfg.methods = m.clone();
    }
    if let Some(r) = a.reference_size {
        cfg.reference_size = r;
    }
    if a.grid.kn.is_some() || a.grid.bn != 10.0 {
        let largest = cfg.sample_sizes.iter().copied().max().unwrap_or(0);
        cfg.grid = Some(grid(&a.grid, largest)?);
    }

    let report: StudyReport = match a.study {
        Study::Recovery => run_recovery_study(&cfg)?,
        Study::Power => {
            let d = a.d.clone().unwrap_or_else(|| vec![0.0, 1.0, 2.0, 3.0]);
            run_power_study(a.null, &d, &cfg, &a.level)?
        }
        Study::Timing => run_timing_study(&cfg)?,
        Study::Boundary => {
            let g0 = a.g0.clone().unwrap_or_else(|| vec![-0.5, 0.0, 0.5]);
            run_boundary_study(&g0, &cfg)?
        }
    };

    let bytes = match a.output.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            // configuration echo as comment lines above the table
            let config = serde_json::to_string(&report.config).map_err(Failure::usage)?;
            let mut out = format!(
                "# schema_version={}\n# seed_rule={}\n# config={config}\n",
                report.schema_version, report.seed_rule
            )
            .into_bytes();
            out.extend(report.to_csv()?.into_bytes());
            out
        }
    };
    emit(a.output.output.as_deref(), &bytes)
}
