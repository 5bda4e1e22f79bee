//! Fitting procedures for the g-and-h family.
//!
//! Each procedure implements [`Estimator`] and is looked up by name in an
//! [`EstimatorRegistry`], so callers (CLI, simulation harness) pick one at
//! runtime.

mod lv;
mod male;
mod nmle;
mod qls;
mod quantiles;

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::approx_lik::GridConfig;
use crate::error::{GhError, Result};
use crate::ghdist::{GhParams, DEFAULT_ROOT_TOL};
use crate::optim::{OptimizerOptions, Termination};
use crate::sample::Sample;

pub use lv::fit_lv;
pub use male::{fit_male, prepare_start};
pub use nmle::{exact_information, fit_nmle};
pub use qls::fit_qls;
pub use quantiles::{sample_quantile, QuantileSet};

/// Smallest admissible scale in the optimizer box.
pub const OMEGA_FLOOR: f64 = 1e-8;

/// Fewest observations any likelihood-based fit accepts.
pub const MIN_SAMPLE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lv,
    Qls,
    Male,
    Nmle,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lv, Method::Qls, Method::Male, Method::Nmle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lv => "lv",
            Method::Qls => "qls",
            Method::Male => "male",
            Method::Nmle => "nmle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = GhError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| GhError::UnknownMethod(s.to_string()))
    }
}

/// Outcome of one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub theta_hat: GhParams,
    /// Log-likelihood for MALE/NMLE, loss for LV/QLS.
    pub objective: f64,
    pub method: Method,
    pub converged: bool,
    pub iterations: usize,
    pub termination: Option<Termination>,
    /// Total observed information `I_n(θ̂)`.
    pub info_matrix: Option<[[f64; 4]; 4]>,
    /// `sqrt(diag(I_n⁻¹))`.
    pub std_errors: Option<[f64; 4]>,
    pub h_at_boundary: bool,
    /// Knot layout actually used (MALE only; may differ from the request after repair).
    pub grid: Option<GridConfig>,
}

impl FitResult {
    pub(crate) fn new(method: Method, theta_hat: GhParams, objective: f64) -> Self {
        Self {
            theta_hat,
            objective,
            method,
            converged: true,
            iterations: 0,
            termination: None,
            info_matrix: None,
            std_errors: None,
            h_at_boundary: theta_hat.h == 0.0,
            grid: None,
        }
    }

    pub(crate) fn attach_information(&mut self, info: &Matrix4<f64>) {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = info[(i, j)];
            }
        }
        self.info_matrix = Some(rows);
        self.std_errors = std_errors(info);
    }

    pub fn information(&self) -> Option<Matrix4<f64>> {
        self.info_matrix
            .map(|rows| Matrix4::from_fn(|i, j| rows[i][j]))
    }
}

/// `sqrt(diag(I⁻¹))` when `I` is positive definite.
pub fn std_errors(info: &Matrix4<f64>) -> Option<[f64; 4]> {
    let chol = info.cholesky()?;
    let inv = chol.inverse();
    let mut out = [0.0; 4];
    for (i, v) in out.iter_mut().enumerate() {
        let d = inv[(i, i)];
        if !(d > 0.0 && d.is_finite()) {
            return None;
        }
        *v = d.sqrt();
    }
    Some(out)
}

/// Knobs shared by all estimators; each one reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Knot layout for MALE; `None` uses `b = 10`, `K = max(1000, n)`.
    pub grid: Option<GridConfig>,
    /// Starting point for the iterative fits; `None` uses the LV fit.
    pub init: Option<GhParams>,
    /// Coordinates held at a given value, in `(ξ, ω, g, h)` order.
    pub fixed: [Option<f64>; 4],
    pub optimizer: OptimizerOptions,
    /// Root-finder tolerance for the exact likelihood.
    pub root_tol: f64,
    pub lv_probs: QuantileSet,
    pub qls_probs: QuantileSet,
    /// Compute the observed information and standard errors.
    pub information: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            grid: None,
            init: None,
            fixed: [None; 4],
            optimizer: OptimizerOptions::default(),
            root_tol: DEFAULT_ROOT_TOL,
            lv_probs: QuantileSet::letter_values(),
            qls_probs: QuantileSet::least_squares_default(),
            information: true,
        }
    }
}

impl FitOptions {
    pub fn with_fixed(mut self, index: usize, value: f64) -> Self {
        self.fixed[index] = Some(value);
        self
    }

    pub(crate) fn frozen(&self) -> [bool; 4] {
        self.fixed.map(|f| f.is_some())
    }

    pub(crate) fn apply_fixed(&self, p: GhParams) -> GhParams {
        let mut a = p.to_array();
        for (v, f) in a.iter_mut().zip(&self.fixed) {
            if let Some(f) = f {
                *v = *f;
            }
        }
        GhParams::from_array(a)
    }

    pub(crate) fn is_restricted(&self) -> bool {
        self.fixed.iter().any(Option::is_some)
    }
}

pub(crate) fn check_size(s: &Sample) -> Result<()> {
    if s.len() < MIN_SAMPLE {
        return Err(GhError::InsufficientSample {
            needed: MIN_SAMPLE,
            got: s.len(),
        });
    }
    Ok(())
}

/// A fitting procedure selectable by name.
pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn method(&self) -> Method;
    fn fit(&self, s: &Sample, opts: &FitOptions) -> Result<FitResult>;
}

pub struct LetterValues;
pub struct QuantileLeastSquares;
pub struct ApproxMaxLikelihood;
pub struct NumericalMaxLikelihood;

impl Estimator for LetterValues {
    fn name(&self) -> &'static str {
        "lv"
    }
    fn method(&self) -> Method {
        Method::Lv
    }
    fn fit(&self, s: &Sample, opts: &FitOptions) -> Result<FitResult> {
        fit_lv(s, &opts.lv_probs)
    }
}

impl Estimator for QuantileLeastSquares {
    fn name(&self) -> &'static str {
        "qls"
    }
    fn method(&self) -> Method {
        Method::Qls
    }
    fn fit(&self, s: &Sample, opts: &FitOptions) -> Result<FitResult> {
        let init = match opts.init {
            Some(p) => p,
            None => fit_lv(s, &opts.lv_probs)?.theta_hat,
        };
        fit_qls(s, &opts.qls_probs, init, &opts.optimizer)
    }
}

impl Estimator for ApproxMaxLikelihood {
    fn name(&self) -> &'static str {
        "male"
    }
    fn method(&self) -> Method {
        Method::Male
    }
    fn fit(&self, s: &Sample, opts: &FitOptions) -> Result<FitResult> {
        fit_male(s, opts)
    }
}

impl Estimator for NumericalMaxLikelihood {
    fn name(&self) -> &'static str {
        "nmle"
    }
    fn method(&self) -> Method {
        Method::Nmle
    }
    fn fit(&self, s: &Sample, opts: &FitOptions) -> Result<FitResult> {
        fit_nmle(s, opts)
    }
}

/// Name-keyed collection of estimators.
pub struct EstimatorRegistry {
    entries: Vec<Box<dyn Estimator>>,
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(LetterValues));
        r.register(Box::new(QuantileLeastSquares));
        r.register(Box::new(ApproxMaxLikelihood));
        r.register(Box::new(NumericalMaxLikelihood));
        r
    }
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// Adds an estimator, replacing any existing one with the same name.
    pub fn register(&mut self, est: Box<dyn Estimator>) {
        self.entries.retain(|e| e.name() != est.name());
        self.entries.push(est);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Estimator> {
        let lower = name.to_ascii_lowercase();
        self.entries
            .iter()
            .find(|e| e.name() == lower)
            .map(|e| e.as_ref())
            .ok_or_else(|| GhError::UnknownMethod(name.to_string()))
    }

    pub fn for_method(&self, m: Method) -> Result<&dyn Estimator> {
        self.get(m.name())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}
