//! Likelihood ratio tests built on the approximated likelihood, their
//! mixed chi-square references, the large-sample law of the estimator and
//! the tail-weight score statistic.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};
use crate::estimators::{fit_male, FitOptions, FitResult};
use crate::ghdist::{log_density_exact_grad, GhParams};
use crate::normal::NormalStream;
use crate::sample::Sample;
use crate::special::{chisq_cdf, chisq_sf};

/// Largest negative `D_n` accepted as round-off before the fit is flagged.
pub const CLAMP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullSpec {
    /// `g = 0`, `h` free.
    GZero,
    /// `h = 0`, `g` free.
    HZero,
    /// `g = h = 0`.
    GAndHZero,
}

impl NullSpec {
    pub const ALL: [NullSpec; 3] = [NullSpec::GZero, NullSpec::HZero, NullSpec::GAndHZero];

    /// Coordinates pinned by the null, in `(ξ, ω, g, h)` order.
    pub fn fixed(self) -> [Option<f64>; 4] {
        match self {
            NullSpec::GZero => [None, None, Some(0.0), None],
            NullSpec::HZero => [None, None, None, Some(0.0)],
            NullSpec::GAndHZero => [None, None, Some(0.0), Some(0.0)],
        }
    }

    /// Large-sample law of `D_n` under the null.
    pub fn reference(self) -> MixedChiSq {
        match self {
            NullSpec::GZero => MixedChiSq {
                weight0: 1.0,
                df_a: 1,
                df_b: 1,
            },
            NullSpec::HZero => MixedChiSq {
                weight0: 0.5,
                df_a: 0,
                df_b: 1,
            },
            NullSpec::GAndHZero => MixedChiSq {
                weight0: 0.5,
                df_a: 1,
                df_b: 2,
            },
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            NullSpec::GZero => "g",
            NullSpec::HZero => "h",
            NullSpec::GAndHZero => "gh",
        }
    }
}

impl fmt::Display for NullSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NullSpec::GZero => "g_zero",
            NullSpec::HZero => "h_zero",
            NullSpec::GAndHZero => "g_and_h_zero",
        })
    }
}

impl FromStr for NullSpec {
    type Err = GhError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" | "g_zero" | "g0" => Ok(NullSpec::GZero),
            "h" | "h_zero" | "h0" => Ok(NullSpec::HZero),
            "gh" | "g_and_h_zero" | "gh0" => Ok(NullSpec::GAndHZero),
            _ => Err(GhError::Domain(format!(
                "unknown null '{s}' (expected g, h or gh)"
            ))),
        }
    }
}

/// `weight0·χ²_{df_a} + (1 - weight0)·χ²_{df_b}`; `χ²_0` is a point mass at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedChiSq {
    pub weight0: f64,
    pub df_a: u32,
    pub df_b: u32,
}

impl MixedChiSq {
    pub fn new(weight0: f64, df_a: u32, df_b: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight0) {
            return Err(GhError::Domain(format!(
                "mixture weight {weight0} outside [0, 1]"
            )));
        }
        Ok(Self {
            weight0,
            df_a,
            df_b,
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.weight0 * chisq_cdf(self.df_a, x) + (1.0 - self.weight0) * chisq_cdf(self.df_b, x)
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        self.weight0 * chisq_sf(self.df_a, x) + (1.0 - self.weight0) * chisq_sf(self.df_b, x)
    }

    /// Smallest `x` with `cdf(x) >= prob`, by bisection on a doubled bracket.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(GhError::Domain(format!(
                "probability {prob} outside (0, 1)"
            )));
        }
        if prob <= self.cdf(0.0) {
            return Ok(0.0);
        }
        // compare upper tails to keep precision for prob near one
        let tail = 1.0 - prob;
        let mut hi = 1.0;
        while self.sf(hi) > tail {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(GhError::Domain("quantile bracket overflow".into()));
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.sf(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(hi)
    }

    pub fn label(&self) -> String {
        if self.weight0 == 1.0 || self.df_a == self.df_b {
            format!("chi2_{}", self.df_a)
        } else {
            format!(
                "{}*chi2_{}+{}*chi2_{}",
                self.weight0,
                self.df_a,
                1.0 - self.weight0,
                self.df_b
            )
        }
    }
}

pub fn mixed_chisq_quantile(d: &MixedChiSq, prob: f64) -> Result<f64> {
    d.quantile(prob)
}

pub fn mixed_chisq_sf(d: &MixedChiSq, x: f64) -> f64 {
    d.sf(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlrtResult {
    pub d_n: f64,
    pub null: NullSpec,
    pub ref_dist: MixedChiSq,
    pub level: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    /// Amount of negative `D_n` removed by clamping at zero.
    pub clamped: f64,
    /// Clamp exceeded [`CLAMP_TOL`] or a fit did not converge.
    pub flagged: bool,
    /// The unrestricted fit was restarted from the restricted optimum.
    pub refit: bool,
    pub restricted_fit: FitResult,
    pub full_fit: FitResult,
}

impl AlrtResult {
    pub fn decision(&self) -> &'static str {
        if self.reject {
            "Reject"
        } else {
            "Fail to reject"
        }
    }
}

/// MALE fit with the null's coordinates pinned at zero.
pub fn fit_restricted(s: &Sample, null: NullSpec, opts: &FitOptions) -> Result<FitResult> {
    let mut o = opts.clone();
    for (slot, pin) in o.fixed.iter_mut().zip(null.fixed()) {
        if pin.is_some() {
            *slot = pin;
        }
    }
    o.information = false;
    fit_male(s, &o)
}

/// Approximated likelihood ratio test of `null` against the full family.
///
/// Both fits share one knot layout. If the restricted optimum beats the
/// unrestricted one, the unrestricted fit is restarted from it.
pub fn alrt(s: &Sample, null: NullSpec, opts: &FitOptions, level: f64) -> Result<AlrtResult> {
    if !(level > 0.0 && level < 1.0) {
        return Err(GhError::Domain(format!("level {level} outside (0, 1)")));
    }
    let mut full = fit_male(s, opts)?;
    let mut shared = opts.clone();
    shared.grid = full.grid;
    let restricted = fit_restricted(s, null, &shared)?;

    let mut refit = false;
    if restricted.objective > full.objective {
        let mut again = shared.clone();
        again.init = Some(restricted.theta_hat);
        let second = fit_male(s, &again)?;
        if second.objective > full.objective {
            full = second;
        }
        refit = true;
    }

    let raw = -2.0 * (restricted.objective - full.objective);
    let d_n = raw.max(0.0);
    let clamped = (-raw).max(0.0);
    let ref_dist = null.reference();
    let critical_value = ref_dist.quantile(1.0 - level)?;
    let p_value = ref_dist.sf(d_n).clamp(0.0, 1.0);
    Ok(AlrtResult {
        d_n,
        null,
        ref_dist,
        level,
        critical_value,
        p_value,
        reject: d_n > critical_value,
        clamped,
        flagged: clamped > CLAMP_TOL || !full.converged || !restricted.converged,
        refit,
        restricted_fit: restricted,
        full_fit: full,
    })
}

/// Draws from the large-sample law of `√n(θ̂ - θ₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticDraws {
    pub center: GhParams,
    pub n: usize,
    pub scaled: Vec<[f64; 4]>,
}

impl AsymptoticDraws {
    /// `θ̂ + draw/√n` for each draw.
    pub fn estimates(&self) -> Vec<[f64; 4]> {
        let c = self.center.to_array();
        let r = (self.n as f64).sqrt();
        self.scaled
            .iter()
            .map(|d| std::array::from_fn(|j| c[j] + d[j] / r))
            .collect()
    }

    pub fn zero_fraction(&self) -> f64 {
        self.scaled.iter().filter(|d| d[3] == 0.0).count() as f64 / self.scaled.len() as f64
    }
}

/// Samples `N₄(0, I⁻¹)` with `I = info/n` (per-observation information from
/// the total `info`). With `boundary`, draws whose tail coordinate is not
/// positive are projected: the other coordinates are shifted by the
/// regression on the tail coordinate and the tail coordinate is set to zero.
pub fn asymptotic_distribution(
    theta_hat: &GhParams,
    info: &Matrix4<f64>,
    n: usize,
    boundary: bool,
    n_draws: usize,
    seed: u64,
) -> Result<AsymptoticDraws> {
    if n == 0 {
        return Err(GhError::Precondition("sample size must be positive".into()));
    }
    let per_obs = info / n as f64;
    let cov = per_obs
        .cholesky()
        .ok_or(GhError::SingularInformation)?
        .inverse();
    let factor = cov.cholesky().ok_or(GhError::SingularInformation)?.l();
    let mut rng = NormalStream::new(seed);
    let scaled = (0..n_draws)
        .map(|_| {
            let e = Vector4::new(
                rng.next_normal(),
                rng.next_normal(),
                rng.next_normal(),
                rng.next_normal(),
            );
            let z = factor * e;
            let mut d = [z[0], z[1], z[2], z[3]];
            if boundary && z[3] <= 0.0 {
                for (j, v) in d.iter_mut().enumerate().take(3) {
                    *v = z[j] - cov[(j, 3)] / cov[(3, 3)] * z[3];
                }
                d[3] = 0.0;
            }
            d
        })
        .collect();
    Ok(AsymptoticDraws {
        center: *theta_hat,
        n,
        scaled,
    })
}

/// Tail-weight component of the exact score at `p0`, scaled by `n^{-1/2}`.
pub fn s_n_statistic(s: &Sample, p0: &GhParams, tol: f64) -> Result<f64> {
    p0.validate()?;
    let mut acc = 0.0;
    for &y in s.values() {
        acc += log_density_exact_grad(y, p0, tol)?[3];
    }
    Ok(acc / (s.len() as f64).sqrt())
}

/// Closed form of [`s_n_statistic`] at `g = h = 0`:
/// `n^{-1/2} Σ (z⁴/2 - 3z²/2)` with `z = (y - ξ)/ω`.
pub fn s_n_normal(s: &Sample, xi: f64, omega: f64) -> f64 {
    let sum: f64 = s
        .values()
        .iter()
        .map(|y| {
            let z2 = ((y - xi) / omega).powi(2);
            0.5 * z2 * z2 - 1.5 * z2
        })
        .sum();
    sum / (s.len() as f64).sqrt()
}
