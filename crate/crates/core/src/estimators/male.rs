use super::{check_size, fit_lv, sample_quantile, FitOptions, FitResult, Method, OMEGA_FLOOR};
use crate::approx_lik::{ApproxLikelihood, GridConfig};
use crate::error::{GhError, Result};
use crate::ghdist::GhParams;
use crate::optim::{optimize_box, Bounds, Objective};
use crate::sample::Sample;

/// Scale inflation factor and attempt cap used to reach the support region.
const INFLATE: f64 = 1.5;
const INFLATE_ATTEMPTS: usize = 20;
/// Half-width tried once if inflation alone fails.
const WIDE_HALF_WIDTH: f64 = 15.0;

struct ApproxObjective<'a> {
    lik: ApproxLikelihood<'a>,
}

impl Objective for ApproxObjective<'_> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.lik
            .value(&GhParams::from_array([x[0], x[1], x[2], x[3]]))
    }

    fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let p = GhParams::from_array([x[0], x[1], x[2], x[3]]);
        let (v, g) = self.lik.value_and_gradient(&p).ok()?;
        v.is_finite().then(|| (v, g.to_vec()))
    }

    fn joint_evaluation(&self) -> bool {
        true
    }
}

/// Median, normalized interquartile range, no skew, no excess tails.
pub(crate) fn robust_start(s: &Sample) -> Result<GhParams> {
    let med = sample_quantile(s, 0.5)?;
    let iqr = sample_quantile(s, 0.75)? - sample_quantile(s, 0.25)?;
    let spread = if iqr > 0.0 {
        iqr / 1.348_979_500_392_163
    } else {
        s.max() - s.min()
    };
    if spread.is_nan() || spread <= 0.0 {
        return Err(GhError::DegenerateSample(
            "all observations are equal".into(),
        ));
    }
    GhParams::new(med, spread, 0.0, 0.0)
}

/// Starting point for the iterative fits: `opts.init`, else LV, else a robust
/// fallback; fixed coordinates are applied afterwards.
pub(crate) fn initial_guess(s: &Sample, opts: &FitOptions) -> Result<GhParams> {
    let p = match opts.init {
        Some(p) => p,
        None => match fit_lv(s, &opts.lv_probs) {
            Ok(fit) => fit.theta_hat,
            Err(_) => robust_start(s)?,
        },
    };
    let p = opts.apply_fixed(p);
    p.validate()?;
    Ok(p)
}

/// Starting point and knot layout at which the approximated likelihood is
/// finite. The scale is inflated by 1.5 up to 20 times; if that fails the
/// z-range is widened to 15 and inflation is retried.
pub fn prepare_start(s: &Sample, opts: &FitOptions) -> Result<(GhParams, GridConfig)> {
    let init = initial_guess(s, opts)?;
    let grid = opts
        .grid
        .unwrap_or_else(|| GridConfig::for_sample_size(s.len()));
    let mut layouts = vec![grid];
    if grid.half_width < WIDE_HALF_WIDTH {
        layouts.push(GridConfig::new(WIDE_HALF_WIDTH, grid.knots)?);
    }
    let attempts = if opts.fixed[1].is_some() {
        0
    } else {
        INFLATE_ATTEMPTS
    };
    for cfg in layouts {
        let mut lik = ApproxLikelihood::new(s, cfg);
        let mut p = init;
        for _ in 0..=attempts {
            if lik.value(&p).is_finite() {
                return Ok((p, cfg));
            }
            p.omega *= INFLATE;
        }
    }
    Err(GhError::InitializationFailure(format!(
        "no start inside the support region found from {init}"
    )))
}

/// Maximum approximated likelihood fit.
///
/// Fixed coordinates in `opts` are held constant (restricted fits). For
/// unrestricted fits the observed information and standard errors are
/// attached when `opts.information` is set and the information is positive
/// definite.
pub fn fit_male(s: &Sample, opts: &FitOptions) -> Result<FitResult> {
    check_size(s)?;
    let (start, cfg) = prepare_start(s, opts)?;
    let mut obj = ApproxObjective {
        lik: ApproxLikelihood::new(s, cfg),
    };
    let rec = optimize_box(
        &mut obj,
        &start.to_array(),
        &Bounds::gh(OMEGA_FLOOR),
        &opts.frozen(),
        &opts.optimizer,
    )?;
    let theta = GhParams::from_array([rec.x[0], rec.x[1], rec.x[2], rec.x[3]]);
    let mut fit = FitResult::new(Method::Male, theta, rec.value);
    fit.converged = rec.converged;
    fit.iterations = rec.iterations;
    fit.termination = Some(rec.termination);
    fit.grid = Some(cfg);
    if opts.information && !opts.is_restricted() {
        if let Ok(info) = obj.lik.observed_information(&theta) {
            fit.attach_information(&info);
        }
    }
    Ok(fit)
}
