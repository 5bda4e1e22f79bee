use super::{sample_quantile, FitResult, Method, QuantileSet, OMEGA_FLOOR};
use crate::error::{GhError, Result};
use crate::ghdist::{tau, tau_shape_grad, GhParams};
use crate::normal::StdNormal;
use crate::optim::{optimize_box, Bounds, Objective, OptimizerOptions};
use crate::sample::Sample;

struct QuantileLoss {
    targets: Vec<f64>,
    z: Vec<f64>,
}

impl QuantileLoss {
    fn residuals(&self, x: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (xi, omega, g, h) = (x[0], x[1], x[2], x[3]);
        self.z
            .iter()
            .zip(&self.targets)
            .map(move |(&z, &q)| (z, q - (xi + omega * tau(z, g, h))))
    }
}

impl Objective for QuantileLoss {
    fn value(&mut self, x: &[f64]) -> f64 {
        let v: f64 = -self.residuals(x).map(|(_, r)| r * r).sum::<f64>();
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    }

    fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let (omega, g, h) = (x[1], x[2], x[3]);
        let mut value = 0.0;
        let mut grad = vec![0.0; 4];
        for (z, r) in self.residuals(x) {
            let (dg, dh) = tau_shape_grad(z, g, h);
            value -= r * r;
            // d(-r²)/dθ = 2 r · dq/dθ
            grad[0] += 2.0 * r;
            grad[1] += 2.0 * r * tau(z, g, h);
            grad[2] += 2.0 * r * omega * dg;
            grad[3] += 2.0 * r * omega * dh;
        }
        (value.is_finite() && grad.iter().all(|v| v.is_finite())).then_some((value, grad))
    }
}

/// Quantile least squares: minimizes `Σ (q̂_p - q_p(θ))²` over the
/// parameter box starting from `init`. The objective reported is the loss.
pub fn fit_qls(
    s: &Sample,
    qs: &QuantileSet,
    init: GhParams,
    opt: &OptimizerOptions,
) -> Result<FitResult> {
    if qs.len() < 4 {
        return Err(GhError::Domain(
            "quantile least squares needs at least four probabilities".into(),
        ));
    }
    init.validate()?;
    let targets = qs
        .probs()
        .iter()
        .map(|&p| sample_quantile(s, p))
        .collect::<Result<Vec<_>>>()?;
    fit_targets(targets, qs, init, opt)
}

fn fit_targets(
    targets: Vec<f64>,
    qs: &QuantileSet,
    init: GhParams,
    opt: &OptimizerOptions,
) -> Result<FitResult> {
    let z = qs.probs().iter().map(|&p| StdNormal::inv_cdf(p)).collect();
    let mut loss = QuantileLoss { targets, z };
    let rec = optimize_box(
        &mut loss,
        &init.to_array(),
        &Bounds::gh(OMEGA_FLOOR),
        &[false; 4],
        opt,
    )?;
    let theta = GhParams::from_array([rec.x[0], rec.x[1], rec.x[2], rec.x[3]]);
    let mut fit = FitResult::new(Method::Qls, theta, -rec.value);
    fit.converged = rec.converged;
    fit.iterations = rec.iterations;
    fit.termination = Some(rec.termination);
    Ok(fit)
}
