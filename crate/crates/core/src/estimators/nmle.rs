use nalgebra::Matrix4;

use super::male::initial_guess;
use super::{check_size, FitOptions, FitResult, Method, OMEGA_FLOOR};
use crate::error::{GhError, Result};
use crate::ghdist::{log_density_exact_grad, log_likelihood_exact, GhParams};
use crate::optim::{optimize_box, Bounds, Objective};
use crate::sample::Sample;

const FD_STEP: f64 = 1e-6;
const INFO_STEP: f64 = 1e-4;

struct ExactObjective<'a> {
    sample: &'a Sample,
    tol: f64,
    frozen: [bool; 4],
}

impl ExactObjective<'_> {
    fn at(&self, x: [f64; 4]) -> f64 {
        let p = GhParams::from_array(x);
        if p.validate().is_err() {
            return f64::NEG_INFINITY;
        }
        match log_likelihood_exact(self.sample, &p, self.tol) {
            Ok(v) if !v.is_nan() => v,
            _ => f64::NEG_INFINITY,
        }
    }
}

impl Objective for ExactObjective<'_> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.at([x[0], x[1], x[2], x[3]])
    }

    /// Central differences, one-sided near `h = 0` or next to the support edge.
    fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let base = [x[0], x[1], x[2], x[3]];
        let f0 = self.at(base);
        if !f0.is_finite() {
            return None;
        }
        let mut grad = vec![0.0; 4];
        for j in (0..4).filter(|&j| !self.frozen[j]) {
            let step = FD_STEP * (1.0 + base[j].abs());
            let shifted = |d: f64| {
                let mut a = base;
                a[j] += d;
                a
            };
            let up = self.at(shifted(step));
            let dn = if j == 3 && base[3] < step {
                f64::NAN
            } else {
                self.at(shifted(-step))
            };
            grad[j] = if up.is_finite() && dn.is_finite() {
                (up - dn) / (2.0 * step)
            } else if up.is_finite() {
                let up2 = self.at(shifted(2.0 * step));
                if !up2.is_finite() {
                    return None;
                }
                (-3.0 * f0 + 4.0 * up - up2) / (2.0 * step)
            } else if dn.is_finite() {
                let dn2 = self.at(shifted(-2.0 * step));
                if !dn2.is_finite() {
                    return None;
                }
                (3.0 * f0 - 4.0 * dn + dn2) / (2.0 * step)
            } else {
                return None;
            };
        }
        Some((f0, grad))
    }
}

/// Numerical maximum likelihood: the exact log-likelihood, each evaluation
/// solving `n` monotone root problems, maximized over the parameter box.
pub fn fit_nmle(s: &Sample, opts: &FitOptions) -> Result<FitResult> {
    check_size(s)?;
    let mut obj = ExactObjective {
        sample: s,
        tol: opts.root_tol,
        frozen: opts.frozen(),
    };
    let mut start = initial_guess(s, opts)?;
    let attempts = if opts.fixed[1].is_some() { 0 } else { 20 };
    let mut tries = 0;
    while !obj.at(start.to_array()).is_finite() {
        if tries == attempts {
            return Err(GhError::InitializationFailure(format!(
                "exact likelihood is not finite near {start}"
            )));
        }
        start.omega *= 1.5;
        tries += 1;
    }
    let rec = optimize_box(
        &mut obj,
        &start.to_array(),
        &Bounds::gh(OMEGA_FLOOR),
        &opts.frozen(),
        &opts.optimizer,
    )?;
    let theta = GhParams::from_array([rec.x[0], rec.x[1], rec.x[2], rec.x[3]]);
    let mut fit = FitResult::new(Method::Nmle, theta, rec.value);
    fit.converged = rec.converged;
    fit.iterations = rec.iterations;
    fit.termination = Some(rec.termination);
    if opts.information && !opts.is_restricted() {
        if let Ok(info) = exact_information(s, &theta, opts.root_tol) {
            fit.attach_information(&info);
        }
    }
    Ok(fit)
}

fn exact_gradient(s: &Sample, p: &GhParams, tol: f64) -> Result<[f64; 4]> {
    let mut acc = [0.0; 4];
    for &y in s.values() {
        let g = log_density_exact_grad(y, p, tol)?;
        for j in 0..4 {
            acc[j] += g[j];
        }
    }
    Ok(acc)
}

/// Observed information of the exact log-likelihood: differences of its
/// analytic gradient, forward at `h` near zero, symmetrized.
pub fn exact_information(s: &Sample, p: &GhParams, tol: f64) -> Result<Matrix4<f64>> {
    let base = p.to_array();
    let steps = [
        INFO_STEP * p.omega,
        INFO_STEP * p.omega,
        INFO_STEP,
        INFO_STEP,
    ];
    let mut hess = Matrix4::<f64>::zeros();
    for j in 0..4 {
        let at = |d: f64| {
            let mut a = base;
            a[j] += d;
            exact_gradient(s, &GhParams::from_array(a), tol)
        };
        let col = if j == 3 && p.h < steps[3] {
            let (g0, g1, g2) = (at(0.0)?, at(steps[3])?, at(2.0 * steps[3])?);
            std::array::from_fn::<f64, 4, _>(|i| {
                (-3.0 * g0[i] + 4.0 * g1[i] - g2[i]) / (2.0 * steps[3])
            })
        } else {
            let (up, dn) = (at(steps[j])?, at(-steps[j])?);
            std::array::from_fn::<f64, 4, _>(|i| (up[i] - dn[i]) / (2.0 * steps[j]))
        };
        for i in 0..4 {
            hess[(i, j)] = col[i];
        }
    }
    Ok(-(hess + hess.transpose()) * 0.5)
}
