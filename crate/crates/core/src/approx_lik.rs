//! Approximated log-likelihood of the g-and-h family.
//!
//! The normal score `z_p = τ⁻¹((y - ξ)/ω)` has no closed form, so it is
//! replaced by linear interpolation between `K` equally spaced knots
//! `Z_1 = -b < … < Z_K = b` and their images `Y_k = ξ + ω τ(Z_k)`. An
//! observation in `[Y_k, Y_{k+1})` gets
//!
//! ```text
//! z̃ = Z_k + (y - Y_k) / (Y_{k+1} - Y_k) · (Z_{k+1} - Z_k)
//! ```
//!
//! and contributes `varphi(z̃, θ)`. If any observation falls outside
//! `[Y_1, Y_K]` the approximated log-likelihood is `-inf`.
//!
//! Binning is a single merge-scan of the sorted sample against the sorted
//! knots, `O(n + K)` per evaluation.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};
use crate::ghdist::{dvarphi_dz, tau, tau_shape_grad, varphi, varphi_param_grad, GhParams};
use crate::sample::Sample;

/// Default half-width of the z-support.
pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

/// Minimum number of knots used by [`GridConfig::for_sample_size`].
pub const MIN_DEFAULT_KNOTS: usize = 1000;

/// Relative step used by [`observed_information`].
pub const INFO_STEP: f64 = 1e-2;

/// Knot layout: `knots` equally spaced points over `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub half_width: f64,
    pub knots: usize,
}

impl GridConfig {
    pub fn new(half_width: f64, knots: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(GhError::Domain(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if knots < 3 {
            return Err(GhError::Domain(format!(
                "need at least 3 knots, got {knots}"
            )));
        }
        Ok(Self { half_width, knots })
    }

    /// `b = 10`, `K = max(1000, n)`.
    pub fn for_sample_size(n: usize) -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            knots: n.max(MIN_DEFAULT_KNOTS),
        }
    }

    /// Distance between neighbouring knots, `2b / (K - 1)`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.knots - 1) as f64
    }
}

/// Knots in the normal-score scale and their images under `θ`.
#[derive(Debug, Clone)]
pub struct KnotGrid {
    z: Vec<f64>,
    t: Vec<f64>,
    y: Vec<f64>,
}

impl KnotGrid {
    pub fn z_knots(&self) -> &[f64] {
        &self.z
    }

    pub fn y_knots(&self) -> &[f64] {
        &self.y
    }

    /// `τ(Z_k)`, the knots in standardized units.
    pub fn tau_knots(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.y[0]
    }

    pub fn upper(&self) -> f64 {
        self.y[self.y.len() - 1]
    }

    fn all_finite(&self) -> bool {
        self.y.iter().all(|v| v.is_finite())
    }
}

/// Equally spaced z-knots; the outer ones are exactly `∓b`.
pub fn z_knots(cfg: &GridConfig) -> Vec<f64> {
    let k = cfg.knots;
    let b = cfg.half_width;
    let mut z: Vec<f64> = (0..k)
        .map(|i| -b + 2.0 * b * i as f64 / (k - 1) as f64)
        .collect();
    z[k - 1] = b;
    z
}

pub fn build_grid(p: &GhParams, cfg: &GridConfig) -> KnotGrid {
    let z = z_knots(cfg);
    let t: Vec<f64> = z.iter().map(|&zk| tau(zk, p.g, p.h)).collect();
    let y = t.iter().map(|&tk| p.xi + p.omega * tk).collect();
    KnotGrid { z, t, y }
}

/// Assigns each (sorted) observation a 0-based bin `k` with
/// `Y_k <= y < Y_{k+1}`; the last bin is closed on the right.
pub fn bin_assign(s: &Sample, grid: &KnotGrid) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(s.len());
    bin_assign_into(s.values(), grid, &mut out)?;
    Ok(out)
}

fn bin_assign_into(values: &[f64], grid: &KnotGrid, out: &mut Vec<usize>) -> Result<()> {
    let (y_min, y_max) = (values[0], values[values.len() - 1]);
    if !(grid.lower() <= y_min && y_max <= grid.upper()) {
        return Err(GhError::SupportViolation {
            lower: grid.lower(),
            upper: grid.upper(),
            y_min,
            y_max,
        });
    }
    out.clear();
    let last_bin = grid.len() - 2;
    let knots = &grid.y;
    let mut k = 0;
    for &v in values {
        while k < last_bin && knots[k + 1] <= v {
            k += 1;
        }
        out.push(k);
    }
    Ok(())
}

/// Linear interpolation of the normal score inside bin `k`.
pub fn z_tilde(y: f64, k: usize, grid: &KnotGrid) -> f64 {
    let (y0, y1) = (grid.y[k], grid.y[k + 1]);
    grid.z[k] + (y - y0) / (y1 - y0) * (grid.z[k + 1] - grid.z[k])
}

/// Approximated log-likelihood; `-inf` when the support check fails.
pub fn approx_loglik(s: &Sample, p: &GhParams, cfg: &GridConfig) -> f64 {
    ApproxLikelihood::new(s, *cfg).value(p)
}

/// Gradient of [`approx_loglik`] in `(ξ, ω, g, h)`.
pub fn approx_loglik_grad(s: &Sample, p: &GhParams, cfg: &GridConfig) -> Result<[f64; 4]> {
    ApproxLikelihood::new(s, *cfg)
        .value_and_gradient(p)
        .map(|(_, g)| g)
}

/// Negative Hessian of [`approx_loglik`] by central differences of the
/// analytic gradient, symmetrized.
pub fn observed_information(s: &Sample, p: &GhParams, cfg: &GridConfig) -> Result<Matrix4<f64>> {
    ApproxLikelihood::new(s, *cfg).observed_information(p)
}

/// `n · (2b/(K-1)) · sup_{|z| <= b} |∂varphi/∂z|`, an upper bound on
/// `|approx_loglik - exact loglik|` at `θ`.
pub fn approximation_error_bound(n: usize, p: &GhParams, cfg: &GridConfig) -> f64 {
    let b = cfg.half_width;
    let m = 20_000;
    let sup = (0..=m)
        .map(|i| dvarphi_dz(-b + 2.0 * b * i as f64 / m as f64, p).abs())
        .fold(0.0, f64::max);
    n as f64 * cfg.spacing() * sup
}

/// The approximated likelihood of one sample under one knot layout.
///
/// Holds the knot vectors and bin indices as scratch space so repeated
/// evaluations inside an optimizer do not reallocate. Clone per thread.
#[derive(Debug, Clone)]
pub struct ApproxLikelihood<'a> {
    sample: &'a Sample,
    cfg: GridConfig,
    grid: KnotGrid,
    bins: Vec<usize>,
}

impl<'a> ApproxLikelihood<'a> {
    pub fn new(sample: &'a Sample, cfg: GridConfig) -> Self {
        let z = z_knots(&cfg);
        let k = z.len();
        Self {
            sample,
            cfg,
            grid: KnotGrid {
                z,
                t: vec![0.0; k],
                y: vec![0.0; k],
            },
            bins: Vec::with_capacity(sample.len()),
        }
    }

    pub fn sample(&self) -> &Sample {
        self.sample
    }

    pub fn config(&self) -> &GridConfig {
        &self.cfg
    }

    /// Recomputes the knot images for `p` and bins the sample.
    fn refresh(&mut self, p: &GhParams) -> Result<()> {
        let grid = &mut self.grid;
        for ((zk, tk), yk) in grid.z.iter().zip(grid.t.iter_mut()).zip(grid.y.iter_mut()) {
            *tk = tau(*zk, p.g, p.h);
            *yk = p.xi + p.omega * *tk;
        }
        if !grid.all_finite() {
            return Err(self.violation());
        }
        bin_assign_into(self.sample.values(), &self.grid, &mut self.bins)
    }

    fn violation(&self) -> GhError {
        GhError::SupportViolation {
            lower: self.grid.lower(),
            upper: self.grid.upper(),
            y_min: self.sample.min(),
            y_max: self.sample.max(),
        }
    }

    /// Evaluates the approximated log-likelihood, `-inf` outside the support region.
    pub fn value(&mut self, p: &GhParams) -> f64 {
        if p.validate().is_err() || self.refresh(p).is_err() {
            return f64::NEG_INFINITY;
        }
        let grid = &self.grid;
        let mut acc = 0.0;
        for (&y, &k) in self.sample.values().iter().zip(&self.bins) {
            if grid.y[k + 1] <= grid.y[k] {
                return f64::NEG_INFINITY;
            }
            acc += varphi(z_tilde(y, k, grid), p);
        }
        if acc.is_nan() {
            f64::NEG_INFINITY
        } else {
            acc
        }
    }

    /// Value and analytic gradient. Differentiates both the explicit
    /// dependence of `varphi` on `θ` and the dependence of `z̃` on `θ`
    /// through the knot images.
    pub fn value_and_gradient(&mut self, p: &GhParams) -> Result<(f64, [f64; 4])> {
        p.validate()?;
        self.refresh(p)?;
        let grid = &self.grid;

        // shape derivatives of the two knots bounding the current bin; bins
        // arrive in nondecreasing order so each knot is computed at most once
        let mut cached = usize::MAX;
        let mut shape0 = (0.0, 0.0);
        let mut shape1 = (0.0, 0.0);

        let mut value = 0.0;
        let mut grad = [0.0; 4];
        for (&y, &k) in self.sample.values().iter().zip(&self.bins) {
            let (t0, t1) = (grid.t[k], grid.t[k + 1]);
            let d = t1 - t0;
            if d <= 0.0 {
                return Err(self.violation());
            }
            if k != cached {
                shape0 = if k == cached.wrapping_add(1) {
                    shape1
                } else {
                    tau_shape_grad(grid.z[k], p.g, p.h)
                };
                shape1 = tau_shape_grad(grid.z[k + 1], p.g, p.h);
                cached = k;
            }
            let width = grid.z[k + 1] - grid.z[k];
            let u = (y - p.xi) / p.omega;
            let lam = (u - t0) / d;
            let zt = grid.z[k] + lam * width;

            let du = [-1.0 / p.omega, -u / p.omega, 0.0, 0.0];
            let dt0 = [0.0, 0.0, shape0.0, shape0.1];
            let dt1 = [0.0, 0.0, shape1.0, shape1.1];

            value += varphi(zt, p);
            let explicit = varphi_param_grad(zt, p);
            let slope = dvarphi_dz(zt, p);
            for j in 0..4 {
                let dlam = (du[j] - dt0[j] - lam * (dt1[j] - dt0[j])) / d;
                grad[j] += explicit[j] + slope * width * dlam;
            }
        }
        Ok((value, grad))
    }

    pub fn gradient(&mut self, p: &GhParams) -> Result<[f64; 4]> {
        self.value_and_gradient(p).map(|(_, g)| g)
    }

    /// Observed information with the default relative step [`INFO_STEP`].
    pub fn observed_information(&mut self, p: &GhParams) -> Result<Matrix4<f64>> {
        self.observed_information_with_step(p, INFO_STEP)
    }

    /// Negative Hessian by differencing the analytic gradient.
    ///
    /// Steps are `step·ω` for `ξ` and `ω` and `step` for `g` and `h`. The
    /// gradient jumps slightly whenever an observation crosses a knot, so the
    /// step should span several knot cells. When `h < step` a one-sided
    /// three-point formula keeps every evaluation inside `h >= 0`.
    pub fn observed_information_with_step(
        &mut self,
        p: &GhParams,
        step: f64,
    ) -> Result<Matrix4<f64>> {
        let base = p.to_array();
        let steps = [step * p.omega, step * p.omega, step, step];
        let mut hess = Matrix4::<f64>::zeros();
        let g0 = if p.h < step {
            Some(self.gradient(p)?)
        } else {
            None
        };
        for j in 0..4 {
            let shifted = |delta: f64| {
                let mut a = base;
                a[j] += delta;
                GhParams::from_array(a)
            };
            let col = if j == 3 && p.h < step {
                let g1 = self.gradient(&shifted(steps[j]))?;
                let g2 = self.gradient(&shifted(2.0 * steps[j]))?;
                let g0 = g0.expect("base gradient");
                let mut c = [0.0; 4];
                for i in 0..4 {
                    c[i] = (-3.0 * g0[i] + 4.0 * g1[i] - g2[i]) / (2.0 * steps[j]);
                }
                c
            } else {
                let up = self.gradient(&shifted(steps[j]))?;
                let dn = self.gradient(&shifted(-steps[j]))?;
                let mut c = [0.0; 4];
                for i in 0..4 {
                    c[i] = (up[i] - dn[i]) / (2.0 * steps[j]);
                }
                c
            };
            for i in 0..4 {
                hess[(i, j)] = col[i];
            }
        }
        let info = -(hess + hess.transpose()) * 0.5;
        Ok(info)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghdist::{self, log_likelihood_exact, quantile, tau_inverse};
    use crate::normal::{NormalStream, StdNormal, HALF_LN_2PI};

    fn std_normal() -> GhParams {
        GhParams::new(0.0, 1.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn config_validation_and_defaults() {
        assert!(GridConfig::new(0.0, 10).is_err());
        assert!(GridConfig::new(1.0, 2).is_err());
        assert_eq!(GridConfig::for_sample_size(200).knots, 1000);
        assert_eq!(GridConfig::for_sample_size(2000).knots, 2000);
        assert_eq!(GridConfig::for_sample_size(5).half_width, 10.0);
    }

    #[test]
    fn identity_grid() {
        let g = build_grid(&std_normal(), &GridConfig::new(1.0, 3).unwrap());
        assert_eq!(g.z_knots(), &[-1.0, 0.0, 1.0]);
        assert_eq!(g.y_knots(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn small_grid_middle_knot() {
        let p = GhParams::new(0.0, 1.0, 0.5, 0.2).unwrap();
        let g = build_grid(&p, &GridConfig::new(6.0, 15).unwrap());
        assert_eq!(g.len(), 15);
        // 0-based index 7 is the middle knot Z = 0
        assert_eq!(g.z_knots()[7], 0.0);
        assert_eq!(g.y_knots()[7], 0.0);
        assert_eq!(g.y_knots()[8], tau(g.z_knots()[8], 0.5, 0.2));
        assert!(g.y_knots().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn knots_match_quantile_oracle() {
        let p = GhParams::new(3.0, 3.0, 0.5, 0.2).unwrap();
        // beyond |z| = 4 the probability scale loses too many digits for an oracle
        let g = build_grid(&p, &GridConfig::new(4.0, 81).unwrap());
        for (&z, &y) in g.z_knots().iter().zip(g.y_knots()) {
            let q = quantile(StdNormal::cdf(z), &p).unwrap();
            assert!(
                (q - y).abs() <= 1e-10 * (1.0 + y.abs()),
                "z={z} q={q} y={y}"
            );
        }
    }

    fn binary_search_bins(values: &[f64], grid: &KnotGrid) -> Vec<usize> {
        let knots = grid.y_knots();
        let last = knots.len() - 2;
        values
            .iter()
            .map(|&v| {
                // number of knots <= v, minus one
                let idx = knots.partition_point(|&k| k <= v);
                (idx - 1).min(last)
            })
            .collect()
    }

    #[test]
    fn bin_boundary_conventions() {
        let p = GhParams::new(0.0, 1.0, 0.3, 0.1).unwrap();
        let grid = build_grid(&p, &GridConfig::new(4.0, 9).unwrap());
        let y = grid.y_knots().to_vec();
        let s = Sample::new(vec![y[0], y[3], y[8]]).unwrap();
        let bins = bin_assign(&s, &grid).unwrap();
        assert_eq!(bins, vec![0, 3, 7]);
    }

    #[test]
    fn binning_rejects_support_violation() {
        let grid = build_grid(&std_normal(), &GridConfig::new(2.0, 5).unwrap());
        let s = Sample::new(vec![-3.0, 0.0]).unwrap();
        assert!(matches!(
            bin_assign(&s, &grid),
            Err(GhError::SupportViolation { .. })
        ));
    }

    #[test]
    fn binning_matches_binary_search() {
        let mut rng = NormalStream::new(99);
        for trial in 0..50 {
            let p = GhParams::new(
                rng.next_normal(),
                0.5 + rng.next_uniform() * 3.0,
                rng.next_normal() * 0.5,
                rng.next_uniform() * 0.5,
            )
            .unwrap();
            let cfg = GridConfig::new(5.0 + 5.0 * rng.next_uniform(), 20 + trial * 13).unwrap();
            let grid = build_grid(&p, &cfg);
            let s = ghdist::sample(200, &p, trial as u64).unwrap();
            let mut vals = s.values().to_vec();
            // include exact knot hits
            vals.push(grid.y_knots()[cfg.knots / 2]);
            vals.push(grid.y_knots()[cfg.knots / 3]);
            let s = Sample::new(vals).unwrap();
            let merge = bin_assign(&s, &grid).unwrap();
            assert_eq!(merge, binary_search_bins(s.values(), &grid));
        }
    }

    #[test]
    fn z_tilde_endpoints_and_linearity() {
        let grid = build_grid(&std_normal(), &GridConfig::new(3.0, 7).unwrap());
        assert_eq!(z_tilde(grid.y_knots()[2], 2, &grid), grid.z_knots()[2]);
        let mid = 0.5 * (grid.y_knots()[4] + grid.y_knots()[5]);
        let zm = 0.5 * (grid.z_knots()[4] + grid.z_knots()[5]);
        assert!((z_tilde(mid, 4, &grid) - zm).abs() < 1e-15);
    }

    #[test]
    fn z_tilde_within_cell_of_exact_score() {
        let p = GhParams::new(0.0, 1.0, 0.5, 0.2).unwrap();
        let cfg = GridConfig::new(10.0, 2001).unwrap();
        let grid = build_grid(&p, &cfg);
        let mut rng = NormalStream::new(5);
        let vals: Vec<f64> = (0..1000)
            .map(|_| tau(rng.next_normal() * 1.5, 0.5, 0.2))
            .collect();
        let s = Sample::new(vals).unwrap();
        let bins = bin_assign(&s, &grid).unwrap();
        let bound = 2.0 * cfg.half_width / (cfg.knots - 1) as f64;
        for (&y, &k) in s.values().iter().zip(&bins) {
            let exact = tau_inverse(y, 0.5, 0.2, 1e-13).unwrap();
            assert!((z_tilde(y, k, &grid) - exact).abs() <= bound);
        }
    }

    #[test]
    fn support_violation_gives_neg_infinity() {
        let s = Sample::new(vec![-1.0, 0.0, 1.0]).unwrap();
        let cfg = GridConfig::new(10.0, 1000).unwrap();
        // shifting ξ far right puts Y_1 above y_min
        let p = GhParams::new(50.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(approx_loglik(&s, &p, &cfg), f64::NEG_INFINITY);
        assert!(approx_loglik_grad(&s, &p, &cfg).is_err());
    }

    #[test]
    fn normal_loglik_three_points() {
        let s = Sample::new(vec![-1.0, 0.0, 1.0]).unwrap();
        let cfg = GridConfig::new(10.0, 1_000_000).unwrap();
        let v = approx_loglik(&s, &std_normal(), &cfg);
        assert!((v - (-3.0 * HALF_LN_2PI - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn approximation_within_bound() {
        let p = GhParams::new(3.0, 3.0, 0.5, 0.2).unwrap();
        let s = ghdist::sample(300, &p, 17).unwrap();
        for &k in &[50usize, 200, 1000] {
            let cfg = GridConfig::new(10.0, k).unwrap();
            let approx = approx_loglik(&s, &p, &cfg);
            let exact = log_likelihood_exact(&s, &p, 1e-13).unwrap();
            assert!((approx - exact).abs() <= approximation_error_bound(s.len(), &p, &cfg));
        }
    }

    #[test]
    fn symmetric_sample_has_zero_location_score() {
        let s = Sample::new(vec![-2.0, -0.7, -0.1, 0.1, 0.7, 2.0]).unwrap();
        let cfg = GridConfig::new(10.0, 1001).unwrap();
        let g = approx_loglik_grad(&s, &std_normal(), &cfg).unwrap();
        assert!(g[0].abs() < 1e-8, "{g:?}");
    }

    fn fd_gradient(s: &Sample, p: &GhParams, cfg: &GridConfig) -> [f64; 4] {
        let mut out = [0.0; 4];
        let base = p.to_array();
        for j in 0..4 {
            let step = 1e-6 * (1.0 + base[j].abs());
            let mut a = base;
            a[j] += step;
            let up = approx_loglik(s, &GhParams::from_array(a), cfg);
            a[j] = base[j] - step;
            let dn = approx_loglik(s, &GhParams::from_array(a), cfg);
            out[j] = (up - dn) / (2.0 * step);
        }
        out
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = NormalStream::new(3);
        for trial in 0..20 {
            let truth = GhParams::new(3.0, 3.0, 0.5, 0.2).unwrap();
            let s = ghdist::sample(50, &truth, 100 + trial).unwrap();
            let p = GhParams::new(
                3.0 + 0.3 * rng.next_normal(),
                3.0 * (0.8 + 0.4 * rng.next_uniform()),
                0.5 + 0.2 * rng.next_normal(),
                0.1 + 0.2 * rng.next_uniform(),
            )
            .unwrap();
            let cfg = GridConfig::new(10.0, 1000).unwrap();
            if approx_loglik(&s, &p, &cfg) == f64::NEG_INFINITY {
                continue;
            }
            let an = approx_loglik_grad(&s, &p, &cfg).unwrap();
            let fd = fd_gradient(&s, &p, &cfg);
            for j in 0..4 {
                let scale = an[j].abs().max(fd[j].abs()).max(1.0);
                assert!(
                    (an[j] - fd[j]).abs() <= 1e-4 * scale,
                    "trial {trial} j={j} {an:?} {fd:?}"
                );
            }
        }
    }

    #[test]
    fn gradient_near_g_zero_is_smooth() {
        let truth = GhParams::new(0.0, 1.0, 0.0, 0.1).unwrap();
        let s = ghdist::sample(80, &truth, 4).unwrap();
        let cfg = GridConfig::new(10.0, 1000).unwrap();
        let at0 = approx_loglik_grad(&s, &truth, &cfg).unwrap();
        let near = approx_loglik_grad(&s, &GhParams { g: 1e-7, ..truth }, &cfg).unwrap();
        for j in 0..4 {
            assert!((at0[j] - near[j]).abs() < 1e-4 * (1.0 + at0[j].abs()));
        }
    }

    #[test]
    fn information_is_symmetric_and_normal_scaled() {
        let p = GhParams::new(1.0, 2.0, 0.0, 0.0).unwrap();
        let s = ghdist::sample(20_000, &GhParams::new(1.0, 2.0, 0.0, 0.0).unwrap(), 8).unwrap();
        let cfg = GridConfig::for_sample_size(s.len());
        let info = observed_information(&s, &p, &cfg).unwrap();
        assert_eq!(info, info.transpose());
        let expect = s.len() as f64 / 4.0;
        assert!(
            (info[(0, 0)] / expect - 1.0).abs() < 0.1,
            "{}",
            info[(0, 0)]
        );
    }

    #[test]
    fn information_positive_definite_interior() {
        let p = GhParams::new(3.0, 3.0, 0.5, 0.2).unwrap();
        let s = ghdist::sample(2000, &p, 21).unwrap();
        let cfg = GridConfig::for_sample_size(s.len());
        let info = observed_information(&s, &p, &cfg).unwrap() / s.len() as f64;
        let eig = info.symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > 0.0), "{eig:?}");
    }
}
