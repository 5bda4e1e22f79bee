//! Tukey's g-and-h distribution: the transformation `τ_{g,h}`, its derivatives
//! and inverse, and the density, distribution and quantile functions of
//! `Y = ξ + ω τ_{g,h}(Z)` with `Z ~ N(0, 1)`.
//!
//! Every function that depends on `g` switches to the `g → 0` limit when
//! `|g| <= G_SWITCH`. Above the switch `exp(gz) - 1` is evaluated with `expm1`.

use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};
use crate::normal::{NormalStream, StdNormal, HALF_LN_2PI};
use crate::sample::Sample;

/// Below this `|g|` the limit forms are used.
pub const G_SWITCH: f64 = 1e-8;

/// Iteration cap of the safeguarded Newton phase in [`tau_inverse`].
pub const ROOT_MAX_ITER: usize = 200;

/// Relative tolerance used when no explicit root tolerance is supplied.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Parameter vector `θ = (ξ, ω, g, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhParams {
    pub xi: f64,
    pub omega: f64,
    pub g: f64,
    pub h: f64,
}

impl GhParams {
    pub fn new(xi: f64, omega: f64, g: f64, h: f64) -> Result<Self> {
        let p = Self { xi, omega, g, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.xi, self.omega, self.g, self.h]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(GhError::InvalidParams(format!(
                "non-finite component in {self:?}"
            )));
        }
        if self.omega <= 0.0 {
            return Err(GhError::InvalidParams("omega must be positive".into()));
        }
        if self.h < 0.0 {
            return Err(GhError::InvalidParams("h must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.xi, self.omega, self.g, self.h]
    }

    /// Builds parameters from `[ξ, ω, g, h]` without validation.
    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            xi: a[0],
            omega: a[1],
            g: a[2],
            h: a[3],
        }
    }

    /// Parameters of `a + b·Y` when `Y` has these parameters (`b > 0`).
    pub fn affine(self, a: f64, b: f64) -> Self {
        Self {
            xi: a + b * self.xi,
            omega: b * self.omega,
            ..self
        }
    }
}

impl std::fmt::Display for GhParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(xi={}, omega={}, g={}, h={})",
            self.xi, self.omega, self.g, self.h
        )
    }
}

/// `(exp(gz) - 1) / g`, equal to `z` in the limit.
#[inline]
pub(crate) fn expm1_ratio(g: f64, z: f64) -> f64 {
    if g.abs() <= G_SWITCH {
        z
    } else {
        (g * z).exp_m1() / g
    }
}

/// `∂/∂g [(exp(gz) - 1) / g]`, equal to `z²/2` in the limit.
pub(crate) fn expm1_ratio_dg(g: f64, z: f64) -> f64 {
    let gz = g * z;
    if g.abs() <= G_SWITCH {
        0.5 * z * z
    } else if gz.abs() < 0.01 {
        // sum_{m>=1} m g^{m-1} z^{m+1} / (m+1)!
        let mut term = z * z; // g^{m-1} z^{m+1}
        let mut fact = 2.0; // (m+1)!
        let mut acc = 0.0;
        for m in 1..=8 {
            acc += m as f64 * term / fact;
            term *= gz;
            fact *= (m + 2) as f64;
        }
        acc
    } else {
        (z * gz.exp() - gz.exp_m1() / g) / g
    }
}

/// The transformation `τ_{g,h}(z) = g⁻¹(exp(gz) - 1)·exp(hz²/2)`.
pub fn tau(z: f64, g: f64, h: f64) -> f64 {
    expm1_ratio(g, z) * (0.5 * h * z * z).exp()
}

/// `dτ/dz = [exp(gz) + g⁻¹(exp(gz) - 1)hz]·exp(hz²/2)`.
pub fn tau_prime(z: f64, g: f64, h: f64) -> f64 {
    let gz = if g.abs() <= G_SWITCH { 0.0 } else { g * z };
    (gz.exp() + expm1_ratio(g, z) * h * z) * (0.5 * h * z * z).exp()
}

/// `(∂τ/∂g, ∂τ/∂h)` at fixed `z`.
pub fn tau_shape_grad(z: f64, g: f64, h: f64) -> (f64, f64) {
    let e = (0.5 * h * z * z).exp();
    (
        expm1_ratio_dg(g, z) * e,
        expm1_ratio(g, z) * e * 0.5 * z * z,
    )
}

/// Inverts `τ_{g,h}` numerically.
///
/// The root is bracketed starting from `x/(1+h)` with geometric expansion,
/// then refined by Newton steps that fall back to bisection whenever they
/// leave the bracket. Returns `z` with `|τ(z) - x| <= tol·max(1, |x|)`.
pub fn tau_inverse(x: f64, g: f64, h: f64, tol: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(GhError::Domain(format!("cannot invert tau at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // With h = 0 the support of τ is a half line bounded by -1/g.
    if h == 0.0 && g.abs() > G_SWITCH {
        let bound = -1.0 / g;
        if (g > 0.0 && x <= bound) || (g < 0.0 && x >= bound) {
            return Err(GhError::OutOfSupport { value: x });
        }
    }
    let target = tol * x.abs().max(1.0);
    let f = |z: f64| tau(z, g, h) - x;

    let z0 = x / (1.0 + h);
    let (mut lo, mut hi) = if x > 0.0 { (0.0, z0) } else { (z0, 0.0) };
    // expand the outer end until the sign changes
    let mut expansions = 0;
    if x > 0.0 {
        while f(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            expansions += 1;
            if expansions > 1100 || !hi.is_finite() {
                return Err(GhError::OutOfSupport { value: x });
            }
        }
    } else {
        while f(lo) > 0.0 {
            hi = lo;
            lo *= 2.0;
            expansions += 1;
            if expansions > 1100 || !lo.is_finite() {
                return Err(GhError::OutOfSupport { value: x });
            }
        }
    }

    let mut z = if x > 0.0 { hi } else { lo };
    let mut prev_resid = f64::INFINITY;
    for _ in 0..ROOT_MAX_ITER {
        let tz = tau(z, g, h);
        let fz = tz - x;
        if fz.is_nan() {
            z = 0.5 * (lo + hi);
            continue;
        }
        if fz < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let slope = tau_prime(z, g, h);
        // Far from the origin τ grows like exp(hz²/2); Newton on ln(τ/x) keeps
        // its steps proportionate there.
        let newton = if x.abs() > 1.0 && tz.is_finite() && tz * x > 0.0 {
            z - (tz / x).ln() * tz / slope
        } else {
            z - fz / slope
        };
        if fz.abs() <= target {
            // one polishing step, kept only if it stays bracketed
            let polish = z - fz / slope;
            if polish.is_finite() && polish >= lo && polish <= hi {
                return Ok(polish);
            }
            return Ok(z);
        }
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(z);
        }
        // bisect when Newton leaves the bracket or stops halving the residual
        let in_bracket = newton.is_finite() && newton > lo && newton < hi;
        z = if in_bracket && fz.abs() <= 0.5 * prev_resid {
            newton
        } else {
            0.5 * (lo + hi)
        };
        prev_resid = fz.abs();
    }
    Err(GhError::RootNotConverged {
        target: x,
        iterations: ROOT_MAX_ITER,
    })
}

/// `log(exp(-gz)·B)` pieces: returns `(ln B, c)` where
/// `B = exp(gz) + g⁻¹(exp(gz) - 1)hz` and `c = z·(1 - exp(-gz))/g`.
#[inline]
fn log_bracket(z: f64, g: f64, h: f64) -> (f64, f64) {
    let gz = if g.abs() <= G_SWITCH { 0.0 } else { g * z };
    let c = z * expm1_ratio(-g, z);
    (gz + (h * c).ln_1p(), c)
}

/// Log-density written as a function of the normal score `z`:
/// `-(1+h)z²/2 - ln[exp(gz) + g⁻¹(exp(gz)-1)hz] - ln ω - ln(2π)/2`.
pub fn varphi(z: f64, p: &GhParams) -> f64 {
    let (ln_b, _) = log_bracket(z, p.g, p.h);
    -0.5 * (1.0 + p.h) * z * z - ln_b - p.omega.ln() - HALF_LN_2PI
}

/// Derivative of [`varphi`] in `z` with `θ` held fixed.
pub fn dvarphi_dz(z: f64, p: &GhParams) -> f64 {
    let (g, h) = (p.g, p.h);
    let gz = if g.abs() <= G_SWITCH { 0.0 } else { g * z };
    let em = expm1_ratio(-g, z);
    let ratio = (em + z * (-gz).exp()) / (1.0 + h * z * em);
    -(1.0 + h) * z - g - h * ratio
}

/// Partial derivatives of [`varphi`] in `(ξ, ω, g, h)` with `z` held fixed.
pub fn varphi_param_grad(z: f64, p: &GhParams) -> [f64; 4] {
    let (g, h) = (p.g, p.h);
    let gz = if g.abs() <= G_SWITCH { 0.0 } else { g * z };
    let em = expm1_ratio(-g, z);
    let denom = 1.0 + h * z * em;
    let dlnb_dh = z * em / denom;
    let dlnb_dg = (z + h * z * expm1_ratio_dg(g, z) * (-gz).exp()) / denom;
    [0.0, -1.0 / p.omega, -dlnb_dg, -0.5 * z * z - dlnb_dh]
}

/// Normal score `τ⁻¹((y - ξ)/ω)` of an observation.
pub fn z_score(y: f64, p: &GhParams, tol: f64) -> Result<f64> {
    tau_inverse((y - p.xi) / p.omega, p.g, p.h, tol)
}

/// Exact log-density via numeric inversion of `τ`; `-inf` outside the support.
pub fn log_density_exact(y: f64, p: &GhParams, tol: f64) -> Result<f64> {
    match z_score(y, p, tol) {
        Ok(z) => Ok(varphi(z, p)),
        Err(GhError::OutOfSupport { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Gradient in `θ` of the exact log-density (total derivative through `z_p(θ)`).
pub fn log_density_exact_grad(y: f64, p: &GhParams, tol: f64) -> Result<[f64; 4]> {
    let z = z_score(y, p, tol)?;
    let u = (y - p.xi) / p.omega;
    let tp = tau_prime(z, p.g, p.h);
    let (tg, th) = tau_shape_grad(z, p.g, p.h);
    let dz = [
        -1.0 / (p.omega * tp),
        -u / (p.omega * tp),
        -tg / tp,
        -th / tp,
    ];
    let mut grad = varphi_param_grad(z, p);
    let slope = dvarphi_dz(z, p);
    for j in 0..4 {
        grad[j] += slope * dz[j];
    }
    Ok(grad)
}

/// Exact log-likelihood `Σ log f(y_i)`.
pub fn log_likelihood_exact(s: &Sample, p: &GhParams, tol: f64) -> Result<f64> {
    let mut acc = 0.0;
    for &y in s.values() {
        acc += log_density_exact(y, p, tol)?;
        if acc == f64::NEG_INFINITY {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// `ξ + ω·τ(Φ⁻¹(prob))`.
pub fn quantile(prob: f64, p: &GhParams) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(GhError::Domain(format!("probability {prob} not in (0, 1)")));
    }
    Ok(p.xi + p.omega * tau(StdNormal::inv_cdf(prob), p.g, p.h))
}

pub fn cdf(y: f64, p: &GhParams, tol: f64) -> Result<f64> {
    if y == f64::INFINITY {
        return Ok(1.0);
    }
    if y == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    match z_score(y, p, tol) {
        Ok(z) => Ok(StdNormal::cdf(z)),
        Err(GhError::OutOfSupport { .. }) => {
            // g > 0 bounds the support from below, g < 0 from above
            Ok(if p.g > 0.0 { 0.0 } else { 1.0 })
        }
        Err(e) => Err(e),
    }
}

/// Draws `n` values in generation order.
pub fn sample_values(n: usize, p: &GhParams, seed: u64) -> Vec<f64> {
    let mut stream = NormalStream::new(seed);
    (0..n)
        .map(|_| p.xi + p.omega * tau(stream.next_normal(), p.g, p.h))
        .collect()
}

/// Draws a sorted sample of size `n`; identical output for identical seeds.
pub fn sample(n: usize, p: &GhParams, seed: u64) -> Result<Sample> {
    p.validate()?;
    if n == 0 {
        return Err(GhError::InsufficientSample { needed: 1, got: 0 });
    }
    Sample::new(sample_values(n, p, seed))
}
