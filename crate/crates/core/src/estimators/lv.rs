use super::{sample_quantile, FitResult, Method, QuantileSet};
use crate::error::{GhError, Result};
use crate::ghdist::GhParams;
use crate::normal::StdNormal;
use crate::sample::Sample;

/// `sinh(x)/x`, accurate near zero.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Letter-value estimator.
///
/// `ξ` is the sample median. Each lower-tail probability `p` with mirror
/// `1-p` gives a skewness estimate from the ratio of upper to lower
/// half-spreads; `g` is their median. `ln ω` and `h` are the intercept and
/// slope of a least-squares line of the log scaled full spread against
/// `z_p²/2`. A negative slope is clamped to zero. The returned objective is
/// the residual sum of squares of that regression.
pub fn fit_lv(s: &Sample, qs: &QuantileSet) -> Result<FitResult> {
    if qs.len() < 2 {
        return Err(GhError::Domain(
            "letter values need at least two probabilities".into(),
        ));
    }
    if qs.probs().iter().any(|&p| p >= 0.5) {
        return Err(GhError::Domain(
            "letter-value probabilities must be below 1/2".into(),
        ));
    }
    let q_mid = sample_quantile(s, 0.5)?;
    let mut lower = Vec::with_capacity(qs.len());
    let mut upper = Vec::with_capacity(qs.len());
    let mut zs = Vec::with_capacity(qs.len());
    let mut g_each = Vec::with_capacity(qs.len());
    for &p in qs.probs() {
        let lo = sample_quantile(s, p)?;
        let hi = sample_quantile(s, 1.0 - p)?;
        let z = StdNormal::inv_cdf(p);
        let (up, down) = (hi - q_mid, q_mid - lo);
        if !(up > 0.0 && down > 0.0) {
            return Err(GhError::DegenerateSample(format!(
                "zero quantile spacing at probability {p}"
            )));
        }
        g_each.push(-(up / down).ln() / z);
        lower.push(lo);
        upper.push(hi);
        zs.push(z);
    }
    let g = median(g_each);

    // response ln(ω) + h z²/2 for each letter value
    let mut xs = Vec::with_capacity(zs.len());
    let mut ys = Vec::with_capacity(zs.len());
    for ((&z, &lo), &hi) in zs.iter().zip(&lower).zip(&upper) {
        let arg = (lo - hi) / (2.0 * z * sinhc(g * z));
        if !(arg > 0.0 && arg.is_finite()) {
            return Err(GhError::DegenerateSample(format!(
                "nonpositive log argument at z = {z}"
            )));
        }
        xs.push(0.5 * z * z);
        ys.push(arg.ln());
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();

    let theta = GhParams::new(q_mid, intercept.exp(), g, slope.max(0.0))?;
    Ok(FitResult::new(Method::Lv, theta, rss))
}
