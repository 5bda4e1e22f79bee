//! Box-constrained quasi-Newton maximizer.
//!
//! Projected BFGS: the search direction is built from an inverse-Hessian
//! approximation restricted to the free variables, trial points are projected
//! back into the box, and an Armijo backtracking search along the projected
//! path picks the step. Non-finite objective values (in particular the `-inf`
//! returned outside the support region) count as rejected trial steps.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};

/// Objective to be maximized.
pub trait Objective {
    /// Value and gradient at `x`, or `None` when `x` is infeasible.
    fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)>;

    /// Value only; `-inf` or NaN marks infeasible points.
    fn value(&mut self, x: &[f64]) -> f64 {
        self.value_and_gradient(x)
            .map_or(f64::NEG_INFINITY, |(v, _)| v)
    }

    /// When true, trial points are evaluated with their gradient in one call.
    /// Worth it when the gradient costs about as much as the value.
    fn joint_evaluation(&self) -> bool {
        false
    }
}

/// Wraps a value closure and a gradient closure.
pub struct FnObjective<F, G> {
    pub value: F,
    pub gradient: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> Option<Vec<f64>>,
{
    fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let v = (self.value)(x);
        if !v.is_finite() {
            return None;
        }
        (self.gradient)(x).map(|g| (v, g))
    }

    fn value(&mut self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
}

/// Per-coordinate box; infinite entries mean unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn unbounded(dim: usize) -> Self {
        Self {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    /// The g-and-h parameter box: `ω >= omega_min`, `h >= 0`.
    pub fn gh(omega_min: f64) -> Self {
        let mut b = Self::unbounded(4);
        b.lower[1] = omega_min;
        b.lower[3] = 0.0;
        b
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Projected-gradient tolerance, relative to `max(1, |f|)`.
    pub tol: f64,
    /// Relative change in `f` below which the run stops.
    pub ftol: f64,
    /// Relative gain per step counted as slow progress. `slow_steps`
    /// consecutive slow steps end the run; this catches zigzagging across
    /// kinks of a piecewise smooth objective.
    pub slow_ftol: f64,
    pub slow_steps: usize,
    pub max_iter: usize,
    pub max_backtracks: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            ftol: 1e-12,
            slow_ftol: 1e-9,
            slow_steps: 8,
            max_iter: 500,
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientTolerance,
    FunctionTolerance,
    LineSearchStall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub projected_gradient_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// Coordinates sitting on a bound at the optimum.
    pub active: Vec<bool>,
}

const STALL_GRADIENT_TOL: f64 = 1e-5;
const ARMIJO: f64 = 1e-4;

/// Maximizes `obj` over the box, keeping coordinates with `frozen[i]` at `x0[i]`.
///
/// The objective is never evaluated outside `bounds`. Returns
/// [`GhError::NotConverged`] with the best iterate when `max_iter` runs out.
pub fn optimize_box(
    obj: &mut dyn Objective,
    x0: &[f64],
    bounds: &Bounds,
    frozen: &[bool],
    opts: &OptimizerOptions,
) -> Result<OptimumRecord> {
    let n = x0.len();
    if bounds.dim() != n || frozen.len() != n {
        return Err(GhError::Precondition(
            "dimension mismatch in optimizer inputs".into(),
        ));
    }
    let mut x = x0.to_vec();
    bounds.project(&mut x);
    let mut evals = 1;
    let (mut f, grad) = obj
        .value_and_gradient(&x)
        .filter(|(v, g)| v.is_finite() && g.iter().all(|c| c.is_finite()))
        .ok_or_else(|| {
            GhError::Precondition("objective is not finite at the starting point".into())
        })?;
    // work with the gradient of -f so the algebra reads as minimization
    let mut g = DVector::from_iterator(n, grad.iter().map(|v| -v));
    let mut hinv = DMatrix::<f64>::identity(n, n);
    let mut fresh = true;
    let mut slow = 0;

    for iter in 0..opts.max_iter {
        let active = active_set(&x, &g, bounds, frozen);
        let pg = projected_norm(&g, &active);
        if pg <= opts.tol * f.abs().max(1.0) {
            return Ok(record(
                x,
                f,
                &g,
                pg,
                iter,
                evals,
                true,
                Termination::GradientTolerance,
                bounds,
                frozen,
            ));
        }

        let mut dir = direction(&hinv, &g, &active);
        if fresh || dir.dot(&g) >= 0.0 {
            hinv = DMatrix::identity(n, n);
            dir = first_step(&g, &active, &x);
            fresh = true;
        }

        let search = line_search(obj, &x, f, &g, &dir, bounds, opts, &mut evals);
        let Some((x_new, _, grad_new)) = search else {
            if !fresh {
                hinv = DMatrix::identity(n, n);
                fresh = true;
                continue;
            }
            let ok = pg <= STALL_GRADIENT_TOL * f.abs().max(1.0);
            return Ok(record(
                x,
                f,
                &g,
                pg,
                iter,
                evals,
                ok,
                Termination::LineSearchStall,
                bounds,
                frozen,
            ));
        };
        let evaluated = match grad_new {
            Some(pair) => Some(pair),
            None => {
                evals += 1;
                obj.value_and_gradient(&x_new)
            }
        };
        let Some((f_acc, grad_new)) =
            evaluated.filter(|(v, gr)| v.is_finite() && gr.iter().all(|c| c.is_finite()))
        else {
            let ok = pg <= STALL_GRADIENT_TOL * f.abs().max(1.0);
            return Ok(record(
                x,
                f,
                &g,
                pg,
                iter,
                evals,
                ok,
                Termination::LineSearchStall,
                bounds,
                frozen,
            ));
        };
        let g_new = DVector::from_iterator(n, grad_new.iter().map(|v| -v));

        let s = DVector::from_iterator(n, (0..n).map(|i| x_new[i] - x[i]));
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if fresh {
                // Shanno scaling of the initial inverse Hessian
                hinv *= sy / y.dot(&y);
            }
            let rho = 1.0 / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            hinv += (&s * s.transpose()) * (rho * (1.0 + rho * yhy))
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
            fresh = false;
        }

        let df = f_acc - f;
        x = x_new;
        f = f_acc;
        g = g_new;

        slow = if df.abs() <= opts.slow_ftol * f.abs().max(1.0) {
            slow + 1
        } else {
            0
        };
        if df.abs() <= opts.ftol * f.abs().max(1.0) || slow >= opts.slow_steps {
            let active = active_set(&x, &g, bounds, frozen);
            let pg = projected_norm(&g, &active);
            return Ok(record(
                x,
                f,
                &g,
                pg,
                iter + 1,
                evals,
                true,
                Termination::FunctionTolerance,
                bounds,
                frozen,
            ));
        }
    }
    Err(GhError::NotConverged {
        iterations: opts.max_iter,
        value: f,
        best: x,
    })
}

/// Coordinates that may not move: frozen, or on a bound with the descent
/// direction pointing out of the box.
fn active_set(x: &[f64], g: &DVector<f64>, b: &Bounds, frozen: &[bool]) -> Vec<bool> {
    (0..x.len())
        .map(|i| {
            frozen[i] || (x[i] <= b.lower[i] && g[i] > 0.0) || (x[i] >= b.upper[i] && g[i] < 0.0)
        })
        .collect()
}

fn projected_norm(g: &DVector<f64>, active: &[bool]) -> f64 {
    g.iter()
        .zip(active)
        .filter(|(_, &a)| !a)
        .fold(0.0, |m, (v, _)| m.max(v.abs()))
}

fn direction(hinv: &DMatrix<f64>, g: &DVector<f64>, active: &[bool]) -> DVector<f64> {
    let n = g.len();
    let mut d = DVector::zeros(n);
    for i in (0..n).filter(|&i| !active[i]) {
        d[i] = -(0..n)
            .filter(|&j| !active[j])
            .map(|j| hinv[(i, j)] * g[j])
            .sum::<f64>();
    }
    d
}

/// Steepest descent scaled so the largest move is a tenth of the iterate's size.
fn first_step(g: &DVector<f64>, active: &[bool], x: &[f64]) -> DVector<f64> {
    let gmax = projected_norm(g, active);
    let xmax = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let scale = if gmax > 0.0 { 0.1 * xmax / gmax } else { 0.0 };
    DVector::from_iterator(
        g.len(),
        g.iter()
            .zip(active)
            .map(|(v, &a)| if a { 0.0 } else { -v * scale }),
    )
}

/// Accepted trial point, its value, and its gradient when already computed.
type Accepted = (Vec<f64>, f64, Option<(f64, Vec<f64>)>);

#[allow(clippy::too_many_arguments)]
fn line_search(
    obj: &mut dyn Objective,
    x: &[f64],
    f: f64,
    g: &DVector<f64>,
    dir: &DVector<f64>,
    bounds: &Bounds,
    opts: &OptimizerOptions,
    evals: &mut usize,
) -> Option<Accepted> {
    let joint = obj.joint_evaluation();
    let mut alpha = 1.0;
    let mut trial = vec![0.0; x.len()];
    for _ in 0..opts.max_backtracks {
        for i in 0..x.len() {
            trial[i] = x[i] + alpha * dir[i];
        }
        bounds.project(&mut trial);
        let decrease: f64 = (0..x.len()).map(|i| g[i] * (trial[i] - x[i])).sum();
        if decrease < 0.0 {
            *evals += 1;
            let (ft, pair) = if joint {
                match obj.value_and_gradient(&trial) {
                    Some((v, gr)) => (v, Some((v, gr))),
                    None => (f64::NEG_INFINITY, None),
                }
            } else {
                (obj.value(&trial), None)
            };
            // maximizing f: require f(trial) >= f + c·|predicted gain|
            if ft.is_finite() && ft >= f - ARMIJO * decrease {
                return Some((trial, ft, pair));
            }
        } else if trial.iter().zip(x).all(|(a, b)| a == b) {
            return None;
        }
        alpha *= 0.5;
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn record(
    x: Vec<f64>,
    f: f64,
    g: &DVector<f64>,
    pg: f64,
    iterations: usize,
    evaluations: usize,
    converged: bool,
    termination: Termination,
    bounds: &Bounds,
    frozen: &[bool],
) -> OptimumRecord {
    let active = (0..x.len())
        .map(|i| !frozen[i] && (x[i] <= bounds.lower[i] || x[i] >= bounds.upper[i]))
        .collect();
    OptimumRecord {
        gradient: g.iter().map(|v| -v).collect(),
        x,
        value: f,
        projected_gradient_norm: pg,
        iterations,
        evaluations,
        converged,
        termination,
        active,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quad {
        c: Vec<f64>,
    }

    impl Objective for Quad {
        fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
            let v = -x
                .iter()
                .zip(&self.c)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>();
            let g = x.iter().zip(&self.c).map(|(a, b)| -2.0 * (a - b)).collect();
            Some((v, g))
        }
    }

    fn free(n: usize) -> Vec<bool> {
        vec![false; n]
    }

    #[test]
    fn interior_quadratic() {
        let mut q = Quad {
            c: vec![1.0, 2.0, 3.0, 0.5],
        };
        let r = optimize_box(
            &mut q,
            &[0.0; 4],
            &Bounds::gh(1e-8),
            &free(4),
            &Default::default(),
        )
        .unwrap();
        for (a, b) in r.x.iter().zip(&[1.0, 2.0, 3.0, 0.5]) {
            assert!((a - b).abs() < 1e-7);
        }
        assert!(r.converged);
        assert!(r.active.iter().all(|a| !a));
    }

    #[test]
    fn boundary_optimum_is_flagged() {
        let mut q = Quad {
            c: vec![0.0, 1.0, 0.0, -1.0],
        };
        let r = optimize_box(
            &mut q,
            &[0.3, 2.0, 0.1, 0.5],
            &Bounds::gh(1e-8),
            &free(4),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(r.x[3], 0.0);
        assert!(r.active[3]);
        assert!(r.converged);
    }

    #[test]
    fn frozen_coordinates_stay_put() {
        let mut q = Quad {
            c: vec![1.0, 2.0, 3.0, 4.0],
        };
        let frozen = [false, false, true, true];
        let r = optimize_box(
            &mut q,
            &[0.0, 1.0, 0.0, 0.0],
            &Bounds::gh(1e-8),
            &frozen,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(&r.x[2..], &[0.0, 0.0]);
        assert!((r.x[0] - 1.0).abs() < 1e-7 && (r.x[1] - 2.0).abs() < 1e-7);
    }

    struct Rosenbrock;

    impl Objective for Rosenbrock {
        fn value_and_gradient(&mut self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
            let n = x.len();
            let mut v = 0.0;
            let mut g = vec![0.0; n];
            for i in 0..n - 1 {
                let a = x[i + 1] - x[i] * x[i];
                let b = 1.0 - x[i];
                v += 100.0 * a * a + b * b;
                g[i] += -400.0 * x[i] * a - 2.0 * b;
                g[i + 1] += 200.0 * a;
            }
            Some((-v, g.iter().map(|c| -c).collect()))
        }
    }

    #[test]
    fn rosenbrock_four_dimensional() {
        let opts = OptimizerOptions {
            ftol: 0.0,
            slow_ftol: 0.0,
            ..Default::default()
        };
        let r = optimize_box(
            &mut Rosenbrock,
            &[-1.2, 1.0, -1.2, 1.0],
            &Bounds::unbounded(4),
            &free(4),
            &opts,
        )
        .unwrap();
        assert!(r.converged);
        for v in &r.x {
            assert!((v - 1.0).abs() < 1e-6, "{:?}", r.x);
        }
    }

    #[test]
    fn kinked_maximum_terminates() {
        // piecewise linear in x0 with a ridge at 1; gradients flip across it
        let mut obj = FnObjective {
            value: |x: &[f64]| -(x[0] - 1.0).abs() - 0.5 * x[1] * x[1],
            gradient: |x: &[f64]| Some(vec![-(x[0] - 1.0).signum(), -x[1]]),
        };
        let r = optimize_box(
            &mut obj,
            &[3.3, 2.0],
            &Bounds::unbounded(2),
            &free(2),
            &Default::default(),
        )
        .unwrap();
        assert!(r.converged, "{:?}", r.termination);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-3 && r.x[1].abs() < 1e-3,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn infeasible_region_is_avoided() {
        // objective is -inf for x0 > 2; optimum of the smooth part lies at 5
        let mut obj = FnObjective {
            value: |x: &[f64]| {
                if x[0] > 2.0 {
                    f64::NEG_INFINITY
                } else {
                    -(x[0] - 5.0).powi(2)
                }
            },
            gradient: |x: &[f64]| Some(vec![-2.0 * (x[0] - 5.0)]),
        };
        let r = optimize_box(
            &mut obj,
            &[0.0],
            &Bounds::unbounded(1),
            &free(1),
            &Default::default(),
        )
        .unwrap();
        assert!(r.x[0] <= 2.0 && r.x[0] > 1.9);
        assert!(r.value.is_finite());
    }

    #[test]
    fn iteration_cap_reports_best_iterate() {
        let opts = OptimizerOptions {
            max_iter: 2,
            ftol: 0.0,
            slow_ftol: 0.0,
            ..Default::default()
        };
        let err = optimize_box(
            &mut Rosenbrock,
            &[-1.2, 1.0, -1.2, 1.0],
            &Bounds::unbounded(4),
            &free(4),
            &opts,
        )
        .unwrap_err();
        match err {
            GhError::NotConverged { best, value, .. } => {
                assert_eq!(best.len(), 4);
                assert!(value.is_finite());
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_infeasible_start() {
        let mut obj = FnObjective {
            value: |_: &[f64]| f64::NEG_INFINITY,
            gradient: |_: &[f64]| None,
        };
        assert!(optimize_box(
            &mut obj,
            &[0.0],
            &Bounds::unbounded(1),
            &free(1),
            &Default::default()
        )
        .is_err());
    }
}
