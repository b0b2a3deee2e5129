//! Seeded gradient descent on the quadratic-feasibility loss.
//!
//! The iterate update is `x ← x − η·G(x)` with `G = 2·g_x` the
//! real-coordinate gradient. Steps come from a fixed size or Armijo
//! backtracking; termination is by gradient norm (scaled by the initial
//! loss), iteration budget, or a non-finite/diverging loss. An optional
//! ball perturbation kicks the iterate off near-stationary points.

use rand::Rng;

use crate::error::{Error, Result};
use crate::loss::LossProblem;
use crate::phase::equiv_distance;
use crate::seeding::{rng_for, stream};
use crate::vector::ComplexVector;

#[derive(Debug, Clone, PartialEq)]
pub enum StepPolicy {
    /// Constant step size η > 0.
    Fixed { eta: f64 },
    /// Armijo backtracking: shrink the trial step by `shrink` until
    /// `f(x − ηG) ≤ f(x) − armijo·η·‖G‖²`.
    Backtracking { shrink: f64, armijo: f64 },
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Backtracking { shrink: 0.5, armijo: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    /// Complex Gaussian start; `component_std = None` uses `1/√(2n)`,
    /// which gives unit expected squared norm.
    RandomGaussian { component_std: Option<f64> },
    /// Start from the given point.
    Given(ComplexVector),
}

impl Default for InitStrategy {
    fn default() -> Self {
        InitStrategy::RandomGaussian { component_std: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbConfig {
    /// Ball radius of the kick.
    pub radius: f64,
    /// Fire when the gradient norm drops below this (but convergence has
    /// not been declared).
    pub trigger_grad_tol: f64,
    /// Minimum iterations between kicks.
    pub cooldown: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub step_policy: StepPolicy,
    pub max_iters: usize,
    /// Gradient tolerance scale; the effective tolerance is
    /// `grad_tol·(1 + f(x₀))`.
    pub grad_tol: f64,
    /// Recovery succeeds when `rel_error < success_tol`.
    pub success_tol: f64,
    pub perturb: Option<PerturbConfig>,
    pub init: InitStrategy,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_policy: StepPolicy::default(),
            max_iters: 5000,
            grad_tol: 1e-8,
            success_tol: 1e-5,
            perturb: None,
            init: InitStrategy::default(),
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        match &self.step_policy {
            StepPolicy::Fixed { eta } => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(Error::InvalidParameter(format!("step size must be > 0, got {eta}")));
                }
            }
            StepPolicy::Backtracking { shrink, armijo } => {
                if !(*shrink > 0.0 && *shrink < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "backtracking shrink must lie in (0, 1), got {shrink}"
                    )));
                }
                if !(*armijo > 0.0 && *armijo < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "armijo constant must lie in (0, 1), got {armijo}"
                    )));
                }
            }
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidParameter("grad_tol must be > 0".into()));
        }
        if !(self.success_tol > 0.0) {
            return Err(Error::InvalidParameter("success_tol must be > 0".into()));
        }
        if let Some(pc) = &self.perturb {
            if !(pc.radius >= 0.0 && pc.radius.is_finite()) {
                return Err(Error::InvalidParameter("perturbation radius must be >= 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub f: f64,
    pub grad_norm: f64,
    /// Step size taken from this iterate (0 on the terminal row, the kick
    /// radius on perturbation rows).
    pub step: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
}

impl SolverTrace {
    /// CSV export with header `iter,f,grad_norm,step`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,f,grad_norm,step\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.iter, r.f, r.grad_norm, r.step));
        }
        out
    }
}

/// Recovery quality against a known ground truth.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub x_hat: ComplexVector,
    /// `d(x̂, z) / ‖z‖²`; zero exactly when x̂ is on the solution orbit.
    pub rel_error: f64,
    pub iterations: usize,
    /// Gradient tolerance met within budget.
    pub converged: bool,
    /// `rel_error < success_tol`; measured independently of convergence.
    pub success: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub x_hat: ComplexVector,
    pub iterations: usize,
    pub converged: bool,
    pub trace: SolverTrace,
    /// Present only when a ground truth was supplied.
    pub recovery: Option<RecoveryResult>,
}

/// Normalized orbit distance `d(x̂, z) / ‖z‖₂²`.
pub fn recovery_error(x_hat: &ComplexVector, z: &ComplexVector) -> Result<f64> {
    if z.norm_sqr() == 0.0 {
        return Err(Error::ZeroGroundTruth);
    }
    Ok(equiv_distance(x_hat, z)? / z.norm_sqr())
}

/// Ball kick for near-stationary iterates: returns `x + ball(radius)` when
/// the gradient norm is below the trigger and the cooldown has elapsed,
/// otherwise `x` unchanged.
pub fn perturb_if_stalled<R: Rng>(
    x: &ComplexVector,
    grad_norm: f64,
    iters_since_last_kick: Option<usize>,
    cfg: &PerturbConfig,
    rng: &mut R,
) -> ComplexVector {
    let in_cooldown = iters_since_last_kick.is_some_and(|k| k < cfg.cooldown);
    if grad_norm < cfg.trigger_grad_tol && !in_cooldown {
        x.random_in_ball(cfg.radius, rng)
    } else {
        x.clone()
    }
}

/// Run gradient descent. With a ground truth the output carries a
/// [`RecoveryResult`]; otherwise only the final point and trace.
pub fn solve(
    problem: &LossProblem,
    cfg: &SolverConfig,
    truth: Option<&ComplexVector>,
) -> Result<SolveOutput> {
    cfg.validate()?;
    let n = problem.n();
    let mut init_rng = rng_for(cfg.seed, stream::INIT, 0);
    let mut x = match &cfg.init {
        InitStrategy::RandomGaussian { component_std } => {
            let std = component_std.unwrap_or(1.0 / ((2 * n) as f64).sqrt());
            ComplexVector::random_gaussian(n, std, &mut init_rng)
        }
        InitStrategy::Given(x0) => {
            if x0.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: x0.dim() });
            }
            x0.clone()
        }
    };
    let mut perturb_rng = rng_for(cfg.seed, stream::PERTURB, 0);

    let (mut f, mut grad) = problem.loss_and_gradient(&x)?;
    let mut trace = SolverTrace::default();
    if !f.is_finite() {
        return Err(Error::NonFiniteLoss { iter: 0, trace: Box::new(trace) });
    }
    let f0 = f;
    let tol = cfg.grad_tol * (1.0 + f0);
    let divergence_cap = if f0 > 0.0 { 10.0 * f0 } else { f64::INFINITY };

    let mut eta_next = {
        let g0 = grad.real_norm();
        if g0 > 0.0 {
            0.1 / g0
        } else {
            1.0
        }
    };
    let mut last_kick: Option<usize> = None;
    let mut k = 0usize;
    let converged;

    loop {
        let gn = grad.real_norm();
        if k >= cfg.max_iters {
            trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: 0.0 });
            converged = false;
            break;
        }
        if gn <= tol {
            trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: 0.0 });
            converged = true;
            break;
        }

        if let Some(pc) = &cfg.perturb {
            let since = last_kick.map(|at| k - at);
            let kicked = perturb_if_stalled(&x, gn, since, pc, &mut perturb_rng);
            if kicked != x {
                trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: pc.radius });
                x = kicked;
                last_kick = Some(k);
                let fg = problem.loss_and_gradient(&x)?;
                f = fg.0;
                grad = fg.1;
                if !f.is_finite() {
                    return Err(Error::NonFiniteLoss { iter: k, trace: Box::new(trace) });
                }
                k += 1;
                continue;
            }
        }

        let g_vec = grad.real_gradient();
        let step = match &cfg.step_policy {
            StepPolicy::Fixed { eta } => Some(*eta),
            StepPolicy::Backtracking { shrink, armijo } => {
                let mut eta = eta_next;
                let mut accepted = None;
                for _ in 0..100 {
                    let x_try = x.add_scaled(-eta, &g_vec);
                    let f_try = problem.loss(&x_try)?;
                    if f_try.is_finite() && f_try <= f - armijo * eta * gn * gn {
                        accepted = Some(eta);
                        break;
                    }
                    eta *= shrink;
                }
                accepted
            }
        };

        let Some(eta) = step else {
            // No acceptable step at this precision; stop here.
            trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: 0.0 });
            converged = false;
            break;
        };

        let x_next = x.add_scaled(-eta, &g_vec);
        let (f_next, g_next) = problem.loss_and_gradient(&x_next)?;
        if !f_next.is_finite() {
            trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: eta });
            return Err(Error::NonFiniteLoss { iter: k, trace: Box::new(trace) });
        }
        if f_next > divergence_cap {
            trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: eta });
            return Err(Error::Diverged { iter: k, threshold: divergence_cap, trace: Box::new(trace) });
        }

        trace.rows.push(TraceRow { iter: k, f, grad_norm: gn, step: eta });
        x = x_next;
        f = f_next;
        grad = g_next;
        eta_next = eta * 2.0;
        k += 1;
    }

    let recovery = match truth {
        Some(z) => {
            let rel_error = recovery_error(&x, z)?;
            Some(RecoveryResult {
                x_hat: x.clone(),
                rel_error,
                iterations: k,
                converged,
                success: rel_error < cfg.success_tol,
            })
        }
        None => None,
    };

    Ok(SolveOutput { x_hat: x, iterations: k, converged, trace, recovery })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::MeasurementEnsemble;

    fn instance(n: usize, m: usize, seed: u64) -> (LossProblem, ComplexVector) {
        let ens = MeasurementEnsemble::sample_hermitian_gaussian(n, m, 1.0, seed).unwrap();
        let mut rng = rng_for(seed, stream::GROUND_TRUTH, 0);
        let z = ComplexVector::random_unit(n, &mut rng);
        (LossProblem::noiseless(ens, &z).unwrap(), z)
    }

    #[test]
    fn starting_at_truth_converges_immediately() {
        let (p, z) = instance(4, 40, 7);
        let cfg = SolverConfig { init: InitStrategy::Given(z.clone()), ..Default::default() };
        let out = solve(&p, &cfg, Some(&z)).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
        let rec = out.recovery.unwrap();
        assert_eq!(rec.rel_error, 0.0);
        assert!(rec.success);
    }

    #[test]
    fn zero_budget_returns_initial_point_unconverged() {
        let (p, z) = instance(4, 40, 7);
        let cfg = SolverConfig {
            init: InitStrategy::Given(z.clone()),
            max_iters: 0,
            ..Default::default()
        };
        let out = solve(&p, &cfg, Some(&z)).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(!out.converged);
        assert_eq!(out.x_hat, z);
    }

    #[test]
    fn random_init_recovers_small_instance() {
        let (p, z) = instance(4, 40, 7);
        let cfg = SolverConfig { seed: 7, ..Default::default() };
        let out = solve(&p, &cfg, Some(&z)).unwrap();
        let rec = out.recovery.unwrap();
        assert!(
            rec.success && rec.iterations <= 5000,
            "rel_error {} after {} iterations",
            rec.rel_error,
            rec.iterations
        );
    }

    #[test]
    fn backtracking_descent_is_monotone() {
        let (p, _) = instance(5, 30, 11);
        let cfg = SolverConfig { seed: 3, max_iters: 200, ..Default::default() };
        let out = solve(&p, &cfg, None).unwrap();
        for w in out.trace.rows.windows(2) {
            assert!(w[1].f <= w[0].f + 1e-12, "f rose: {} -> {}", w[0].f, w[1].f);
        }
        // Armijo decrease on every accepted step.
        for w in out.trace.rows.windows(2) {
            let row = w[0];
            if row.step > 0.0 {
                assert!(
                    w[1].f <= row.f - 1e-4 * row.step * row.grad_norm * row.grad_norm + 1e-12
                );
            }
        }
    }

    #[test]
    fn solve_is_deterministic_given_seed() {
        let (p, z) = instance(4, 40, 19);
        let cfg = SolverConfig { seed: 42, max_iters: 300, ..Default::default() };
        let a = solve(&p, &cfg, Some(&z)).unwrap();
        let b = solve(&p, &cfg, Some(&z)).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.x_hat, b.x_hat);
    }

    /// The loss and gradient norms are phase-equivariant, so the f-sequence
    /// from a rotated start is identical up to roundoff.
    #[test]
    fn phase_rotated_start_gives_identical_loss_sequence() {
        let (p, _) = instance(4, 24, 23);
        let mut rng = rng_for(23, stream::INIT, 5);
        let x0 = ComplexVector::random_gaussian(4, 0.5, &mut rng);
        let cfg = |x: ComplexVector| SolverConfig {
            init: InitStrategy::Given(x),
            max_iters: 150,
            ..Default::default()
        };
        let a = solve(&p, &cfg(x0.clone()), None).unwrap();
        let b = solve(&p, &cfg(x0.rotate(1.1)), None).unwrap();
        assert_eq!(a.trace.rows.len(), b.trace.rows.len());
        for (ra, rb) in a.trace.rows.iter().zip(&b.trace.rows) {
            assert!(
                (ra.f - rb.f).abs() <= 1e-10 * ra.f.abs().max(1.0),
                "iter {}: {} vs {}",
                ra.iter,
                ra.f,
                rb.f
            );
        }
    }

    #[test]
    fn fixed_step_divergence_is_reported() {
        let (p, _) = instance(4, 20, 29);
        let cfg = SolverConfig {
            step_policy: StepPolicy::Fixed { eta: 10.0 },
            seed: 1,
            ..Default::default()
        };
        let err = solve(&p, &cfg, None).unwrap_err();
        match err {
            Error::Diverged { trace, .. } => assert!(!trace.rows.is_empty()),
            Error::NonFiniteLoss { trace, .. } => assert!(!trace.rows.is_empty()),
            other => panic!("expected divergence, got {other}"),
        }
    }

    #[test]
    fn recovery_error_contract() {
        let mut rng = rng_for(31, stream::PAIR, 0);
        let z = ComplexVector::random_unit(4, &mut rng);
        assert!(recovery_error(&z.rotate(2.1), &z).unwrap() <= 1e-12);

        let zero = ComplexVector::zeros(4);
        let e = recovery_error(&zero, &z).unwrap();
        assert!((e - 1.0).abs() <= 1e-12, "d(0, z)/‖z‖² = {e}");

        assert!(matches!(recovery_error(&z, &zero), Err(Error::ZeroGroundTruth)));

        let x = ComplexVector::random_gaussian(4, 1.0, &mut rng);
        let direct = equiv_distance(&x, &z).unwrap() / z.norm_sqr();
        assert_eq!(recovery_error(&x, &z).unwrap(), direct);
    }

    #[test]
    fn perturbation_contract() {
        let mut rng_a = rng_for(37, stream::PERTURB, 0);
        let mut rng_b = rng_for(37, stream::PERTURB, 0);
        let x = ComplexVector::basis(3, 1);
        let pc = PerturbConfig { radius: 0.25, trigger_grad_tol: 1e-3, cooldown: 10 };

        // Trigger not met: unchanged.
        let same = perturb_if_stalled(&x, 1.0, None, &pc, &mut rng_a);
        assert_eq!(same, x);

        // Trigger met: moves within the ball, deterministically.
        let a = perturb_if_stalled(&x, 1e-4, None, &pc, &mut rng_a);
        let _ = perturb_if_stalled(&x, 1.0, None, &pc, &mut rng_b);
        let b = perturb_if_stalled(&x, 1e-4, None, &pc, &mut rng_b);
        assert_eq!(a, b);
        assert!(a.sub(&x).norm() <= 0.25 + 1e-12);

        // Cooldown suppresses the kick.
        let held = perturb_if_stalled(&x, 1e-4, Some(3), &pc, &mut rng_a);
        assert_eq!(held, x);
    }

    #[test]
    fn trace_csv_has_header_and_rows() {
        let (p, _) = instance(3, 12, 41);
        let cfg = SolverConfig { seed: 2, max_iters: 5, ..Default::default() };
        let out = solve(&p, &cfg, None).unwrap();
        let csv = out.trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("iter,f,grad_norm,step"));
        assert_eq!(csv.lines().count(), out.trace.rows.len() + 1);
    }
}
