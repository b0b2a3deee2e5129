//! Strict-saddle certification, threshold calibration, landscape scans,
//! and the local-minimum-is-global trial battery.
//!
//! A point certifies in one of three ways, evaluated in order: its
//! gradient is large, the loss has strict negative curvature along the
//! phase-aligned direction toward the ground truth, or it is close to the
//! solution orbit. A point satisfying none of the three at the recorded
//! thresholds is a `Violation` — a reportable outcome, never a panic.
//!
//! The claims hold at *some* positive thresholds, with no usable values
//! supplied a priori, so a calibration pass pins them on pilot samples and
//! every report records the thresholds it was checked at.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::loss::{LossProblem, HESSIAN_MATRIX_MAX_DIM};
use crate::measurement::MeasurementEnsemble;
use crate::phase::{aligned_delta, equiv_distance};
use crate::seeding::{derive_seed, rng_for, stream};
use crate::solver::{solve, InitStrategy, SolverConfig};
use crate::util::percentile;
use crate::vector::ComplexVector;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Thresholds {
    /// Gradient-norm threshold of the large-gradient branch.
    pub beta_thr: f64,
    /// Curvature threshold: certify when `Q/‖[Δ;Δ̄]‖² ≤ −ζ`.
    pub zeta: f64,
    /// Orbit-distance threshold of the near-minimum branch.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LargeGradient,
    NegativeCurvature,
    NearMinimum,
    Violation,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::LargeGradient => "large_gradient",
            Verdict::NegativeCurvature => "negative_curvature",
            Verdict::NearMinimum => "near_minimum",
            Verdict::Violation => "VIOLATION",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SaddleCertificate {
    pub point: ComplexVector,
    pub gradient_norm: f64,
    /// `Q(x)[Δ] / ‖[Δ; Δ̄]‖²` along the aligned direction; 0 when Δ = 0.
    pub curvature_along_delta: f64,
    pub distance_to_truth: f64,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
}

fn ensure_noiseless(problem: &LossProblem, z: &ComplexVector) -> Result<()> {
    let f = problem.loss(z)?;
    let scale = problem
        .observations()
        .values()
        .iter()
        .map(|c| c * c)
        .sum::<f64>()
        / problem.m() as f64;
    if f > 1e-16 * (1.0 + scale) {
        return Err(Error::InvalidParameter(
            "observations are not noiseless measurements of the supplied ground truth".into(),
        ));
    }
    Ok(())
}

/// Certify one point. The three branches are evaluated in order; the
/// verdict is the first that holds, `Violation` if none does.
pub fn saddle_certificate(
    problem: &LossProblem,
    z: &ComplexVector,
    x: &ComplexVector,
    thresholds: &Thresholds,
) -> Result<SaddleCertificate> {
    ensure_noiseless(problem, z)?;
    certify_unchecked(problem, z, x, thresholds)
}

fn certify_unchecked(
    problem: &LossProblem,
    z: &ComplexVector,
    x: &ComplexVector,
    thresholds: &Thresholds,
) -> Result<SaddleCertificate> {
    let gradient_norm = problem.wirtinger_gradient(x)?.real_norm();
    let ad = aligned_delta(x, z)?;
    let dn2 = ad.delta.norm_sqr();
    let curvature_along_delta = if dn2 > 0.0 {
        problem.hessian_quadratic_form(x, &ad.delta)? / (2.0 * dn2)
    } else {
        0.0
    };
    let distance_to_truth = equiv_distance(x, z)?;
    let verdict = if gradient_norm >= thresholds.beta_thr {
        Verdict::LargeGradient
    } else if dn2 > 0.0 && curvature_along_delta <= -thresholds.zeta {
        Verdict::NegativeCurvature
    } else if distance_to_truth <= thresholds.gamma {
        Verdict::NearMinimum
    } else {
        Verdict::Violation
    };
    Ok(SaddleCertificate {
        point: x.clone(),
        gradient_norm,
        curvature_along_delta,
        distance_to_truth,
        verdict,
        thresholds: *thresholds,
    })
}

/// Point generators for landscape sampling. Radii and spreads are
/// absolute; experiments conventionally use unit-norm ground truths.
#[derive(Debug, Clone)]
pub enum PointGenerator {
    /// Uniform in the complex ball of this radius around the origin.
    UniformBall { radius: f64 },
    /// Snapshots of gradient-descent trajectories from random starts.
    Trajectory { snapshots_per_run: usize, thin: usize },
    /// `e^{iθ}z` plus a Gaussian offset of expected norm `sigma`.
    NearOrbit { sigma: f64 },
    /// Exactly on the solution orbit.
    Orbit,
    /// 40% uniform ball, 40% trajectory, 20% near-orbit.
    Mixed { ball_radius: f64, near_sigma: f64 },
}

impl PointGenerator {
    pub fn default_mixed() -> Self {
        PointGenerator::Mixed { ball_radius: 3.0, near_sigma: 0.05 }
    }
}

/// Generate `count` sample points for certification.
pub fn generate_points(
    problem: &LossProblem,
    z: &ComplexVector,
    generator: &PointGenerator,
    count: usize,
    seed: u64,
) -> Result<Vec<ComplexVector>> {
    let n = problem.n();
    match generator {
        PointGenerator::UniformBall { radius } => Ok((0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, stream::POINTS, i as u64);
                ComplexVector::zeros(n).random_in_ball(*radius, &mut rng)
            })
            .collect()),
        PointGenerator::NearOrbit { sigma } => Ok((0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, stream::POINTS, i as u64);
                let theta: f64 = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                let offset =
                    ComplexVector::random_gaussian(n, sigma / ((2 * n) as f64).sqrt(), &mut rng);
                z.rotate(theta).add(&offset)
            })
            .collect()),
        PointGenerator::Orbit => Ok((0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, stream::POINTS, i as u64);
                let theta: f64 = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                z.rotate(theta)
            })
            .collect()),
        PointGenerator::Trajectory { snapshots_per_run, thin } => {
            trajectory_points(problem, count, *snapshots_per_run, *thin, seed)
        }
        PointGenerator::Mixed { ball_radius, near_sigma } => {
            let n_ball = 2 * count / 5;
            let n_traj = 2 * count / 5;
            let n_near = count - n_ball - n_traj;
            let mut pts = generate_points(
                problem,
                z,
                &PointGenerator::UniformBall { radius: *ball_radius },
                n_ball,
                derive_seed(seed, stream::POINTS, 1),
            )?;
            pts.extend(generate_points(
                problem,
                z,
                &PointGenerator::Trajectory { snapshots_per_run: 16, thin: 5 },
                n_traj,
                derive_seed(seed, stream::POINTS, 2),
            )?);
            pts.extend(generate_points(
                problem,
                z,
                &PointGenerator::NearOrbit { sigma: *near_sigma },
                n_near,
                derive_seed(seed, stream::POINTS, 3),
            )?);
            Ok(pts)
        }
    }
}

/// Mid-landscape points: run a crude descent from random starts and keep
/// every `thin`-th iterate. Step control is a halving heuristic — the
/// samples only need to land in gradient-flow regions, not converge fast.
fn trajectory_points(
    problem: &LossProblem,
    count: usize,
    snapshots_per_run: usize,
    thin: usize,
    seed: u64,
) -> Result<Vec<ComplexVector>> {
    let n = problem.n();
    let per_run = snapshots_per_run.max(1);
    let thin = thin.max(1);
    let runs = count.div_ceil(per_run);
    let all: Vec<Vec<ComplexVector>> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = rng_for(seed, stream::TRIAL, run as u64);
            let mut x =
                ComplexVector::random_gaussian(n, 1.0 / ((2 * n) as f64).sqrt(), &mut rng);
            let mut snaps = Vec::with_capacity(per_run);
            let (mut f, mut grad) = problem.loss_and_gradient(&x)?;
            let mut eta = {
                let g0 = grad.real_norm();
                if g0 > 0.0 {
                    0.1 / g0
                } else {
                    1.0
                }
            };
            for k in 1..=per_run * thin {
                let g = grad.real_gradient();
                if grad.real_norm() <= 1e-12 * (1.0 + f) {
                    break;
                }
                let mut accepted = false;
                for _ in 0..60 {
                    let x_try = x.add_scaled(-eta, &g);
                    let f_try = problem.loss(&x_try)?;
                    if f_try.is_finite() && f_try <= f {
                        x = x_try;
                        f = f_try;
                        grad = problem.wirtinger_gradient(&x)?;
                        accepted = true;
                        eta *= 1.5;
                        break;
                    }
                    eta *= 0.5;
                }
                if !accepted {
                    break;
                }
                if k % thin == 0 {
                    snaps.push(x.clone());
                    if snaps.len() == per_run {
                        break;
                    }
                }
            }
            // Pad from the endpoint if the run stalled early.
            while snaps.len() < per_run {
                snaps.push(x.clone());
            }
            Ok(snaps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(all.into_iter().flatten().take(count).collect())
}

/// Pilot-pass calibration.
///
/// Thresholds are picked so the three certification branches tile the
/// pilot sample with margin, and every report records the values used:
///
/// - `gamma`: 95th percentile of orbit distances over near-orbit pilot
///   points — the near-minimum branch covers that regime.
/// - `zeta`: a quarter of the most-negative-decile aligned curvature over
///   the far pilot points, capped at `gamma/12` (the curvature scale the
///   descent geometry guarantees just outside the `gamma`-ball); falls
///   back to `gamma/20` when the pilot shows no negative curvature.
/// - `beta_thr`: the 5th percentile of gradient norms over uniform-ball
///   points, tightened to half the smallest gradient norm seen on any far
///   pilot point that the curvature branch cannot certify. The tightening
///   is what keeps mid-trajectory points — moderate gradient, far from
///   the orbit, occasionally non-negative curvature along the aligned
///   direction — inside the large-gradient branch.
pub fn calibrate_thresholds(
    problem: &LossProblem,
    z: &ComplexVector,
    pilot_points: usize,
    seed: u64,
) -> Result<Thresholds> {
    ensure_noiseless(problem, z)?;
    let count = pilot_points.max(50);
    let ball = generate_points(
        problem,
        z,
        &PointGenerator::UniformBall { radius: 3.0 },
        count,
        derive_seed(seed, stream::POINTS, 11),
    )?;
    let traj = generate_points(
        problem,
        z,
        &PointGenerator::Trajectory { snapshots_per_run: 16, thin: 5 },
        count,
        derive_seed(seed, stream::POINTS, 13),
    )?;
    let near = generate_points(
        problem,
        z,
        &PointGenerator::NearOrbit { sigma: 0.05 },
        count,
        derive_seed(seed, stream::POINTS, 12),
    )?;

    let dists: Vec<f64> = near
        .par_iter()
        .map(|x| equiv_distance(x, z))
        .collect::<Result<Vec<_>>>()?;
    let gamma = percentile(&dists, 95.0).max(1e-10);

    // (gradient norm, aligned curvature, orbit distance) per far point.
    let wild: Vec<(f64, f64, f64)> = ball
        .par_iter()
        .chain(traj.par_iter())
        .map(|x| {
            let gn = problem.wirtinger_gradient(x)?.real_norm();
            let ad = aligned_delta(x, z)?;
            let dn2 = ad.delta.norm_sqr();
            let curv = if dn2 > 0.0 {
                problem.hessian_quadratic_form(x, &ad.delta)? / (2.0 * dn2)
            } else {
                0.0
            };
            Ok((gn, curv, equiv_distance(x, z)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let curvatures: Vec<f64> = wild.iter().map(|w| w.1).collect();
    let q10 = percentile(&curvatures, 10.0);
    let zeta = if q10 < 0.0 {
        (0.25 * q10.abs()).min(gamma / 12.0)
    } else {
        gamma / 20.0
    }
    .max(1e-12);

    let ball_grads: Vec<f64> = wild[..ball.len()].iter().map(|w| w.0).collect();
    let mut beta_thr = percentile(&ball_grads, 5.0);
    for (gn, curv, d) in &wild {
        if *d > gamma && *curv > -zeta {
            beta_thr = beta_thr.min(0.5 * gn);
        }
    }

    Ok(Thresholds { beta_thr: beta_thr.max(1e-12), zeta, gamma })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub m: usize,
    pub num_points: usize,
    pub thresholds: Thresholds,
    pub large_gradient: usize,
    pub negative_curvature: usize,
    pub near_minimum: usize,
    pub violations: usize,
    /// One certificate per scanned point, in generation order.
    pub certificates: Vec<SaddleCertificate>,
}

impl ScanReport {
    pub fn violation_certificates(&self) -> impl Iterator<Item = &SaddleCertificate> {
        self.certificates.iter().filter(|c| c.verdict == Verdict::Violation)
    }

    /// Flat CSV: `index,gradient_norm,curvature_along_delta,distance,verdict`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,gradient_norm,curvature_along_delta,distance,verdict\n");
        for (i, c) in self.certificates.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i, c.gradient_norm, c.curvature_along_delta, c.distance_to_truth, c.verdict
            ));
        }
        out
    }
}

/// Certify a batch of generated points at fixed (or freshly calibrated)
/// thresholds.
pub fn landscape_scan(
    problem: &LossProblem,
    z: &ComplexVector,
    num_points: usize,
    generator: &PointGenerator,
    thresholds: Option<Thresholds>,
    seed: u64,
) -> Result<ScanReport> {
    if num_points < 1 {
        return Err(Error::InvalidParameter("num_points must be >= 1".into()));
    }
    ensure_noiseless(problem, z)?;
    let thresholds = match thresholds {
        Some(t) => t,
        None => calibrate_thresholds(problem, z, 200, derive_seed(seed, stream::POINTS, 997))?,
    };
    let points = generate_points(problem, z, generator, num_points, seed)?;
    let certificates: Vec<SaddleCertificate> = points
        .par_iter()
        .map(|x| certify_unchecked(problem, z, x, &thresholds))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| certificates.iter().filter(|c| c.verdict == v).count();
    Ok(ScanReport {
        n: problem.n(),
        m: problem.m(),
        num_points,
        thresholds,
        large_gradient: count(Verdict::LargeGradient),
        negative_curvature: count(Verdict::NegativeCurvature),
        near_minimum: count(Verdict::NearMinimum),
        violations: count(Verdict::Violation),
        certificates,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub iterations: usize,
    pub converged: bool,
    pub rel_error: f64,
    /// Minimum sampled Rayleigh curvature at the terminal point
    /// (converged trials only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rayleigh: Option<f64>,
    /// Exact minimum curvature when the explicit Hessian is tractable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_min_curvature: Option<f64>,
    /// Near-PSD terminal Hessian with a large recovery error: a
    /// spurious-minimum counterexample.
    pub spurious: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMinReport {
    pub trials: usize,
    pub converged: usize,
    pub successes: usize,
    pub counterexamples: usize,
    pub zeta_tol: f64,
    pub outcomes: Vec<TrialOutcome>,
}

/// Run independent solves and flag any converged terminal point whose
/// Hessian is near-PSD while the recovery error is large.
pub fn local_min_global_check(
    ens: &MeasurementEnsemble,
    z: &ComplexVector,
    num_trials: usize,
    base_cfg: &SolverConfig,
    zeta_tol: f64,
    num_directions: usize,
    seed: u64,
) -> Result<LocalMinReport> {
    if num_trials < 1 {
        return Err(Error::InvalidParameter("num_trials must be >= 1".into()));
    }
    let problem = LossProblem::noiseless(ens.clone(), z)?;
    let outcomes: Vec<TrialOutcome> = (0..num_trials)
        .into_par_iter()
        .map(|t| {
            let cfg = SolverConfig {
                seed: derive_seed(seed, stream::TRIAL, t as u64),
                init: InitStrategy::RandomGaussian { component_std: None },
                ..base_cfg.clone()
            };
            let out = solve(&problem, &cfg, Some(z))?;
            let rec = out.recovery.expect("ground truth supplied");
            let (min_rayleigh, exact) = if out.converged {
                let mut rng = rng_for(seed, stream::DIRECTION, t as u64);
                let n = problem.n();
                if n <= HESSIAN_MATRIX_MAX_DIM {
                    let hr = problem.hessian_real(&out.x_hat)?;
                    let mut best = f64::INFINITY;
                    for _ in 0..num_directions {
                        let d = ComplexVector::random_unit(n, &mut rng);
                        let mut v = nalgebra::DVector::<f64>::zeros(2 * n);
                        for k in 0..n {
                            v[k] = d.entries()[k].re;
                            v[n + k] = d.entries()[k].im;
                        }
                        let q = (v.transpose() * &hr * &v)[(0, 0)];
                        best = best.min(q / 2.0);
                    }
                    let exact = hr
                        .symmetric_eigenvalues()
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min)
                        / 2.0;
                    (Some(best), Some(exact))
                } else {
                    let mut best = f64::INFINITY;
                    for _ in 0..num_directions {
                        let d = ComplexVector::random_unit(n, &mut rng);
                        let q = problem.hessian_quadratic_form(&out.x_hat, &d)?;
                        best = best.min(q / (2.0 * d.norm_sqr()));
                    }
                    (Some(best), None)
                }
            } else {
                (None, None)
            };
            let near_psd = match (min_rayleigh, exact) {
                (Some(r), Some(e)) => r.min(e) >= -zeta_tol,
                (Some(r), None) => r >= -zeta_tol,
                _ => false,
            };
            let spurious = out.converged && near_psd && rec.rel_error >= base_cfg.success_tol;
            Ok(TrialOutcome {
                trial: t,
                iterations: out.iterations,
                converged: out.converged,
                rel_error: rec.rel_error,
                min_rayleigh,
                exact_min_curvature: exact,
                spurious,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalMinReport {
        trials: num_trials,
        converged: outcomes.iter().filter(|o| o.converged).count(),
        successes: outcomes
            .iter()
            .filter(|o| o.rel_error < base_cfg.success_tol)
            .count(),
        counterexamples: outcomes.iter().filter(|o| o.spurious).count(),
        zeta_tol,
        outcomes,
    })
}
