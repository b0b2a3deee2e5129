//! Concentration experiments over fresh random ensembles.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurement::MeasurementEnsemble;
use crate::phase::equiv_distance;
use crate::seeding::{derive_seed, rng_for, stream};
use crate::util::{mean, pairwise_sum, sample_std};
use crate::vector::ComplexVector;

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub epsilon: f64,
    /// Mean over trials of `Y/d²`, where `Y = (1/m)·Σ|⟨A_i, xx*−yy*⟩|²`.
    pub empirical_mean_ratio: f64,
    /// Fraction of trials with `|Y/d² − 1| ≥ ε`.
    pub tail_fraction: f64,
}

/// Per trial: fresh ensemble and fresh unit pair; measure how far the
/// averaged measurement energy sits from `d(x, y)²`.
pub fn concentration_experiment(
    n: usize,
    m: usize,
    trials: usize,
    epsilon: f64,
    seed: u64,
) -> Result<ConcentrationReport> {
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be > 0".into()));
    }
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ens = MeasurementEnsemble::sample_hermitian_gaussian(
                n,
                m,
                1.0,
                derive_seed(seed, stream::TRIAL, t as u64),
            )?;
            let mut rng = rng_for(seed, stream::PAIR, t as u64);
            let (x, y) = fresh_pair(n, &mut rng)?;
            let d2 = equiv_distance(&x, &y)?.powi(2);
            let terms: Vec<f64> = ens
                .matrices()
                .iter()
                .map(|a| {
                    let v = a.quad_form(&x) - a.quad_form(&y);
                    v * v
                })
                .collect();
            Ok(pairwise_sum(&terms) / m as f64 / d2)
        })
        .collect::<Result<Vec<f64>>>()?;
    let tail = ratios.iter().filter(|r| (**r - 1.0).abs() >= epsilon).count();
    Ok(ConcentrationReport {
        n,
        m,
        trials,
        epsilon,
        empirical_mean_ratio: mean(&ratios),
        tail_fraction: tail as f64 / trials as f64,
    })
}

fn fresh_pair(n: usize, rng: &mut impl rand::Rng) -> Result<(ComplexVector, ComplexVector)> {
    for _ in 0..64 {
        let x = ComplexVector::random_unit(n, rng);
        let y = ComplexVector::random_unit(n, rng);
        if equiv_distance(&x, &y)? > 1e-8 {
            return Ok((x, y));
        }
    }
    Err(Error::DegenerateSampling("could not draw a non-degenerate unit pair".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossTermReport {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    /// Mean over trials of the raw statistic normalized by ‖Δ‖²·‖x‖².
    pub normalized_mean: f64,
    /// Sample standard deviation of the normalized statistic.
    pub normalized_std: f64,
    /// Mean over trials of the per-pair closed-form expectation
    /// `(|⟨x, Δ⟩|² − ‖x‖²‖Δ‖²) / (‖x‖²‖Δ‖²)`.
    pub predicted_mean: f64,
    /// Mean deviation of the statistic from its per-pair expectation —
    /// the concentration content of the experiment; ≈ 0 for any n, m.
    pub centered_mean: f64,
}

/// The cross statistic
/// `(1/m)·Σ_d [⟨A_d, ΔΔ*⟩·⟨A_d, xx*⟩ − ⟨A_d, Δx*⟩·⟨A_d, xΔ*⟩]`.
///
/// Entry-level expectation over the dense Hermitian Gaussian ensemble
/// gives `E = σ²(|⟨x, Δ⟩|² − ‖x‖²‖Δ‖²)`: the first product contributes
/// `tr(ΔΔ*·xx*) = |⟨x, Δ⟩|²` and the second `‖x‖²‖Δ‖²`. The statistic
/// therefore concentrates around a *nonpositive* value (zero exactly when
/// Δ is parallel to x); the report carries both the raw mean and its
/// deviation from this closed form. Each trial uses a fresh ensemble and
/// one fixed random unit pair `(x, Δ)`.
pub fn cross_term_experiment(
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<CrossTermReport> {
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ens = MeasurementEnsemble::sample_hermitian_gaussian(
                n,
                m,
                1.0,
                derive_seed(seed, stream::TRIAL, t as u64),
            )?;
            let mut rng = rng_for(seed, stream::PAIR, t as u64);
            let x = ComplexVector::random_unit(n, &mut rng);
            let delta = ComplexVector::random_unit(n, &mut rng);
            let scale = x.norm_sqr() * delta.norm_sqr();
            let raw = cross_statistic(&ens, &x, &delta) / scale;
            let predicted = (x.inner(&delta).norm_sqr() - scale) / scale;
            Ok((raw, predicted))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let raw: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let predicted: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let centered: Vec<f64> = samples.iter().map(|s| s.0 - s.1).collect();
    Ok(CrossTermReport {
        n,
        m,
        trials,
        normalized_mean: mean(&raw),
        normalized_std: sample_std(&raw),
        predicted_mean: mean(&predicted),
        centered_mean: mean(&centered),
    })
}

/// `(1/m)·Σ_d [(Δ*A_dΔ)(x*A_dx) − |x*A_dΔ|²]` — the Frobenius pairings
/// reduce to quadratic and sesquilinear forms.
pub(crate) fn cross_statistic(
    ens: &MeasurementEnsemble,
    x: &ComplexVector,
    delta: &ComplexVector,
) -> f64 {
    let terms: Vec<f64> = ens
        .matrices()
        .iter()
        .map(|a| {
            let qd = a.quad_form(delta);
            let qx = a.quad_form(x);
            let w = a.sandwich(x, delta);
            qd * qx - w.norm_sqr()
        })
        .collect();
    pairwise_sum(&terms) / ens.m() as f64
}
