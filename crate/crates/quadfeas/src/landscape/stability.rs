//! Sampled stability constants of the measurement map.
//!
//! For unit-norm pairs `(x, y)` with `d(x, y) > 0`, the ratio
//! `√[(1/m)·Σ_i |⟨A_i, xx* − yy*⟩|²] / d(x, y)` measures how much the map
//! stretches or shrinks the orbit distance. All estimates use the
//! (1/m)-averaged, d-normalized statistic, whose expected value is 1 for
//! the dense Gaussian ensemble; the unaveraged two-sided constants are
//! recovered by scaling with √m.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurement::MeasurementEnsemble;
use crate::phase::equiv_distance;
use crate::seeding::{rng_for, stream};
use crate::util::pairwise_sum;
use crate::vector::ComplexVector;

/// Pairs closer than this in orbit distance are resampled as degenerate.
const MIN_PAIR_DISTANCE: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct StabilityEstimate {
    /// Smallest sampled ratio (inner bound on the true lower constant).
    pub alpha_hat: f64,
    /// Largest sampled ratio (inner bound on the true upper constant).
    pub beta_hat: f64,
    pub num_pairs: usize,
    /// The per-pair ratios, when retention was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_samples: Option<Vec<f64>>,
}

/// Ratio for one pair: `√[(1/m)·Σ |⟨A_i, xx* − yy*⟩|²] / d(x, y)`.
pub(crate) fn pair_ratio(ens: &MeasurementEnsemble, x: &ComplexVector, y: &ComplexVector) -> f64 {
    let d = equiv_distance(x, y).expect("dimensions match");
    let terms: Vec<f64> = ens
        .matrices()
        .iter()
        .map(|a| {
            let v = a.quad_form(x) - a.quad_form(y);
            v * v
        })
        .collect();
    (pairwise_sum(&terms) / ens.m() as f64).sqrt() / d
}

/// Estimate the two-sided stability constants over random unit pairs.
pub fn stability_estimate(
    ens: &MeasurementEnsemble,
    num_pairs: usize,
    seed: u64,
    keep_samples: bool,
) -> Result<StabilityEstimate> {
    if num_pairs < 1 {
        return Err(Error::InvalidParameter("num_pairs must be >= 1".into()));
    }
    let n = ens.n();
    let ratios: Vec<f64> = (0..num_pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, stream::PAIR, i as u64);
            for _ in 0..64 {
                let x = ComplexVector::random_unit(n, &mut rng);
                let y = ComplexVector::random_unit(n, &mut rng);
                if equiv_distance(&x, &y).expect("dims match") > MIN_PAIR_DISTANCE {
                    return Ok(pair_ratio(ens, &x, &y));
                }
            }
            Err(Error::DegenerateSampling(
                "could not draw a non-degenerate unit pair".into(),
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    let alpha_hat = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let beta_hat = ratios.iter().cloned().fold(0.0f64, f64::max);
    Ok(StabilityEstimate {
        alpha_hat,
        beta_hat,
        num_pairs,
        ratio_samples: keep_samples.then_some(ratios),
    })
}
