//! Measurement ensembles and the quadratic forward map.
//!
//! An ensemble is a set of Hermitian matrices `{A_i}` together with its
//! sampling kind; observations are the real values `c_i = ⟨A_i x, x⟩`,
//! optionally with additive Gaussian noise. Ensembles and observations
//! round-trip exactly through a versioned JSON document.
//!
//! Sampling conventions:
//! - dense Hermitian Gaussian: diagonal entries `N(0, σ²)`, strict upper
//!   triangle `N(0, σ²/2) + i·N(0, σ²/2)`, lower triangle by conjugation.
//!   With this split (and only this one) the measurement energy
//!   `E|⟨A, xx* − yy*⟩|²` equals `σ²·d(x, y)²`.
//! - rank-one: `A_i = a_i a_i*` with each component of `a_i` drawn as
//!   `N(0, ½) + i·N(0, ½)`. The component scale is a convention (the
//!   rank-one specialization fixes no normalization); it makes
//!   `E‖a_i‖² = n`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{upper_len, HermitianMatrix};
use crate::seeding::{rng_for, stream};
use crate::vector::ComplexVector;
use crate::C64;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    HermitianGaussian,
    RankOne,
    UserSupplied,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EnsembleKind::HermitianGaussian => "hermitian_gaussian",
            EnsembleKind::RankOne => "rank_one",
            EnsembleKind::UserSupplied => "user_supplied",
        };
        f.write_str(s)
    }
}

/// A set of `m` Hermitian measurement matrices of dimension `n`.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    n: usize,
    m: usize,
    kind: EnsembleKind,
    variance: f64,
    seed: Option<u64>,
    matrices: Vec<HermitianMatrix>,
}

impl MeasurementEnsemble {
    /// Sample `m` independent dense Hermitian Gaussian matrices.
    /// Each matrix draws from its own derived stream, so sampling is
    /// order-independent under parallelism.
    pub fn sample_hermitian_gaussian(n: usize, m: usize, variance: f64, seed: u64) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidParameter("n and m must be >= 1".into()));
        }
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "variance must be positive and finite, got {variance}"
            )));
        }
        let diag_std = variance.sqrt();
        let off_std = (variance / 2.0).sqrt();
        let matrices: Vec<HermitianMatrix> = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, stream::MATRIX, i as u64);
                let mut upper = Vec::with_capacity(upper_len(n));
                for row in 0..n {
                    let d: f64 = rng.sample(StandardNormal);
                    upper.push(C64::new(d * diag_std, 0.0));
                    for _ in (row + 1)..n {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        upper.push(C64::new(re * off_std, im * off_std));
                    }
                }
                HermitianMatrix::from_upper(n, upper).expect("sampled data is valid")
            })
            .collect();
        Ok(Self { n, m, kind: EnsembleKind::HermitianGaussian, variance, seed: Some(seed), matrices })
    }

    /// Sample `m` rank-one matrices `a_i a_i*` with complex Gaussian `a_i`.
    pub fn sample_rank_one(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidParameter("n and m must be >= 1".into()));
        }
        let comp_std = 0.5f64.sqrt();
        let matrices: Vec<HermitianMatrix> = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, stream::MATRIX, i as u64);
                let a = ComplexVector::random_gaussian(n, comp_std, &mut rng);
                HermitianMatrix::rank_one(&a)
            })
            .collect();
        Ok(Self { n, m, kind: EnsembleKind::RankOne, variance: 1.0, seed: Some(seed), matrices })
    }

    /// Wrap user-supplied matrices (all must share one dimension).
    pub fn from_matrices(matrices: Vec<HermitianMatrix>) -> Result<Self> {
        let m = matrices.len();
        if m < 1 {
            return Err(Error::InvalidParameter("ensemble needs at least one matrix".into()));
        }
        let n = matrices[0].dim();
        for a in &matrices {
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
            }
        }
        Ok(Self { n, m, kind: EnsembleKind::UserSupplied, variance: 1.0, seed: None, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    /// Evaluate the forward map `x ↦ (⟨A_1 x, x⟩, …, ⟨A_m x, x⟩)`.
    /// The quadratic forms are real for Hermitian matrices; the evaluation
    /// accumulates conjugate pairs so no imaginary residue is materialized.
    pub fn forward_map(&self, x: &ComplexVector) -> Result<MeasurementVector> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.dim() });
        }
        let values = self.matrices.iter().map(|a| a.quad_form(x)).collect();
        MeasurementVector::noiseless(values)
    }
}

/// Real observations `c_i`, with the noise standard deviation recorded per
/// measurement (all zero for noiseless data).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    values: Vec<f64>,
    noise_sigma: Vec<f64>,
}

impl MeasurementVector {
    pub fn new(values: Vec<f64>, noise_sigma: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("observations must be non-empty".into()));
        }
        if values.len() != noise_sigma.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                got: noise_sigma.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry(i));
        }
        if let Some(i) = noise_sigma.iter().position(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma at index {i} must be finite and >= 0"
            )));
        }
        Ok(Self { values, noise_sigma })
    }

    pub fn noiseless(values: Vec<f64>) -> Result<Self> {
        let sigmas = vec![0.0; values.len()];
        Self::new(values, sigmas)
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn noise_sigma(&self) -> &[f64] {
        &self.noise_sigma
    }

    /// Add independent `N(0, σ_i²)` noise; `σ_i = 0` leaves a value exactly
    /// unchanged. Each measurement draws from its own derived stream.
    pub fn add_noise(&self, sigmas: &[f64], seed: u64) -> Result<Self> {
        if sigmas.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), got: sigmas.len() });
        }
        if let Some(i) = sigmas.iter().position(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma at index {i} must be finite and >= 0"
            )));
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if sigmas[i] == 0.0 {
                    c
                } else {
                    let mut rng = rng_for(seed, stream::NOISE, i as u64);
                    let nu: f64 = rng.sample(StandardNormal);
                    c + nu * sigmas[i]
                }
            })
            .collect();
        Self::new(values, sigmas.to_vec())
    }
}

// ---------------------------------------------------------------------------
// File formats (versioned JSON documents, exact f64 round-trip)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EnsembleDoc {
    version: u32,
    n: usize,
    m: usize,
    kind: EnsembleKind,
    variance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Per matrix: upper-triangle entries as [re, im] pairs, row-major.
    matrices: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct ObservationsDoc {
    version: u32,
    m: usize,
    values: Vec<f64>,
    noise_sigma: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct VectorDoc {
    version: u32,
    n: usize,
    /// Entries as [re, im] pairs.
    entries: Vec<[f64; 2]>,
}

/// Serialize an ensemble to its JSON document.
pub fn serialize_ensemble(ens: &MeasurementEnsemble) -> Vec<u8> {
    let doc = EnsembleDoc {
        version: FORMAT_VERSION,
        n: ens.n,
        m: ens.m,
        kind: ens.kind,
        variance: ens.variance,
        seed: ens.seed,
        matrices: ens
            .matrices
            .iter()
            .map(|a| a.upper_entries().iter().map(|e| [e.re, e.im]).collect())
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("ensemble serializes");
    bytes.push(b'\n');
    bytes
}

/// Parse and validate an ensemble document.
pub fn deserialize_ensemble(bytes: &[u8]) -> Result<MeasurementEnsemble> {
    let doc: EnsembleDoc = serde_json::from_slice(bytes)
        .map_err(|e| Error::MalformedDocument(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(doc.version));
    }
    if doc.n < 1 || doc.m < 1 {
        return Err(Error::MalformedDocument("n and m must be >= 1".into()));
    }
    if doc.matrices.len() != doc.m {
        return Err(Error::DimensionMismatch { expected: doc.m, got: doc.matrices.len() });
    }
    let mut matrices = Vec::with_capacity(doc.m);
    for entries in &doc.matrices {
        if entries.len() != upper_len(doc.n) {
            return Err(Error::DimensionMismatch {
                expected: upper_len(doc.n),
                got: entries.len(),
            });
        }
        let upper: Vec<C64> = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        matrices.push(HermitianMatrix::from_upper(doc.n, upper)?);
    }
    if doc.kind == EnsembleKind::RankOne {
        for (i, a) in matrices.iter().enumerate() {
            verify_rank_one(a).map_err(|e| {
                Error::MalformedDocument(format!("matrix {i} violates the rank-one invariant: {e}"))
            })?;
        }
    }
    if !(doc.variance > 0.0) || !doc.variance.is_finite() {
        return Err(Error::MalformedDocument(format!(
            "variance must be positive and finite, got {}",
            doc.variance
        )));
    }
    Ok(MeasurementEnsemble {
        n: doc.n,
        m: doc.m,
        kind: doc.kind,
        variance: doc.variance,
        seed: doc.seed,
        matrices,
    })
}

/// Check `A² = trace(A)·A` (with nonnegative trace), which characterizes
/// PSD rank-one matrices.
fn verify_rank_one(a: &HermitianMatrix) -> Result<()> {
    let n = a.dim();
    let trace: f64 = (0..n).map(|i| a.get(i, i).re).sum();
    if trace < 0.0 {
        return Err(Error::MalformedDocument(format!("negative trace {trace}")));
    }
    let scale = a.frobenius_norm_sqr().max(1e-300);
    let mut err = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut sq = C64::new(0.0, 0.0);
            for k in 0..n {
                sq += a.get(i, k) * a.get(k, j);
            }
            err += (sq - a.get(i, j) * trace).norm_sqr();
        }
    }
    if err > 1e-16 * scale * scale {
        return Err(Error::MalformedDocument(format!(
            "‖A² − tr(A)·A‖² = {err:e} exceeds tolerance"
        )));
    }
    Ok(())
}

/// Serialize observations to their JSON document.
pub fn serialize_observations(obs: &MeasurementVector) -> Vec<u8> {
    let doc = ObservationsDoc {
        version: FORMAT_VERSION,
        m: obs.m(),
        values: obs.values.clone(),
        noise_sigma: obs.noise_sigma.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("observations serialize");
    bytes.push(b'\n');
    bytes
}

pub fn deserialize_observations(bytes: &[u8]) -> Result<MeasurementVector> {
    let doc: ObservationsDoc = serde_json::from_slice(bytes)
        .map_err(|e| Error::MalformedDocument(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(doc.version));
    }
    if doc.values.len() != doc.m {
        return Err(Error::DimensionMismatch { expected: doc.m, got: doc.values.len() });
    }
    MeasurementVector::new(doc.values, doc.noise_sigma)
}

/// Serialize a complex vector (e.g. a ground truth) to its JSON document.
pub fn serialize_vector(v: &ComplexVector) -> Vec<u8> {
    let doc = VectorDoc {
        version: FORMAT_VERSION,
        n: v.dim(),
        entries: v.entries().iter().map(|e| [e.re, e.im]).collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("vector serializes");
    bytes.push(b'\n');
    bytes
}

pub fn deserialize_vector(bytes: &[u8]) -> Result<ComplexVector> {
    let doc: VectorDoc = serde_json::from_slice(bytes)
        .map_err(|e| Error::MalformedDocument(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(doc.version));
    }
    if doc.entries.len() != doc.n {
        return Err(Error::DimensionMismatch { expected: doc.n, got: doc.entries.len() });
    }
    ComplexVector::new(doc.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::equiv_distance;
    use crate::util::{mean, sample_std};

    #[test]
    fn gaussian_sampling_is_deterministic_and_hermitian() {
        let a = MeasurementEnsemble::sample_hermitian_gaussian(4, 6, 1.0, 7).unwrap();
        let b = MeasurementEnsemble::sample_hermitian_gaussian(4, 6, 1.0, 7).unwrap();
        assert_eq!(a, b);
        let c = MeasurementEnsemble::sample_hermitian_gaussian(4, 6, 1.0, 8).unwrap();
        assert_ne!(a, c);
        for mtx in a.matrices() {
            for i in 0..4 {
                assert_eq!(mtx.get(i, i).im, 0.0);
                for j in 0..4 {
                    assert_eq!(mtx.get(j, i), mtx.get(i, j).conj());
                }
            }
        }
    }

    #[test]
    fn gaussian_sampling_rejects_bad_variance() {
        assert!(MeasurementEnsemble::sample_hermitian_gaussian(2, 2, 0.0, 1).is_err());
        assert!(MeasurementEnsemble::sample_hermitian_gaussian(2, 2, -1.0, 1).is_err());
    }

    /// Law-of-large-numbers check on the stated entry distributions:
    /// pooled diagonal variance ≈ σ², pooled off-diagonal component
    /// variance ≈ σ²/2.
    #[test]
    fn gaussian_entry_variances_match_convention() {
        let ens = MeasurementEnsemble::sample_hermitian_gaussian(8, 10_000, 1.0, 13).unwrap();
        let mut diag = Vec::new();
        let mut off_re = Vec::new();
        for a in ens.matrices() {
            for i in 0..8 {
                diag.push(a.get(i, i).re);
                for j in (i + 1)..8 {
                    off_re.push(a.get(i, j).re);
                }
            }
        }
        let dv = sample_std(&diag).powi(2);
        let ov = sample_std(&off_re).powi(2);
        assert!((0.97..=1.03).contains(&dv), "diag variance {dv}");
        assert!((0.485..=0.515).contains(&ov), "off-diag variance {ov}");
    }

    /// The measurement energy is an unbiased estimate of d(x, y)²:
    /// mean over m = 10⁴ of |⟨A_i, xx* − yy*⟩|² lands within 5% of d².
    #[test]
    fn measurement_energy_matches_distance() {
        let ens = MeasurementEnsemble::sample_hermitian_gaussian(6, 10_000, 1.0, 17).unwrap();
        let mut rng = rng_for(17, stream::PAIR, 0);
        let x = ComplexVector::random_unit(6, &mut rng);
        let y = ComplexVector::random_unit(6, &mut rng);
        let d2 = equiv_distance(&x, &y).unwrap().powi(2);
        assert!(d2 > 0.0);
        let samples: Vec<f64> = ens
            .matrices()
            .iter()
            .map(|a| (a.quad_form(&x) - a.quad_form(&y)).powi(2))
            .collect();
        let m = mean(&samples);
        assert!((m - d2).abs() <= 0.05 * d2, "mean {m} vs d² {d2}");
    }

    #[test]
    fn rank_one_forward_values_are_nonnegative() {
        let ens = MeasurementEnsemble::sample_rank_one(3, 50, 23).unwrap();
        let mut rng = rng_for(23, stream::PAIR, 1);
        let x = ComplexVector::random_gaussian(3, 1.0, &mut rng);
        for v in ens.forward_map(&x).unwrap().values() {
            assert!(*v >= 0.0);
        }
    }

    /// Two-path evaluation oracle: ⟨aa* x, x⟩ through the stored matrix
    /// equals |⟨x, a⟩|² computed directly from the vectors.
    #[test]
    fn rank_one_quadratic_form_two_paths_agree() {
        let mut rng = rng_for(99, stream::PAIR, 2);
        for _ in 0..20 {
            let a = ComplexVector::random_gaussian(3, 1.0, &mut rng);
            let x = ComplexVector::random_gaussian(3, 1.0, &mut rng);
            let lhs = HermitianMatrix::rank_one(&a).quad_form(&x);
            let rhs = x.inner(&a).norm_sqr();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn coordinate_magnitude_measurement() {
        // A = e₁e₁* measures |x₁|².
        let a = HermitianMatrix::rank_one(&ComplexVector::basis(2, 0));
        let ens = MeasurementEnsemble::from_matrices(vec![a]).unwrap();
        let x = ComplexVector::new(vec![C64::new(1.0, 2.0), C64::new(3.0, -1.0)]).unwrap();
        let c = ens.forward_map(&x).unwrap();
        assert!((c.values()[0] - 5.0).abs() <= 1e-12);
    }

    #[test]
    fn forward_map_trivial_and_phase_invariant() {
        let ens = MeasurementEnsemble::sample_hermitian_gaussian(4, 10, 1.0, 29).unwrap();
        let zero = ComplexVector::zeros(4);
        for v in ens.forward_map(&zero).unwrap().values() {
            assert_eq!(*v, 0.0);
        }

        let ident = MeasurementEnsemble::from_matrices(vec![HermitianMatrix::identity(4)]).unwrap();
        let mut rng = rng_for(29, stream::PAIR, 0);
        let x = ComplexVector::random_gaussian(4, 1.0, &mut rng);
        let c = ident.forward_map(&x).unwrap();
        assert!((c.values()[0] - x.norm_sqr()).abs() <= 1e-12 * x.norm_sqr());

        for theta in [0.7, 2.9, 5.5] {
            let cx = ens.forward_map(&x).unwrap();
            let cy = ens.forward_map(&x.rotate(theta)).unwrap();
            for (a, b) in cx.values().iter().zip(cy.values()) {
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }

        let wrong = ComplexVector::zeros(3);
        assert!(matches!(
            ens.forward_map(&wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn add_noise_contracts() {
        let c = MeasurementVector::noiseless(vec![1.0, 2.0, 3.0]).unwrap();
        let same = c.add_noise(&[0.0, 0.0, 0.0], 5).unwrap();
        assert_eq!(c.values(), same.values());

        let a = c.add_noise(&[0.1, 0.1, 0.1], 5).unwrap();
        let b = c.add_noise(&[0.1, 0.1, 0.1], 5).unwrap();
        assert_eq!(a, b);

        assert!(c.add_noise(&[-0.1, 0.0, 0.0], 5).is_err());
        assert!(c.add_noise(&[0.1, 0.1], 5).is_err());
    }

    #[test]
    fn noise_std_matches_requested_sigma() {
        let m = 10_000;
        let c = MeasurementVector::noiseless(vec![0.0; m]).unwrap();
        let s = 0.37;
        let noisy = c.add_noise(&vec![s; m], 31).unwrap();
        let deltas: Vec<f64> =
            noisy.values().iter().zip(c.values()).map(|(a, b)| a - b).collect();
        let std = sample_std(&deltas);
        assert!((std - s).abs() <= 0.03 * s, "std {std} vs sigma {s}");
        assert_eq!(noisy.noise_sigma(), vec![s; m]);
    }

    #[test]
    fn ensemble_roundtrip_is_exact() {
        for ens in [
            MeasurementEnsemble::sample_hermitian_gaussian(3, 5, 2.5, 37).unwrap(),
            MeasurementEnsemble::sample_rank_one(4, 3, 41).unwrap(),
        ] {
            let bytes = serialize_ensemble(&ens);
            let back = deserialize_ensemble(&bytes).unwrap();
            assert_eq!(ens, back);
        }
    }

    #[test]
    fn observations_roundtrip_is_exact() {
        let obs = MeasurementVector::new(vec![1.0 / 3.0, -2.75, 1e-17], vec![0.0, 0.5, 0.0]).unwrap();
        let back = deserialize_observations(&serialize_observations(&obs)).unwrap();
        assert_eq!(obs, back);
    }

    #[test]
    fn vector_roundtrip_is_exact() {
        let v = ComplexVector::new(vec![C64::new(0.1, -0.2), C64::new(1.0 / 7.0, 2e-300)]).unwrap();
        let back = deserialize_vector(&serialize_vector(&v)).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn minimal_handwritten_document_parses() {
        let doc = br#"{
            "version": 1, "n": 1, "m": 1,
            "kind": "user_supplied", "variance": 1.0,
            "matrices": [[[2.0, 0.0]]]
        }"#;
        let ens = deserialize_ensemble(doc).unwrap();
        assert_eq!(ens.n(), 1);
        assert_eq!(ens.m(), 1);
        assert_eq!(ens.matrices()[0].get(0, 0), C64::new(2.0, 0.0));
    }

    #[test]
    fn tampered_complex_diagonal_is_rejected() {
        let doc = br#"{
            "version": 1, "n": 1, "m": 1,
            "kind": "user_supplied", "variance": 1.0,
            "matrices": [[[2.0, 0.5]]]
        }"#;
        let err = deserialize_ensemble(doc).unwrap_err();
        assert!(err.to_string().contains("non-real diagonal"), "got: {err}");
    }

    #[test]
    fn wrong_version_and_shape_are_rejected() {
        let doc = br#"{"version": 2, "n": 1, "m": 1, "kind": "user_supplied",
                       "variance": 1.0, "matrices": [[[2.0, 0.0]]]}"#;
        assert!(matches!(deserialize_ensemble(doc), Err(Error::UnsupportedVersion(2))));

        let doc = br#"{"version": 1, "n": 2, "m": 1, "kind": "user_supplied",
                       "variance": 1.0, "matrices": [[[2.0, 0.0]]]}"#;
        assert!(matches!(deserialize_ensemble(doc), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rank_one_invariant_enforced_on_load() {
        // Identity 2x2 is not rank one; claiming rank_one must fail.
        let doc = br#"{
            "version": 1, "n": 2, "m": 1,
            "kind": "rank_one", "variance": 1.0,
            "matrices": [[[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]]
        }"#;
        let err = deserialize_ensemble(doc).unwrap_err();
        assert!(err.to_string().contains("rank-one"), "got: {err}");
    }
}
