//! Quadratic feasibility over complex vectors.
//!
//! Given Hermitian measurement matrices `A_1, …, A_m` and real observations
//! `c_i = ⟨A_i x, x⟩`, this crate recovers `x ∈ ℂⁿ` (up to a global phase)
//! by gradient descent on the averaged squared-residual loss, and provides
//! the experiment machinery to check *why* that works on random ensembles:
//! stability/injectivity estimates, concentration of the measurement
//! energy, covering-net sandwiches on the unit sphere, and strict-saddle
//! certification of the loss landscape.
//!
//! Everything is seeded and deterministic within one build: the same
//! `(parameters, seed)` always produce the same ensembles, iterates and
//! reports.
//!
//! Module map:
//! - [`vector`] / [`matrix`] / [`phase`]: complex vectors, Hermitian
//!   matrices stored by upper triangle, and the phase-invariant metric
//!   `d(x, y) = ‖xx* − yy*‖_F` with optimal phase alignment.
//! - [`measurement`]: random ensembles (dense Hermitian Gaussian, rank-one),
//!   the quadratic forward map, additive noise, and file (de)serialization.
//! - [`loss`]: the ℓ2-loss, closed-form Wirtinger gradient and Hessian
//!   quadratic form, plus finite-difference oracles that pin the constants.
//! - [`solver`]: seeded gradient descent with fixed or Armijo backtracking
//!   steps, optional saddle-escape perturbation, and recovery reporting.
//! - [`landscape`]: the empirical verification suite (stability,
//!   concentration, cross-term, covering, saddle certificates, scans).

pub mod error;
pub mod landscape;
pub mod loss;
pub mod matrix;
pub mod measurement;
pub mod phase;
pub mod seeding;
pub mod solver;
pub mod util;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::HermitianMatrix;
pub use measurement::{EnsembleKind, MeasurementEnsemble, MeasurementVector};
pub use phase::{aligned_delta, equiv_distance, optimal_phase, AlignedDifference};
pub use vector::ComplexVector;

/// Complex scalar used throughout: an IEEE-754 double pair.
pub type C64 = num_complex::Complex<f64>;
