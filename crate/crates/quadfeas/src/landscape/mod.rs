//! Empirical verification of the identifiability and landscape claims.
//!
//! Random quadratic measurement ensembles are conjectured (and at large
//! scale, proven) to behave well in two ways: the forward map is a stable
//! near-isometry in the orbit metric, and the loss landscape has no
//! spurious minima — every point either has a large gradient, a direction
//! of strict negative curvature, or sits near the solution orbit. This
//! module measures both claims at desk scale:
//!
//! - [`stability_estimate`]: sampled two-sided stability constants
//!   `α̂ ≤ β̂` of the measurement map (α̂ = 0 flags a non-injective
//!   ensemble).
//! - [`concentration_experiment`]: how tightly the per-pair measurement
//!   energy concentrates around the squared orbit distance.
//! - [`cross_term_experiment`]: the zero-mean cross statistic entering the
//!   curvature analysis.
//! - [`covering`]: greedy δ-nets on the complex unit sphere and the
//!   `(1 ± 2δ)` sup sandwich.
//! - [`saddle`]: per-point certificates, calibrated thresholds, landscape
//!   scans, and the local-minimum-is-global trial battery.

pub mod concentration;
pub mod covering;
pub mod saddle;
pub mod stability;

pub use concentration::{
    concentration_experiment, cross_term_experiment, ConcentrationReport, CrossTermReport,
};
pub use covering::{covering_net_check, CoveringCase, CoveringReport, NetConfig, SphereCover};
pub use saddle::{
    calibrate_thresholds, landscape_scan, local_min_global_check, saddle_certificate,
    LocalMinReport, PointGenerator, SaddleCertificate, ScanReport, Thresholds, TrialOutcome,
    Verdict,
};
pub use stability::{stability_estimate, StabilityEstimate};
