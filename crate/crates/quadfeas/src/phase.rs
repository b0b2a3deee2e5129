//! The phase-invariant metric and optimal phase alignment.
//!
//! Measurements `⟨A x, x⟩` cannot distinguish `x` from `e^{iθ}x`, so
//! recovery quality is measured between phase orbits: the distance is
//! `d(x, y) = ‖xx* − yy*‖_F`, computed here by the direct O(n²) Frobenius
//! sum. A validated O(n) closed form is available as a fast path.

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::vector::ComplexVector;

/// Distance between the phase orbits of `x` and `y`:
/// the Frobenius norm of `xx* − yy*`.
///
/// This is the ground-truth O(n²) evaluation; see
/// [`equiv_distance_sq_fast`] for the O(n) form.
pub fn equiv_distance(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    Ok(HermitianMatrix::outer_difference(x, y)?.frobenius_norm())
}

/// O(n) closed form for `d(x, y)²`:
/// `‖x‖⁴ + ‖y‖⁴ − 2|⟨x, y⟩|²`, clamped at zero against roundoff.
///
/// The coefficient 2 on the cross term comes from expanding
/// `tr{(xx* − yy*)²}` and is validated against the direct Frobenius sum by
/// the property suite.
pub fn equiv_distance_sq_fast(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    let nx = x.norm_sqr();
    let ny = y.norm_sqr();
    let cross = x.inner(y).norm_sqr();
    Ok((nx * nx + ny * ny - 2.0 * cross).max(0.0))
}

/// The phase `φ ∈ [0, 2π)` minimizing `‖x − e^{iθ}z‖₂` over `θ`.
///
/// The minimizer is the argument of `⟨x, z⟩`; when `⟨x, z⟩ = 0` every phase
/// ties and 0 is returned so that runs stay reproducible.
pub fn optimal_phase(x: &ComplexVector, z: &ComplexVector) -> Result<f64> {
    if x.dim() != z.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: z.dim() });
    }
    let w = x.inner(z);
    if w.norm() == 0.0 {
        return Ok(0.0);
    }
    let mut phi = w.arg();
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    // arg() can return exactly π, mapping to 2π−ulp territory; keep [0, 2π).
    if phi >= 2.0 * std::f64::consts::PI {
        phi = 0.0;
    }
    Ok(phi)
}

/// The result of aligning `z` to `x` in phase.
#[derive(Debug, Clone)]
pub struct AlignedDifference {
    /// The aligning phase `φ ∈ [0, 2π)`.
    pub phase: f64,
    /// `Δ = x − e^{iφ}z`.
    pub delta: ComplexVector,
}

/// Align `z` to `x` at the optimal phase and return `Δ = x − e^{iφ}z`.
pub fn aligned_delta(x: &ComplexVector, z: &ComplexVector) -> Result<AlignedDifference> {
    let phase = optimal_phase(x, z)?;
    let delta = x.sub(&z.rotate(phase));
    Ok(AlignedDifference { phase, delta })
}
