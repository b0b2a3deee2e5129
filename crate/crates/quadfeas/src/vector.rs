//! Complex vectors in ℂⁿ.
//!
//! The decision variable, ground truth, and all direction vectors live
//! here. Vectors are immutable after construction; every operation returns
//! a fresh value, so they are safe to share across parallel workers.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// An element of ℂⁿ with fixed length and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    /// Build from raw entries. Fails on empty input or any NaN/Inf part.
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("vector length must be >= 1".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::NonFiniteEntry(i));
            }
        }
        Ok(Self { entries })
    }

    /// Internal constructor for arithmetic results of already-validated inputs.
    pub(crate) fn from_entries(entries: Vec<C64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    /// The zero vector of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "vector length must be >= 1");
        Self { entries: vec![C64::new(0.0, 0.0); n] }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(n: usize, k: usize) -> Self {
        assert!(k < n, "basis index out of range");
        let mut entries = vec![C64::new(0.0, 0.0); n];
        entries[k] = C64::new(1.0, 0.0);
        Self { entries }
    }

    /// Vector with the given real parts and zero imaginary parts.
    pub fn from_real(reals: &[f64]) -> Result<Self> {
        Self::new(reals.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Inner product ⟨self, other⟩ = Σ self_i · conj(other_i).
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_entries(self.entries.iter().map(|e| e * c).collect())
    }

    /// `e^{iθ}·self`.
    pub fn rotate(&self, theta: f64) -> Self {
        self.scale(Complex::from_polar(1.0, theta))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self::from_entries(
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self::from_entries(
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        )
    }

    /// `self + t·other` for real `t`.
    pub fn add_scaled(&self, t: f64, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self::from_entries(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b.scale(t))
                .collect(),
        )
    }

    /// Unit-norm copy; errors on a vector of norm ≤ 1e-300.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-300 {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// Complex Gaussian vector: real and imaginary parts of every component
    /// drawn i.i.d. from N(0, component_std²).
    pub fn random_gaussian<R: Rng>(n: usize, component_std: f64, rng: &mut R) -> Self {
        assert!(n >= 1);
        Self::from_entries(
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re * component_std, im * component_std)
                })
                .collect(),
        )
    }

    /// Uniform point on the complex unit sphere (Gaussian direction, normalized).
    pub fn random_unit<R: Rng>(n: usize, rng: &mut R) -> Self {
        loop {
            let v = Self::random_gaussian(n, 1.0, rng);
            if let Ok(u) = v.normalized() {
                return u;
            }
        }
    }

    /// Uniform point in the complex ball of the given radius around `self`.
    /// The ball is the Euclidean ball in the underlying ℝ^{2n}.
    pub fn random_in_ball<R: Rng>(&self, radius: f64, rng: &mut R) -> Self {
        let n = self.dim();
        let dir = Self::random_unit(n, rng);
        let u: f64 = rng.random();
        let r = radius * u.powf(1.0 / (2 * n) as f64);
        self.add_scaled(r, &dir)
    }
}

/// Serialized as a sequence of `[re, im]` pairs.
impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|e| [e.re, e.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        ComplexVector::new(pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(ComplexVector::new(vec![]).is_err());
        assert!(ComplexVector::new(vec![C64::new(f64::NAN, 0.0)]).is_err());
        assert!(ComplexVector::new(vec![C64::new(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn inner_product_conjugates_second_argument() {
        let x = ComplexVector::new(vec![C64::new(1.0, 2.0)]).unwrap();
        let y = ComplexVector::new(vec![C64::new(0.0, 1.0)]).unwrap();
        // (1+2i)·conj(i) = (1+2i)(−i) = 2 − i
        assert_eq!(x.inner(&y), C64::new(2.0, -1.0));
    }

    #[test]
    fn rotation_preserves_norm_exactly_in_norm_sqr_sum() {
        let mut rng = crate::seeding::rng_for(11, crate::seeding::stream::PAIR, 0);
        let x = ComplexVector::random_gaussian(5, 1.0, &mut rng);
        let y = x.rotate(1.234);
        assert!((x.norm() - y.norm()).abs() < 1e-12 * x.norm());
    }

    #[test]
    fn random_unit_has_unit_norm() {
        let mut rng = crate::seeding::rng_for(3, crate::seeding::stream::PAIR, 1);
        for _ in 0..32 {
            let u = ComplexVector::random_unit(4, &mut rng);
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = crate::seeding::rng_for(3, crate::seeding::stream::PERTURB, 0);
        let c = ComplexVector::basis(3, 0);
        for _ in 0..64 {
            let p = c.random_in_ball(0.5, &mut rng);
            assert!(p.sub(&c).norm() <= 0.5 + 1e-12);
        }
    }
}
