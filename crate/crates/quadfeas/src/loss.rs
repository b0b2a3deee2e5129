//! The averaged squared-residual loss and its Wirtinger derivatives.
//!
//! For observations `c` over an ensemble `{A_i}`, the loss is
//! `f(x) = (1/m)·Σ_i (⟨A_i x, x⟩ − c_i)²`. The loss is real-valued over a
//! complex argument, so derivatives are taken in the Wirtinger sense,
//! treating `x` and its conjugate as independent coordinates.
//!
//! Constant conventions are pinned operationally, not typographically:
//! with `g_x = (2/m)·Σ_i r_i·A_i x` (the factor 2 from differentiating the
//! squared residual), every direction `Δ` satisfies
//! `d/dt f(x + tΔ)|₀ = 2·Re⟨g_x, Δ⟩`, and the Hessian quadratic form is
//! *defined* as `d²/dt² f(x + tΔ)|₀`. The finite-difference oracles
//! [`LossProblem::fd_gradient`] and [`LossProblem::fd_second_difference`]
//! enforce both contracts in the test and verification suites.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{MeasurementEnsemble, MeasurementVector};
use crate::util::pairwise_sum;
use crate::vector::ComplexVector;
use crate::C64;

/// Default central-difference step for first derivatives (unit-norm inputs).
pub const FD_GRADIENT_STEP: f64 = 1e-6;
/// Default step for second differences (unit-norm inputs).
pub const FD_SECOND_STEP: f64 = 1e-4;

/// Dimension cap for the explicit 2n×2n Hessian representations.
pub const HESSIAN_MATRIX_MAX_DIM: usize = 64;

/// An ensemble paired with observations: the data of the minimization.
#[derive(Debug, Clone)]
pub struct LossProblem {
    ensemble: MeasurementEnsemble,
    observations: MeasurementVector,
}

/// The conjugate-coordinate derivative of the loss at a point.
///
/// Only the `∂/∂x̄` part is stored; the `∂/∂x` part is its conjugate
/// because the loss is real, so the stacked `[g_x; conj(g_x)]` vector is
/// conjugate-symmetric by construction.
#[derive(Debug, Clone)]
pub struct WirtingerGradient {
    g_x: ComplexVector,
}

impl WirtingerGradient {
    /// The stored `∂f/∂x̄` part.
    pub fn g_x(&self) -> &ComplexVector {
        &self.g_x
    }

    /// The derived conjugate part `g_x̄ = conj(g_x)`.
    pub fn g_xbar(&self) -> ComplexVector {
        ComplexVector::from_entries(self.g_x.entries().iter().map(|e| e.conj()).collect())
    }

    /// The gradient of `f` seen as a function of the 2n real coordinates,
    /// reassembled as a complex vector: `2·g_x`. Gradient descent steps and
    /// all reported gradient norms use this object.
    pub fn real_gradient(&self) -> ComplexVector {
        self.g_x.scale(C64::new(2.0, 0.0))
    }

    /// Euclidean norm of [`Self::real_gradient`].
    pub fn real_norm(&self) -> f64 {
        2.0 * self.g_x.norm()
    }
}

impl LossProblem {
    pub fn new(ensemble: MeasurementEnsemble, observations: MeasurementVector) -> Result<Self> {
        if ensemble.m() != observations.m() {
            return Err(Error::DimensionMismatch {
                expected: ensemble.m(),
                got: observations.m(),
            });
        }
        Ok(Self { ensemble, observations })
    }

    /// Noiseless problem with observations generated from a ground truth.
    pub fn noiseless(ensemble: MeasurementEnsemble, z: &ComplexVector) -> Result<Self> {
        let observations = ensemble.forward_map(z)?;
        Self::new(ensemble, observations)
    }

    pub fn ensemble(&self) -> &MeasurementEnsemble {
        &self.ensemble
    }

    pub fn observations(&self) -> &MeasurementVector {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.ensemble.n()
    }

    pub fn m(&self) -> usize {
        self.ensemble.m()
    }

    fn check_dim(&self, x: &ComplexVector) -> Result<()> {
        if x.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.dim() });
        }
        Ok(())
    }

    /// `f(x) = (1/m)·Σ (⟨A_i x, x⟩ − c_i)²`, accumulated pairwise in
    /// measurement order.
    pub fn loss(&self, x: &ComplexVector) -> Result<f64> {
        self.check_dim(x)?;
        let c = self.observations.values();
        let terms: Vec<f64> = self
            .ensemble
            .matrices()
            .iter()
            .zip(c)
            .map(|(a, ci)| {
                let r = a.quad_form(x) - ci;
                r * r
            })
            .collect();
        Ok(pairwise_sum(&terms) / self.m() as f64)
    }

    /// Loss and gradient in one pass (shares the per-measurement matvec).
    pub fn loss_and_gradient(&self, x: &ComplexVector) -> Result<(f64, WirtingerGradient)> {
        self.check_dim(x)?;
        let n = self.n();
        let m = self.m() as f64;
        let c = self.observations.values();
        let xe = x.entries();
        let mut g = vec![C64::new(0.0, 0.0); n];
        let mut sq = Vec::with_capacity(self.m());
        for (a, ci) in self.ensemble.matrices().iter().zip(c) {
            let u = a.matvec(x);
            let ue = u.entries();
            let r = xe.iter().zip(ue).map(|(xk, uk)| xk.conj() * uk).sum::<C64>().re - ci;
            sq.push(r * r);
            for (gk, uk) in g.iter_mut().zip(ue) {
                *gk += uk.scale(r);
            }
        }
        let f = pairwise_sum(&sq) / m;
        let scale = 2.0 / m;
        for gk in &mut g {
            *gk = gk.scale(scale);
        }
        Ok((f, WirtingerGradient { g_x: ComplexVector::from_entries(g) }))
    }

    /// Closed-form gradient `g_x = (2/m)·Σ r_i·A_i x`.
    pub fn wirtinger_gradient(&self, x: &ComplexVector) -> Result<WirtingerGradient> {
        Ok(self.loss_and_gradient(x)?.1)
    }

    /// The Hessian quadratic form `Q(x)[Δ] = d²/dt² f(x + tΔ)|₀`, via the
    /// closed form `(1/m)·Σ [8·Re(x*A_iΔ)² + 4·r_i·Δ*A_iΔ]`.
    pub fn hessian_quadratic_form(&self, x: &ComplexVector, delta: &ComplexVector) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(delta)?;
        let c = self.observations.values();
        let xe = x.entries();
        let de = delta.entries();
        let terms: Vec<f64> = self
            .ensemble
            .matrices()
            .iter()
            .zip(c)
            .map(|(a, ci)| {
                let u = a.matvec(x);
                let ue = u.entries();
                let r = xe.iter().zip(ue).map(|(xk, uk)| xk.conj() * uk).sum::<C64>().re - ci;
                // Δ*A_i x, whose real part equals Re(x*A_iΔ).
                let w: C64 = de.iter().zip(ue).map(|(dk, uk)| dk.conj() * uk).sum();
                let qd = a.quad_form(delta);
                8.0 * w.re * w.re + 4.0 * r * qd
            })
            .collect();
        Ok(pairwise_sum(&terms) / self.m() as f64)
    }

    /// Explicit 2n×2n Wirtinger Hessian in the `[x; x̄]` coordinates.
    ///
    /// With `u_i = A_i x` and `r_i` the residual, the blocks are
    /// `(2/m)·Σ [u_i u_i* + r_i A_i , u_i u_iᵀ ; conj , conj]`; the matrix
    /// is Hermitian and `[Δ; Δ̄]* H [Δ; Δ̄]` reproduces the quadratic form.
    /// Diagnostics only: refuses dimensions above
    /// [`HESSIAN_MATRIX_MAX_DIM`].
    pub fn hessian_matrix(&self, x: &ComplexVector) -> Result<DMatrix<C64>> {
        self.check_dim(x)?;
        let n = self.n();
        if n > HESSIAN_MATRIX_MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "explicit Hessian is limited to n <= {HESSIAN_MATRIX_MAX_DIM}, got {n}"
            )));
        }
        let xe = x.entries();
        let c = self.observations.values();
        let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
        for (a, ci) in self.ensemble.matrices().iter().zip(c) {
            let u = a.matvec(x);
            let ue = u.entries();
            let r = xe.iter().zip(ue).map(|(xk, uk)| xk.conj() * uk).sum::<C64>().re - ci;
            for p in 0..n {
                for q in 0..n {
                    let apq = a.get(p, q);
                    h[(p, q)] += ue[p] * ue[q].conj() + apq.scale(r);
                    h[(p, n + q)] += ue[p] * ue[q];
                    h[(n + p, q)] += ue[p].conj() * ue[q].conj();
                    h[(n + p, n + q)] += ue[p].conj() * ue[q] + apq.conj().scale(r);
                }
            }
        }
        let scale = C64::new(2.0 / self.m() as f64, 0.0);
        Ok(h * scale)
    }

    /// The same quadratic form as a real symmetric 2n×2n matrix over the
    /// coordinates `v = [Re Δ; Im Δ]`: `vᵀ·H_R·v = Q(x)[Δ]`.
    pub fn hessian_real(&self, x: &ComplexVector) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        let n = self.n();
        if n > HESSIAN_MATRIX_MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "explicit Hessian is limited to n <= {HESSIAN_MATRIX_MAX_DIM}, got {n}"
            )));
        }
        let xe = x.entries();
        let c = self.observations.values();
        let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for (a, ci) in self.ensemble.matrices().iter().zip(c) {
            let u = a.matvec(x);
            let ue = u.entries();
            let r = xe.iter().zip(ue).map(|(xk, uk)| xk.conj() * uk).sum::<C64>().re - ci;
            // 8·g gᵀ with g = [Re u; Im u]: Re(x*A_iΔ) = gᵀ[Re Δ; Im Δ].
            for p in 0..n {
                for q in 0..n {
                    h[(p, q)] += 8.0 * ue[p].re * ue[q].re;
                    h[(p, n + q)] += 8.0 * ue[p].re * ue[q].im;
                    h[(n + p, q)] += 8.0 * ue[p].im * ue[q].re;
                    h[(n + p, n + q)] += 8.0 * ue[p].im * ue[q].im;
                }
            }
            // 4·r·[[Re A, −Im A], [Im A, Re A]], the real form of Δ*AΔ.
            for p in 0..n {
                for q in 0..n {
                    let apq = a.get(p, q);
                    h[(p, q)] += 4.0 * r * apq.re;
                    h[(p, n + q)] += 4.0 * r * -apq.im;
                    h[(n + p, q)] += 4.0 * r * apq.im;
                    h[(n + p, n + q)] += 4.0 * r * apq.re;
                }
            }
        }
        Ok(h / self.m() as f64)
    }

    /// Minimum of `Q(x)[Δ] / ‖[Δ; Δ̄]‖²` over all directions, i.e. half the
    /// smallest eigenvalue of [`Self::hessian_real`].
    pub fn min_curvature(&self, x: &ComplexVector) -> Result<f64> {
        let h = self.hessian_real(x)?;
        let eig = h.symmetric_eigenvalues();
        Ok(eig.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0)
    }

    /// Central-difference gradient in the 2n real coordinates, reassembled
    /// as a complex vector. Independent oracle for
    /// [`WirtingerGradient::real_gradient`].
    pub fn fd_gradient(&self, x: &ComplexVector, h: f64) -> Result<ComplexVector> {
        self.check_dim(x)?;
        if !(h > 0.0) {
            return Err(Error::InvalidParameter("finite-difference step must be > 0".into()));
        }
        let n = self.n();
        let entries: Vec<C64> = (0..n)
            .into_par_iter()
            .map(|k| {
                let probe = |re: f64, im: f64| -> f64 {
                    let mut e = x.entries().to_vec();
                    e[k] += C64::new(re, im);
                    self.loss(&ComplexVector::from_entries(e)).expect("dims already checked")
                };
                let du = (probe(h, 0.0) - probe(-h, 0.0)) / (2.0 * h);
                let dv = (probe(0.0, h) - probe(0.0, -h)) / (2.0 * h);
                C64::new(du, dv)
            })
            .collect();
        Ok(ComplexVector::from_entries(entries))
    }

    /// Second-order central difference of `f` along the real line
    /// `t ↦ x + tΔ`. Independent oracle for
    /// [`Self::hessian_quadratic_form`].
    pub fn fd_second_difference(
        &self,
        x: &ComplexVector,
        delta: &ComplexVector,
        h: f64,
    ) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(delta)?;
        if !(h > 0.0) {
            return Err(Error::InvalidParameter("finite-difference step must be > 0".into()));
        }
        let fp = self.loss(&x.add_scaled(h, delta))?;
        let f0 = self.loss(x)?;
        let fm = self.loss(&x.add_scaled(-h, delta))?;
        Ok((fp - 2.0 * f0 + fm) / (h * h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::HermitianMatrix;
    use crate::seeding::{rng_for, stream};
    use crate::util::rel_diff;

    fn random_instance(n: usize, m: usize, seed: u64) -> (LossProblem, ComplexVector) {
        let ens = MeasurementEnsemble::sample_hermitian_gaussian(n, m, 1.0, seed).unwrap();
        let mut rng = rng_for(seed, stream::GROUND_TRUTH, 0);
        let z = ComplexVector::random_unit(n, &mut rng);
        (LossProblem::noiseless(ens, &z).unwrap(), z)
    }

    #[test]
    fn loss_vanishes_on_the_solution_orbit() {
        let (p, z) = random_instance(4, 12, 101);
        assert!(p.loss(&z).unwrap() <= 1e-24);
        for theta in [0.4, 1.9, 3.3, 6.0] {
            let f = p.loss(&z.rotate(theta)).unwrap();
            assert!(f <= 1e-20, "f = {f}");
        }
    }

    #[test]
    fn loss_at_zero_is_mean_square_observation() {
        let (p, _) = random_instance(4, 12, 102);
        let want = p
            .observations()
            .values()
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            / p.m() as f64;
        let got = p.loss(&ComplexVector::zeros(4)).unwrap();
        assert!(rel_diff(got, want) <= 1e-12);
    }

    #[test]
    fn gradient_zero_at_truth_and_at_origin() {
        let (p, z) = random_instance(5, 20, 103);
        assert!(p.wirtinger_gradient(&z).unwrap().real_norm() <= 1e-10);
        assert!(
            p.wirtinger_gradient(&ComplexVector::zeros(5)).unwrap().real_norm() == 0.0
        );
        for theta in [0.3, 2.2, 4.8] {
            let g = p.wirtinger_gradient(&z.rotate(theta)).unwrap();
            assert!(g.real_norm() <= 1e-10, "‖g‖ = {}", g.real_norm());
        }
    }

    /// Directional-derivative contract: 2·Re⟨g_x, Δ⟩ must equal the central
    /// difference of f along Δ.
    #[test]
    fn gradient_matches_directional_finite_difference() {
        let mut rng = rng_for(104, stream::DIRECTION, 0);
        for trial in 0..10 {
            let (p, _) = random_instance(4, 12, 200 + trial);
            let x = ComplexVector::random_unit(4, &mut rng);
            let d = ComplexVector::random_unit(4, &mut rng);
            let g = p.wirtinger_gradient(&x).unwrap();
            let analytic = 2.0 * g.g_x().inner(&d).re;
            let h = FD_GRADIENT_STEP;
            let fd = (p.loss(&x.add_scaled(h, &d)).unwrap()
                - p.loss(&x.add_scaled(-h, &d)).unwrap())
                / (2.0 * h);
            assert!(
                rel_diff(analytic, fd) <= 1e-6,
                "trial {trial}: analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn fd_gradient_matches_real_gradient_componentwise() {
        let (p, _) = random_instance(3, 10, 105);
        let mut rng = rng_for(105, stream::DIRECTION, 1);
        let x = ComplexVector::random_unit(3, &mut rng);
        let g = p.wirtinger_gradient(&x).unwrap().real_gradient();
        let fd = p.fd_gradient(&x, FD_GRADIENT_STEP).unwrap();
        for (a, b) in g.entries().iter().zip(fd.entries()) {
            assert!((a - b).norm() <= 1e-6 * g.norm().max(1.0));
        }
    }

    /// Analytic scalar oracle: for n = 1, A = [a], the loss is
    /// (a·|x|² − c)² with real gradient 4·a·r·x.
    #[test]
    fn scalar_instance_matches_analytic_derivative() {
        let a = 1.7;
        let cval = 0.4;
        let ens = MeasurementEnsemble::from_matrices(vec![HermitianMatrix::from_upper(
            1,
            vec![C64::new(a, 0.0)],
        )
        .unwrap()])
        .unwrap();
        let obs = MeasurementVector::noiseless(vec![cval]).unwrap();
        let p = LossProblem::new(ens, obs).unwrap();
        let x = ComplexVector::new(vec![C64::new(0.6, -0.8)]).unwrap();
        let r = a * x.norm_sqr() - cval;
        let analytic = x.entries()[0].scale(4.0 * a * r);
        let g = p.wirtinger_gradient(&x).unwrap().real_gradient();
        assert!((g.entries()[0] - analytic).norm() <= 1e-12 * analytic.norm().max(1.0));
        let fd = p.fd_gradient(&x, 1e-6).unwrap();
        assert!((fd.entries()[0] - analytic).norm() <= 1e-6 * analytic.norm().max(1.0));
    }

    /// Richardson order check: central differences are O(h²), so halving h
    /// shrinks the error by about 4.
    #[test]
    fn fd_gradient_error_scales_quadratically() {
        let (p, _) = random_instance(3, 8, 106);
        let mut rng = rng_for(106, stream::DIRECTION, 2);
        let x = ComplexVector::random_unit(3, &mut rng);
        let exact = p.wirtinger_gradient(&x).unwrap().real_gradient();
        let err = |h: f64| {
            let fd = p.fd_gradient(&x, h).unwrap();
            fd.sub(&exact).norm()
        };
        let e1 = err(1e-3);
        let e2 = err(5e-4);
        let ratio = e1 / e2;
        assert!((3.0..=5.5).contains(&ratio), "ratio {ratio} (errors {e1}, {e2})");
    }

    #[test]
    fn quadratic_form_trivial_cases() {
        let (p, _) = random_instance(4, 12, 107);
        let mut rng = rng_for(107, stream::DIRECTION, 0);
        let x = ComplexVector::random_unit(4, &mut rng);
        let zero = ComplexVector::zeros(4);
        assert_eq!(p.hessian_quadratic_form(&x, &zero).unwrap(), 0.0);

        let d = ComplexVector::random_unit(4, &mut rng);
        let q1 = p.hessian_quadratic_form(&x, &d).unwrap();
        let q3 = p
            .hessian_quadratic_form(&x, &d.scale(C64::new(3.0, 0.0)))
            .unwrap();
        assert!(rel_diff(q3, 9.0 * q1) <= 1e-12, "q3 {q3} vs 9·q1 {}", 9.0 * q1);
    }

    /// Second-difference oracle for the quadratic form.
    #[test]
    fn quadratic_form_matches_second_difference() {
        let mut rng = rng_for(108, stream::DIRECTION, 3);
        for trial in 0..10 {
            let (p, _) = random_instance(4, 12, 300 + trial);
            let x = ComplexVector::random_unit(4, &mut rng);
            let d = ComplexVector::random_unit(4, &mut rng);
            let q = p.hessian_quadratic_form(&x, &d).unwrap();
            let fd = p.fd_second_difference(&x, &d, FD_SECOND_STEP).unwrap();
            assert!(rel_diff(q, fd) <= 1e-4, "trial {trial}: q {q} vs fd {fd}");
        }
    }

    #[test]
    fn hessian_matrix_is_hermitian_and_reproduces_quadratic_form() {
        let (p, _) = random_instance(3, 9, 109);
        let mut rng = rng_for(109, stream::DIRECTION, 4);
        let x = ComplexVector::random_unit(3, &mut rng);
        let h = p.hessian_matrix(&x).unwrap();
        let scale: f64 = h.iter().map(|e| e.norm()).fold(0.0, f64::max).max(1.0);
        for i in 0..6 {
            for j in 0..6 {
                assert!((h[(i, j)] - h[(j, i)].conj()).norm() <= 1e-10 * scale);
            }
        }
        for _ in 0..5 {
            let d = ComplexVector::random_unit(3, &mut rng);
            let q = p.hessian_quadratic_form(&x, &d).unwrap();
            // ψ = [Δ; Δ̄], quadratic form ψ*Hψ.
            let mut psi = nalgebra::DVector::<C64>::zeros(6);
            for k in 0..3 {
                psi[k] = d.entries()[k];
                psi[3 + k] = d.entries()[k].conj();
            }
            let v = (&psi.adjoint() * &h * &psi)[(0, 0)];
            assert!(v.im.abs() <= 1e-10 * v.re.abs().max(1.0));
            assert!(rel_diff(v.re, q) <= 1e-8, "matrix {} vs form {q}", v.re);
        }
    }

    #[test]
    fn hessian_real_reproduces_quadratic_form_and_scalar_oracle() {
        let (p, _) = random_instance(3, 9, 110);
        let mut rng = rng_for(110, stream::DIRECTION, 5);
        let x = ComplexVector::random_unit(3, &mut rng);
        let hr = p.hessian_real(&x).unwrap();
        for _ in 0..5 {
            let d = ComplexVector::random_unit(3, &mut rng);
            let mut v = nalgebra::DVector::<f64>::zeros(6);
            for k in 0..3 {
                v[k] = d.entries()[k].re;
                v[3 + k] = d.entries()[k].im;
            }
            let q = p.hessian_quadratic_form(&x, &d).unwrap();
            let got = (v.transpose() * &hr * &v)[(0, 0)];
            assert!(rel_diff(got, q) <= 1e-10);
        }

        // Scalar symbolic oracle: n = 1, A = [a]. In (u, v) coordinates the
        // Hessian of (a(u²+v²) − c)² is [[4ar + 8a²u², 8a²uv], [8a²uv,
        // 4ar + 8a²v²]].
        let a = 1.3;
        let cval = 0.2;
        let ens = MeasurementEnsemble::from_matrices(vec![HermitianMatrix::from_upper(
            1,
            vec![C64::new(a, 0.0)],
        )
        .unwrap()])
        .unwrap();
        let p1 = LossProblem::new(ens, MeasurementVector::noiseless(vec![cval]).unwrap()).unwrap();
        let (u, v) = (0.7, -0.4);
        let x1 = ComplexVector::new(vec![C64::new(u, v)]).unwrap();
        let r = a * (u * u + v * v) - cval;
        let hr1 = p1.hessian_real(&x1).unwrap();
        let want = [
            [4.0 * a * r + 8.0 * a * a * u * u, 8.0 * a * a * u * v],
            [8.0 * a * a * u * v, 4.0 * a * r + 8.0 * a * a * v * v],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (hr1[(i, j)] - want[i][j]).abs() <= 1e-12 * want[i][j].abs().max(1.0),
                    "entry ({i},{j}): {} vs {}",
                    hr1[(i, j)],
                    want[i][j]
                );
            }
        }
    }

    /// Random-direction Rayleigh oracle: the exact minimum curvature is an
    /// inner bound of sampled Rayleigh quotients and 10⁴ samples in a small
    /// dimension get within 10% of it.
    #[test]
    fn min_curvature_matches_random_rayleigh_sampling() {
        let (p, _) = random_instance(2, 6, 111);
        let mut rng = rng_for(111, stream::DIRECTION, 6);
        let x = ComplexVector::random_unit(2, &mut rng).scale(C64::new(1.4, 0.0));
        let exact = p.min_curvature(&x).unwrap();
        let mut best = f64::INFINITY;
        for _ in 0..10_000 {
            let d = ComplexVector::random_unit(2, &mut rng);
            let q = p.hessian_quadratic_form(&x, &d).unwrap();
            let rayleigh = q / (2.0 * d.norm_sqr());
            best = best.min(rayleigh);
            assert!(rayleigh >= exact - 1e-9 * exact.abs().max(1.0));
        }
        assert!(
            (best - exact).abs() <= 0.10 * exact.abs().max(1e-6),
            "sampled {best} vs exact {exact}"
        );
    }

    /// κ-consistency of the gradient pairing: Re⟨g_x, Δ⟩ equals the
    /// Frobenius-route sum (1/m)·Σ ⟨A_i, xx*−zz*⟩·⟨A_i, xΔ* + Δx*⟩.
    #[test]
    fn gradient_pairing_matches_frobenius_route() {
        let mut rng = rng_for(112, stream::DIRECTION, 7);
        for trial in 0..5 {
            let (p, z) = random_instance(4, 10, 400 + trial);
            let x = ComplexVector::random_unit(4, &mut rng);
            let d = ComplexVector::random_unit(4, &mut rng);
            let g = p.wirtinger_gradient(&x).unwrap();
            let lhs = g.g_x().inner(&d).re;
            let diff = HermitianMatrix::outer_difference(&x, &z).unwrap();
            let sym = HermitianMatrix::symmetric_outer(&x, &d).unwrap();
            let rhs: f64 = p
                .ensemble()
                .matrices()
                .iter()
                .map(|a| a.frobenius_inner(&diff).unwrap() * a.frobenius_inner(&sym).unwrap())
                .sum::<f64>()
                / p.m() as f64;
            assert!(rel_diff(lhs, rhs) <= 1e-9, "trial {trial}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn dimension_checks_and_bad_step_errors() {
        let (p, _) = random_instance(3, 6, 113);
        let wrong = ComplexVector::zeros(4);
        assert!(p.loss(&wrong).is_err());
        assert!(p.wirtinger_gradient(&wrong).is_err());
        let ok = ComplexVector::zeros(3);
        assert!(p.fd_gradient(&ok, 0.0).is_err());
        assert!(p.fd_second_difference(&ok, &ok, -1.0).is_err());
    }
}
