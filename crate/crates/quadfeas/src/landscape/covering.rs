//! Greedy δ-nets on the complex unit sphere and the sup sandwich.
//!
//! For a matrix `A`, the supremum of `|⟨A, x₁x₁* − x₂x₂*⟩|` over unit
//! vectors can be estimated from a finite δ-net: the net value sits inside
//! the `(1 ± 2δ)` band around the full-sphere value. This module builds an
//! actual net (greedy farthest-point insertion over a candidate pool,
//! patched and certified against a dense probe set) and evaluates both
//! sides of the sandwich.
//!
//! The unit sphere of ℂⁿ has real dimension 2n − 1, so net sizes are only
//! tractable for n ∈ {2, 3}; larger n is refused. Construction fails
//! cleanly when the candidate budget cannot reach the requested radius
//! (e.g. n = 3 at small δ).

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::seeding::{rng_for, stream};
use crate::C64;

/// Construction budgets for the net and its certification probes.
#[derive(Debug, Clone)]
pub struct NetConfig {
    /// Candidate pool for greedy farthest-point insertion.
    pub candidate_pool: usize,
    /// Dense probe set: certifies the covering radius and provides the
    /// dense-sample sup.
    pub probe_points: usize,
    /// Rounds of probe-driven patching before giving up.
    pub max_patch_rounds: usize,
}

impl Default for NetConfig {
    fn default() -> Self {
        Self { candidate_pool: 100_000, probe_points: 1_000_000, max_patch_rounds: 8 }
    }
}

/// A certified δ-net together with the probe set used to certify it.
pub struct SphereCover {
    n: usize,
    delta: f64,
    dim: usize,
    /// Net points, flat `[re₀, im₀, re₁, im₁, …]` per point.
    net: Vec<f64>,
    /// Probe points (same layout); every probe is within δ of the net.
    probes: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringCase {
    pub sup_net: f64,
    pub sup_dense: f64,
    /// `(1 − 2δ)·sup_dense ≤ sup_net` part.
    pub lower_holds: bool,
    /// `sup_net ≤ (1 + 2δ)·sup_dense` part.
    pub upper_holds: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub n: usize,
    pub delta: f64,
    pub net_size: usize,
    pub probe_points: usize,
    pub cases: Vec<CoveringCase>,
    pub all_hold: bool,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn sample_sphere_flat(dim: usize, count: usize, rng_seed: u64, tag_index: u64) -> Vec<f64> {
    let mut rng = rng_for(rng_seed, stream::NET, tag_index);
    let mut out = vec![0.0f64; count * dim];
    for p in out.chunks_mut(dim) {
        loop {
            let mut norm2 = 0.0;
            for v in p.iter_mut() {
                *v = rng.sample(StandardNormal);
                norm2 += *v * *v;
            }
            if norm2 > 1e-24 {
                let inv = norm2.sqrt().recip();
                for v in p.iter_mut() {
                    *v *= inv;
                }
                break;
            }
        }
    }
    out
}

/// Cell grid over [−1, 1]^dim with cell edge ≥ the query radius, so a
/// neighbor-cell scan is exhaustive for that radius.
struct CellGrid {
    dim: usize,
    cell: f64,
    points: Vec<f64>,
    cells: HashMap<u64, Vec<u32>>,
}

impl CellGrid {
    fn new(dim: usize, cell: f64) -> Self {
        Self { dim, cell, points: Vec::new(), cells: HashMap::new() }
    }

    fn axis_index(&self, v: f64) -> i64 {
        ((v + 1.0) / self.cell).floor() as i64
    }

    fn key_of_indices(&self, idx: &[i64]) -> u64 {
        // 64 cells per axis suffice for cell ≥ 0.05 on [−1, 1].
        let mut key = 0u64;
        for &i in idx {
            key = (key << 8) | ((i + 8) as u64 & 0xff);
        }
        key
    }

    fn insert(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        let id = (self.points.len() / self.dim) as u32;
        self.points.extend_from_slice(p);
        let idx: Vec<i64> = p.iter().map(|&v| self.axis_index(v)).collect();
        let key = self.key_of_indices(&idx);
        self.cells.entry(key).or_default().push(id);
    }

    /// Whether any stored point lies within squared distance `r2` of `p`.
    fn has_within(&self, p: &[f64], r2: f64) -> bool {
        let base: Vec<i64> = p.iter().map(|&v| self.axis_index(v)).collect();
        let mut offsets = vec![-1i64; self.dim];
        loop {
            let idx: Vec<i64> = base.iter().zip(&offsets).map(|(b, o)| b + o).collect();
            if let Some(ids) = self.cells.get(&self.key_of_indices(&idx)) {
                for &id in ids {
                    let q = &self.points[id as usize * self.dim..(id as usize + 1) * self.dim];
                    if dist2(p, q) <= r2 {
                        return true;
                    }
                }
            }
            // Advance the mixed-radix counter over {−1, 0, 1}^dim.
            let mut k = 0;
            loop {
                if k == self.dim {
                    return false;
                }
                offsets[k] += 1;
                if offsets[k] <= 1 {
                    break;
                }
                offsets[k] = -1;
                k += 1;
            }
        }
    }
}

impl SphereCover {
    /// Build a certified δ-net for the unit sphere of ℂⁿ.
    pub fn build(n: usize, delta: f64, cfg: &NetConfig, seed: u64) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::InvalidParameter(format!(
                "covering nets are tractable only for n in {{2, 3}}, got {n}"
            )));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "net radius must lie in (0, 1/2), got {delta}"
            )));
        }
        if cfg.candidate_pool < 2 || cfg.probe_points < 1 {
            return Err(Error::InvalidParameter("net budgets must be positive".into()));
        }
        let dim = 2 * n;
        let pool = sample_sphere_flat(dim, cfg.candidate_pool, seed, 0);
        let probes = sample_sphere_flat(dim, cfg.probe_points, seed, 1);

        // Greedy farthest-point insertion until the pool is covered at a
        // radius comfortably inside delta; probe patching closes the gap
        // between pool coverage and sphere coverage.
        let greedy_radius2 = (0.7 * delta) * (0.7 * delta);
        let pool_count = cfg.candidate_pool;
        let mut min_d2 = vec![f64::INFINITY; pool_count];
        let mut net: Vec<f64> = Vec::new();
        let mut next = 0usize;
        loop {
            let center: Vec<f64> = pool[next * dim..(next + 1) * dim].to_vec();
            net.extend_from_slice(&center);
            let (far_d2, far_idx) = min_d2
                .par_chunks_mut(4096)
                .enumerate()
                .map(|(chunk_id, chunk)| {
                    let offset = chunk_id * 4096;
                    let mut best = (0.0f64, 0usize);
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        let p = &pool[(offset + i) * dim..(offset + i + 1) * dim];
                        let d2 = dist2(p, &center);
                        if d2 < *slot {
                            *slot = d2;
                        }
                        if *slot > best.0 {
                            best = (*slot, offset + i);
                        }
                    }
                    best
                })
                .reduce(|| (0.0, 0), |a, b| if a.0 >= b.0 { a } else { b });
            if far_d2 <= greedy_radius2 || net.len() / dim == pool_count {
                break;
            }
            next = far_idx;
        }

        // Certify against the probes; add uncovered probes (thinned to
        // ~half-delta spacing) until everything is within delta.
        let r2 = delta * delta;
        let mut grid = CellGrid::new(dim, delta.max(0.05));
        for p in net.chunks(dim) {
            grid.insert(p);
        }
        let mut suspects: Vec<usize> = (0..cfg.probe_points).collect();
        for _round in 0..cfg.max_patch_rounds {
            let violators: Vec<usize> = suspects
                .par_iter()
                .cloned()
                .filter(|&i| !grid.has_within(&probes[i * dim..(i + 1) * dim], r2))
                .collect();
            if violators.is_empty() {
                return Ok(Self { n, delta, dim, net: grid.points, probes });
            }
            let patch_r2 = (0.5 * delta) * (0.5 * delta);
            for &i in &violators {
                let p = &probes[i * dim..(i + 1) * dim];
                if !grid.has_within(p, patch_r2) {
                    grid.insert(p);
                }
            }
            // A net absorbing a large share of the probes means the probe
            // set has no resolution left to certify anything: the budget
            // cannot reach this radius.
            if grid.points.len() / dim > cfg.probe_points / 4 {
                return Err(Error::NetConstruction { delta });
            }
            suspects = violators;
        }
        Err(Error::NetConstruction { delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn net_len(&self) -> usize {
        self.net.len() / self.dim
    }

    pub fn probe_len(&self) -> usize {
        self.probes.len() / self.dim
    }

    /// Evaluate the sup sandwich for one Hermitian matrix.
    ///
    /// `sup |⟨A, x₁x₁* − x₂x₂*⟩|` over a point set equals
    /// `max q − min q` with `q(x) = x*Ax`, so each side is a single sweep.
    pub fn check(&self, a: &HermitianMatrix) -> Result<CoveringCase> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: a.dim() });
        }
        let sup_net = sup_range(a, &self.net, self.dim);
        let sup_dense = sup_range(a, &self.probes, self.dim);
        let lower_holds = (1.0 - 2.0 * self.delta) * sup_dense <= sup_net + 1e-12;
        let upper_holds = sup_net <= (1.0 + 2.0 * self.delta) * sup_dense + 1e-12;
        Ok(CoveringCase { sup_net, sup_dense, lower_holds, upper_holds, holds: lower_holds && upper_holds })
    }
}

fn quad_form_flat(a: &HermitianMatrix, p: &[f64]) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        let xi = C64::new(p[2 * i], p[2 * i + 1]);
        acc += a.get(i, i).re * xi.norm_sqr();
        for j in (i + 1)..n {
            let xj = C64::new(p[2 * j], p[2 * j + 1]);
            acc += 2.0 * (xi.conj() * a.get(i, j) * xj).re;
        }
    }
    acc
}

fn sup_range(a: &HermitianMatrix, flat: &[f64], dim: usize) -> f64 {
    let (lo, hi) = flat
        .par_chunks(dim)
        .map(|p| {
            let q = quad_form_flat(a, p);
            (q, q)
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        );
    if lo.is_finite() && hi.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Build a cover and run the sandwich check for a single matrix.
pub fn covering_net_check(
    a: &HermitianMatrix,
    delta: f64,
    cfg: &NetConfig,
    seed: u64,
) -> Result<CoveringReport> {
    let cover = SphereCover::build(a.dim(), delta, cfg, seed)?;
    let case = cover.check(a)?;
    Ok(CoveringReport {
        n: cover.n,
        delta,
        net_size: cover.net_len(),
        probe_points: cover.probe_len(),
        all_hold: case.holds,
        cases: vec![case],
    })
}
