//! Monte Carlo random waves.
//!
//! A realization is a superposition of `N` plane waves with unit wave
//! vectors uniform on the sphere and uniform phases,
//! `u(R) = sqrt(2/N) sum_j cos(n_j . R + phi_j)`. Its antisymmetrization
//! `Phi(R) = (u(R) - u(mirror R)) / sqrt(2)` vanishes on `R_s = 0`. For large
//! `N` both approach the Gaussian fields whose statistics [`crate::rwave`]
//! computes analytically; the estimators here measure the same quantities
//! directly.
//!
//! Realization `i` of a run is drawn from stream `i` of the run seed, so
//! every estimate is reproducible regardless of how the work is scheduled.

mod contour;
mod estimators;
mod zeros;

use std::f64::consts::TAU;

use rand::distr::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::par::map_indexed;
use crate::stats::Moments;

pub use contour::{
    nodal_length_2d, sigma_variance_trend, ContourWindow, StripEstimate, TrendPoint,
};
pub use estimators::{
    empirical_covariances, two_point_function, CorrelationEstimate, CovarianceEstimate,
};
pub use zeros::{line_zero_density, LineSet, ZeroDensity};

/// Largest sampling step for zero counting and contouring, about 18 samples
/// per wavelength.
pub const MAX_STEP: f64 = 0.35;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveEnsembleConfig {
    pub dim: usize,
    /// Plane waves per realization.
    pub n_waves: usize,
    pub n_real: usize,
    pub seed: u64,
    /// Sampling step along lines and grids, in units of the inverse
    /// wavenumber.
    pub step: f64,
}

impl Default for WaveEnsembleConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            n_waves: 512,
            n_real: 1000,
            seed: 1,
            step: 0.1,
        }
    }
}

impl WaveEnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.n_waves < 2 {
            return Err(domain(format!(
                "need at least 2 plane waves, got {}",
                self.n_waves
            )));
        }
        if self.n_real == 0 {
            return Err(domain("need at least one realization"));
        }
        if !(self.step > 0.0 && self.step <= MAX_STEP) {
            return Err(domain(format!(
                "sampling step must lie in (0, {MAX_STEP}], got {}",
                self.step
            )));
        }
        Ok(())
    }
}

/// One draw of wave directions and phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveRealization {
    dim: usize,
    // row-major, one unit vector per wave
    directions: Vec<f64>,
    phases: Vec<f64>,
}

impl WaveRealization {
    /// Builds a realization from explicit waves. Directions are normalized.
    pub fn new(dim: usize, directions: Vec<Vec<f64>>, phases: Vec<f64>) -> Result<Self> {
        if dim < 1 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if directions.len() != phases.len() || directions.is_empty() {
            return Err(domain(
                "need the same nonzero number of directions and phases",
            ));
        }
        let mut flat = Vec::with_capacity(dim * directions.len());
        for d in &directions {
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            if d.len() != dim || !(norm > 0.0 && norm.is_finite()) {
                return Err(domain(
                    "directions must be finite nonzero vectors of the ambient dimension",
                ));
            }
            flat.extend(d.iter().map(|v| v / norm));
        }
        Ok(Self {
            dim,
            directions: flat,
            phases,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_waves(&self) -> usize {
        self.phases.len()
    }

    pub fn direction(&self, j: usize) -> &[f64] {
        &self.directions[j * self.dim..(j + 1) * self.dim]
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn norm(&self) -> f64 {
        (2.0 / self.n_waves() as f64).sqrt()
    }
}

/// Realization `index` of the ensemble.
pub fn sample_realization(config: &WaveEnsembleConfig, index: u64) -> WaveRealization {
    let (s, n) = (config.dim, config.n_waves);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let mut directions = Vec::with_capacity(s * n);
    let mut v = vec![0.0; s];
    for _ in 0..n {
        let norm = loop {
            for x in v.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-150 {
                break norm;
            }
        };
        directions.extend(v.iter().map(|x| x / norm));
    }
    let uniform = Uniform::new(0.0, TAU).expect("valid phase range");
    let phases = (0..n).map(|_| rng.sample(uniform)).collect();
    WaveRealization {
        dim: s,
        directions,
        phases,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_point(r: &WaveRealization, point: &[f64]) {
    assert_eq!(
        point.len(),
        r.dim,
        "point dimension does not match the realization"
    );
}

/// `sqrt(2/N) sum_j cos(n_j . R + phi_j)`.
pub fn eval_u(r: &WaveRealization, point: &[f64]) -> f64 {
    check_point(r, point);
    let sum: f64 = (0..r.n_waves())
        .map(|j| (dot(r.direction(j), point) + r.phases[j]).cos())
        .sum();
    r.norm() * sum
}

/// `(u(R) - u(mirror R)) / sqrt(2)`, mirrored in the last coordinate.
///
/// Evaluated as `-(2/sqrt(N)) sum_j sin(a_j) sin(n_js R_s)` with `a_j` the
/// phase from the transverse coordinates, which is exactly zero on the
/// boundary and odd under reflection.
pub fn eval_phi(r: &WaveRealization, point: &[f64]) -> f64 {
    check_point(r, point);
    let s = r.dim;
    let rs = point[s - 1];
    let sum: f64 = (0..r.n_waves())
        .map(|j| {
            let n = r.direction(j);
            let a = dot(&n[..s - 1], &point[..s - 1]) + r.phases[j];
            a.sin() * (n[s - 1] * rs).sin()
        })
        .sum();
    -2.0 / (r.n_waves() as f64).sqrt() * sum
}

/// `Phi` along `origin + t e` for `t = i * step`, `i < count`.
///
/// Each wave contributes `cos(alpha + t beta) - cos(alpha' + t beta')`
/// (direct and mirrored); both are advanced by rotation and re-anchored
/// every few hundred steps to keep rounding from accumulating.
pub(crate) fn phi_along_line(
    r: &WaveRealization,
    origin: &[f64],
    dir: &[f64],
    step: f64,
    count: usize,
) -> Vec<f64> {
    const REANCHOR: usize = 256;
    check_point(r, origin);
    check_point(r, dir);
    let s = r.dim;
    let mirror = |p: &[f64]| {
        let mut m = p.to_vec();
        m[s - 1] = -m[s - 1];
        m
    };
    let (mo, md) = (mirror(origin), mirror(dir));
    let nw = r.n_waves();
    let mut waves = Vec::with_capacity(nw);
    for j in 0..nw {
        let n = r.direction(j);
        waves.push([
            dot(n, origin) + r.phases[j],
            dot(n, dir) * step,
            dot(n, &mo) + r.phases[j],
            dot(n, &md) * step,
        ]);
    }
    let mut out = vec![0.0; count];
    // state per wave: (cos, sin) of the direct and mirrored phases
    let mut state = vec![[0.0f64; 4]; nw];
    let rot: Vec<[f64; 4]> = waves
        .iter()
        .map(|w| {
            let (s1, c1) = w[1].sin_cos();
            let (s2, c2) = w[3].sin_cos();
            [c1, s1, c2, s2]
        })
        .collect();
    let scale = r.norm() / 2f64.sqrt();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..nw {
            let st = &mut state[j];
            if i % REANCHOR == 0 {
                let w = &waves[j];
                let (s1, c1) = (w[0] + i as f64 * w[1]).sin_cos();
                let (s2, c2) = (w[2] + i as f64 * w[3]).sin_cos();
                *st = [c1, s1, c2, s2];
            } else {
                let q = &rot[j];
                let (c1, s1) = (st[0] * q[0] - st[1] * q[1], st[1] * q[0] + st[0] * q[1]);
                let (c2, s2) = (st[2] * q[2] - st[3] * q[3], st[3] * q[2] + st[2] * q[3]);
                *st = [c1, s1, c2, s2];
            }
            acc += st[0] - st[2];
        }
        *o = scale * acc;
    }
    out
}

const CHUNK: usize = 32;

/// Runs `f` on every realization of `config` and accumulates the `width`
/// values it writes into per-slot moments. Realizations are processed in
/// fixed chunks and merged in chunk order, so the result does not depend on
/// the number of worker threads.
pub(crate) fn accumulate<F>(config: &WaveEnsembleConfig, width: usize, f: F) -> Vec<Moments>
where
    F: Fn(&WaveRealization, &mut [f64]) + Sync + Send,
{
    let n = config.n_real;
    let parts = map_indexed(n.div_ceil(CHUNK), |c| {
        let mut acc = vec![Moments::new(); width];
        let mut buf = vec![0.0; width];
        for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
            let r = sample_realization(config, i as u64);
            f(&r, &mut buf);
            for (m, &v) in acc.iter_mut().zip(&buf) {
                m.push(v);
            }
        }
        acc
    });
    let mut total = vec![Moments::new(); width];
    for part in &parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total
}

/// Runs `f` on every realization and returns its outputs in realization
/// order.
pub(crate) fn collect<T, F>(config: &WaveEnsembleConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&WaveRealization) -> T + Sync + Send,
{
    let n = config.n_real;
    let parts = map_indexed(n.div_ceil(CHUNK), |c| {
        (c * CHUNK..((c + 1) * CHUNK).min(n))
            .map(|i| f(&sample_realization(config, i as u64)))
            .collect::<Vec<_>>()
    });
    parts.into_iter().flatten().collect()
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
}

impl From<&Moments> for Estimate {
    fn from(m: &Moments) -> Self {
        Self {
            mean: m.mean,
            stderr: m.stderr(),
            count: m.count,
        }
    }
}

impl Estimate {
    /// Distance from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.stderr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::ks_distance;
    use proptest::prelude::*;

    fn cfg(dim: usize, n_waves: usize) -> WaveEnsembleConfig {
        WaveEnsembleConfig {
            dim,
            n_waves,
            n_real: 1,
            seed: 7,
            step: 0.1,
        }
    }

    #[test]
    fn realizations_are_reproducible() {
        let c = cfg(3, 64);
        assert_eq!(sample_realization(&c, 5), sample_realization(&c, 5));
        assert_ne!(sample_realization(&c, 5), sample_realization(&c, 6));
        let r = sample_realization(&c, 0);
        for j in 0..r.n_waves() {
            let n = r.direction(j);
            assert!((dot(n, n) - 1.0).abs() < 1e-12);
        }
        assert!(r.phases().iter().all(|p| (0.0..TAU).contains(p)));
    }

    #[test]
    fn direction_moments_and_phases() {
        let r = sample_realization(&cfg(3, 100_000), 3);
        for l in 0..3 {
            let m: Moments = (0..r.n_waves()).map(|j| r.direction(j)[l]).collect();
            assert!(m.mean.abs() < 0.01, "coordinate {l}: mean {}", m.mean);
            assert!(
                (m.variance() - 1.0 / 3.0).abs() < 0.01,
                "coordinate {l}: variance {}",
                m.variance()
            );
        }
        // KS critical value at the 1% level is 1.63 / sqrt(n)
        let ks = ks_distance(r.phases(), |p| (p / TAU).clamp(0.0, 1.0)).unwrap();
        assert!(ks < 1.63 / (r.n_waves() as f64).sqrt(), "{ks}");
    }

    #[test]
    fn single_wave() {
        let r = WaveRealization::new(2, vec![vec![1.0, 0.0]], vec![0.0]).unwrap();
        // one wave carries norm sqrt(2/1)
        assert!((eval_u(&r, &[0.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
        let r =
            WaveRealization::new(2, vec![vec![0.6, 0.8], vec![-1.0, 0.0]], vec![0.3, 1.1]).unwrap();
        let p = [0.7, 1.9];
        let direct = (eval_u(&r, &p) - eval_u(&r, &[0.7, -1.9])) / 2f64.sqrt();
        assert!((eval_phi(&r, &p) - direct).abs() < 1e-14);
        assert!(WaveRealization::new(2, vec![vec![0.0, 0.0]], vec![0.0]).is_err());
    }

    #[test]
    fn line_sampler_matches_pointwise() {
        for s in [2, 3] {
            let r = sample_realization(&cfg(s, 32), 11);
            let mut origin = vec![0.3; s];
            origin[s - 1] = 0.0;
            let mut dir = vec![0.0; s];
            dir[s - 1] = 1.0;
            dir[0] = 0.5;
            let vals = phi_along_line(&r, &origin, &dir, 0.07, 1000);
            for (i, v) in vals.iter().enumerate().step_by(37) {
                let t = i as f64 * 0.07;
                let p: Vec<f64> = origin.iter().zip(&dir).map(|(o, d)| o + t * d).collect();
                assert!((v - eval_phi(&r, &p)).abs() < 1e-11, "s={s} i={i}");
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(WaveEnsembleConfig::default().validate().is_ok());
        for bad in [
            WaveEnsembleConfig {
                dim: 1,
                ..Default::default()
            },
            WaveEnsembleConfig {
                n_waves: 1,
                ..Default::default()
            },
            WaveEnsembleConfig {
                n_real: 0,
                ..Default::default()
            },
            WaveEnsembleConfig {
                step: 0.5,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn phi_is_odd_and_vanishes_on_the_boundary(seed in 0u64..1000, x in -50.0..50.0f64, y in 0.0..50.0f64) {
            let r = sample_realization(&WaveEnsembleConfig { seed, ..cfg(2, 16) }, 0);
            prop_assert_eq!(eval_phi(&r, &[x, 0.0]), 0.0);
            prop_assert_eq!(eval_phi(&r, &[x, y]), -eval_phi(&r, &[x, -y]));
        }
    }
}
