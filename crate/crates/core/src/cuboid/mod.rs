//! Dirichlet eigenmodes of the `s`-dimensional cuboid.
//!
//! A mode is labelled by positive integers `n = (n_1, .., n_s)`. Its energy is
//! `pi^2 * sum (n_l / a_l)^2` and its nodal set consists of `n_l - 1` interior
//! hyperplanes per axis, so the rescaled nodal volume
//! `sigma = sum (n_l - 1) / a_l / sqrt(E)` is known exactly.

mod asymptotics;
mod enumerate;
mod limiting;
mod window;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use asymptotics::{
    asymptotic_mean, asymptotic_variance, beta_s, boundary_slope, mean_prefactor, weyl_counting,
    weyl_density,
};
pub use enumerate::{counting_function, enumerate_window, WindowModes};
pub use limiting::{
    edge_exponent, limiting_pdf_closed, limiting_pdf_mc, sample_limiting_sigma, Edge, LimitingCdf,
};
pub use window::{window_mean_sigma, window_sigmas, window_stats, window_var_sigma, WindowStats};

const PI2: f64 = PI * PI;

/// Side lengths of a cuboid; the dimension is the number of sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuboidSpec {
    sides: Vec<f64>,
}

impl CuboidSpec {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.len() < 2 {
            return Err(domain(format!(
                "a cuboid needs at least two sides, got {}",
                sides.len()
            )));
        }
        if let Some(bad) = sides.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(domain(format!(
                "side lengths must be positive and finite, got {bad}"
            )));
        }
        Ok(Self { sides })
    }

    /// Sides `1, sqrt(2), sqrt(3), sqrt(5), ...`: one followed by square roots
    /// of successive primes, which keeps the spectrum free of systematic
    /// degeneracies.
    pub fn incommensurate(s: usize) -> Result<Self> {
        let mut sides = vec![1.0];
        let mut p = 1u64;
        while sides.len() < s {
            p += 1;
            if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                sides.push((p as f64).sqrt());
            }
        }
        Self::new(sides)
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    /// Total (s-1)-volume of the boundary, `2V * sum 1/a_l`.
    pub fn surface(&self) -> f64 {
        2.0 * self.volume() * self.sides.iter().map(|a| 1.0 / a).sum::<f64>()
    }
}

/// Energy interval `[E, E + g E^{1/4}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub energy: f64,
    pub g: f64,
}

impl SpectralWindow {
    pub fn new(energy: f64, g: f64) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(domain(format!(
                "window energy must be positive, got {energy}"
            )));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(domain(format!(
                "window constant g must be positive, got {g}"
            )));
        }
        Ok(Self { energy, g })
    }

    /// Window at `energy` whose constant `g` is large enough for the window
    /// to hold at least `min_modes` modes.
    pub fn with_min_modes(spec: &CuboidSpec, energy: f64, min_modes: u64) -> Result<Self> {
        let density = weyl_density(spec, energy).max(f64::MIN_POSITIVE);
        let mut g = 1.05 * min_modes as f64 / (density * energy.powf(0.25));
        loop {
            let w = Self::new(energy, g)?;
            let (lo, hi) = w.bounds();
            if enumerate::count_between(spec, lo, hi) >= min_modes {
                return Ok(w);
            }
            g *= 1.1;
        }
    }

    pub fn width(&self) -> f64 {
        self.g * self.energy.powf(0.25)
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.energy, self.energy + self.width())
    }
}

/// One eigenmode with its energy and rescaled nodal volume.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalSample {
    pub n: Vec<u64>,
    pub energy: f64,
    pub sigma: f64,
}

fn check_modes(spec: &CuboidSpec, n: &[u64]) -> Result<()> {
    if n.len() != spec.dim() {
        return Err(domain(format!(
            "mode vector has {} entries for a {}-dimensional cuboid",
            n.len(),
            spec.dim()
        )));
    }
    if n.contains(&0) {
        return Err(domain("mode numbers start at 1"));
    }
    Ok(())
}

/// `pi^2 * sum (n_l / a_l)^2`, summed left to right.
pub fn mode_energy(spec: &CuboidSpec, n: &[u64]) -> Result<f64> {
    check_modes(spec, n)?;
    Ok(energy_unchecked(spec.sides(), n))
}

/// `sum (n_l - 1) / a_l / sqrt(E_n)`.
pub fn mode_sigma(spec: &CuboidSpec, n: &[u64]) -> Result<f64> {
    check_modes(spec, n)?;
    let e = energy_unchecked(spec.sides(), n);
    Ok(nodal_sum(spec.sides(), n) / e.sqrt())
}

// The enumeration reproduces this summation order exactly, so window
// membership agrees with mode_energy to the last bit.
fn energy_unchecked(sides: &[f64], n: &[u64]) -> f64 {
    let q = n
        .iter()
        .zip(sides)
        .fold(0.0, |q, (&k, a)| q + (k as f64 / a).powi(2));
    PI2 * q
}

fn nodal_sum(sides: &[f64], n: &[u64]) -> f64 {
    n.iter()
        .zip(sides)
        .fold(0.0, |acc, (&k, a)| acc + (k - 1) as f64 / a)
}
