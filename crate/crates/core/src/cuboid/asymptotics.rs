//! Smooth large-energy asymptotics: Weyl's law, the boundary-corrected mean
//! and the leading-order variance of the rescaled nodal volume.

use std::f64::consts::PI;

use super::CuboidSpec;
use crate::error::{Error, Result};
use crate::specfun::ball_volume;

fn check_dim(s: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::UnsupportedDimension(s));
    }
    Ok(())
}

/// Two-term Weyl approximation to the counting function.
pub fn weyl_counting(spec: &CuboidSpec, energy: f64) -> f64 {
    if energy <= 0.0 {
        return 0.0;
    }
    let s = spec.dim() as i32;
    let sf = f64::from(s);
    let bulk = ball_volume(spec.dim()) * spec.volume() * energy.powf(sf / 2.0) / (2.0 * PI).powi(s);
    let edge = ball_volume(spec.dim() - 1) * spec.surface() * energy.powf((sf - 1.0) / 2.0)
        / (2f64.powi(s + 1) * PI.powi(s - 1));
    bulk - edge
}

/// Derivative of [`weyl_counting`] with respect to the energy.
pub fn weyl_density(spec: &CuboidSpec, energy: f64) -> f64 {
    if energy <= 0.0 {
        return 0.0;
    }
    let s = spec.dim() as i32;
    let sf = f64::from(s);
    let bulk = 0.5 * sf * ball_volume(spec.dim()) * spec.volume() * energy.powf(sf / 2.0 - 1.0)
        / (2.0 * PI).powi(s);
    let edge = 0.5
        * (sf - 1.0)
        * ball_volume(spec.dim() - 1)
        * spec.surface()
        * energy.powf((sf - 3.0) / 2.0)
        / (2f64.powi(s + 1) * PI.powi(s - 1));
    bulk - edge
}

/// Boundary coefficient of the mean rescaled nodal volume.
pub fn beta_s(s: usize) -> Result<f64> {
    check_dim(s)?;
    let sf = s as f64;
    let (x2, x1, x0) = (ball_volume(s - 2), ball_volume(s - 1), ball_volume(s));
    Ok(
        (sf - 1.0) * PI * x2 / (2.0 * sf * x1) + PI * x0 / (4.0 * x1)
            - (sf - 1.0) * PI * x1 / (2.0 * sf * x0),
    )
}

/// Large-energy limit of the mean, `2 xi_{s-1} / (pi xi_s)`.
pub fn mean_prefactor(s: usize) -> Result<f64> {
    check_dim(s)?;
    Ok(2.0 * ball_volume(s - 1) / (PI * ball_volume(s)))
}

/// Mean rescaled nodal volume near `energy`, including the first boundary
/// correction `-beta_s (S/V) E^{-1/2}`.
pub fn asymptotic_mean(spec: &CuboidSpec, energy: f64) -> f64 {
    boundary_free(spec) * (1.0 - beta(spec) * spec.surface() / spec.volume() / energy.sqrt())
}

/// Coefficient of `E^{-1/2}` in the mean deficit, `prefactor * beta_s * S/V`.
pub fn boundary_slope(spec: &CuboidSpec) -> f64 {
    boundary_free(spec) * beta(spec) * spec.surface() / spec.volume()
}

// A CuboidSpec always has s >= 2.
fn boundary_free(spec: &CuboidSpec) -> f64 {
    mean_prefactor(spec.dim()).expect("cuboid dimension is at least 2")
}

fn beta(spec: &CuboidSpec) -> f64 {
    beta_s(spec.dim()).expect("cuboid dimension is at least 2")
}

/// Leading-order variance of the rescaled nodal volume.
pub fn asymptotic_variance(s: usize) -> Result<f64> {
    check_dim(s)?;
    let sf = s as f64;
    let (x2, x1, x0) = (ball_volume(s - 2), ball_volume(s - 1), ball_volume(s));
    let pi2 = PI * PI;
    Ok(1.0 / pi2 + 4.0 * (sf - 1.0) * x2 / (sf * pi2 * x0) - 4.0 * x1 * x1 / (pi2 * x0 * x0))
}
