//! Analytic nodal density of random waves with a Dirichlet boundary.
//!
//! The field is an isotropic monochromatic Gaussian random wave in `s`
//! dimensions, antisymmetrized about the hyperplane `R_s = 0`. Its statistics
//! at distance `R = R_s` from the boundary (in units of the inverse
//! wavenumber) are fixed by four covariances: the field variance `B`, the
//! transverse and normal derivative variances, and the field/normal
//! derivative covariance `K`. The expected nodal density follows from them
//! through a hypergeometric factor.

mod constants;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j_run, gamma_real, hyp_factor, rgamma};

pub use constants::{
    compute_i2, compute_is, deficit_integral, mean_sigma_cylinder, BoundaryConstant,
    ConstantOptions,
};

/// Below this distance the covariances are evaluated from their power
/// series, which avoids the cancellation in `1 - J(2R)/R^nu`.
pub const SERIES_THRESHOLD: f64 = 0.05;

const MAX_DIM: usize = 100;

// enough for R < SERIES_THRESHOLD: the dropped terms are below 1e-40
const SERIES_TERMS: usize = 14;

fn check_dim(s: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&s) {
        return Err(Error::UnsupportedDimension(s));
    }
    Ok(())
}

/// Covariances of the boundary-adapted field at one distance from the
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceSet {
    /// `<Phi^2>`
    pub field: f64,
    /// `<(d Phi / d R_1)^2>`, any direction parallel to the boundary
    pub transverse: f64,
    /// `<(d Phi / d R_s)^2>`
    pub normal: f64,
    /// `<Phi d Phi / d R_s>`
    pub cross: f64,
}

impl CovarianceSet {
    /// Values far from the boundary.
    pub fn bulk(s: usize) -> Self {
        let d = 1.0 / s as f64;
        Self {
            field: 1.0,
            transverse: d,
            normal: d,
            cross: 0.0,
        }
    }

    /// `B * D_normal - K^2`, the determinant of the (field, normal slope)
    /// covariance matrix.
    pub fn determinant(&self) -> f64 {
        self.field * self.normal - self.cross * self.cross
    }
}

/// Covariances from the Bessel-function closed forms, for `r > 0`.
pub fn covariances(s: usize, r: f64) -> Result<CovarianceSet> {
    check_dim(s)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("covariances require R > 0, got {r}")));
    }
    let half = 0.5 * s as f64;
    let g = gamma_real(half);
    let mut j = [0.0; 3];
    bessel_j_run(half - 1.0, 2.0 * r, &mut j);
    let rp = r.powf(half - 1.0);
    Ok(CovarianceSet {
        field: 1.0 - g * j[0] / rp,
        transverse: 1.0 / s as f64 - 0.5 * g * j[1] / (rp * r),
        normal: 1.0 / s as f64 + g * (j[1] - 2.0 * r * j[2]) / (2.0 * rp * r),
        cross: g * j[1] / rp,
    })
}

/// Power-series coefficients (in `R^2`) of the covariances.
struct SeriesCoefficients {
    field: [f64; SERIES_TERMS],
    transverse: [f64; SERIES_TERMS],
    normal: [f64; SERIES_TERMS],
    // K / R
    cross: [f64; SERIES_TERMS],
}

impl SeriesCoefficients {
    // With G(nu, R) = J_nu(2R)/R^nu = sum_k (-1)^k R^2k / (k! Gamma(nu+k+1)):
    //   B = 1 - Gamma(s/2) G(s/2-1),  D_1 = 1/s - Gamma(s/2)/2 G(s/2),
    //   D_s = 1/s + Gamma(s/2)/2 (G(s/2) - 2R^2 G(s/2+1)),  K = Gamma(s/2) R G(s/2)
    fn new(s: usize) -> Self {
        let half = 0.5 * s as f64;
        let g = gamma_real(half);
        let coef = |nu: f64, k: usize| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * rgamma(nu + k as f64 + 1.0) / factorial(k)
        };
        let mut c = Self {
            field: [0.0; SERIES_TERMS],
            transverse: [0.0; SERIES_TERMS],
            normal: [0.0; SERIES_TERMS],
            cross: [0.0; SERIES_TERMS],
        };
        for k in 0..SERIES_TERMS {
            // the k = 0 terms cancel the constants exactly
            if k > 0 {
                c.field[k] = -g * coef(half - 1.0, k);
                c.transverse[k] = -0.5 * g * coef(half, k);
            }
            c.cross[k] = g * coef(half, k);
            let shifted = if k > 0 { coef(half + 1.0, k - 1) } else { 0.0 };
            c.normal[k] = 0.5 * g * (coef(half, k) - 2.0 * shifted);
        }
        c.normal[0] += 1.0 / s as f64;
        c
    }

    /// Coefficients of `B * D_s - K^2`. The first three (orders 1, R^2, R^4)
    /// vanish identically and are set to zero rather than left as rounding
    /// noise.
    fn determinant(&self) -> [f64; SERIES_TERMS] {
        let mut d = [0.0; SERIES_TERMS];
        for (n, dn) in d.iter_mut().enumerate().skip(3) {
            let bd: f64 = (0..=n).map(|i| self.field[i] * self.normal[n - i]).sum();
            // K^2 = R^2 (K/R)^2 contributes to order n from (K/R)^2 at n - 1
            let kk: f64 = (0..n).map(|i| self.cross[i] * self.cross[n - 1 - i]).sum();
            *dn = bd - kk;
        }
        d
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Covariances from their power series in `R^2`, for
/// `0 <= r < SERIES_THRESHOLD`.
pub fn covariances_series(s: usize, r: f64) -> Result<CovarianceSet> {
    check_dim(s)?;
    if !(0.0..SERIES_THRESHOLD).contains(&r) {
        return Err(domain(format!(
            "series covariances need 0 <= R < {SERIES_THRESHOLD}, got {r}"
        )));
    }
    let c = SeriesCoefficients::new(s);
    let x = r * r;
    Ok(CovarianceSet {
        field: poly(&c.field, x),
        transverse: poly(&c.transverse, x),
        normal: poly(&c.normal, x),
        cross: r * poly(&c.cross, x),
    })
}

/// Covariances at any `r >= 0`, switching to the series below
/// [`SERIES_THRESHOLD`].
pub fn covariances_at(s: usize, r: f64) -> Result<CovarianceSet> {
    if r < SERIES_THRESHOLD {
        covariances_series(s, r)
    } else {
        covariances(s, r)
    }
}

/// Two-point function of the boundary-free wave at separation `d`,
/// `Gamma(s/2) J_{(s-2)/2}(d) / (d/2)^{(s-2)/2}`.
pub fn correlation(s: usize, d: f64) -> Result<f64> {
    check_dim(s)?;
    if !(d >= 0.0 && d.is_finite()) {
        return Err(domain(format!(
            "separation must be finite and >= 0, got {d}"
        )));
    }
    let nu = 0.5 * s as f64 - 1.0;
    if d < 1e-3 {
        // J_nu(d) / (d/2)^nu = sum_k (-d^2/4)^k / (k! Gamma(nu+k+1))
        let x = -0.25 * d * d;
        let t = (0..4).rev().fold(0.0, |acc, k| {
            acc * x + rgamma(nu + k as f64 + 1.0) / factorial(k)
        });
        return Ok(gamma_real(nu + 1.0) * t);
    }
    Ok(gamma_real(nu + 1.0) * crate::specfun::bessel_j(nu, d)? / (0.5 * d).powf(nu))
}

/// Expected zeros per unit length along a line parallel to the boundary at
/// distance `r`, `(1/pi) sqrt(D_1 / B)`.
pub fn transverse_zero_rate(s: usize, r: f64) -> Result<f64> {
    check_dim(s)?;
    Ok(reduced(s, r)?.slope_ratio.sqrt() / PI)
}

/// Expected zeros per unit length along a line normal to the boundary, at
/// distance `r`: `sqrt(B D_s - K^2) / (pi B)`. Vanishes linearly at the
/// boundary.
pub fn normal_zero_rate(s: usize, r: f64) -> Result<f64> {
    check_dim(s)?;
    if !(r >= 0.0) {
        return Err(domain(format!(
            "distance from the boundary must be >= 0, got {r}"
        )));
    }
    if r >= SERIES_THRESHOLD {
        let c = covariances(s, r)?;
        return Ok(c.determinant().max(0.0).sqrt() / (PI * c.field));
    }
    let c = SeriesCoefficients::new(s);
    let x = r * r;
    let det = poly(&c.determinant()[3..], x);
    Ok(r * det.max(0.0).sqrt() / (PI * poly(&c.field[1..], x)))
}

/// `M = 1 - (B D_s - K^2) / (B D_1)`, the argument of the hypergeometric
/// factor.
pub fn m_param(c: &CovarianceSet) -> Result<f64> {
    if !(c.field > 0.0) || !(c.transverse > 0.0) {
        return Err(Error::SingularCovariance(format!(
            "B = {} and D_1 = {} must both be positive",
            c.field, c.transverse
        )));
    }
    Ok(1.0 - c.determinant() / (c.field * c.transverse))
}

/// The two combinations the density depends on: `D_1 / B` and `M`.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    slope_ratio: f64,
    m: f64,
}

fn reduced(s: usize, r: f64) -> Result<Reduced> {
    if r >= SERIES_THRESHOLD {
        let c = covariances(s, r)?;
        return Ok(Reduced {
            slope_ratio: c.transverse / c.field,
            m: m_param(&c)?,
        });
    }
    if !(r >= 0.0) {
        return Err(domain(format!(
            "distance from the boundary must be >= 0, got {r}"
        )));
    }
    // B, D_1 ~ R^2 and the determinant ~ R^6: divide the powers out
    // analytically so R = 0 itself is regular
    let c = SeriesCoefficients::new(s);
    let x = r * r;
    let b = poly(&c.field[1..], x);
    let d1 = poly(&c.transverse[1..], x);
    let det = poly(&c.determinant()[3..], x);
    Ok(Reduced {
        slope_ratio: d1 / b,
        m: 1.0 - x * det / (b * d1),
    })
}

/// `M` at distance `r >= 0`, through the series below the threshold.
pub fn m_at(s: usize, r: f64) -> Result<f64> {
    check_dim(s)?;
    Ok(reduced(s, r)?.m)
}

/// Nodal density of the boundary-free random wave,
/// `Gamma((s+1)/2) / (sqrt(s pi) Gamma(s/2))`.
pub fn rho_bulk(s: usize) -> Result<f64> {
    check_dim(s)?;
    let sf = s as f64;
    Ok(gamma_real(0.5 * (sf + 1.0)) / ((sf * PI).sqrt() * gamma_real(0.5 * sf)))
}

/// `rho(R) / rho_bulk = sqrt(s D_1 / B) F(-1/2, 1/2; s/2; M)`.
pub fn density_ratio(s: usize, r: f64) -> Result<f64> {
    check_dim(s)?;
    let red = reduced(s, r)?;
    if red.m > 1.0 {
        return Err(domain(format!("M = {} exceeds 1 at R = {r}", red.m)));
    }
    Ok((s as f64 * red.slope_ratio).sqrt() * hyp_factor(s, red.m)?)
}

/// Expected nodal volume per unit volume at distance `r` from the boundary.
pub fn nodal_density(s: usize, r: f64) -> Result<f64> {
    Ok(rho_bulk(s)? * density_ratio(s, r)?)
}

/// `rho(0) / rho_bulk` in closed form.
pub fn boundary_ratio(s: usize) -> Result<f64> {
    check_dim(s)?;
    let sf = s as f64;
    let g = gamma_real(0.5 * sf) / gamma_real(0.5 * (sf + 1.0));
    Ok(0.5 * sf.sqrt() * (sf - 1.0) * g * g / (sf + 2.0).sqrt())
}

/// Coefficient of the smooth correction `R^{-(s-1)}` to `rho / rho_bulk`.
pub fn c_smooth(s: usize) -> Result<f64> {
    check_dim(s)?;
    let sf = s as f64;
    Ok(-(sf - 1.0) * gamma_real(sf) * gamma_real(0.5 * sf)
        / (2f64.powi(s as i32 + 2) * PI.sqrt() * (sf + 2.0) * gamma_real(0.5 * (sf + 1.0))))
}

/// Amplitude of the oscillatory correction `cos(2R - (s-1)pi/4) R^{-(s-1)/2}`.
pub fn c_osc(s: usize) -> Result<f64> {
    check_dim(s)?;
    Ok(gamma_real(0.5 * s as f64) / PI.sqrt())
}

/// Large-distance expansion of `rho / rho_bulk`.
pub fn density_asymptote(s: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain(format!(
            "the asymptotic expansion needs R > 0, got {r}"
        )));
    }
    let sf = s as f64;
    let phase = 2.0 * r - (sf - 1.0) * PI / 4.0;
    Ok(1.0
        + c_smooth(s)? * r.powf(-(sf - 1.0))
        + c_osc(s)? * phase.cos() / r.powf(0.5 * (sf - 1.0)))
}

/// `rho(R) / rho_bulk` tabulated on a grid of distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub s: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityProfile {
    pub fn new(s: usize, grid: Vec<f64>) -> Result<Self> {
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("profile grid must be strictly ascending"));
        }
        let values = grid
            .iter()
            .map(|&r| density_ratio(s, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { s, grid, values })
    }

    /// `points` equally spaced distances from 0 to `r_max` inclusive.
    pub fn uniform(s: usize, r_max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(r_max > 0.0) {
            return Err(domain(
                "a uniform profile needs r_max > 0 and at least two points",
            ));
        }
        let h = r_max / (points - 1) as f64;
        Self::new(s, (0..points).map(|i| i as f64 * h).collect())
    }
}
