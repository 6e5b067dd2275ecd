//! Integrated boundary deficit of the nodal density.
//!
//! `I_s = -int_0^inf (rho/rho_bulk - 1) dR` for `s >= 3`. In two dimensions
//! the smooth `C_sm / R` tail is not integrable, so `I_2` subtracts it for
//! `R >= 1`.
//!
//! The integrand oscillates like `cos(2R - (s-1) pi/4)`. It is integrated
//! over panels of half a period aligned with the zeros of that cosine, up to
//! `r_max`; the remainder is added from the asymptotic expansion (smooth term
//! exactly, oscillatory term to third order in `1/R`). Because the truncated
//! oscillatory tail still wobbles with the end point, the final value is the
//! average over end points spread across one period.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{c_osc, c_smooth, check_dim, density_ratio, rho_bulk};
use crate::error::{domain, Error, Result};
use crate::par::map_indexed;
use crate::quad::{integrate, Integral};

const END_POINTS: usize = 32;
const MAX_PIECES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantOptions {
    /// Upper end of the numerical integration.
    pub r_max: f64,
    /// Absolute quadrature tolerance for the whole integral.
    pub tolerance: f64,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        Self {
            r_max: 200.0,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryConstant {
    pub s: usize,
    pub value: f64,
    /// Half the spread over end points plus the quadrature error estimate.
    pub uncertainty: f64,
    pub r_max: f64,
    pub tolerance: f64,
}

fn integrand(s: usize, r: f64, counterterm: bool, failure: &Cell<Option<Error>>) -> f64 {
    match density_ratio(s, r) {
        Ok(v) => {
            let sub = if counterterm && r >= 1.0 {
                c_smooth(s).unwrap_or(0.0) / r
            } else {
                0.0
            };
            v - 1.0 - sub
        }
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    }
}

fn integrate_piece(s: usize, a: f64, b: f64, tol: f64, counterterm: bool) -> Result<Integral> {
    let failure = Cell::new(None);
    let part = integrate(
        |r| integrand(s, r, counterterm, &failure),
        a,
        b,
        tol,
        MAX_PIECES,
    )?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(part),
    }
}

/// Panel boundaries from 0 to `upper`: the zeros of `cos(2R - (s-1)pi/4)`,
/// plus `R = 1` when the two-dimensional counterterm switches on.
fn panel_breaks(s: usize, upper: f64, counterterm: bool) -> Vec<f64> {
    let phase = (s as f64 - 1.0) * PI / 4.0;
    let step = PI / 2.0;
    let first = (0.5 * (phase + step)).rem_euclid(step);
    let mut breaks = vec![0.0];
    let mut k = 0;
    loop {
        let z = first + k as f64 * step;
        if z >= upper {
            break;
        }
        if z > 0.0 {
            breaks.push(z);
        }
        k += 1;
    }
    if counterterm && upper > 1.0 {
        breaks.push(1.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    breaks.push(upper);
    breaks
}

fn panels(s: usize, upper: f64, tol: f64, counterterm: bool) -> Result<Integral> {
    let breaks = panel_breaks(s, upper, counterterm);
    let n = breaks.len() - 1;
    let per = tol / n as f64;
    let parts = map_indexed(n, |i| {
        integrate_piece(s, breaks[i], breaks[i + 1], per, counterterm)
    });
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    for p in parts {
        let p = p?;
        total.value += p.value;
        total.error += p.error;
        total.evaluations += p.evaluations;
    }
    Ok(total)
}

/// `int_0^upper (rho/rho_bulk - 1) dR`.
pub fn deficit_integral(s: usize, upper: f64, tolerance: f64) -> Result<Integral> {
    check_dim(s)?;
    if !(upper >= 0.0 && upper.is_finite()) {
        return Err(domain(format!(
            "integration limit must be finite and >= 0, got {upper}"
        )));
    }
    panels(s, upper, tolerance, false)
}

/// `int_x^inf` of the asymptotic expansion beyond the range integrated
/// numerically. In two dimensions the smooth term is the counterterm and
/// drops out.
fn asymptotic_tail(s: usize, x: f64) -> Result<f64> {
    let sf = s as f64;
    let smooth = if s >= 3 {
        c_smooth(s)? * x.powf(-(sf - 2.0)) / (sf - 2.0)
    } else {
        0.0
    };
    let p = 0.5 * (sf - 1.0);
    let theta = 2.0 * x - (sf - 1.0) * PI / 4.0;
    let (sn, cs) = theta.sin_cos();
    let osc = -sn / (2.0 * x.powf(p))
        + p * cs / (4.0 * x.powf(p + 1.0))
        + p * (p + 1.0) * sn / (8.0 * x.powf(p + 2.0));
    Ok(smooth + c_osc(s)? * osc)
}

fn boundary_constant(
    s: usize,
    opts: &ConstantOptions,
    counterterm: bool,
) -> Result<BoundaryConstant> {
    if !(opts.r_max >= 10.0 && opts.r_max.is_finite()) {
        return Err(domain(format!(
            "r_max must be at least 10, got {}",
            opts.r_max
        )));
    }
    if !(opts.tolerance > 0.0) {
        return Err(domain("quadrature tolerance must be positive"));
    }
    let head = panels(s, opts.r_max, 0.5 * opts.tolerance, counterterm)?;
    let mut acc = head.value;
    let mut err = head.error;
    let mut prev = opts.r_max;
    let mut estimates = Vec::with_capacity(END_POINTS);
    for j in 0..END_POINTS {
        let x = opts.r_max + j as f64 * (PI / 2.0) / END_POINTS as f64;
        if x > prev {
            let piece = integrate_piece(
                s,
                prev,
                x,
                0.5 * opts.tolerance / END_POINTS as f64,
                counterterm,
            )?;
            acc += piece.value;
            err += piece.error;
            prev = x;
        }
        estimates.push(-(acc + asymptotic_tail(s, x)?));
    }
    let value = estimates.iter().sum::<f64>() / END_POINTS as f64;
    let lo = estimates.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundaryConstant {
        s,
        value,
        uncertainty: 0.5 * (hi - lo) + err,
        r_max: opts.r_max,
        tolerance: opts.tolerance,
    })
}

/// Boundary constant `I_s` for `s >= 3`.
pub fn compute_is(s: usize, opts: &ConstantOptions) -> Result<BoundaryConstant> {
    check_dim(s)?;
    if s == 2 {
        return Err(domain(
            "the two-dimensional constant needs the counterterm; use compute_i2",
        ));
    }
    boundary_constant(s, opts, false)
}

/// Regularized two-dimensional constant
/// `I_2 = -int_0^inf (rho/rho_bulk - 1 - C_sm theta(R - 1) / R) dR`.
pub fn compute_i2(opts: &ConstantOptions) -> Result<BoundaryConstant> {
    boundary_constant(2, opts, true)
}

/// Mean rescaled nodal volume over a cylinder of height `a` standing on the
/// boundary, at wavenumber `k`. The base does not enter beyond its
/// positivity, since only `S/V = 1/a` matters.
pub fn mean_sigma_cylinder(s: usize, k: f64, a: f64, base: f64) -> Result<f64> {
    for (name, v) in [("wavenumber", k), ("height", a), ("base", base)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let ka = k * a;
    let integral = deficit_integral(s, ka, 1e-10 * ka.max(1.0))?;
    Ok(rho_bulk(s)? * (1.0 + integral.value / ka))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_sit_on_zeros_of_the_oscillation() {
        for s in 2..=5 {
            let b = panel_breaks(s, 20.0, false);
            let phase = (s as f64 - 1.0) * PI / 4.0;
            for &z in &b[1..b.len() - 1] {
                assert!((2.0 * z - phase).cos().abs() < 1e-12, "s={s} z={z}");
            }
            assert!(b.windows(2).all(|w| w[1] - w[0] <= PI / 2.0 + 1e-12));
        }
        assert!(panel_breaks(2, 5.0, true).contains(&1.0));
    }

    #[test]
    fn tail_matches_direct_integration() {
        // the asymptotic tail from 60 to 100 versus the expansion integrated numerically
        let s = 3;
        let f = |r: f64| {
            let sf = s as f64;
            c_smooth(s).unwrap() * r.powf(-(sf - 1.0))
                + c_osc(s).unwrap() * (2.0 * r - (sf - 1.0) * PI / 4.0).cos()
                    / r.powf(0.5 * (sf - 1.0))
        };
        let numeric = integrate(f, 60.0, 100.0, 1e-12, 4000).unwrap().value;
        let tails = asymptotic_tail(s, 60.0).unwrap() - asymptotic_tail(s, 100.0).unwrap();
        assert!((numeric - tails).abs() < 1e-6, "{numeric} vs {tails}");
    }

    #[test]
    fn two_dimensional_integrand() {
        let failure = Cell::new(None);
        // the counterterm switches on at R = 1 with a jump of -C_sm
        let below = integrand(2, 1.0 - 1e-12, true, &failure);
        let above = integrand(2, 1.0, true, &failure);
        assert!((below - above - c_smooth(2).unwrap()).abs() < 1e-9);
        // what remains at large R is the oscillation, C_osc / sqrt(R) at most
        let far = integrand(2, 1e4, true, &failure);
        assert!(far.abs() <= c_osc(2).unwrap() / 100.0 + 1e-6, "{far}");
        assert!(failure.take().is_none());
    }

    #[test]
    fn i3_and_i4() {
        let opts = ConstantOptions::default();
        let i3 = compute_is(3, &opts).unwrap();
        assert!((i3.value - 0.758).abs() < 0.005, "{i3:?}");
        let i4 = compute_is(4, &opts).unwrap();
        assert!((i4.value - 0.645).abs() < 0.005, "{i4:?}");
        assert!(i3.uncertainty < 2e-3 && i4.uncertainty < 2e-3);
        assert!(compute_is(2, &opts).is_err());
    }

    #[test]
    fn constants_are_stable() {
        let base = ConstantOptions::default();
        let wide = ConstantOptions {
            r_max: 400.0,
            ..base
        };
        let tight = ConstantOptions {
            tolerance: 0.5 * base.tolerance,
            ..base
        };
        for s in [3, 5] {
            let a = compute_is(s, &base).unwrap().value;
            assert!(a > 0.0);
            assert!(
                (a - compute_is(s, &wide).unwrap().value).abs() < 1e-3,
                "s={s}"
            );
            assert!(
                (a - compute_is(s, &tight).unwrap().value).abs() < 1e-3,
                "s={s}"
            );
        }
        let a = compute_i2(&base).unwrap().value;
        let b = compute_i2(&wide).unwrap().value;
        assert!(a.is_finite() && (a - b).abs() < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn cylinder_mean() {
        let ka = 1e3;
        let got = mean_sigma_cylinder(3, ka, 1.0, 1.0).unwrap();
        let i3 = compute_is(3, &ConstantOptions::default()).unwrap().value;
        let want = rho_bulk(3).unwrap() * (1.0 - i3 / ka);
        assert!((got - want).abs() < 2.0 * ka.powf(-1.5), "{got} vs {want}");
        assert!(
            (mean_sigma_cylinder(4, 1e4, 1.0, 2.0).unwrap() / rho_bulk(4).unwrap() - 1.0).abs()
                < 1e-3
        );
        assert!(mean_sigma_cylinder(3, 0.0, 1.0, 1.0).is_err());
    }
}
