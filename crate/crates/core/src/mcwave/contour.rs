//! Nodal lines of planar realizations by marching squares.
//!
//! In two dimensions `Phi(x, y) = -(2/sqrt(N)) sum_j sin(n_jx x + phi_j)
//! sin(n_jy y)` is a product of a matrix depending only on `x` and one
//! depending only on `y`, so a whole grid costs one matrix product. The `y`
//! factor is divided by `y` (its limit `n_jy` on the boundary): this keeps
//! every sign on the grid, removes the trivial zero line `y = 0` and leaves
//! the interior nodal set unchanged.

use std::cell::Cell;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{accumulate, collect, Estimate, WaveEnsembleConfig, WaveRealization};
use crate::error::{domain, Error, Result};
use crate::quad::integrate;
use crate::rwave::{nodal_density, rho_bulk};
use crate::stats::Moments;

/// Finest-structure requirement for the boundary profile.
pub const MAX_PROFILE_STEP: f64 = 0.15;

/// `Phi` up to a positive factor on the grid `xs x ys` (indexed `[x, y]`).
fn field_grid(r: &WaveRealization, xs: &[f64], ys: &[f64]) -> Array2<f64> {
    let n = r.n_waves();
    let a = Array2::from_shape_fn((xs.len(), n), |(i, j)| {
        (r.direction(j)[0] * xs[i] + r.phases()[j]).sin()
    });
    let b = Array2::from_shape_fn((n, ys.len()), |(j, k)| {
        let ny = r.direction(j)[1];
        let y = ys[k];
        if y == 0.0 {
            ny
        } else {
            (ny * y).sin() / y
        }
    });
    a.dot(&b)
}

fn crossing(va: f64, vb: f64) -> f64 {
    va / (va - vb)
}

fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

/// Length of the zero contour inside one unit cell with corner values
/// `v00` (origin), `v10` (+x), `v01` (+y), `v11`. Saddles are split by the
/// sign of the center value.
fn cell_length(v00: f64, v10: f64, v01: f64, v11: f64) -> f64 {
    let (b00, b10, b01, b11) = (v00 >= 0.0, v10 >= 0.0, v01 >= 0.0, v11 >= 0.0);
    let bottom = (b00 != b10).then(|| (crossing(v00, v10), 0.0));
    let right = (b10 != b11).then(|| (1.0, crossing(v10, v11)));
    let top = (b01 != b11).then(|| (crossing(v01, v11), 1.0));
    let left = (b00 != b01).then(|| (0.0, crossing(v00, v01)));
    match (bottom, right, top, left) {
        (Some(b), Some(r), Some(t), Some(l)) => {
            let center = 0.25 * (v00 + v10 + v01 + v11) >= 0.0;
            if center == b00 {
                // the b00 sign connects across the cell; cut off the other two corners
                dist(b, r) + dist(t, l)
            } else {
                dist(b, l) + dist(r, t)
            }
        }
        _ => {
            let pts: Vec<(f64, f64)> = [bottom, right, top, left].into_iter().flatten().collect();
            match pts.as_slice() {
                [p, q] => dist(*p, *q),
                _ => 0.0,
            }
        }
    }
}

/// Contour length per row of cells, in grid units.
fn row_lengths(g: &Array2<f64>) -> Vec<f64> {
    let (nx, ny) = g.dim();
    let mut out = vec![0.0; ny.saturating_sub(1)];
    for i in 0..nx.saturating_sub(1) {
        for (k, o) in out.iter_mut().enumerate() {
            *o += cell_length(g[[i, k]], g[[i + 1, k]], g[[i, k + 1]], g[[i + 1, k + 1]]);
        }
    }
    out
}

fn grid_points(lo: f64, cells: usize, h: f64) -> Vec<f64> {
    (0..=cells).map(|i| lo + i as f64 * h).collect()
}

/// Rectangle `[r1.0, r1.1] x [r2.0, r2.1]` in `(R_1, R_2)`, cut into strips of
/// height `strip` parallel to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourWindow {
    pub r1: (f64, f64),
    pub r2: (f64, f64),
    pub strip: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripEstimate {
    pub lo: f64,
    pub hi: f64,
    /// Nodal length per unit area.
    pub estimate: Estimate,
    /// Analytic density averaged over the strip.
    pub predicted: f64,
}

fn strip_average(lo: f64, hi: f64) -> Result<f64> {
    let failure = Cell::new(None);
    let v = integrate(
        |y| {
            nodal_density(2, y).unwrap_or_else(|e| {
                failure.set(Some(e));
                0.0
            })
        },
        lo,
        hi,
        1e-11,
        200,
    )?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(v.value / (hi - lo)),
    }
}

/// Nodal length per unit area of planar realizations, resolved in strips
/// parallel to the boundary. The grid spacing is `config.step`; strip
/// heights are rounded to whole cells.
pub fn nodal_length_2d(
    config: &WaveEnsembleConfig,
    window: &ContourWindow,
) -> Result<Vec<StripEstimate>> {
    config.validate()?;
    if config.dim != 2 {
        return Err(Error::UnsupportedDimension(config.dim));
    }
    let h = config.step;
    if h > MAX_PROFILE_STEP {
        return Err(domain(format!(
            "contouring step must be at most {MAX_PROFILE_STEP}, got {h}"
        )));
    }
    let ContourWindow { r1, r2, strip } = *window;
    if !(r2.0 >= 0.0 && r1.1 > r1.0 && r2.1 > r2.0 && strip > 0.0)
        || [r1.0, r1.1, r2.1, strip].iter().any(|v| !v.is_finite())
    {
        return Err(domain(
            "window must be a finite rectangle in R_2 >= 0 with positive strip height",
        ));
    }
    let per_strip = ((strip / h).round() as usize).max(1);
    let strips = ((r2.1 - r2.0) / (per_strip as f64 * h) + 1e-9).floor() as usize;
    let nx = ((r1.1 - r1.0) / h).round() as usize;
    if strips == 0 || nx == 0 {
        return Err(domain("window is smaller than one strip"));
    }
    let xs = grid_points(r1.0, nx, h);
    let ys = grid_points(r2.0, strips * per_strip, h);
    let area = nx as f64 * h * per_strip as f64 * h;
    let m = accumulate(config, strips, |r, out| {
        let rows = row_lengths(&field_grid(r, &xs, &ys));
        for (o, chunk) in out.iter_mut().zip(rows.chunks(per_strip)) {
            *o = chunk.iter().sum::<f64>() * h / area;
        }
    });
    m.iter()
        .enumerate()
        .map(|(k, m)| {
            let lo = ys[k * per_strip];
            let hi = ys[(k + 1) * per_strip];
            Ok(StripEstimate {
                lo,
                hi,
                estimate: m.into(),
                predicted: strip_average(lo, hi)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    /// Box side in units of the inverse wavenumber.
    pub ka: f64,
    /// Mean rescaled nodal length `L / (ka)^2`.
    pub mean: Estimate,
    /// Ensemble variance of the rescaled nodal length.
    pub variance: f64,
    pub variance_stderr: f64,
    /// Bulk nodal density, the expected mean.
    pub bulk: f64,
}

/// Ensemble variance of the rescaled nodal length in `ka x ka` boxes whose
/// lower edge sits at distance `offset` from the boundary. Every size is
/// measured on the same realizations.
pub fn sigma_variance_trend(
    config: &WaveEnsembleConfig,
    sizes: &[f64],
    offset: f64,
) -> Result<Vec<TrendPoint>> {
    config.validate()?;
    if config.dim != 2 {
        return Err(Error::UnsupportedDimension(config.dim));
    }
    if config.n_real < 2 {
        return Err(domain("a variance needs at least two realizations"));
    }
    if sizes.is_empty()
        || sizes
            .iter()
            .any(|k| !(k.is_finite() && *k >= 10.0 * config.step))
    {
        return Err(domain(
            "box sizes must be finite and cover at least ten steps",
        ));
    }
    if !(offset.is_finite() && offset >= 0.0) {
        return Err(domain("box offset must be finite and >= 0"));
    }
    let h = config.step;
    let per_real = collect(config, |r| {
        sizes
            .iter()
            .map(|&ka| {
                let cells = (ka / h).round() as usize;
                let side = cells as f64 * h;
                let xs = grid_points(0.0, cells, h);
                let ys = grid_points(offset, cells, h);
                row_lengths(&field_grid(r, &xs, &ys)).iter().sum::<f64>() * h / (side * side)
            })
            .collect::<Vec<f64>>()
    });
    let bulk = rho_bulk(2)?;
    let n = per_real.len() as f64;
    Ok(sizes
        .iter()
        .enumerate()
        .map(|(i, &ka)| {
            let m: Moments = per_real.iter().map(|v| v[i]).collect();
            let var = m.sample_variance();
            let m4 = per_real
                .iter()
                .map(|v| (v[i] - m.mean).powi(4))
                .sum::<f64>()
                / n;
            let pop = m.variance();
            TrendPoint {
                ka,
                mean: (&m).into(),
                variance: var,
                variance_stderr: ((m4 - pop * pop) / n).max(0.0).sqrt(),
                bulk,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn straight_and_diagonal_cells() {
        // vertical line through the middle
        assert!((cell_length(-1.0, 1.0, -1.0, 1.0) - 1.0).abs() < 1e-15);
        // corner cut at half edges
        assert!((cell_length(-1.0, 1.0, 1.0, 3.0) - 0.5f64.hypot(0.5)).abs() < 1e-15);
        assert_eq!(cell_length(1.0, 2.0, 3.0, 4.0), 0.0);
        // saddles: the center decides which corners are cut off
        let a = cell_length(1.0, -1.0, -1.0, 1.0);
        assert!((a - 2.0 * 0.5f64.hypot(0.5)).abs() < 1e-15);
        let b = cell_length(1.0, -2.0, -2.0, 1.0);
        let c = cell_length(-1.0, 2.0, 2.0, -1.0);
        assert!((b - c).abs() < 1e-15);
    }

    #[test]
    fn circle_length() {
        // x^2 + y^2 - r^2 on a fine grid recovers the circumference
        let (h, rad) = (0.01, 0.7);
        let pts: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 * h).collect();
        let g = Array2::from_shape_fn((pts.len(), pts.len()), |(i, k)| {
            pts[i] * pts[i] + pts[k] * pts[k] - rad * rad
        });
        let len: f64 = row_lengths(&g).iter().sum::<f64>() * h;
        assert!((len / (2.0 * PI * rad) - 1.0).abs() < 1e-4, "{len}");
    }

    #[test]
    fn grid_matches_pointwise_field() {
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 64,
            n_real: 1,
            seed: 2,
            step: 0.1,
        };
        let r = super::super::sample_realization(&cfg, 0);
        let (xs, ys) = (vec![-3.0, 0.4, 7.0], vec![0.0, 0.3, 12.5]);
        let g = field_grid(&r, &xs, &ys);
        let scale = -2.0 / (64f64).sqrt();
        for (i, &x) in xs.iter().enumerate() {
            for (k, &y) in ys.iter().enumerate().skip(1) {
                let phi = super::super::eval_phi(&r, &[x, y]);
                assert!((scale * g[[i, k]] * y - phi).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn deep_and_boundary_strips() {
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 512,
            n_real: 400,
            seed: 17,
            step: 0.1,
        };
        let deep = nodal_length_2d(
            &cfg,
            &ContourWindow {
                r1: (0.0, 40.0),
                r2: (50.0, 60.0),
                strip: 10.0,
            },
        )
        .unwrap();
        let bulk = 1.0 / (2.0 * 2f64.sqrt());
        assert!(
            (deep[0].estimate.mean / bulk - 1.0).abs() < 0.02,
            "{deep:?}"
        );
        let cfg = WaveEnsembleConfig { step: 0.02, ..cfg };
        let edge = nodal_length_2d(
            &cfg,
            &ContourWindow {
                r1: (0.0, 40.0),
                r2: (0.0, 0.2),
                strip: 0.2,
            },
        )
        .unwrap();
        assert!(
            (edge[0].estimate.mean * 2.0 * PI - 1.0).abs() < 0.05,
            "{edge:?}"
        );
        assert!(
            edge[0].estimate.z_score(edge[0].predicted).abs() < 3.0,
            "{edge:?}"
        );
    }

    #[test]
    fn variance_falls_with_box_size() {
        use crate::stats::fit_power_law;
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 512,
            n_real: 64,
            seed: 5,
            step: 0.3,
        };
        let sizes = [50.0, 100.0, 200.0, 400.0];
        let pts = sigma_variance_trend(&cfg, &sizes, 1000.0).unwrap();
        assert!(
            pts.windows(2).all(|w| w[1].variance < w[0].variance),
            "{pts:?}"
        );
        let var: Vec<f64> = pts.iter().map(|p| p.variance).collect();
        let fit = fit_power_law(&sizes, &var, None).unwrap();
        assert!((fit.exponent + 2.0).abs() < 0.3, "{fit:?}");
    }

    #[test]
    fn box_mean_is_the_bulk_density() {
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 512,
            n_real: 16,
            seed: 5,
            step: MAX_PROFILE_STEP,
        };
        let p = sigma_variance_trend(&cfg, &[400.0], 1000.0).unwrap()[0];
        assert!(p.mean.z_score(p.bulk).abs() < 3.0, "{p:?}");
        assert!(
            sigma_variance_trend(&WaveEnsembleConfig { n_real: 1, ..cfg }, &[50.0], 0.0).is_err()
        );
    }

    #[test]
    fn rejects_bad_windows() {
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 16,
            n_real: 1,
            seed: 1,
            step: 0.1,
        };
        let w = ContourWindow {
            r1: (0.0, 5.0),
            r2: (0.0, 5.0),
            strip: 1.0,
        };
        assert!(nodal_length_2d(&WaveEnsembleConfig { step: 0.2, ..cfg }, &w).is_err());
        assert!(nodal_length_2d(&WaveEnsembleConfig { dim: 3, ..cfg }, &w).is_err());
        assert!(nodal_length_2d(
            &cfg,
            &ContourWindow {
                r2: (-1.0, 5.0),
                ..w
            }
        )
        .is_err());
        assert_eq!(nodal_length_2d(&cfg, &w).unwrap().len(), 5);
    }
}
