//! Zero crossings of the boundary-adapted field along straight lines.
//!
//! For a stationary Gaussian process the expected number of zeros per unit
//! length is `(1/pi) sqrt(-C''(0) / C(0))`. Along lines parallel to the
//! boundary this gives `(1/pi) sqrt(D_1 / B)`; along the normal the process
//! is not stationary and the rate becomes `sqrt(B D_s - K^2) / (pi B)`.
//! Both are compared with sign changes counted on sampled lines.

use std::cell::Cell;

use serde::Serialize;

use super::{accumulate, eval_phi, phi_along_line, Estimate, WaveEnsembleConfig, WaveRealization};
use crate::error::{domain, Result};
use crate::quad::integrate;
use crate::rwave::{normal_zero_rate, transverse_zero_rate};

/// Spacing between the normal lines sampled in one realization.
const LINE_SPACING: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LineSet {
    /// Lines of length `length` parallel to the boundary, one per distance.
    Transverse { distances: Vec<f64>, length: f64 },
    /// `lines` normal lines per realization, with zeros binned by distance
    /// from the boundary into `edges`.
    Normal { edges: Vec<f64>, lines: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroDensity {
    /// Distance from the boundary (bin center for normal lines).
    pub distance: f64,
    /// Bin width for normal lines, zero for transverse lines.
    pub width: f64,
    /// Zeros per unit length.
    pub estimate: Estimate,
    pub predicted: f64,
}

fn sign(v: f64) -> bool {
    v >= 0.0
}

fn count_sign_changes(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| sign(w[0]) != sign(w[1]))
        .count()
}

/// Positions of the zeros of `values` sampled at `t = i * step`. Each
/// bracket is bisected once and the zero placed by linear interpolation in
/// the half that still changes sign.
fn zero_positions(values: &[f64], step: f64, mid: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, w) in values.windows(2).enumerate() {
        if sign(w[0]) == sign(w[1]) {
            continue;
        }
        let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
        let m = 0.5 * (a + b);
        let vm = mid(m);
        let (lo, hi, vlo, vhi) = if sign(w[0]) != sign(vm) {
            (a, m, w[0], vm)
        } else {
            (m, b, vm, w[1])
        };
        out.push(lo + (hi - lo) * vlo / (vlo - vhi));
    }
    out
}

fn transverse(r: &WaveRealization, step: f64, distances: &[f64], length: f64, out: &mut [f64]) {
    let s = r.dim();
    let count = (length / step).round() as usize + 1;
    let mut dir = vec![0.0; s];
    dir[0] = 1.0;
    for (o, &d) in out.iter_mut().zip(distances) {
        let mut origin = vec![0.0; s];
        origin[s - 1] = d;
        let values = phi_along_line(r, &origin, &dir, step, count);
        *o = count_sign_changes(&values) as f64 / ((count - 1) as f64 * step);
    }
}

fn normal(r: &WaveRealization, step: f64, edges: &[f64], lines: usize, out: &mut [f64]) {
    let s = r.dim();
    let top = *edges.last().expect("at least two edges");
    let count = (top / step).ceil() as usize + 1;
    let mut dir = vec![0.0; s];
    dir[s - 1] = 1.0;
    out.fill(0.0);
    for k in 0..lines {
        let mut origin = vec![0.0; s];
        origin[0] = k as f64 * LINE_SPACING;
        let mut values = phi_along_line(r, &origin, &dir, step, count);
        // Phi vanishes on the boundary itself; take the sign just inside
        let mut p = origin.clone();
        p[s - 1] = 1e-6 * step;
        values[0] = eval_phi(r, &p);
        let at = |t: f64| {
            let mut p = origin.clone();
            p[s - 1] = t;
            eval_phi(r, &p)
        };
        for z in zero_positions(&values, step, at) {
            let bin = edges.partition_point(|&e| e <= z);
            if bin >= 1 && bin < edges.len() {
                out[bin - 1] += 1.0;
            }
        }
    }
    for (o, w) in out.iter_mut().zip(edges.windows(2)) {
        *o /= lines as f64 * (w[1] - w[0]);
    }
}

/// Zeros per unit length of `Phi` along the lines in `lines`, with the
/// Gaussian prediction (bin-averaged for normal lines).
pub fn line_zero_density(config: &WaveEnsembleConfig, lines: &LineSet) -> Result<Vec<ZeroDensity>> {
    config.validate()?;
    let (s, step) = (config.dim, config.step);
    match lines {
        LineSet::Transverse { distances, length } => {
            if distances.is_empty() || distances.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
                return Err(domain("distances must be finite, >= 0 and nonempty"));
            }
            if !(length.is_finite() && *length >= 10.0 * step) {
                return Err(domain("line length must cover at least ten steps"));
            }
            let m = accumulate(config, distances.len(), |r, out| {
                transverse(r, step, distances, *length, out)
            });
            distances
                .iter()
                .zip(&m)
                .map(|(&d, m)| {
                    Ok(ZeroDensity {
                        distance: d,
                        width: 0.0,
                        estimate: m.into(),
                        predicted: transverse_zero_rate(s, d)?,
                    })
                })
                .collect()
        }
        LineSet::Normal { edges, lines } => {
            if edges.len() < 2 || edges[0] < 0.0 || edges.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(domain(
                    "bin edges must be >= 0 and strictly ascending, at least two",
                ));
            }
            if *lines == 0 {
                return Err(domain("need at least one line per realization"));
            }
            let m = accumulate(config, edges.len() - 1, |r, out| {
                normal(r, step, edges, *lines, out)
            });
            edges
                .windows(2)
                .zip(&m)
                .map(|(w, m)| {
                    let width = w[1] - w[0];
                    let failure = Cell::new(None);
                    let avg = integrate(
                        |t| {
                            normal_zero_rate(s, t).unwrap_or_else(|e| {
                                failure.set(Some(e));
                                0.0
                            })
                        },
                        w[0],
                        w[1],
                        1e-10,
                        200,
                    )?;
                    if let Some(e) = failure.take() {
                        return Err(e);
                    }
                    Ok(ZeroDensity {
                        distance: 0.5 * (w[0] + w[1]),
                        width,
                        estimate: m.into(),
                        predicted: avg.value / width,
                    })
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bisection_places_zeros() {
        let step = 0.1;
        let values: Vec<f64> = (0..60).map(|i| (i as f64 * step).sin() - 0.5).collect();
        let z = zero_positions(&values, step, |t| t.sin() - 0.5);
        assert_eq!(z.len(), 2);
        assert!(
            (z[0] - PI / 6.0).abs() < 1e-3 && (z[1] - 5.0 * PI / 6.0).abs() < 1e-3,
            "{z:?}"
        );
        assert_eq!(count_sign_changes(&values), 2);
    }

    #[test]
    fn transverse_rates() {
        let cfg = WaveEnsembleConfig {
            dim: 2,
            n_waves: 512,
            n_real: 400,
            seed: 21,
            step: 0.1,
        };
        let est = line_zero_density(
            &cfg,
            &LineSet::Transverse {
                distances: vec![0.5, 60.0],
                length: 200.0,
            },
        )
        .unwrap();
        for e in &est {
            assert!(e.estimate.z_score(e.predicted).abs() < 3.0, "{e:?}");
        }
        // the bulk rate sqrt(1/2) / pi, approached with a decaying oscillation
        let bulk = 0.5f64.sqrt() / PI;
        assert!((bulk - 0.22508).abs() < 1e-5);
        assert!((est[1].predicted - bulk).abs() < 3.0 * bulk / 60f64.sqrt());
    }

    #[test]
    fn normal_rates_vanish_at_the_boundary() {
        let cfg = WaveEnsembleConfig {
            dim: 3,
            n_waves: 512,
            n_real: 300,
            seed: 4,
            step: 0.1,
        };
        let edges: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
        let est = line_zero_density(&cfg, &LineSet::Normal { edges, lines: 4 }).unwrap();
        for e in &est {
            assert!(e.predicted.is_finite());
            assert!(e.estimate.z_score(e.predicted).abs() < 3.5, "{e:?}");
        }
        assert!(est[0].predicted < est[3].predicted);
    }
}
