//! Sample estimates of the two-point function and the boundary covariances.

use serde::Serialize;

use super::{accumulate, eval_phi, eval_u, Estimate, WaveEnsembleConfig};
use crate::error::{domain, Result};
use crate::rwave::{correlation, covariances_at, CovarianceSet};

/// Central-difference step for the field derivatives.
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub separation: f64,
    pub estimate: Estimate,
    pub predicted: f64,
}

/// `<u(0) u(d e_1)>` over the ensemble for each separation `d`, next to the
/// Gaussian prediction.
pub fn two_point_function(
    config: &WaveEnsembleConfig,
    separations: &[f64],
) -> Result<Vec<CorrelationEstimate>> {
    config.validate()?;
    if separations.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(domain("separations must be finite and >= 0"));
    }
    let s = config.dim;
    let moments = accumulate(config, separations.len(), |r, out| {
        let origin = vec![0.0; s];
        let u0 = eval_u(r, &origin);
        let mut p = origin;
        for (o, &d) in out.iter_mut().zip(separations) {
            p[0] = d;
            *o = u0 * eval_u(r, &p);
        }
    });
    separations
        .iter()
        .zip(&moments)
        .map(|(&d, m)| {
            Ok(CorrelationEstimate {
                separation: d,
                estimate: m.into(),
                predicted: correlation(s, d)?,
            })
        })
        .collect()
}

/// Sample covariances at one distance from the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceEstimate {
    pub distance: f64,
    pub field: Estimate,
    pub transverse: Estimate,
    pub normal: Estimate,
    pub cross: Estimate,
    pub predicted: CovarianceSet,
}

impl CovarianceEstimate {
    /// Largest componentwise distance from the prediction, in standard errors.
    pub fn max_z(&self) -> f64 {
        let p = &self.predicted;
        [
            self.field.z_score(p.field),
            self.transverse.z_score(p.transverse),
            self.normal.z_score(p.normal),
            self.cross.z_score(p.cross),
        ]
        .iter()
        .fold(0.0, |acc: f64, z| acc.max(z.abs()))
    }
}

/// `<Phi^2>`, `<(d_1 Phi)^2>`, `<(d_s Phi)^2>` and `<Phi d_s Phi>` at
/// distances `grid` along the normal through the origin, with derivatives
/// from central differences.
pub fn empirical_covariances(
    config: &WaveEnsembleConfig,
    grid: &[f64],
) -> Result<Vec<CovarianceEstimate>> {
    config.validate()?;
    if grid.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(domain(
            "distances from the boundary must be finite and >= 0",
        ));
    }
    let s = config.dim;
    let moments = accumulate(config, 4 * grid.len(), |r, out| {
        let mut p = vec![0.0; s];
        let h = FD_STEP;
        for (o, &rs) in out.chunks_mut(4).zip(grid) {
            p[s - 1] = rs;
            let phi = eval_phi(r, &p);
            p[0] = h;
            let right = eval_phi(r, &p);
            p[0] = -h;
            let left = eval_phi(r, &p);
            p[0] = 0.0;
            p[s - 1] = rs + h;
            let up = eval_phi(r, &p);
            p[s - 1] = rs - h;
            let down = eval_phi(r, &p);
            let d1 = (right - left) / (2.0 * h);
            let ds = (up - down) / (2.0 * h);
            o.copy_from_slice(&[phi * phi, d1 * d1, ds * ds, phi * ds]);
        }
    });
    grid.iter()
        .zip(moments.chunks(4))
        .map(|(&r, m)| {
            Ok(CovarianceEstimate {
                distance: r,
                field: (&m[0]).into(),
                transverse: (&m[1]).into(),
                normal: (&m[2]).into(),
                cross: (&m[3]).into(),
                predicted: covariances_at(s, r)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, n_real: usize, seed: u64) -> WaveEnsembleConfig {
        WaveEnsembleConfig {
            dim,
            n_waves: 512,
            n_real,
            seed,
            step: 0.1,
        }
    }

    #[test]
    fn unit_variance_and_planar_correlator() {
        let est = two_point_function(&cfg(2, 10_000, 3), &[0.0, 2.0]).unwrap();
        assert!((est[0].estimate.mean - 1.0).abs() < 0.03, "{:?}", est[0]);
        // J_0(2)
        assert!((est[1].predicted - 0.2239).abs() < 1e-4);
        assert!(
            est[1].estimate.z_score(est[1].predicted).abs() < 3.0,
            "{:?}",
            est[1]
        );
    }

    #[test]
    fn covariances_match_the_closed_forms() {
        let c = cfg(2, 4000, 5);
        let est = empirical_covariances(&c, &[0.05, 0.5, 1.0, 50.0]).unwrap();
        for e in &est {
            assert!(e.max_z() < 3.5, "{e:?}");
        }
        // far from the boundary: (1, 1/s, 1/s, 0)
        let far = &est[3];
        assert!((far.field.mean - 1.0).abs() < 0.05);
        assert!(far.field.z_score(1.0).abs() < 3.5 && far.normal.z_score(0.5).abs() < 3.5);
        // K > 0 near the boundary
        assert!(est[0].cross.mean > 0.0 && est[1].cross.mean > 0.0);
    }

    #[test]
    fn wave_count_does_not_matter() {
        let grid = [0.3, 1.5];
        let small = empirical_covariances(
            &WaveEnsembleConfig {
                n_waves: 256,
                ..cfg(2, 2000, 31)
            },
            &grid,
        )
        .unwrap();
        let large = empirical_covariances(
            &WaveEnsembleConfig {
                n_waves: 1024,
                ..cfg(2, 2000, 32)
            },
            &grid,
        )
        .unwrap();
        for (a, b) in small.iter().zip(&large) {
            for (x, y) in [
                (a.field, b.field),
                (a.transverse, b.transverse),
                (a.normal, b.normal),
                (a.cross, b.cross),
            ] {
                let combined = x.stderr.hypot(y.stderr);
                assert!((x.mean - y.mean).abs() < 3.0 * combined, "{x:?} vs {y:?}");
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_does_not_change_estimates() {
        let c = cfg(3, 70, 9);
        let a = empirical_covariances(&c, &[0.3, 2.0]).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| empirical_covariances(&c, &[0.3, 2.0]).unwrap());
        assert_eq!(a, b);
    }
}
