//! Browser bindings for the nodalvol demo page.
//!
//! Every entry point returns plain numeric arrays so the page can draw them
//! on a canvas without any further processing.

use nodalvol::cuboid::{limiting_pdf_closed, window_sigmas, CuboidSpec, SpectralWindow};
use nodalvol::mcwave::{eval_phi, sample_realization, WaveEnsembleConfig};
use nodalvol::rwave::{density_asymptote, DensityProfile};
use nodalvol::stats::DensityHistogram;
use wasm_bindgen::prelude::*;

type Outcome<T> = Result<T, String>;

fn text(e: nodalvol::Error) -> String {
    e.to_string()
}

/// Nodal density of boundary-adapted random waves against distance from the
/// wall, normalized by its bulk value.
#[wasm_bindgen]
pub struct Profile {
    distances: Vec<f64>,
    ratios: Vec<f64>,
    asymptote: Vec<f64>,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn distances(&self) -> Vec<f64> {
        self.distances.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ratios(&self) -> Vec<f64> {
        self.ratios.clone()
    }

    /// Large-distance expansion; NaN where it is not meaningful.
    #[wasm_bindgen(getter)]
    pub fn asymptote(&self) -> Vec<f64> {
        self.asymptote.clone()
    }
}

#[wasm_bindgen]
pub fn density_profile(dim: usize, r_max: f64, points: usize) -> Outcome<Profile> {
    let profile = DensityProfile::uniform(dim, r_max, points).map_err(text)?;
    let asymptote = profile
        .grid
        .iter()
        .map(|&r| {
            if r < 1.0 {
                f64::NAN
            } else {
                density_asymptote(dim, r).unwrap_or(f64::NAN)
            }
        })
        .collect();
    Ok(Profile {
        distances: profile.grid,
        ratios: profile.values,
        asymptote,
    })
}

/// Histogram of the rescaled nodal volume over the modes of one spectral
/// window of the incommensurate cuboid, with the limiting density.
#[wasm_bindgen]
pub struct SigmaHistogram {
    edges: Vec<f64>,
    densities: Vec<f64>,
    limit: Vec<f64>,
    modes: usize,
}

#[wasm_bindgen]
impl SigmaHistogram {
    #[wasm_bindgen(getter)]
    pub fn edges(&self) -> Vec<f64> {
        self.edges.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn densities(&self) -> Vec<f64> {
        self.densities.clone()
    }

    /// Limiting density at the bin centres.
    #[wasm_bindgen(getter)]
    pub fn limit(&self) -> Vec<f64> {
        self.limit.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn modes(&self) -> usize {
        self.modes
    }
}

#[wasm_bindgen]
pub fn limiting_distribution(
    dim: usize,
    energy: f64,
    min_modes: u32,
    bins: usize,
) -> Outcome<SigmaHistogram> {
    if !(2..=3).contains(&dim) {
        return Err(format!("the demo covers dimensions 2 and 3, got {dim}"));
    }
    let spec = CuboidSpec::incommensurate(dim).map_err(text)?;
    let window =
        SpectralWindow::with_min_modes(&spec, energy, u64::from(min_modes.max(1))).map_err(text)?;
    let sigmas = window_sigmas(&spec, &window).map_err(text)?;
    let lo = 1.0 / std::f64::consts::PI;
    let hi = (dim as f64).sqrt() / std::f64::consts::PI;
    let mut hist = DensityHistogram::uniform(lo, hi, bins).map_err(text)?;
    for &x in &sigmas {
        hist.add(x);
    }
    let limit = hist
        .centers()
        .iter()
        .map(|&c| limiting_pdf_closed(dim, c))
        .collect::<nodalvol::Result<Vec<_>>>()
        .map_err(text)?;
    Ok(SigmaHistogram {
        edges: hist.edges().to_vec(),
        densities: hist.densities().map_err(text)?,
        limit,
        modes: sigmas.len(),
    })
}

/// Values of one planar boundary-adapted random wave on a `width x height`
/// raster covering `[0, x_max] x [0, y_max]`, row by row starting at the
/// wall. The nodal set is where the sign changes.
#[wasm_bindgen]
pub fn wave_field(
    n_waves: usize,
    seed: u64,
    x_max: f64,
    y_max: f64,
    width: usize,
    height: usize,
) -> Outcome<Vec<f64>> {
    if width < 2 || height < 2 || !(x_max > 0.0 && y_max > 0.0) {
        return Err("the raster needs at least 2 x 2 pixels and a positive extent".into());
    }
    let config = WaveEnsembleConfig {
        dim: 2,
        n_waves,
        n_real: 1,
        seed,
        ..WaveEnsembleConfig::default()
    };
    config.validate().map_err(text)?;
    let wave = sample_realization(&config, 0);
    let hx = x_max / (width - 1) as f64;
    let hy = y_max / (height - 1) as f64;
    let mut values = Vec::with_capacity(width * height);
    for j in 0..height {
        for i in 0..width {
            values.push(eval_phi(&wave, &[i as f64 * hx, j as f64 * hy]));
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_starts_at_the_boundary_ratio() {
        let p = density_profile(3, 20.0, 41).unwrap();
        let at_wall = nodalvol::rwave::boundary_ratio(3).unwrap();
        assert!((p.ratios()[0] - at_wall).abs() < 1e-9);
        assert!(p.asymptote()[0].is_nan());
        assert!((p.ratios()[40] - p.asymptote()[40]).abs() < 0.01);
    }

    #[test]
    fn histogram_is_a_density() {
        let h = limiting_distribution(2, 1e4, 2000, 20).unwrap();
        assert!(h.modes() >= 2000);
        let width = h.edges()[1] - h.edges()[0];
        let area: f64 = h.densities().iter().sum::<f64>() * width;
        assert!((area - 1.0).abs() < 1e-9);
        assert_eq!(h.limit().len(), 20);
        assert!(limiting_distribution(5, 1e4, 10, 4).is_err());
    }

    #[test]
    fn field_vanishes_on_the_wall() {
        let v = wave_field(64, 3, 10.0, 5.0, 11, 6).unwrap();
        assert_eq!(v.len(), 66);
        assert!(v[..11].iter().all(|x| x.abs() < 1e-12));
        assert!(v[11..].iter().any(|x| x.abs() > 1e-3));
        assert_eq!(v, wave_field(64, 3, 10.0, 5.0, 11, 6).unwrap());
        assert!(wave_field(64, 3, 10.0, 5.0, 1, 6).is_err());
    }
}
