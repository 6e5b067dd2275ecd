//! The five experiments. Each returns the finished artifact as a string.

use std::f64::consts::PI;
use std::fmt::Write;

use clap::Args;
use nodalvol::cuboid::{
    asymptotic_mean, asymptotic_variance, limiting_pdf_closed, limiting_pdf_mc, mean_prefactor,
    window_sigmas, window_stats, CuboidSpec, LimitingCdf, SpectralWindow,
};
use nodalvol::mcwave::{
    empirical_covariances, line_zero_density, nodal_length_2d, two_point_function, ContourWindow,
    Estimate, LineSet, WaveEnsembleConfig,
};
use nodalvol::rwave::{
    boundary_ratio, c_osc, c_smooth, compute_i2, compute_is, density_asymptote, rho_bulk,
    ConstantOptions, DensityProfile,
};
use nodalvol::stats::{build_histogram, ks_distance, DensityHistogram};
use nodalvol::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::config::{num, CliError, RunArgs, RunInfo};

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Resolves `sides` against `dim`, defaulting to the incommensurate box.
fn resolve_sides(dim: usize, sides: &mut Option<Vec<f64>>) -> Result<CuboidSpec, CliError> {
    let spec = match sides.take() {
        Some(v) => {
            if v.len() != dim {
                return Err(config_error(format!(
                    "{} side lengths given for dimension {dim}",
                    v.len()
                )));
            }
            CuboidSpec::new(v)?
        }
        None => CuboidSpec::incommensurate(dim)?,
    };
    *sides = Some(spec.sides().to_vec());
    Ok(spec)
}

fn spec_of(sides: &Option<Vec<f64>>) -> Result<CuboidSpec, CliError> {
    Ok(CuboidSpec::new(sides.clone().unwrap_or_default())?)
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct CuboidStats {
    /// Dimension s.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Side lengths, comma separated (default 1, sqrt 2, sqrt 3, ...).
    #[arg(long, value_delimiter = ',')]
    pub sides: Option<Vec<f64>>,
    /// Window energies, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1e4, 1e5, 1e6, 1e7])]
    pub energies: Vec<f64>,
    /// Window constant g: windows are [E, E + g E^(1/4)].
    #[arg(long = "g-window", default_value_t = 200.0)]
    pub g_window: f64,
}

impl RunArgs for CuboidStats {
    fn normalize(&mut self) -> Result<(), CliError> {
        resolve_sides(self.dim, &mut self.sides)?;
        if self.energies.is_empty() {
            return Err(config_error("at least one energy is required"));
        }
        for &e in &self.energies {
            SpectralWindow::new(e, self.g_window)?;
        }
        Ok(())
    }
}

pub fn cuboid_stats(a: &CuboidStats, _seed: u64, info: &RunInfo) -> Result<String, CliError> {
    let spec = spec_of(&a.sides)?;
    let limit = mean_prefactor(a.dim)?;
    let var = asymptotic_variance(a.dim)?;
    let mut out = info.csv_header();
    out.push_str(
        "energy,g,count,mean,variance,stderr,predicted_mean,predicted_variance,limit_mean\n",
    );
    for &e in &a.energies {
        let w = SpectralWindow::new(e, a.g_window)?;
        let (lo, hi) = w.bounds();
        let predicted = asymptotic_mean(&spec, 0.5 * (lo + hi));
        let stats = match window_stats(&spec, &w) {
            Ok(st) => format!(
                "{},{},{},{}",
                st.count,
                num(st.mean),
                num(st.variance),
                num(st.stderr)
            ),
            Err(Error::EmptyWindow { .. }) => "0,,,".to_string(),
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(
            out,
            "{},{},{stats},{},{},{}",
            num(e),
            num(a.g_window),
            num(predicted),
            num(var),
            num(limit)
        );
    }
    Ok(out)
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct CuboidDist {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_delimiter = ',')]
    pub sides: Option<Vec<f64>>,
    /// Lower edge of the energy window.
    #[arg(long, default_value_t = 1e6)]
    pub energy: f64,
    /// Window constant g; chosen to hold at least --min-modes modes when absent.
    #[arg(long = "g-window")]
    pub g_window: Option<f64>,
    #[arg(long = "min-modes", default_value_t = 100_000)]
    pub min_modes: u64,
    /// Histogram bins over [1/pi - 0.02, sqrt(s)/pi + 0.02].
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    /// Samples of the limiting law, for dimensions without a closed form.
    #[arg(long = "limit-samples", default_value_t = 1_000_000)]
    pub limit_samples: usize,
}

impl RunArgs for CuboidDist {
    fn normalize(&mut self) -> Result<(), CliError> {
        let spec = resolve_sides(self.dim, &mut self.sides)?;
        if self.g_window.is_none() {
            self.g_window =
                Some(SpectralWindow::with_min_modes(&spec, self.energy, self.min_modes)?.g);
        }
        if self.bins == 0 {
            return Err(config_error("bins must be positive"));
        }
        Ok(())
    }
}

pub fn cuboid_dist(a: &CuboidDist, seed: u64, info: &RunInfo) -> Result<String, CliError> {
    let spec = spec_of(&a.sides)?;
    let w = SpectralWindow::new(a.energy, a.g_window.unwrap_or(1.0))?;
    let sigmas = window_sigmas(&spec, &w)?;
    let s = a.dim;
    let template =
        DensityHistogram::uniform(1.0 / PI - 0.02, (s as f64).sqrt() / PI + 0.02, a.bins)?;
    let hist = build_histogram(sigmas.iter().copied(), template.edges())?;
    let closed = matches!(s, 2 | 3);
    let (ks, limit) = if closed {
        let cdf = LimitingCdf::new(s)?;
        let ks = ks_distance(&sigmas, |x| cdf.eval(x))?;
        let limit = hist
            .centers()
            .iter()
            .map(|&c| limiting_pdf_closed(s, c))
            .collect::<Result<Vec<_>, _>>()?;
        (Some(ks), limit)
    } else {
        (
            None,
            limiting_pdf_mc(s, a.limit_samples, &template, seed)?.densities()?,
        )
    };
    let report = json!({
        "ks": ks,
        "count": sigmas.len(),
        "in_range": hist.count(),
        "out_of_range": hist.out_of_range(),
        "limit": if closed { "closed form" } else { "sampled" },
    });
    let mut out = info.csv_header();
    let _ = writeln!(out, "# report: {report}");
    out.push_str("sigma_lo,sigma_hi,center,density,limit_density\n");
    let edges = hist.edges();
    for (i, (d, l)) in hist.densities()?.iter().zip(&limit).enumerate() {
        let c = 0.5 * (edges[i] + edges[i + 1]);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(edges[i]),
            num(edges[i + 1]),
            num(c),
            num(*d),
            num(*l)
        );
    }
    Ok(out)
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct RwDensity {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Largest distance from the boundary, in units of the inverse wavenumber.
    #[arg(long = "r-max", default_value_t = 20.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
}

impl RunArgs for RwDensity {}

pub fn rw_density(a: &RwDensity, _seed: u64, info: &RunInfo) -> Result<String, CliError> {
    let profile = DensityProfile::uniform(a.dim, a.r_max, a.points)?;
    let mut out = info.csv_header();
    out.push_str("s,R_s,rho_over_bulk,asymptote,abs_diff\n");
    for (&r, &v) in profile.grid.iter().zip(&profile.values) {
        if r > 0.0 {
            let asym = density_asymptote(a.dim, r)?;
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                a.dim,
                num(r),
                num(v),
                num(asym),
                num((v - asym).abs())
            );
        } else {
            let _ = writeln!(out, "{},{},{},,", a.dim, num(r), num(v));
        }
    }
    Ok(out)
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct RwConstants {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
    pub dims: Vec<usize>,
    /// End of the numerical integration; the rest is added analytically.
    #[arg(long = "r-max", default_value_t = 200.0)]
    pub r_max: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

impl RunArgs for RwConstants {
    fn normalize(&mut self) -> Result<(), CliError> {
        if self.dims.is_empty() {
            return Err(config_error("at least one dimension is required"));
        }
        Ok(())
    }
}

pub fn rw_constants(a: &RwConstants, _seed: u64, info: &RunInfo) -> Result<String, CliError> {
    let opts = ConstantOptions {
        r_max: a.r_max,
        tolerance: a.tolerance,
    };
    let mut results = Vec::new();
    for &s in &a.dims {
        let mut m = Map::new();
        m.insert("s".into(), json!(s));
        m.insert("rho_bulk".into(), json!(rho_bulk(s)?));
        m.insert("boundary_ratio".into(), json!(boundary_ratio(s)?));
        m.insert("c_smooth".into(), json!(c_smooth(s)?));
        m.insert("c_osc".into(), json!(c_osc(s)?));
        let (key, c) = if s == 2 {
            ("I_2", compute_i2(&opts)?)
        } else {
            ("I_s", compute_is(s, &opts)?)
        };
        m.insert(key.into(), json!(c.value));
        m.insert("uncertainty".into(), json!(c.uncertainty));
        m.insert("r_max".into(), json!(c.r_max));
        m.insert("tolerance".into(), json!(c.tolerance));
        results.push(Value::Object(m));
    }
    let doc = json!({
        "tool": format!("nodalvol {}", env!("CARGO_PKG_VERSION")),
        "config": info.config,
        "results": results,
    });
    let mut out = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct McValidate {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Plane waves per realization.
    #[arg(long = "n-waves", default_value_t = 512)]
    pub n_waves: usize,
    #[arg(long = "n-real", default_value_t = 1000)]
    pub n_real: usize,
    /// Sampling step for zero counting and contouring.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    /// Distances from the boundary for covariances and zero rates
    /// (default 20 points from 0.1 to 9.6).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Separations for the two-point function (default 20 points in [0.1, 10]).
    #[arg(long, value_delimiter = ',')]
    pub separations: Option<Vec<f64>>,
    /// Length of the lines parallel to the boundary used for zero counting.
    #[arg(long = "line-length", default_value_t = 100.0)]
    pub line_length: f64,
    /// Also contour the nodal lines (two dimensions only) in strips of this height up to R = 20.
    #[arg(long)]
    pub contour_strip: Option<f64>,
}

impl RunArgs for McValidate {
    fn normalize(&mut self) -> Result<(), CliError> {
        self.grid
            .get_or_insert_with(|| (0..20).map(|i| 0.1 + 0.5 * i as f64).collect());
        self.separations
            .get_or_insert_with(|| (0..20).map(|i| 0.1 + i as f64 * 9.9 / 19.0).collect());
        if self.contour_strip.is_some() && self.dim != 2 {
            return Err(config_error(
                "contouring is only available in two dimensions",
            ));
        }
        Ok(())
    }
}

fn mc_row(
    out: &mut String,
    quantity: &str,
    r: f64,
    e: &Estimate,
    analytic: f64,
    cfg: &WaveEnsembleConfig,
) {
    let _ = writeln!(
        out,
        "{quantity},{},{},{},{},{},{},{},{},{}",
        cfg.dim,
        num(r),
        num(e.mean),
        num(e.stderr),
        num(analytic),
        num(e.z_score(analytic)),
        cfg.n_real,
        cfg.n_waves,
        cfg.seed
    );
}

pub fn mc_validate(a: &McValidate, seed: u64, info: &RunInfo) -> Result<String, CliError> {
    let cfg = WaveEnsembleConfig {
        dim: a.dim,
        n_waves: a.n_waves,
        n_real: a.n_real,
        seed,
        step: a.step,
    };
    cfg.validate()?;
    let grid = a.grid.clone().unwrap_or_default();
    let seps = a.separations.clone().unwrap_or_default();
    let mut out = info.csv_header();
    out.push_str("quantity,s,R,estimate,stderr,analytic,z,n_real,n_waves,seed\n");
    for c in two_point_function(&cfg, &seps)? {
        mc_row(
            &mut out,
            "two_point",
            c.separation,
            &c.estimate,
            c.predicted,
            &cfg,
        );
    }
    for c in empirical_covariances(&cfg, &grid)? {
        let p = c.predicted;
        mc_row(&mut out, "B", c.distance, &c.field, p.field, &cfg);
        mc_row(
            &mut out,
            "D_R1",
            c.distance,
            &c.transverse,
            p.transverse,
            &cfg,
        );
        mc_row(&mut out, "D_Rs", c.distance, &c.normal, p.normal, &cfg);
        mc_row(&mut out, "K", c.distance, &c.cross, p.cross, &cfg);
    }
    let lines = LineSet::Transverse {
        distances: grid,
        length: a.line_length,
    };
    for z in line_zero_density(&cfg, &lines)? {
        mc_row(
            &mut out,
            "transverse_zeros",
            z.distance,
            &z.estimate,
            z.predicted,
            &cfg,
        );
    }
    if let Some(strip) = a.contour_strip {
        let window = ContourWindow {
            r1: (0.0, 40.0),
            r2: (0.0, 20.0),
            strip,
        };
        for p in nodal_length_2d(&cfg, &window)? {
            mc_row(
                &mut out,
                "nodal_length",
                0.5 * (p.lo + p.hi),
                &p.estimate,
                p.predicted,
                &cfg,
            );
        }
    }
    Ok(out)
}
